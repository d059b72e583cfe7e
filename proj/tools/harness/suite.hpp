#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "harness/config.hpp"

namespace okl::harness {

/// One measured quantity compared against its threshold.
struct Check {
  std::string name;
  double value = 0.0;
  std::string relation;  ///< "<=", ">=" or "=="
  double threshold = 0.0;
  bool passed = false;
};

struct CriterionResult {
  std::string id;
  std::string title;
  std::vector<Check> checks;
  bool passed = false;
};

struct Criterion {
  std::string id;
  std::string title;
  std::function<CriterionResult(const ExperimentConfig&)> run;
};

/// All acceptance criteria in order. Randomness for criterion <id> flows
/// from sub_seed(sub_seed(config.seed, "suite"), id).
const std::vector<Criterion>& criteria();

CriterionResult run_criterion(const std::string& id, const ExperimentConfig& c);

/// Runs every criterion, writes one CSV row per check to `csv` and one
/// PASS/FAIL line per criterion to `log`.
std::vector<CriterionResult> run_suite(const ExperimentConfig& c, std::ostream& csv, std::ostream& log);

std::string format_result_line(const CriterionResult& r);

}  // namespace okl::harness
