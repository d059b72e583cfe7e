// Acceptance runner: one [PASS]/[FAIL] line per criterion.
//
//   acceptance_test                 all criteria
//   acceptance_test --criterion 7b  one criterion
//
// Exit status is 0 only if every selected criterion passes.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "harness/config.hpp"
#include "harness/suite.hpp"

namespace {

namespace fs = std::filesystem;
using okl::harness::Check;
using okl::harness::CriterionResult;

constexpr double kSubRunBudget = 15.0;
constexpr double kSuiteBudget = 120.0;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Check make_check(std::string name, double value, const char* rel, double threshold) {
  const bool ok = std::string(rel) == "<=" ? value <= threshold : value >= threshold;
  return Check{std::move(name), value, rel, threshold, ok};
}

// Runs `okl suite` into `dir`; returns the wall time, or a negative value if
// the process did not exit normally.
double run_cli_suite(const fs::path& dir) {
  const std::string cmd = std::string("\"") + OKL_CLI_PATH + "\" suite --quiet --config \"" + OKL_DEFAULT_CONFIG +
                          "\" --out \"" + dir.string() + "\" >/dev/null 2>&1";
  const auto t0 = std::chrono::steady_clock::now();
  const int status = std::system(cmd.c_str());
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return WIFEXITED(status) ? secs : -1.0;
}

// Criterion 10 also goes through the CLI: two `okl suite` runs
// must write identical bytes, each inside the total budget.
void add_cli_determinism(CriterionResult& r) {
  const fs::path base = fs::temp_directory_path() / ("okl_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(base);
  const double t1 = run_cli_suite(base / "a");
  const double t2 = run_cli_suite(base / "b");
  const std::string a = slurp(base / "a" / "suite.csv");
  const std::string b = slurp(base / "b" / "suite.csv");
  r.checks.push_back(make_check("cli_suite_csv_bytes_differ", (a.empty() || a != b) ? 1.0 : 0.0, "<=", 0.0));
  r.checks.push_back(make_check("cli_suite_seconds_run1", t1 < 0 ? 1e9 : t1, "<=", kSuiteBudget));
  r.checks.push_back(make_check("cli_suite_seconds_run2", t2 < 0 ? 1e9 : t2, "<=", kSuiteBudget));
  fs::remove_all(base);
}

CriterionResult run_one(const okl::harness::Criterion& c, const okl::harness::ExperimentConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  CriterionResult r = c.run(cfg);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (c.id.rfind('7', 0) == 0) r.checks.push_back(make_check("sub_run_seconds", secs, "<=", kSubRunBudget));
  if (c.id == "10") add_cli_determinism(r);
  r.passed = true;
  for (const auto& ch : r.checks) r.passed = r.passed && ch.passed;
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> selected;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      selected.emplace_back(argv[++i]);
    } else {
      std::cerr << "usage: acceptance_test [--criterion <id>]...\n";
      return 2;
    }
  }

  okl::harness::ExperimentConfig cfg;
  try {
    cfg = okl::harness::load_config(OKL_DEFAULT_CONFIG);
  } catch (const std::exception& e) {
    std::cerr << "acceptance_test: " << e.what() << '\n';
    return 2;
  }

  bool all = true;
  bool any = false;
  for (const auto& c : okl::harness::criteria()) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) continue;
    any = true;
    CriterionResult r;
    try {
      r = run_one(c, cfg);
    } catch (const std::exception& e) {
      std::cout << "[FAIL] " << c.id << ' ' << c.title << "; threw: " << e.what() << '\n';
      all = false;
      continue;
    }
    std::cout << okl::harness::format_result_line(r) << '\n';
    all = all && r.passed;
  }
  if (!any) {
    std::cerr << "acceptance_test: no criterion matched\n";
    return 2;
  }
  return all ? 0 : 1;
}
