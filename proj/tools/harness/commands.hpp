#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "harness/config.hpp"
#include "okl/bundle.hpp"
#include "okl/nfunction.hpp"
#include "okl/operators.hpp"
#include "okl/text_format.hpp"
#include "okl/weights.hpp"

namespace okl::harness {

/// Everything a command needs, loaded or generated from one config.
struct Instance {
  NFunction m;
  Bundle bundle;
  std::vector<text::NamedSection> sections;
  BundleOperator op;
  WeightSequence w;
};

/// Random streams: sub_seed(seed, "bundle"), "sections", "operator".
Instance build_instance(const ExperimentConfig& c);

/// Generated bundle: weights uniform in [0.5, 1.5].
Bundle generate_bundle(int base_atoms, int fiber_atoms, std::uint64_t seed);
/// Sections `f` (uniform in [-1.5, 1.5]) and `g` (uniform in [0, 1]).
std::vector<text::NamedSection> generate_sections(const Bundle& b, std::uint64_t seed);
BundleOperator generate_operator(const Bundle& b, std::uint64_t seed, double mixing);

const Section& find_section(const Instance& inst, const std::string& name);

// Each command writes its CSV to `csv` and a short human report to `log`.
void run_conjugate(const ExperimentConfig& c, std::ostream& csv, std::ostream& log);
void run_norms(const ExperimentConfig& c, std::ostream& csv, std::ostream& log);
/// Returns whether the operator is admissible.
bool run_verify(const ExperimentConfig& c, std::ostream& csv, std::ostream& log);
/// `summary` gets one row per base atom with the o-limit verdicts.
void run_converge(const ExperimentConfig& c, std::ostream& csv, std::ostream& summary, std::ostream& log);

inline const std::vector<std::string> kCommands = {"conjugate", "norms", "verify", "converge", "suite"};

/// Runs a command, writing `<name>.csv` (and companions) into
/// c.output_dir. Returns the process exit status: 0 on success, 1 when the
/// suite has a failing criterion.
int run_command(const std::string& name, const ExperimentConfig& c, std::ostream& log);

}  // namespace okl::harness
