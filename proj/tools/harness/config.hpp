#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace okl::harness {

/// Experiment settings, read from `key = value` lines with '#' comments.
struct ExperimentConfig {
  /// `power:r=..,c=..`, `exp_type`, `exp_conjugate`, or `file:<path>` for a
  /// tabulated N-function file.
  std::string nfunction = "power:r=2,c=0.5";

  /// Bundle file; empty means generate from base_atoms / fiber_atoms.
  std::string bundle_file;
  int base_atoms = 2;
  int fiber_atoms = 8;

  /// `generate` or `file:<path>`.
  std::string operator_source = "generate";
  double mixing = 0.5;

  std::string weights = "constant:1";
  std::string section = "f";  ///< section used by `converge`

  std::int64_t n_max = 10000;
  std::int64_t n_dense = 64;
  double tol = 1e-3;
  bool include_k0 = false;
  bool emit_values = false;  ///< adds the A_n_value column to converge.csv

  int samples = 1000;  ///< condition (i) samples for `verify`
  int grid_points = 100;
  double grid_max = 4.0;

  std::uint64_t seed = 20240917;
  std::string output_dir = "okl-out";

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Throws okl::ParseError (1-based line) on unknown keys, duplicates,
/// malformed values or values outside the documented ranges.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_string(std::string_view text);
ExperimentConfig load_config(const std::string& path);

/// Every key in a fixed order; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig& c);

/// Range checks shared by the parser and the --seed override path.
void validate(const ExperimentConfig& c);

}  // namespace okl::harness
