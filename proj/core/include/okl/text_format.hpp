#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "okl/bundle.hpp"
#include "okl/nfunction.hpp"
#include "okl/operators.hpp"
#include "okl/weights.hpp"

// Plain-text formats. Blank lines and text after '#' are ignored everywhere;
// errors are reported as ParseError with 1-based line numbers.
namespace okl::text {

/// Shortest round-trippable rendering (%.17g).
std::string format_double(double x);

/// `power:r=<r>,c=<c>`, `exp_type`, `exp_conjugate`.
NFunction parse_nfunction_spec(std::string_view spec);

/// Header `nfunction tabulated tail_slope=<float>`, then `<t> <p>` lines.
NFunction read_tabulated_nfunction(std::istream& in);
void write_tabulated_nfunction(std::ostream& out, const NFunction& m);

/// `constant:<c>`, `trig:theta=..,a=..,b=..;theta=..`, `perturbed:<trig>|delta=..`.
WeightSequence parse_weight_spec(std::string_view spec, std::int64_t horizon = WeightSequence::kDefaultHorizon);
std::string format_weight_spec(const WeightSequence& w);

struct NamedSection {
  std::string name;
  Section section;
};

struct BundleFile {
  Bundle bundle;
  std::vector<NamedSection> sections;
};

/// `base: <l_1> ... <l_B>`, then `fiber <omega>: <mu_1> ...` for omega =
/// 0..B-1, then any number of `section <name> @<omega>: <x_1> ...` lines;
/// each named section must supply every omega exactly once.
BundleFile read_bundle_file(std::istream& in);
void write_bundle_file(std::ostream& out, const Bundle& bundle, const std::vector<NamedSection>& sections);

/// `operator @<omega>:` followed by n rows of n floats, optionally
/// `fixedpoint @<omega>: <h_1> ...`. Missing fixed points default to 1.
BundleOperator read_operator_file(std::istream& in, const Bundle& bundle);
void write_operator_file(std::ostream& out, const BundleOperator& t);

}  // namespace okl::text
