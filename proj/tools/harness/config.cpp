#include "harness/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "okl/errors.hpp"
#include "okl/text_format.hpp"

namespace okl::harness {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

template <class Int>
Int to_int(std::string_view v) {
  Int out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty())
    throw std::invalid_argument("expected an integer, got '" + std::string(v) + "'");
  return out;
}

double to_real(std::string_view v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty())
    throw std::invalid_argument("expected a number, got '" + std::string(v) + "'");
  return out;
}

bool to_bool(std::string_view v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw std::invalid_argument("expected true or false, got '" + std::string(v) + "'");
}

template <class T>
void in_range(const char* key, T v, T lo, T hi) {
  if (!(v >= lo && v <= hi)) {
    std::ostringstream os;
    os << key << " must lie in [" << lo << ", " << hi << "], got " << v;
    throw std::invalid_argument(os.str());
  }
}

void check_nfunction(const std::string& s) {
  if (s.rfind("file:", 0) == 0) {
    if (s.size() == 5) throw std::invalid_argument("nfunction file path is empty");
    return;
  }
  try {
    (void)text::parse_nfunction_spec(s);
  } catch (const UsageError& e) {
    throw std::invalid_argument(std::string("nfunction: ") + e.what());
  }
}

void check_weights(const std::string& s) {
  try {
    (void)text::parse_weight_spec(s, 1);
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("weights: ") + e.what());
  }
}

void check_operator(const std::string& s) {
  if (s == "generate") return;
  if (s.rfind("file:", 0) == 0 && s.size() > 5) return;
  throw std::invalid_argument("operator must be 'generate' or 'file:<path>'");
}

using Setter = std::function<void(ExperimentConfig&, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"nfunction", [](auto& c, auto v) { c.nfunction = std::string(v); check_nfunction(c.nfunction); }},
      {"bundle_file", [](auto& c, auto v) { c.bundle_file = std::string(v); }},
      {"base_atoms", [](auto& c, auto v) { c.base_atoms = to_int<int>(v); in_range("base_atoms", c.base_atoms, 1, 16); }},
      {"fiber_atoms", [](auto& c, auto v) { c.fiber_atoms = to_int<int>(v); in_range("fiber_atoms", c.fiber_atoms, 1, 64); }},
      {"operator", [](auto& c, auto v) { c.operator_source = std::string(v); check_operator(c.operator_source); }},
      {"mixing", [](auto& c, auto v) {
         c.mixing = to_real(v);
         if (!(c.mixing > 0.0 && c.mixing <= 1.0)) throw std::invalid_argument("mixing must lie in (0, 1]");
       }},
      {"weights", [](auto& c, auto v) { c.weights = std::string(v); check_weights(c.weights); }},
      {"section", [](auto& c, auto v) {
         if (v.empty()) throw std::invalid_argument("section name is empty");
         c.section = std::string(v);
       }},
      {"n_max", [](auto& c, auto v) { c.n_max = to_int<std::int64_t>(v); in_range<std::int64_t>("n_max", c.n_max, 2, 1000000); }},
      {"n_dense", [](auto& c, auto v) { c.n_dense = to_int<std::int64_t>(v); in_range<std::int64_t>("n_dense", c.n_dense, 1, 1000000); }},
      {"tol", [](auto& c, auto v) {
         c.tol = to_real(v);
         if (!(c.tol > 0.0)) throw std::invalid_argument("tol must be positive");
       }},
      {"include_k0", [](auto& c, auto v) { c.include_k0 = to_bool(v); }},
      {"emit_values", [](auto& c, auto v) { c.emit_values = to_bool(v); }},
      {"samples", [](auto& c, auto v) { c.samples = to_int<int>(v); in_range("samples", c.samples, 1, 1000000); }},
      {"grid_points", [](auto& c, auto v) { c.grid_points = to_int<int>(v); in_range("grid_points", c.grid_points, 1, 1000000); }},
      {"grid_max", [](auto& c, auto v) {
         c.grid_max = to_real(v);
         if (!(c.grid_max > 0.0 && c.grid_max < 1e6)) throw std::invalid_argument("grid_max must lie in (0, 1e6)");
       }},
      {"seed", [](auto& c, auto v) { c.seed = to_int<std::uint64_t>(v); }},
      {"output_dir", [](auto& c, auto v) {
         if (v.empty()) throw std::invalid_argument("output_dir is empty");
         c.output_dir = std::string(v);
       }},
  };
  return table;
}

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig c;
  std::set<std::string, std::less<>> seen;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view s = raw;
    if (const auto h = s.find('#'); h != std::string_view::npos) s = s.substr(0, h);
    s = trim(s);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) throw ParseError(line, "expected 'key = value'");
    const auto key = trim(s.substr(0, eq));
    const auto value = trim(s.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) throw ParseError(line, "unknown key '" + std::string(key) + "'");
    if (!seen.emplace(key).second) throw ParseError(line, "duplicate key '" + std::string(key) + "'");
    try {
      it->second(c, value);
    } catch (const std::invalid_argument& e) {
      throw ParseError(line, e.what());
    }
  }
  if (c.n_dense > c.n_max) c.n_dense = c.n_max;
  return c;
}

ExperimentConfig parse_config_string(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_config(in);
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config '" + path + "'");
  return parse_config(in);
}

std::string serialize_config(const ExperimentConfig& c) {
  const auto b = [](bool v) { return v ? "true" : "false"; };
  std::ostringstream os;
  os << "nfunction = " << c.nfunction << '\n'
     << "bundle_file = " << c.bundle_file << '\n'
     << "base_atoms = " << c.base_atoms << '\n'
     << "fiber_atoms = " << c.fiber_atoms << '\n'
     << "operator = " << c.operator_source << '\n'
     << "mixing = " << text::format_double(c.mixing) << '\n'
     << "weights = " << c.weights << '\n'
     << "section = " << c.section << '\n'
     << "n_max = " << c.n_max << '\n'
     << "n_dense = " << c.n_dense << '\n'
     << "tol = " << text::format_double(c.tol) << '\n'
     << "include_k0 = " << b(c.include_k0) << '\n'
     << "emit_values = " << b(c.emit_values) << '\n'
     << "samples = " << c.samples << '\n'
     << "grid_points = " << c.grid_points << '\n'
     << "grid_max = " << text::format_double(c.grid_max) << '\n'
     << "seed = " << c.seed << '\n'
     << "output_dir = " << c.output_dir << '\n';
  return os.str();
}

void validate(const ExperimentConfig& c) {
  try {
    parse_config_string(serialize_config(c));
  } catch (const ParseError& e) {
    throw UsageError(std::string("invalid configuration: ") + e.what());
  }
}

}  // namespace okl::harness
