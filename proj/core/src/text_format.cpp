#include "okl/text_format.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "okl/errors.hpp"

namespace okl::text {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string_view strip_comment(std::string_view s) {
  const auto h = s.find('#');
  return h == std::string_view::npos ? s : s.substr(0, h);
}

std::optional<double> to_double(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

double need_double(std::string_view s, int line, std::string_view what) {
  const auto v = to_double(s);
  if (!v) throw ParseError(line, "expected a number for " + std::string(what) + ", got '" + std::string(s) + "'");
  return *v;
}

std::vector<double> numbers(std::string_view s, int line) {
  std::vector<double> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    if (i >= s.size()) break;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    out.push_back(need_double(s.substr(i, j - i), line, "value"));
    i = j;
  }
  return out;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

// key=value,key=value
std::map<std::string, double> key_values(std::string_view s, int line) {
  std::map<std::string, double> kv;
  for (auto part : split(s, ',')) {
    part = trim(part);
    if (part.empty()) continue;
    const auto eq = part.find('=');
    if (eq == std::string_view::npos) throw ParseError(line, "expected key=value in '" + std::string(part) + "'");
    const std::string key(trim(part.substr(0, eq)));
    if (kv.count(key)) throw ParseError(line, "duplicate key '" + key + "'");
    kv[key] = need_double(part.substr(eq + 1), line, key);
  }
  return kv;
}

struct LineReader {
  explicit LineReader(std::istream& s) : in(s) {}
  std::istream& in;
  int number = 0;
  std::string raw;
  // Next non-empty line with comments stripped; false at end of input.
  bool next(std::string_view& out) {
    while (std::getline(in, raw)) {
      ++number;
      out = trim(strip_comment(raw));
      if (!out.empty()) return true;
    }
    return false;
  }
};

// Parses "@<omega>" and returns omega.
std::size_t omega_tag(std::string_view s, int line) {
  s = trim(s);
  if (s.empty() || s.front() != '@') throw ParseError(line, "expected @<omega>");
  s.remove_prefix(1);
  std::size_t w = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), w);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw ParseError(line, "bad base-atom index");
  return w;
}

TrigPolynomial parse_trig(std::string_view s, int line) {
  std::vector<TrigTerm> terms;
  for (auto part : split(s, ';')) {
    part = trim(part);
    if (part.empty()) continue;
    auto kv = key_values(part, line);
    if (!kv.count("theta")) throw ParseError(line, "trig term needs theta=");
    for (const auto& [k, v] : kv)
      if (k != "theta" && k != "a" && k != "b") throw ParseError(line, "unknown trig key '" + k + "'");
    terms.push_back({kv["theta"], kv.count("a") ? kv["a"] : 0.0, kv.count("b") ? kv["b"] : 0.0});
  }
  if (terms.empty()) throw ParseError(line, "trig weight needs at least one term");
  try {
    return TrigPolynomial(std::move(terms));
  } catch (const DomainError& e) {
    throw ParseError(line, e.what());
  }
}

std::string format_trig(const TrigPolynomial& p) {
  std::string s;
  for (std::size_t i = 0; i < p.terms().size(); ++i) {
    const auto& t = p.terms()[i];
    if (i) s += ';';
    s += "theta=" + format_double(t.theta) + ",a=" + format_double(t.a) + ",b=" + format_double(t.b);
  }
  return s;
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

NFunction parse_nfunction_spec(std::string_view spec) {
  spec = trim(spec);
  if (spec == "exp_type") return NFunction::exp_type();
  if (spec == "exp_conjugate") return NFunction::exp_conjugate();
  if (spec.substr(0, 6) == "power:") {
    auto kv = key_values(spec.substr(6), 1);
    for (const auto& [k, v] : kv)
      if (k != "r" && k != "c") throw ParseError(1, "unknown power key '" + k + "'");
    if (!kv.count("r")) throw ParseError(1, "power N-function needs r=");
    try {
      return NFunction::power(kv["r"], kv.count("c") ? kv["c"] : 1.0);
    } catch (const UsageError& e) {
      throw ParseError(1, e.what());
    }
  }
  throw ParseError(1, "unknown N-function spec '" + std::string(spec) + "'");
}

NFunction read_tabulated_nfunction(std::istream& in) {
  LineReader r(in);
  std::string_view line;
  if (!r.next(line)) throw ParseError(r.number + 1, "missing 'nfunction tabulated' header");
  const std::string_view prefix = "nfunction tabulated";
  if (line.substr(0, prefix.size()) != prefix) throw ParseError(r.number, "expected 'nfunction tabulated tail_slope=<float>'");
  auto kv = key_values(trim(line.substr(prefix.size())), r.number);
  if (!kv.count("tail_slope") || kv.size() != 1) throw ParseError(r.number, "header needs exactly tail_slope=<float>");
  std::vector<DensityKnot> knots;
  while (r.next(line)) {
    const auto v = numbers(line, r.number);
    if (v.size() != 2) throw ParseError(r.number, "expected '<t> <p>'");
    knots.push_back({v[0], v[1]});
  }
  try {
    return NFunction::tabulated(std::move(knots), kv["tail_slope"]);
  } catch (const UsageError& e) {
    throw ParseError(r.number, e.what());
  }
}

void write_tabulated_nfunction(std::ostream& out, const NFunction& m) {
  if (m.kind() != NFunctionKind::kTabulated) throw UsageError("only tabulated N-functions have a table form");
  out << "nfunction tabulated tail_slope=" << format_double(m.tail_slope()) << '\n';
  for (const auto& k : m.knots()) out << format_double(k.t) << ' ' << format_double(k.p) << '\n';
}

WeightSequence parse_weight_spec(std::string_view spec, std::int64_t horizon) {
  spec = trim(spec);
  if (spec.substr(0, 9) == "constant:") {
    return WeightSequence::constant(need_double(spec.substr(9), 1, "constant weight"), horizon);
  }
  if (spec.substr(0, 5) == "trig:") return WeightSequence::trig(parse_trig(spec.substr(5), 1), horizon);
  if (spec.substr(0, 10) == "perturbed:") {
    const auto body = spec.substr(10);
    const auto bar = body.rfind('|');
    if (bar == std::string_view::npos) throw ParseError(1, "perturbed weight needs '|delta=<float>'");
    auto kv = key_values(body.substr(bar + 1), 1);
    if (!kv.count("delta") || kv.size() != 1) throw ParseError(1, "perturbed weight needs exactly delta=");
    auto inner = trim(body.substr(0, bar));
    if (inner.substr(0, 5) == "trig:") inner.remove_prefix(5);
    return WeightSequence::perturbed(parse_trig(inner, 1), kv["delta"], horizon);
  }
  throw ParseError(1, "unknown weight spec '" + std::string(spec) + "'");
}

std::string format_weight_spec(const WeightSequence& w) {
  switch (w.kind()) {
    case WeightKind::kConstant:
      return "constant:" + format_double(w.constant_value());
    case WeightKind::kTrig:
      return "trig:" + format_trig(w.polynomial());
    case WeightKind::kPerturbed:
      return "perturbed:trig:" + format_trig(w.polynomial()) + "|delta=" + format_double(w.delta());
  }
  return {};
}

BundleFile read_bundle_file(std::istream& in) {
  LineReader r(in);
  std::string_view line;
  if (!r.next(line) || line.substr(0, 5) != "base:") throw ParseError(r.number, "expected 'base: <weights>'");
  std::vector<double> base_weights = numbers(line.substr(5), r.number);
  if (base_weights.empty()) throw ParseError(r.number, "base needs at least one weight");
  const std::size_t b = base_weights.size();

  std::vector<std::optional<Fiber>> fibers(b);
  std::vector<std::string> order;
  std::map<std::string, std::vector<std::optional<FiberVector>>> parts;
  std::map<std::string, int> first_line;

  while (r.next(line)) {
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) throw ParseError(r.number, "expected ':'");
    const auto head = trim(line.substr(0, colon));
    const auto body = line.substr(colon + 1);
    if (head.substr(0, 6) == "fiber ") {
      std::size_t w = 0;
      const auto id = trim(head.substr(6));
      const auto [ptr, ec] = std::from_chars(id.data(), id.data() + id.size(), w);
      if (ec != std::errc() || ptr != id.data() + id.size()) throw ParseError(r.number, "bad fiber id");
      if (w >= b) throw ParseError(r.number, "fiber id out of range");
      if (fibers[w]) throw ParseError(r.number, "duplicate fiber " + std::to_string(w));
      try {
        fibers[w].emplace(numbers(body, r.number));
      } catch (const UsageError& e) {
        if (dynamic_cast<const ParseError*>(&e)) throw;
        throw ParseError(r.number, e.what());
      }
    } else if (head.substr(0, 8) == "section ") {
      const auto rest = trim(head.substr(8));
      const auto at = rest.find('@');
      if (at == std::string_view::npos) throw ParseError(r.number, "section needs @<omega>");
      const std::string name(trim(rest.substr(0, at)));
      if (name.empty()) throw ParseError(r.number, "section needs a name");
      const std::size_t w = omega_tag(rest.substr(at), r.number);
      if (w >= b) throw ParseError(r.number, "section base index out of range");
      if (!fibers[w]) throw ParseError(r.number, "section refers to fiber " + std::to_string(w) + " before it is defined");
      auto& slot = parts[name];
      if (slot.empty()) {
        slot.resize(b);
        order.push_back(name);
        first_line[name] = r.number;
      }
      if (slot[w]) throw ParseError(r.number, "duplicate part @" + std::to_string(w) + " of section " + name);
      auto values = numbers(body, r.number);
      if (values.size() != fibers[w]->size())
        throw ParseError(r.number, "section part has " + std::to_string(values.size()) + " values, fiber has " +
                                       std::to_string(fibers[w]->size()));
      try {
        slot[w].emplace(std::move(values));
      } catch (const DomainError& e) {
        throw ParseError(r.number, e.what());
      }
    } else {
      throw ParseError(r.number, "unknown record '" + std::string(head) + "'");
    }
  }

  std::vector<Fiber> fs;
  for (std::size_t w = 0; w < b; ++w) {
    if (!fibers[w]) throw ParseError(r.number, "missing fiber " + std::to_string(w));
    fs.push_back(*fibers[w]);
  }
  BundleFile out{Bundle(BaseSpace(std::move(base_weights)), std::move(fs)), {}};
  for (const auto& name : order) {
    std::vector<FiberVector> ps;
    for (std::size_t w = 0; w < b; ++w) {
      if (!parts[name][w])
        throw ParseError(first_line[name], "section " + name + " is missing part @" + std::to_string(w));
      ps.push_back(*parts[name][w]);
    }
    out.sections.push_back({name, Section(std::move(ps))});
  }
  return out;
}

void write_bundle_file(std::ostream& out, const Bundle& bundle, const std::vector<NamedSection>& sections) {
  out << "base:";
  for (double v : bundle.base().weights()) out << ' ' << format_double(v);
  out << '\n';
  for (std::size_t w = 0; w < bundle.base_size(); ++w) {
    out << "fiber " << w << ':';
    for (double v : bundle.fiber(w).weights()) out << ' ' << format_double(v);
    out << '\n';
  }
  for (const auto& s : sections) {
    require_bound(bundle, s.section, "write_bundle_file");
    for (std::size_t w = 0; w < s.section.size(); ++w) {
      out << "section " << s.name << " @" << w << ':';
      for (double v : s.section[w].values()) out << ' ' << format_double(v);
      out << '\n';
    }
  }
}

BundleOperator read_operator_file(std::istream& in, const Bundle& bundle) {
  const std::size_t b = bundle.base_size();
  std::vector<std::optional<Eigen::MatrixXd>> mats(b);
  std::vector<std::optional<FiberVector>> fixed(b);
  LineReader r(in);
  std::string_view line;
  while (r.next(line)) {
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) throw ParseError(r.number, "expected ':'");
    const auto head = trim(line.substr(0, colon));
    const auto body = trim(line.substr(colon + 1));
    if (head.substr(0, 9) == "operator ") {
      const std::size_t w = omega_tag(head.substr(9), r.number);
      if (w >= b) throw ParseError(r.number, "operator base index out of range");
      if (mats[w]) throw ParseError(r.number, "duplicate operator @" + std::to_string(w));
      if (!body.empty()) throw ParseError(r.number, "matrix rows go on the following lines");
      const auto n = static_cast<Eigen::Index>(bundle.fiber(w).size());
      Eigen::MatrixXd m(n, n);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (!r.next(line)) throw ParseError(r.number + 1, "operator @" + std::to_string(w) + " has too few rows");
        const auto row = numbers(line, r.number);
        if (static_cast<Eigen::Index>(row.size()) != n)
          throw ParseError(r.number, "operator row needs " + std::to_string(n) + " entries");
        for (Eigen::Index i = 0; i < n; ++i) m(j, i) = row[static_cast<std::size_t>(i)];
      }
      mats[w] = std::move(m);
    } else if (head.substr(0, 11) == "fixedpoint ") {
      const std::size_t w = omega_tag(head.substr(11), r.number);
      if (w >= b) throw ParseError(r.number, "fixedpoint base index out of range");
      if (fixed[w]) throw ParseError(r.number, "duplicate fixedpoint @" + std::to_string(w));
      auto values = numbers(body, r.number);
      if (values.size() != bundle.fiber(w).size()) throw ParseError(r.number, "fixedpoint size differs from its fiber");
      fixed[w].emplace(std::move(values));
    } else {
      throw ParseError(r.number, "unknown record '" + std::string(head) + "'");
    }
  }
  std::vector<FiberOperator> parts;
  std::vector<FiberVector> h;
  for (std::size_t w = 0; w < b; ++w) {
    if (!mats[w]) throw ParseError(r.number, "missing operator @" + std::to_string(w));
    try {
      parts.emplace_back(*mats[w]);
    } catch (const UsageError& e) {
      throw ParseError(r.number, "operator @" + std::to_string(w) + ": " + e.what());
    }
    h.push_back(fixed[w] ? *fixed[w] : FiberVector::constant(bundle.fiber(w).size(), 1.0));
  }
  try {
    return BundleOperator(std::move(parts), Section(std::move(h)));
  } catch (const UsageError& e) {
    throw ParseError(r.number, e.what());
  }
}

void write_operator_file(std::ostream& out, const BundleOperator& t) {
  for (std::size_t w = 0; w < t.base_size(); ++w) {
    const auto& m = t.fiber_operator(w).matrix();
    out << "operator @" << w << ":\n";
    for (Eigen::Index j = 0; j < m.rows(); ++j) {
      for (Eigen::Index i = 0; i < m.cols(); ++i) out << (i ? " " : "") << format_double(m(j, i));
      out << '\n';
    }
    out << "fixedpoint @" << w << ':';
    for (double v : t.fixed_point()[w].values()) out << ' ' << format_double(v);
    out << '\n';
  }
}

}  // namespace okl::text
