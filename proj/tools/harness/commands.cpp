#include "harness/commands.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

#include "harness/csv.hpp"
#include "harness/suite.hpp"
#include "okl/ergodic.hpp"
#include "okl/errors.hpp"
#include "okl/orlicz.hpp"
#include "okl/rng.hpp"

namespace okl::harness {
namespace {

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  return in;
}

NFunction load_nfunction(const std::string& spec) {
  if (spec.rfind("file:", 0) == 0) {
    auto in = open_input(spec.substr(5));
    return text::read_tabulated_nfunction(in);
  }
  return text::parse_nfunction_spec(spec);
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

}  // namespace

Bundle generate_bundle(int base_atoms, int fiber_atoms, std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> u(0.5, 1.5);
  std::vector<double> base(static_cast<std::size_t>(base_atoms));
  for (auto& v : base) v = u(rng);
  std::vector<Fiber> fibers;
  for (int w = 0; w < base_atoms; ++w) {
    std::vector<double> mu(static_cast<std::size_t>(fiber_atoms));
    for (auto& v : mu) v = u(rng);
    fibers.emplace_back(std::move(mu));
  }
  return Bundle(BaseSpace(std::move(base)), std::move(fibers));
}

std::vector<text::NamedSection> generate_sections(const Bundle& b, std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> signed_u(-1.5, 1.5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<FiberVector> f;
  std::vector<FiberVector> g;
  for (const auto& fiber : b.fibers()) {
    std::vector<double> fv(fiber.size());
    for (auto& v : fv) v = signed_u(rng);
    f.emplace_back(std::move(fv));
  }
  for (const auto& fiber : b.fibers()) {
    std::vector<double> gv(fiber.size());
    for (auto& v : gv) v = unit(rng);
    g.emplace_back(std::move(gv));
  }
  return {{"f", Section(std::move(f))}, {"g", Section(std::move(g))}};
}

BundleOperator generate_operator(const Bundle& b, std::uint64_t seed, double mixing) {
  std::vector<FiberOperator> parts;
  for (std::size_t w = 0; w < b.base_size(); ++w)
    parts.push_back(generate_admissible(b.fiber(w), sub_seed(seed, w), mixing));
  return BundleOperator(std::move(parts));
}

Instance build_instance(const ExperimentConfig& c) {
  NFunction m = load_nfunction(c.nfunction);
  Bundle bundle = generate_bundle(c.base_atoms, c.fiber_atoms, sub_seed(c.seed, "bundle"));
  std::vector<text::NamedSection> sections;
  if (!c.bundle_file.empty()) {
    auto in = open_input(c.bundle_file);
    auto file = text::read_bundle_file(in);
    bundle = std::move(file.bundle);
    sections = std::move(file.sections);
  } else {
    sections = generate_sections(bundle, sub_seed(c.seed, "sections"));
  }
  BundleOperator op = [&] {
    if (c.operator_source == "generate") return generate_operator(bundle, sub_seed(c.seed, "operator"), c.mixing);
    auto in = open_input(c.operator_source.substr(5));
    return text::read_operator_file(in, bundle);
  }();
  WeightSequence w = text::parse_weight_spec(c.weights, std::max<std::int64_t>(c.n_max, 1));
  return Instance{std::move(m), std::move(bundle), std::move(sections), std::move(op), std::move(w)};
}

const Section& find_section(const Instance& inst, const std::string& name) {
  for (const auto& s : inst.sections)
    if (s.name == name) return s.section;
  throw UsageError("no section named '" + name + "'");
}

void run_conjugate(const ExperimentConfig& c, std::ostream& csv, std::ostream& log) {
  const NFunction m = load_nfunction(c.nfunction);
  const NFunction n = m.complement();
  CsvWriter out(csv, {"t", "M", "p", "N", "q", "young_gap"});
  double worst = 0.0;
  for (int j = 0; j <= c.grid_points; ++j) {
    const double t = c.grid_max * j / c.grid_points;
    const double p = m.density(t);
    const double gap = young_gap(m, n, t, p);
    worst = std::max(worst, std::fabs(gap));
    out.row({t, m(t), p, n(t), n.density(t), gap});
  }
  log << "conjugate: M = " << m.describe() << ", N = " << n.describe() << ", max |young_gap at v=p(u)| = "
      << text::format_double(worst) << '\n';
}

void run_norms(const ExperimentConfig& c, std::ostream& csv, std::ostream& log) {
  const Instance inst = build_instance(c);
  const NFunction n = inst.m.complement();
  CsvWriter out(csv, {"section", "omega", "norm_kind", "value", "witness_modular", "iterations"});
  for (const auto& s : inst.sections) {
    require_bound(inst.bundle, s.section, "norms");
    for (std::size_t w = 0; w < inst.bundle.base_size(); ++w) {
      const auto lux = luxemburg_norm(inst.m, inst.bundle.fiber(w), s.section[w]);
      const auto orl = orlicz_norm(inst.m, n, inst.bundle.fiber(w), s.section[w]);
      out.row({s.name, w, "luxemburg", lux.value, lux.modular_at_lambda, lux.iterations});
      out.row({s.name, w, "orlicz", orl.value, orl.witness_modular, orl.iterations});
    }
  }
  log << "norms: " << inst.sections.size() << " section(s) over " << inst.bundle.base_size() << " base atom(s)\n";
}

bool run_verify(const ExperimentConfig& c, std::ostream& csv, std::ostream& log) {
  const Instance inst = build_instance(c);
  const auto report = verify_conditions(inst.op, inst.bundle, inst.m, static_cast<std::size_t>(c.samples),
                                        sub_seed(c.seed, "verify"));
  CsvWriter out(csv, {"omega", "condition", "status", "residual"});
  const auto status = [](bool ok) { return ok ? "pass" : "fail"; };
  for (const auto& f : report.fibers) {
    out.row({f.omega, "i_modular", status(f.modular_contraction), f.worst_modular_excess});
    out.row({f.omega, "i_luxemburg", status(f.luxemburg_contraction), f.worst_luxemburg_excess});
    out.row({f.omega, "i_linf", status(f.linf_contraction), f.worst_linf_excess});
    out.row({f.omega, "ii_l1_norm", status(f.l1_contraction), f.l1_norm});
    out.row({f.omega, "iii_fixed_point", status(f.fixed_point), f.fixed_point_residual});
  }
  log << "verify: admissible = " << yes_no(report.admissible()) << " (condition (i) from " << c.samples
      << " samples per fiber; sampled evidence only)\n";
  return report.admissible();
}

void run_converge(const ExperimentConfig& c, std::ostream& csv, std::ostream& summary, std::ostream& log) {
  const Instance inst = build_instance(c);
  const Section& f = find_section(inst, c.section);
  require_bound(inst.bundle, f, "converge");

  AveragingOptions opts;
  opts.n_max = c.n_max;
  opts.n_dense = std::min(c.n_dense, c.n_max);
  opts.include_k0 = c.include_k0;
  const AverageTrace trace = weighted_averages(inst.op, inst.w, f, opts);

  // Reference: the spectral prediction where available, else the last average.
  std::vector<FiberVector> ref_parts;
  std::vector<bool> predicted;
  for (std::size_t w = 0; w < inst.bundle.base_size(); ++w) {
    auto p = spectral_limit_oracle(inst.op.fiber_operator(w), inst.bundle.fiber(w), inst.w, f[w]);
    predicted.push_back(p.has_value());
    ref_parts.push_back(p ? *p : trace.limit_estimate[w]);
  }
  const Section reference(std::move(ref_parts));
  const auto envelopes = residual_envelopes(trace, reference);
  const auto ratios = maximal_ratio_profile(trace, inst.bundle, inst.m, inst.w, f);

  std::vector<std::string> header = {"n", "omega", "atom"};
  if (c.emit_values) header.push_back("A_n_value");
  for (const char* h : {"residual_envelope", "luxemburg_norm_An", "maximal_ratio"}) header.emplace_back(h);
  CsvWriter out(csv, header);
  for (std::size_t r = 0; r < trace.schedule.size(); ++r) {
    for (std::size_t w = 0; w < inst.bundle.base_size(); ++w) {
      const double env = envelopes[r][w].max_abs();
      const double lux = luxemburg_norm(inst.m, inst.bundle.fiber(w), trace.averages[r][w]).value;
      for (std::size_t i = 0; i < f[w].size(); ++i) {
        std::vector<Cell> row = {trace.schedule[r], w, i};
        if (c.emit_values) row.emplace_back(trace.averages[r][w][i]);
        row.emplace_back(env);
        row.emplace_back(lux);
        row.emplace_back(ratios[r][w]);
        out.row(row);
      }
    }
  }

  const auto report = detect_o_limit(trace, c.tol);
  CsvWriter sum(summary, {"omega", "o_converged", "final_envelope", "prediction", "max_deviation_from_prediction",
                          "dominant_sup_max", "maximal_ratio"});
  for (std::size_t w = 0; w < inst.bundle.base_size(); ++w) {
    const double dev = predicted[w] ? (trace.limit_estimate[w] - reference[w]).max_abs() : 0.0;
    sum.row({w, report.base_converged[w], report.base_final_envelope[w], predicted[w] ? "spectral" : "none", dev,
             trace.sup_envelope[w].max_abs(), ratios.back()[w]});
  }
  log << "converge: n_max = " << c.n_max << ", weights = " << c.weights << ", o-converged = "
      << yes_no(report.converged) << " at tol " << text::format_double(c.tol) << '\n';
}

int run_command(const std::string& name, const ExperimentConfig& c, std::ostream& log) {
  namespace fs = std::filesystem;
  const fs::path dir(c.output_dir);
  fs::create_directories(dir);
  const auto open = [&](const std::string& file) {
    std::ofstream out(dir / file, std::ios::binary | std::ios::trunc);
    if (!out) throw UsageError("cannot write '" + (dir / file).string() + "'");
    return out;
  };
  if (name == "conjugate") {
    auto out = open("conjugate.csv");
    run_conjugate(c, out, log);
    return 0;
  }
  if (name == "norms") {
    auto out = open("norms.csv");
    run_norms(c, out, log);
    return 0;
  }
  if (name == "verify") {
    auto out = open("verify.csv");
    run_verify(c, out, log);
    return 0;
  }
  if (name == "converge") {
    auto out = open("converge.csv");
    auto summary = open("converge_summary.csv");
    run_converge(c, out, summary, log);
    return 0;
  }
  if (name == "suite") {
    auto out = open("suite.csv");
    const auto results = run_suite(c, out, log);
    return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; }) ? 0 : 1;
  }
  throw UsageError("unknown command '" + name + "'");
}

}  // namespace okl::harness
