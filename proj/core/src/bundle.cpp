#include "okl/bundle.hpp"

#include <algorithm>
#include <cmath>

#include "okl/errors.hpp"
#include "okl/orlicz.hpp"

namespace okl {

BaseSpace::BaseSpace(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw UsageError("base space needs at least one atom");
  for (double w : weights_)
    if (!(w > 0.0) || !std::isfinite(w)) throw UsageError("base weights must be finite and > 0");
}

Bundle::Bundle(BaseSpace base, std::vector<Fiber> fibers)
    : base_(std::move(base)), fibers_(std::move(fibers)) {
  if (fibers_.size() != base_.size())
    throw UsageError("bundle needs exactly one fiber per base atom");
}

Bundle Bundle::restrict_to(std::size_t w) const {
  return Bundle(BaseSpace({base_.weight(w)}), {fibers_.at(w)});
}

Section Section::zeros(const Bundle& bundle) {
  std::vector<FiberVector> parts;
  for (const auto& f : bundle.fibers()) parts.push_back(FiberVector::zeros(f.size()));
  return Section(std::move(parts));
}

Section Section::constant(const Bundle& bundle, double c) {
  std::vector<FiberVector> parts;
  for (const auto& f : bundle.fibers()) parts.push_back(FiberVector::constant(f.size(), c));
  return Section(std::move(parts));
}

Section Section::abs() const {
  Section r = *this;
  for (auto& p : r.parts_) p = p.abs();
  return r;
}

Section Section::scaled(double c) const {
  Section r = *this;
  for (auto& p : r.parts_) p = p.scaled(c);
  return r;
}

double Section::max_abs() const {
  double m = 0.0;
  for (const auto& p : parts_) m = std::max(m, p.max_abs());
  return m;
}

Section& Section::operator+=(const Section& other) {
  if (other.size() != size()) throw UsageError("section base size mismatch");
  for (std::size_t w = 0; w < size(); ++w) parts_[w] += other.parts_[w];
  return *this;
}

Section& Section::operator-=(const Section& other) {
  if (other.size() != size()) throw UsageError("section base size mismatch");
  for (std::size_t w = 0; w < size(); ++w) parts_[w] -= other.parts_[w];
  return *this;
}

IdempotentSection IdempotentSection::top(const Bundle& bundle) {
  std::vector<FiberIdempotent> parts;
  for (const auto& f : bundle.fibers()) parts.push_back(FiberIdempotent::top(f.size()));
  return IdempotentSection(std::move(parts));
}

IdempotentSection IdempotentSection::bottom(const Bundle& bundle) {
  std::vector<FiberIdempotent> parts;
  for (const auto& f : bundle.fibers()) parts.push_back(FiberIdempotent::bottom(f.size()));
  return IdempotentSection(std::move(parts));
}

IdempotentSection IdempotentSection::join(const IdempotentSection& other) const {
  if (other.size() != size()) throw UsageError("idempotent section size mismatch");
  std::vector<FiberIdempotent> parts;
  for (std::size_t w = 0; w < size(); ++w) parts.push_back(parts_[w].join(other.parts_[w]));
  return IdempotentSection(std::move(parts));
}

IdempotentSection IdempotentSection::meet(const IdempotentSection& other) const {
  if (other.size() != size()) throw UsageError("idempotent section size mismatch");
  std::vector<FiberIdempotent> parts;
  for (std::size_t w = 0; w < size(); ++w) parts.push_back(parts_[w].meet(other.parts_[w]));
  return IdempotentSection(std::move(parts));
}

IdempotentSection IdempotentSection::restricted_by(const BaseVector& g) const {
  if (g.size() != size()) throw UsageError("base vector size mismatch");
  std::vector<FiberIdempotent> parts;
  for (std::size_t w = 0; w < size(); ++w)
    parts.push_back(g[w] != 0.0 ? parts_[w] : FiberIdempotent::bottom(parts_[w].size()));
  return IdempotentSection(std::move(parts));
}

void require_bound(const Bundle& bundle, const Section& f, const char* what) {
  if (f.size() != bundle.base_size()) throw UsageError(std::string(what) + ": section base size mismatch");
  for (std::size_t w = 0; w < f.size(); ++w) require_bound(bundle.fiber(w), f[w].size(), what);
}

void require_bound(const Bundle& bundle, const IdempotentSection& e, const char* what) {
  if (e.size() != bundle.base_size())
    throw UsageError(std::string(what) + ": idempotent section base size mismatch");
  for (std::size_t w = 0; w < e.size(); ++w) require_bound(bundle.fiber(w), e[w].size(), what);
}

BaseVector measure_of(const Bundle& bundle, const IdempotentSection& e) {
  require_bound(bundle, e, "measure_of");
  BaseVector out(e.size());
  for (std::size_t w = 0; w < e.size(); ++w) out[w] = measure(bundle.fiber(w), e[w]);
  return out;
}

double module_property_check(const Bundle& bundle, const BaseVector& g, const IdempotentSection& e) {
  if (g.size() != bundle.base_size()) throw UsageError("module_property_check: base vector size mismatch");
  for (double v : g)
    if (v != 0.0 && v != 1.0) throw DomainError("module_property_check: g must be 0/1-valued");
  const BaseVector lhs = measure_of(bundle, e.restricted_by(g));
  const BaseVector rhs = measure_of(bundle, e);
  double dev = 0.0;
  for (std::size_t w = 0; w < g.size(); ++w) dev = std::max(dev, std::fabs(lhs[w] - g[w] * rhs[w]));
  return dev;
}

BaseVector section_norm(const NFunction& m, const Bundle& bundle, const Section& f, NormKind kind) {
  require_bound(bundle, f, "section_norm");
  BaseVector out(f.size());
  if (kind == NormKind::kLuxemburg) {
    for (std::size_t w = 0; w < f.size(); ++w) out[w] = luxemburg_norm(m, bundle.fiber(w), f[w]).value;
  } else {
    const NFunction n = m.complement();
    for (std::size_t w = 0; w < f.size(); ++w) out[w] = orlicz_norm(m, n, bundle.fiber(w), f[w]).value;
  }
  return out;
}

namespace {

template <typename Pick>
Section atomwise(std::span<const Section> fs, Pick pick, const char* what) {
  if (fs.empty()) throw UsageError(std::string(what) + ": empty family");
  Section out = fs.front();
  for (std::size_t k = 1; k < fs.size(); ++k) {
    const Section& f = fs[k];
    if (f.size() != out.size()) throw UsageError(std::string(what) + ": sections bound to different bundles");
    for (std::size_t w = 0; w < f.size(); ++w) {
      if (f[w].size() != out[w].size())
        throw UsageError(std::string(what) + ": sections bound to different bundles");
      for (std::size_t i = 0; i < f[w].size(); ++i) out[w][i] = pick(out[w][i], f[w][i]);
    }
  }
  return out;
}

}  // namespace

Section section_sup(std::span<const Section> fs) {
  return atomwise(fs, [](double a, double b) { return std::max(a, b); }, "section_sup");
}

Section section_inf(std::span<const Section> fs) {
  return atomwise(fs, [](double a, double b) { return std::min(a, b); }, "section_inf");
}

OConvergenceReport o_converges(std::span<const Section> trace, const Section& limit,
                               std::size_t tail_start, double tol) {
  if (trace.size() <= tail_start) throw UsageError("o_converges: trace shorter than tail_start + 1");
  for (const auto& f : trace) {
    if (f.size() != limit.size()) throw UsageError("o_converges: limit not bound to the trace's bundle");
    for (std::size_t w = 0; w < f.size(); ++w)
      if (f[w].size() != limit[w].size())
        throw UsageError("o_converges: limit not bound to the trace's bundle");
  }

  OConvergenceReport r;
  const std::size_t count = trace.size() - tail_start;
  r.envelopes.resize(count);
  // Backward running max of |f_m - limit|.
  Section running = (trace.back() - limit).abs();
  r.envelopes[count - 1] = running;
  for (std::size_t j = count - 1; j-- > 0;) {
    const Section dev = (trace[tail_start + j] - limit).abs();
    for (std::size_t w = 0; w < dev.size(); ++w)
      for (std::size_t i = 0; i < dev[w].size(); ++i) running[w][i] = std::max(running[w][i], dev[w][i]);
    r.envelopes[j] = running;
  }

  bool mono = true;
  for (std::size_t j = 1; j < count; ++j) {
    const Section& prev = r.envelopes[j - 1];
    const Section& cur = r.envelopes[j];
    for (std::size_t w = 0; w < cur.size(); ++w)
      for (std::size_t i = 0; i < cur[w].size(); ++i) mono = mono && cur[w][i] <= prev[w][i];
  }
  r.envelope_nonincreasing = mono;
  r.final_envelope_max = r.envelopes.back().max_abs();
  r.converged = mono && r.final_envelope_max <= tol;
  return r;
}

Section restrict_section(const Section& f, std::size_t w) { return Section({f[w]}); }

}  // namespace okl
