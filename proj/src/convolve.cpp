#include "boehm/convolve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "boehm/errors.hpp"

namespace boehm {

std::string to_string(Status s) {
  switch (s) {
    case Status::verified:
      return "verified";
    case Status::refuted:
      return "refuted";
    case Status::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

std::string csv_fields(const CheckResult& r) {
  char buf[64];
  std::string out = r.case_id + "," + r.lemma_ref + "," + to_string(r.status) + ",";
  std::snprintf(buf, sizeof buf, "%.6e", r.max_residual);
  out += buf;
  out += ",";
  std::snprintf(buf, sizeof buf, "%.6e", r.bound);
  out += buf;
  out += "," + std::to_string(r.horizon);
  return out;
}

namespace {

const Piece& piece_around(const GridFunction& f, double lo, double hi) {
  const double mid = 0.5 * (lo + hi);
  for (const auto& p : f.pieces()) {
    if (p.span.lo <= mid && mid <= p.span.hi) return p;
  }
  throw DomainError("convolution window leaves the domain");
}

}  // namespace

GridFunction convolve(const GridFunction& f, const TestFunction& phi) {
  const double s = phi.radius();
  const OpenSet out = erode(f.domain(), s);
  if (out.empty()) {
    throw DomainCollapsed("convolution domain " + to_string(f.domain()) + " collapses under radius " +
                          std::to_string(s));
  }
  std::vector<Zone> zones;
  for (const auto& z : f.zones()) {
    zones.push_back({z.lo - s, z.hi + s, std::min(f.h(), std::max(z.spacing, s / 64.0))});
  }
  std::vector<Piece> pieces;
  pieces.reserve(out.size());
  for (const auto& comp : out.intervals()) {
    const Piece& host = piece_around(f, comp.lo, comp.hi);
    Piece p;
    p.span = comp;
    p.x = build_knots(comp.lo, comp.hi, f.h(), zones);
    p.y.resize(p.x.size());
    for (std::size_t i = 0; i < p.x.size(); ++i) p.y[i] = phi.apply(host.x, host.y, p.x[i]);
    pieces.push_back(std::move(p));
  }
  return GridFunction(out, f.h(), std::move(pieces));
}

GridFunction convolve_near(const GridFunction& f, const TestFunction& phi, const CompactSet& k) {
  if (k.empty()) return convolve(f, phi);
  const double reach = phi.radius() + f.h();
  std::vector<Interval> around;
  for (const auto& iv : k.intervals()) around.push_back({iv.lo - reach, iv.hi + reach});
  const OpenSet near = OpenSet(std::move(around)).intersect(f.domain());
  if (near == f.domain()) return convolve(f, phi);
  return convolve(restrict_grid(f, near), phi);
}

CheckResult check_young(const GridFunction& f, const TestFunction& phi, const CompactSet& k,
                        double eps, double tol_quad) {
  if (!(phi.radius() < eps)) {
    throw PreconditionViolated("Young bound needs s(phi) < eps");
  }
  const CompactSet inner = erode(k, eps);
  if (inner.empty()) throw PreconditionViolated("Young bound needs a nonempty eroded compact");
  const GridFunction g = convolve_near(f, phi, inner);
  const SupPoint lhs = sup_point_on(g, inner);
  const double mass = phi.kind() == TestFunction::Kind::bump ? 1.0 : l1_norm(phi.realization());
  const double rhs = sup_norm_on(f, k) * mass;
  CheckResult r;
  r.lemma_ref = "L1-young";
  r.max_residual = lhs.value;
  r.bound = rhs + tol_quad;
  r.horizon = 1;
  r.witness = Witness{lhs.location, lhs.value};
  r.status = lhs.value <= r.bound ? Status::verified : Status::refuted;
  return r;
}

Status decay_verdict(const std::vector<double>& r, double tol, int grace, double slack) {
  if (r.empty()) return Status::inconclusive;
  bool monotone = true;
  for (std::size_t i = static_cast<std::size_t>(std::max(grace, 0)) + 1; i < r.size(); ++i) {
    if (r[i] > r[i - 1] + slack) monotone = false;
  }
  if (r.back() < tol && monotone) return Status::verified;
  const std::size_t q = std::max<std::size_t>(2, r.size() / 4);
  if (r.size() >= q && r.back() >= 10.0 * tol) {
    const auto tail = std::span(r).last(q);
    const auto [lo, hi] = std::minmax_element(tail.begin(), tail.end());
    if ((*hi - *lo) <= 0.1 * *hi) return Status::refuted;
  }
  return Status::inconclusive;
}

namespace {

CheckResult convergence_trace(const std::function<SupPoint(int)>& residual_at,
                              const DeltaSeq& seq, double margin, const ConvergenceOptions& opt,
                              const char* lemma) {
  CheckResult r;
  r.lemma_ref = lemma;
  r.horizon = opt.horizon;
  r.bound = opt.tol;
  SupPoint last;
  bool lipschitz_broken = false;
  for (int n = 1; n <= opt.horizon; ++n) {
    if (!(seq.radius(n) < margin)) continue;  // mollifier does not fit yet
    last = residual_at(n);
    r.residuals.push_back(last.value);
    r.max_residual = last.value;
    if (opt.lipschitz && last.value > *opt.lipschitz * seq.radius(n) + opt.slack) {
      lipschitz_broken = true;
      r.witness = Witness{last.location, last.value};
      r.note = "rate bound exceeded at n=" + std::to_string(n);
    }
  }
  if (r.residuals.empty()) {
    r.note = "no mollifier of the schedule fits before the horizon";
    return r;
  }
  r.status = decay_verdict(r.residuals, opt.tol, opt.grace, opt.tol_quad);
  if (lipschitz_broken) r.status = Status::refuted;
  if (r.status == Status::refuted && !r.witness) r.witness = Witness{last.location, last.value};
  return r;
}

}  // namespace

CheckResult check_mollifier_convergence(const GridFunction& f, const DeltaSeq& seq,
                                        const CompactSet& k, const ConvergenceOptions& opt) {
  const double margin = distance_to_complement(k, f.domain());
  return convergence_trace(
      [&](int n) { return sup_distance_on(f, convolve_near(f, seq[n], k), k); }, seq, margin, opt,
      "L4-mollify");
}

CheckResult check_diagonal_mollification(const std::function<GridFunction(int)>& fn,
                                         const DeltaSeq& seq, const CompactSet& k, double eps,
                                         const ConvergenceOptions& opt) {
  const CompactSet inner = erode(k, eps);
  if (inner.empty()) throw PreconditionViolated("diagonal mollification needs a nonempty K^-eps");
  return convergence_trace(
      [&](int n) {
        const GridFunction f = fn(n);
        return sup_distance_on(f, convolve_near(f, seq[n], inner), inner);
      },
      seq, eps, opt, "C5-mollify");
}

}  // namespace boehm
