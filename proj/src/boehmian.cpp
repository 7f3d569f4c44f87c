#include "boehm/boehmian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>

#include "boehm/errors.hpp"

namespace boehm {

struct FundamentalSeq::Impl {
  OpenSet domain;
  Generator gen;
  std::string tag;
  std::mutex mu;
  std::map<int, std::unique_ptr<GridFunction>> cache;
};

FundamentalSeq::FundamentalSeq(OpenSet domain, Generator gen, std::string tag)
    : impl_(std::make_shared<Impl>()) {
  if (!gen) throw InvalidArgument("fundamental sequence needs a generator");
  impl_->domain = std::move(domain);
  impl_->gen = std::move(gen);
  impl_->tag = std::move(tag);
}

const OpenSet& FundamentalSeq::domain() const { return impl_->domain; }
const std::string& FundamentalSeq::tag() const { return impl_->tag; }

const GridFunction& FundamentalSeq::operator()(int n) const {
  if (n < 1) throw InvalidArgument("sequence indices start at 1");
  {
    std::lock_guard lock(impl_->mu);
    auto it = impl_->cache.find(n);
    if (it != impl_->cache.end()) return *it->second;
  }
  auto f = std::make_unique<GridFunction>(impl_->gen(n));
  if (!(f->domain() == impl_->domain)) {
    throw Error("generator returned a function on " + to_string(f->domain()) + ", expected " +
                to_string(impl_->domain));
  }
  std::lock_guard lock(impl_->mu);
  auto [it, inserted] = impl_->cache.emplace(n, std::move(f));
  return *it->second;
}

DeltaSeq default_witness() {
  static const DeltaSeq w = DeltaSeq::geometric(0.5, 0.5);
  return w;
}

void EquivParams::validate() const {
  if (horizon < 4) throw InvalidArgument("horizon must be at least 4");
  if (!(tol > 0.0)) throw InvalidArgument("tolerance must be positive");
  if (witness_count < 1) throw InvalidArgument("witness_count must be positive");
}

std::vector<int> tail_indices(int horizon) {
  const int first = std::min(horizon - 1, horizon - horizon / 4);
  std::vector<int> t;
  for (int n = std::max(1, first); n <= horizon; ++n) t.push_back(n);
  return t;
}

std::vector<CompactSet> compacts_for(const OpenSet& domain, const EquivParams& p) {
  if (!p.compacts.empty()) {
    for (const auto& k : p.compacts) {
      if (!is_compactly_contained(k, domain)) {
        throw InvalidArgument("compact " + to_string(k) + " is not inside " + to_string(domain));
      }
    }
    return p.compacts;
  }
  if (!domain.bounded()) throw Unsupported("automatic compacts need a bounded domain");
  if (domain.empty()) throw InvalidArgument("empty domain");
  return {erode(domain, 0.1 * domain.min_component_length()).closure()};
}

std::vector<int> witness_indices(const CompactSet& k, const OpenSet& domain, const EquivParams& p) {
  const double d = distance_to_complement(k, domain);
  std::vector<int> ms;
  for (int m = 1; m <= 64 && static_cast<int>(ms.size()) < p.witness_count; ++m) {
    if (p.witness.radius(m) < d) ms.push_back(m);
  }
  if (ms.empty()) throw InvalidArgument("no witness mollifier fits around " + to_string(k));
  return ms;
}

namespace {

void require_same_domain(const Boehmian& f, const Boehmian& g) {
  if (!(f.domain() == g.domain())) {
    throw InvalidArgument("domains differ: " + to_string(f.domain()) + " vs " +
                          to_string(g.domain()));
  }
}

Regularizer convolving(GridFunction f) {
  return [f = std::move(f)](const TestFunction& psi, const OpenSet& d) {
    return restrict_grid(convolve(f, psi), d);
  };
}

double max_pairwise(const std::vector<GridFunction>& c, const CompactSet& k, double* where) {
  double worst = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (std::size_t j = i + 1; j < c.size(); ++j) {
      const SupPoint s = sup_distance_on(c[i], c[j], k);
      if (s.value > worst) {
        worst = s.value;
        if (where) *where = s.location;
      }
    }
  }
  return worst;
}

}  // namespace

Boehmian from_continuous(const GridFunction& f) {
  return Boehmian{FundamentalSeq(f.domain(), [f](int) { return f; }, "constant"),
                  default_witness(), convolving(f)};
}

Boehmian zero_boehmian(const OpenSet& u, double h) {
  return from_continuous(sample([](double) { return 0.0; }, u, h));
}

Boehmian dirac(double center, const DeltaSeq& seq, const OpenSet& u, double h) {
  if (!u.contains(center)) throw InvalidArgument("dirac center outside the domain");
  auto spike = [center, h](const TestFunction& phi, const OpenSet& d) {
    const double s = phi.radius();
    const Zone z[] = {{center - s, center + s, s / 128.0}};
    return sample([&](double x) { return phi(x - center); }, d, h, z);
  };
  auto gen = [seq, u, spike](int n) { return spike(seq[n], u); };
  return Boehmian{FundamentalSeq(u, gen, "dirac"), seq,
                  [spike](const TestFunction& psi, const OpenSet& d) { return spike(psi, d); }};
}

Boehmian mollified(const Expr& g, const DeltaSeq& seq, const OpenSet& u, double h) {
  auto smooth = [g, h](const TestFunction& phi, const OpenSet& d) {
    const GridFunction raw = sample(g, dilate(d, phi.radius() + h), h);
    return restrict_grid(convolve(raw, phi), d);
  };
  auto gen = [seq, u, smooth](int n) { return smooth(seq[n], u); };
  return Boehmian{FundamentalSeq(u, gen, "mollified"), seq, smooth};
}

Boehmian custom_expression(const Expr& g, double offset, const OpenSet& u, double h) {
  auto gen = [g, offset, u, h](int n) {
    return sample([&](double x) { return g(x) + offset / n; }, u, h);
  };
  return Boehmian{FundamentalSeq(u, gen, "custom"), default_witness(), {}};
}

Boehmian from_generator(const OpenSet& u, FundamentalSeq::Generator gen, std::string tag) {
  return Boehmian{FundamentalSeq(u, std::move(gen), std::move(tag)), default_witness(), {}};
}

CheckResult is_fundamental(const FundamentalSeq& s, const EquivParams& p) {
  p.validate();
  const auto ks = compacts_for(s.domain(), p);
  const auto tail = tail_indices(p.horizon);
  CheckResult r;
  r.lemma_ref = "D-fundamental";
  r.horizon = p.horizon;
  r.bound = p.tol;
  bool all_pass = true;
  bool any_refuted = false;
  double worst = 0.0;
  Witness worst_at;
  for (const auto& k : ks) {
    for (int m : witness_indices(k, s.domain(), p)) {
      std::vector<GridFunction> c;
      for (int n : tail) c.push_back(convolve_near(s(n), p.witness[m], k));
      double where = k.lower();
      const double spread = max_pairwise(c, k, &where);
      r.residuals.push_back(spread);
      if (spread > worst) {
        worst = spread;
        worst_at = {where, spread};
      }
      if (spread < p.tol) continue;
      all_pass = false;
      std::vector<double> steps;
      for (std::size_t i = 1; i < c.size(); ++i) steps.push_back(sup_distance_on(c[i - 1], c[i], k).value);
      bool decreasing = true;
      for (std::size_t i = 1; i < steps.size(); ++i) decreasing = decreasing && steps[i] < steps[i - 1];
      if (!(decreasing && steps.back() < 0.5 * steps.front())) any_refuted = true;
    }
  }
  r.max_residual = worst;
  if (all_pass) {
    r.status = Status::verified;
  } else if (any_refuted) {
    r.status = Status::refuted;
    r.witness = worst_at;
    r.note = "tail is not Cauchy under a fixed witness mollifier";
  } else {
    r.status = Status::inconclusive;
    r.note = "tail differences still decreasing above tol";
  }
  return r;
}

EquivalenceReport equivalence_report(const Boehmian& f, const Boehmian& g, const EquivParams& p) {
  p.validate();
  require_same_domain(f, g);
  const auto ks = compacts_for(f.domain(), p);
  EquivalenceReport rep;
  rep.tail = tail_indices(p.horizon);
  std::vector<GridFunction> diffs;
  for (int n : rep.tail) diffs.push_back(f(n) - g(n));

  const double slack = p.tol_quad + 0.01 * p.tol;
  const std::size_t q = std::max<std::size_t>(2, rep.tail.size() / 4);
  for (std::size_t ki = 0; ki < ks.size(); ++ki) {
    for (int m : witness_indices(ks[ki], f.domain(), p)) {
      ResidualEntry e;
      e.compact = ki;
      e.m = m;
      e.radius = p.witness.radius(m);
      for (const auto& d : diffs) {
        const SupPoint s = sup_point_on(convolve_near(d, p.witness[m], ks[ki]), ks[ki]);
        e.trace.push_back(s.value);
        e.location = s.location;
      }
      const auto last = std::span(e.trace).last(q);
      const auto [lo, hi] = std::minmax_element(last.begin(), last.end());
      e.stabilized = e.trace.back() >= 10.0 * p.tol && (*hi - *lo) <= 0.1 * *hi;
      rep.entries.push_back(std::move(e));
    }
  }

  CheckResult& r = rep.result;
  r.lemma_ref = "D-equiv";
  r.horizon = p.horizon;
  r.bound = p.tol;
  bool all_pass = true;
  const ResidualEntry* witness = nullptr;
  for (const auto& e : rep.entries) {
    r.residuals.push_back(e.trace.back());
    r.max_residual = std::max(r.max_residual, e.trace.back());
    bool monotone = true;
    for (std::size_t i = 1; i < e.trace.size(); ++i) monotone = monotone && e.trace[i] <= e.trace[i - 1] + slack;
    if (!(e.trace.back() < p.tol && monotone)) all_pass = false;
    if (e.stabilized && (!witness || e.trace.back() > witness->trace.back())) witness = &e;
  }
  if (all_pass) {
    r.status = Status::verified;
  } else if (witness) {
    r.status = Status::refuted;
    r.witness = Witness{witness->location, witness->trace.back()};
    std::ostringstream os;
    os << "stabilized residual under witness m=" << witness->m;
    r.note = os.str();
  } else {
    r.status = Status::inconclusive;
    r.note = "residuals above tol but not stabilized";
  }
  return rep;
}

CheckResult equivalent(const Boehmian& f, const Boehmian& g, const EquivParams& p) {
  return equivalence_report(f, g, p).result;
}

Boehmian add(const Boehmian& f, const Boehmian& g) {
  require_same_domain(f, g);
  Regularizer exact;
  if (f.exact && g.exact) {
    exact = [a = f.exact, b = g.exact](const TestFunction& psi, const OpenSet& d) {
      return a(psi, d) + b(psi, d);
    };
  }
  return Boehmian{FundamentalSeq(f.domain(), [f, g](int n) { return f(n) + g(n); }, "custom"),
                  DeltaSeq::product(f.witness, g.witness), exact};
}

Boehmian scale(double r, const Boehmian& f) {
  Regularizer exact;
  if (f.exact) {
    exact = [r, a = f.exact](const TestFunction& psi, const OpenSet& d) { return scaled(r, a(psi, d)); };
  }
  return Boehmian{FundamentalSeq(f.domain(), [r, f](int n) { return scaled(r, f(n)); }, f.tag()),
                  f.witness, exact};
}

Boehmian sub(const Boehmian& f, const Boehmian& g) { return add(f, scale(-1.0, g)); }

Boehmian restrict(const Boehmian& f, const OpenSet& v) {
  if (!f.domain().contains(v)) {
    throw InvalidArgument(to_string(v) + " is not a subset of " + to_string(f.domain()));
  }
  return Boehmian{FundamentalSeq(v, [f, v](int n) { return restrict_grid(f(n), v); }, f.tag()),
                  f.witness, f.exact};
}

Boehmian conv_boehmian(const Boehmian& f, const TestFunction& phi, double eps) {
  if (!(phi.radius() < eps)) throw PreconditionViolated("conv_boehmian needs s(phi) < eps");
  const OpenSet d = erode(f.domain(), eps);
  if (d.empty()) throw DomainCollapsed("erode(U, eps) is empty");
  Regularizer exact;
  if (f.exact) {
    exact = [phi, a = f.exact](const TestFunction& psi, const OpenSet& dd) {
      return a(convolve_test(phi, psi), dd);
    };
  }
  auto gen = [f, phi, d](int n) { return restrict_grid(convolve(f(n), phi), d); };
  return Boehmian{FundamentalSeq(d, gen, f.tag()), f.witness, exact};
}

ContinuousPart to_continuous_on(const Boehmian& f, const CompactSet& k, const EquivParams& p) {
  p.validate();
  if (!is_compactly_contained(k, f.domain())) {
    throw InvalidArgument(to_string(k) + " is not compactly inside " + to_string(f.domain()));
  }
  double margin = distance_to_complement(k, f.domain());
  if (std::isinf(margin)) margin = 1.0;
  const double eps = margin / 2.0;
  const CompactSet k1 = dilate(k, eps);
  const auto tail = tail_indices(p.horizon);
  int tried = 0;
  double best = std::numeric_limits<double>::infinity();
  for (int m = 1; m <= 64 && tried < p.witness_count; ++m) {
    const TestFunction& psi = p.witness[m];
    if (!(psi.radius() < eps / 2.0)) continue;
    ++tried;
    std::vector<GridFunction> c;
    for (int n : tail) c.push_back(convolve_near(f(n), psi, k1));
    double where = k1.lower();
    const double spread = max_pairwise(c, k1, &where);
    best = std::min(best, spread);
    if (spread < p.tol) {
      CheckResult r;
      r.status = Status::verified;
      r.lemma_ref = "L8-regularize";
      r.max_residual = spread;
      r.bound = p.tol;
      r.horizon = p.horizon;
      r.note = "psi = " + psi.describe();
      return {psi, std::move(c.back()), std::move(r)};
    }
  }
  std::ostringstream os;
  os << "no witness head made the sequence Cauchy on " << to_string(k1) << " (best spread " << best
     << ")";
  throw NoRegularizerFound(os.str());
}

TestFunction regularizing_mollifier(const Boehmian& f, double eps, const EquivParams& p) {
  if (!f.domain().bounded()) throw Unsupported("regularizing_mollifier needs a bounded domain");
  const OpenSet inner = erode(f.domain(), eps);
  if (inner.empty()) throw DomainCollapsed("erode(U, eps) is empty");
  const auto part = to_continuous_on(f, inner.closure(), p);
  if (!(part.psi.radius() < eps)) throw Error("selected mollifier is wider than eps");
  return part.psi;
}

GridFunction adaptive_regularize(const Boehmian& f, const TestFunction& psi, const OpenSet& d,
                                 const EquivParams& p) {
  if (!erode(f.domain(), psi.radius()).contains(d)) {
    throw PreconditionViolated("regularization set is not inside erode(U, s(psi))");
  }
  const CompactSet k = d.closure();
  auto at = [&](int n) { return restrict_grid(convolve_near(f(n), psi, k), d); };
  GridFunction prev = at(4);
  double last = std::numeric_limits<double>::infinity();
  for (int n = 6; n <= 48; n += 2) {
    GridFunction next = at(n);
    last = sup_distance_on(prev, next, k).value;
    if (last < 0.1 * p.tol) return next;
    prev = std::move(next);
  }
  std::ostringstream os;
  os << "f_n * psi did not settle on " << to_string(d) << " by index 48 (last step " << last << ")";
  throw NoRegularizerFound(os.str());
}

GridFunction regularize(const Boehmian& f, const TestFunction& psi, const OpenSet& d,
                        const EquivParams& p) {
  if (f.exact) return f.exact(psi, d);
  return adaptive_regularize(f, psi, d, p);
}

Exhaustive default_exhaustive(const OpenSet& u, double eps1) {
  if (!(eps1 > 0.0)) throw InvalidArgument("eps1 must be positive");
  auto eps = [eps1](int n) { return std::ldexp(eps1, -(n - 1)); };
  return Exhaustive{[u, eps](int n) { return erode(u, eps(n)); },
                    [eps](int n) { return TestFunction::bump(eps(n) / 2.0); }};
}

namespace {

// Largest distance from a point of U to U_n, measured per component of U.
double exhaustion_gap(const OpenSet& u, const OpenSet& un) {
  double gap = 0.0;
  for (const auto& c : u.intervals()) {
    double cursor = c.lo;
    bool met = false;
    for (const auto& iv : un.intervals()) {
      if (iv.hi <= c.lo || iv.lo >= c.hi) continue;
      gap = std::max(gap, met ? (iv.lo - cursor) / 2.0 : iv.lo - c.lo);
      cursor = iv.hi;
      met = true;
    }
    if (!met) return std::numeric_limits<double>::infinity();
    gap = std::max(gap, c.hi - cursor);
  }
  return gap;
}

}  // namespace

FundamentalSeq rebuild_from_exhaustion(const Boehmian& f, const Exhaustive& plan,
                                       const EquivParams& p) {
  p.validate();
  const OpenSet& u = f.domain();
  if (!u.bounded()) throw Unsupported("rebuild_from_exhaustion needs a bounded domain");
  double first_gap = 0.0;
  double prev_gap = std::numeric_limits<double>::infinity();
  for (int n = 1; n <= p.horizon; ++n) {
    const OpenSet un = plan.opens(n);
    std::ostringstream os;
    os << "U_" << n << " = " << to_string(un) << ": ";
    if (un.empty() || !u.contains(un)) throw InvalidArgument(os.str() + "not a nonempty subset of U");
    if (!is_compactly_contained(un.closure(), plan.opens(n + 1))) {
      throw InvalidArgument(os.str() + "closure not inside U_{n+1}");
    }
    if (!(plan.mollifier(n).radius() < distance_to_complement(un.closure(), u))) {
      throw InvalidArgument(os.str() + "mollifier too wide for closure(U_n)");
    }
    const double gap = exhaustion_gap(u, un);
    if (n == 1) first_gap = gap;
    if (!(gap < prev_gap) && gap > 0.0) throw InvalidArgument(os.str() + "does not grow towards U");
    prev_gap = gap;
  }
  if (!(prev_gap < first_gap / 2.0) && first_gap > 0.0) {
    throw InvalidArgument("opens do not exhaust U within the horizon");
  }
  auto gen = [f, plan, p, u](int n) {
    return extend_continuously(regularize(f, plan.mollifier(n), plan.opens(n), p), u);
  };
  return FundamentalSeq(u, gen, "extended");
}

}  // namespace boehm
