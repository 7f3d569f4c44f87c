#include "boehm/bridge.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "boehm/errors.hpp"

namespace boehm {

std::string to_string(ConvergenceMode m) {
  return m == ConvergenceMode::delta_lower ? "delta_lower" : "Delta_upper";
}

Status limit_verdict(const std::vector<int>& ns, const std::vector<double>& r, double tol,
                     std::string* note) {
  if (r.empty() || ns.size() != r.size()) return Status::inconclusive;
  const std::size_t q = std::max(std::min<std::size_t>(r.size(), 4), r.size() / 4);
  const std::size_t first = r.size() - q;
  bool monotone = true;
  for (std::size_t i = first + 1; i < r.size(); ++i) {
    if (r[i] > r[i - 1] * (1.0 + 1e-9) + 1e-12) monotone = false;
  }
  const double head = r[first];
  const double last = r.back();
  if (monotone && last < tol) return Status::verified;
  if (monotone && last > 0.0 && q > 1 && ns.back() > ns[first]) {
    const double alpha = std::log(head / last) / std::log(double(ns.back()) / double(ns[first]));
    if (alpha >= 0.9) {
      if (note) {
        std::ostringstream os;
        os << "decaying like n^-" << alpha;
        *note = os.str();
      }
      return Status::verified;
    }
  }
  if (last >= 10.0 * tol) {
    const auto [lo, hi] = std::minmax_element(r.begin() + static_cast<std::ptrdiff_t>(first), r.end());
    if (*hi - *lo <= 0.1 * *hi) {
      if (note) *note = "settled away from zero";
      return Status::refuted;
    }
    if (last >= head) {
      if (note) *note = "growing";
      return Status::refuted;
    }
  }
  return Status::inconclusive;
}

namespace {

void require_inside(const CompactSet& k, const OpenSet& u, const char* who) {
  if (k.empty() || !(distance_to_complement(k, u) > 0.0)) {
    throw InvalidArgument(std::string(who) + ": K must be a nonempty compact inside the domain");
  }
}

GridFunction on_domain(const GridFunction& f, const OpenSet& u) {
  if (f.domain() == u) return f;
  if (!f.domain().contains(u)) throw InvalidArgument("limit function is not defined on the domain");
  return restrict_grid(f, u);
}

Status worst_of(const std::vector<Status>& ss) {
  bool all = !ss.empty();
  for (Status s : ss) {
    if (s == Status::refuted) return Status::refuted;
    all = all && s == Status::verified;
  }
  return all ? Status::verified : Status::inconclusive;
}

// Diagonal residuals ‖g_n ∗ δ_n‖_K with the verdict filled in.
CheckResult diagonal(const std::function<GridFunction(int)>& g, const CompactSet& k, double margin,
                     const DeltaSeq& witness, const EquivParams& params) {
  CheckResult r;
  r.horizon = params.horizon;
  r.bound = params.tol;
  std::vector<int> ns;
  SupPoint last;
  for (int n = 1; n <= params.horizon; ++n) {
    if (!(witness.radius(n) < margin)) continue;
    last = sup_point_on(convolve_near(g(n), witness[n], k), k);
    ns.push_back(n);
    r.residuals.push_back(last.value);
  }
  if (ns.empty()) {
    r.note = "no witness mollifier fits around K before the horizon";
    return r;
  }
  r.max_residual = r.residuals.back();
  r.status = limit_verdict(ns, r.residuals, params.tol, &r.note);
  if (r.refuted()) r.witness = Witness{last.location, last.value};
  return r;
}

}  // namespace

CheckResult delta_converges(const FundamentalSeq& fn, const GridFunction& f, const CompactSet& k,
                            const EquivParams& params) {
  params.validate();
  const OpenSet& u = fn.domain();
  require_inside(k, u, "delta_converges");
  const GridFunction limit = on_domain(f, u);
  CheckResult r;
  r.lemma_ref = "D-delta";
  r.horizon = params.horizon;
  r.bound = params.tol;
  std::vector<Status> per_m;
  std::vector<int> ns;
  for (int n = 1; n <= params.horizon; ++n) ns.push_back(n);
  for (int m : witness_indices(k, u, params)) {
    const TestFunction& phi = params.witness[m];
    std::vector<double> trace;
    SupPoint last;
    for (int n : ns) {
      last = sup_point_on(convolve_near(fn(n) - limit, phi, k), k);
      trace.push_back(last.value);
    }
    per_m.push_back(limit_verdict(ns, trace, params.tol));
    r.residuals.push_back(trace.back());
    if (trace.back() >= r.max_residual) {
      r.max_residual = trace.back();
      if (per_m.back() == Status::refuted || !r.witness) r.witness = Witness{last.location, last.value};
    }
  }
  if (per_m.empty()) r.note = "no witness mollifier fits around K";
  r.status = worst_of(per_m);
  if (!r.refuted()) r.witness.reset();
  return r;
}

CheckResult Delta_converges(const FundamentalSeq& fn, const GridFunction& f, const CompactSet& k,
                            const DeltaSeq& witness, const EquivParams& params) {
  params.validate();
  const OpenSet& u = fn.domain();
  require_inside(k, u, "Delta_converges");
  const GridFunction limit = on_domain(f, u);
  CheckResult r = diagonal([&](int n) { return limit - fn(n); }, k, distance_to_complement(k, u),
                           witness, params);
  r.lemma_ref = "D-Delta";
  return r;
}

CheckResult Delta_cauchy(const FundamentalSeq& fn, const CompactSet& k, const DeltaSeq& witness,
                         const EquivParams& params, const std::vector<int>& strides) {
  params.validate();
  const OpenSet& u = fn.domain();
  require_inside(k, u, "Delta_cauchy");
  if (strides.empty()) throw InvalidArgument("Delta_cauchy: no strides");
  CheckResult out;
  out.lemma_ref = "D-Delta-Cauchy";
  out.horizon = params.horizon;
  out.bound = params.tol;
  std::vector<Status> ss;
  for (int s : strides) {
    if (s < 1) throw InvalidArgument("Delta_cauchy: strides must be positive");
    const CheckResult r = diagonal([&](int n) { return fn(n) - fn(n + s); }, k,
                                   distance_to_complement(k, u), witness, params);
    ss.push_back(r.status);
    out.residuals.push_back(r.max_residual);
    if (r.max_residual >= out.max_residual) {
      out.max_residual = r.max_residual;
      if (r.witness) out.witness = r.witness;
    }
    out.note += (out.note.empty() ? "" : "; ") + ("stride " + std::to_string(s) + ": " +
                                                   to_string(r.status));
  }
  out.status = worst_of(ss);
  if (!out.refuted()) out.witness.reset();
  return out;
}

DeltaSeq dirac_Delta_witness(const DeltaSeq& schedule, double c) {
  if (!(c > 0.0)) throw InvalidArgument("dirac_Delta_witness: c must be positive");
  auto radius = [schedule, c](int n) { return c * std::pow(schedule.radius(n), 0.25); };
  return DeltaSeq::from_rule([radius](int n) { return TestFunction::bump(radius(n)); }, radius,
                             false, 0.0, "dirac-Delta");
}

std::vector<double> radius_grid(double below, int count) {
  if (!(below > 0.0) || count < 1) throw InvalidArgument("radius_grid: need below > 0 and count >= 1");
  std::vector<double> out;
  for (int k = 1; k <= count; ++k) out.push_back(0.95 * below * k / count);
  return out;
}

double pj_upper(const GridFunction& f, int j, const Exhaustion& ex, const std::vector<double>& radii) {
  if (j < 1 || j > static_cast<int>(ex.sets.size())) throw InvalidArgument("pj_upper: j out of range");
  const CompactSet& kj = ex.sets[static_cast<std::size_t>(j - 1)];
  const double margin = distance_to_complement(kj, f.domain());
  double best = std::numeric_limits<double>::infinity();
  for (double r : radii) {
    if (!(r > 0.0 && r < margin)) continue;
    best = std::min(best, sup_norm_on(convolve_near(f, TestFunction::bump(r), kj), kj));
  }
  if (std::isinf(best)) throw InvalidArgument("pj_upper: no admissible radius");
  return best;
}

CheckResult check_Delta_iff_pj(const FundamentalSeq& fn, const Exhaustion& ex,
                               const std::vector<double>& radii, const EquivParams& params) {
  params.validate();
  if (!(ex.ambient == fn.domain())) throw InvalidArgument("check_Delta_iff_pj: exhaustion of another set");
  const GridFunction zero = scaled(0.0, fn(1));
  const std::vector<int> ns = tail_indices(params.horizon);
  CheckResult out;
  out.lemma_ref = "T-equiv";
  out.horizon = params.horizon;
  out.bound = 0.0;
  int disagreements = 0;
  bool undecided = false;
  for (std::size_t j = 1; j <= ex.sets.size(); ++j) {
    const CompactSet& kj = ex.sets[j - 1];
    const CheckResult delta = Delta_converges(fn, zero, kj, params.witness, params);
    std::vector<double> trace;
    for (int n : ns) trace.push_back(pj_upper(fn(n), static_cast<int>(j), ex, radii));
    const Status pj = limit_verdict(ns, trace, params.tol);
    out.residuals.push_back(trace.back());
    if (delta.status != pj) {
      if (delta.status == Status::inconclusive || pj == Status::inconclusive) {
        undecided = true;
      } else {
        ++disagreements;
      }
    }
    out.note += (out.note.empty() ? "" : "; ") + ("j=" + std::to_string(j) + " Delta " +
                                                   to_string(delta.status) + " P " + to_string(pj));
  }
  out.max_residual = disagreements;
  out.status = disagreements > 0 ? Status::refuted : undecided ? Status::inconclusive : Status::verified;
  return out;
}

ExtractionResult extract_fundamental_subsequence(const FundamentalSeq& fn, const Exhaustion& ex,
                                                 const EquivParams& params,
                                                 const ExtractionOptions& opt) {
  params.validate();
  const OpenSet& u = fn.domain();
  if (!(ex.ambient == u)) throw InvalidArgument("extraction: exhaustion of another set");
  if (const auto v = exhaustion_violations(ex); !v.empty()) {
    throw InvalidArgument("extraction: exhaustion invalid: " + v.front());
  }
  const int depth = opt.depth;
  if (depth < 1 || static_cast<int>(ex.sets.size()) < depth + 1) {
    throw InvalidArgument("extraction: the exhaustion needs depth + 1 compacts");
  }
  if (opt.fractions.empty() || opt.strides.empty()) throw InvalidArgument("extraction: empty search family");

  std::vector<double> margin;  // d(K_j, U^c), j from 1
  for (const auto& k : ex.sets) margin.push_back(distance_to_complement(k, u));
  auto kset = [&](int j) -> const CompactSet& { return ex.sets[static_cast<std::size_t>(j - 1)]; };
  auto gap = [&](int p, int q, const TestFunction& phi, int j) {
    return sup_norm_on(convolve_near(fn(q) - fn(p), phi, kset(j)), kset(j));
  };

  std::vector<int> idx;
  std::vector<double> eps;
  std::vector<TestFunction> phis;
  std::vector<double> residual;
  std::string failure;
  for (int n = 1; n <= depth + 1 && failure.empty(); ++n) {
    const double e = 0.9 * margin[static_cast<std::size_t>(std::min(n, depth))];
    bool found = false;
    const int start = idx.empty() ? 1 : idx.back() + 1;
    for (int p = start; p <= opt.index_budget && !found; ++p) {
      double link = 0.0;
      if (n > 1) {
        link = gap(idx.back(), p, phis.back(), n);
        if (!(link < std::ldexp(1.0, -(n - 1)))) continue;
      }
      if (n == depth + 1) {
        idx.push_back(p);
        residual.push_back(link);
        found = true;
        break;
      }
      for (double frac : opt.fractions) {
        const TestFunction phi = TestFunction::bump(frac * e);
        double worst = 0.0;
        for (int s : opt.strides) {
          worst = std::max(worst, gap(p, p + s, phi, n + 1));
          if (!(worst < std::ldexp(1.0, -n))) break;
        }
        if (worst < std::ldexp(1.0, -n)) {
          if (n > 1) residual.push_back(link);
          idx.push_back(p);
          eps.push_back(e);
          phis.push_back(phi);
          found = true;
          break;
        }
      }
    }
    if (!found) failure = "no index up to the budget certifies step n=" + std::to_string(n);
  }

  std::vector<Certificate> certs;
  for (std::size_t i = 0; i < residual.size() && i < phis.size(); ++i) {
    Certificate c;
    c.n = static_cast<int>(i) + 1;
    c.p = idx[i];
    c.eps = eps[i];
    c.support = phis[i].radius();
    c.margin = margin[i];
    c.residual = residual[i];
    c.bound = std::ldexp(1.0, -c.n);
    c.summable = c.eps < c.bound;
    c.fits = c.support < c.eps;
    c.defined = c.support < c.margin;
    c.small = c.residual < c.bound;
    certs.push_back(c);
  }

  // Continue with consecutive indices past the certified prefix.
  const std::vector<int> prefix = idx;
  auto p_of = [prefix](int n) {
    if (prefix.empty()) return n;
    if (n <= static_cast<int>(prefix.size())) return prefix[static_cast<std::size_t>(n - 1)];
    return prefix.back() + (n - static_cast<int>(prefix.size()));
  };
  FundamentalSeq sub(u, [fn, p_of](int n) { return fn(p_of(n)); }, "subsequence");

  std::vector<double> s;
  for (const auto& phi : phis) s.push_back(phi.radius());
  if (s.empty()) s.push_back(0.5 * margin.front());
  auto s_of = [s](int k) {
    if (k <= static_cast<int>(s.size())) return s[static_cast<std::size_t>(k - 1)];
    return std::ldexp(s.back(), -(k - static_cast<int>(s.size())));
  };
  auto tail_of = [s, s_of](int k) {
    const int last = static_cast<int>(s.size());
    double t = 0.0;
    for (int i = k; i <= last; ++i) t += s_of(i);
    return t + 2.0 * s_of(std::max(k, last + 1));
  };
  double sum = 0.0;
  for (int k = 1; k <= 200; ++k) sum += tail_of(k);
  const DeltaSeq witness = DeltaSeq::from_rule(
      [s_of, tail_of](int k) {
        std::vector<TestFunction> factors;
        for (int i = k; i < k + 4; ++i) factors.push_back(TestFunction::bump(s_of(i)));
        return TestFunction::truncated_product(std::move(factors), tail_of(k));
      },
      tail_of, true, sum, "extracted");

  EquivParams fp = params;
  fp.witness = witness;
  fp.compacts.clear();
  CheckResult fund = is_fundamental(sub, fp);

  CheckResult result;
  result.lemma_ref = "L-seqconstr";
  result.horizon = depth;
  result.bound = 0.0;
  int broken = 0;
  double worst_ratio = 0.0;
  for (const auto& c : certs) {
    if (!c.ok()) ++broken;
    worst_ratio = std::max(worst_ratio, c.residual / c.bound);
    result.residuals.push_back(c.residual);
  }
  result.max_residual = worst_ratio;
  result.bound = 1.0;
  if (!failure.empty()) {
    result.status = Status::inconclusive;
    result.note = failure;
  } else if (broken > 0) {
    result.status = Status::refuted;
    result.note = std::to_string(broken) + " certificate(s) broken";
  } else {
    result.status = fund.status;
    result.note = "fundamental: " + to_string(fund.status);
  }
  return ExtractionResult{std::move(idx), std::move(eps), std::move(phis), std::move(certs),
                          std::move(sub), witness, std::move(fund), std::move(result)};
}

std::vector<CheckResult> class_bridge_cases(const std::vector<BridgeInstance>& instances,
                                            const EquivParams& params,
                                            const ExtractionOptions& opt) {
  std::vector<CheckResult> rows;
  for (const auto& inst : instances) {
    const OpenSet& u = inst.seq.domain();
    const CompactSet k = compacts_for(u, params).front();
    const CheckResult fund = is_fundamental(inst.seq, params);
    bool cauchy = false;
    if (fund.verified()) {
      CheckResult r = Delta_cauchy(inst.seq, k, inst.Delta_witness, params);
      r.case_id = inst.name + ": fundamental is Delta-Cauchy";
      r.lemma_ref = "C13-cover";
      cauchy = r.verified();
      rows.push_back(std::move(r));
    }
    if (!cauchy) continue;
    const Exhaustion ex = compact_exhaustion(u, opt.depth + 1);
    const ExtractionResult a = extract_fundamental_subsequence(inst.seq, ex, params, opt);
    CheckResult ra = a.result;
    ra.case_id = inst.name + ": extraction is fundamental";
    ra.lemma_ref = "C14-exist";
    rows.push_back(ra);

    const FundamentalSeq other =
        inst.alternate ? *inst.alternate
                       : FundamentalSeq(u, [seq = inst.seq](int n) { return seq(n + 3); }, "shifted");
    const ExtractionResult b = extract_fundamental_subsequence(other, ex, params, opt);
    CheckResult rb;
    if (b.result.verified() && a.result.verified()) {
      rb = equivalent(Boehmian{a.subsequence, a.witness, {}}, Boehmian{b.subsequence, b.witness, {}},
                      params);
    } else {
      rb.status = Status::inconclusive;
      rb.note = "second extraction: " + to_string(b.result.status);
    }
    rb.case_id = inst.name + ": extractions are equivalent";
    rb.lemma_ref = "C14-unique";
    rows.push_back(std::move(rb));
  }
  return rows;
}

CheckResult check_class_bridge(const std::vector<BridgeInstance>& instances,
                               const EquivParams& params, const ExtractionOptions& opt) {
  const auto rows = class_bridge_cases(instances, params, opt);
  CheckResult out;
  out.lemma_ref = "C14-bridge";
  out.horizon = params.horizon;
  out.bound = params.tol;
  std::vector<Status> ss;
  for (const auto& r : rows) {
    ss.push_back(r.status);
    out.max_residual = std::max(out.max_residual, r.max_residual);
    out.residuals.push_back(r.max_residual);
  }
  out.status = worst_of(ss);
  out.note = std::to_string(rows.size()) + " property rows";
  return out;
}

}  // namespace boehm
