// Acceptance criteria, one PASS/FAIL line each. Exit status 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "boehm/bridge.hpp"
#include "boehm/sheaf.hpp"
#include "oracles.hpp"

using namespace boehm;

namespace {

const OpenSet kUnit = OpenSet::interval(-1, 1);
const CompactSet kMid = CompactSet::interval(-0.5, 0.5);

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

double wave(double x) { return std::sin(3 * x) + 0.5 * x; }
double kinked(double x) { return std::sin(2 * x) + std::abs(x - 0.1); }

Boehmian continuous_on(const std::function<double(double)>& f, const OpenSet& u) {
  return from_continuous(sample(f, u, 1e-3));
}

bool all_verified(const std::vector<CheckResult>& rs, double bound = INFINITY) {
  for (const auto& r : rs)
    if (!r.verified() || !(r.max_residual < bound)) return false;
  return !rs.empty();
}

double max_residual(const std::vector<CheckResult>& rs) {
  double m = 0.0;
  for (const auto& r : rs) m = std::max(m, r.max_residual);
  return m;
}

// 1 ------------------------------------------------------------------------

void young(Outcome& o) {
  std::mt19937_64 rng(20240917);
  auto u01 = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  int refuted = 0, oracle_violations = 0;
  double worst_gap = -INFINITY;
  for (int i = 0; i < 200; ++i) {
    const int deg = static_cast<int>(rng() % 5);
    std::vector<double> c;
    for (int k = 0; k <= deg; ++k) c.push_back(-2.0 + 4.0 * u01());
    const double s = 0.02 + 0.18 * u01();
    const double eps = s * (1.05 + 0.95 * u01());
    const double a = -1.0 + u01();
    const double b = a + 2 * eps + 0.1 + 0.9 * u01();
    auto f = [c](double x) {
      double v = 0.0;
      for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
      return v;
    };
    const auto r = check_young(sample(f, OpenSet::interval(a - 0.05, b + 0.05), 1e-3), standard_bump(s),
                               CompactSet::interval(a, b), eps, 1e-6);
    if (r.refuted()) ++refuted;
    // oracle: exact f ∗ φ at the reported argmax against the dense sup of |f| on K
    double sup_f = 0.0;
    for (int j = 0; j <= 20000; ++j) sup_f = std::max(sup_f, std::abs(f(a + (b - a) * j / 20000.0)));
    const double x = r.witness->location;
    const double lhs = std::abs(oracle::integrate([&](double y) { return f(x - y) * oracle::bump(s, y); }, -s, s,
                                                  1e-14, 16));
    if (lhs > sup_f + 1e-6) ++oracle_violations;
    worst_gap = std::max(worst_gap, lhs - sup_f);
  }
  o.require(refuted == 0, "library refutations");
  o.require(oracle_violations == 0, "oracle violations");
  o.detail << "200 cases, " << refuted << " refuted, " << oracle_violations
           << " oracle violations, max(lhs - rhs) = " << worst_gap;
}

// 2 ------------------------------------------------------------------------

void mollify(Outcome& o) {
  struct Inst {
    const char* name;
    std::function<double(double)> f;
    double L;
  };
  const std::vector<Inst> insts{
      {"|x|", [](double x) { return std::abs(x); }, 1.0},
      {"|3x-0.3|", [](double x) { return std::abs(3 * x - 0.3); }, 3.0},
      {"sin(3x)", [](double x) { return std::sin(3 * x); }, 3.0},
      {"0.5x+cos(2x)", [](double x) { return 0.5 * x + std::cos(2 * x); }, 2.5},
      {"exp(x)", [](double x) { return std::exp(x); }, std::exp(1.0)},
  };
  const CompactSet k = CompactSet::interval(-0.4, 0.4);
  const DeltaSeq seq = default_witness();
  ConvergenceOptions opt;
  opt.horizon = 12;
  opt.slack = 1e-4;
  double worst_final = 0.0, worst_excess = -INFINITY;
  for (const auto& in : insts) {
    ConvergenceOptions oi = opt;
    oi.lipschitz = in.L;
    const auto r = check_mollifier_convergence(sample(in.f, kUnit, 1e-3), seq, k, oi);
    o.require(r.verified(), std::string(in.name) + " verdict");
    o.require(r.residuals.size() == 12, std::string(in.name) + " trace length");
    for (std::size_t i = 0; i < r.residuals.size(); ++i) {
      const double excess = r.residuals[i] - (in.L * seq.radius(static_cast<int>(i) + 1) + 1e-4);
      worst_excess = std::max(worst_excess, excess);
    }
    worst_final = std::max(worst_final, r.residuals.back());
    if (std::string(in.name) == "|x|") {
      // ‖|x| - |x| ∗ φ_n‖ is attained at 0 and equals ∫|y| φ_n(y) dy
      const double s = seq.radius(12);
      const double ref = oracle::integrate([s](double y) { return std::abs(y) * oracle::bump(s, y); }, -s, s);
      o.require(std::abs(r.residuals.back() - ref) < 1e-6, "|x| residual against the oracle");
      o.detail << "|x| r_12 = " << r.residuals.back() << " (oracle " << ref << "); ";
    }
  }
  o.require(worst_excess <= 0.0, "r_n <= L s_n + 1e-4");
  o.require(worst_final < 1e-3, "final residual");
  o.detail << "max r_n - (L s_n + 1e-4) = " << worst_excess << ", max r_12 = " << worst_final;
}

// 3 ------------------------------------------------------------------------

void infconv(Outcome& o) {
  const DeltaSeq seq = DeltaSeq::geometric(0.5, 0.5);
  const auto res = infinite_convolution(seq, 1e-6, 1e-6);
  o.require(res.psi.radius() <= 1.0, "declared support <= 1");
  const auto heads = product_heads(seq, res.terms + 3, res.psi.radius());
  double step = 0.0;
  for (std::size_t k = static_cast<std::size_t>(res.terms); k < heads.size(); ++k) {
    for (std::size_t j = 0; j < heads[k].size(); ++j)
      step = std::max(step, std::abs(heads[k][j] - heads[k - 1][j]));
  }
  o.require(step < 1e-6, "successive truncations");
  const TestFunction psi = res.psi;
  const double mass = oracle::integrate([&psi](double x) { return psi(x); }, -1.0, 1.0, 1e-13, 512);
  o.require(std::abs(mass - 1.0) < 1e-6, "unit mass");
  o.detail << "declared radius " << res.psi.radius() << ", " << res.terms << " terms, sup step " << step
           << ", mass - 1 = " << mass - 1.0;
}

// 4 ------------------------------------------------------------------------

void dirac_class(Outcome& o) {
  const EquivParams p;
  const auto d = dirac(0.0, default_witness(), kUnit);
  const auto fund = is_fundamental(d.rep, p);
  o.require(fund.verified() && fund.max_residual < 1e-3, "is_fundamental");
  EquivParams q = p;
  q.compacts = {kMid};
  const auto rep = equivalence_report(d, zero_boehmian(kUnit), q);
  o.require(rep.result.refuted(), "dirac vs zero refuted");
  const double peak = oracle::bump(default_witness().radius(3), 0.0);
  bool found = false;
  for (const auto& e : rep.entries) {
    if (e.m != 3) continue;
    found = true;
    o.require(e.stabilized, "m=3 stabilized");
    o.require(e.trace.back() >= 0.5 * peak, "m=3 residual >= 0.5 phi_3(0)");
    o.detail << "m=3 residual " << e.trace.back() << " vs phi_3(0) = " << peak << "; ";
  }
  o.require(found, "m=3 examined");
  o.detail << "fundamental residual " << fund.max_residual;
}

// 5 ------------------------------------------------------------------------

void identification(Outcome& o) {
  for (double s : {0.2, 0.1}) {
    const double eps = 0.25;
    const OpenSet inner = erode(kUnit, eps);
    const auto phi_class = from_continuous(
        sample([s](double x) { return oracle::bump(s, x); }, inner, 1e-3, std::vector<Zone>{{-s, s, s / 64}}));
    const auto r = equivalent(conv_boehmian(dirac(0.0, default_witness(), kUnit), standard_bump(s), eps),
                              phi_class, EquivParams{});
    o.require(r.verified() && r.max_residual < 1e-3, "s = " + std::to_string(s));
    o.detail << "s=" << s << " residual " << r.max_residual << "; ";
  }
}

// 6 ------------------------------------------------------------------------

void vector_laws(Outcome& o) {
  const EquivParams p;
  const auto f = continuous_on(wave, kUnit);
  const auto g = dirac(0.2, default_witness(), kUnit);
  const auto g2 = dirac(0.2, DeltaSeq::geometric(0.3, 0.6), kUnit);
  const auto m = mollified(Expr::absolute(1.0, 0.0), default_witness(), kUnit);
  const auto z = zero_boehmian(kUnit);
  const double a = 2.5, b = -0.75;
  const std::vector<std::pair<Boehmian, Boehmian>> laws{
      {add(f, g), add(g, f)},
      {add(add(f, g), m), add(f, add(g, m))},
      {add(f, z), f},
      {sub(f, f), z},
      {sub(g, g), z},
      {scale(1.0, g), g},
      {scale(a, scale(b, g)), scale(a * b, g)},
      {scale(a, add(f, g)), add(scale(a, f), scale(a, g))},
      {scale(a + b, g), add(scale(a, g), scale(b, g))},
      {scale(0.0, g), z},
      {add(g, f), add(g2, f)},
      {scale(a, g), scale(a, g2)},
  };
  std::vector<CheckResult> rs;
  for (const auto& [l, r] : laws) rs.push_back(equivalent(l, r, p));
  int ok = 0;
  for (const auto& r : rs) ok += r.verified() ? 1 : 0;
  o.require(ok == 12, "all 12 laws");
  o.detail << ok << "/12 verified at horizon " << p.horizon << ", max residual " << max_residual(rs);
}

// 7 ------------------------------------------------------------------------

void commutation(Outcome& o) {
  const EquivParams p;
  const OpenSet u = OpenSet::interval(-0.8, 0.6);
  const auto phi = standard_bump(0.1);
  const double eps = 0.15;
  const auto f = continuous_on(wave, kUnit);
  const std::vector<Boehmian> insts{
      f,
      dirac(0.0, default_witness(), kUnit),
      dirac(0.3, DeltaSeq::geometric(0.3, 0.6), kUnit),
      mollified(Expr::absolute(1.0, 0.0), default_witness(), kUnit),
      add(f, dirac(-0.2, default_witness(), kUnit)),
      custom_expression(Expr::cosine(1.0, 2.0), 1e-4, kUnit),
  };
  std::vector<CheckResult> rs;
  for (const auto& c : insts) {
    rs.push_back(equivalent(restrict(conv_boehmian(c, phi, eps), erode(u, eps)),
                            conv_boehmian(restrict(c, u), phi, eps), p));
  }
  o.require(all_verified(rs, 1e-3), "6 instances within 1e-3");
  o.detail << rs.size() << " instances, max residual " << max_residual(rs);
}

// 8 ------------------------------------------------------------------------

void gluing(Outcome& o) {
  const EquivParams p;
  const OpenSet left = OpenSet::interval(-1, 0.6);
  const OpenSet right = OpenSet::interval(-0.6, 1);
  const auto c = glue_pair(continuous_on(kinked, left), continuous_on(kinked, right), p);
  const auto ca = equivalent(c.glued, continuous_on(kinked, kUnit), p);
  o.require(ca.verified() && ca.max_residual < 1e-4, "continuous scene within 1e-4");
  o.require(all_verified(c.contracts), "continuous contracts");
  const auto d = glue_pair(dirac(0.0, default_witness(), left), dirac(0.0, default_witness(), right), p);
  const auto da = equivalent(d.glued, dirac(0.0, default_witness(), kUnit), p);
  o.require(da.verified() && da.max_residual < 1e-3, "dirac scene within 1e-3");
  o.require(all_verified(d.contracts) && d.contracts.size() == 2, "dirac contracts H|U ~ F, H|V ~ G");
  o.detail << "continuous residual " << ca.max_residual << ", dirac residual " << da.max_residual
           << ", contract residuals " << max_residual(c.contracts) << " / " << max_residual(d.contracts);
}

// 9 ------------------------------------------------------------------------

void countable(Outcome& o) {
  const EquivParams p;
  constexpr int depth = 8;
  const OpenSet whole = OpenSet::interval(std::ldexp(1.0, -depth - 1), 1);
  const auto global = add(continuous_on(wave, whole), dirac(0.5, default_witness(), whole));
  std::vector<Boehmian> sections;
  for (int i = 1; i <= depth; ++i) sections.push_back(restrict(global, OpenSet::interval(std::ldexp(1.0, -i - 1), 1)));
  const auto r = glue_countable(SectionAssignment(sections), depth, p);
  o.require(r.contracts.size() == depth && all_verified(r.contracts, 1e-3), "contracts on every piece");

  std::vector<Boehmian> reversed(sections.rbegin(), sections.rend());
  std::vector<Boehmian> mixed{sections[3], sections[0], sections[6], sections[2],
                              sections[7], sections[1], sections[5], sections[4]};
  double perm_residual = 0.0;
  for (const auto* order : {&reversed, &mixed}) {
    const auto q = glue_countable(SectionAssignment(*order), depth, p);
    const auto e = equivalent(q.glued, r.glued, p);
    o.require(e.verified() && e.max_residual < 1e-3, "permutation equivalent");
    o.require(all_verified(q.contracts, 1e-3), "permuted contracts");
    perm_residual = std::max(perm_residual, e.max_residual);
  }
  o.detail << depth << " pieces, max contract residual " << max_residual(r.contracts)
           << ", permutation residual " << perm_residual;
}

// 10 -----------------------------------------------------------------------

void sheaf_axioms(Outcome& o) {
  const EquivParams p;
  const Cover two({OpenSet::interval(-1, 0.6), OpenSet::interval(-0.6, 1)});
  const auto d = dirac(0.0, default_witness(), kUnit);
  const auto d2 = dirac(0.0, DeltaSeq::geometric(0.3, 0.6), kUnit);
  const auto same = verify_locality(d, d2, two, p);
  o.require(same.global.verified() && all_verified(same.local), "dirac representatives equal");
  const auto cont = verify_locality(continuous_on(wave, kUnit),
                                    custom_expression(Expr::sum({Expr::sine(1.0, 3.0), Expr::poly({0.0, 0.5})}),
                                                      1e-4, kUnit),
                                    two, p);
  o.require(cont.global.verified() && all_verified(cont.local), "continuous representatives equal");
  const auto apart = verify_locality(d, zero_boehmian(kUnit), two, p);
  bool local_refuted = false;
  for (const auto& l : apart.local) local_refuted = local_refuted || l.refuted();
  o.require(local_refuted && apart.global.refuted(), "dirac vs zero refuted locally and globally");
  const auto laws = check_presheaf_laws({continuous_on(wave, kUnit), d, mollified(Expr::absolute(1.0, 0.0),
                                                                                    default_witness(), kUnit)},
                                        10, 20240917);
  o.require(laws.verified() && laws.max_residual == 0.0, "presheaf laws bit-exact");
  o.detail << "global residuals " << same.global.max_residual << " / " << cont.global.max_residual
           << ", dirac vs zero global residual " << apart.global.max_residual << ", presheaf: " << laws.note;
}

// 11 -----------------------------------------------------------------------

FundamentalSeq custom(std::function<GridFunction(int)> g) { return FundamentalSeq(kUnit, std::move(g), "custom"); }

FundamentalSeq smoothing_gap(const Expr& e) {
  const auto m = mollified(e, default_witness(), kUnit);
  const GridFunction g = sample(e, kUnit, 1e-3);
  return custom([m, g](int n) { return m(n) - g; });
}

void bridge(Outcome& o) {
  const EquivParams p;
  const GridFunction f = sample(wave, kUnit, 1e-3);
  const GridFunction zero = scaled(0.0, f);
  auto offset = [&](double c, double power) {
    return custom([c, power](int n) { return sample([&](double x) { return wave(x) + c / std::pow(n, power); }, kUnit, 1e-3); });
  };
  const std::vector<std::pair<FundamentalSeq, GridFunction>> battery{
      {custom([f](int) { return f; }), f},
      {offset(1.0, 1.0), f},
      {offset(1.0, 2.0), f},
      {offset(1.0, 0.0), f},
      {smoothing_gap(Expr::absolute(1.0, 0.0)), zero},
      {dirac(0.0, default_witness(), kUnit).rep, zero},
      {mollified(Expr::absolute(1.0, 0.0), default_witness(), kUnit).rep,
       sample([](double x) { return std::abs(x); }, kUnit, 1e-3)},
  };
  int premises = 0, implied = 0;
  for (const auto& [seq, lim] : battery) {
    if (!delta_converges(seq, lim, kMid, p).verified()) continue;
    ++premises;
    if (Delta_converges(seq, lim, kMid, p.witness, p).verified()) ++implied;
  }
  o.require(premises > 0 && implied == premises, "delta implies Delta");
  o.detail << "delta=>Delta " << implied << "/" << premises << "; ";

  const Exhaustion ex3 = compact_exhaustion(kUnit, 3);
  const auto radii = radius_grid(ex3.margins[0], 6);
  const GridFunction xsq = sample([](double x) { return x * x; }, kUnit, 1e-3);
  const std::vector<FundamentalSeq> pj_insts{
      custom([](int) { return sample([](double) { return 1.0; }, kUnit, 1e-3); }),
      custom([](int n) { return sample([n](double) { return 1.0 / n; }, kUnit, 1e-3); }),
      smoothing_gap(Expr::absolute(1.0, 0.0)),
      dirac(0.0, default_witness(), kUnit).rep,
      custom([xsq](int n) { return scaled(1.0 / n, xsq); }),
      smoothing_gap(Expr::sine(1.0, 3.0)),
  };
  int agree = 0;
  for (const auto& s : pj_insts) agree += check_Delta_iff_pj(s, ex3, radii, p).verified() ? 1 : 0;
  o.require(agree == 6, "Delta iff P_j on 6 instances");
  o.detail << "Delta<=>P_j " << agree << "/6; ";

  const Exhaustion ex = compact_exhaustion(kUnit, 9);
  const auto d = dirac(0.0, default_witness(), kUnit);
  const auto d2 = dirac(0.0, DeltaSeq::geometric(0.3, 0.6), kUnit);
  const auto moll = mollified(Expr::absolute(1.0, 0.0), default_witness(), kUnit);
  double worst_ratio = 0.0, worst_recomputed = 0.0;
  std::vector<ExtractionResult> extracted;
  for (const FundamentalSeq* s : {&moll.rep, &d.rep, &d2.rep}) {
    auto res = extract_fundamental_subsequence(*s, ex, p);
    o.require(res.certificates.size() >= 8, "eight certificates");
    for (const auto& c : res.certificates) {
      if (c.n > 8) continue;
      const auto nn = static_cast<std::size_t>(c.n);
      const double bound = std::ldexp(1.0, -c.n);
      const double support = res.mollifiers[nn - 1].radius();
      o.require(res.radii[nn - 1] < bound, "(1) eps_n < 2^-n");
      o.require(support < res.radii[nn - 1], "(2) s(phi_n) < eps_n");
      o.require(support < distance_to_complement(ex.sets[nn - 1], kUnit), "(3) s(phi_n) < d(K_n, U^c)");
      // (4) recomputed from the sequence
      const CompactSet& k_next = ex.sets[nn];
      const auto& phi = res.mollifiers[nn - 1];
      const double r4 = sup_distance_on(convolve_near((*s)(res.indices[nn]), phi, k_next),
                                        convolve_near((*s)(res.indices[nn - 1]), phi, k_next), k_next)
                            .value;
      o.require(r4 < bound + 1e-6, "(4) residual < 2^-n + 1e-6");
      worst_recomputed = std::max(worst_recomputed, std::abs(r4 - c.residual));
      worst_ratio = std::max(worst_ratio, r4 / bound);
    }
    o.require(is_fundamental(res.subsequence, p).verified(), "extracted subsequence fundamental");
    extracted.push_back(std::move(res));
  }
  const auto same_class = equivalent(Boehmian{extracted[1].subsequence, extracted[1].witness, {}},
                                     Boehmian{extracted[2].subsequence, extracted[2].witness, {}}, p);
  o.require(same_class.verified() && same_class.max_residual < 1e-3, "two extractions delta-equivalent");
  o.detail << "max (4)/2^-n " << worst_ratio << ", certificate vs recomputed " << worst_recomputed
           << ", extraction equivalence residual " << same_class.max_residual;
}

// 12 -----------------------------------------------------------------------

void quadrature(Outcome& o) {
  struct Integrand {
    const char* name;
    std::function<double(double)> f;
  };
  const std::vector<Integrand> smooth{
      {"exp(x)", [](double x) { return std::exp(x); }},
      {"2+cos(3x)", [](double x) { return 2.0 + std::cos(3 * x); }},
      {"1/(1+x^2)", [](double x) { return 1.0 / (1.0 + x * x); }},
  };
  double worst = INFINITY;
  for (const auto& in : smooth) {
    const double exact = oracle::integrate(in.f, -1.0, 1.0, 1e-15, 256);
    for (double h : {0.04, 0.02}) {
      const double e1 = std::abs(l1_norm(sample(in.f, kUnit, h)) - exact);
      const double e2 = std::abs(l1_norm(sample(in.f, kUnit, h / 2)) - exact);
      // against the 10x resolution grid as well
      const double fine = l1_norm(sample(in.f, kUnit, h / 10));
      const double r_fine = std::abs(l1_norm(sample(in.f, kUnit, h)) - fine) /
                            std::abs(l1_norm(sample(in.f, kUnit, h / 2)) - fine);
      const double ratio = e1 / e2;
      worst = std::min({worst, ratio, r_fine});
      o.detail << in.name << " h=" << h << " ratio " << ratio << " (10x grid " << r_fine << "); ";
    }
  }
  o.require(worst >= 8.0, "error ratio >= 8");
  o.detail << "min ratio " << worst;
}

}  // namespace

int main() {
  struct Criterion {
    const char* id;
    const char* title;
    void (*body)(Outcome&);
  };
  const Criterion criteria[] = {
      {"AC1", "Young inequality battery", young},
      {"AC2", "mollifier convergence rate", mollify},
      {"AC3", "infinite convolution", infconv},
      {"AC4", "dirac is a proper class", dirac_class},
      {"AC5", "dirac * phi = phi", identification},
      {"AC6", "vector-space laws", vector_laws},
      {"AC7", "restriction commutes with convolution", commutation},
      {"AC8", "gluing two sections", gluing},
      {"AC9", "countable gluing on a dyadic cover", countable},
      {"AC10", "locality and presheaf laws", sheaf_axioms},
      {"AC11", "delta/Delta bridge and extraction", bridge},
      {"AC12", "quadrature order", quadrature},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.body(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "[exception: " << e.what() << "]";
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %-5s %s (%.1fs): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.title, sec, o.detail.str().c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d of 12 criteria passed\n", 12 - failed);
  return failed == 0 ? 0 : 1;
}
