// Suites for mollifiers, classes, the vector space and regularization.

#include <algorithm>
#include <cmath>

#include "boehm/errors.hpp"
#include "suites.hpp"

namespace boehm::suites {

namespace {

const OpenSet kUnit = OpenSet::interval(-1, 1);

double wave(double x) { return std::sin(3 * x) + 0.5 * x; }

Boehmian wave_on(const OpenSet& u, double h) { return from_continuous(sample(wave, u, h)); }

struct Lipschitz {
  std::string name;
  Expr f;
  double L;
};

}  // namespace

void young(CaseLog& log, const RunConfig& cfg) {
  auto rng = rng_for(cfg, "young");
  for (int i = 0; i < 200; ++i) {
    const int deg = static_cast<int>(rng() % 5);
    std::vector<double> coeffs;
    for (int k = 0; k <= deg; ++k) coeffs.push_back(-2.0 + 4.0 * uniform01(rng));
    const double s = 0.02 + 0.18 * uniform01(rng);
    const double eps = s * (1.05 + 0.95 * uniform01(rng));
    const double a = -1.0 + uniform01(rng);
    const double b = a + 2 * eps + 0.1 + 0.9 * uniform01(rng);
    const Expr f = Expr::poly(coeffs);
    char id[96];
    std::snprintf(id, sizeof id, "young-%03d deg=%d s=%.4f eps=%.4f K=[%.3f %.3f]", i + 1, deg, s, eps, a, b);
    log.run(id, "L1-young", [&] {
      const GridFunction g = sample(f, OpenSet::interval(a - 0.05, b + 0.05), cfg.grid_h);
      return check_young(g, standard_bump(s), CompactSet::interval(a, b), eps, cfg.tol_quad);
    });
  }
}

void mollify(CaseLog& log, const RunConfig& cfg) {
  const std::vector<Lipschitz> instances{
      {"|3x-0.3|", Expr::absolute(3.0, 0.1), 3.0},
      {"sin(3x)", Expr::sine(1.0, 3.0), 3.0},
      {"0.5x+cos(2x)", Expr::sum({Expr::poly({0.0, 0.5}), Expr::cosine(1.0, 2.0)}), 2.5},
      {"|x|+0.2x", Expr::sum({Expr::absolute(1.0, 0.0), Expr::poly({0.0, 0.2})}), 1.2},
      {"exp(x)", Expr::exponential(1.0, 1.0), std::exp(1.0)},
      {"x^2", Expr::poly({0.0, 0.0, 1.0}), 2.0},
  };
  const CompactSet k = CompactSet::interval(-0.4, 0.4);
  ConvergenceOptions opt;
  opt.horizon = 12;
  opt.tol = cfg.tol_sup;
  opt.tol_quad = cfg.tol_quad;
  opt.slack = 1e-4;
  for (const auto& inst : instances) {
    log.run("lipschitz " + inst.name + " L=" + fmt(inst.L), "L4-mollify", [&] {
      ConvergenceOptions o = opt;
      o.lipschitz = inst.L;
      return check_mollifier_convergence(sample(inst.f, kUnit, cfg.grid_h), default_witness(), k, o);
    });
  }
  log.run("second schedule sin(3x)", "L4-mollify", [&] {
    ConvergenceOptions o = opt;
    o.lipschitz = 3.0;
    return check_mollifier_convergence(sample(Expr::sine(1.0, 3.0), kUnit, cfg.grid_h),
                                       DeltaSeq::geometric(0.3, 0.6), k, o);
  });

  ConvergenceOptions diag = opt;
  diag.horizon = cfg.horizon;
  const CompactSet kd = CompactSet::interval(-0.5, 0.5);
  log.run("diagonal sin(2x)+1/n", "C5-mollify", [&] {
    auto fn = [h = cfg.grid_h](int n) {
      return sample([n](double x) { return std::sin(2 * x) + 1.0 / n; }, kUnit, h);
    };
    return check_diagonal_mollification(fn, default_witness(), kd, 0.1, diag);
  });
  log.run("diagonal |x|+1/n^2", "C5-mollify", [&] {
    auto fn = [h = cfg.grid_h](int n) {
      return sample([n](double x) { return std::abs(x) + 1.0 / (double(n) * n); }, kUnit, h);
    };
    return check_diagonal_mollification(fn, default_witness(), kd, 0.1, diag);
  });
}

void infconv(CaseLog& log, const RunConfig&) {
  struct Schedule {
    std::string name;
    DeltaSeq seq;
    double declared;
  };
  const std::vector<Schedule> schedules{
      {"radii 2^-n", DeltaSeq::geometric(0.5, 0.5), 1.0},
      {"radii 0.3*0.6^(n-1)", DeltaSeq::geometric(0.3, 0.6), 0.75},
  };
  for (const auto& sc : schedules) {
    const auto res = infinite_convolution(sc.seq, 1e-6, 1e-6);
    log.run(sc.name + " declared support", "T3-infconv", [&] {
      CheckResult r;
      r.max_residual = res.psi.radius();
      r.bound = sc.declared;
      r.horizon = res.terms;
      r.status = res.psi.radius() <= sc.declared ? Status::verified : Status::refuted;
      r.note = "terms " + std::to_string(res.terms);
      return r;
    });
    log.run(sc.name + " successive truncations", "T3-infconv", [&] {
      const auto heads = product_heads(sc.seq, res.terms + 3, res.psi.radius());
      double worst = 0.0;
      std::vector<double> steps;
      for (std::size_t k = 1; k < heads.size(); ++k) {
        double d = 0.0;
        for (std::size_t j = 0; j < heads[k].size(); ++j) d = std::max(d, std::abs(heads[k][j] - heads[k - 1][j]));
        steps.push_back(d);
        if (static_cast<int>(k) >= res.terms - 1) worst = std::max(worst, d);
      }
      CheckResult r = below(worst, 1e-6, "sup steps from head " + std::to_string(res.terms));
      r.horizon = res.terms + 3;
      r.residuals = steps;
      return r;
    });
    log.run(sc.name + " unit mass", "T3-infconv", [&] {
      return below(std::abs(l1_norm(res.psi.realization()) - 1.0), 1e-6);
    });
    log.run(sc.name + " nonnegative", "T3-infconv", [&] {
      double lowest = 0.0;
      for (const auto& p : res.psi.realization().pieces())
        for (double v : p.y) lowest = std::min(lowest, v);
      return below(-lowest, 1e-12);
    });
  }
  log.run("non-summable schedule rejected", "T3-infconv", [&] {
    const auto harmonic = DeltaSeq::from_rule([](int n) { return standard_bump(0.5 / n); },
                                              [](int n) { return 0.5 / n; }, false, 0.0, "harmonic");
    return expect_throw<InvalidArgument>([&] { infinite_convolution(harmonic, 1e-6, 1e-6); });
  });
}

void fundamental(CaseLog& log, const RunConfig& cfg) {
  const EquivParams p = cfg.equiv();
  const double h = cfg.grid_h;
  log.run("constant wave", "D-fundamental", [&] { return is_fundamental(wave_on(kUnit, h).rep, p); });
  log.run("mollified |x|", "D-fundamental", [&] {
    return is_fundamental(mollified(Expr::absolute(1.0, 0.0), default_witness(), kUnit, h).rep, p);
  });
  log.run("dirac(0)", "D-fundamental", [&] {
    return verified_below(is_fundamental(dirac(0.0, default_witness(), kUnit, h).rep, p), 1e-3);
  });
  log.run("dirac(0.3)", "D-fundamental", [&] {
    return verified_below(is_fundamental(dirac(0.3, default_witness(), kUnit, h).rep, p), 1e-3);
  });
  log.run("dirac(0.3) schedule 0.3*0.6^(n-1) horizon 30", "D-fundamental", [&] {
    EquivParams q = p;
    q.horizon = std::max(p.horizon, 30);
    q.compacts = {CompactSet::interval(-0.5, 0.5)};
    return verified_below(is_fundamental(dirac(0.3, DeltaSeq::geometric(0.3, 0.6), kUnit, h).rep, q), 1e-3);
  });
  log.run("wave + dirac(-0.2)", "D-fundamental", [&] {
    return is_fundamental(add(wave_on(kUnit, h), dirac(-0.2, default_witness(), kUnit, h)).rep, p);
  });
  log.run("two components", "D-fundamental", [&] {
    const OpenSet u({{-1, -0.2}, {0.1, 1}});
    EquivParams q = p;
    q.compacts = {CompactSet({{-0.8, -0.4}, {0.3, 0.8}})};
    return is_fundamental(dirac(0.5, default_witness(), u, h).rep, q);
  });
  log.run("control f_n = n", "D-fundamental", [&] {
    const auto drift = from_generator(
        kUnit, [h](int n) { return sample([n](double) { return double(n); }, kUnit, h); }, "custom");
    return expect_refuted(is_fundamental(drift.rep, p));
  });
}

void equivalence(CaseLog& log, const RunConfig& cfg) {
  EquivParams p = cfg.equiv();
  const double h = cfg.grid_h;
  const auto a = dirac(0.0, DeltaSeq::geometric(0.5, 0.5), kUnit, h);
  const auto b = dirac(0.0, DeltaSeq::geometric(0.3, 0.6), kUnit, h);
  const auto c = dirac(0.0, DeltaSeq::geometric(0.2, 0.55), kUnit, h);
  const auto z = zero_boehmian(kUnit, h);

  log.run("dirac vs zero m=3", "D-equiv", [&] {
    EquivParams q = p;
    q.compacts = {CompactSet::interval(-0.5, 0.5)};
    const auto rep = equivalence_report(a, z, q);
    const double peak = default_witness()[3](0.0);
    CheckResult r;
    r.horizon = q.horizon;
    r.bound = 0.5 * peak;
    r.status = Status::refuted;
    r.note = "no stabilized m=3 entry";
    if (!rep.result.refuted()) {
      r.note = "equivalence to zero not refuted";
      return r;
    }
    for (const auto& e : rep.entries) {
      if (e.m != 3) continue;
      r.max_residual = e.trace.back();
      r.residuals = e.trace;
      r.status = e.stabilized && e.trace.back() >= 0.5 * peak ? Status::verified : Status::refuted;
      r.note = "inequivalence witnessed at m=3; residual against 0.5*phi_3(0)";
    }
    return r;
  });
  log.run("schedules A ~ B", "D-equiv", [&] { return equivalent(a, b, p); });
  log.run("reflexive dirac", "D-equiv", [&] { return equivalent(a, a, p); });
  log.run("reflexive wave", "D-equiv", [&] { return equivalent(wave_on(kUnit, h), wave_on(kUnit, h), p); });
  log.run("symmetric B ~ A", "D-equiv", [&] { return equivalent(b, a, p); });
  log.run("B ~ C", "D-equiv", [&] { return equivalent(b, c, p); });
  log.run("transitive A ~ C under a product witness", "D-equiv", [&] {
    EquivParams q = p;
    q.witness = DeltaSeq::product(default_witness(), DeltaSeq::geometric(0.25, 0.5));
    return equivalent(a, c, q);
  });
  log.run("f + 0.001/n ~ f", "D-equiv", [&] {
    return equivalent(custom_expression(Expr::sine(1.0, 3.0), 1e-3, kUnit, h),
                      from_continuous(sample(Expr::sine(1.0, 3.0), kUnit, h)), p);
  });
  log.run("control f + 1 vs f", "D-equiv", [&] {
    return expect_refuted(equivalent(custom_expression(Expr::sine(1.0, 3.0), 0.0, kUnit, h),
                                     from_continuous(sample([](double x) { return std::sin(3 * x) + 1.0; },
                                                            kUnit, h)),
                                     p));
  });
}

void vector_space(CaseLog& log, const RunConfig& cfg) {
  const EquivParams p = cfg.equiv();
  const double h = cfg.grid_h;
  const auto f = wave_on(kUnit, h);
  const auto g = dirac(0.2, default_witness(), kUnit, h);
  const auto g2 = dirac(0.2, DeltaSeq::geometric(0.3, 0.6), kUnit, h);
  const auto m = mollified(Expr::absolute(1.0, 0.0), default_witness(), kUnit, h);
  const auto z = zero_boehmian(kUnit, h);
  const double a = 2.5, b = -0.75;
  auto law = [&](const std::string& id, const Boehmian& lhs, const Boehmian& rhs) {
    log.run(id, "T-vector", [&] { return equivalent(lhs, rhs, p); });
  };
  law("F + G ~ G + F", add(f, g), add(g, f));
  law("(F + G) + M ~ F + (G + M)", add(add(f, g), m), add(f, add(g, m)));
  law("F + 0 ~ F", add(f, z), f);
  law("F - F ~ 0", sub(f, f), z);
  law("G - G ~ 0", sub(g, g), z);
  law("1 G ~ G", scale(1.0, g), g);
  law("a(bG) ~ (ab)G", scale(a, scale(b, g)), scale(a * b, g));
  law("a(F + G) ~ aF + aG", scale(a, add(f, g)), add(scale(a, f), scale(a, g)));
  law("(a + b)G ~ aG + bG", scale(a + b, g), add(scale(a, g), scale(b, g)));
  law("0 G ~ 0", scale(0.0, g), z);
  law("G + F ~ G' + F", add(g, f), add(g2, f));
  law("aG ~ aG'", scale(a, g), scale(a, g2));
}

void restriction(CaseLog& log, const RunConfig& cfg) {
  const EquivParams p = cfg.equiv();
  const double h = cfg.grid_h;
  const auto d = dirac(0.0, default_witness(), kUnit, h);
  const auto f = wave_on(kUnit, h);
  const OpenSet v = OpenSet::interval(-0.5, 0.9);
  const OpenSet w = OpenSet::interval(-0.2, 0.4);
  auto bitwise = [](bool ok) {
    CheckResult r;
    r.horizon = 1;
    r.status = ok ? Status::verified : Status::refuted;
    r.note = "bitwise at n = 1, 5, 20";
    return r;
  };
  for (const auto& [name, cls] : {std::pair{std::string("dirac"), d}, std::pair{std::string("wave"), f}}) {
    log.run("identity " + name, "L-restrict", [&] {
      bool ok = true;
      for (int n : {1, 5, 20}) ok = ok && identical(restrict(cls, kUnit)(n), cls(n));
      return bitwise(ok);
    });
    log.run("composition " + name, "L-restrict", [&] {
      bool ok = true;
      for (int n : {1, 5, 20}) ok = ok && identical(restrict(restrict(cls, v), w)(n), restrict(cls, w)(n));
      return bitwise(ok);
    });
  }
  log.run("dirac(0) on (0,1) ~ 0", "L-restrict", [&] {
    const OpenSet right = OpenSet::interval(0, 1);
    return equivalent(restrict(d, right), zero_boehmian(right, h), p);
  });
  log.run("dirac(0) restricted ~ dirac(0) built on the subset", "L-restrict", [&] {
    const OpenSet mid = OpenSet::interval(-0.5, 0.5);
    return equivalent(restrict(d, mid), dirac(0.0, default_witness(), mid, h), p);
  });
  log.run("restriction respects ~", "L-restrict", [&] {
    const auto d2 = dirac(0.0, DeltaSeq::geometric(0.3, 0.6), kUnit, h);
    return equivalent(restrict(d, v), restrict(d2, v), p);
  });

  const OpenSet u = OpenSet::interval(-0.8, 0.6);
  const auto phi = standard_bump(0.1);
  const double eps = 0.15;
  const std::vector<std::pair<std::string, Boehmian>> instances{
      {"wave", f},
      {"dirac(0)", d},
      {"dirac(0.3) schedule 0.3*0.6^(n-1)", dirac(0.3, DeltaSeq::geometric(0.3, 0.6), kUnit, h)},
      {"mollified |x|", mollified(Expr::absolute(1.0, 0.0), default_witness(), kUnit, h)},
      {"wave + dirac(-0.2)", add(f, dirac(-0.2, default_witness(), kUnit, h))},
      {"cos(2x) + 1e-4/n", custom_expression(Expr::cosine(1.0, 2.0), 1e-4, kUnit, h)},
  };
  for (const auto& [name, cls] : instances) {
    log.run("commute " + name, "L-commute", [&] {
      const auto lhs = restrict(conv_boehmian(cls, phi, eps), erode(u, eps));
      const auto rhs = conv_boehmian(restrict(cls, u), phi, eps);
      return verified_below(equivalent(lhs, rhs, p), 1e-3);
    });
  }
}

void convboehm(CaseLog& log, const RunConfig& cfg) {
  const EquivParams p = cfg.equiv();
  const double h = cfg.grid_h;
  const auto d = dirac(0.0, default_witness(), kUnit, h);
  const double eps = 0.25;
  const OpenSet inner = erode(kUnit, eps);
  auto as_class = [&](const TestFunction& phi) {
    const double s = phi.radius();
    return from_continuous(sample([phi](double x) { return phi(x); }, inner, h,
                                  std::vector<Zone>{{-s, s, s / 64}}));
  };
  for (const auto& [name, phi] : {std::pair{std::string("bump(0.2)"), standard_bump(0.2)},
                                  std::pair{std::string("bump(0.1)*bump(0.05)"),
                                            convolve_test(standard_bump(0.1), standard_bump(0.05))}}) {
    log.run("dirac * " + name + " ~ " + name, "L-convboehm", [&] {
      return verified_below(equivalent(conv_boehmian(d, phi, eps), as_class(phi), p), 1e-3);
    });
  }
  log.run("continuous class * phi", "L-convboehm", [&] {
    const GridFunction f = sample(wave, kUnit, h);
    const auto phi = standard_bump(0.2);
    return equivalent(conv_boehmian(from_continuous(f), phi, eps),
                      from_continuous(restrict_grid(convolve(f, phi), inner)), p);
  });
  log.run("independent of the representative", "L-convboehm", [&] {
    const auto d2 = dirac(0.0, DeltaSeq::geometric(0.3, 0.6), kUnit, h);
    const auto phi = standard_bump(0.2);
    return equivalent(conv_boehmian(d, phi, eps), conv_boehmian(d2, phi, eps), p);
  });
  log.run("s(phi) >= eps rejected", "L-convboehm", [&] {
    return expect_throw<PreconditionViolated>([&] { conv_boehmian(d, standard_bump(0.3), eps); });
  });
  log.run("collapsed domain rejected", "L-convboehm", [&] {
    return expect_throw<DomainCollapsed>([&] { conv_boehmian(d, standard_bump(0.9), 1.0); });
  });
}

void regularize(CaseLog& log, const RunConfig& cfg) {
  const EquivParams p = cfg.equiv();
  const double h = cfg.grid_h;
  const auto k = CompactSet::interval(-0.4, 0.4);
  log.run("dirac continuous part is psi", "L8-regularize", [&] {
    const auto part = to_continuous_on(dirac(0.0, default_witness(), kUnit, h), k, p);
    const double s = part.psi.radius();
    double worst = 0.0;
    for (double x = -0.4; x <= 0.4; x += s / 50) worst = std::max(worst, std::abs(part.g(x) - part.psi(x)));
    return below(worst, 1e-3 * part.psi(0.0), "psi " + part.psi.describe());
  });
  log.run("continuous part of a continuous class", "L8-regularize", [&] {
    const GridFunction f = sample(wave, kUnit, h);
    const auto part = to_continuous_on(from_continuous(f), k, p);
    return below(sup_distance_on(part.g, convolve(f, part.psi), k).value, 1e-12);
  });
  log.run("regularizing mollifier fits", "L8-regularize", [&] {
    std::vector<CheckResult> parts;
    for (double eps : {0.1, 0.3}) {
      const auto phi = regularizing_mollifier(dirac(0.0, default_witness(), kUnit, h), eps, p);
      parts.push_back(below(phi.radius(), eps));
    }
    return all_of(parts);
  });
  const auto psi = standard_bump(0.1);
  const OpenSet dset = erode(kUnit, 0.15);
  log.run("structural and adaptive agree", "L8-regularize", [&] {
    const auto m = mollified(Expr::sine(1.0, 4.0), default_witness(), kUnit, h);
    return below(sup_distance_on(regularize(m, psi, dset, p), adaptive_regularize(m, psi, dset, p),
                                 dset.closure()).value,
                 1e-4);
  });
  log.run("adaptive limit of cos(2x) + 1e-4/n", "L8-regularize", [&] {
    const auto c = custom_expression(Expr::cosine(1.0, 2.0), 1e-4, kUnit, h);
    const auto ref = convolve(sample(Expr::cosine(1.0, 2.0), kUnit, h), psi);
    return below(sup_distance_on(adaptive_regularize(c, psi, dset, p), ref, dset.closure()).value, 1e-4);
  });
  log.run("no regularizer for a divergent sequence", "L8-regularize", [&] {
    const auto drift = custom_expression(Expr::constant(0.0), 100.0, kUnit, h);
    return expect_throw<NoRegularizerFound>([&] { to_continuous_on(drift, k, p); });
  });
}

void rebuild(CaseLog& log, const RunConfig& cfg) {
  const EquivParams p = cfg.equiv();
  const double h = cfg.grid_h;
  const auto plan = default_exhaustive(kUnit, 0.2);
  const auto f = wave_on(kUnit, h);
  const auto d = dirac(0.0, default_witness(), kUnit, h);
  log.run("rebuilt wave ~ wave", "L-rebuild", [&] {
    return equivalent(Boehmian{rebuild_from_exhaustion(f, plan, p), default_witness(), {}}, f, p);
  });
  const Boehmian rd{rebuild_from_exhaustion(d, plan, p), default_witness(), {}};
  log.run("rebuilt dirac is fundamental", "L-rebuild", [&] { return is_fundamental(rd.rep, p); });
  log.run("rebuilt dirac ~ dirac", "L-rebuild", [&] { return equivalent(rd, d, p); });
  log.run("rebuilt dirac on U_1", "L-rebuild", [&] {
    const OpenSet u1 = plan.opens(1);
    return equivalent(restrict(rd, u1), restrict(d, u1), p);
  });
  log.run("other continuous extensions give the same class", "L-extend", [&] {
    // g'_n = g_n + 5·d(x, U_n), which vanishes on U_n
    const FundamentalSeq other(
        kUnit,
        [rd, plan, h](int n) {
          const OpenSet un = plan.opens(n);
          const GridFunction bump =
              sample([un](double x) { return un.contains(x) ? 0.0 : 5.0 * distance(CompactSet::interval(x, x), un); },
                     kUnit, h);
          return rd(n) + bump;
        },
        "custom");
    return equivalent(Boehmian{other, default_witness(), {}}, rd, p);
  });
  log.run("broken exhaustion rejected", "L-rebuild", [&] {
    Exhaustive broken = plan;
    broken.opens = [](int) { return OpenSet::interval(-0.5, 0.5); };
    return expect_throw<InvalidArgument>([&] { rebuild_from_exhaustion(f, broken, p); });
  });
}

}  // namespace boehm::suites
