// Suites for δ/Δ convergence, the P_j functionals and extraction.

#include <cmath>

#include "boehm/bridge.hpp"
#include "boehm/errors.hpp"
#include "suites.hpp"

namespace boehm::suites {

namespace {

const OpenSet kUnit = OpenSet::interval(-1, 1);
const CompactSet kMid = CompactSet::interval(-0.5, 0.5);

double wave(double x) { return std::sin(3 * x) + 0.5 * x; }

FundamentalSeq offset_seq(double h, double c, double power) {
  return FundamentalSeq(
      kUnit, [h, c, power](int n) { return sample([&](double x) { return wave(x) + c / std::pow(n, power); }, kUnit, h); },
      "custom");
}

// g ∗ δ_n - g
FundamentalSeq smoothing_gap(const Expr& g, double h) {
  const auto m = mollified(g, default_witness(), kUnit, h);
  const GridFunction gs = sample(g, kUnit, h);
  return FundamentalSeq(kUnit, [m, gs](int n) { return m(n) - gs; }, "custom");
}

std::vector<BridgeInstance> bridge_battery(double h) {
  const auto d = dirac(0.0, default_witness(), kUnit, h);
  const auto d2 = dirac(0.0, DeltaSeq::geometric(0.3, 0.6), kUnit, h);
  return {
      {"constant", from_continuous(sample(wave, kUnit, h)).rep, default_witness(), std::nullopt},
      {"mollified", mollified(Expr::absolute(1.0, 0.0), default_witness(), kUnit, h).rep, default_witness(),
       std::nullopt},
      {"dirac", d.rep, dirac_Delta_witness(default_witness()), d2.rep},
  };
}

}  // namespace

void delta_bridge(CaseLog& log, const RunConfig& cfg) {
  const EquivParams p = cfg.equiv();
  const double h = cfg.grid_h;
  const GridFunction f = sample(wave, kUnit, h);
  const GridFunction zero = scaled(0.0, f);
  const GridFunction absx = sample([](double x) { return std::abs(x); }, kUnit, h);

  struct Case {
    std::string name;
    FundamentalSeq seq;
    GridFunction limit;
    bool delta_expected;
  };
  const std::vector<Case> battery{
      {"f_n = f", FundamentalSeq(kUnit, [f](int) { return f; }, "custom"), f, true},
      {"f + 1/n", offset_seq(h, 1.0, 1.0), f, true},
      {"f + 1/n^2", offset_seq(h, 1.0, 2.0), f, true},
      {"f + 1", offset_seq(h, 1.0, 0.0), f, false},
      {"|x|*delta_n - |x| to 0", smoothing_gap(Expr::absolute(1.0, 0.0), h), zero, true},
      {"dirac to 0", dirac(0.0, default_witness(), kUnit, h).rep, zero, false},
      {"mollified |x| to |x|", mollified(Expr::absolute(1.0, 0.0), default_witness(), kUnit, h).rep, absx, true},
  };
  for (const auto& c : battery) {
    const auto dl = delta_converges(c.seq, c.limit, kMid, p);
    log.run("delta " + c.name, "D-delta",
            [&] { return c.delta_expected ? dl : expect_refuted(dl); });
    log.run("delta implies Delta " + c.name, "L-delta-Delta", [&] {
      if (!dl.verified()) {
        CheckResult r;
        r.horizon = dl.horizon;
        r.status = Status::verified;
        r.note = "premise not verified (" + to_string(dl.status) + ")";
        return r;
      }
      auto r = Delta_converges(c.seq, c.limit, kMid, p.witness, p);
      r.note = "premise verified; Delta " + to_string(r.status) + (r.note.empty() ? "" : "; " + r.note);
      return r;
    });
  }

  log.run("Delta |x| rate L*s(delta_n)", "D-Delta", [&] {
    const auto m = mollified(Expr::absolute(1.0, 0.0), default_witness(), kUnit, h);
    auto r = Delta_converges(m.rep, absx, kMid, default_witness(), p);
    int i = 0;
    double excess = 0.0;
    for (int n = 1; n <= p.horizon && i < static_cast<int>(r.residuals.size()); ++n) {
      if (!(default_witness().radius(n) < 0.5)) continue;
      excess = std::max(excess, r.residuals[static_cast<std::size_t>(i++)] - default_witness().radius(n));
    }
    if (r.verified() && excess > 1e-6) {
      r.status = Status::refuted;
      r.note = "residual above s(delta_n) by " + fmt(excess);
    }
    return r;
  });
  log.run("Delta f + 1 to f", "D-Delta",
          [&] { return expect_refuted(Delta_converges(offset_seq(h, 1.0, 0.0), f, kMid, default_witness(), p)); });
  log.run("dirac Delta-Cauchy under its witness", "D-Delta-Cauchy", [&] {
    const auto d = dirac(0.0, default_witness(), kUnit, h);
    return Delta_cauchy(d.rep, kMid, dirac_Delta_witness(default_witness()), p);
  });
}

void pj(CaseLog& log, const RunConfig& cfg) {
  const EquivParams p = cfg.equiv();
  const double h = cfg.grid_h;
  const Exhaustion ex = compact_exhaustion(kUnit, 3);
  const auto radii = radius_grid(ex.margins[0], 6);

  log.run("P_j of zero", "D-Pj", [&] { return below(pj_upper(scaled(0.0, sample(wave, kUnit, h)), 1, ex, radii), 1e-15); });
  log.run("P_j of one", "D-Pj", [&] {
    return below(std::abs(pj_upper(sample([](double) { return 1.0; }, kUnit, h), 2, ex, radii) - 1.0), 1e-9);
  });
  log.run("P_j of sin(50x) refines downward", "D-Pj", [&] {
    const GridFunction osc = sample([](double x) { return std::sin(50 * x); }, kUnit, h);
    const double coarse = pj_upper(osc, 1, ex, radii);
    const double fine = pj_upper(osc, 1, ex, radius_grid(ex.margins[0], 60));
    CheckResult r = below(fine - coarse, 1e-15, "coarse " + fmt(coarse) + " fine " + fmt(fine));
    if (!(coarse < 1.0)) r.status = Status::refuted;
    return r;
  });

  const GridFunction xsq = sample([](double x) { return x * x; }, kUnit, h);
  const std::vector<std::pair<std::string, FundamentalSeq>> instances{
      {"ones", FundamentalSeq(kUnit, [h](int) { return sample([](double) { return 1.0; }, kUnit, h); }, "custom")},
      {"1/n", FundamentalSeq(kUnit, [h](int n) { return sample([n](double) { return 1.0 / n; }, kUnit, h); }, "custom")},
      {"|x|*delta_n - |x|", smoothing_gap(Expr::absolute(1.0, 0.0), h)},
      {"dirac", dirac(0.0, default_witness(), kUnit, h).rep},
      {"x^2/n", FundamentalSeq(kUnit, [xsq](int n) { return scaled(1.0 / n, xsq); }, "custom")},
      {"sin(3x)*delta_n - sin(3x)", smoothing_gap(Expr::sine(1.0, 3.0), h)},
  };
  for (const auto& [name, seq] : instances) {
    log.run("Delta iff P_j " + name, "T-equiv", [&] { return check_Delta_iff_pj(seq, ex, radii, p); });
  }
}

void extract(CaseLog& log, const RunConfig& cfg) {
  const EquivParams p = cfg.equiv();
  const double h = cfg.grid_h;
  const Exhaustion ex = compact_exhaustion(kUnit, 9);
  const auto battery = bridge_battery(h);

  for (const auto& inst : battery) {
    const auto res = extract_fundamental_subsequence(inst.seq, ex, p);
    log.run(inst.name + " certificates n<=8", "L-seqconstr", [&] {
      CheckResult r;
      r.horizon = static_cast<int>(res.certificates.size());
      bool ok = res.certificates.size() >= 8;
      double eps_sum = 0.0;
      for (const auto& c : res.certificates) {
        if (c.n > 8) continue;
        ok = ok && c.ok() && c.residual < c.bound + 1e-6;
        eps_sum += c.eps;
        r.residuals.push_back(c.residual);
        r.max_residual = std::max(r.max_residual, c.residual / c.bound);
      }
      r.bound = 1.0;
      r.status = ok && eps_sum < 1.0 ? Status::verified : Status::refuted;
      r.note = "residual/2^-n maximum; sum eps " + fmt(eps_sum) + "; p = ";
      for (int i : res.indices) r.note += std::to_string(i) + " ";
      return r;
    });
    log.run(inst.name + " subsequence fundamental", "L-seqconstr", [&] { return res.fundamental; });
  }

  log.run("Delta limit has a delta-convergent subsequence", "L-subseq", [&] {
    const auto m = mollified(Expr::absolute(1.0, 0.0), default_witness(), kUnit, h);
    const auto res = extract_fundamental_subsequence(m.rep, ex, p);
    return delta_converges(res.subsequence, sample([](double x) { return std::abs(x); }, kUnit, h), kMid, p);
  });

  for (const auto& row : class_bridge_cases(battery, p)) {
    log.run(row.case_id, row.lemma_ref, [&] {
      return row.lemma_ref == "C14-unique" ? verified_below(row, 1e-3) : row;
    });
  }
}

}  // namespace boehm::suites
