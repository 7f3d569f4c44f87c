// Suites for gluing, locality and the presheaf laws.

#include <algorithm>
#include <cmath>

#include "boehm/errors.hpp"
#include "boehm/sheaf.hpp"
#include "suites.hpp"

namespace boehm::suites {

namespace {

const OpenSet kUnit = OpenSet::interval(-1, 1);
const OpenSet kLeft = OpenSet::interval(-1, 0.6);
const OpenSet kRight = OpenSet::interval(-0.6, 1);

double wave(double x) { return std::sin(3 * x) + 0.5 * x; }
double kinked(double x) { return std::sin(2 * x) + std::abs(x - 0.1); }

Boehmian continuous_on(double (*f)(double), const OpenSet& u, double h) {
  return from_continuous(sample(f, u, h));
}

void contract_rows(CaseLog& log, const std::string& prefix, const std::string& lemma,
                   const GlueResult& r, const std::vector<OpenSet>& pieces, double bound) {
  for (std::size_t i = 0; i < r.contracts.size(); ++i) {
    const CheckResult c = r.contracts[i];
    log.run(prefix + " " + c.case_id + " on " + label(pieces[i]), lemma,
            [&] { return bound > 0 ? verified_below(c, bound) : c; });
  }
}

std::vector<OpenSet> domains(const std::vector<Boehmian>& sections) {
  std::vector<OpenSet> v;
  for (const auto& s : sections) v.push_back(s.domain());
  return v;
}

}  // namespace

void glue2(CaseLog& log, const RunConfig& cfg) {
  const EquivParams p = cfg.equiv();
  const double h = cfg.grid_h;

  const auto constant = glue_pair(from_continuous(sample([](double) { return 2.0; }, kLeft, h)),
                                  from_continuous(sample([](double) { return 2.0; }, kRight, h)), p);
  log.run("constant scene glued ~ constant", "T15-glue", [&] {
    return equivalent(constant.glued, from_continuous(sample([](double) { return 2.0; }, kUnit, h)), p);
  });

  const auto cont = glue_pair(continuous_on(kinked, kLeft, h), continuous_on(kinked, kRight, h), p);
  log.run("continuous scene compatibility", "T15-glue", [&] { return cont.compatibility; });
  log.run("continuous scene glued ~ piecewise oracle", "T15-glue", [&] {
    return verified_below(equivalent(cont.glued, continuous_on(kinked, kUnit, h), p), 1e-4);
  });
  contract_rows(log, "continuous scene", "T15-glue", cont, {kLeft, kRight}, 0.0);

  const auto d = glue_pair(dirac(0.0, default_witness(), kLeft, h), dirac(0.0, default_witness(), kRight, h), p);
  log.run("dirac scene compatibility", "T15-glue", [&] { return d.compatibility; });
  log.run("dirac scene branch agreement", "L12-common", [&] { return d.branch_agreement; });
  log.run("dirac scene glued ~ global dirac", "T15-glue", [&] {
    return verified_below(equivalent(d.glued, dirac(0.0, default_witness(), kUnit, h), p), 1e-3);
  });
  contract_rows(log, "dirac scene", "T15-glue", d, {kLeft, kRight}, 0.0);
  log.run("dirac scene glued is fundamental", "T15-glue", [&] { return is_fundamental(d.glued.rep, p); });

  log.run("incompatible sections rejected", "T15-glue", [&] {
    return expect_throw<SectionsDisagree>(
        [&] { glue_pair(dirac(0.0, default_witness(), kLeft, h), zero_boehmian(kRight, h), p); });
  });
  log.run("empty overlap rejected", "T15-glue", [&] {
    return expect_throw<InvalidArgument>([&] {
      glue_pair(continuous_on(wave, OpenSet::interval(-1, 0), h), continuous_on(wave, OpenSet::interval(0.5, 1), h),
                p);
    });
  });
  log.run("common regularizers on the overlap", "L12-common", [&] {
    const auto f = continuous_on(wave, kUnit, h);
    return common_regularizers(restrict(f, kLeft), restrict(f, kRight), glue_scale(kLeft, kRight), p).check;
  });
}

void gluefinite(CaseLog& log, const RunConfig& cfg) {
  const EquivParams p = cfg.equiv();
  const double h = cfg.grid_h;
  const auto global = add(continuous_on(wave, kUnit, h), dirac(0.3, default_witness(), kUnit, h));
  const std::vector<OpenSet> three{OpenSet::interval(-1, -0.2), OpenSet::interval(-0.4, 0.4),
                                   OpenSet::interval(0.2, 1)};
  std::vector<Boehmian> sections;
  for (const auto& u : three) sections.push_back(restrict(global, u));
  const auto r = glue_finite(SectionAssignment(sections), p);
  contract_rows(log, "three-piece", "C16-glue", r, three, 0.0);
  log.run("three-piece glued ~ global", "C16-glue", [&] { return equivalent(r.glued, global, p); });

  const std::vector<Boehmian> mixed{
      continuous_on(wave, OpenSet::interval(-1, -0.1), h),
      restrict(add(continuous_on(wave, kUnit, h), dirac(0.1, default_witness(), kUnit, h)),
               OpenSet::interval(-0.3, 0.5)),
      restrict(add(continuous_on(wave, kUnit, h), dirac(0.1, DeltaSeq::geometric(0.3, 0.6), kUnit, h)),
               OpenSet::interval(0.3, 1)),
  };
  const auto mr = glue_finite(SectionAssignment(mixed), p);
  contract_rows(log, "mixed", "C16-glue", mr, domains(mixed), 0.0);
  log.run("mixed glued ~ wave + dirac(0.1)", "C16-glue", [&] {
    return equivalent(mr.glued, add(continuous_on(wave, kUnit, h), dirac(0.1, default_witness(), kUnit, h)), p);
  });

  const OpenSet a = OpenSet::interval(-1, -0.5);
  const OpenSet b = OpenSet::interval(0.5, 1);
  const auto apart = glue_finite(SectionAssignment({restrict(global, a), restrict(global, b)}), p);
  contract_rows(log, "disjoint", "C16-glue", apart, {a, b}, 0.0);
  log.run("touching pieces rejected", "C16-glue", [&] {
    return expect_throw<InvalidArgument>([&] {
      glue_finite(SectionAssignment({restrict(global, OpenSet::interval(-1, 0)), restrict(global, OpenSet::interval(0, 1))}),
                  p);
    });
  });
}

void gluecountable(CaseLog& log, const RunConfig& cfg) {
  const EquivParams p = cfg.equiv();
  const double h = cfg.grid_h;
  constexpr int depth = 8;
  const OpenSet whole = OpenSet::interval(std::ldexp(1.0, -depth - 1), 1);
  const auto global = add(continuous_on(wave, whole, h), dirac(0.5, default_witness(), whole, h));
  std::vector<Boehmian> sections;
  for (int i = 1; i <= depth; ++i) sections.push_back(restrict(global, OpenSet::interval(std::ldexp(1.0, -i - 1), 1)));
  const auto r = glue_countable(SectionAssignment(sections), depth, p);
  contract_rows(log, "dyadic", "L19-glue", r, domains(sections), 1e-3);
  log.run("dyadic glued ~ global", "L19-glue", [&] { return verified_below(equivalent(r.glued, global, p), 1e-3); });

  auto rng = rng_for(cfg, "gluecountable");
  std::vector<Boehmian> shuffled = sections;
  shuffle(shuffled, rng);
  std::string order;
  for (const auto& s : shuffled) order += (order.empty() ? "" : " ") + fmt(s.domain().intervals()[0].lo);
  const auto q = glue_countable(SectionAssignment(shuffled), depth, p);
  contract_rows(log, "permuted", "L19-glue", q, domains(shuffled), 1e-3);
  log.run("permuted glued ~ dyadic glued", "L19-glue", [&] {
    auto c = verified_below(equivalent(q.glued, r.glued, p), 1e-3);
    c.note = "order " + order + (c.note.empty() ? "" : "; " + c.note);
    return c;
  });
  log.run("n_max 0 rejected", "L19-glue", [&] {
    return expect_throw<InvalidArgument>([&] { glue_countable(SectionAssignment(sections), 0, p); });
  });
}

void locality(CaseLog& log, const RunConfig& cfg) {
  const EquivParams p = cfg.equiv();
  const double h = cfg.grid_h;
  const Cover two({kLeft, kRight});
  const auto d = dirac(0.0, default_witness(), kUnit, h);
  const auto d2 = dirac(0.0, DeltaSeq::geometric(0.3, 0.6), kUnit, h);
  const auto z = zero_boehmian(kUnit, h);

  const auto same = verify_locality(d, d2, two, p);
  log.run("dirac reps equal locally", "L17-locality", [&] { return all_of(same.local); });
  log.run("dirac reps equal globally", "L18-locality", [&] { return same.global; });

  const auto c1 = continuous_on(wave, kUnit, h);
  const auto c2 = custom_expression(Expr::sum({Expr::sine(1.0, 3.0), Expr::poly({0.0, 0.5})}), 1e-4, kUnit, h);
  const Cover three({OpenSet::interval(-1, -0.2), OpenSet::interval(-0.4, 0.4), OpenSet::interval(0.2, 1)});
  const auto cont = verify_locality(c1, c2, three, p);
  log.run("continuous reps equal locally", "L17-locality", [&] { return all_of(cont.local); });
  log.run("continuous reps equal globally", "L18-locality", [&] { return cont.global; });

  const auto apart = verify_locality(d, z, two, p);
  log.run("dirac vs zero refuted locally", "L17-locality", [&] {
    bool any = false;
    for (const auto& l : apart.local) any = any || l.refuted();
    CheckResult r;
    r.horizon = p.horizon;
    r.status = any ? Status::verified : Status::refuted;
    r.note = any ? "some piece refutes" : "no piece refutes";
    return r;
  });
  log.run("dirac vs zero refuted globally", "L18-locality", [&] { return expect_refuted(apart.global); });
  log.run("local and global verdicts consistent", "L18-locality", [&] {
    CheckResult r;
    r.horizon = p.horizon;
    r.status = apart.consistent && same.consistent && cont.consistent ? Status::verified : Status::refuted;
    return r;
  });
  log.run("single-piece cover of a larger set rejected", "L18-locality", [&] {
    return expect_throw<InvalidArgument>([&] { verify_locality(d, z, Cover({kLeft}), p); });
  });
}

void presheaf(CaseLog& log, const RunConfig& cfg) {
  const double h = cfg.grid_h;
  const std::vector<Boehmian> battery{
      continuous_on(wave, kUnit, h), dirac(0.1, default_witness(), kUnit, h),
      mollified(Expr::absolute(1.0, 0.0), default_witness(), kUnit, h),
      dirac(-0.3, default_witness(), OpenSet({{-1, -0.1}, {0.2, 1}}), h)};
  const auto seed = rng_for(cfg, "presheaf")();
  log.run("10 nested triples per class", "T-presheaf", [&] { return check_presheaf_laws(battery, 10, seed); });
}

void sheaf_e2e(CaseLog& log, const RunConfig& cfg) {
  const EquivParams p = cfg.equiv();
  const double h = cfg.grid_h;
  const auto global = add(add(continuous_on(wave, kUnit, h), dirac(0.3, default_witness(), kUnit, h)),
                          scale(-2.0, dirac(-0.4, default_witness(), kUnit, h)));
  const Cover cover({OpenSet::interval(-1, -0.3), OpenSet::interval(-0.5, 0.1), OpenSet::interval(-0.1, 0.5),
                     OpenSet::interval(0.35, 1)});
  std::vector<Boehmian> sections;
  for (const auto& u : cover.pieces) sections.push_back(restrict(global, u));
  const auto r = glue_finite(SectionAssignment(sections), p);
  contract_rows(log, "four-piece", "T20-sheaf", r, cover.pieces, 0.0);
  log.run("glued ~ global", "T20-sheaf", [&] { return equivalent(r.glued, global, p); });
  log.run("glued and global agree by locality", "T20-sheaf", [&] {
    return verify_locality(r.glued, global, cover, p).result;
  });
  log.run("uniqueness: a different class is told apart", "T20-sheaf", [&] {
    return expect_refuted(
        verify_locality(r.glued, add(global, dirac(0.7, default_witness(), kUnit, h)), cover, p).result);
  });
}

}  // namespace boehm::suites
