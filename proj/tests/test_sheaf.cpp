#include <doctest.h>

#include <cmath>

#include "boehm/errors.hpp"
#include "boehm/sheaf.hpp"

using namespace boehm;

namespace {

const OpenSet kUnit = OpenSet::interval(-1, 1);
const OpenSet kLeft = OpenSet::interval(-1, 0.6);
const OpenSet kRight = OpenSet::interval(-0.6, 1);

Boehmian wave_on(const OpenSet& u) {
  return from_continuous(sample([](double x) { return std::sin(3 * x) + 0.5 * x; }, u, 1e-3));
}

bool all_verified(const std::vector<CheckResult>& rs) {
  for (const auto& r : rs)
    if (!r.verified()) return false;
  return !rs.empty();
}

}  // namespace

TEST_CASE("cover bookkeeping") {
  const Cover c({kLeft, kRight, OpenSet::interval(2, 3)});
  CHECK(c.whole.size() == 2);
  CHECK(c.overlaps[0][1] == OpenSet::interval(-0.6, 0.6));
  CHECK(c.overlaps[1][0] == c.overlaps[0][1]);
  CHECK(c.overlaps[0][2].empty());
  CHECK(glue_scale(kLeft, kRight) == doctest::Approx(0.3));
  CHECK_THROWS_AS(glue_scale(kLeft, OpenSet::interval(0.7, 1)), InvalidArgument);
}

TEST_CASE("gluing continuous sections") {
  const EquivParams p;
  const auto r = glue_pair(wave_on(kLeft), wave_on(kRight), p);
  CHECK(r.compatibility.verified());
  CHECK(r.branch_agreement.verified());
  CHECK(all_verified(r.contracts));
  CHECK(r.glued.domain() == kUnit);
  CHECK(equivalent(r.glued, wave_on(kUnit), p).verified());
  CHECK(is_fundamental(r.glued.rep, p).verified());
}

TEST_CASE("gluing dirac sections") {
  const EquivParams p;
  const auto r = glue_pair(dirac(0.0, default_witness(), kLeft), dirac(0.0, default_witness(), kRight), p);
  CHECK(all_verified(r.contracts));
  const auto g = equivalent(r.glued, dirac(0.0, default_witness(), kUnit), p);
  CHECK(g.verified());
  CHECK(g.max_residual < 1e-3);
  CHECK_FALSE(equivalent(r.glued, zero_boehmian(kUnit), p).verified());
}

TEST_CASE("incompatible or disjoint sections") {
  const EquivParams p;
  CHECK_THROWS_AS(glue_pair(dirac(0.0, default_witness(), kLeft), zero_boehmian(kRight), p),
                  SectionsDisagree);
  CHECK_THROWS_AS(glue_pair(wave_on(OpenSet::interval(-1, 0)), wave_on(OpenSet::interval(0.5, 1)), p),
                  InvalidArgument);
  const auto f = wave_on(kUnit);
  auto constant = [](double c, const OpenSet& u) {
    return from_continuous(sample([c](double) { return c; }, u, 1e-3));
  };
  CHECK_FALSE(common_regularizers(constant(0, kLeft), constant(1, kRight), 0.1, p).check.verified());
  CHECK(common_regularizers(restrict(f, kLeft), restrict(f, kRight), 0.1, p).check.verified());
}

TEST_CASE("finite gluing") {
  const EquivParams p;
  const auto global = add(wave_on(kUnit), dirac(0.3, default_witness(), kUnit));
  std::vector<Boehmian> sections;
  for (const auto& u : {OpenSet::interval(-1, -0.2), OpenSet::interval(-0.4, 0.4), OpenSet::interval(0.2, 1)})
    sections.push_back(restrict(global, u));
  const auto r = glue_finite(SectionAssignment(sections), p);
  CHECK(r.glued.domain() == kUnit);
  CHECK(all_verified(r.contracts));
  CHECK(equivalent(r.glued, global, p).verified());

  const auto single = glue_finite(SectionAssignment({sections[1]}), p);
  CHECK(identical(single.glued(5), sections[1](5)));

  const OpenSet a = OpenSet::interval(-1, -0.5);
  const OpenSet b = OpenSet::interval(0.5, 1);
  const auto apart = glue_finite(SectionAssignment({restrict(global, a), restrict(global, b)}), p);
  CHECK(apart.glued.domain().size() == 2);
  CHECK(all_verified(apart.contracts));
  CHECK(equivalent(apart.glued, restrict(global, a.unite(b)), p).verified());

  CHECK_THROWS_AS(glue_finite(SectionAssignment({restrict(global, OpenSet::interval(-1, 0)),
                                                 restrict(global, OpenSet::interval(0, 1))}),
                              p),
                  InvalidArgument);
}

TEST_CASE("countable gluing along a dyadic cover") {
  const EquivParams p;
  const OpenSet whole = OpenSet::interval(std::ldexp(1.0, -7), 1);
  const auto global = add(wave_on(whole), dirac(0.5, default_witness(), whole));
  std::vector<Boehmian> sections;
  for (int i = 1; i <= 6; ++i) sections.push_back(restrict(global, OpenSet::interval(std::ldexp(1.0, -i - 1), 1)));
  const auto r = glue_countable(SectionAssignment(sections), 6, p);
  CHECK(r.glued.domain() == whole);
  CHECK(r.contracts.size() == 6);
  CHECK(all_verified(r.contracts));
  CHECK(equivalent(r.glued, global, p).verified());

  const auto partial = glue_countable(SectionAssignment(sections), 3, p);
  CHECK(partial.glued.domain() == OpenSet::interval(0.0625, 1));
  CHECK(partial.contracts.size() == 3);
  CHECK_THROWS_AS(glue_countable(SectionAssignment(sections), 0, p), InvalidArgument);
}

TEST_CASE("locality") {
  const EquivParams p;
  const Cover cover({kLeft, kRight});
  const auto d = dirac(0.0, default_witness(), kUnit);
  const auto z = zero_boehmian(kUnit);
  const auto apart = verify_locality(d, z, cover, p);
  CHECK(apart.consistent);
  CHECK(apart.result.refuted());
  CHECK(apart.local[0].refuted());

  const auto d2 = dirac(0.0, DeltaSeq::geometric(0.3, 0.6), kUnit);
  const auto same = verify_locality(d, d2, cover, p);
  CHECK(same.consistent);
  CHECK(same.result.verified());

  const auto three = verify_locality(wave_on(kUnit), wave_on(kUnit),
                                     Cover({OpenSet::interval(-1, -0.2), OpenSet::interval(-0.4, 0.4),
                                            OpenSet::interval(0.2, 1)}),
                                     p);
  CHECK(three.result.verified());
  CHECK_THROWS_AS(verify_locality(d, z, Cover({kLeft}), p), InvalidArgument);
}

TEST_CASE("presheaf laws") {
  const std::vector<Boehmian> battery{wave_on(kUnit), dirac(0.1, default_witness(), kUnit),
                                      mollified(Expr::absolute(1.0, 0.0), default_witness(), kUnit)};
  const auto r = check_presheaf_laws(battery, 4, 42);
  CHECK(r.verified());
  CHECK(r.max_residual == 0.0);
}
