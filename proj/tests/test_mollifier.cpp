#include <doctest.h>

#include <cmath>

#include "boehm/errors.hpp"
#include "boehm/mollifier.hpp"
#include "oracles.hpp"

using namespace boehm;

TEST_CASE("standard bump") {
  const auto phi = standard_bump(1.0);
  CHECK(std::abs(l1_norm(phi.realization()) - 1.0) < 1e-8);
  CHECK(phi(1.0) == 0.0);
  CHECK(phi(-1.0) == 0.0);
  CHECK(phi(0.37) == phi(-0.37));
  CHECK(phi(0.0) == doctest::Approx(0.8285688398691055).epsilon(1e-10));
  CHECK(phi(0.0) == doctest::Approx(oracle::bump(1.0, 0.0)).epsilon(1e-10));
  CHECK(standard_bump(0.5)(0.0) == doctest::Approx(2.0 * phi(0.0)).epsilon(1e-15));
  CHECK(bump_constant() == doctest::Approx(1.0 / oracle::bump_mass()).epsilon(1e-11));
  CHECK_THROWS_AS(standard_bump(0.0), InvalidArgument);
  CHECK_THROWS_AS(standard_bump(-0.1), InvalidArgument);
}

TEST_CASE("scaling law at grid points") {
  for (double eps : {0.01, 0.3, 2.0}) {
    const auto phi = standard_bump(eps);
    const auto one = standard_bump(1.0);
    for (int i = -50; i <= 50; ++i) {
      const double x = eps * i / 50.0;
      CHECK(std::abs(phi(x) * eps - one(x / eps)) <= 4e-16 * std::max(1.0, one(x / eps)));
    }
  }
}

TEST_CASE("moment tables") {
  const auto phi = standard_bump(0.7);
  CHECK(phi.moments(-0.7).m0 == 0.0);
  CHECK(phi.moments(0.7).m0 == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(std::abs(phi.moments(0.0).m0 - 0.5) < 1e-13);
  CHECK(std::abs(phi.moments(0.7).m1) < 1e-14);
  const double half = oracle::integrate([](double y) { return oracle::bump(0.7, y); }, -0.7, 0.2);
  CHECK(std::abs(phi.moments(0.2).m0 - half) < 1e-12);
}

TEST_CASE("support radius bookkeeping") {
  CHECK(support_radius(standard_bump(0.3)) == 0.3);
  const auto p = convolve_test(standard_bump(0.1), standard_bump(0.2));
  CHECK(support_radius(p) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(p.factors().size() == 2);
  const auto pp = TestFunction::product({p, standard_bump(0.05)});
  CHECK(pp.factors().size() == 3);
  CHECK(pp.radius() == doctest::Approx(0.35).epsilon(1e-15));
}

TEST_CASE("delta sequences") {
  const auto d = delta_sequence(0.5, 0.5);
  CHECK(d.radius(1) == 0.5);
  CHECK(d.radius(2) == 0.25);
  CHECK(d.radius(3) == 0.125);
  CHECK(d.radius_sum() == 1.0);
  CHECK(d.summable());
  for (int n = 1; n < 30; ++n) CHECK(d.radius(n + 1) < d.radius(n));
  CHECK(&d[3] == &d[3]);
  CHECK(d[4].radius() == d.radius(4));
  CHECK(d.tail_sum(3) == doctest::Approx(0.125));
  CHECK_THROWS_AS(delta_sequence(0.5, 1.0), InvalidArgument);
  CHECK_THROWS_AS(delta_sequence(0.5, 0.0), InvalidArgument);
  CHECK_THROWS_AS(delta_sequence(0.0, 0.5), InvalidArgument);
  const auto s = d.shifted(2);
  CHECK(s.radius(1) == d.radius(3));
  CHECK(s.radius_sum() == doctest::Approx(0.25));
  const auto pr = DeltaSeq::product(d, d);
  CHECK(pr[2].radius() == doctest::Approx(0.5));
}

TEST_CASE("convolution of test functions") {
  const auto phi = standard_bump(0.2);
  const auto psi = standard_bump(0.3);
  const auto a = convolve_test(phi, psi);
  const auto b = convolve_test(psi, phi);
  CHECK(a.radius() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(std::abs(l1_norm(a.realization()) - 1.0) < 1e-7);
  double worst = 0.0;
  for (int i = -100; i <= 100; ++i) {
    const double x = 0.5 * i / 100.0;
    worst = std::max(worst, std::abs(a(x) - b(x)));
    CHECK(a(x) >= 0.0);
  }
  CHECK(worst < 1e-8);
  const auto unit = convolve_test(standard_bump(1.0), standard_bump(1.0));
  CHECK(std::abs(unit(0.0) - oracle::bump_pair(1.0, 1.0, 0.0)) < 1e-6);
  CHECK(std::abs(unit(0.77) - oracle::bump_pair(1.0, 1.0, 0.77)) < 1e-6);
}

TEST_CASE("three-factor product against nested oracle") {
  const auto p = TestFunction::product({standard_bump(0.2), standard_bump(0.1), standard_bump(0.05)});
  // (φ_a ∗ φ_b ∗ φ_c)(x) = ∫ (φ_a ∗ φ_b)(t) φ_c(x - t) dt
  const double x = 0.12;
  const double ref = oracle::integrate(
      [&](double t) { return oracle::bump_pair(0.2, 0.1, t) * oracle::bump(0.05, x - t); }, x - 0.05,
      x + 0.05, 1e-12, 8);
  CHECK(std::abs(p(x) - ref) < 1e-5);
  CHECK(std::abs(l1_norm(p.realization()) - 1.0) < 1e-7);
}

TEST_CASE("infinite convolution") {
  const auto seq = delta_sequence(0.5, 0.5);
  const auto res = infinite_convolution(seq, 1e-6, 1e-6);
  CHECK(res.psi.radius() == 1.0);
  CHECK(res.psi.factor_radius_sum() <= 1.0);
  CHECK(res.psi.truncated());
  CHECK(std::abs(l1_norm(res.psi.realization()) - 1.0) < 1e-6);
  const auto heads = product_heads(seq, res.terms + 3, 1.0);
  double diff = 0.0;
  const auto& a = heads[static_cast<std::size_t>(res.terms - 1)];
  const auto& b = heads.back();
  for (std::size_t j = 0; j < a.size(); ++j) diff = std::max(diff, std::abs(a[j] - b[j]));
  CHECK(diff < 1e-6);
  for (double v : res.psi.realization().pieces()[0].y) CHECK(v >= 0.0);

  const auto single = DeltaSeq::from_rule(
      [](int n) { return standard_bump(n == 1 ? 0.5 : 1e-12 * std::pow(0.5, n)); },
      [](int n) { return n == 1 ? 0.5 : 1e-12 * std::pow(0.5, n); }, true, 0.5 + 1e-12 * 0.5,
      "single");
  const auto one = infinite_convolution(single, 1e-9, 1e-6);
  double gap = 0.0;
  for (int i = -100; i <= 100; ++i) {
    const double x = 0.5 * i / 100.0;
    gap = std::max(gap, std::abs(one.psi(x) - standard_bump(0.5)(x)));
  }
  CHECK(gap < 1e-6);

  const auto divergent = DeltaSeq::from_rule([](int n) { return standard_bump(1.0 / n); },
                                             [](int n) { return 1.0 / n; }, false, 0.0, "harmonic");
  CHECK_THROWS_AS(infinite_convolution(divergent, 1e-6, 1e-6), InvalidArgument);
}
