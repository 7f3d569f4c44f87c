#include <doctest.h>

#include <cmath>
#include <random>

#include "boehm/errors.hpp"
#include "boehm/gridfn.hpp"
#include "oracles.hpp"

using namespace boehm;

namespace {
double identity(double x) { return x; }
}  // namespace

TEST_CASE("sampling") {
  const auto f = from_evaluator(identity, OpenSet::interval(0, 1), 0.5);
  REQUIRE(f.pieces().size() == 1);
  CHECK(f.pieces()[0].y == std::vector<double>{0.0, 0.5, 1.0});
  const auto c = from_evaluator([](double) { return 3.0; }, OpenSet({{0, 1}, {2, 4}}), 0.1);
  for (const auto& p : c.pieces()) {
    for (double v : p.y) CHECK(v == 3.0);
  }
  CHECK_THROWS_AS(from_evaluator(identity, OpenSet({{0, 1}, {2, 2.05}}), 0.1), InvalidArgument);
  CHECK_THROWS_AS(c(1.5), DomainError);
}

TEST_CASE("bump samples against the quadrature oracle") {
  const auto f = from_evaluator([](double x) { return oracle::bump(1.0, x); },
                                OpenSet::interval(-1, 1), 0.01);
  CHECK(f(0.0) == doctest::Approx(0.8285688398691055).epsilon(1e-12));
  CHECK(sup_norm_on(f, CompactSet::interval(-1, 1)) == doctest::Approx(0.8285688398691055));
}

TEST_CASE("sup norms") {
  const auto f = from_evaluator(identity, OpenSet::interval(-1, 1), 0.01);
  CHECK(sup_norm_on(f, CompactSet::interval(-1, 0.5)) == doctest::Approx(1.0));
  const auto z = from_evaluator([](double) { return 0.0; }, OpenSet::interval(-1, 1), 0.01);
  CHECK(sup_norm_on(z, CompactSet::interval(-1, 1)) == 0.0);
  CHECK_THROWS_AS(sup_norm_on(f, CompactSet::interval(0, 2)), DomainError);
  const auto p = sup_point_on(f, CompactSet::interval(-0.3, 0.7));
  CHECK(p.location == doctest::Approx(0.7));
}

TEST_CASE("l1 norms") {
  const auto b = from_evaluator([](double x) { return oracle::bump(1.0, x); },
                                OpenSet::interval(-1, 1), 1e-3);
  CHECK(std::abs(l1_norm(b) - 1.0) < 1e-8);
  const auto b2 = from_evaluator([](double x) { return oracle::bump(0.3, x); },
                                 OpenSet::interval(-0.3, 0.3), 1e-3);
  CHECK(std::abs(l1_norm(b2) - 1.0) < 1e-8);
  CHECK(l1_norm(from_evaluator([](double) { return 1.0; }, OpenSet::interval(0, 2), 0.1)) ==
        doctest::Approx(2.0).epsilon(1e-14));
  CHECK(l1_norm(from_evaluator(identity, OpenSet::interval(0, 1), 0.1)) ==
        doctest::Approx(0.5).epsilon(1e-14));
  // Odd panel count exercises the closing panel.
  CHECK(l1_norm(from_evaluator([](double x) { return x * x; }, OpenSet::interval(0, 1), 1.0 / 7)) ==
        doctest::Approx(1.0 / 3).epsilon(1e-14));
}

TEST_CASE("Simpson order on smooth integrands") {
  auto integrand = [](double x) { return std::exp(std::sin(3 * x)); };
  const double exact = oracle::integrate(integrand, 0.0, 2.0);
  double prev = 0.0;
  for (double h : {0.2, 0.1, 0.05}) {
    const double err = std::abs(l1_norm(from_evaluator(integrand, OpenSet::interval(0, 2), h)) - exact);
    if (prev > 0.0) CHECK(prev / err >= 8.0);
    prev = err;
  }
}

TEST_CASE("affine functions are reproduced exactly") {
  const auto f = from_evaluator([](double x) { return 2.5 * x - 1.0; }, OpenSet::interval(-2, 3), 0.013);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 3.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng);
    CHECK(std::abs(f(x) - (2.5 * x - 1.0)) < 1e-13);
  }
}

TEST_CASE("continuous extension") {
  SUBCASE("two-sided gap is a linear ramp") {
    const auto f = from_evaluator([](double x) { return x < 1.5 ? 1.0 : 3.0; },
                                  OpenSet({{0, 1}, {2, 3}}), 0.1);
    const auto g = extend_continuously(f, OpenSet::interval(0, 3));
    CHECK(g(1.0) == doctest::Approx(1.0));
    CHECK(g(1.5) == doctest::Approx(2.0));
    CHECK(g(2.0) == doctest::Approx(3.0));
  }
  SUBCASE("one-sided gaps continue the boundary limit") {
    const auto f = from_evaluator([](double x) { return x < 0.5 ? 2.0 + (x - 0.25) * 12 : 5.0; },
                                  OpenSet::interval(0.25, 0.75), 0.05);
    const auto g = extend_continuously(f, OpenSet::interval(0, 1));
    CHECK(g(0.0) == doctest::Approx(2.0));
    CHECK(g(0.1) == doctest::Approx(2.0));
    CHECK(g(0.9) == doctest::Approx(5.0));
  }
  SUBCASE("identity when the sets agree") {
    const auto f = from_evaluator(identity, OpenSet::interval(0, 1), 0.1);
    CHECK(identical(extend_continuously(f, OpenSet::interval(0, 1)), f));
  }
  SUBCASE("restriction recovers the original samples") {
    const auto f = from_evaluator([](double x) { return std::sin(x); }, OpenSet({{0, 1}, {2, 3}}), 0.01);
    const auto g = extend_continuously(f, OpenSet::interval(-1, 4));
    CHECK(identical(restrict_grid(g, f.domain()), f));
  }
  CHECK_THROWS_AS(extend_continuously(from_evaluator(identity, OpenSet::interval(0, 2), 0.1),
                                      OpenSet::interval(0, 1)),
                  InvalidArgument);
}

TEST_CASE("restriction") {
  const auto f = from_evaluator([](double x) { return std::cos(4 * x); }, OpenSet::interval(0, 1), 0.01);
  const auto r = restrict_grid(f, OpenSet::interval(0.2, 0.8));
  for (double x = 0.2; x <= 0.8; x += 0.0137) CHECK(r(x) == f(x));
  CHECK(identical(restrict_grid(f, f.domain()), f));
  const auto v = OpenSet::interval(0.1, 0.9);
  const auto w = OpenSet({{0.15, 0.3}, {0.5, 0.75}});
  CHECK(identical(restrict_grid(restrict_grid(f, v), w), restrict_grid(f, w)));
  CHECK_THROWS_AS(restrict_grid(f, OpenSet::interval(0.5, 1.5)), InvalidArgument);
}

TEST_CASE("arithmetic and assembly") {
  const OpenSet u = OpenSet::interval(0, 1);
  const auto f = from_evaluator(identity, u, 0.1);
  const auto g = from_evaluator([](double x) { return x * x; }, u, 0.05);
  const auto s = f + g;
  CHECK(s(0.3) == doctest::Approx(0.3 + 0.09).epsilon(1e-3));
  CHECK(sup_norm_on(f - f, u.closure()) == 0.0);
  CHECK(scaled(2.0, f)(0.4) == doctest::Approx(0.8));

  const auto a = from_evaluator([](double) { return 1.0; }, OpenSet::interval(0, 2), 0.1);
  const auto b = from_evaluator([](double) { return 2.0; }, OpenSet::interval(1, 3), 0.1);
  const Branch br[] = {{&a, OpenSet::interval(0, 2)}, {&b, OpenSet::interval(1, 3)}};
  const auto j = assemble(br);
  CHECK(j.domain() == OpenSet::interval(0, 3));
  CHECK(j(1.5) == 1.0);
  CHECK(j(2.5) == 2.0);
}

TEST_CASE("refined zones") {
  const double c = 0.3;
  const double s = 1e-4;
  const Zone z[] = {{c - s, c + s, s / 128}};
  const auto f = sample([&](double x) { return oracle::bump(s, x - c); }, OpenSet::interval(0, 1), 1e-3, z);
  CHECK(std::abs(l1_norm(f) - 1.0) < 1e-8);
  const auto zs = f.zones();
  REQUIRE(zs.size() == 1);
  CHECK(zs[0].spacing <= s / 128 * (1 + 1e-9));
  CHECK(sup_norm_on(f, CompactSet::interval(0, 1)) == doctest::Approx(oracle::bump(s, 0.0)));
}
