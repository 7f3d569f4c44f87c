#include <doctest.h>

#include <cmath>
#include <random>

#include "boehm/convolve.hpp"
#include "boehm/errors.hpp"
#include "oracles.hpp"

using namespace boehm;

namespace {

double sup_gap(const GridFunction& g, const std::function<double(double)>& ref) {
  double worst = 0.0;
  for (const auto& p : g.pieces()) {
    for (std::size_t i = 0; i < p.x.size(); ++i) {
      if (p.x[i] < p.span.lo || p.x[i] > p.span.hi) continue;
      worst = std::max(worst, std::abs(p.y[i] - ref(p.x[i])));
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("convolution reproduces constants and affine functions") {
  const OpenSet u = OpenSet::interval(-2, 2);
  const auto phi = standard_bump(0.4);
  const auto c = convolve(from_evaluator([](double) { return 3.0; }, u, 1e-3), phi);
  CHECK(sup_gap(c, [](double) { return 3.0; }) < 1e-7);
  const auto l = convolve(from_evaluator([](double x) { return x; }, u, 1e-3), phi);
  CHECK(sup_gap(l, [](double x) { return x; }) < 1e-7);
  CHECK(c.domain() == erode(u, 0.4));
}

TEST_CASE("second moment shift") {
  const OpenSet u = OpenSet::interval(-3, 3);
  const double m2 = oracle::bump_second_moment(1.0);
  CHECK(m2 == doctest::Approx(0.1581136362637964).epsilon(1e-10));
  const auto g = convolve(from_evaluator([](double x) { return x * x; }, u, 1e-3), standard_bump(1.0));
  CHECK(sup_gap(g, [m2](double x) { return x * x + m2; }) < 1e-6);
}

TEST_CASE("domain bookkeeping and collapse") {
  const OpenSet u({{0, 1}, {1.5, 1.9}, {2.5, 4}});
  const auto f = from_evaluator([](double x) { return std::sin(x); }, u, 1e-3);
  for (double s : {0.05, 0.2, 0.3}) CHECK(convolve(f, standard_bump(s)).domain() == erode(u, s));
  CHECK_THROWS_AS(convolve(f, standard_bump(1.0)), DomainCollapsed);
}

TEST_CASE("bilinearity") {
  const OpenSet u = OpenSet::interval(0, 2);
  const auto f = from_evaluator([](double x) { return std::sin(3 * x); }, u, 1e-3);
  const auto g = from_evaluator([](double x) { return std::exp(x); }, u, 1e-3);
  const auto phi = standard_bump(0.15);
  const auto lhs = convolve(combine(2.0, f, -0.5, g), phi);
  const auto rhs = combine(2.0, convolve(f, phi), -0.5, convolve(g, phi));
  const auto k = erode(u, 0.15).closure();
  CHECK(sup_distance_on(lhs, rhs, k).value < 2e-6);
}

TEST_CASE("convolution against a direct quadrature oracle") {
  const OpenSet u = OpenSet::interval(-1, 1);
  auto fn = [](double x) { return std::cos(5 * x) + x * x * x; };
  const double h = 1e-3;
  const auto g = convolve(from_evaluator(fn, u, h), standard_bump(0.3));
  // Linear interpolation shifts a cell average by at most h²/12·max|f''|.
  const double budget = h * h / 12.0 * (25.0 + 6.0) + 1e-9;
  for (double x : {-0.6, -0.1, 0.0, 0.33, 0.69}) {
    const double ref =
        oracle::integrate([&](double y) { return fn(x - y) * oracle::bump(0.3, y); }, -0.3, 0.3, 1e-13, 16);
    CHECK(std::abs(g(x) - ref) < budget);
  }
}

TEST_CASE("commutativity with test functions") {
  const OpenSet u = OpenSet::interval(-1, 1);
  const auto f = from_evaluator([](double x) { return std::abs(x - 0.1); }, u, 1e-3);
  const auto phi = standard_bump(0.1);
  const auto psi = standard_bump(0.25);
  const auto a = convolve(convolve(f, phi), psi);
  const auto b = convolve(convolve(f, psi), phi);
  const auto k = erode(u, 0.35 + 1e-9).closure();
  CHECK(sup_distance_on(a, b, k).value < 1e-6);
  const auto c = convolve(f, convolve_test(phi, psi));
  CHECK(sup_distance_on(a, c, k).value < 1e-5);
}

TEST_CASE("convolve_near agrees with the full convolution") {
  const OpenSet u = OpenSet::interval(-1, 1);
  const auto f = from_evaluator([](double x) { return std::sin(7 * x); }, u, 1e-3);
  const auto k = CompactSet::interval(-0.2, 0.3);
  const auto full = convolve(f, standard_bump(0.2));
  const auto near = convolve_near(f, standard_bump(0.2), k);
  CHECK(sup_distance_on(full, near, k).value < 1e-12);
}

TEST_CASE("Young bound") {
  const OpenSet u = OpenSet::interval(-1.5, 1.5);
  const auto one = from_evaluator([](double) { return 1.0; }, u, 1e-3);
  auto r = check_young(one, standard_bump(0.1), CompactSet::interval(-1, 1), 0.2);
  CHECK(r.verified());
  CHECK(r.max_residual == doctest::Approx(1.0).epsilon(1e-7));
  const auto s = from_evaluator([](double x) { return std::sin(5 * x); }, u, 1e-3);
  r = check_young(s, standard_bump(0.1), CompactSet::interval(-1, 1), 0.2);
  CHECK(r.verified());
  CHECK(r.max_residual <= 1.0);
  CHECK_THROWS_AS(check_young(s, standard_bump(0.3), CompactSet::interval(-1, 1), 0.2),
                  PreconditionViolated);
}

TEST_CASE("mollifier convergence") {
  const OpenSet u = OpenSet::interval(-1, 1);
  const auto k = CompactSet::interval(-0.4, 0.4);
  ConvergenceOptions opt;
  opt.horizon = 12;
  opt.lipschitz = 3.0;
  const auto f = from_evaluator([](double x) { return std::abs(3 * x - 0.3); }, u, 1e-3);
  const auto r = check_mollifier_convergence(f, delta_sequence(0.5, 0.5), k, opt);
  CHECK(r.verified());
  CHECK(r.max_residual < 1e-3);

  const auto c = from_evaluator([](double) { return 2.0; }, u, 1e-3);
  opt.lipschitz.reset();
  const auto rc = check_mollifier_convergence(c, delta_sequence(0.5, 0.5), k, opt);
  CHECK(rc.verified());
  for (double v : rc.residuals) CHECK(v < 1e-9);

  const auto diag = check_diagonal_mollification(
      [&](int n) {
        return from_evaluator([n](double x) { return std::sin(2 * x) + 1.0 / n; }, u, 1e-3);
      },
      delta_sequence(0.25, 0.5), CompactSet::interval(-0.8, 0.8), 0.3, opt);
  CHECK(diag.verified());
}

TEST_CASE("verdict rule") {
  CHECK(decay_verdict({1.0, 0.5, 0.1, 1e-4}, 1e-3, 0, 0.0) == Status::verified);
  CHECK(decay_verdict({1.0, 0.9, 0.9, 0.9}, 1e-3, 0, 0.0) == Status::refuted);
  CHECK(decay_verdict({1.0, 0.5, 0.25, 0.12}, 1e-3, 0, 0.0) == Status::inconclusive);
}
