#include <doctest.h>

#include <random>

#include "boehm/errors.hpp"
#include "boehm/geometry.hpp"

using namespace boehm;

namespace {

OpenSet open2(double a, double b, double c, double d) { return OpenSet({{a, b}, {c, d}}); }

// Endpoints on a dyadic lattice, so sums and differences are exact.
double dyadic(std::mt19937_64& rng, int lo, int hi) {
  return static_cast<double>(lo + static_cast<int>(rng() % static_cast<unsigned>(hi - lo))) / 1024.0;
}

OpenSet random_open(std::mt19937_64& rng) {
  std::vector<Interval> iv;
  const int n = 1 + static_cast<int>(rng() % 4);
  for (int i = 0; i < n; ++i) {
    const double lo = dyadic(rng, -3072, 3072);
    iv.push_back({lo, lo + dyadic(rng, 50, 1024)});
  }
  return OpenSet(iv);
}

}  // namespace

TEST_CASE("normalization merges overlapping and touching intervals") {
  const OpenSet u({{1.0, 2.0}, {0.0, 1.0}, {1.5, 3.0}, {5.0, 6.0}});
  REQUIRE(u.size() == 2);
  CHECK(u.intervals()[0] == Interval{0.0, 3.0});
  CHECK(u.intervals()[1] == Interval{5.0, 6.0});
  CHECK(u.dimension() == 1);
  CHECK_THROWS_AS(OpenSet({{1.0, 1.0}}), InvalidArgument);
  CHECK(OpenSet().empty());
}

TEST_CASE("dilation") {
  CHECK(dilate(OpenSet::interval(0, 1), 0.5) == OpenSet::interval(-0.5, 1.5));
  CHECK(dilate(open2(0, 1, 1.2, 2), 0.15) == OpenSet::interval(-0.15, 2.15));
  CHECK(dilate(OpenSet(), 1.0).empty());
  CHECK_THROWS_AS(dilate(OpenSet::interval(0, 1), 0.0), InvalidArgument);
  CHECK_THROWS_AS(dilate(OpenSet::interval(0, 1), -1.0), InvalidArgument);
}

TEST_CASE("erosion") {
  CHECK(erode(OpenSet::interval(0, 1), 0.25) == OpenSet::interval(0.25, 0.75));
  CHECK(erode(OpenSet::interval(0, 0.4), 0.25).empty());
  const OpenSet u = open2(0, 1, 1.2, 2);
  const OpenSet closed = erode(dilate(u, 0.15), 0.15);
  CHECK(closed == OpenSet::interval(0, 2));
  CHECK_FALSE(closed == u);
  CHECK_THROWS_AS(erode(u, 0.0), InvalidArgument);
}

TEST_CASE("compact containment") {
  const OpenSet u = OpenSet::interval(0, 1);
  CHECK(is_compactly_contained(CompactSet::interval(0.2, 0.8), u));
  CHECK_FALSE(is_compactly_contained(CompactSet::interval(0.0, 0.8), u));
  CHECK(is_compactly_contained(CompactSet(), u));
  CHECK_FALSE(is_compactly_contained(CompactSet({{0.2, 0.4}, {0.6, 1.5}}), u));
}

TEST_CASE("distances") {
  CHECK(distance(CompactSet::interval(0, 1), CompactSet::interval(2, 3)) == 1.0);
  CHECK(distance(CompactSet::interval(0, 1), CompactSet::interval(0.5, 2)) == 0.0);
  CHECK(distance_to_complement(CompactSet::interval(0.4, 0.6), OpenSet::interval(0, 1)) ==
        doctest::Approx(0.4).epsilon(1e-15));
  CHECK(distance_to_complement(CompactSet::interval(0.0, 0.6), OpenSet::interval(0, 1)) == 0.0);
  CHECK(std::isinf(distance_to_complement(CompactSet::interval(0, 1), OpenSet::real_line())));
  CHECK_THROWS_AS(distance(CompactSet(), CompactSet::interval(0, 1)), InvalidArgument);
  CHECK(distance(OpenSet::interval(0, 1), OpenSet::interval(1, 2)) == 0.0);
}

TEST_CASE("compact exhaustion") {
  const auto ex = compact_exhaustion(OpenSet::interval(0, 1), 2, 0.4, 0.4);
  REQUIRE(ex.sets.size() == 2);
  CHECK(ex.sets[0].intervals()[0].lo == doctest::Approx(0.4));
  CHECK(ex.sets[0].intervals()[0].hi == doctest::Approx(0.6));
  CHECK(ex.sets[1].intervals()[0].lo == doctest::Approx(0.16));
  CHECK(ex.sets[1].intervals()[0].hi == doctest::Approx(0.84));
  CHECK(exhaustion_violations(ex).empty());
  CHECK(ex.margins[0] < 0.5);
  CHECK(ex.margins[1] < 0.5 * ex.margins[0]);

  const auto two = compact_exhaustion(open2(0, 1, 2, 3), 1);
  REQUIRE(two.sets.size() == 1);
  CHECK(two.sets[0].size() == 2);
  CHECK(is_compactly_contained(two.sets[0], open2(0, 1, 2, 3)));

  CHECK_THROWS_AS(compact_exhaustion(OpenSet::real_line(), 3), Unsupported);
  CHECK_THROWS_AS(compact_exhaustion(OpenSet::interval(0, 1), 2000), InvalidArgument);
}

TEST_CASE("exhaustion checker catches broken sequences") {
  auto ex = compact_exhaustion(OpenSet::interval(0, 1), 3);
  std::swap(ex.sets[0], ex.sets[2]);
  CHECK_FALSE(exhaustion_violations(ex).empty());
}

TEST_CASE("morphological adjunction on random unions") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 300; ++t) {
    const OpenSet u = random_open(rng);
    const double eps = dyadic(rng, 8, 300);
    CHECK(erode(dilate(u, eps), eps).contains(u));
    CHECK(u.contains(dilate(erode(u, eps), eps)));
  }
}

TEST_CASE("compacts closer than the margin survive erosion") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 200; ++t) {
    const OpenSet u = random_open(rng);
    const auto& iv = u.intervals().front();
    const double a = iv.lo + 0.3 * iv.length();
    const double b = iv.lo + 0.6 * iv.length();
    const CompactSet k = CompactSet::interval(a, b);
    const double d = distance_to_complement(k, u);
    CHECK(is_compactly_contained(k, erode(u, 0.99 * d)));
    CHECK(distance(k, CompactSet::interval(b + 1, b + 2)) ==
          distance(CompactSet::interval(b + 1, b + 2), k));
  }
}

TEST_CASE("random exhaustions pass the checker") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 100; ++t) {
    const OpenSet u = random_open(rng);
    const auto ex = compact_exhaustion(u, 1 + static_cast<int>(rng() % 8));
    CHECK(exhaustion_violations(ex).empty());
  }
}
