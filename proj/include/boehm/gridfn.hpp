#pragma once

// Continuous functions on bounded open sets, realized as piecewise-linear
// interpolants of samples.
//
// Each domain component carries its own knot array. The background spacing
// is uniform (at most h); knots may be locally refined inside "zones" where a
// function has structure finer than h (e.g. a narrow spike). The first and
// last knot of a piece bracket the component, so the component endpoints need
// not be knots themselves. This is what makes restriction exactly
// compositional: restricting twice keeps the same bracketing knots as
// restricting once.

#include <functional>
#include <span>
#include <vector>

#include "boehm/geometry.hpp"

namespace boehm {

/// Samples of one domain component.
struct Piece {
  Interval span;           // the open component (lo, hi)
  std::vector<double> x;   // strictly increasing, x.front() <= lo, x.back() >= hi
  std::vector<double> y;
  double left_limit = 0.0;   // f(lo+)
  double right_limit = 0.0;  // f(hi-)

  double eval(double t) const;
};

/// A locally refined stretch of a knot array: knots in [lo, hi] are spaced
/// at most `spacing` apart.
struct Zone {
  double lo = 0.0;
  double hi = 0.0;
  double spacing = 0.0;
};

class GridFunction {
 public:
  GridFunction() = default;
  /// Validates invariants and computes boundary limits.
  GridFunction(OpenSet domain, double h, std::vector<Piece> pieces);

  const OpenSet& domain() const { return domain_; }
  double h() const { return h_; }
  const std::vector<Piece>& pieces() const { return pieces_; }
  std::size_t knot_count() const;

  /// Value at x in the closure of the domain (boundary values are limits).
  /// Throws DomainError elsewhere.
  double operator()(double x) const;

  /// Locally refined stretches, detected from the knot spacing.
  std::vector<Zone> zones() const;

 private:
  OpenSet domain_;
  double h_ = 0.0;
  std::vector<Piece> pieces_;
};

/// Knots for [lo, hi]: a uniform background with at most `h` spacing, plus
/// extra knots inside each zone.
std::vector<double> build_knots(double lo, double hi, double h, std::span<const Zone> zones = {});

/// Samples `eval` on each component of `u` (endpoints included) at uniform
/// spacing `h`. Throws InvalidArgument when h exceeds the shortest component.
GridFunction from_evaluator(const std::function<double(double)>& eval, const OpenSet& u,
                            double h);

/// Same, with local refinement zones and without the shortest-component check.
GridFunction sample(const std::function<double(double)>& eval, const OpenSet& u, double h,
                    std::span<const Zone> zones = {});

/// max |f| over the knots inside K and the endpoints of K.
/// Throws DomainError if K is not inside the closure of the domain.
double sup_norm_on(const GridFunction& f, const CompactSet& k);

struct SupPoint {
  double value = 0.0;     // |f| at the location
  double location = 0.0;
};

/// Like sup_norm_on, also reporting where the maximum is attained.
SupPoint sup_point_on(const GridFunction& f, const CompactSet& k);

/// max |f - g| over the knots of both functions inside K and the endpoints
/// of K. Both functions must be defined on K.
SupPoint sup_distance_on(const GridFunction& f, const GridFunction& g, const CompactSet& k);

/// Composite Simpson rule for the integral of |f| over the domain.
double l1_norm(const GridFunction& f);

/// Continuous extension from domain(f) to t ⊇ domain(f): linear across gaps
/// bounded on both sides, constant continuation of the nearest boundary limit
/// on one-sided gaps, zero on components of t that meet no component of f.
GridFunction extend_continuously(const GridFunction& f, const OpenSet& t);

/// Restriction to v ⊆ domain(f). Values on v are unchanged.
GridFunction restrict_grid(const GridFunction& f, const OpenSet& v);

/// a*f + b*g on a common domain.
GridFunction combine(double a, const GridFunction& f, double b, const GridFunction& g);
GridFunction scaled(double a, const GridFunction& f);

inline GridFunction operator+(const GridFunction& f, const GridFunction& g) {
  return combine(1.0, f, 1.0, g);
}
inline GridFunction operator-(const GridFunction& f, const GridFunction& g) {
  return combine(1.0, f, -1.0, g);
}

/// Joins branches defined on overlapping regions into one function on the
/// union of the regions. Where regions overlap the earliest branch wins.
/// Each branch's domain must contain its region.
struct Branch {
  const GridFunction* function = nullptr;
  OpenSet region;
};
GridFunction assemble(std::span<const Branch> branches);

/// Bitwise equality of domain, spacing, knots and values.
bool identical(const GridFunction& f, const GridFunction& g);

}  // namespace boehm
