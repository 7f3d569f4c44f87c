#pragma once

// A small closed vocabulary of pointwise functions on the line, used to
// describe sections and test inputs.

#include <string>
#include <vector>

namespace boehm {

struct Expr {
  enum class Kind { poly, sin, cos, exp, abs, bump, sum };

  Kind kind = Kind::poly;
  std::vector<double> coeffs;  // poly: c0 + c1 x + c2 x² + ...
  double amp = 1.0;
  double freq = 1.0;
  double phase = 0.0;
  double rate = 1.0;
  double center = 0.0;
  double radius = 1.0;
  std::vector<Expr> terms;  // sum

  double operator()(double x) const;
  std::string describe() const;

  static Expr poly(std::vector<double> coeffs);
  static Expr constant(double c) { return poly({c}); }
  static Expr sine(double amp, double freq, double phase = 0.0);
  static Expr cosine(double amp, double freq, double phase = 0.0);
  static Expr exponential(double amp, double rate);
  static Expr absolute(double amp, double center);
  /// amp · bump(radius)(x - center), a unit-mass bump when amp = 1.
  static Expr bump(double radius, double center = 0.0, double amp = 1.0);
  static Expr sum(std::vector<Expr> terms);
};

}  // namespace boehm
