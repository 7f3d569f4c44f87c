#pragma once

// Reference computations that share no code with the library.

#include <cmath>
#include <functional>

namespace oracle {

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double fa, double fm, double fb, double whole, double eps,
                               int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * eps) return left + right + delta / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

/// ∫_a^b f, split into `pieces` panels, each refined adaptively.
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double eps = 1e-15, int pieces = 64) {
  double total = 0.0;
  const double w = (b - a) / pieces;
  for (int i = 0; i < pieces; ++i) {
    const double lo = a + i * w;
    const double hi = i + 1 == pieces ? b : lo + w;
    const double fa = f(lo), fb = f(hi), fm = f(0.5 * (lo + hi));
    const double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
    total += adaptive_simpson(f, lo, hi, fa, fm, fb, whole, eps / pieces, 40);
  }
  return total;
}

inline double raw_bump(double y) {
  return std::abs(y) < 1.0 ? std::exp(-1.0 / (1.0 - y * y)) : 0.0;
}

/// ∫_{-1}^{1} exp(-1/(1-y²)) dy.
inline double bump_mass() {
  static const double m = integrate(raw_bump, -1.0, 1.0);
  return m;
}

/// Standard bump of radius eps, normalized by the oracle mass.
inline double bump(double eps, double x) { return raw_bump(x / eps) / (eps * bump_mass()); }

/// ∫ y² φ_eps(y) dy.
inline double bump_second_moment(double eps) {
  return integrate([eps](double y) { return y * y * bump(eps, y); }, -eps, eps);
}

/// (φ_a ∗ φ_b)(x).
inline double bump_pair(double a, double b, double x) {
  const double lo = std::max(-a, x - b);
  const double hi = std::min(a, x + b);
  if (!(hi > lo)) return 0.0;
  return integrate([&](double t) { return bump(a, t) * bump(b, x - t); }, lo, hi, 1e-14, 32);
}

}  // namespace oracle
