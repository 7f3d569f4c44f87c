#pragma once

// Nonnegative unit-mass test functions built from scaled standard bumps and
// their convolution products, plus delta sequences of them.

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "boehm/gridfn.hpp"

namespace boehm {

/// Primitive and first moment of a kernel up to u:
/// m0 = ∫_{-s}^{u} φ, m1 = ∫_{-s}^{u} v φ(v) dv.
struct Moments {
  double m0 = 0.0;
  double m1 = 0.0;
};

/// Cells of the uniform grid a product realization lives on.
inline constexpr std::size_t kRealizationCells = 4096;

class TestFunction {
 public:
  enum class Kind { bump, product };

  /// Standard bump C/ε · exp(-1/(1-(x/ε)²)) on (-ε, ε). Throws InvalidArgument for ε <= 0.
  static TestFunction bump(double eps);
  /// φ_1 ∗ ... ∗ φ_k with s = Σ s(φ_i). Nested products are flattened.
  static TestFunction product(std::vector<TestFunction> factors);
  /// A finite head of an infinite product. The declared radius must bound
  /// the sum of the factor radii; the realization lives on [-declared, declared].
  static TestFunction truncated_product(std::vector<TestFunction> factors, double declared_radius);

  Kind kind() const;
  /// Support radius s(φ) as declared by the descriptor.
  double radius() const;
  /// Sum of the factor radii (equals radius() unless truncated).
  double factor_radius_sum() const;
  bool truncated() const;
  /// Bump factors in order; a bump is its own single factor.
  std::vector<TestFunction> factors() const;

  double operator()(double x) const;
  Moments moments(double u) const;
  /// Samples on (-s, s). Bumps are sampled directly, products are computed
  /// by repeated quadrature and memoized.
  const GridFunction& realization() const;

  /// ∫ p(t) φ(at - t) dt for the piecewise-linear p through (x, y), taken
  /// as zero outside [x.front(), x.back()]. Exact for the interpolant.
  double apply(std::span<const double> x, std::span<const double> y, double at) const;

  /// Structural identity of descriptors.
  bool same_as(const TestFunction& other) const;
  std::string describe() const;

  struct Node;

 private:
  explicit TestFunction(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;

  friend TestFunction make_realized_product(std::vector<TestFunction>, double,
                                            std::vector<double>);
};

/// s(φ).
inline double support_radius(const TestFunction& phi) { return phi.radius(); }
inline TestFunction standard_bump(double eps) { return TestFunction::bump(eps); }
/// φ ∗ ψ as a product descriptor.
TestFunction convolve_test(const TestFunction& phi, const TestFunction& psi);

/// Normalizing constant of exp(-1/(1-y²)) on (-1, 1), i.e. 1/∫.
double bump_constant();

class DeltaSeq {
 public:
  /// φ_n = bump(s1 · ratio^(n-1)). Throws InvalidArgument for s1 <= 0 or ratio ∉ (0,1).
  static DeltaSeq geometric(double s1, double ratio);
  /// Generic schedule. `radius_sum` is required when `summable` is true.
  static DeltaSeq from_rule(std::function<TestFunction(int)> rule,
                            std::function<double(int)> radius, bool summable,
                            double radius_sum, std::string label);
  /// n ↦ a_n ∗ b_n.
  static DeltaSeq product(const DeltaSeq& a, const DeltaSeq& b);

  /// n ↦ φ_{n+k}.
  DeltaSeq shifted(int k) const;

  /// φ_n for n >= 1, memoized.
  const TestFunction& operator[](int n) const;
  double radius(int n) const;
  bool summable() const;
  /// Σ_n s(φ_n). Throws InvalidArgument if the schedule is not summable.
  double radius_sum() const;
  /// Σ_{k>n} s(φ_k).
  double tail_sum(int n) const;
  const std::string& label() const;

  struct Impl;

 private:
  explicit DeltaSeq(std::shared_ptr<Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<Impl> impl_;
};

inline DeltaSeq delta_sequence(double s1, double ratio) { return DeltaSeq::geometric(s1, ratio); }

struct InfiniteConvolution {
  TestFunction psi;
  int terms = 0;           // factors kept
  double tail = 0.0;       // Σ_{k>terms} s(φ_k)
  double last_step = 0.0;  // sup |ψ_terms - ψ_{terms-1}|
};

/// ψ_n = φ_1 ∗ ... ∗ φ_n until the radius tail drops below `tail_tol` and
/// successive heads differ by less than `sup_tol`. The result keeps the full
/// series sum as its declared radius. Throws InvalidArgument for a
/// non-summable schedule, and NoRegularizerFound if `max_terms` is reached.
InfiniteConvolution infinite_convolution(const DeltaSeq& seq, double tail_tol, double sup_tol,
                                         int max_terms = 80);

/// The first n heads of the same recursion on the common grid, for
/// inspecting truncations. heads[k] are the samples of ψ_{k+1}.
std::vector<std::vector<double>> product_heads(const DeltaSeq& seq, int n,
                                               double declared_radius);

}  // namespace boehm
