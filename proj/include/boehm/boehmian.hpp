#pragma once

// Fundamental sequences, the equivalence relation, the vector space of
// Boehmians on an open set, restriction, convolution with test functions and
// the regularization procedures.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "boehm/convolve.hpp"
#include "boehm/expr.hpp"
#include "boehm/gridfn.hpp"
#include "boehm/mollifier.hpp"

namespace boehm {

/// n ↦ f_n on a fixed open set, memoized. Copies share the cache.
class FundamentalSeq {
 public:
  using Generator = std::function<GridFunction(int)>;

  FundamentalSeq(OpenSet domain, Generator gen, std::string tag);

  const OpenSet& domain() const;
  const std::string& tag() const;
  /// f_n for n >= 1. Throws InvalidArgument for n < 1 and Error when the
  /// generator returns a function on a different domain.
  const GridFunction& operator()(int n) const;

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
};

/// F ∗ ψ on an open set D with D ⊆ erode(domain, s(ψ)), computed from the
/// structure of the class rather than from the sequence.
using Regularizer = std::function<GridFunction(const TestFunction&, const OpenSet&)>;

struct Boehmian {
  FundamentalSeq rep;
  DeltaSeq witness;
  /// Optional shortcut for regularize(); when empty the limit is computed
  /// from the representative.
  Regularizer exact;

  const OpenSet& domain() const { return rep.domain(); }
  const GridFunction& operator()(int n) const { return rep(n); }
  const std::string& tag() const { return rep.tag(); }
};

DeltaSeq default_witness();

struct EquivParams {
  int horizon = 20;
  double tol = 1e-3;
  DeltaSeq witness = default_witness();
  /// Empty means one automatic compact closure(erode(V, 0.1·w)), w the
  /// shortest component length of the domain V.
  std::vector<CompactSet> compacts;
  /// Number of witness indices m examined per compact: the first ones whose
  /// mollifier fits inside the domain around K.
  int witness_count = 4;
  double tol_quad = 1e-6;

  void validate() const;
};

/// Last quarter of 1..horizon, at least two indices.
std::vector<int> tail_indices(int horizon);
/// The compacts a check runs on.
std::vector<CompactSet> compacts_for(const OpenSet& domain, const EquivParams& p);
/// The witness indices examined on K.
std::vector<int> witness_indices(const CompactSet& k, const OpenSet& domain, const EquivParams& p);

// Construction

Boehmian from_continuous(const GridFunction& f);
Boehmian zero_boehmian(const OpenSet& u, double h = 1e-3);
/// x ↦ φ_n(x - center) sampled on U, refined around the spike.
Boehmian dirac(double center, const DeltaSeq& seq, const OpenSet& u, double h = 1e-3);
/// f_n = g ∗ φ_n with g sampled beyond U.
Boehmian mollified(const Expr& g, const DeltaSeq& seq, const OpenSet& u, double h = 1e-3);
/// f_n = g + offset / n.
Boehmian custom_expression(const Expr& g, double offset, const OpenSet& u, double h = 1e-3);
/// A representative with no structural shortcut.
Boehmian from_generator(const OpenSet& u, FundamentalSeq::Generator gen, std::string tag);

// Checks

CheckResult is_fundamental(const FundamentalSeq& s, const EquivParams& params);

struct ResidualEntry {
  std::size_t compact = 0;
  int m = 0;
  double radius = 0.0;               // s(φ_m)
  std::vector<double> trace;         // r_{n,m} over the tail indices
  double location = 0.0;             // argmax at the horizon
  bool stabilized = false;
};

struct EquivalenceReport {
  CheckResult result;
  std::vector<int> tail;
  std::vector<ResidualEntry> entries;
};

EquivalenceReport equivalence_report(const Boehmian& f, const Boehmian& g, const EquivParams& params);
CheckResult equivalent(const Boehmian& f, const Boehmian& g, const EquivParams& params);

// Vector space and presheaf operations

Boehmian add(const Boehmian& f, const Boehmian& g);
Boehmian scale(double r, const Boehmian& f);
Boehmian sub(const Boehmian& f, const Boehmian& g);
Boehmian restrict(const Boehmian& f, const OpenSet& v);
/// [(f_n ∗ φ)] on erode(U, ε). Requires s(φ) < ε.
Boehmian conv_boehmian(const Boehmian& f, const TestFunction& phi, double eps);

// Regularization

struct ContinuousPart {
  TestFunction psi;
  GridFunction g;       // on a neighborhood of K
  CheckResult check;    // the Cauchy test that selected ψ
};

/// ψ among the witness heads with s(ψ) < d(K, U^c)/4 such that f_n ∗ ψ is
/// Cauchy on the enlarged compact; g = f_horizon ∗ ψ.
/// Throws NoRegularizerFound when no head passes.
ContinuousPart to_continuous_on(const Boehmian& f, const CompactSet& k, const EquivParams& params);

/// φ with s(φ) < ε for which F ∗ φ is continuous on a compact covering erode(U, ε).
TestFunction regularizing_mollifier(const Boehmian& f, double eps, const EquivParams& params);

/// F ∗ ψ on D ⊆ erode(domain, s(ψ)): the structural shortcut when present,
/// otherwise adaptive_regularize.
GridFunction regularize(const Boehmian& f, const TestFunction& psi, const OpenSet& d,
                        const EquivParams& params);

/// The limit of f_k ∗ ψ on D read off the sequence: the last of the indices
/// 4, 6, 8, ... at which two consecutive even indices agree within tol on
/// closure(D). Throws NoRegularizerFound past index 48.
GridFunction adaptive_regularize(const Boehmian& f, const TestFunction& psi, const OpenSet& d,
                                 const EquivParams& params);

struct Exhaustive {
  std::function<OpenSet(int)> opens;     // U_n
  std::function<TestFunction(int)> mollifier;  // φ_n with F ∗ φ_n continuous on closure(U_n)
};

/// U_n = erode(U, ε_n), φ_n = bump(ε_n / 2), ε_n = ε_1 · 2^{-(n-1)}.
Exhaustive default_exhaustive(const OpenSet& u, double eps1);

/// g_n = extend_continuously(F ∗ φ_n on U_n, U). The cover conditions are
/// checked for n up to the horizon (InvalidArgument on violation).
FundamentalSeq rebuild_from_exhaustion(const Boehmian& f, const Exhaustive& plan,
                                       const EquivParams& params);

}  // namespace boehm
