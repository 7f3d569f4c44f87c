#pragma once

// δ- and Δ-convergence, the P_j functionals, extraction of fundamental
// subsequences from Δ-Cauchy sequences, and the correspondence of classes.

#include <optional>
#include <string>
#include <vector>

#include "boehm/boehmian.hpp"

namespace boehm {

enum class ConvergenceMode { delta_lower, Delta_upper };
std::string to_string(ConvergenceMode m);

/// Verdict for r_n → 0 from the values r at increasing indices ns:
/// verified when the trace is nonincreasing on its last quarter and either
/// ends below tol or decays there at least like n^{-0.9}; refuted when the
/// last quarter stays at or above 10·tol and has either settled (drift
/// within 10%) or grown; inconclusive otherwise.
Status limit_verdict(const std::vector<int>& ns, const std::vector<double>& r, double tol,
                     std::string* note = nullptr);

/// ‖(f_n - f) ∗ φ_m‖_K over n ≤ horizon for the witness indices m of K.
/// Verified when every m is verified, refuted when some m is refuted.
CheckResult delta_converges(const FundamentalSeq& fn, const GridFunction& f, const CompactSet& k,
                            const EquivParams& params);

/// r_n = ‖(f - f_n) ∗ δ_n‖_K for the n whose δ_n fits around K.
CheckResult Delta_converges(const FundamentalSeq& fn, const GridFunction& f, const CompactSet& k,
                            const DeltaSeq& witness, const EquivParams& params);

/// f_{n} - f_{n+s} Δ-converges to 0 for each stride s.
CheckResult Delta_cauchy(const FundamentalSeq& fn, const CompactSet& k, const DeltaSeq& witness,
                         const EquivParams& params, const std::vector<int>& strides = {1, 2, 4});

/// ψ_n = bump(c · s(φ_n)^{1/4}), a Δ witness for dirac representatives
/// built on the schedule φ.
DeltaSeq dirac_Delta_witness(const DeltaSeq& schedule, double c = 0.5);

/// `count` radii evenly spread over (0, 0.95·below].
std::vector<double> radius_grid(double below, int count);

/// min over admissible radii ε of ‖f ∗ bump(ε)‖ on K_j (j counted from 1),
/// an upper bound for P_j(f). Radii not below d(K_j, U^c) are skipped;
/// throws InvalidArgument when none is left.
double pj_upper(const GridFunction& f, int j, const Exhaustion& ex, const std::vector<double>& radii);

/// For each K_j of the exhaustion, the verdict of Δ-convergence to 0 against
/// the verdict of pj_upper(f_n, j) → 0 over the tail indices. Verified iff
/// they agree for every j; refuted when two conclusive verdicts differ.
CheckResult check_Delta_iff_pj(const FundamentalSeq& fn, const Exhaustion& ex,
                               const std::vector<double>& radii, const EquivParams& params);

struct ExtractionOptions {
  int depth = 8;                       // certified steps n = 1 .. depth
  int index_budget = 64;               // largest p tried
  std::vector<int> strides{1, 2, 4};   // q = p + stride in the tail sample
  std::vector<double> fractions{0.9, 0.6, 0.3};  // s(φ_n) / ε_n tried, in order
};

struct Certificate {
  int n = 0;
  int p = 0;
  double eps = 0.0;          // ε_n
  double support = 0.0;      // s(φ_n)
  double margin = 0.0;       // d(K_n, U^c)
  double residual = 0.0;     // ‖(f_{p_{n+1}} - f_{p_n}) ∗ φ_n‖ on K_{n+1}
  double bound = 0.0;        // 2^{-n}
  bool summable = false;     // ε_n < 2^{-n}
  bool fits = false;         // s(φ_n) < ε_n
  bool defined = false;      // s(φ_n) < d(K_n, U^c)
  bool small = false;        // residual < 2^{-n}
  bool ok() const { return summable && fits && defined && small; }
};

struct ExtractionResult {
  std::vector<int> indices;              // p_1 < p_2 < ...
  std::vector<double> radii;             // ε_n
  std::vector<TestFunction> mollifiers;  // φ_n
  std::vector<Certificate> certificates;
  FundamentalSeq subsequence;            // n ↦ f_{p_n}, continued by consecutive indices
  DeltaSeq witness;                      // δ_k = φ_k ∗ φ_{k+1} ∗ ... (truncated)
  CheckResult fundamental;
  CheckResult result;
};

/// Greedy search for p_n and φ_n with ‖(f_p - f_q) ∗ φ_n‖ < 2^{-n} on
/// K_{n+1} over the sampled tail pairs, then is_fundamental on the
/// subsequence. Throws InvalidArgument when the exhaustion fails its
/// conditions, lives on another set or is too short for the depth.
ExtractionResult extract_fundamental_subsequence(const FundamentalSeq& fn, const Exhaustion& ex,
                                                 const EquivParams& params,
                                                 const ExtractionOptions& opt = {});

struct BridgeInstance {
  std::string name;
  FundamentalSeq seq;
  DeltaSeq Delta_witness;
  /// Another representative of the same class; when empty the second
  /// extraction runs on n ↦ f_{n+3}.
  std::optional<FundamentalSeq> alternate;
};

/// One row per instance and property: Δ-Cauchy for fundamental instances,
/// fundamental extraction for Δ-Cauchy ones, and δ-equivalence of two
/// extractions.
std::vector<CheckResult> class_bridge_cases(const std::vector<BridgeInstance>& instances,
                                            const EquivParams& params,
                                            const ExtractionOptions& opt = {});
CheckResult check_class_bridge(const std::vector<BridgeInstance>& instances,
                               const EquivParams& params, const ExtractionOptions& opt = {});

}  // namespace boehm
