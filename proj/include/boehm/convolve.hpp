#pragma once

// Convolution of grid functions with test functions, and checkers for the
// basic inequalities and convergence statements about mollification.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "boehm/gridfn.hpp"
#include "boehm/mollifier.hpp"

namespace boehm {

enum class Status { verified, refuted, inconclusive };
std::string to_string(Status s);

struct Witness {
  double location = 0.0;
  double value = 0.0;
};

/// Outcome of a finite numerical proxy for an infinitary statement.
struct CheckResult {
  Status status = Status::inconclusive;
  double max_residual = 0.0;
  double bound = 0.0;
  std::optional<Witness> witness;
  int horizon = 0;
  std::string case_id;
  std::string lemma_ref;
  std::string note;
  std::vector<double> residuals;  // per-step trace, when meaningful

  bool verified() const { return status == Status::verified; }
  bool refuted() const { return status == Status::refuted; }
};

/// case_id,lemma_ref,status,max_residual,bound,horizon
std::string csv_fields(const CheckResult& r);

/// f ∗ φ on erode(domain(f), s(φ)). The output keeps the background spacing
/// of f; refined zones of f are carried over, widened by s(φ).
/// Throws DomainCollapsed if the eroded domain is empty.
GridFunction convolve(const GridFunction& f, const TestFunction& phi);

/// Same values as convolve(f, φ), computed only on a neighborhood of K.
/// The result's domain contains K whenever d(K, domain(f)^c) > s(φ).
GridFunction convolve_near(const GridFunction& f, const TestFunction& phi, const CompactSet& k);

/// ‖f ∗ φ‖ on K^{-ε} against ‖f‖_K · ‖φ‖₁. Requires s(φ) < ε
/// (PreconditionViolated otherwise) and a nonempty K^{-ε}.
CheckResult check_young(const GridFunction& f, const TestFunction& phi, const CompactSet& k,
                        double eps, double tol_quad = 1e-6);

struct ConvergenceOptions {
  int horizon = 12;
  double tol = 1e-3;
  double tol_quad = 1e-6;
  int grace = 2;
  /// When set, every residual must also satisfy r_n <= L·s(φ_n) + slack.
  std::optional<double> lipschitz;
  double slack = 1e-4;
};

/// r_n = ‖f - f ∗ φ_n‖_K for the indices n <= horizon whose mollifier fits
/// inside the domain around K.
CheckResult check_mollifier_convergence(const GridFunction& f, const DeltaSeq& seq,
                                        const CompactSet& k, const ConvergenceOptions& opt);

/// r_n = ‖f_n - f_n ∗ φ_n‖ on K^{-ε}, for f_n converging uniformly on K.
CheckResult check_diagonal_mollification(const std::function<GridFunction(int)>& fn,
                                         const DeltaSeq& seq, const CompactSet& k, double eps,
                                         const ConvergenceOptions& opt);

/// Shared verdict rule for decaying residual traces: verified when the last
/// value is below `tol` and the trace is nonincreasing after `grace` steps
/// (within `slack`); refuted when the tail has settled at or above 10·tol;
/// inconclusive otherwise.
Status decay_verdict(const std::vector<double>& r, double tol, int grace, double slack);

}  // namespace boehm
