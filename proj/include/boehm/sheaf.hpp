#pragma once

// Restriction laws, gluing of compatible local sections, and locality.

#include <cstdint>
#include <vector>

#include "boehm/boehmian.hpp"

namespace boehm {

struct Cover {
  std::vector<OpenSet> pieces;
  OpenSet whole;                               // normalized union
  std::vector<std::vector<OpenSet>> overlaps;  // symmetric

  Cover() = default;
  explicit Cover(std::vector<OpenSet> pieces);
};

struct SectionAssignment {
  Cover cover;
  std::vector<Boehmian> sections;

  SectionAssignment() = default;
  /// The cover is read off the section domains.
  explicit SectionAssignment(std::vector<Boehmian> sections);
};

struct CommonRegularizers {
  DeltaSeq seq;                 // δ_n, with s(δ_n) = ε_{n+1}
  std::vector<double> eps;      // ε_1 .. ε_horizon
  CheckResult check;            // branch agreement on erode(W, ε_n)
};

/// δ_n = φ_n ∗ ψ_n with φ_n = ψ_n = bump(ε_n / 4) and ε_n = eps1 · 2^{-(n-1)}.
/// For every n up to the horizon, F ∗ δ_n and G ∗ δ_n are realized on
/// erode(U, ε_n) and erode(V, ε_n) and compared on erode(W, ε_n).
/// Throws InvalidArgument for an empty overlap or eroded set.
CommonRegularizers common_regularizers(const Boehmian& f, const Boehmian& g, double eps1,
                                       const EquivParams& params);

/// ε_1 = ¼ · the shortest component length among U, V and U ∩ V.
double glue_scale(const OpenSet& u, const OpenSet& v);

struct GlueResult {
  Boehmian glued;
  CheckResult compatibility;            // F|_W ∼ G|_W
  CheckResult branch_agreement;
  std::vector<CheckResult> contracts;   // one per piece
};

/// H on U ∪ V with H|_U ∼ F and H|_V ∼ G. Throws InvalidArgument for an
/// empty overlap and SectionsDisagree unless the sections are verified
/// equivalent on the overlap.
GlueResult glue_pair(const Boehmian& f, const Boehmian& g, const EquivParams& params);

/// Left fold of glue_pair. Pieces whose closure is disjoint from the sets
/// glued so far are joined as separate components.
GlueResult glue_finite(const SectionAssignment& assign, const EquivParams& params);

/// Partial unions V_k = U_1 ∪ ... ∪ U_k, partial glues G_k and
/// g_n = extension of G_{min(n, n_max)} ∗ φ_n from erode(V, ε_n) to the union.
GlueResult glue_countable(const SectionAssignment& assign, int n_max, const EquivParams& params);

struct LocalityReport {
  CheckResult result;
  std::vector<CheckResult> local;   // per piece
  CheckResult global;
  bool consistent = false;
};

/// Compares F and G piece by piece and, independently, on global compacts
/// under a product witness adapted to a split of each compact along the cover.
LocalityReport verify_locality(const Boehmian& f, const Boehmian& g, const Cover& cover,
                               const EquivParams& params);

/// Identity and composition of restrictions, checked bitwise on the
/// generators at `indices`, for `triples` random nested W ⊆ V ⊆ U per
/// battery member, plus the same laws for plain grid functions.
CheckResult check_presheaf_laws(const std::vector<Boehmian>& battery, int triples,
                                std::uint64_t seed, const std::vector<int>& indices = {1, 5, 20});

}  // namespace boehm
