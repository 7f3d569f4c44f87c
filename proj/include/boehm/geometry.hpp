#pragma once

// Interval-union algebra on the real line: open sets, compact sets,
// Minkowski dilation/erosion, distances and compact exhaustions.
//
// All sets are immutable values kept in a canonical form (sorted, with
// overlapping or touching intervals merged), so equality is structural.

#include <optional>
#include <string>
#include <vector>

namespace boehm {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

class CompactSet;

/// Finite union of open intervals. Infinite endpoints are allowed.
class OpenSet {
 public:
  OpenSet() = default;
  /// Normalizes the input; throws InvalidArgument if some lo >= hi.
  explicit OpenSet(std::vector<Interval> intervals);

  static OpenSet interval(double lo, double hi);
  static OpenSet real_line();

  const std::vector<Interval>& intervals() const { return intervals_; }
  int dimension() const { return 1; }
  bool empty() const { return intervals_.empty(); }
  bool bounded() const;
  std::size_t size() const { return intervals_.size(); }

  bool contains(double x) const;
  /// True iff `other` is a subset of this set.
  bool contains(const OpenSet& other) const;
  /// Index of the component containing x (open), or nullopt.
  std::optional<std::size_t> component_of(double x) const;

  /// Length of the shortest component; +inf when empty.
  double min_component_length() const;
  double max_component_length() const;

  OpenSet intersect(const OpenSet& other) const;
  OpenSet unite(const OpenSet& other) const;
  CompactSet closure() const;

  friend bool operator==(const OpenSet&, const OpenSet&) = default;

 private:
  std::vector<Interval> intervals_;
};

/// Finite union of closed bounded intervals (degenerate points allowed).
class CompactSet {
 public:
  CompactSet() = default;
  /// Normalizes; throws InvalidArgument if lo > hi or an endpoint is infinite.
  explicit CompactSet(std::vector<Interval> intervals);

  static CompactSet interval(double lo, double hi);

  const std::vector<Interval>& intervals() const { return intervals_; }
  bool empty() const { return intervals_.empty(); }
  std::size_t size() const { return intervals_.size(); }
  bool contains(double x) const;
  bool contains(const CompactSet& other) const;
  double lower() const;
  double upper() const;

  /// Open interior (degenerate intervals vanish).
  OpenSet interior() const;
  CompactSet intersect(const CompactSet& other) const;
  CompactSet unite(const CompactSet& other) const;

  friend bool operator==(const CompactSet&, const CompactSet&) = default;

 private:
  std::vector<Interval> intervals_;
};

/// U^{+eps}: every interval widened by eps on both sides, then merged.
OpenSet dilate(const OpenSet& u, double eps);
/// U^{-eps} = complement of closure(complement(U) + B_eps). May be empty.
OpenSet erode(const OpenSet& u, double eps);

/// Closure of K^{+eps}.
CompactSet dilate(const CompactSet& k, double eps);
/// Closure of K^{-eps}; intervals of length <= 2 eps vanish.
CompactSet erode(const CompactSet& k, double eps);

/// K ⋐ U: every closed interval of K sits inside one open interval of U.
bool is_compactly_contained(const CompactSet& k, const OpenSet& u);

/// d(A, B) between closures. Throws InvalidArgument for empty operands.
double distance(const CompactSet& a, const CompactSet& b);
double distance(const OpenSet& a, const OpenSet& b);
double distance(const CompactSet& a, const OpenSet& b);
double distance(const OpenSet& a, const CompactSet& b);

/// d(K, U^c). Zero when K is not inside U; +inf when U is the whole line.
double distance_to_complement(const CompactSet& k, const OpenSet& u);

/// Nested compacts K_1 ⊂ K_2 ⊂ ... ⋐ U with geometrically shrinking margins.
struct Exhaustion {
  std::vector<CompactSet> sets;
  OpenSet ambient;
  std::vector<double> margins;  // margins[j] = d(sets[j], ambient^c)
};

/// K_j = closure(erode(U, m_j)) with m_{j+1} = ratio * m_j.
///
/// `first_margin` defaults to min(0.4, max component length / 4). The first
/// margin is shrunk (never the count) if the erosion would be empty.
Exhaustion compact_exhaustion(const OpenSet& u, int count,
                              std::optional<double> first_margin = std::nullopt,
                              double ratio = 0.4);

/// Independent checker for the exhaustion conditions: nesting, K_j ⋐ U,
/// d(K_1, U^c) < 1/2 and d(K_{j+1}, U^c) < d(K_j, U^c) / 2. Margins are
/// recomputed from the sets. Returns the list of violations (empty = valid).
std::vector<std::string> exhaustion_violations(const Exhaustion& ex);

std::string to_string(const OpenSet& u);
std::string to_string(const CompactSet& k);

}  // namespace boehm
