#include "boehm/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "boehm/errors.hpp"

namespace boehm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Sort and merge intervals that overlap or touch.
std::vector<Interval> merge_sorted(std::vector<Interval> v) {
  std::sort(v.begin(), v.end(), [](const Interval& a, const Interval& b) {
    return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
  });
  std::vector<Interval> out;
  out.reserve(v.size());
  for (const auto& iv : v) {
    if (!out.empty() && iv.lo <= out.back().hi) {
      out.back().hi = std::max(out.back().hi, iv.hi);
    } else {
      out.push_back(iv);
    }
  }
  return out;
}

// Distance between two sorted lists of closed intervals.
double interval_list_distance(const std::vector<Interval>& a,
                              const std::vector<Interval>& b) {
  if (a.empty() || b.empty()) {
    throw InvalidArgument("distance: empty operand");
  }
  double best = kInf;
  for (const auto& x : a) {
    for (const auto& y : b) {
      double gap = 0.0;
      if (x.hi < y.lo) {
        gap = y.lo - x.hi;
      } else if (y.hi < x.lo) {
        gap = x.lo - y.hi;
      }
      best = std::min(best, gap);
    }
  }
  return best;
}

void check_eps(double eps, const char* what) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw InvalidArgument(std::string(what) + ": radius must be positive");
  }
}

}  // namespace

// ---------------------------------------------------------------- OpenSet

OpenSet::OpenSet(std::vector<Interval> intervals) {
  for (const auto& iv : intervals) {
    if (std::isnan(iv.lo) || std::isnan(iv.hi) || !(iv.lo < iv.hi)) {
      throw InvalidArgument("OpenSet: interval with lo >= hi");
    }
  }
  intervals_ = merge_sorted(std::move(intervals));
}

OpenSet OpenSet::interval(double lo, double hi) { return OpenSet({{lo, hi}}); }

OpenSet OpenSet::real_line() { return OpenSet({{-kInf, kInf}}); }

bool OpenSet::bounded() const {
  return std::all_of(intervals_.begin(), intervals_.end(), [](const Interval& iv) {
    return std::isfinite(iv.lo) && std::isfinite(iv.hi);
  });
}

bool OpenSet::contains(double x) const { return component_of(x).has_value(); }

std::optional<std::size_t> OpenSet::component_of(double x) const {
  auto it = std::upper_bound(intervals_.begin(), intervals_.end(), x,
                             [](double v, const Interval& iv) { return v < iv.hi; });
  if (it != intervals_.end() && it->lo < x && x < it->hi) {
    return static_cast<std::size_t>(it - intervals_.begin());
  }
  return std::nullopt;
}

bool OpenSet::contains(const OpenSet& other) const {
  for (const auto& iv : other.intervals_) {
    bool inside = std::any_of(intervals_.begin(), intervals_.end(), [&](const Interval& u) {
      return u.lo <= iv.lo && iv.hi <= u.hi;
    });
    if (!inside) return false;
  }
  return true;
}

double OpenSet::min_component_length() const {
  double best = kInf;
  for (const auto& iv : intervals_) best = std::min(best, iv.length());
  return best;
}

double OpenSet::max_component_length() const {
  double best = 0.0;
  for (const auto& iv : intervals_) best = std::max(best, iv.length());
  return best;
}

OpenSet OpenSet::intersect(const OpenSet& other) const {
  std::vector<Interval> out;
  for (const auto& a : intervals_) {
    for (const auto& b : other.intervals_) {
      double lo = std::max(a.lo, b.lo);
      double hi = std::min(a.hi, b.hi);
      if (lo < hi) out.push_back({lo, hi});
    }
  }
  return OpenSet(std::move(out));
}

OpenSet OpenSet::unite(const OpenSet& other) const {
  auto all = intervals_;
  all.insert(all.end(), other.intervals_.begin(), other.intervals_.end());
  return OpenSet(std::move(all));
}

CompactSet OpenSet::closure() const {
  if (!bounded()) throw Unsupported("closure of an unbounded open set is not compact");
  return CompactSet(intervals_);
}

// ------------------------------------------------------------- CompactSet

CompactSet::CompactSet(std::vector<Interval> intervals) {
  for (const auto& iv : intervals) {
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || iv.lo > iv.hi) {
      throw InvalidArgument("CompactSet: interval must be finite with lo <= hi");
    }
  }
  intervals_ = merge_sorted(std::move(intervals));
}

CompactSet CompactSet::interval(double lo, double hi) { return CompactSet({{lo, hi}}); }

bool CompactSet::contains(double x) const {
  return std::any_of(intervals_.begin(), intervals_.end(),
                     [x](const Interval& iv) { return iv.lo <= x && x <= iv.hi; });
}

bool CompactSet::contains(const CompactSet& other) const {
  for (const auto& iv : other.intervals_) {
    bool inside = std::any_of(intervals_.begin(), intervals_.end(), [&](const Interval& k) {
      return k.lo <= iv.lo && iv.hi <= k.hi;
    });
    if (!inside) return false;
  }
  return true;
}

double CompactSet::lower() const {
  if (empty()) throw InvalidArgument("lower bound of empty compact set");
  return intervals_.front().lo;
}

double CompactSet::upper() const {
  if (empty()) throw InvalidArgument("upper bound of empty compact set");
  return intervals_.back().hi;
}

OpenSet CompactSet::interior() const {
  std::vector<Interval> out;
  for (const auto& iv : intervals_) {
    if (iv.lo < iv.hi) out.push_back(iv);
  }
  return OpenSet(std::move(out));
}

CompactSet CompactSet::intersect(const CompactSet& other) const {
  std::vector<Interval> out;
  for (const auto& a : intervals_) {
    for (const auto& b : other.intervals_) {
      double lo = std::max(a.lo, b.lo);
      double hi = std::min(a.hi, b.hi);
      if (lo <= hi) out.push_back({lo, hi});
    }
  }
  return CompactSet(std::move(out));
}

CompactSet CompactSet::unite(const CompactSet& other) const {
  auto all = intervals_;
  all.insert(all.end(), other.intervals_.begin(), other.intervals_.end());
  return CompactSet(std::move(all));
}

// ------------------------------------------------------ dilation, erosion

OpenSet dilate(const OpenSet& u, double eps) {
  check_eps(eps, "dilate");
  std::vector<Interval> out;
  out.reserve(u.size());
  for (const auto& iv : u.intervals()) out.push_back({iv.lo - eps, iv.hi + eps});
  return OpenSet(std::move(out));
}

OpenSet erode(const OpenSet& u, double eps) {
  check_eps(eps, "erode");
  std::vector<Interval> out;
  for (const auto& iv : u.intervals()) {
    double lo = iv.lo + eps;
    double hi = iv.hi - eps;
    if (lo < hi) out.push_back({lo, hi});
  }
  return OpenSet(std::move(out));
}

CompactSet dilate(const CompactSet& k, double eps) {
  check_eps(eps, "dilate");
  std::vector<Interval> out;
  for (const auto& iv : k.intervals()) out.push_back({iv.lo - eps, iv.hi + eps});
  return CompactSet(std::move(out));
}

CompactSet erode(const CompactSet& k, double eps) {
  check_eps(eps, "erode");
  std::vector<Interval> out;
  for (const auto& iv : k.intervals()) {
    double lo = iv.lo + eps;
    double hi = iv.hi - eps;
    if (lo < hi) out.push_back({lo, hi});
  }
  return CompactSet(std::move(out));
}

bool is_compactly_contained(const CompactSet& k, const OpenSet& u) {
  for (const auto& iv : k.intervals()) {
    bool inside = std::any_of(u.intervals().begin(), u.intervals().end(),
                              [&](const Interval& o) { return o.lo < iv.lo && iv.hi < o.hi; });
    if (!inside) return false;
  }
  return true;
}

// -------------------------------------------------------------- distances

double distance(const CompactSet& a, const CompactSet& b) {
  return interval_list_distance(a.intervals(), b.intervals());
}

double distance(const OpenSet& a, const OpenSet& b) {
  return interval_list_distance(a.intervals(), b.intervals());
}

double distance(const CompactSet& a, const OpenSet& b) {
  return interval_list_distance(a.intervals(), b.intervals());
}

double distance(const OpenSet& a, const CompactSet& b) { return distance(b, a); }

double distance_to_complement(const CompactSet& k, const OpenSet& u) {
  double best = kInf;
  for (const auto& iv : k.intervals()) {
    auto host = std::find_if(u.intervals().begin(), u.intervals().end(),
                             [&](const Interval& o) { return o.lo < iv.lo && iv.hi < o.hi; });
    if (host == u.intervals().end()) return 0.0;
    best = std::min({best, iv.lo - host->lo, host->hi - iv.hi});
  }
  return best;
}

// ------------------------------------------------------------- exhaustion

Exhaustion compact_exhaustion(const OpenSet& u, int count, std::optional<double> first_margin,
                              double ratio) {
  if (u.empty()) throw InvalidArgument("compact_exhaustion: empty open set");
  if (!u.bounded()) throw Unsupported("compact_exhaustion: unbounded open set");
  if (count < 1) throw InvalidArgument("compact_exhaustion: count must be >= 1");
  if (!(ratio > 0.0 && ratio < 0.5)) {
    throw InvalidArgument("compact_exhaustion: ratio must lie in (0, 1/2)");
  }
  double m = first_margin.value_or(std::min(0.4, u.max_component_length() / 4.0));
  if (!(m > 0.0 && m < 0.5)) {
    throw InvalidArgument("compact_exhaustion: first margin must lie in (0, 1/2)");
  }
  while (erode(u, m).empty()) m *= 0.5;

  Exhaustion ex;
  ex.ambient = u;
  double previous = std::numeric_limits<double>::infinity();
  for (int j = 0; j < count; ++j) {
    OpenSet inner = erode(u, m);
    CompactSet k = inner.closure();
    double margin = distance_to_complement(k, u);
    bool shrinking = j == 0 ? margin < 0.5 : margin < 0.5 * previous;
    if (!(margin > 0.0) || !shrinking) {
      throw InvalidArgument("compact_exhaustion: count exceeds representable margins");
    }
    ex.sets.push_back(std::move(k));
    ex.margins.push_back(margin);
    previous = margin;
    m *= ratio;
  }
  return ex;
}

std::vector<std::string> exhaustion_violations(const Exhaustion& ex) {
  std::vector<std::string> out;
  if (ex.sets.size() != ex.margins.size()) out.push_back("sets/margins size mismatch");
  if (!ex.ambient.bounded()) out.push_back("ambient set is unbounded");
  double previous = 0.0;
  for (std::size_t j = 0; j < ex.sets.size(); ++j) {
    const auto& k = ex.sets[j];
    std::string tag = "K_" + std::to_string(j + 1);
    if (k.empty()) {
      out.push_back(tag + " is empty");
      continue;
    }
    if (!is_compactly_contained(k, ex.ambient)) out.push_back(tag + " not compactly contained");
    if (j + 1 < ex.sets.size() && !ex.sets[j + 1].contains(k)) {
      out.push_back(tag + " not contained in its successor");
    }
    double margin = distance_to_complement(k, ex.ambient);
    if (j < ex.margins.size() && margin != ex.margins[j]) {
      out.push_back(tag + " stored margin differs from recomputed distance");
    }
    if (j == 0 && !(margin < 0.5)) out.push_back("d(K_1, U^c) >= 1/2");
    if (j > 0 && !(margin < 0.5 * previous)) out.push_back("d(" + tag + ", U^c) not below half its predecessor");
    previous = margin;
  }
  return out;
}

// --------------------------------------------------------------- printing

namespace {
template <class Set>
std::string render(const Set& s, char open, char close) {
  if (s.empty()) return "{}";
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  for (const auto& iv : s.intervals()) {
    if (!first) os << " u ";
    os << open << iv.lo << ", " << iv.hi << close;
    first = false;
  }
  return os.str();
}
}  // namespace

std::string to_string(const OpenSet& u) { return render(u, '(', ')'); }
std::string to_string(const CompactSet& k) { return render(k, '[', ']'); }

}  // namespace boehm
