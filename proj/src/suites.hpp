#pragma once

// Internal: suite bodies and small helpers shared by them.

#include <cstdint>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "boehm/harness.hpp"

namespace boehm::suites {

void young(CaseLog& log, const RunConfig& cfg);
void mollify(CaseLog& log, const RunConfig& cfg);
void infconv(CaseLog& log, const RunConfig& cfg);
void fundamental(CaseLog& log, const RunConfig& cfg);
void equivalence(CaseLog& log, const RunConfig& cfg);
void vector_space(CaseLog& log, const RunConfig& cfg);
void restriction(CaseLog& log, const RunConfig& cfg);
void convboehm(CaseLog& log, const RunConfig& cfg);
void regularize(CaseLog& log, const RunConfig& cfg);
void rebuild(CaseLog& log, const RunConfig& cfg);
void glue2(CaseLog& log, const RunConfig& cfg);
void gluefinite(CaseLog& log, const RunConfig& cfg);
void gluecountable(CaseLog& log, const RunConfig& cfg);
void locality(CaseLog& log, const RunConfig& cfg);
void presheaf(CaseLog& log, const RunConfig& cfg);
void sheaf_e2e(CaseLog& log, const RunConfig& cfg);
void delta_bridge(CaseLog& log, const RunConfig& cfg);
void pj(CaseLog& log, const RunConfig& cfg);
void extract(CaseLog& log, const RunConfig& cfg);

/// FNV-1a, 64 bit.
inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

/// mt19937_64 seeded with seed ^ fnv1a(suite id), so that a suite draws the
/// same cases whichever other suites run.
inline std::mt19937_64 rng_for(const RunConfig& cfg, const std::string& suite) {
  return std::mt19937_64(cfg.seed ^ fnv1a(suite));
}

/// Top 53 bits as a double in [0, 1); unlike std::uniform_real_distribution
/// this is the same in every standard library.
inline double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Fisher-Yates with j = draw mod (i + 1).
template <class T>
void shuffle(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng() % i]);
}

/// verified iff value < bound.
inline CheckResult below(double value, double bound, std::string note = {}) {
  CheckResult r;
  r.max_residual = value;
  r.bound = bound;
  r.horizon = 1;
  r.status = value < bound ? Status::verified : Status::refuted;
  r.note = std::move(note);
  return r;
}

/// A check expected to fail: refuted becomes verified and vice versa.
inline CheckResult expect_refuted(CheckResult r) {
  if (r.status == Status::refuted) {
    r.status = Status::verified;
    r.note = "refuted as expected" + (r.note.empty() ? std::string() : "; " + r.note);
  } else if (r.status == Status::verified) {
    r.status = Status::refuted;
    r.note = "expected a refutation";
  }
  return r;
}

/// verified iff r is verified with max_residual < bound.
inline CheckResult verified_below(CheckResult r, double bound) {
  if (r.verified() && !(r.max_residual < bound)) {
    r.status = Status::refuted;
    r.note = "verified but residual above the stated bound";
  }
  r.bound = bound;
  return r;
}

template <class E>
CheckResult expect_throw(const std::function<void()>& body) {
  CheckResult r;
  r.horizon = 1;
  try {
    body();
    r.status = Status::refuted;
    r.note = "no error raised";
  } catch (const E& e) {
    r.status = Status::verified;
    r.note = e.what();
  }
  return r;
}

/// Conjunction: refuted if any part is, verified if all are.
inline CheckResult all_of(const std::vector<CheckResult>& parts, std::string note = {}) {
  CheckResult r;
  bool all = !parts.empty();
  bool any_refuted = false;
  for (const auto& p : parts) {
    all = all && p.verified();
    any_refuted = any_refuted || p.refuted();
    r.max_residual = std::max(r.max_residual, p.max_residual);
    r.bound = std::max(r.bound, p.bound);
    r.horizon = std::max(r.horizon, p.horizon);
    if (!p.note.empty() && !p.verified()) note += (note.empty() ? "" : "; ") + p.note;
  }
  r.status = any_refuted ? Status::refuted : all ? Status::verified : Status::inconclusive;
  r.note = std::move(note);
  return r;
}

inline std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

/// (lo, hi) ∪ ... with 4 significant digits.
inline std::string label(const OpenSet& u) {
  std::string out;
  for (const auto& iv : u.intervals()) out += (out.empty() ? "(" : " u (") + fmt(iv.lo) + " " + fmt(iv.hi) + ")";
  return out;
}

}  // namespace boehm::suites
