#pragma once

// JSON forms of sets, expressions, test functions, grid functions, check
// results and Boehmian descriptors.

#include <json.hpp>

#include "boehm/boehmian.hpp"

namespace boehm::io {

using nlohmann::json;

// {"kind": "open" | "compact", "intervals": [[lo, hi], ...]}
json to_json(const OpenSet& u);
json to_json(const CompactSet& k);
OpenSet open_set(const json& j);
CompactSet compact_set(const json& j);

// {"kind": "sin", "amp": 1, "freq": 3, "phase": 0}, {"kind": "poly", "coeffs": [...]},
// {"kind": "sum", "terms": [...]}, ...
json to_json(const Expr& e);
Expr expr(const json& j);

// {"bump": eps} or {"product": [...], "truncated": bool, "radius": s}
json to_json(const TestFunction& phi);
TestFunction test_function(const json& j);

// {"s1": 0.5, "ratio": 0.5}
DeltaSeq delta_seq(const json& j);

json to_json(const GridFunction& f);
GridFunction grid_function(const json& j);

json to_json(const CheckResult& r);

/// Builds a class on `u` from a descriptor:
///   {"type": "constant", "expr": E}
///   {"type": "zero"}
///   {"type": "dirac", "center": c, "schedule": S}
///   {"type": "mollified", "expr": E, "schedule": S}
///   {"type": "custom-expression", "expr": E, "offset": c}
///   {"type": "sum", "terms": [{"scale": a, "boehmian": D}, ...]}
/// Schedules default to {"s1": 0.5, "ratio": 0.5}. Throws InvalidArgument
/// for malformed descriptors.
Boehmian boehmian(const json& descriptor, const OpenSet& u, double h);

}  // namespace boehm::io
