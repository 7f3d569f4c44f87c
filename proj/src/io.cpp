#include "boehm/io.hpp"

#include "boehm/errors.hpp"

namespace boehm::io {

namespace {

template <class T>
T field(const json& j, const char* key, T fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("bad field '") + key + "': " + e.what());
  }
}

template <class T>
T required(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InvalidArgument(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("bad field '") + key + "': " + e.what());
  }
}

std::vector<Interval> intervals_of(const json& j) {
  const json& list = j.is_array() ? j : j.value("intervals", json::array());
  if (!list.is_array()) throw InvalidArgument("intervals must be an array of [lo, hi] pairs");
  std::vector<Interval> out;
  for (const auto& pair : list) {
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
      throw InvalidArgument("interval must be a [lo, hi] pair of numbers");
    }
    out.push_back({pair[0].get<double>(), pair[1].get<double>()});
  }
  return out;
}

json pairs(const std::vector<Interval>& ivs) {
  json a = json::array();
  for (const auto& iv : ivs) a.push_back({iv.lo, iv.hi});
  return a;
}

}  // namespace

json to_json(const OpenSet& u) { return {{"kind", "open"}, {"intervals", pairs(u.intervals())}}; }
json to_json(const CompactSet& k) { return {{"kind", "compact"}, {"intervals", pairs(k.intervals())}}; }

OpenSet open_set(const json& j) {
  if (j.is_object() && j.value("kind", "open") != "open") throw InvalidArgument("expected an open set");
  return OpenSet(intervals_of(j));
}

CompactSet compact_set(const json& j) {
  if (j.is_object() && j.value("kind", "compact") != "compact") throw InvalidArgument("expected a compact set");
  return CompactSet(intervals_of(j));
}

json to_json(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::poly:
      return {{"kind", "poly"}, {"coeffs", e.coeffs}};
    case Expr::Kind::sin:
      return {{"kind", "sin"}, {"amp", e.amp}, {"freq", e.freq}, {"phase", e.phase}};
    case Expr::Kind::cos:
      return {{"kind", "cos"}, {"amp", e.amp}, {"freq", e.freq}, {"phase", e.phase}};
    case Expr::Kind::exp:
      return {{"kind", "exp"}, {"amp", e.amp}, {"rate", e.rate}};
    case Expr::Kind::abs:
      return {{"kind", "abs"}, {"amp", e.amp}, {"center", e.center}};
    case Expr::Kind::bump:
      return {{"kind", "bump"}, {"amp", e.amp}, {"center", e.center}, {"radius", e.radius}};
    case Expr::Kind::sum: {
      json t = json::array();
      for (const auto& x : e.terms) t.push_back(to_json(x));
      return {{"kind", "sum"}, {"terms", t}};
    }
  }
  return {};
}

Expr expr(const json& j) try {
  if (j.is_number()) return Expr::constant(j.get<double>());
  const auto kind = required<std::string>(j, "kind");
  if (kind == "poly") return Expr::poly(required<std::vector<double>>(j, "coeffs"));
  if (kind == "constant") return Expr::constant(required<double>(j, "value"));
  if (kind == "sin") return Expr::sine(field(j, "amp", 1.0), field(j, "freq", 1.0), field(j, "phase", 0.0));
  if (kind == "cos") return Expr::cosine(field(j, "amp", 1.0), field(j, "freq", 1.0), field(j, "phase", 0.0));
  if (kind == "exp") return Expr::exponential(field(j, "amp", 1.0), field(j, "rate", 1.0));
  if (kind == "abs") return Expr::absolute(field(j, "amp", 1.0), field(j, "center", 0.0));
  if (kind == "bump") {
    const double r = required<double>(j, "radius");
    if (!(r > 0.0)) throw InvalidArgument("bump radius must be positive");
    return Expr::bump(r, field(j, "center", 0.0), field(j, "amp", 1.0));
  }
  if (kind == "sum") {
    const json& ts = j.at("terms");
    if (!ts.is_array()) throw InvalidArgument("sum terms must be an array");
    std::vector<Expr> terms;
    for (const auto& t : ts) terms.push_back(expr(t));
    return Expr::sum(std::move(terms));
  }
  throw InvalidArgument("unknown expression kind '" + kind + "'");
} catch (const json::exception& e) {
  throw InvalidArgument(std::string("malformed expression: ") + e.what());
}

json to_json(const TestFunction& phi) {
  if (phi.kind() == TestFunction::Kind::bump) return {{"bump", phi.radius()}};
  json fs = json::array();
  for (const auto& f : phi.factors()) fs.push_back(to_json(f));
  return {{"product", fs}, {"truncated", phi.truncated()}, {"radius", phi.radius()}};
}

TestFunction test_function(const json& j) try {
  if (j.is_object() && j.contains("bump")) return TestFunction::bump(required<double>(j, "bump"));
  if (j.is_object() && j.contains("product")) {
    std::vector<TestFunction> fs;
    for (const auto& f : j.at("product")) fs.push_back(test_function(f));
    if (field(j, "truncated", false)) return TestFunction::truncated_product(std::move(fs), required<double>(j, "radius"));
    return TestFunction::product(std::move(fs));
  }
  throw InvalidArgument("test function descriptor needs 'bump' or 'product'");
} catch (const json::exception& e) {
  throw InvalidArgument(std::string("malformed test function: ") + e.what());
}

DeltaSeq delta_seq(const json& j) {
  return DeltaSeq::geometric(field(j, "s1", 0.5), field(j, "ratio", 0.5));
}

json to_json(const GridFunction& f) {
  json pieces = json::array();
  for (const auto& p : f.pieces()) {
    pieces.push_back({{"span", {p.span.lo, p.span.hi}}, {"x", p.x}, {"y", p.y}});
  }
  return {{"domain", to_json(f.domain())}, {"h", f.h()}, {"pieces", pieces}};
}

GridFunction grid_function(const json& j) try {
  const OpenSet u = open_set(j.at("domain"));
  std::vector<Piece> pieces;
  for (const auto& p : j.at("pieces")) {
    Piece piece;
    const auto span = p.at("span").get<std::vector<double>>();
    if (span.size() != 2) throw InvalidArgument("piece span must be [lo, hi]");
    piece.span = {span[0], span[1]};
    piece.x = p.at("x").get<std::vector<double>>();
    piece.y = p.at("y").get<std::vector<double>>();
    if (piece.x.size() != piece.y.size()) throw InvalidArgument("piece x and y differ in length");
    pieces.push_back(std::move(piece));
  }
  return GridFunction(u, required<double>(j, "h"), std::move(pieces));
} catch (const json::exception& e) {
  throw InvalidArgument(std::string("malformed grid function: ") + e.what());
}

json to_json(const CheckResult& r) {
  json j{{"status", to_string(r.status)}, {"max_residual", r.max_residual}, {"bound", r.bound},
         {"horizon", r.horizon}, {"case_id", r.case_id}, {"lemma_ref", r.lemma_ref}};
  if (r.witness) j["witness"] = {{"location", r.witness->location}, {"value", r.witness->value}};
  if (!r.note.empty()) j["note"] = r.note;
  if (!r.residuals.empty()) j["residuals"] = r.residuals;
  return j;
}

namespace {

Boehmian build(const json& d, const OpenSet& u, double h) {
  const auto type = required<std::string>(d, "type");
  const json schedule = d.value("schedule", json::object());
  if (type == "constant") {
    const Expr e = expr(d.at("expr"));
    return from_continuous(sample(e, u, h));
  }
  if (type == "zero") return zero_boehmian(u, h);
  if (type == "dirac") return dirac(field(d, "center", 0.0), delta_seq(schedule), u, h);
  if (type == "mollified") return mollified(expr(d.at("expr")), delta_seq(schedule), u, h);
  if (type == "custom-expression") return custom_expression(expr(d.at("expr")), field(d, "offset", 0.0), u, h);
  if (type == "sum") {
    const json& ts = d.at("terms");
    if (!ts.is_array() || ts.empty()) throw InvalidArgument("sum descriptor needs terms");
    std::optional<Boehmian> acc;
    for (const auto& t : ts) {
      const Boehmian b = scale(field(t, "scale", 1.0), build(t.at("boehmian"), u, h));
      acc = acc ? add(*acc, b) : b;
    }
    return *acc;
  }
  throw InvalidArgument("unknown Boehmian type '" + type + "'");
}

}  // namespace

Boehmian boehmian(const json& d, const OpenSet& u, double h) {
  try {
    return build(d, u, h);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed Boehmian descriptor: ") + e.what());
  }
}

}  // namespace boehm::io
