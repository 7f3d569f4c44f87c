#include "boehm/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "boehm/errors.hpp"
#include "boehm/io.hpp"
#include "boehm/sheaf.hpp"
#include "suites.hpp"

namespace boehm {

using nlohmann::json;

// ---------------------------------------------------------------- config

void RunConfig::validate() const {
  if (!(grid_h > 0) || !std::isfinite(grid_h)) throw InvalidArgument("grid_h must be positive");
  if (horizon < 4) throw InvalidArgument("horizon must be at least 4");
  if (!(tol_sup > 0)) throw InvalidArgument("tol_sup must be positive");
  if (!(tol_quad > 0)) throw InvalidArgument("tol_quad must be positive");
  if (output.empty()) throw InvalidArgument("output must be a path");
  const auto& ids = suite_ids();
  for (const auto& s : suites) {
    if (std::find(ids.begin(), ids.end(), s) == ids.end()) throw InvalidArgument("unknown suite id: " + s);
  }
}

EquivParams RunConfig::equiv() const {
  EquivParams p;
  p.horizon = horizon;
  p.tol = tol_sup;
  p.tol_quad = tol_quad;
  return p;
}

RunConfig config_from_json(const json& j) {
  if (!j.is_object()) throw InvalidArgument("config must be a JSON object");
  static const std::vector<std::string> known{"grid_h", "horizon", "tol_sup", "tol_quad",
                                              "seed",   "suites",  "output",  "timing"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw InvalidArgument("unknown config field: " + key);
  }
  RunConfig c;
  try {
    if (j.contains("grid_h")) c.grid_h = j.at("grid_h").get<double>();
    if (j.contains("horizon")) c.horizon = j.at("horizon").get<int>();
    if (j.contains("tol_sup")) c.tol_sup = j.at("tol_sup").get<double>();
    if (j.contains("tol_quad")) c.tol_quad = j.at("tol_quad").get<double>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("suites")) c.suites = j.at("suites").get<std::vector<std::string>>();
    if (j.contains("output")) c.output = j.at("output").get<std::string>();
    if (j.contains("timing")) c.timing = j.at("timing").get<bool>();
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("config: ") + e.what());
  }
  return c;
}

json to_json(const RunConfig& c) {
  return json{{"grid_h", c.grid_h}, {"horizon", c.horizon}, {"tol_sup", c.tol_sup},
              {"tol_quad", c.tol_quad}, {"seed", c.seed}, {"suites", c.suites},
              {"output", c.output}, {"timing", c.timing}};
}

// ---------------------------------------------------------------- registry

namespace {

using SuiteFn = void (*)(CaseLog&, const RunConfig&);

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> r{
      {"young", suites::young},
      {"mollify", suites::mollify},
      {"infconv", suites::infconv},
      {"fundamental", suites::fundamental},
      {"equivalence", suites::equivalence},
      {"vector", suites::vector_space},
      {"restriction", suites::restriction},
      {"convboehm", suites::convboehm},
      {"regularize", suites::regularize},
      {"rebuild", suites::rebuild},
      {"glue2", suites::glue2},
      {"gluefinite", suites::gluefinite},
      {"gluecountable", suites::gluecountable},
      {"locality", suites::locality},
      {"presheaf", suites::presheaf},
      {"sheaf-e2e", suites::sheaf_e2e},
      {"delta-bridge", suites::delta_bridge},
      {"pj", suites::pj},
      {"extract", suites::extract},
  };
  return r;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

const std::vector<std::string>& suite_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> v;
    for (const auto& [id, fn] : registry()) v.push_back(id);
    return v;
  }();
  return ids;
}

// ---------------------------------------------------------------- rows

CaseLog::CaseLog(std::string suite, bool timing) : suite_(std::move(suite)), timing_(timing) {}

void CaseLog::run(const std::string& case_id, const std::string& lemma_ref,
                  const std::function<CheckResult()>& body) {
  Row row;
  row.suite = suite_;
  row.case_id = case_id;
  row.lemma_ref = lemma_ref;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const CheckResult r = body();
    row.status = to_string(r.status);
    row.max_residual = r.max_residual;
    row.bound = r.bound;
    row.horizon = r.horizon;
    row.note = r.note;
    row.residuals = r.residuals;
  } catch (const std::exception& e) {
    row.status = "error";
    row.note = e.what();
  }
  if (timing_) {
    row.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  }
  rows_.push_back(std::move(row));
}

std::vector<Row> run_suite(const std::string& id, const RunConfig& cfg) {
  for (const auto& [name, fn] : registry()) {
    if (name != id) continue;
    CaseLog log(name, cfg.timing);
    fn(log, cfg);
    return log.take();
  }
  throw InvalidArgument("unknown suite id: " + id);
}

Counts count(const std::vector<Row>& rows) {
  Counts c;
  for (const auto& r : rows) {
    if (r.status == "verified") ++c.verified;
    else if (r.status == "refuted") ++c.refuted;
    else if (r.status == "inconclusive") ++c.inconclusive;
    else ++c.error;
  }
  return c;
}

// ---------------------------------------------------------------- reports

std::string csv_report(const std::vector<Row>& rows, const RunConfig& cfg) {
  std::ostringstream os;
  os << "# prng=mt19937_64 seed=" << cfg.seed << " grid_h=" << num(cfg.grid_h)
     << " horizon=" << cfg.horizon << " tol_sup=" << num(cfg.tol_sup)
     << " tol_quad=" << num(cfg.tol_quad) << "\n";
  os << "suite,case_id,lemma_ref,status,max_residual,bound,horizon,wall_ms\n";
  for (const auto& r : rows) {
    os << csv_cell(r.suite) << ',' << csv_cell(r.case_id) << ',' << csv_cell(r.lemma_ref) << ','
       << r.status << ',' << num(r.max_residual) << ',' << num(r.bound) << ',' << r.horizon << ','
       << num(r.wall_ms) << "\n";
  }
  return os.str();
}

std::string trace_table(const std::vector<Row>& rows) {
  std::ostringstream os;
  os << "suite,case_id,step,residual\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.residuals.size(); ++i) {
      os << csv_cell(r.suite) << ',' << csv_cell(r.case_id) << ',' << i + 1 << ','
         << num(r.residuals[i]) << "\n";
    }
  }
  return os.str();
}

json summary(const std::vector<Row>& rows, const RunConfig& cfg) {
  const Counts c = count(rows);
  json per_suite = json::object();
  json flagged = json::array();
  for (const auto& r : rows) {
    auto& s = per_suite[r.suite];
    if (s.is_null()) s = json{{"verified", 0}, {"refuted", 0}, {"inconclusive", 0}, {"error", 0}};
    s[r.status] = s[r.status].get<int>() + 1;
    if (r.status != "verified") {
      flagged.push_back(json{{"suite", r.suite}, {"case_id", r.case_id}, {"lemma_ref", r.lemma_ref},
                             {"status", r.status}, {"note", r.note}});
    }
  }
  return json{{"config", to_json(cfg)},
              {"prng", "mt19937_64"},
              {"rows", rows.size()},
              {"verified", c.verified},
              {"refuted", c.refuted},
              {"inconclusive", c.inconclusive},
              {"error", c.error},
              {"suites", per_suite},
              {"flagged", flagged}};
}

namespace {

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write " + p.string());
  out << text;
}

}  // namespace

RunOutcome run(const RunConfig& cfg) {
  cfg.validate();
  RunOutcome out;
  const auto& ids = cfg.suites.empty() ? suite_ids() : cfg.suites;
  // rows are written in registered order whatever order was requested
  for (const auto& id : suite_ids()) {
    if (std::find(ids.begin(), ids.end(), id) == ids.end()) continue;
    auto rows = run_suite(id, cfg);
    out.rows.insert(out.rows.end(), std::make_move_iterator(rows.begin()),
                    std::make_move_iterator(rows.end()));
  }
  const Counts c = count(out.rows);
  out.exit_code = c.refuted + c.error > 0 ? 1 : 0;

  const std::filesystem::path dir(cfg.output);
  std::filesystem::create_directories(dir);
  write_file(dir / "report.csv", csv_report(out.rows, cfg));
  write_file(dir / "traces.csv", trace_table(out.rows));
  write_file(dir / "summary.json", summary(out.rows, cfg).dump(2) + "\n");
  return out;
}

// ---------------------------------------------------------------- scenes

SceneOutcome run_scene(const json& scene, const RunConfig& base) {
  if (!scene.is_object()) throw InvalidArgument("scene must be a JSON object");
  RunConfig cfg = base;
  if (scene.contains("params")) {
    json merged = to_json(base);
    for (const auto& [k, v] : scene.at("params").items()) merged[k] = v;
    cfg = config_from_json(merged);
  }
  cfg.validate();
  const EquivParams params = cfg.equiv();

  std::string mode = "finite";
  int n_max = cfg.horizon;
  std::vector<OpenSet> pieces;
  std::vector<Boehmian> sections;
  std::optional<json> oracle;
  try {
    mode = scene.value("mode", std::string("finite"));
    n_max = scene.value("n_max", cfg.horizon);
    for (const auto& p : scene.at("pieces")) pieces.push_back(io::open_set(p));
    const auto& descs = scene.at("sections");
    if (!descs.is_array() || descs.size() != pieces.size())
      throw InvalidArgument("scene: one section descriptor per piece is required");
    for (std::size_t i = 0; i < pieces.size(); ++i)
      sections.push_back(io::boehmian(descs[i], pieces[i], cfg.grid_h));
    if (scene.contains("oracle")) oracle = scene.at("oracle");
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("scene: ") + e.what());
  }
  if (mode != "pair" && mode != "finite" && mode != "countable")
    throw InvalidArgument("scene: unknown mode " + mode);
  if (pieces.empty()) throw InvalidArgument("scene: no pieces");
  if (mode == "pair" && pieces.size() != 2) throw InvalidArgument("scene: pair mode needs two pieces");
  if (n_max < 1) throw InvalidArgument("scene: n_max must be positive");

  const std::string lemma = mode == "pair" ? "T15-glue" : mode == "finite" ? "C16-glue" : "L19-glue";
  SceneOutcome out;
  CaseLog log("scene", cfg.timing);
  std::optional<GlueResult> glued;
  log.run("glue", lemma, [&] {
    if (mode == "pair") glued = glue_pair(sections[0], sections[1], params);
    else if (mode == "finite") glued = glue_finite(SectionAssignment(sections), params);
    else glued = glue_countable(SectionAssignment(sections), n_max, params);
    if (mode == "pair") return suites::all_of({glued->compatibility, glued->branch_agreement});
    CheckResult r;
    r.status = Status::verified;
    r.horizon = params.horizon;
    r.note = "glued on " + suites::label(glued->glued.domain());
    return r;
  });

  if (glued) {
    for (std::size_t i = 0; i < glued->contracts.size(); ++i) {
      const CheckResult c = glued->contracts[i];
      log.run("contract " + c.case_id, lemma, [c] { return c; });
    }
    if (oracle) {
      log.run("oracle", lemma, [&] {
        const Boehmian ref = io::boehmian(*oracle, glued->glued.domain(), cfg.grid_h);
        return equivalent(glued->glued, ref, params);
      });
    }
  }
  out.rows = log.take();

  json rows = json::array();
  for (const auto& r : out.rows) {
    rows.push_back(json{{"case_id", r.case_id}, {"lemma_ref", r.lemma_ref}, {"status", r.status},
                        {"max_residual", r.max_residual}, {"bound", r.bound}, {"horizon", r.horizon},
                        {"note", r.note}});
  }
  out.report = json{{"mode", mode}, {"rows", rows}};
  if (glued) {
    out.report["glued"] = json{{"domain", io::to_json(glued->glued.domain())},
                               {"tag", glued->glued.tag()},
                               {"witness", glued->glued.witness.label()},
                               {"generator_at_horizon", io::to_json(glued->glued(cfg.horizon))}};
  }
  out.report["csv"] = csv_report(out.rows, cfg);
  const Counts c = count(out.rows);
  out.exit_code = c.refuted + c.error > 0 ? 1 : 0;
  return out;
}

}  // namespace boehm
