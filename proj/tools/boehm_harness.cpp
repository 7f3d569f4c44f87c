// Command-line front end for the suite runner and gluing scenes.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "boehm/errors.hpp"
#include "boehm/harness.hpp"

namespace {

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw boehm::InvalidArgument("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw boehm::InvalidArgument(path + ": " + e.what());
  }
}

std::vector<std::string> split_ids(const std::vector<std::string>& raw) {
  std::vector<std::string> out;
  for (const auto& s : raw) {
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Boehmian property harness"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::vector<std::string> suites;
  std::optional<std::uint64_t> seed;
  std::optional<int> horizon;
  std::optional<double> grid_h;
  bool timing = false;
  bool list = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON file with RunConfig fields");
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--seed", seed, "PRNG seed");
    cmd->add_option("--horizon", horizon, "sequence horizon");
    cmd->add_option("--grid-h", grid_h, "grid spacing");
    cmd->add_flag("--timing", timing, "record wall_ms (makes the CSV nondeterministic)");
  };

  CLI::App* run_cmd = app.add_subcommand("run", "run property suites");
  add_common(run_cmd);
  run_cmd->add_option("--suite", suites, "suite ids, comma separated or repeated");
  run_cmd->add_flag("--list", list, "print the registered suite ids and exit");

  std::string scene_path;
  CLI::App* scene_cmd = app.add_subcommand("scene", "glue the sections of a scene file");
  add_common(scene_cmd);
  scene_cmd->add_option("path", scene_path, "scene JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  boehm::RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = boehm::config_from_json(read_json(config_path));
    if (!suites.empty()) cfg.suites = split_ids(suites);
    if (!out_dir.empty()) cfg.output = out_dir;
    if (seed) cfg.seed = *seed;
    if (horizon) cfg.horizon = *horizon;
    if (grid_h) cfg.grid_h = *grid_h;
    if (timing) cfg.timing = true;
    cfg.validate();
  } catch (const boehm::Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  if (*run_cmd) {
    if (list) {
      for (const auto& id : boehm::suite_ids()) std::cout << id << "\n";
      return 0;
    }
    try {
      const auto out = boehm::run(cfg);
      const auto c = boehm::count(out.rows);
      std::cout << out.rows.size() << " rows: " << c.verified << " verified, " << c.refuted << " refuted, "
                << c.inconclusive << " inconclusive, " << c.error << " error; reports in " << cfg.output
                << "\n";
      for (const auto& r : out.rows) {
        if (r.status != "verified")
          std::cout << "  " << r.status << " " << r.suite << " / " << r.case_id << ": " << r.note << "\n";
      }
      return out.exit_code;
    } catch (const boehm::Error& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }
  }

  boehm::SceneOutcome out;
  try {
    out = boehm::run_scene(read_json(scene_path), cfg);
  } catch (const boehm::InvalidArgument& e) {
    std::cerr << "invalid scene: " << e.what() << "\n";
    return 2;
  }
  std::filesystem::create_directories(cfg.output);
  const auto dir = std::filesystem::path(cfg.output);
  std::ofstream(dir / "scene.json") << out.report.dump(2) << "\n";
  std::ofstream(dir / "scene.csv") << out.report["csv"].get<std::string>();
  for (const auto& r : out.rows) std::cout << r.status << " " << r.case_id << " " << r.note << "\n";
  return out.exit_code;
}
