#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "app.hpp"
#include "relform/errors.hpp"
#include "relform/version.hpp"

namespace relform::app {

namespace {

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + p.string());
  out << text;
}

json report_json(const SuiteReport& rep, const RunConfig& cfg) {
  json checks = json::array();
  for (const auto& c : rep.checks) checks.push_back({{"name", c.name}, {"ok", c.ok}, {"detail", c.detail}});
  return {{"suite", rep.suite},           {"library_version", kLibraryVersion},
          {"config_hash", config_hash(cfg)}, {"config", cfg.canonical},
          {"ok", rep.ok()},               {"checks", checks},
          {"data", rep.data}};
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Relative trace formula checks on the unramified GL(2) tree"};
  std::string suite;
  std::optional<std::string> config_path;
  std::string out_dir = "reports";
  std::optional<long> nmax;
  bool force = false;

  std::vector<std::string> choices = suite_names();
  choices.push_back("all");
  choices.push_back("calibrate");
  app.add_option("suite", suite, "suite to run")->required()->check(CLI::IsMember(choices));
  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--out", out_dir, "report directory")->capture_default_str();
  app.add_option("--nmax", nmax, "largest truncation parameter (2..8)")->check(CLI::Range(2L, 8L));
  app.add_flag("--force-calibrate", force, "refit and overwrite the constants file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 2;
  }

  RunConfig cfg;
  try {
    cfg = load_config(config_path ? std::optional<std::filesystem::path>(*config_path) : std::nullopt);
    if (nmax) {
      cfg.n_max = *nmax;
      cfg.canonical["n_max"] = *nmax;
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (suite == "calibrate") {
      const int rc = calibrate(cfg, force, err);
      if (rc == 3) err << "constants file exists: " << cfg.constants_file.string() << " (use --force-calibrate)\n";
      else out << "wrote " << cfg.constants_file.string() << "\n";
      return rc;
    }
    if (force) calibrate(cfg, true, err);

    std::filesystem::create_directories(out_dir);
    const std::vector<std::string> run = suite == "all" ? suite_names() : std::vector<std::string>{suite};
    bool all_ok = true;
    for (const auto& name : run) {
      const SuiteReport rep = run_suite(name, cfg, err);
      const std::filesystem::path dir(out_dir);
      write_file(dir / (name + ".json"), report_json(rep, cfg).dump(2) + "\n");
      for (const auto& [fname, text] : rep.files) write_file(dir / fname, text);
      const auto passed = std::count_if(rep.checks.begin(), rep.checks.end(), [](const Check& c) { return c.ok; });
      out << name << ": " << (rep.ok() ? "PASS" : "FAIL") << " (" << passed << "/" << rep.checks.size() << ")\n";
      for (const auto& c : rep.checks)
        if (!c.ok) err << "  failed: " << name << ": " << c.name << " " << c.detail.dump() << "\n";
      all_ok = all_ok && rep.ok();
    }
    return all_ok ? 0 : 1;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace relform::app
