#include "linksim/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "linksim/config.hpp"
#include "linksim/sim_harness.hpp"

namespace linksim {
namespace {

PowerDelayProfile load_profile(const std::string& pdp_file) {
  const auto path = resolve_data_path(pdp_file);
  if (!std::filesystem::exists(path)) {
    throw ConfigError({"pdp_file: '" + pdp_file + "' not found (looked in " + path.string() +
                       "); set LINKSIM_DATA_DIR to the directory holding the profile files"});
  }
  try {
    return load_pdp_file(path);
  } catch (const std::exception& e) {
    throw ConfigError({std::string("pdp_file: ") + e.what()});
  }
}

void finalize(ScenarioConfig& config, const CliInvocation& inv) {
  if (inv.seed) config.master_seed = *inv.seed;
  apply_overrides(config, inv.overrides);
}

void write_rows(const std::filesystem::path& path, const std::vector<SweepResultRow>& rows) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  write_csv(out, rows);
  if (!out) throw std::runtime_error("error writing '" + path.string() + "'");
}

int execute(const CliInvocation& inv, std::ostream& out) {
  if (inv.subcommand == "validate-config" || inv.subcommand == "run") {
    ScenarioConfig config = load_config(inv.config_path);
    finalize(config, inv);
    const PowerDelayProfile pdp = load_profile(config.pdp_file);
    if (inv.subcommand == "validate-config") {
      out << "config ok: " << config.name << ", "
          << config.aggregation_levels.size() * config.regb_sizes.size() *
                 config.snr_points_db.size()
          << " points, " << pdp.size() << "-tap profile " << pdp.name() << '\n';
      return kExitOk;
    }
    const Simulator sim(config, pdp);
    const auto rows = sim.run_sweep(inv.workers);
    write_rows(inv.output_path, rows);
    out << "wrote " << rows.size() << " rows to " << inv.output_path << '\n';
    return kExitOk;
  }

  // paper-repro
  std::vector<ScenarioConfig> scenarios = paper_repro_scenarios();
  for (auto& config : scenarios) finalize(config, inv);
  const PowerDelayProfile pdp = load_profile(scenarios.front().pdp_file);
  const std::filesystem::path dir = inv.output_path.empty() ? "." : inv.output_path;
  std::size_t total = 0;
  for (const auto& config : scenarios) {
    const auto rows = Simulator(config, pdp).run_sweep(inv.workers);
    write_rows(dir / (config.name + ".csv"), rows);
    total += rows.size();
  }
  out << "wrote " << scenarios.size() << " files, " << total << " rows to " << dir.string()
      << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Link-level PDCCH REG-bundle EESM simulator", "linksim"};
  app.require_subcommand(1);
  CliInvocation inv;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--set", inv.overrides, "Override a config key (key=value), repeatable")
        ->take_all();
    sub->add_option("--seed", inv.seed, "Master seed");
    sub->add_option("--workers", inv.workers, "Worker threads (0 = all cores)")
        ->check(CLI::NonNegativeNumber);
  };

  auto* run = app.add_subcommand("run", "Run the sweep described by a config file");
  run->add_option("--config", inv.config_path, "Scenario config file")->required();
  run->add_option("--out", inv.output_path, "Output CSV path")->required();
  add_common(run);

  auto* repro = app.add_subcommand("paper-repro", "Run the three preset interference scenarios");
  repro->add_option("--out", inv.output_path, "Output directory (default: .)");
  add_common(repro);

  auto* check = app.add_subcommand("validate-config", "Parse and validate a config file");
  check->add_option("--config", inv.config_path, "Scenario config file")->required();
  add_common(check);

  std::vector<std::string> argv_storage{"linksim"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "linksim: " << e.what() << '\n';
    return kExitConfigError;
  }
  inv.subcommand = app.get_subcommands().front()->get_name();

  try {
    return execute(inv, out);
  } catch (const ConfigError& e) {
    err << "linksim: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "linksim: error: " << e.what() << '\n';
    return kExitRuntimeError;
  }
}

}  // namespace linksim
