#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "landauer/error.hpp"
#include "landauer/plot.hpp"
#include "landauer/scenario.hpp"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 3;

std::filesystem::path default_out(const std::string& name) {
  if (const char* env = std::getenv("LANDAUER_OUT"); env != nullptr && *env != '\0') {
    return std::filesystem::path(env) / name;
  }
  return std::filesystem::path("out") / name;
}

struct RunArgs {
  std::string scenario;
  std::string config;
  std::string out;
  bool plots = false;
  bool parallel = false;
  std::optional<double> dt;
  std::optional<double> t_end;
  std::optional<long long> samples;
};

int run(const RunArgs& args) {
  nlohmann::json cfg = args.scenario.empty() ? landauer::load_config_file(args.config)
                                             : landauer::preset(args.scenario);
  if (!cfg.is_object()) throw landauer::Error(landauer::ErrorCode::ConfigError, "config must be a JSON object");
  if (args.dt) cfg["integrator"]["dt"] = *args.dt;
  if (args.t_end) cfg["integrator"]["t_end"] = *args.t_end;
  if (args.samples) cfg["integrator"]["n_samples"] = *args.samples;
  if (args.parallel) cfg["parallel"] = true;

  const std::string name = cfg.value("name", std::string("scenario"));
  if (!args.out.empty()) {
    cfg["outputs"]["directory"] = args.out;
  } else if (!cfg.contains("outputs") || !cfg["outputs"].contains("directory")) {
    cfg["outputs"]["directory"] = default_out(name).string();
  }
  if (args.plots) cfg["outputs"]["plots"] = true;

  int code = 0;
  for (const auto& s : landauer::run_config(cfg)) {
    if (s.exit_code == kExitRuntime) {
      std::cerr << s.label << ": " << s.error << '\n';
    } else {
      std::cout << s.label << ": " << (s.exit_code == 0 ? "all inequalities hold" : "violation") << " ("
                << s.directory.string() << ")\n";
    }
    if (code != kExitRuntime && s.exit_code != 0) code = s.exit_code;
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Landauer-like bound simulator"};
  app.require_subcommand(1);

  RunArgs args;
  auto* run_cmd = app.add_subcommand("run", "Integrate a scenario and evaluate every bound");
  auto* scenario = run_cmd->add_option("--scenario", args.scenario, "Built-in scenario")
                       ->check(CLI::IsMember({"fig1", "fig1-inset", "fig2", "figS1"}));
  auto* config = run_cmd->add_option("--config", args.config, "JSON configuration file");
  scenario->excludes(config);
  config->excludes(scenario);
  run_cmd->add_option("--out", args.out, "Output directory (default $LANDAUER_OUT/<name> or out/<name>)");
  run_cmd->add_flag("--plots", args.plots, "Write SVG plots");
  run_cmd->add_flag("--parallel", args.parallel, "Use the OpenMP kernels");
  run_cmd->add_option("--dt", args.dt, "Integrator step");
  run_cmd->add_option("--t-end", args.t_end, "Final time");
  run_cmd->add_option("--samples", args.samples, "Number of retained samples");

  std::string csv;
  std::string svg;
  std::string units;
  auto* plot_cmd = app.add_subcommand("plot", "Render a bounds.csv as SVG");
  plot_cmd->add_option("bounds_csv", csv, "bounds.csv from a run")->required();
  plot_cmd->add_option("-o,--output", svg, "Output SVG (default: next to the CSV)");
  plot_cmd->add_option("--units", units, "Axis units")->check(CLI::IsMember({"rydberg", "erasure"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run_cmd) {
      if (args.scenario.empty() && args.config.empty()) {
        std::cerr << "run: one of --scenario or --config is required\n";
        return kExitConfig;
      }
      return run(args);
    }
    std::filesystem::path out = svg.empty() ? std::filesystem::path(csv).replace_extension(".svg")
                                            : std::filesystem::path(svg);
    landauer::PlotUnits u;
    if (units == "rydberg") u = landauer::plot_units(landauer::ModelKind::Rydberg);
    if (units == "erasure") u = landauer::plot_units(landauer::ModelKind::Erasure);
    std::cout << landauer::emit_plots(csv, out, u).string() << '\n';
    return 0;
  } catch (const landauer::Error& e) {
    std::cerr << e.what() << '\n';
    return e.code() == landauer::ErrorCode::ConfigError ? kExitConfig : kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return kExitRuntime;
  }
}
