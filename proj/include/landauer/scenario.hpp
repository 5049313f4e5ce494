#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "landauer/lindblad.hpp"
#include "landauer/models.hpp"
#include "landauer/plot.hpp"
#include "landauer/refsolve.hpp"
#include "landauer/thermo.hpp"

namespace landauer {

enum class ModelKind { Rydberg, Erasure, Custom };

/// Fully resolved run description. Built by parse_config from JSON; every
/// default is filled in so that `source` records exactly what was run.
struct ScenarioConfig {
  std::string name;
  ModelKind model = ModelKind::Rydberg;
  RydbergParams rydberg;
  ErasureParams erasure;
  /// Only for ModelKind::Custom: static H_S and channels.
  LindbladModel custom;
  InitialStateKind initial = initial::GibbsAt{30.0};
  PropagateOptions integrator;
  std::optional<double> bath_T;
  BetaBranch branch = BetaBranch::NonNegative;
  std::filesystem::path out_dir;
  bool plots = false;
  Execution exec = Execution::Serial;
  nlohmann::json source;
};

/// Slack >= -kVerdictTolerance counts as holding.
inline constexpr double kVerdictTolerance = 1e-6;

struct Verdict {
  std::string name;
  std::string relation;
  double worst_slack = 0.0;
  double worst_t = 0.0;
  std::size_t samples = 0;
  bool holds = true;
};

struct ScenarioResult {
  ScenarioConfig config;
  LindbladModel model;
  Trajectory trajectory;
  std::optional<BetaSolveResult> reference_solve;
  std::optional<UndrivenReport> undriven;
  std::optional<DrivenReport> driven;
  std::vector<BetaSolveResult> beta_series;
  std::vector<NlpComparison> nlp;
  std::vector<double> bell_fidelity;  // Rydberg only
  std::vector<Verdict> verdicts;
  nlohmann::json meta;

  /// 0 when every verdict holds, 2 otherwise.
  int exit_code() const;
};

/// Built-in configurations: fig1, fig1-inset, fig2, figS1.
/// Throws ConfigError for an unknown name.
nlohmann::json preset(std::string_view name);
std::vector<std::string> preset_names();

/// Validate and fill defaults. Throws ConfigError.
ScenarioConfig parse_config(const nlohmann::json& config);

/// Throws ConfigError, SchemaError.
nlohmann::json load_config_file(const std::filesystem::path& path);

/// Integrate, evaluate every bound and, when out_dir is non-empty, write
/// trajectory.csv, bounds.csv, meta.json (and nlp.csv / plots when enabled).
ScenarioResult run_scenario(const ScenarioConfig& config);

struct RunSummary {
  std::string label;
  std::filesystem::path directory;
  int exit_code = 0;
  std::string error;
};

/// Runs a configuration, expanding its sweep list into one job per entry,
/// each in its own subdirectory. Sweep jobs run concurrently when the
/// configuration asks for parallel execution.
/// Throws ConfigError for invalid input; runtime errors of single jobs are
/// reported through RunSummary (exit code 1).
std::vector<RunSummary> run_config(const nlohmann::json& config);

PlotUnits plot_units(ModelKind model);

}  // namespace landauer
