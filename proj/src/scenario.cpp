#include "landauer/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <set>

#include "landauer/error.hpp"
#include "landauer/report.hpp"

namespace landauer {

namespace {

using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorCode::ConfigError, what); }

void require_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) config_error(where + " must be an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items()) {
    if (!ok.count(key)) config_error("unknown key '" + key + "' in " + where);
  }
}

double number(const json& j, const char* key, double fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  if (!j.at(key).is_number()) config_error(std::string("'") + key + "' must be a number");
  return j.at(key).get<double>();
}

Complex complex_entry(const json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  config_error("matrix and vector entries must be numbers or [re, im] pairs");
}

ComplexVector complex_vector(const json& v) {
  if (!v.is_array() || v.empty()) config_error("expected a non-empty array");
  ComplexVector out;
  for (const auto& e : v) out.push_back(complex_entry(e));
  return out;
}

ComplexMatrix complex_matrix(const json& m, std::size_t dim) {
  if (!m.is_array() || m.size() != dim) config_error("matrix must have " + std::to_string(dim) + " rows");
  ComplexMatrix out(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    if (!m[i].is_array() || m[i].size() != dim) config_error("matrix rows must have " + std::to_string(dim) + " entries");
    for (std::size_t j = 0; j < dim; ++j) out(i, j) = complex_entry(m[i][j]);
  }
  return out;
}

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

LindbladModel parse_custom(const json& c) {
  require_keys(c, "custom", {"dim", "hamiltonian", "channels"});
  if (!c.contains("dim") || !c.at("dim").is_number_unsigned() || c.at("dim").get<std::size_t>() == 0) {
    config_error("custom.dim must be a positive integer");
  }
  LindbladModel m;
  m.dim = c.at("dim").get<std::size_t>();
  if (!c.contains("hamiltonian")) config_error("custom.hamiltonian is required");
  const ComplexMatrix h = complex_matrix(c.at("hamiltonian"), m.dim);
  if (hermiticity_error(h) > kHermitianTolerance) config_error("custom.hamiltonian is not Hermitian");
  m.hamiltonian = [h](double) { return h; };
  if (c.contains("channels")) {
    for (const auto& ch : c.at("channels")) {
      require_keys(ch, "custom.channels[]", {"rate", "op"});
      const double rate = number(ch, "rate", kNaN);
      if (!(rate >= 0.0)) config_error("channel rate must be a non-negative number");
      if (!ch.contains("op")) config_error("channel op is required");
      const ComplexMatrix l = complex_matrix(ch.at("op"), m.dim);
      m.channels.push_back(JumpChannel{rate, [l](double) { return l; }});
    }
  }
  return m;
}

std::string branch_name(BetaBranch b) { return b == BetaBranch::Negative ? "negative" : "non-negative"; }

std::string model_name(ModelKind k) {
  switch (k) {
    case ModelKind::Rydberg: return "rydberg";
    case ModelKind::Erasure: return "erasure";
    case ModelKind::Custom: return "custom";
  }
  return "";
}

json initial_to_json(const InitialStateKind& kind) {
  if (const auto* g = std::get_if<initial::GibbsAt>(&kind)) return {{"kind", "gibbs_at"}, {"beta", g->beta}};
  if (const auto* s = std::get_if<initial::SortedAscendingDiagonal>(&kind)) {
    return {{"kind", "sorted_ascending_diagonal"}, {"beta", s->beta}};
  }
  if (std::holds_alternative<initial::MaximallyMixed>(kind)) return {{"kind", "maximally_mixed"}};
  json psi = json::array();
  for (const auto& z : std::get<initial::Pure>(kind).psi) psi.push_back(complex_to_json(z));
  return {{"kind", "pure"}, {"psi", psi}};
}

InitialStateKind parse_initial(const json& j) {
  require_keys(j, "initial_state", {"kind", "beta", "psi"});
  if (!j.contains("kind") || !j.at("kind").is_string()) config_error("initial_state.kind must be a string");
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "gibbs_at" || kind == "sorted_ascending_diagonal") {
    const double beta = number(j, "beta", kNaN);
    if (!std::isfinite(beta)) config_error("initial_state.beta must be a finite number");
    if (kind == "gibbs_at") return initial::GibbsAt{beta};
    return initial::SortedAscendingDiagonal{beta};
  }
  if (kind == "maximally_mixed") return initial::MaximallyMixed{};
  if (kind == "pure") {
    if (!j.contains("psi")) config_error("initial_state.psi is required for kind 'pure'");
    return initial::Pure{complex_vector(j.at("psi"))};
  }
  config_error("unknown initial_state.kind '" + kind + "'");
}

Verdict make_verdict(std::string name, std::string relation, const std::vector<double>& times,
                     const std::vector<double>& slacks) {
  Verdict v{std::move(name), std::move(relation), kNaN, kNaN, 0, true};
  for (std::size_t k = 0; k < slacks.size(); ++k) {
    if (std::isnan(slacks[k])) continue;
    ++v.samples;
    if (std::isnan(v.worst_slack) || slacks[k] < v.worst_slack) {
      v.worst_slack = slacks[k];
      v.worst_t = times[k];
    }
  }
  v.holds = v.samples == 0 || v.worst_slack >= -kVerdictTolerance;
  return v;
}

template <class Sample, class Fn>
std::vector<double> column(const std::vector<Sample>& samples, Fn&& fn) {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(fn(s));
  return out;
}

double max_abs_finite(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) {
    if (std::isfinite(x)) m = std::max(m, std::abs(x));
  }
  return m;
}

json verdict_json(const Verdict& v) {
  return {{"name", v.name},       {"relation", v.relation}, {"worst_slack", v.worst_slack},
          {"worst_t", v.worst_t}, {"samples", v.samples},   {"holds", v.holds}};
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::ConfigError, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace

int ScenarioResult::exit_code() const {
  const bool ok = std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.holds; });
  return ok ? 0 : 2;
}

std::vector<std::string> preset_names() { return {"fig1", "fig1-inset", "fig2", "figS1"}; }

json preset(std::string_view name) {
  if (name == "fig1") {
    return {{"name", "fig1"}, {"model", "rydberg"}, {"initial_state", {{"kind", "gibbs_at"}, {"beta", 30.0}}}};
  }
  if (name == "fig1-inset") {
    return {{"name", "fig1-inset"},
            {"model", "rydberg"},
            {"initial_state", {{"kind", "sorted_ascending_diagonal"}, {"beta", 30.0}}}};
  }
  if (name == "fig2") {
    return {{"name", "fig2"},
            {"model", "erasure"},
            {"bath_T", 1.0},
            {"initial_state", {{"kind", "gibbs_at"}, {"beta", 1.0}}}};
  }
  if (name == "figS1") {
    json sweep = json::array();
    for (double tau : {5.0, 10.0, 20.0}) {
      sweep.push_back({{"label", "tau_" + std::to_string(static_cast<int>(tau))},
                       {"set", {{"params", {{"tau", tau}}}}}});
    }
    return {{"name", "figS1"},
            {"model", "erasure"},
            {"bath_T", 1.0},
            {"initial_state", {{"kind", "gibbs_at"}, {"beta", 1.0}}},
            {"sweep", sweep}};
  }
  config_error("unknown scenario '" + std::string(name) + "'");
}

ScenarioConfig parse_config(const json& j) {
  try {
    require_keys(j, "config",
                 {"name", "model", "params", "custom", "custom_file", "initial_state", "integrator", "bath_T",
                  "beta_branch", "outputs", "parallel", "sweep"});
    if (j.contains("sweep")) config_error("parse_config takes a single job; expand 'sweep' with run_config");
    ScenarioConfig c;
    c.name = j.value("name", std::string("scenario"));

    const std::string model = j.value("model", std::string());
    const json params = j.value("params", json::object());
    if (model == "rydberg") {
      require_keys(params, "params", {"omega2", "omega", "gamma"});
      c.model = ModelKind::Rydberg;
      c.rydberg.omega2 = number(params, "omega2", c.rydberg.omega2);
      c.rydberg.omega = number(params, "omega", c.rydberg.omega);
      c.rydberg.gamma = number(params, "gamma", c.rydberg.gamma);
      c.initial = initial::GibbsAt{30.0};
      c.integrator = {5000.0, 0.01, 501};
    } else if (model == "erasure") {
      require_keys(params, "params", {"eps0", "eps_tau", "tau", "gamma", "bath_beta"});
      c.model = ModelKind::Erasure;
      auto& p = c.erasure;
      p.eps0 = number(params, "eps0", p.eps0);
      p.eps_tau = number(params, "eps_tau", p.eps_tau);
      p.tau = number(params, "tau", p.tau);
      p.gamma = number(params, "gamma", p.gamma);
      p.bath_beta = number(params, "bath_beta", p.bath_beta);
      if (!(p.tau > 0.0)) config_error("params.tau must be positive");
      c.initial = initial::GibbsAt{p.bath_beta};
      c.integrator = {p.tau, p.tau / 20000.0, 401};
    } else if (model == "custom") {
      c.model = ModelKind::Custom;
      json spec;
      if (j.contains("custom_file")) {
        spec = load_config_file(j.at("custom_file").get<std::string>());
      } else if (j.contains("custom")) {
        spec = j.at("custom");
      } else {
        config_error("model 'custom' needs 'custom' or 'custom_file'");
      }
      c.custom = parse_custom(spec);
      c.initial = initial::MaximallyMixed{};
      c.integrator = {10.0, 0.01, 101};
    } else {
      config_error("model must be one of rydberg, erasure, custom");
    }

    if (j.contains("initial_state")) c.initial = parse_initial(j.at("initial_state"));

    if (j.contains("integrator")) {
      const json& in = j.at("integrator");
      require_keys(in, "integrator", {"dt", "t_end", "n_samples"});
      c.integrator.dt = number(in, "dt", c.integrator.dt);
      c.integrator.t_end = number(in, "t_end", c.integrator.t_end);
      if (in.contains("n_samples")) {
        if (!in.at("n_samples").is_number_integer()) config_error("integrator.n_samples must be an integer");
        const auto n = in.at("n_samples").get<long long>();
        if (n < 2) config_error("integrator.n_samples must be at least 2");
        c.integrator.n_samples = static_cast<std::size_t>(n);
      }
    }
    if (!(c.integrator.dt > 0.0) || !std::isfinite(c.integrator.dt)) config_error("integrator.dt must be positive");
    if (!(c.integrator.t_end > 0.0) || !std::isfinite(c.integrator.t_end)) {
      config_error("integrator.t_end must be positive");
    }
    if (c.integrator.n_samples < 2) config_error("integrator.n_samples must be at least 2");

    if (j.contains("bath_T") && !j.at("bath_T").is_null()) {
      const double T = number(j, "bath_T", kNaN);
      if (!(T > 0.0) || !std::isfinite(T)) config_error("bath_T must be a positive number");
      c.bath_T = T;
    }

    const std::string branch = j.value("beta_branch", std::string("non-negative"));
    if (branch == "non-negative") {
      c.branch = BetaBranch::NonNegative;
    } else if (branch == "negative") {
      c.branch = BetaBranch::Negative;
    } else {
      config_error("beta_branch must be 'non-negative' or 'negative'");
    }

    if (j.contains("outputs")) {
      const json& out = j.at("outputs");
      require_keys(out, "outputs", {"directory", "plots"});
      c.out_dir = out.value("directory", std::string());
      c.plots = out.value("plots", false);
    }
    c.exec = j.value("parallel", false) ? Execution::Parallel : Execution::Serial;

    json src = j;
    src["model"] = model_name(c.model);
    if (c.model == ModelKind::Rydberg) {
      src["params"] = {{"omega2", c.rydberg.omega2}, {"omega", c.rydberg.omega}, {"gamma", c.rydberg.gamma}};
    } else if (c.model == ModelKind::Erasure) {
      const auto& p = c.erasure;
      src["params"] = {{"eps0", p.eps0},   {"eps_tau", p.eps_tau},     {"tau", p.tau},
                       {"gamma", p.gamma}, {"bath_beta", p.bath_beta}};
    }
    src["initial_state"] = initial_to_json(c.initial);
    src["integrator"] = {{"dt", c.integrator.dt},
                         {"t_end", c.integrator.t_end},
                         {"n_samples", c.integrator.n_samples}};
    src["bath_T"] = c.bath_T ? json(*c.bath_T) : json(nullptr);
    src["beta_branch"] = branch_name(c.branch);
    src["parallel"] = c.exec == Execution::Parallel;
    src["name"] = c.name;
    src.erase("outputs");
    c.source = std::move(src);
    return c;
  } catch (const json::exception& e) {
    config_error(std::string("malformed config: ") + e.what());
  }
}

json load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    config_error(path.string() + ": " + e.what());
  }
}

PlotUnits plot_units(ModelKind model) {
  switch (model) {
    case ModelKind::Rydberg: return {"1/Ω", "Ω"};
    case ModelKind::Erasure: return {"ħ/k_BT", "k_BT"};
    case ModelKind::Custom: break;
  }
  return {};
}

ScenarioResult run_scenario(const ScenarioConfig& config) {
  ScenarioResult r;
  r.config = config;

  std::optional<ComplexVector> bell;
  switch (config.model) {
    case ModelKind::Rydberg: {
      RydbergModel ry = build_rydberg(config.rydberg);
      r.model = std::move(ry.model);
      bell = std::move(ry.bell_state);
      break;
    }
    case ModelKind::Erasure: r.model = build_erasure(config.erasure); break;
    case ModelKind::Custom: r.model = config.custom; break;
  }
  r.model.validate();

  const ComplexMatrix h0 = r.model.hamiltonian(0.0);
  const DensityMatrix rho0 = initial_state(config.initial, h0);
  r.trajectory = propagate(r.model, rho0, config.integrator);
  const Trajectory& traj = r.trajectory;
  const auto& times = traj.times;

  if (bell) {
    for (const auto& rho : traj.states) r.bell_fidelity.push_back(fidelity_pure(rho, *bell));
  }
  if (config.bath_T) r.nlp = nlp_comparison(traj, r.model, 1.0 / *config.bath_T, config.exec);

  std::vector<double> E, S, S_diag, Q, W = traj.work;
  json meta;
  json identities;
  json flags;
  std::string direction;

  if (!r.model.driven) {
    BetaSolveResult solve;
    const ReferenceState ref = reference_from_initial_state(h0, rho0, config.branch, &solve);
    r.reference_solve = solve;
    r.undriven = undriven_bounds(traj, r.model, ref, config.bath_T, config.exec);
    const auto& s = r.undriven->samples;
    E = column(s, [](const auto& b) { return b.E_S; });
    S = column(s, [](const auto& b) { return b.S; });
    S_diag = column(s, [](const auto& b) { return b.S_diag; });
    Q = column(s, [](const auto& b) { return b.Q; });
    direction = r.undriven->direction == BoundDirection::Upper ? "upper" : "lower";

    r.verdicts.push_back(make_verdict("landauer_like_gap", "beta_R*dE_R - dS >= 0", times,
                                      column(s, [](const auto& b) { return b.gap_P; })));
    const double beta = ref.beta_R;
    r.verdicts.push_back(make_verdict(beta >= 0.0 ? "heat_upper_bound" : "heat_lower_bound",
                                      beta >= 0.0 ? "Q <= Q_u" : "Q >= Q_u", times, column(s, [beta](const auto& b) {
                                        return beta >= 0.0 ? b.Q_u - b.Q : b.Q - b.Q_u;
                                      })));
    if (config.bath_T) {
      r.verdicts.push_back(make_verdict("landauer_lower_bound", "Q >= -T*dS", times,
                                        column(s, [](const auto& b) { return b.Q - b.lp_lower; })));
      r.verdicts.push_back(make_verdict("nlp_undriven", "beta*dE' - dS' >= 0", times,
                                        column(r.nlp, [](const auto& c) { return c.slack_undriven; })));
    }
    identities["gap_minus_relative_entropy"] =
        max_abs_finite(column(s, [](const auto& b) { return b.gap_P - b.D_direct; }));
    identities["coherence_split"] =
        max_abs_finite(column(s, [](const auto& b) { return b.dS_diag - b.dCoh - b.dS; }));
    meta["reference"] = {{"beta_R", solve.beta_R},
                         {"residual", solve.residual},
                         {"saturated", solve.saturated},
                         {"branch", branch_name(solve.branch)}};
    flags["degenerate_spectrum"] = r.undriven->degenerate_spectrum;
    flags["flipped"] = beta < 0.0;
    flags["infinite_temperature"] = beta == 0.0;
    flags["saturated_samples"] = solve.saturated ? s.size() : 0;
  } else {
    std::vector<EntropySample> entropies;
    for (std::size_t k = 0; k < traj.size(); ++k) {
      entropies.push_back({times[k], von_neumann_entropy(traj.states[k])});
    }
    r.beta_series = solve_beta_series(r.model.hamiltonian, entropies, config.branch, config.exec);
    r.driven = driven_bounds(traj, r.model, r.beta_series, config.bath_T, config.exec);
    const auto& s = r.driven->samples;
    E = column(s, [](const auto& b) { return b.E_S; });
    S = column(s, [](const auto& b) { return b.S; });
    S_diag = column(s, [](const auto& b) { return b.S_diag; });
    Q = column(s, [](const auto& b) { return b.Q; });
    direction = r.driven->direction == BoundDirection::Upper ? "upper" : "lower";
    const double beta0 = r.driven->beta_R0;

    r.verdicts.push_back(make_verdict("generalized_gap", "beta_R(0)*dE_R~ - dS + C >= 0", times,
                                      column(s, [](const auto& b) { return b.gap; })));
    r.verdicts.push_back(make_verdict(beta0 >= 0.0 ? "driven_heat_upper_bound" : "driven_heat_lower_bound",
                                      beta0 >= 0.0 ? "Q <= Qu~ + W" : "Q >= Qu~ + W", times,
                                      column(s, [beta0](const auto& b) {
                                        return beta0 >= 0.0 ? b.upper - b.Q : b.Q - b.upper;
                                      })));
    if (config.bath_T) {
      r.verdicts.push_back(make_verdict("landauer_lower_bound", "Q >= -T*dS", times,
                                        column(s, [](const auto& b) { return b.Q - b.lp_lower; })));
      r.verdicts.push_back(make_verdict("nlp_driven", "beta*F(t) - beta*F_eq(t) >= 0", times,
                                        column(r.nlp, [](const auto& c) { return c.slack_driven; })));
    }
    std::vector<double> gap_err;
    std::size_t saturated = 0;
    std::size_t solver_errors = 0;
    double max_residual = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k) {
      const auto& bt = r.beta_series[k];
      if (bt.error) {
        ++solver_errors;
        continue;
      }
      if (bt.saturated) {
        ++saturated;
        continue;
      }
      max_residual = std::max(max_residual, bt.residual);
      gap_err.push_back(s[k].gap - s[k].D_inst);
    }
    identities["gap_minus_relative_entropy"] = max_abs_finite(gap_err);
    identities["coherence_split"] =
        max_abs_finite(column(s, [](const auto& b) { return b.dS_diag - b.dCoh - b.dS; }));
    meta["reference"] = {{"beta_R0", beta0},
                         {"residual0", r.beta_series.front().residual},
                         {"max_residual", max_residual},
                         {"solver_errors", solver_errors},
                         {"branch", branch_name(config.branch)}};
    flags["degenerate_spectrum"] = has_near_degeneracy(eigvalsh(h0));
    flags["flipped"] = beta0 < 0.0;
    flags["infinite_temperature"] = beta0 == 0.0;
    flags["saturated_samples"] = saturated;
  }

  std::vector<double> balance;
  for (std::size_t k = 0; k < traj.size(); ++k) balance.push_back((E[k] - E.front()) - W[k] + Q[k]);
  identities["energy_balance"] = max_abs_finite(balance);

  const auto& d = traj.diagnostics;
  meta["flags"] = flags;
  meta["scenario"] = config.name;
  meta["config"] = config.source;
  meta["units"] = {{"time", plot_units(config.model).time}, {"energy", plot_units(config.model).energy},
                   {"beta", "1/" + plot_units(config.model).energy}};
  json assumptions = json::array({"hbar = k_B = 1"});
  if (config.model == ModelKind::Rydberg) {
    assumptions.push_back("energies in units of Omega = 2 pi MHz; beta_R in units of 1/Omega");
  }
  if (meta["flags"].value("degenerate_spectrum", false)) {
    assumptions.push_back("H_S is degenerate: S' dephases onto whole eigenspaces (basis independent)");
  }
  if (!config.bath_T) assumptions.push_back("no thermal bath configured: Landauer lower bound not evaluated");
  meta["assumptions"] = assumptions;
  meta["integrator"] = {{"method", "rk4-fixed-step"},
                        {"dt_requested", config.integrator.dt},
                        {"dt_effective", d.dt},
                        {"steps", d.steps},
                        {"t_end", config.integrator.t_end},
                        {"n_samples", config.integrator.n_samples},
                        {"stability_ratio", d.stability_ratio}};
  meta["diagnostics"] = {{"max_trace_drift", d.max_trace_drift},
                         {"min_eigenvalue", d.min_eigenvalue},
                         {"warnings", d.warnings}};
  meta["flags"] = flags;
  meta["identities"] = identities;
  meta["bound_direction"] = direction;
  if (!r.bell_fidelity.empty()) meta["bell_fidelity_final"] = r.bell_fidelity.back();
  json verdicts = json::array();
  for (const auto& v : r.verdicts) verdicts.push_back(verdict_json(v));
  meta["verdicts"] = verdicts;
  meta["tolerance"] = kVerdictTolerance;
  meta["exit_code"] = r.exit_code();
  r.meta = meta;

  if (!config.out_dir.empty()) {
    std::filesystem::create_directories(config.out_dir);
    write_trajectory_csv(config.out_dir / "trajectory.csv", traj, E, S, S_diag, r.bell_fidelity);
    const auto bounds = config.out_dir / "bounds.csv";
    if (r.undriven) {
      write_undriven_csv(bounds, *r.undriven);
    } else {
      write_driven_csv(bounds, *r.driven);
    }
    if (!r.nlp.empty()) write_nlp_csv(config.out_dir / "nlp.csv", r.nlp);
    write_json(config.out_dir / "meta.json", meta);
    if (config.plots) emit_plots(bounds, config.out_dir / "bounds.svg", plot_units(config.model));
  }
  return r;
}

std::vector<RunSummary> run_config(const json& config) {
  struct Job {
    std::string label;
    ScenarioConfig config;
  };
  std::vector<Job> jobs;
  std::filesystem::path root;
  bool plots = false;
  bool parallel = false;

  if (config.is_object() && config.contains("sweep")) {
    const json& sweep = config.at("sweep");
    if (!sweep.is_array() || sweep.empty()) config_error("sweep must be a non-empty array");
    json base = config;
    base.erase("sweep");
    const ScenarioConfig base_cfg = parse_config(base);
    root = base_cfg.out_dir;
    plots = base_cfg.plots;
    parallel = base_cfg.exec == Execution::Parallel;
    std::set<std::string> labels;
    for (const auto& entry : sweep) {
      require_keys(entry, "sweep[]", {"label", "set"});
      if (!entry.contains("label") || !entry.at("label").is_string()) config_error("sweep label must be a string");
      const auto label = entry.at("label").get<std::string>();
      if (label.empty() || label.find('/') != std::string::npos || label == "." || label == "..") {
        config_error("sweep label '" + label + "' is not a valid directory name");
      }
      if (!labels.insert(label).second) config_error("duplicate sweep label '" + label + "'");
      json job = base;
      if (entry.contains("set")) job.merge_patch(entry.at("set"));
      job["name"] = base_cfg.name + "/" + label;
      if (!root.empty()) job["outputs"]["directory"] = (root / label).string();
      if (job.contains("outputs")) job["outputs"]["plots"] = plots;
      jobs.push_back({label, parse_config(job)});
    }
  } else {
    ScenarioConfig c = parse_config(config);
    root = c.out_dir;
    jobs.push_back({c.name, std::move(c)});
  }

  std::vector<RunSummary> summaries(jobs.size());
  std::vector<bool> driven(jobs.size(), false);
  const auto count = static_cast<std::ptrdiff_t>(jobs.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const Job& job = jobs[static_cast<std::size_t>(i)];
    RunSummary& s = summaries[static_cast<std::size_t>(i)];
    s.label = job.label;
    s.directory = job.config.out_dir;
    try {
      const ScenarioResult r = run_scenario(job.config);
      s.exit_code = r.exit_code();
      driven[static_cast<std::size_t>(i)] = r.driven.has_value();
    } catch (const std::exception& e) {
      s.exit_code = 1;
      s.error = e.what();
    }
  }

  if (jobs.size() > 1 && !root.empty()) {
    json summary = json::array();
    for (const auto& s : summaries) {
      summary.push_back({{"label", s.label}, {"directory", s.directory.string()}, {"exit_code", s.exit_code},
                         {"error", s.error}});
    }
    write_json(root / "sweep.json", summary);
    const bool all_driven = std::all_of(driven.begin(), driven.end(), [](bool b) { return b; });
    if (plots && all_driven) {
      std::vector<std::pair<std::string, std::filesystem::path>> runs;
      for (const auto& s : summaries) runs.emplace_back(s.label, s.directory / "bounds.csv");
      emit_sweep_plot(runs, root / "sweep_coherence.svg", plot_units(jobs.front().config.model));
    }
  }
  return summaries;
}

}  // namespace landauer
