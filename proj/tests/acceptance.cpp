// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails. `acceptance 4 6` runs a subset.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "landauer/error.hpp"
#include "landauer/linalg.hpp"
#include "landauer/lindblad.hpp"
#include "landauer/models.hpp"
#include "landauer/qstate.hpp"
#include "landauer/refsolve.hpp"
#include "landauer/scenario.hpp"
#include "landauer/thermo.hpp"

using namespace landauer;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// Accumulates named clauses into one verdict line.
class Clauses {
 public:
  void add(const std::string& name, bool ok, const std::string& value) {
    pass_ = pass_ && ok;
    if (!text_.empty()) text_ += "; ";
    text_ += name + (ok ? " ok" : " FAILED") + " (" + value + ")";
  }
  Outcome done() const { return {pass_, text_}; }

 private:
  bool pass_ = true;
  std::string text_;
};

ScenarioResult run_preset(const std::string& name) {
  ScenarioConfig c = parse_config(preset(name));
  c.out_dir.clear();
  return run_scenario(c);
}

double energy(const ComplexMatrix& h, const DensityMatrix& rho) { return trace_product(h, rho.matrix()).real(); }

// Lazily computed runs shared between criteria.
class Runs {
 public:
  const ScenarioResult& fig1() { return get("fig1"); }
  const ScenarioResult& inset() { return get("fig1-inset"); }
  const ScenarioResult& fig2() { return get("fig2"); }

 private:
  const ScenarioResult& get(const std::string& name) {
    auto it = cache_.find(name);
    if (it == cache_.end()) it = cache_.emplace(name, run_preset(name)).first;
    return it->second;
  }
  std::map<std::string, ScenarioResult> cache_;
};

LindbladModel amplitude_damping(double eps, double gamma) {
  LindbladModel m;
  m.dim = 2;
  ComplexMatrix h(2);
  h(0, 0) = eps / 2.0;
  h(1, 1) = -eps / 2.0;
  m.hamiltonian = [h](double) { return h; };
  ComplexMatrix l(2);
  l(0, 1) = 1.0;
  m.channels.push_back({gamma, [l](double) { return l; }});
  return m;
}

Outcome integrator_oracle() {
  const double gamma = 0.2;
  const LindbladModel m = amplitude_damping(1.0, gamma);
  const DensityMatrix excited(ComplexMatrix::diagonal(std::vector<double>{0.0, 1.0}));
  const Trajectory tr = propagate(m, excited, {25.0, 1e-3, 251});
  double err = 0.0;
  for (std::size_t k = 0; k < tr.size(); ++k) {
    err = std::max(err, std::abs(tr.states[k].matrix()(1, 1).real() - std::exp(-gamma * tr.times[k])));
  }
  // Step-halving error against the exact solution.
  auto error_at = [&](double dt) {
    const Trajectory coarse = propagate(m, excited, {25.0, dt, 26});
    double e = 0.0;
    for (std::size_t k = 0; k < coarse.size(); ++k) {
      e = std::max(e, std::abs(coarse.states[k].matrix()(1, 1).real() - std::exp(-gamma * coarse.times[k])));
    }
    return e;
  };
  const double ratio = error_at(0.5) / error_at(0.25);
  Clauses c;
  c.add("max |p_e - exp(-gamma t)| < 1e-8", err < 1e-8, num(err));
  c.add("error ratio on dt halving >= 15", ratio >= 15.0, num(ratio));
  return c.done();
}

Outcome undriven_gap(Runs& runs) {
  const ScenarioResult& r = runs.fig1();
  const ComplexMatrix h = r.model.hamiltonian(0.0);
  const double beta = r.reference_solve->beta_R;
  const ReferenceState ref = gibbs_state(h, beta);
  const double e_th = energy(h, ref.gibbs);
  const double s0 = von_neumann_entropy(r.trajectory.states.front());
  double worst = 0.0;
  double worst_reported = 0.0;
  for (std::size_t k = 0; k < r.trajectory.size(); ++k) {
    const DensityMatrix& rho = r.trajectory.states[k];
    const double gap = beta * (energy(h, rho) - e_th) - (von_neumann_entropy(rho) - s0);
    worst = std::max(worst, std::abs(gap - relative_entropy(rho, ref.gibbs)));
    const auto& b = r.undriven->samples[k];
    worst_reported = std::max(worst_reported, std::abs(b.gap_P - b.D_direct));
  }
  Clauses c;
  c.add("recomputed |P - D| < 1e-8", worst < 1e-8, num(worst));
  c.add("reported |gap_P - D_direct| < 1e-8", worst_reported < 1e-8, num(worst_reported));
  return c.done();
}

Outcome driven_gap(Runs& runs) {
  const ScenarioResult& r = runs.fig2();
  const auto& traj = r.trajectory;
  const double beta0 = r.beta_series.front().beta_R;
  const ReferenceState ref0 = gibbs_state(r.model.hamiltonian(0.0), beta0);
  const double e_th0 = energy(r.model.hamiltonian(0.0), ref0.gibbs);
  const double s0 = von_neumann_entropy(traj.states.front());
  double worst = 0.0;
  double worst_reported = 0.0;
  std::size_t used = 0;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const auto& bt = r.beta_series[k];
    if (bt.saturated || bt.error) continue;
    ++used;
    const ComplexMatrix h = r.model.hamiltonian(traj.times[k]);
    const ReferenceState ref = gibbs_state(h, bt.beta_R);
    const double e = energy(h, traj.states[k]);
    const double corr = (bt.beta_R - beta0) * e + (ref.log_Z - ref0.log_Z);
    const double gap = beta0 * (e - e_th0) - (von_neumann_entropy(traj.states[k]) - s0) + corr;
    worst = std::max(worst, std::abs(gap - relative_entropy(traj.states[k], ref.gibbs)));
    const auto& b = r.driven->samples[k];
    worst_reported = std::max(worst_reported, std::abs(b.gap - b.D_inst));
  }
  Clauses c;
  c.add("recomputed |gap - D_inst| < 1e-6", worst < 1e-6, num(worst));
  c.add("reported |gap - D_inst| < 1e-6", worst_reported < 1e-6, num(worst_reported));
  c.add("non-saturated samples", used > 0, std::to_string(used) + "/" + std::to_string(traj.size()));
  return c.done();
}

Outcome fig1_reproduction(Runs& runs) {
  const ScenarioResult& r = runs.fig1();
  const auto& s = r.undriven->samples;
  double worst = 0.0;
  for (const auto& b : s) worst = std::min(worst, b.Q_u - b.Q);

  const std::size_t late = s.size() - s.size() / 10;
  double late_q = -std::numeric_limits<double>::infinity();
  for (std::size_t k = late; k < s.size(); ++k) late_q = std::max(late_q, s[k].Q);

  double peak_coh = 0.0;
  for (const auto& b : s) peak_coh = std::max(peak_coh, std::abs(b.TR_dCoh));
  const auto& last = s.back();
  const double coh_fraction = std::abs(last.TR_dCoh) / peak_coh;
  const double dominance = std::abs(last.mTR_dS_diag - last.Q_u) / std::abs(last.Q_u);

  const double fidelity = r.bell_fidelity.back();

  const RydbergModel ry = build_rydberg({});
  const DensityMatrix bell = DensityMatrix::pure(ry.bell_state);
  const Trajectory dark = propagate(ry.model, bell, {5000.0, 0.05, 11});
  double dark_err = 0.0;
  for (const auto& rho : dark.states) dark_err = std::max(dark_err, frobenius_norm(rho.matrix() - bell.matrix()));

  Clauses c;
  c.add("Q <= Q_u at every sample", worst >= -1e-9, "min slack " + num(worst));
  c.add("Q < 0 over the last 10% of samples", late_q < 0.0, "max Q " + num(late_q));
  c.add("T_R dCoh(end) < 1e-2 of its peak", coh_fraction < 1e-2, num(coh_fraction));
  c.add("-T_R dS' within 1% of Q_u at end", dominance < 1e-2, num(dominance));
  c.add("Bell fidelity > 0.99 at end", fidelity > 0.99, num(fidelity));
  c.add("dark state stationary to 1e-8", dark_err < 1e-8, num(dark_err));
  return c.done();
}

Outcome inset(Runs& runs) {
  const ScenarioResult& r = runs.inset();
  const double beta = r.reference_solve->beta_R;
  const auto& s = r.undriven->samples;
  double worst = 0.0;
  for (const auto& b : s) worst = std::min(worst, b.Q_u - b.Q);
  Clauses c;
  c.add("beta_R = 30 +- 1e-7", std::abs(beta - 30.0) < 1e-7, "beta_R - 30 = " + num(beta - 30.0));
  c.add("dE_in > 0", s.front().dE_in > 0.0, num(s.front().dE_in));
  c.add("Q <= Q_u at every sample", worst >= -1e-9, "min slack " + num(worst));
  return c.done();
}

Outcome fig2_reproduction(Runs& runs) {
  const ScenarioResult& r = runs.fig2();
  const auto& s = r.driven->samples;
  const auto& traj = r.trajectory;
  double lower = 0.0;
  double upper = 0.0;
  for (const auto& b : s) {
    lower = std::min(lower, b.Q - b.lp_lower);
    upper = std::min(upper, b.upper - b.Q);
  }
  double min_step = std::numeric_limits<double>::infinity();
  double min_step_t = 0.0;
  for (std::size_t k = 1; k < s.size(); ++k) {
    const double d = s[k].beta_R_t - s[k - 1].beta_R_t;
    if (d < min_step) {
      min_step = d;
      min_step_t = s[k].t;
    }
  }
  const double e0 = energy(r.model.hamiltonian(0.0), traj.states.front());
  double balance = 0.0;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const double de = energy(r.model.hamiltonian(traj.times[k]), traj.states[k]) - e0;
    balance = std::max(balance, std::abs(de - traj.work[k] + traj.heat[k]));
  }
  Clauses c;
  c.add("-T dS <= Q at every sample", lower >= -1e-9, "min slack " + num(lower));
  c.add("Q <= Qu~ + W at every sample", upper >= -1e-9, "min slack " + num(upper));
  c.add("beta_R(0) = 1 +- 1e-7", std::abs(s.front().beta_R_t - 1.0) < 1e-7, num(s.front().beta_R_t - 1.0));
  c.add("beta_R(t) non-decreasing within 1e-6", min_step >= -1e-6,
        "min step " + num(min_step) + " at t=" + num(min_step_t));
  c.add("W(tau) < 0", traj.work.back() < 0.0, num(traj.work.back()));
  c.add("|dE - W + Q| < 1e-8", balance < 1e-8, num(balance));
  return c.done();
}

Outcome sweep() {
  std::vector<double> peaks;
  std::string values;
  for (double tau : {5.0, 10.0, 20.0}) {
    json j = preset("fig2");
    j["name"] = "figS1";
    j["params"] = {{"tau", tau}};
    ScenarioConfig cfg = parse_config(j);
    cfg.out_dir.clear();
    const ScenarioResult r = run_scenario(cfg);
    double peak = 0.0;
    for (const auto& b : r.driven->samples) peak = std::max(peak, std::abs(b.TR0_dCoh));
    peaks.push_back(peak);
    values += (values.empty() ? "" : ", ") + std::string("tau=") + num(tau) + ": " + num(peak);
  }
  Clauses c;
  c.add("max|T_R(0) dCoh| strictly decreasing in tau", peaks[0] > peaks[1] && peaks[1] > peaks[2], values);
  return c.done();
}

Outcome frozen_stationarity() {
  const ErasureParams p;
  double worst_q = 0.0;
  double worst_s = 0.0;
  double worst_u = 0.0;
  for (double t0 : {0.0, p.tau / 2.0, p.tau}) {
    const LindbladModel m = freeze(build_erasure(p), t0);
    const ComplexMatrix h = m.hamiltonian(0.0);
    const DensityMatrix r0 = gibbs_state(h, p.bath_beta).gibbs;
    const Trajectory tr = propagate(m, r0, {20.0, 0.002, 21});
    const ReferenceState ref = reference_from_initial_state(h, r0, BetaBranch::NonNegative);
    for (const auto& b : undriven_bounds(tr, m, ref, 1.0 / p.bath_beta).samples) {
      worst_q = std::max(worst_q, std::abs(b.Q));
      worst_s = std::max(worst_s, std::abs(b.dS));
      worst_u = std::max(worst_u, std::abs(b.Q_u));
    }
  }
  Clauses c;
  c.add("|Q| < 1e-9", worst_q < 1e-9, num(worst_q));
  c.add("|dS| < 1e-9", worst_s < 1e-9, num(worst_s));
  c.add("|Q_u| < 1e-9", worst_u < 1e-9, num(worst_u));
  return c.done();
}

Outcome nlp(Runs& runs) {
  const ScenarioResult& r = runs.fig2();
  const double bath_T = *r.config.bath_T;
  const double bath_beta = 1.0 / bath_T;
  double min_slack = std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (std::size_t k = 0; k < r.nlp.size(); ++k) {
    const double t = r.trajectory.times[k];
    const ReferenceState eq = gibbs_state(r.model.hamiltonian(t), bath_beta);
    const double d = relative_entropy(r.trajectory.states[k], eq.gibbs);
    min_slack = std::min(min_slack, r.nlp[k].slack_driven);
    worst = std::max(worst, std::abs(r.nlp[k].slack_driven - bath_beta * bath_T * d));
  }
  Clauses c;
  c.add("slack >= -1e-8", min_slack >= -1e-8, "min " + num(min_slack));
  c.add("slack = beta T D(rho || rho_eq(t)) within 1e-8", worst < 1e-8, num(worst));
  return c.done();
}

Outcome beta_round_trip() {
  const ErasureParams p;
  const std::vector<std::pair<std::string, ComplexMatrix>> hams{
      {"rydberg", build_rydberg({}).model.hamiltonian(0.0)},
      {"erasure(0)", erasure::hamiltonian(p, 0.0)},
      {"erasure(tau)", erasure::hamiltonian(p, p.tau)},
  };
  double worst = 0.0;
  double worst_residual = 0.0;
  for (const auto& [name, h] : hams) {
    for (double beta : {0.0, 0.5, 1.0, 5.0, 30.0}) {
      const BetaSolveResult r = solve_beta(h, gibbs_entropy(h, beta));
      worst = std::max(worst, std::abs(r.beta_R - beta) / (1.0 + beta));
      worst_residual = std::max(worst_residual, r.residual);
    }
  }
  Clauses c;
  c.add("|beta - beta*| / (1 + beta*) < 1e-7", worst < 1e-7, num(worst));
  c.add("residual < 1e-10", worst_residual < 1e-10, num(worst_residual));
  return c.done();
}

Outcome cptp(Runs& runs) {
  Clauses c;
  for (const auto* r : {&runs.fig1(), &runs.fig2()}) {
    const auto& d = r->trajectory.diagnostics;
    c.add(r->config.name + " trace drift < 1e-9", d.max_trace_drift < 1e-9, num(d.max_trace_drift));
    c.add(r->config.name + " min eigenvalue > -1e-9", d.min_eigenvalue > -1e-9, num(d.min_eigenvalue));
  }
  return c.done();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int cli_fig1(const fs::path& dir) {
  fs::remove_all(dir);
  const std::string cmd = std::string("\"") + LANDAUER_CLI + "\" run --scenario fig1 --out \"" + dir.string() +
                          "\" > /dev/null 2>&1";
  return std::system(cmd.c_str());
}

Outcome determinism(std::future<int>& first, std::future<int>& second, const fs::path& a, const fs::path& b) {
  const int ca = first.get();
  const int cb = second.get();
  Clauses c;
  c.add("both runs exit 0", ca == 0 && cb == 0, std::to_string(ca) + ", " + std::to_string(cb));
  std::size_t compared = 0;
  bool same = true;
  for (const auto& entry : fs::directory_iterator(a)) {
    if (entry.path().extension() != ".csv") continue;
    ++compared;
    same = same && fs::exists(b / entry.path().filename()) &&
           slurp(entry.path()) == slurp(b / entry.path().filename());
  }
  c.add("CSV files byte-identical", same && compared > 0, std::to_string(compared) + " files");
  return c.done();
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));
  auto selected = [&](int n) { return wanted.empty() || wanted.count(n) != 0; };

  const fs::path scratch = fs::temp_directory_path() / "landauer_acceptance";
  const fs::path det_a = scratch / "fig1_a";
  const fs::path det_b = scratch / "fig1_b";
  std::future<int> first;
  std::future<int> second;
  if (selected(12)) {
    fs::create_directories(scratch);
    first = std::async(std::launch::async, cli_fig1, det_a);
    second = std::async(std::launch::async, cli_fig1, det_b);
  }

  Runs runs;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"integrator oracle", integrator_oracle},
      {"undriven gap identity", [&] { return undriven_gap(runs); }},
      {"driven gap identity", [&] { return driven_gap(runs); }},
      {"Rydberg reproduction", [&] { return fig1_reproduction(runs); }},
      {"sorted-ascending start", [&] { return inset(runs); }},
      {"erasure reproduction", [&] { return fig2_reproduction(runs); }},
      {"erasure tau sweep", sweep},
      {"degenerate saturation", frozen_stationarity},
      {"nonequilibrium Landauer comparison", [&] { return nlp(runs); }},
      {"beta_R solver round trip", beta_round_trip},
      {"CPTP diagnostics", [&] { return cptp(runs); }},
      {"determinism", [&] { return determinism(first, second, det_a, det_b); }},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int n = static_cast<int>(i) + 1;
    if (!selected(n)) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s criterion %d: %s: %s\n", o.pass ? "PASS" : "FAIL", n, criteria[i].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
