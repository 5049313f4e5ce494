#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "landauer/error.hpp"
#include "landauer/plot.hpp"
#include "landauer/report.hpp"
#include "landauer/scenario.hpp"

using namespace landauer;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("landauer_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an exception");
  return ErrorCode::SchemaError;
}

json short_fig2(const fs::path& out) {
  json j = preset("fig2");
  j["params"]["tau"] = 4.0;
  j["integrator"] = {{"n_samples", 81}};
  j["outputs"] = {{"directory", out.string()}, {"plots", true}};
  return j;
}

double min_finite(const std::vector<double>& v) {
  double m = INFINITY;
  for (double x : v) {
    if (std::isfinite(x)) m = std::min(m, x);
  }
  return m;
}

}  // namespace

TEST_CASE("presets resolve to the documented defaults") {
  const ScenarioConfig f1 = parse_config(preset("fig1"));
  CHECK(f1.model == ModelKind::Rydberg);
  CHECK(f1.integrator.dt == 0.01);
  CHECK(f1.integrator.t_end == 5000.0);
  CHECK(f1.integrator.n_samples == 501);
  CHECK(!f1.bath_T);
  CHECK(std::get<initial::GibbsAt>(f1.initial).beta == 30.0);
  CHECK(f1.rydberg.omega2 == 0.02);

  const ScenarioConfig f2 = parse_config(preset("fig2"));
  CHECK(f2.model == ModelKind::Erasure);
  CHECK(f2.integrator.dt == doctest::Approx(10.0 / 20000.0));
  CHECK(f2.integrator.t_end == 10.0);
  CHECK(*f2.bath_T == 1.0);
  CHECK(f2.source["params"]["eps_tau"] == 10.0);

  CHECK(std::holds_alternative<initial::SortedAscendingDiagonal>(parse_config(preset("fig1-inset")).initial));
  CHECK(preset("figS1")["sweep"].size() == 3);
  CHECK(code_of([] { preset("fig3"); }) == ErrorCode::ConfigError);
}

TEST_CASE("config validation") {
  auto bad = [](json j) { return code_of([&] { parse_config(j); }); };
  CHECK(bad({{"model", "rydberg"}, {"colour", 1}}) == ErrorCode::ConfigError);
  CHECK(bad({{"model", "heat-engine"}}) == ErrorCode::ConfigError);
  CHECK(bad({{"model", "rydberg"}, {"integrator", {{"n_samples", 1}}}}) == ErrorCode::ConfigError);
  CHECK(bad({{"model", "rydberg"}, {"integrator", {{"dt", 0.0}}}}) == ErrorCode::ConfigError);
  CHECK(bad({{"model", "rydberg"}, {"integrator", {{"t_end", -1.0}}}}) == ErrorCode::ConfigError);
  CHECK(bad({{"model", "rydberg"}, {"params", {{"omega2", "big"}}}}) == ErrorCode::ConfigError);
  CHECK(bad({{"model", "erasure"}, {"bath_T", -1.0}}) == ErrorCode::ConfigError);
  CHECK(bad({{"model", "erasure"}, {"beta_branch", "up"}}) == ErrorCode::ConfigError);
  CHECK(bad({{"model", "erasure"}, {"initial_state", {{"kind", "coherent"}}}}) == ErrorCode::ConfigError);
  CHECK(bad({{"model", "custom"}, {"custom", {{"dim", 2}, {"hamiltonian", {{1, 2}, {0, 1}}}}}}) ==
        ErrorCode::ConfigError);
}

TEST_CASE("fig2-style run writes consistent outputs") {
  const fs::path out = scratch("fig2");
  const ScenarioResult r = run_scenario(parse_config(short_fig2(out)));
  CHECK(r.exit_code() == 0);
  for (const char* f : {"trajectory.csv", "bounds.csv", "meta.json", "nlp.csv", "bounds.svg"}) {
    CHECK(fs::exists(out / f));
  }

  const json meta = json::parse(slurp(out / "meta.json"));
  CHECK(meta["exit_code"] == 0);
  CHECK(meta["integrator"]["method"] == "rk4-fixed-step");
  CHECK(meta["config"]["params"]["tau"] == 4.0);
  CHECK(meta["reference"]["beta_R0"].get<double>() == doctest::Approx(1.0));

  // Verdicts recomputed from the CSV files agree with meta.json.
  const CsvTable b = read_csv(out / "bounds.csv");
  const CsvTable n = read_csv(out / "nlp.csv");
  CHECK(b.rows() == 81);
  std::vector<double> upper_slack, lower_slack;
  for (std::size_t k = 0; k < b.rows(); ++k) {
    upper_slack.push_back(b.at("upper")[k] - b.at("Q")[k]);
    lower_slack.push_back(b.at("Q")[k] - b.at("lp_lower")[k]);
  }
  const std::map<std::string, double> recomputed{{"generalized_gap", min_finite(b.at("gap"))},
                                                 {"driven_heat_upper_bound", min_finite(upper_slack)},
                                                 {"landauer_lower_bound", min_finite(lower_slack)},
                                                 {"nlp_driven", min_finite(n.at("slack_driven"))}};
  CHECK(meta["verdicts"].size() == recomputed.size());
  for (const auto& v : meta["verdicts"]) {
    const double worst = v["worst_slack"].get<double>();
    CHECK(std::abs(worst - recomputed.at(v["name"].get<std::string>())) < 1e-12 * (1.0 + std::abs(worst)));
    CHECK(v["holds"] == (worst >= -kVerdictTolerance));
  }
  const std::vector<std::string> expected_columns{"t", "E_S", "S", "S_diag", "Coh", "Q", "W", "beta_R_t", "C_t",
                                                  "dE_R_tilde", "gap", "D_inst", "Qu_tilde", "upper", "lp_lower"};
  CHECK(std::equal(expected_columns.begin(), expected_columns.end(), b.columns.begin()));
  CHECK(b.columns.back() == "flags");
}

TEST_CASE("identical configs give byte-identical outputs") {
  const fs::path a = scratch("det_a");
  const fs::path b = scratch("det_b");
  run_scenario(parse_config(short_fig2(a)));
  run_scenario(parse_config(short_fig2(b)));
  for (const char* f : {"trajectory.csv", "bounds.csv", "nlp.csv", "bounds.svg"}) {
    CHECK(slurp(a / f) == slurp(b / f));
  }
}

TEST_CASE("parallel execution agrees with serial to 1e-9") {
  const fs::path a = scratch("par_a");
  const fs::path b = scratch("par_b");
  json ja = short_fig2(a);
  json jb = short_fig2(b);
  jb["parallel"] = true;
  run_scenario(parse_config(ja));
  run_scenario(parse_config(jb));
  const CsvTable ta = read_csv(a / "bounds.csv");
  const CsvTable tb = read_csv(b / "bounds.csv");
  REQUIRE(ta.columns == tb.columns);
  REQUIRE(ta.rows() == tb.rows());
  CHECK(ta.flags == tb.flags);
  double worst = 0.0;
  for (const auto& [name, col] : ta.numeric) {
    const auto& other = tb.at(name);
    for (std::size_t k = 0; k < col.size(); ++k) {
      if (std::isnan(col[k]) || std::isnan(other[k])) {
        CHECK(std::isnan(col[k]) == std::isnan(other[k]));
        continue;
      }
      worst = std::max(worst, std::abs(col[k] - other[k]) / std::max(1.0, std::abs(col[k])));
    }
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("absurd step is a runtime error") {
  json j = preset("fig2");
  j["integrator"] = {{"dt", 10.0}, {"t_end", 10.0}};
  CHECK(code_of([&] { run_scenario(parse_config(j)); }) == ErrorCode::StabilityError);
  const auto runs = run_config(j);
  REQUIRE(runs.size() == 1);
  CHECK(runs[0].exit_code == 1);
  CHECK(runs[0].error.find("StabilityError") != std::string::npos);
}

TEST_CASE("undriven Rydberg run with a short horizon") {
  json j = preset("fig1");
  j["integrator"] = {{"t_end", 200.0}, {"n_samples", 21}};
  const ScenarioResult r = run_scenario(parse_config(j));
  CHECK(r.exit_code() == 0);
  REQUIRE(r.undriven);
  CHECK(r.meta["flags"]["degenerate_spectrum"] == true);
  CHECK(r.meta["reference"]["beta_R"].get<double>() == doctest::Approx(30.0));
  CHECK(r.bell_fidelity.size() == 21);
  CHECK(r.verdicts.size() == 2);
}

TEST_CASE("custom model from inline JSON") {
  const json j = json::parse(R"({
    "model": "custom",
    "custom": {"dim": 2, "hamiltonian": [[0.5, 0.0], [0.0, -0.5]],
               "channels": [{"rate": 0.2, "op": [[0, 0], [[1, 0], 0]]}]},
    "initial_state": {"kind": "gibbs_at", "beta": 0.5},
    "integrator": {"dt": 0.01, "t_end": 5.0, "n_samples": 11}
  })");
  const ScenarioResult r = run_scenario(parse_config(j));
  CHECK(r.exit_code() == 0);
  CHECK(r.meta["reference"]["beta_R"].get<double>() == doctest::Approx(0.5));
}

TEST_CASE("sweep jobs get their own directories and a combined plot") {
  const fs::path out = scratch("sweep");
  json j = preset("figS1");
  j["integrator"] = {{"n_samples", 21}};
  j["outputs"] = {{"directory", out.string()}, {"plots", true}};
  const auto runs = run_config(j);
  REQUIRE(runs.size() == 3);
  for (const auto& s : runs) {
    CHECK(s.exit_code == 0);
    CHECK(fs::exists(s.directory / "bounds.csv"));
    const json meta = json::parse(slurp(s.directory / "meta.json"));
    CHECK(meta["config"]["integrator"]["t_end"] == meta["config"]["params"]["tau"]);
  }
  CHECK(fs::exists(out / "sweep.json"));
  CHECK(fs::exists(out / "sweep_coherence.svg"));
  const std::string svg = slurp(out / "sweep_coherence.svg");
  CHECK(svg.find("tau_5") != std::string::npos);
  CHECK(svg.find("tau_20") != std::string::npos);
}

TEST_CASE("plots from a minimal CSV") {
  const fs::path dir = scratch("plot");
  fs::create_directories(dir);
  {
    std::ofstream f(dir / "bounds.csv");
    f << "t,Q,Q_u,TR_dCoh,mTR_dS_diag,flags\r\n0,0,0.1,0,0,\r\n1,-0.5,0.2,0.01,0.1,\r\n";
  }
  emit_plots(dir / "bounds.csv", dir / "a.svg");
  emit_plots(dir / "bounds.csv", dir / "b.svg");
  const std::string svg = slurp(dir / "a.svg");
  CHECK(svg == slurp(dir / "b.svg"));
  CHECK(svg.rfind("<?xml", 0) == 0);
  CHECK(svg.find("version=\"1.1\"") != std::string::npos);
  std::size_t polylines = 0;
  for (std::size_t pos = 0; (pos = svg.find("<polyline", pos)) != std::string::npos; ++pos) {
    ++polylines;
    const auto end = svg.find("\"/>", pos);
    const auto pts = svg.substr(svg.find("points=\"", pos) + 8, end - svg.find("points=\"", pos) - 8);
    CHECK(std::count(pts.begin(), pts.end(), ',') == 2);
  }
  CHECK(polylines == 4);
  CHECK(svg.find("t [") != std::string::npos);

  {
    std::ofstream f(dir / "bad.csv");
    f << "t,x\r\n0,1\r\n";
  }
  CHECK(code_of([&] { emit_plots(dir / "bad.csv", dir / "c.svg"); }) == ErrorCode::SchemaError);
  {
    std::ofstream f(dir / "ragged.csv");
    f << "t,Q\r\n0,1,2\r\n";
  }
  CHECK(code_of([&] { read_csv(dir / "ragged.csv"); }) == ErrorCode::SchemaError);
}

TEST_CASE("CSV number formatting") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333333");
  CHECK(format_number(NAN).empty());
}
