// Serial reference vs OpenMP kernels on the per-sample bound evaluation.
// Usage: bench_kernels [repeats]

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "landauer/lindblad.hpp"
#include "landauer/models.hpp"
#include "landauer/qstate.hpp"
#include "landauer/refsolve.hpp"
#include "landauer/thermo.hpp"

using namespace landauer;

namespace {

double seconds(const std::function<void()>& fn, int repeats) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

void report(const char* name, double serial, double parallel, double max_diff) {
  std::printf("%-28s serial %9.4f s   parallel %9.4f s   speedup %5.2fx   max |diff| %.2e\n", name, serial,
              parallel, serial / parallel, max_diff);
}

std::vector<EntropySample> entropies(const Trajectory& tr) {
  std::vector<EntropySample> out;
  for (std::size_t k = 0; k < tr.size(); ++k) out.push_back({tr.times[k], von_neumann_entropy(tr.states[k])});
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const int repeats = argc > 1 ? std::max(1, std::atoi(argv[1])) : 3;
  std::printf("OpenMP threads: %d, repeats: %d (best of)\n", omp_get_max_threads(), repeats);

  const ErasureParams p;
  const LindbladModel erasure = build_erasure(p);
  const DensityMatrix e0 = gibbs_state(erasure.hamiltonian(0.0), p.bath_beta).gibbs;
  const Trajectory etr = propagate(erasure, e0, {p.tau, p.tau / 20000.0, 4001});

  const RydbergModel ry = build_rydberg({});
  const ComplexMatrix h = ry.model.hamiltonian(0.0);
  const DensityMatrix r0 = gibbs_state(h, 30.0).gibbs;
  const Trajectory rtr = propagate(ry.model, r0, {500.0, 0.01, 4001});
  const ReferenceState ref = reference_from_initial_state(h, r0, BetaBranch::NonNegative);

  const auto es = entropies(etr);
  const HamiltonianProtocol h_of_t = erasure.hamiltonian;
  std::vector<BetaSolveResult> bs;
  std::vector<BetaSolveResult> bp;
  const double beta_s = seconds([&] { bs = solve_beta_series(h_of_t, es, BetaBranch::NonNegative); }, repeats);
  const double beta_p =
      seconds([&] { bp = solve_beta_series(h_of_t, es, BetaBranch::NonNegative, Execution::Parallel); }, repeats);
  double diff = 0.0;
  for (std::size_t k = 0; k < bs.size(); ++k) diff = std::max(diff, std::abs(bs[k].beta_R - bp[k].beta_R));
  report("beta_R(t) series", beta_s, beta_p, diff);

  UndrivenReport us;
  UndrivenReport up;
  const double und_s = seconds([&] { us = undriven_bounds(rtr, ry.model, ref, std::nullopt); }, repeats);
  const double und_p =
      seconds([&] { up = undriven_bounds(rtr, ry.model, ref, std::nullopt, Execution::Parallel); }, repeats);
  diff = 0.0;
  for (std::size_t k = 0; k < us.samples.size(); ++k) {
    diff = std::max(diff, std::abs(us.samples[k].Q_u - up.samples[k].Q_u));
    diff = std::max(diff, std::abs(us.samples[k].D_direct - up.samples[k].D_direct));
  }
  report("undriven bounds (9x9)", und_s, und_p, diff);

  DrivenReport ds;
  DrivenReport dp;
  const double drv_s = seconds([&] { ds = driven_bounds(etr, erasure, bs, 1.0); }, repeats);
  const double drv_p = seconds([&] { dp = driven_bounds(etr, erasure, bs, 1.0, Execution::Parallel); }, repeats);
  diff = 0.0;
  for (std::size_t k = 0; k < ds.samples.size(); ++k) {
    diff = std::max(diff, std::abs(ds.samples[k].upper - dp.samples[k].upper));
    diff = std::max(diff, std::abs(ds.samples[k].C_t - dp.samples[k].C_t));
  }
  report("driven bounds (2x2)", drv_s, drv_p, diff);

  std::vector<NlpComparison> ns;
  std::vector<NlpComparison> np;
  const double nlp_s = seconds([&] { ns = nlp_comparison(etr, erasure, p.bath_beta); }, repeats);
  const double nlp_p =
      seconds([&] { np = nlp_comparison(etr, erasure, p.bath_beta, Execution::Parallel); }, repeats);
  diff = 0.0;
  for (std::size_t k = 0; k < ns.size(); ++k) diff = std::max(diff, std::abs(ns[k].slack_driven - np[k].slack_driven));
  report("NLP comparison", nlp_s, nlp_p, diff);
  return 0;
}
