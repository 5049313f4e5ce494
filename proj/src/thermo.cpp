#include "landauer/thermo.hpp"

#include <cmath>
#include <exception>
#include <limits>

#include "landauer/error.hpp"

namespace landauer {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Exceptions must not escape an OpenMP region; the first one is rethrown
// after the loop.
template <class Fn>
void for_each_sample(std::size_t n, Execution exec, Fn&& fn) {
  const auto count = static_cast<std::ptrdiff_t>(n);
  if (exec == Execution::Parallel) {
    std::exception_ptr failure;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < count; ++k) {
      try {
        fn(static_cast<std::size_t>(k));
      } catch (...) {
#pragma omp critical(landauer_sample_failure)
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
  } else {
    for (std::ptrdiff_t k = 0; k < count; ++k) fn(static_cast<std::size_t>(k));
  }
}

void require_aligned(const Trajectory& traj) {
  const std::size_t n = traj.times.size();
  if (n == 0 || traj.states.size() != n || traj.heat.size() != n || traj.work.size() != n) {
    throw Error(ErrorCode::MisalignedSeries, "trajectory arrays have inconsistent lengths");
  }
}

// D(rho || sigma), or NaN when sigma is numerically singular.
double relative_entropy_or_nan(const DensityMatrix& rho, const DensityMatrix& sigma) {
  try {
    return relative_entropy(rho, sigma);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::SingularReference) return kNaN;
    throw;
  }
}

}  // namespace

std::string flags_to_string(std::uint32_t flags) {
  std::string out;
  auto add = [&](std::uint32_t bit, const char* name) {
    if ((flags & bit) == 0) return;
    if (!out.empty()) out += '|';
    out += name;
  };
  add(kFlagSaturated, "saturated");
  add(kFlagNoRelativeEntropy, "no_relative_entropy");
  add(kFlagFlipped, "flipped");
  add(kFlagSolverError, "solver_error");
  add(kFlagInfiniteTemperature, "infinite_temperature");
  return out;
}

ReferenceState reference_from_initial_state(const ComplexMatrix& h, const DensityMatrix& rho0,
                                            BetaBranch branch, BetaSolveResult* solve) {
  const EigenSystem es = eigh(h);
  const BetaSolveResult r = solve_beta(GibbsEntropyCurve(es.eigenvalues), von_neumann_entropy(rho0), branch);
  if (solve != nullptr) *solve = r;
  return gibbs_state(es, r.beta_R);
}

UndrivenReport undriven_bounds(const Trajectory& traj, const LindbladModel& model,
                               const ReferenceState& ref, std::optional<double> bath_T, Execution exec) {
  if (model.driven) throw Error(ErrorCode::DrivenModelSupplied, "undriven_bounds needs a static Hamiltonian");
  require_aligned(traj);

  const ComplexMatrix h = model.hamiltonian(0.0);
  const EigenSystem basis = eigh(h);
  const double beta = ref.beta_R;
  const double T_R = beta != 0.0 ? 1.0 / beta : std::numeric_limits<double>::infinity();

  UndrivenReport report;
  report.beta_R = beta;
  report.direction = beta < 0.0 ? BoundDirection::Lower : BoundDirection::Upper;
  report.degenerate_spectrum = has_near_degeneracy(basis.eigenvalues);

  const double E_th = trace_product(h, ref.gibbs.matrix()).real();
  const ThermoSample first = thermo_sample(0.0, traj.states.front(), basis, h);
  const double dE_in = first.E_S - E_th;

  std::uint32_t common = kFlagNone;
  if (beta < 0.0) common |= kFlagFlipped;
  if (beta == 0.0) common |= kFlagInfiniteTemperature;

  report.samples.resize(traj.size());
  for_each_sample(traj.size(), exec, [&](std::size_t k) {
    const ThermoSample ts = thermo_sample(traj.times[k], traj.states[k], basis, h);
    UndrivenBounds& b = report.samples[k];
    b.t = ts.t;
    b.E_S = ts.E_S;
    b.S = ts.S;
    b.S_diag = ts.S_diag;
    b.Coh = ts.Coh;
    b.Q = traj.heat[k];
    b.dE_R = ts.E_S - E_th;
    b.dS = ts.S - first.S;
    b.gap_P = beta * b.dE_R - b.dS;
    b.D_direct = relative_entropy_or_nan(traj.states[k], ref.gibbs);
    b.dE_in = dE_in;
    b.dS_diag = ts.S_diag - first.S_diag;
    b.dCoh = ts.Coh - first.Coh;
    b.Q_u = beta != 0.0 ? dE_in - T_R * b.dS : kNaN;
    b.TR_dCoh = beta != 0.0 ? T_R * b.dCoh : kNaN;
    b.mTR_dS_diag = beta != 0.0 ? -T_R * b.dS_diag : kNaN;
    b.lp_lower = bath_T ? -*bath_T * b.dS : kNaN;
    b.flags = common;
    if (std::isnan(b.D_direct)) b.flags |= kFlagNoRelativeEntropy;
  });
  return report;
}

DrivenReport driven_bounds(const Trajectory& traj, const LindbladModel& model,
                           std::span<const BetaSolveResult> beta_series, std::optional<double> bath_T,
                           Execution exec) {
  require_aligned(traj);
  if (beta_series.size() != traj.size()) {
    throw Error(ErrorCode::MisalignedSeries, "beta series has " + std::to_string(beta_series.size()) +
                                                 " entries for " + std::to_string(traj.size()) + " samples");
  }
  const BetaSolveResult& first_beta = beta_series.front();
  if (first_beta.error || first_beta.saturated || !std::isfinite(first_beta.beta_R)) {
    throw Error(ErrorCode::InvalidParameter, "beta_R(0) must be finite and non-saturated");
  }
  const double beta0 = first_beta.beta_R;
  const double T0 = beta0 != 0.0 ? 1.0 / beta0 : std::numeric_limits<double>::infinity();

  const ComplexMatrix h0 = model.hamiltonian(traj.times.front());
  const EigenSystem basis0 = eigh(h0);
  const ReferenceState ref0 = gibbs_state(basis0, beta0);
  const double E_th0 = trace_product(h0, ref0.gibbs.matrix()).real();
  const ThermoSample first = thermo_sample(traj.times.front(), traj.states.front(), basis0, h0);
  const double dE_in = first.E_S - E_th0;

  DrivenReport report;
  report.beta_R0 = beta0;
  report.direction = beta0 < 0.0 ? BoundDirection::Lower : BoundDirection::Upper;

  std::uint32_t common = kFlagNone;
  if (beta0 < 0.0) common |= kFlagFlipped;
  if (beta0 == 0.0) common |= kFlagInfiniteTemperature;

  report.samples.resize(traj.size());
  for_each_sample(traj.size(), exec, [&](std::size_t k) {
    const double t = traj.times[k];
    const ComplexMatrix h = model.driven ? model.hamiltonian(t) : h0;
    const EigenSystem basis = model.driven ? eigh(h) : basis0;
    const ThermoSample ts = thermo_sample(t, traj.states[k], basis, h);

    DrivenBounds& b = report.samples[k];
    b.flags = common;
    const BetaSolveResult& bt = model.driven ? beta_series[k] : first_beta;
    double beta_t = bt.beta_R;
    if (bt.error) {
      b.flags |= kFlagSolverError;
      beta_t = kNaN;
    }
    if (bt.saturated) b.flags |= kFlagSaturated;

    b.t = t;
    b.E_S = ts.E_S;
    b.S = ts.S;
    b.S_diag = ts.S_diag;
    b.Coh = ts.Coh;
    b.Q = traj.heat[k];
    b.W = traj.work[k];
    b.dE = ts.E_S - first.E_S;
    b.beta_R_t = beta_t;
    b.dS = ts.S - first.S;
    b.dE_R_tilde = ts.E_S - E_th0;
    b.dE_in_tilde = dE_in;
    b.dS_diag = ts.S_diag - first.S_diag;
    b.dCoh = ts.Coh - first.Coh;
    b.lp_lower = bath_T ? -*bath_T * b.dS : kNaN;

    if (std::isnan(beta_t)) {
      b.C_t = b.gap = b.D_inst = b.Qu_tilde = b.upper = kNaN;
    } else {
      const ReferenceState ref_t = model.driven ? gibbs_state(basis, beta_t) : ref0;
      b.C_t = model.driven ? (beta_t - beta0) * ts.E_S + (ref_t.log_Z - ref0.log_Z) : 0.0;
      b.gap = beta0 * b.dE_R_tilde - b.dS + b.C_t;
      b.D_inst = bt.saturated ? kNaN : relative_entropy_or_nan(traj.states[k], ref_t.gibbs);
      b.Qu_tilde = beta0 != 0.0 ? dE_in - T0 * b.dS + T0 * b.C_t : kNaN;
      b.upper = b.Qu_tilde + b.W;
    }
    if (std::isnan(b.D_inst)) b.flags |= kFlagNoRelativeEntropy;
    b.TR0_dCoh = beta0 != 0.0 ? T0 * b.dCoh : kNaN;
    b.mTR0_dS_diag = beta0 != 0.0 ? -T0 * b.dS_diag : kNaN;
  });
  return report;
}

std::vector<NlpComparison> nlp_comparison(const Trajectory& traj, const LindbladModel& model,
                                          std::optional<double> bath_beta, Execution exec) {
  if (!bath_beta || !(*bath_beta > 0.0)) {
    throw Error(ErrorCode::NoBathTemperature,
                "the nonequilibrium Landauer comparison needs a genuine thermal bath");
  }
  require_aligned(traj);
  const double beta = *bath_beta;
  const double T = 1.0 / beta;

  struct Equilibrium {
    double E = 0.0;
    double S = 0.0;
    double log_Z = 0.0;
  };
  auto equilibrium = [&](const ComplexMatrix& h, const EigenSystem& es) {
    const ReferenceState eq = gibbs_state(es, beta);
    return Equilibrium{trace_product(h, eq.gibbs.matrix()).real(), von_neumann_entropy(eq.gibbs), eq.log_Z};
  };

  const ComplexMatrix h0 = model.hamiltonian(traj.times.front());
  const EigenSystem es0 = eigh(h0);
  const Equilibrium eq0 = equilibrium(h0, es0);

  std::vector<NlpComparison> out(traj.size());
  for_each_sample(traj.size(), exec, [&](std::size_t k) {
    const double t = traj.times[k];
    const ComplexMatrix h = model.driven ? model.hamiltonian(t) : h0;
    const EigenSystem es = model.driven ? eigh(h) : es0;
    const Equilibrium eq = model.driven ? equilibrium(h, es) : eq0;
    const double E = trace_product(h, traj.states[k].matrix()).real();
    const double S = von_neumann_entropy(traj.states[k]);

    NlpComparison& c = out[k];
    c.t = t;
    c.F_neq_T = E - T * S;
    c.F_eq_t = -T * eq.log_Z;
    c.slack_instantaneous = beta * (E - eq.E) - (S - eq.S);
    c.slack_driven = beta * (E - eq0.E) - (S - eq0.S) + (eq.log_Z - eq0.log_Z);
    c.slack_undriven = model.driven ? kNaN : beta * (E - eq0.E) - (S - eq0.S);
  });
  return out;
}

}  // namespace landauer
