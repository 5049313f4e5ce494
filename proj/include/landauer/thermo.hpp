#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "landauer/lindblad.hpp"
#include "landauer/qstate.hpp"
#include "landauer/refsolve.hpp"

namespace landauer {

/// Per-sample annotations carried into bounds.csv.
enum SampleFlag : std::uint32_t {
  kFlagNone = 0,
  /// beta_R(t) hit beta_cap; C_t uses the capped value.
  kFlagSaturated = 1u << 0,
  /// D(rho || rho_th) could not be evaluated (singular reference).
  kFlagNoRelativeEntropy = 1u << 1,
  /// Negative reference temperature: the Q_u bound flips into a lower bound.
  kFlagFlipped = 1u << 2,
  /// beta_R(t) solve failed for this sample.
  kFlagSolverError = 1u << 3,
  /// beta_R == 0 (maximally mixed start): T_R is infinite and Q_u diverges.
  kFlagInfiniteTemperature = 1u << 4,
};

std::string flags_to_string(std::uint32_t flags);

enum class BoundDirection { Upper, Lower };

struct UndrivenBounds {
  double t = 0.0;
  double E_S = 0.0;
  double S = 0.0;
  double S_diag = 0.0;
  double Coh = 0.0;
  double Q = 0.0;
  double dE_R = 0.0;
  double dS = 0.0;
  double gap_P = 0.0;
  double D_direct = 0.0;
  double dE_in = 0.0;
  double Q_u = 0.0;
  double lp_lower = 0.0;  // NaN without a bath temperature
  double dS_diag = 0.0;
  double dCoh = 0.0;
  double TR_dCoh = 0.0;
  double mTR_dS_diag = 0.0;
  std::uint32_t flags = kFlagNone;
};

struct UndrivenReport {
  double beta_R = 0.0;
  BoundDirection direction = BoundDirection::Upper;
  /// H_S has eigenvalue gaps below 1e-9; S' then dephases onto whole
  /// eigenspaces rather than single eigenvectors.
  bool degenerate_spectrum = false;
  std::vector<UndrivenBounds> samples;
};

struct DrivenBounds {
  double t = 0.0;
  double E_S = 0.0;
  double S = 0.0;
  double S_diag = 0.0;
  double Coh = 0.0;
  double Q = 0.0;
  double W = 0.0;
  double dE = 0.0;
  double beta_R_t = 0.0;
  double C_t = 0.0;
  double dE_R_tilde = 0.0;
  double dS = 0.0;
  double gap = 0.0;
  double D_inst = 0.0;  // NaN when unavailable
  double dE_in_tilde = 0.0;
  double Qu_tilde = 0.0;
  double upper = 0.0;
  double lp_lower = 0.0;  // NaN without a bath temperature
  double dS_diag = 0.0;
  double dCoh = 0.0;
  double TR0_dCoh = 0.0;
  double mTR0_dS_diag = 0.0;
  std::uint32_t flags = kFlagNone;
};

struct DrivenReport {
  double beta_R0 = 0.0;
  BoundDirection direction = BoundDirection::Upper;
  std::vector<DrivenBounds> samples;
};

struct NlpComparison {
  double t = 0.0;
  double F_neq_T = 0.0;
  double F_eq_t = 0.0;
  double slack_instantaneous = 0.0;
  double slack_driven = 0.0;
  double slack_undriven = 0.0;  // NaN for driven models
};

/// Landauer-like bookkeeping for an undriven trajectory against a fixed
/// reference state (normally solved from the initial entropy).
/// Throws DrivenModelSupplied, MisalignedSeries.
UndrivenReport undriven_bounds(const Trajectory& traj, const LindbladModel& model,
                               const ReferenceState& ref, std::optional<double> bath_T = std::nullopt,
                               Execution exec = Execution::Serial);

/// Driven bookkeeping with the instantaneous reference beta_R(t). For an
/// undriven model beta_R is frozen at beta_series[0], so C_t == 0 and the
/// numbers coincide with undriven_bounds.
/// Throws MisalignedSeries, InvalidParameter (unusable beta_R(0)).
DrivenReport driven_bounds(const Trajectory& traj, const LindbladModel& model,
                           std::span<const BetaSolveResult> beta_series,
                           std::optional<double> bath_T = std::nullopt,
                           Execution exec = Execution::Serial);

/// Comparison against the bath-referenced nonequilibrium Landauer principle.
/// Throws NoBathTemperature when bath_beta is absent or not positive.
std::vector<NlpComparison> nlp_comparison(const Trajectory& traj, const LindbladModel& model,
                                          std::optional<double> bath_beta,
                                          Execution exec = Execution::Serial);

/// Solve the reference for an undriven trajectory from rho(0) (entropy matching).
ReferenceState reference_from_initial_state(const ComplexMatrix& h, const DensityMatrix& rho0,
                                            BetaBranch branch, BetaSolveResult* solve = nullptr);

}  // namespace landauer
