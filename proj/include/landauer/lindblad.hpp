#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "landauer/linalg.hpp"
#include "landauer/qstate.hpp"

namespace landauer {

using OperatorProtocol = std::function<ComplexMatrix(double)>;

struct JumpChannel {
  double rate = 0.0;  // gamma_mu >= 0
  OperatorProtocol op;
};

/// H_S(t), optional analytic dH_S/dt, and the dissipative channels of a
/// (possibly driven) Lindblad master equation.
struct LindbladModel {
  std::size_t dim = 0;
  OperatorProtocol hamiltonian;
  std::optional<OperatorProtocol> hamiltonian_rate;
  std::vector<JumpChannel> channels;
  bool driven = false;
  /// Characteristic protocol time; sets the finite-difference step for dH/dt.
  double protocol_time = 1.0;
  double t_min = 0.0;
  double t_max = std::numeric_limits<double>::infinity();

  /// Throws InvalidParameter on a negative rate or a wrong operator size.
  void validate() const;
};

struct StepDiagnostics {
  std::size_t steps = 0;
  double dt = 0.0;  // effective step (t_end / total steps)
  /// dt times a bound on the generator's spectral radius.
  double stability_ratio = 0.0;
  double max_trace_drift = 0.0;
  double min_eigenvalue = 0.0;
  std::vector<std::string> warnings;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<DensityMatrix> states;
  std::vector<double> heat;  // Q(t)
  std::vector<double> work;  // W(t)
  /// Largest per-step |Tr rho - 1| (before renormalization) since the
  /// previous sample.
  std::vector<double> trace_drift;
  /// Raw min eigenvalue of each retained state.
  std::vector<double> min_eigenvalue;
  StepDiagnostics diagnostics;

  std::size_t size() const noexcept { return times.size(); }
};

/// Right-hand side of the master equation: -i[H, rho] + sum_mu gamma_mu D[L_mu] rho.
ComplexMatrix generator(const LindbladModel& model, double t, const DensityMatrix& rho);

/// dH_S/dt: the analytic protocol when present, otherwise a central finite
/// difference with step 1e-6 * protocol_time (one-sided at domain edges).
/// Undriven models return the zero matrix.
ComplexMatrix hamiltonian_rate(const LindbladModel& model, double t);

struct PropagateOptions {
  double t_end = 1.0;
  double dt = 1e-3;
  std::size_t n_samples = 2;
};

/// Fixed-step classical RK4 on the augmented state (rho, Q, W), with
/// dQ/dt = -Tr[H rho'] and dW/dt = Tr[H' rho]. After each step rho is
/// re-Hermitized and renormalized. The step is shrunk so that the n_samples
/// uniformly spaced sample times are hit exactly.
///
/// Throws StabilityError if dt exceeds the RK4 stability region of the
/// generator or a step drifts the trace by more than 1e-6, PositivityError if
/// a sampled state has an eigenvalue below -1e-6.
Trajectory propagate(const LindbladModel& model, const DensityMatrix& rho0,
                     const PropagateOptions& options);

/// Upper bound on the spectral radius of the Liouvillian at time t:
/// 2 ||H||_F + sum_mu gamma_mu ||L_mu||_F^2 * 2.
double generator_scale(const LindbladModel& model, double t);

/// Undriven copy of a model with H_S and every L_mu held at their values at t0.
LindbladModel freeze(const LindbladModel& model, double t0);

}  // namespace landauer
