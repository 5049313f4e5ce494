#include "landauer/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "landauer/error.hpp"

namespace landauer {

namespace {

constexpr Complex kI{0.0, 1.0};
// Real-axis RK4 stability boundary is ~2.785; leave some room.
constexpr double kStabilityLimit = 2.5;
constexpr double kStabilityWarning = 0.1;
constexpr double kMaxTraceDrift = 1e-6;
constexpr double kMaxNegativeEigenvalue = -1e-6;

void check_domain(const LindbladModel& model, double t) {
  const double slack = 1e-12 * std::max(1.0, std::abs(t));
  if (!(t >= model.t_min - slack && t <= model.t_max + slack)) {
    throw Error(ErrorCode::ProtocolDomainError, "t = " + std::to_string(t) + " outside [" +
                                                    std::to_string(model.t_min) + ", " +
                                                    std::to_string(model.t_max) + "]");
  }
}

// The operators needed to evaluate the generator at one instant:
// X = H - (i/2) sum gamma L^dagger L and the sqrt(gamma)-scaled jumps.
struct GeneratorTerms {
  ComplexMatrix h;
  ComplexMatrix h_eff;
  std::vector<ComplexMatrix> jumps;
};

GeneratorTerms evaluate_terms(const LindbladModel& model, double t) {
  check_domain(model, t);
  GeneratorTerms terms;
  terms.h = model.hamiltonian(t);
  terms.h_eff = terms.h;
  ComplexMatrix k(model.dim);
  for (const auto& ch : model.channels) {
    if (ch.rate == 0.0) continue;
    ComplexMatrix l = ch.op(t);
    l *= std::sqrt(ch.rate);
    multiply_into(l.adjoint(), l, k);
    terms.jumps.push_back(std::move(l));
  }
  k *= Complex{0.0, -0.5};
  terms.h_eff += k;
  return terms;
}

// For Hermitian rho: rho X^dagger = (X rho)^dagger and L rho L^dagger = L (L rho)^dagger,
// so only left products with the (sparse) model operators are needed.
void apply_generator(const GeneratorTerms& terms, const ComplexMatrix& rho, ComplexMatrix& out,
                     ComplexMatrix& scratch) {
  const std::size_t n = rho.dim();
  std::fill(scratch.entries().begin(), scratch.entries().end(), Complex{});
  multiply_into(terms.h_eff, rho, scratch);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out(i, j) = -kI * (scratch(i, j) - std::conj(scratch(j, i)));
  }
  for (const auto& l : terms.jumps) {
    std::fill(scratch.entries().begin(), scratch.entries().end(), Complex{});
    multiply_into(l, rho, scratch);
    ComplexMatrix lrho_dag = scratch.adjoint();
    multiply_into(l, lrho_dag, out);
  }
}

double operator_scale(const GeneratorTerms& terms) {
  double s = 2.0 * frobenius_norm(terms.h);
  for (const auto& l : terms.jumps) s += 2.0 * std::pow(frobenius_norm(l), 2);
  return s;
}

}  // namespace

void LindbladModel::validate() const {
  if (dim == 0) throw Error(ErrorCode::InvalidParameter, "model dimension must be positive");
  if (!hamiltonian) throw Error(ErrorCode::InvalidParameter, "model has no Hamiltonian");
  for (const auto& ch : channels) {
    if (!(ch.rate >= 0.0)) throw Error(ErrorCode::InvalidParameter, "negative channel rate");
    if (!ch.op) throw Error(ErrorCode::InvalidParameter, "channel without operator");
  }
  const ComplexMatrix h0 = hamiltonian(t_min);
  if (h0.dim() != dim) throw Error(ErrorCode::DimensionMismatch, "Hamiltonian dimension");
  if (hermiticity_error(h0) > kHermitianTolerance) {
    throw Error(ErrorCode::NonHermitianInput, "H_S(t_min) not Hermitian");
  }
  for (const auto& ch : channels) {
    if (ch.op(t_min).dim() != dim) throw Error(ErrorCode::DimensionMismatch, "jump operator dimension");
  }
}

ComplexMatrix generator(const LindbladModel& model, double t, const DensityMatrix& rho) {
  if (rho.dim() != model.dim) throw Error(ErrorCode::DimensionMismatch, "generator");
  const GeneratorTerms terms = evaluate_terms(model, t);
  ComplexMatrix out(model.dim);
  ComplexMatrix scratch(model.dim);
  apply_generator(terms, rho.matrix(), out, scratch);
  return out;
}

double generator_scale(const LindbladModel& model, double t) {
  return operator_scale(evaluate_terms(model, t));
}

LindbladModel freeze(const LindbladModel& model, double t0) {
  check_domain(model, t0);
  LindbladModel out;
  out.dim = model.dim;
  const ComplexMatrix h = model.hamiltonian(t0);
  out.hamiltonian = [h](double) { return h; };
  for (const auto& c : model.channels) {
    const ComplexMatrix l = c.op(t0);
    out.channels.push_back(JumpChannel{c.rate, [l](double) { return l; }});
  }
  out.protocol_time = model.protocol_time;
  return out;
}

ComplexMatrix hamiltonian_rate(const LindbladModel& model, double t) {
  if (!model.driven) return ComplexMatrix(model.dim);
  check_domain(model, t);
  if (model.hamiltonian_rate) return (*model.hamiltonian_rate)(t);

  const double h = 1e-6 * model.protocol_time;
  const auto& H = model.hamiltonian;
  if (t - h >= model.t_min && t + h <= model.t_max) {
    return (0.5 / h) * (H(t + h) - H(t - h));
  }
  // Second-order one-sided stencils at the edges of the protocol domain.
  if (t - h < model.t_min) {
    return (0.5 / h) * (-3.0 * H(t) + 4.0 * H(t + h) - H(t + 2.0 * h));
  }
  return (0.5 / h) * (3.0 * H(t) - 4.0 * H(t - h) + H(t - 2.0 * h));
}

Trajectory propagate(const LindbladModel& model, const DensityMatrix& rho0,
                     const PropagateOptions& options) {
  model.validate();
  if (rho0.dim() != model.dim) throw Error(ErrorCode::DimensionMismatch, "initial state dimension");
  if (!(options.dt > 0.0) || !(options.t_end > 0.0) || options.n_samples < 2) {
    throw Error(ErrorCode::InvalidParameter, "need dt > 0, t_end > 0 and n_samples >= 2");
  }
  check_domain(model, 0.0);
  check_domain(model, options.t_end);

  const std::size_t intervals = options.n_samples - 1;
  const double sample_spacing = options.t_end / static_cast<double>(intervals);
  const auto steps_per_interval =
      static_cast<std::size_t>(std::max(1.0, std::ceil(sample_spacing / options.dt - 1e-9)));
  const double dt = sample_spacing / static_cast<double>(steps_per_interval);
  const std::size_t n = model.dim;

  Trajectory traj;
  traj.diagnostics.steps = steps_per_interval * intervals;
  traj.diagnostics.dt = dt;

  // Stability of the explicit scheme: sample the generator norm along the protocol.
  double scale = 0.0;
  const int probes = model.driven ? 17 : 1;
  for (int k = 0; k < probes; ++k) {
    const double t = probes == 1 ? 0.0 : options.t_end * k / (probes - 1);
    scale = std::max(scale, generator_scale(model, t));
  }
  traj.diagnostics.stability_ratio = options.dt * scale;
  if (traj.diagnostics.stability_ratio > kStabilityLimit) {
    throw Error(ErrorCode::StabilityError,
                "dt * generator scale = " + std::to_string(traj.diagnostics.stability_ratio) +
                    " exceeds the RK4 stability limit " + std::to_string(kStabilityLimit));
  }
  if (traj.diagnostics.stability_ratio > kStabilityWarning) {
    traj.diagnostics.warnings.push_back("dt * generator scale = " +
                                        std::to_string(traj.diagnostics.stability_ratio) +
                                        " above 0.1; accuracy may suffer");
  }

  const std::size_t n_samples = options.n_samples;
  traj.times.reserve(n_samples);
  traj.states.reserve(n_samples);
  traj.heat.reserve(n_samples);
  traj.work.reserve(n_samples);

  traj.times.push_back(0.0);
  traj.states.push_back(rho0);
  traj.heat.push_back(0.0);
  traj.work.push_back(0.0);
  traj.trace_drift.push_back(0.0);
  traj.min_eigenvalue.push_back(rho0.raw_min_eigenvalue());

  ComplexMatrix rho = rho0.matrix();
  double heat = 0.0;
  double work = 0.0;

  std::optional<GeneratorTerms> frozen;
  if (!model.driven) frozen = evaluate_terms(model, 0.0);

  ComplexMatrix k[4] = {ComplexMatrix(n), ComplexMatrix(n), ComplexMatrix(n), ComplexMatrix(n)};
  ComplexMatrix stage(n);
  ComplexMatrix scratch(n);
  double q_rate[4] = {};
  double w_rate[4] = {};
  const double c_stage[4] = {0.0, 0.5, 0.5, 1.0};

  auto eval_stage = [&](int s, double t, const ComplexMatrix& state) {
    if (frozen) {
      apply_generator(*frozen, state, k[s], scratch);
      q_rate[s] = -trace_product(frozen->h, k[s]).real();
      w_rate[s] = 0.0;
      return;
    }
    const GeneratorTerms terms = evaluate_terms(model, t);
    apply_generator(terms, state, k[s], scratch);
    q_rate[s] = -trace_product(terms.h, k[s]).real();
    w_rate[s] = trace_product(hamiltonian_rate(model, t), state).real();
  };

  double interval_drift = 0.0;
  for (std::size_t interval = 0; interval < intervals; ++interval) {
    const double t_begin = sample_spacing * static_cast<double>(interval);
    for (std::size_t step = 0; step < steps_per_interval; ++step) {
      const double t = t_begin + dt * static_cast<double>(step);
      for (int s = 0; s < 4; ++s) {
        if (s == 0) {
          stage = rho;
        } else {
          const double a = dt * c_stage[s];
          for (std::size_t e = 0; e < n * n; ++e) {
            stage.entries()[e] = rho.entries()[e] + a * k[s - 1].entries()[e];
          }
        }
        eval_stage(s, t + dt * c_stage[s], stage);
      }
      for (std::size_t e = 0; e < n * n; ++e) {
        rho.entries()[e] += (dt / 6.0) * (k[0].entries()[e] + 2.0 * k[1].entries()[e] +
                                          2.0 * k[2].entries()[e] + k[3].entries()[e]);
      }
      heat += (dt / 6.0) * (q_rate[0] + 2.0 * q_rate[1] + 2.0 * q_rate[2] + q_rate[3]);
      work += (dt / 6.0) * (w_rate[0] + 2.0 * w_rate[1] + 2.0 * w_rate[2] + w_rate[3]);

      rho = hermitian_part(rho);
      const double tr = rho.trace().real();
      const double drift = std::abs(tr - 1.0);
      if (!(drift <= kMaxTraceDrift)) {
        throw Error(ErrorCode::StabilityError, "trace drift " + std::to_string(drift) + " at t = " +
                                                   std::to_string(t + dt));
      }
      interval_drift = std::max(interval_drift, drift);
      rho *= 1.0 / tr;
    }

    const double t_sample = interval + 1 == intervals ? options.t_end
                                                      : sample_spacing * static_cast<double>(interval + 1);
    const double min_eig = eigvalsh(rho).front();
    if (!(min_eig >= kMaxNegativeEigenvalue)) {
      throw Error(ErrorCode::PositivityError,
                  "min eigenvalue " + std::to_string(min_eig) + " at t = " + std::to_string(t_sample));
    }
    if (min_eig < -kStateTolerance) {
      // Within the hard limit but outside DensityMatrix tolerance: clip the
      // negative part and keep going, noting it.
      const EigenSystem es = eigh(rho);
      std::vector<double> clipped(es.eigenvalues);
      double total = 0.0;
      for (auto& x : clipped) total += (x = std::max(x, 0.0));
      for (auto& x : clipped) x /= total;
      rho = es.compose(clipped);
      traj.diagnostics.warnings.push_back("clipped eigenvalue " + std::to_string(min_eig) +
                                          " at t = " + std::to_string(t_sample));
    }
    traj.times.push_back(t_sample);
    traj.states.emplace_back(rho);
    traj.heat.push_back(heat);
    traj.work.push_back(work);
    traj.trace_drift.push_back(interval_drift);
    traj.min_eigenvalue.push_back(min_eig);
    traj.diagnostics.max_trace_drift = std::max(traj.diagnostics.max_trace_drift, interval_drift);
    interval_drift = 0.0;
  }
  traj.diagnostics.min_eigenvalue =
      *std::min_element(traj.min_eigenvalue.begin(), traj.min_eigenvalue.end());
  return traj;
}

}  // namespace landauer
