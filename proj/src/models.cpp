#include "landauer/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "landauer/error.hpp"

namespace landauer {

namespace {

constexpr double kDarkStateTolerance = 1e-12;

ComplexMatrix pauli_x() { return ComplexMatrix{{0.0, 1.0}, {1.0, 0.0}}; }
ComplexMatrix pauli_z() { return ComplexMatrix{{1.0, 0.0}, {0.0, -1.0}}; }

ComplexVector basis_ket(std::size_t dim, std::size_t index) {
  ComplexVector v(dim);
  v[index] = 1.0;
  return v;
}

double max_abs(std::span<const Complex> v) {
  double m = 0.0;
  for (const auto& z : v) m = std::max(m, std::abs(z));
  return m;
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

RydbergModel build_rydberg(const RydbergParams& params) {
  if (!(params.omega2 >= 0.0 && params.omega >= 0.0 && params.gamma >= 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "Rydberg parameters must be non-negative");
  }
  constexpr std::size_t d = 9;
  constexpr std::size_t zero = 0;
  constexpr std::size_t one = 1;
  constexpr std::size_t ryd = 2;
  auto ket = [](std::size_t a, std::size_t b) { return basis_ket(d, rydberg_index(a, b)); };

  ComplexMatrix h(d);
  h += params.omega2 * ComplexMatrix::outer(ket(one, zero), ket(ryd, zero));
  h += params.omega2 * ComplexMatrix::outer(ket(zero, one), ket(zero, ryd));
  ComplexVector up = ket(one, one);
  ComplexVector flip = ket(zero, one);
  for (std::size_t i = 0; i < d; ++i) {
    up[i] += ket(zero, zero)[i];
    flip[i] += ket(one, zero)[i];
  }
  h += params.omega * ComplexMatrix::outer(up, flip);
  h += h.adjoint();

  const ComplexMatrix l1 = ComplexMatrix::outer(ket(zero, one), ket(zero, ryd));
  const ComplexMatrix l2 = ComplexMatrix::outer(ket(zero, zero), ket(zero, ryd));
  const ComplexMatrix l3 = ComplexMatrix::outer(ket(one, zero), ket(ryd, zero));
  const ComplexMatrix l4 = ComplexMatrix::outer(ket(zero, zero), ket(ryd, zero));

  RydbergModel out;
  out.bell_state = ComplexVector(d);
  out.bell_state[rydberg_index(zero, zero)] = 1.0 / std::numbers::sqrt2;
  out.bell_state[rydberg_index(one, one)] = -1.0 / std::numbers::sqrt2;

  if (max_abs(h * out.bell_state) > kDarkStateTolerance) {
    throw Error(ErrorCode::DarkStateViolation, "H_S does not annihilate the Bell state");
  }
  for (const auto* l : {&l1, &l2, &l3, &l4}) {
    if (max_abs(*l * out.bell_state) > kDarkStateTolerance) {
      throw Error(ErrorCode::DarkStateViolation, "jump operator does not annihilate the Bell state");
    }
  }

  out.model.dim = d;
  out.model.hamiltonian = [h](double) { return h; };
  out.model.driven = false;
  for (const auto& l : {l1, l2, l3, l4}) {
    out.model.channels.push_back(JumpChannel{params.gamma / 2.0, [l](double) { return l; }});
  }
  return out;
}

namespace erasure {

double energy(const ErasureParams& p, double t) {
  const double s = std::sin(std::numbers::pi * t / (2.0 * p.tau));
  return p.eps0 + (p.eps_tau - p.eps0) * s * s;
}

double energy_rate(const ErasureParams& p, double t) {
  return (p.eps_tau - p.eps0) * std::numbers::pi / (2.0 * p.tau) * std::sin(std::numbers::pi * t / p.tau);
}

double angle(const ErasureParams& p, double t) { return std::numbers::pi * (t / p.tau - 1.0); }

double angle_rate(const ErasureParams& p) { return std::numbers::pi / p.tau; }

double bose_occupation(double beta, double eps) { return 1.0 / std::expm1(beta * eps); }

ComplexMatrix hamiltonian(const ErasureParams& p, double t) {
  const double th = angle(p, t);
  // Exact endpoints: cos/sin of -pi and 0 are not exact in floating point.
  const double c = t == 0.0 ? -1.0 : (t == p.tau ? 1.0 : std::cos(th));
  const double s = (t == 0.0 || t == p.tau) ? 0.0 : std::sin(th);
  return (0.5 * energy(p, t)) * (c * pauli_z() + s * pauli_x());
}

ComplexMatrix hamiltonian_rate(const ErasureParams& p, double t) {
  const double th = angle(p, t);
  const ComplexMatrix along = std::cos(th) * pauli_z() + std::sin(th) * pauli_x();
  const ComplexMatrix across = -std::sin(th) * pauli_z() + std::cos(th) * pauli_x();
  return (0.5 * energy_rate(p, t)) * along + (0.5 * energy(p, t) * angle_rate(p)) * across;
}

}  // namespace erasure

LindbladModel build_erasure(const ErasureParams& params) {
  if (!(params.tau > 0.0)) throw Error(ErrorCode::InvalidParameter, "tau must be positive");
  if (!(params.gamma >= 0.0)) throw Error(ErrorCode::InvalidParameter, "gamma must be non-negative");
  if (!(params.bath_beta > 0.0)) throw Error(ErrorCode::InvalidParameter, "bath_beta must be positive");
  if (!(params.eps0 > 0.0 && params.eps_tau > 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "level splittings must be positive");
  }

  LindbladModel m;
  m.dim = 2;
  m.driven = true;
  m.protocol_time = params.tau;
  m.t_min = 0.0;
  m.t_max = params.tau;
  m.hamiltonian = [params](double t) { return erasure::hamiltonian(params, t); };
  m.hamiltonian_rate = [params](double t) { return erasure::hamiltonian_rate(params, t); };

  // Rank-one dyads between instantaneous eigenvectors; their phases cancel in D[L].
  auto decay = [params](double t) {
    const EigenSystem es = eigh(erasure::hamiltonian(params, t));
    const double eps = erasure::energy(params, t);
    const double n = erasure::bose_occupation(params.bath_beta, eps);
    ComplexMatrix l = ComplexMatrix::outer(es.vector(0), es.vector(1));
    l *= std::sqrt(eps * (n + 1.0));
    return l;
  };
  auto excite = [params](double t) {
    const EigenSystem es = eigh(erasure::hamiltonian(params, t));
    const double eps = erasure::energy(params, t);
    const double n = erasure::bose_occupation(params.bath_beta, eps);
    ComplexMatrix l = ComplexMatrix::outer(es.vector(1), es.vector(0));
    l *= std::sqrt(eps * n);
    return l;
  };
  m.channels.push_back(JumpChannel{params.gamma, decay});
  m.channels.push_back(JumpChannel{params.gamma, excite});
  return m;
}

DensityMatrix initial_state(const InitialStateKind& kind, const ComplexMatrix& h0) {
  return std::visit(
      overloaded{
          [&](const initial::GibbsAt& k) { return gibbs_state(h0, k.beta).gibbs; },
          [&](const initial::SortedAscendingDiagonal& k) {
            const EigenSystem es = eigh(h0);
            const ReferenceState ref = gibbs_state(es, k.beta);
            std::vector<double> p = populations(ref.gibbs, es);
            std::sort(p.begin(), p.end());
            const double total = std::accumulate(p.begin(), p.end(), 0.0);
            for (auto& x : p) x /= total;
            return DensityMatrix(es.compose(p));
          },
          [&](const initial::MaximallyMixed&) { return DensityMatrix::maximally_mixed(h0.dim()); },
          [&](const initial::Pure& k) {
            if (k.psi.size() != h0.dim()) throw Error(ErrorCode::DimensionMismatch, "pure state size");
            return DensityMatrix::pure(k.psi);
          },
      },
      kind);
}

}  // namespace landauer
