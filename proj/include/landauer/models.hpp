#pragma once

#include <variant>

#include "landauer/lindblad.hpp"

namespace landauer {

/// Two Lambda-type Rydberg atoms. Energies are in units of Omega = 2 pi MHz.
/// Basis order: |00>,|01>,|0r>,|10>,|11>,|1r>,|r0>,|r1>,|rr>.
struct RydbergParams {
  double omega2 = 0.02;
  double omega = 0.01;
  double gamma = 0.03;  // each of the four channels decays at gamma / 2
};

/// Driven qubit erased against a thermal bath at inverse temperature bath_beta.
struct ErasureParams {
  double eps0 = 0.4;
  double eps_tau = 10.0;
  double tau = 10.0;
  double gamma = 0.2;
  double bath_beta = 1.0;
};

struct RydbergModel {
  LindbladModel model;
  ComplexVector bell_state;  // (|00> - |11>)/sqrt(2)
};

/// Index of |a b> with a, b in {0, 1, r} mapped to {0, 1, 2}.
constexpr std::size_t rydberg_index(std::size_t a, std::size_t b) { return 3 * a + b; }

RydbergModel build_rydberg(const RydbergParams& params);
LindbladModel build_erasure(const ErasureParams& params);

namespace erasure {
double energy(const ErasureParams& p, double t);       // eps(t)
double energy_rate(const ErasureParams& p, double t);  // d eps / dt
double angle(const ErasureParams& p, double t);        // theta(t)
double angle_rate(const ErasureParams& p);             // d theta / dt
/// Bose occupation 1 / (e^{beta eps} - 1).
double bose_occupation(double beta, double eps);
ComplexMatrix hamiltonian(const ErasureParams& p, double t);
ComplexMatrix hamiltonian_rate(const ErasureParams& p, double t);
}  // namespace erasure

namespace initial {
struct GibbsAt {
  double beta = 0.0;
};
/// Gibbs populations of h0 re-sorted ascending onto the ascending-energy
/// eigenbasis (maximal population inversion among diagonal rearrangements).
struct SortedAscendingDiagonal {
  double beta = 0.0;
};
struct MaximallyMixed {};
struct Pure {
  ComplexVector psi;
};
}  // namespace initial

using InitialStateKind =
    std::variant<initial::GibbsAt, initial::SortedAscendingDiagonal, initial::MaximallyMixed, initial::Pure>;

DensityMatrix initial_state(const InitialStateKind& kind, const ComplexMatrix& h0);

}  // namespace landauer
