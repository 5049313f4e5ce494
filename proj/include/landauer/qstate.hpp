#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "landauer/linalg.hpp"

namespace landauer {

inline constexpr double kStateTolerance = 1e-9;

/// A validated density matrix. Construction checks Hermiticity (1e-10),
/// unit trace (1e-9) and positivity (min eigenvalue >= -1e-9); eigenvalues in
/// [-1e-9, 0) are clamped and a trace deviation below 1e-9 is renormalized.
/// The spectrum is cached because every entropy evaluation needs it.
class DensityMatrix {
 public:
  explicit DensityMatrix(const ComplexMatrix& m);

  static DensityMatrix maximally_mixed(std::size_t dim);
  static DensityMatrix pure(std::span<const Complex> psi);

  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  std::size_t dim() const noexcept { return matrix_.dim(); }
  /// Clamped, renormalized eigenvalues, ascending.
  std::span<const double> eigenvalues() const noexcept { return eigenvalues_; }
  /// Smallest eigenvalue before clamping.
  double raw_min_eigenvalue() const noexcept { return raw_min_eigenvalue_; }

 private:
  ComplexMatrix matrix_;
  std::vector<double> eigenvalues_;
  double raw_min_eigenvalue_ = 0.0;
};

/// Gibbs state e^{-beta H}/Z for a given Hamiltonian.
struct ReferenceState {
  double beta_R = 0.0;
  DensityMatrix gibbs;
  double log_Z = 0.0;
  /// -T_R ln Z; NaN when beta_R == 0.
  double free_energy = 0.0;
  /// |beta| * spread(H) > 700: the exponentials underflow and the state is a
  /// ground (or top, for beta < 0) subspace projector.
  bool saturated = false;
};

struct ThermoSample {
  double t = 0.0;
  double E_S = 0.0;
  double S = 0.0;
  double S_diag = 0.0;
  double Coh = 0.0;
  /// Relative entropy to the attached reference; NaN without one.
  double D_ref = 0.0;
  /// F + T_R D_ref; NaN without a reference or at beta_R == 0.
  double F_neq = 0.0;
};

struct DephasingResult {
  double S_diag = 0.0;
  double Coh = 0.0;
};

/// Shannon entropy of a probability vector with 0 ln 0 = 0.
double shannon_entropy(std::span<const double> p);

double von_neumann_entropy(const DensityMatrix& rho);

/// D(rho || sigma) = Tr[rho ln rho] - Tr[rho ln sigma]. Throws
/// SingularReference when sigma has an eigenvalue <= 1e-12.
double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Populations of rho in the given basis.
std::vector<double> populations(const DensityMatrix& rho, const EigenSystem& basis);

inline constexpr double kDegeneracyGap = 1e-9;

/// Entropy S' of rho after dephasing onto the eigenspaces of `basis`
/// (sum_E P_E rho P_E) and the coherence S' - S. Eigenvalues closer than
/// degeneracy_gap share an eigenspace, so S' does not depend on how the
/// eigensolver picked vectors inside a degenerate block.
DephasingResult dephase_and_coherence(const DensityMatrix& rho, const EigenSystem& basis,
                                      double degeneracy_gap = kDegeneracyGap);

ReferenceState gibbs_state(const ComplexMatrix& h, double beta);
ReferenceState gibbs_state(const EigenSystem& h_spectrum, double beta);

/// <psi|rho|psi>. Throws UnnormalizedVector if ||psi|| deviates from 1 by >1e-10.
double fidelity_pure(const DensityMatrix& rho, std::span<const Complex> psi);

/// All single-state functionals of rho under Hamiltonian h at time t. The
/// dephasing basis is the (tie-broken) eigenbasis of h.
ThermoSample thermo_sample(double t, const DensityMatrix& rho, const EigenSystem& h_basis,
                           const ComplexMatrix& h, const ReferenceState* ref = nullptr);

/// True when two eigenvalues of the spectrum are closer than `gap`.
bool has_near_degeneracy(std::span<const double> spectrum, double gap = kDegeneracyGap);

}  // namespace landauer
