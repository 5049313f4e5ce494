#include "landauer/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "landauer/error.hpp"

namespace landauer {

namespace {

constexpr double kSaturationExponent = 700.0;

ComplexMatrix validated(const ComplexMatrix& m) {
  const double herm = hermiticity_error(m);
  if (herm > kHermitianTolerance) {
    throw Error(ErrorCode::InvalidState, "density matrix not Hermitian: " + std::to_string(herm));
  }
  return hermitian_part(m);
}

}  // namespace

DensityMatrix::DensityMatrix(const ComplexMatrix& m) : matrix_(validated(m)) {
  if (matrix_.dim() == 0) throw Error(ErrorCode::InvalidState, "empty density matrix");
  const double tr = matrix_.trace().real();
  if (std::abs(tr - 1.0) > kStateTolerance) {
    throw Error(ErrorCode::InvalidState, "trace deviates from 1 by " + std::to_string(tr - 1.0));
  }
  eigenvalues_ = eigvalsh(matrix_);
  raw_min_eigenvalue_ = eigenvalues_.front();
  if (raw_min_eigenvalue_ < -kStateTolerance) {
    throw Error(ErrorCode::InvalidState, "negative eigenvalue " + std::to_string(raw_min_eigenvalue_));
  }
  if (tr != 1.0) matrix_ *= 1.0 / tr;
  for (auto& x : eigenvalues_) x = std::clamp(x, 0.0, 1.0);
  const double sum = std::accumulate(eigenvalues_.begin(), eigenvalues_.end(), 0.0);
  for (auto& x : eigenvalues_) x /= sum;
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
  ComplexMatrix m = ComplexMatrix::identity(dim);
  m *= 1.0 / static_cast<double>(dim);
  return DensityMatrix(m);
}

DensityMatrix DensityMatrix::pure(std::span<const Complex> psi) {
  double norm2 = 0.0;
  for (const auto& z : psi) norm2 += std::norm(z);
  if (std::abs(std::sqrt(norm2) - 1.0) > 1e-10) {
    throw Error(ErrorCode::UnnormalizedVector, "||psi|| = " + std::to_string(std::sqrt(norm2)));
  }
  return DensityMatrix(ComplexMatrix::outer(psi, psi));
}

double shannon_entropy(std::span<const double> p) {
  double s = 0.0;
  for (double x : p) {
    if (x > 0.0) s -= x * std::log(x);
  }
  return s;
}

double von_neumann_entropy(const DensityMatrix& rho) { return shannon_entropy(rho.eigenvalues()); }

double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw Error(ErrorCode::DimensionMismatch, "relative_entropy");
  const EigenSystem sigma_es = eigh(sigma.matrix());
  if (sigma_es.eigenvalues.front() <= 1e-12) {
    throw Error(ErrorCode::SingularReference,
                "reference min eigenvalue " + std::to_string(sigma_es.eigenvalues.front()));
  }
  // x ln x is finite on the clamped spectrum, so 0 ln 0 = 0 falls out.
  const ComplexMatrix log_rho = spectral_map(rho.matrix(), [](double x) {
    return x > 0.0 ? std::log(x) : 0.0;
  });
  const ComplexMatrix log_sigma = spectral_map(sigma_es, [](double x) { return std::log(x); });
  return trace_product(rho.matrix(), log_rho).real() - trace_product(rho.matrix(), log_sigma).real();
}

std::vector<double> populations(const DensityMatrix& rho, const EigenSystem& basis) {
  if (rho.dim() != basis.dim()) throw Error(ErrorCode::DimensionMismatch, "populations");
  const std::size_t n = rho.dim();
  const ComplexMatrix& m = rho.matrix();
  const ComplexMatrix& v = basis.eigenvectors;
  std::vector<double> p(n);
  for (std::size_t k = 0; k < n; ++k) {
    Complex acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      Complex row = 0.0;
      for (std::size_t j = 0; j < n; ++j) row += m(i, j) * v(j, k);
      acc += std::conj(v(i, k)) * row;
    }
    p[k] = std::max(acc.real(), 0.0);
  }
  return p;
}

DephasingResult dephase_and_coherence(const DensityMatrix& rho, const EigenSystem& basis, double degeneracy_gap) {
  if (rho.dim() != basis.dim()) throw Error(ErrorCode::DimensionMismatch, "dephase_and_coherence");
  const std::size_t d = basis.dim();
  const auto& lambda = basis.eigenvalues;
  const ComplexMatrix& m = rho.matrix();
  std::vector<double> weights;
  weights.reserve(d);
  for (std::size_t lo = 0; lo < d;) {
    std::size_t hi = lo + 1;
    while (hi < d && lambda[hi] - lambda[hi - 1] < degeneracy_gap) ++hi;
    // Block of rho inside one (near-)degenerate eigenspace; its spectrum
    // does not depend on the basis chosen inside that eigenspace.
    ComplexMatrix block(hi - lo);
    for (std::size_t a = lo; a < hi; ++a) {
      const ComplexVector va = m * basis.vector(a);
      for (std::size_t b = lo; b < hi; ++b) {
        const ComplexVector vb = basis.vector(b);
        Complex z = 0.0;
        for (std::size_t i = 0; i < d; ++i) z += std::conj(vb[i]) * va[i];
        block(b - lo, a - lo) = z;
      }
    }
    if (hi - lo == 1) {
      weights.push_back(std::max(0.0, block(0, 0).real()));
    } else {
      for (double w : eigvalsh(hermitian_part(block))) weights.push_back(std::max(0.0, w));
    }
    lo = hi;
  }
  DephasingResult r;
  r.S_diag = shannon_entropy(weights);
  r.Coh = r.S_diag - von_neumann_entropy(rho);
  return r;
}

ReferenceState gibbs_state(const EigenSystem& h_spectrum, double beta) {
  if (!std::isfinite(beta)) throw Error(ErrorCode::InvalidParameter, "beta must be finite");
  const auto& lambda = h_spectrum.eigenvalues;
  const double shift = beta >= 0.0 ? lambda.front() : lambda.back();
  std::vector<double> w(lambda.size());
  double z_shifted = 0.0;
  for (std::size_t k = 0; k < lambda.size(); ++k) {
    w[k] = std::exp(-beta * (lambda[k] - shift));
    z_shifted += w[k];
  }
  for (auto& x : w) x /= z_shifted;

  const double log_Z = -beta * shift + std::log(z_shifted);
  const double spread = lambda.back() - lambda.front();
  return ReferenceState{
      .beta_R = beta,
      .gibbs = DensityMatrix(h_spectrum.compose(w)),
      .log_Z = log_Z,
      .free_energy = beta != 0.0 ? -log_Z / beta : std::numeric_limits<double>::quiet_NaN(),
      .saturated = std::abs(beta) * spread > kSaturationExponent,
  };
}

ReferenceState gibbs_state(const ComplexMatrix& h, double beta) { return gibbs_state(eigh(h), beta); }

double fidelity_pure(const DensityMatrix& rho, std::span<const Complex> psi) {
  if (psi.size() != rho.dim()) throw Error(ErrorCode::DimensionMismatch, "fidelity_pure");
  double norm2 = 0.0;
  for (const auto& z : psi) norm2 += std::norm(z);
  if (std::abs(std::sqrt(norm2) - 1.0) > 1e-10) {
    throw Error(ErrorCode::UnnormalizedVector, "||psi|| = " + std::to_string(std::sqrt(norm2)));
  }
  const ComplexVector rho_psi = rho.matrix() * psi;
  Complex f = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) f += std::conj(psi[i]) * rho_psi[i];
  return f.real();
}

ThermoSample thermo_sample(double t, const DensityMatrix& rho, const EigenSystem& h_basis,
                           const ComplexMatrix& h, const ReferenceState* ref) {
  const auto deph = dephase_and_coherence(rho, h_basis);
  ThermoSample s;
  s.t = t;
  s.E_S = trace_product(h, rho.matrix()).real();
  s.S = von_neumann_entropy(rho);
  s.S_diag = deph.S_diag;
  s.Coh = deph.Coh;
  s.D_ref = std::numeric_limits<double>::quiet_NaN();
  s.F_neq = std::numeric_limits<double>::quiet_NaN();
  if (ref != nullptr) {
    s.D_ref = relative_entropy(rho, ref->gibbs);
    if (ref->beta_R != 0.0) s.F_neq = ref->free_energy + s.D_ref / ref->beta_R;
  }
  return s;
}

bool has_near_degeneracy(std::span<const double> spectrum, double gap) {
  for (std::size_t k = 1; k < spectrum.size(); ++k) {
    if (spectrum[k] - spectrum[k - 1] < gap) return true;
  }
  return false;
}

}  // namespace landauer
