#pragma once

#include <cmath>
#include <complex>
#include <random>

#include "landauer/linalg.hpp"
#include "landauer/qstate.hpp"

namespace testing {

using landauer::Complex;
using landauer::ComplexMatrix;
using landauer::ComplexVector;

inline ComplexMatrix random_hermitian(std::size_t d, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  ComplexMatrix m(d);
  for (std::size_t i = 0; i < d; ++i) {
    m(i, i) = g(rng);
    for (std::size_t j = i + 1; j < d; ++j) {
      m(i, j) = Complex(g(rng), g(rng));
      m(j, i) = std::conj(m(i, j));
    }
  }
  return m;
}

inline ComplexMatrix random_unitary(std::size_t d, std::mt19937_64& rng) {
  return landauer::eigh(random_hermitian(d, rng)).eigenvectors;
}

/// Full-rank state with eigenvalues drawn away from zero.
inline landauer::DensityMatrix random_state(std::size_t d, std::mt19937_64& rng, double floor = 1e-3) {
  std::uniform_real_distribution<double> u(floor, 1.0);
  std::vector<double> p(d);
  double total = 0.0;
  for (auto& x : p) total += (x = u(rng));
  for (auto& x : p) x /= total;
  const ComplexMatrix v = random_unitary(d, rng);
  ComplexMatrix m(d);
  for (std::size_t k = 0; k < d; ++k) {
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) m(i, j) += p[k] * v(i, k) * std::conj(v(j, k));
    }
  }
  return landauer::DensityMatrix(landauer::hermitian_part(m));
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.entries().size(); ++i) m = std::max(m, std::abs(a.entries()[i] - b.entries()[i]));
  return m;
}

inline ComplexMatrix pauli_x() { return ComplexMatrix{{0.0, 1.0}, {1.0, 0.0}}; }
inline ComplexMatrix pauli_z() { return ComplexMatrix{{1.0, 0.0}, {0.0, -1.0}}; }

}  // namespace testing
