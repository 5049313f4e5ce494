#pragma once

// Dense complex linear algebra for the small (d <= 9) operators used by the
// simulator: Hermitian eigendecomposition by cyclic Jacobi rotations,
// spectral matrix functions and cheap traces.

#include <complex>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

namespace landauer {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

/// Square, row-major, dense complex matrix.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}
  ComplexMatrix(std::size_t dim, std::vector<Complex> entries);
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix identity(std::size_t dim);
  static ComplexMatrix diagonal(std::span<const double> values);
  /// |ket><bra|
  static ComplexMatrix outer(std::span<const Complex> ket, std::span<const Complex> bra);

  std::size_t dim() const noexcept { return dim_; }
  std::span<const Complex> entries() const noexcept { return data_; }
  std::span<Complex> entries() noexcept { return data_; }

  Complex& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * dim_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const noexcept {
    return data_[i * dim_ + j];
  }

  ComplexMatrix adjoint() const;
  Complex trace() const noexcept;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex scale) noexcept;

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<Complex> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex s, ComplexMatrix a);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector operator*(const ComplexMatrix& a, std::span<const Complex> v);

/// Accumulates a*b into out. Zero entries of a are skipped, which makes
/// products with the very sparse model operators cheap.
void multiply_into(const ComplexMatrix& a, const ComplexMatrix& b, ComplexMatrix& out);

double frobenius_norm(const ComplexMatrix& m) noexcept;
/// max_ij |m_ij - conj(m_ji)|
double hermiticity_error(const ComplexMatrix& m) noexcept;
/// (m + m^dagger) / 2
ComplexMatrix hermitian_part(const ComplexMatrix& m);

struct EigenSystem {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // columns are eigenvectors

  std::size_t dim() const noexcept { return eigenvalues.size(); }
  ComplexVector vector(std::size_t k) const;
  /// V diag(values) V^dagger
  ComplexMatrix compose(std::span<const double> values) const;
};

inline constexpr double kHermitianTolerance = 1e-10;

/// Eigendecomposition of a Hermitian matrix.
///
/// Eigenvalues come back ascending. Within a cluster of (numerically)
/// degenerate eigenvalues the eigenvectors are ordered by the index of their
/// largest-magnitude component, and every eigenvector is phased so that this
/// component is real and positive. Throws NonHermitianInput if
/// hermiticity_error(m) > 1e-10.
EigenSystem eigh(const ComplexMatrix& m);

/// Same as eigh() but returns only the ascending spectrum.
std::vector<double> eigvalsh(const ComplexMatrix& m);

/// V f(diag(lambda)) V^dagger. Throws NonFiniteFunctionValue when f produces a
/// non-finite value on the spectrum.
ComplexMatrix spectral_map(const ComplexMatrix& m, const std::function<double(double)>& f);
ComplexMatrix spectral_map(const EigenSystem& es, const std::function<double(double)>& f);

/// Tr[a b] = sum_ij a_ij b_ji, without forming the product.
Complex trace_product(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace landauer
