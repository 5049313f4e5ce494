#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "landauer/error.hpp"
#include "landauer/models.hpp"
#include "support.hpp"

using namespace landauer;

TEST_CASE("Rydberg model: dark state and structure") {
  const RydbergModel ry = build_rydberg({});
  CHECK(ry.model.dim == 9);
  CHECK(!ry.model.driven);
  REQUIRE(ry.model.channels.size() == 4);
  const ComplexMatrix h = ry.model.hamiltonian(0.0);
  double hv = 0.0;
  for (const auto& z : h * ry.bell_state) hv = std::max(hv, std::abs(z));
  CHECK(hv < 1e-12);
  for (const auto& c : ry.model.channels) {
    CHECK(c.rate == doctest::Approx(0.015));
    double lv = 0.0;
    for (const auto& z : c.op(0.0) * ry.bell_state) lv = std::max(lv, std::abs(z));
    CHECK(lv < 1e-12);
  }
  CHECK(hermiticity_error(h) == 0.0);
  CHECK(std::abs(h(rydberg_index(1, 0), rydberg_index(2, 0)) - 0.02) < 1e-15);
  CHECK(std::abs(h(rydberg_index(0, 0), rydberg_index(1, 0)) - 0.01) < 1e-15);
}

TEST_CASE("Rydberg model: zero couplings give H = 0") {
  const RydbergModel ry = build_rydberg({0.0, 0.0, 0.03});
  CHECK(frobenius_norm(ry.model.hamiltonian(0.0)) == 0.0);
  CHECK_THROWS_AS(build_rydberg({-1.0, 0.0, 0.0}), Error);
}

TEST_CASE("Erasure model: protocol endpoints") {
  const ErasureParams p;
  const ComplexMatrix h0 = erasure::hamiltonian(p, 0.0);
  const ComplexMatrix expect0 = (-p.eps0 / 2.0) * testing::pauli_z();
  CHECK(h0 == expect0);
  const ComplexMatrix ht = erasure::hamiltonian(p, p.tau);
  const ComplexMatrix expect_t = (p.eps_tau / 2.0) * testing::pauli_z();
  CHECK(ht == expect_t);
  CHECK(erasure::energy_rate(p, 0.0) == 0.0);
  CHECK(erasure::angle_rate(p) == doctest::Approx(std::numbers::pi / p.tau));
}

TEST_CASE("Erasure model: Bose occupation and instantaneous spectrum") {
  CHECK(erasure::bose_occupation(1.0, 1.0) == doctest::Approx(1.0 / (std::exp(1.0) - 1.0)));
  CHECK(erasure::bose_occupation(1.0, 1.0) == doctest::Approx(0.58198).epsilon(1e-5));
  const ErasureParams p;
  const LindbladModel m = build_erasure(p);
  CHECK(m.driven);
  for (double t = 0.0; t <= p.tau; t += 0.37) {
    const auto ev = eigvalsh(m.hamiltonian(t));
    const double e = erasure::energy(p, t);
    CHECK(std::abs(ev[0] + e / 2.0) < 1e-12);
    CHECK(std::abs(ev[1] - e / 2.0) < 1e-12);
  }
}

TEST_CASE("Erasure model: jump operators are ground/excited dyads") {
  const ErasureParams p;
  const LindbladModel m = build_erasure(p);
  const double t = 3.1;
  const EigenSystem es = eigh(m.hamiltonian(t));
  const double eps = erasure::energy(p, t);
  const double n = erasure::bose_occupation(p.bath_beta, eps);
  const ComplexMatrix l1 = m.channels[0].op(t);
  // <g|L1|e> = sqrt(eps (N + 1)), everything else zero in the eigenbasis.
  const ComplexMatrix in_basis = es.eigenvectors.adjoint() * l1 * es.eigenvectors;
  CHECK(std::abs(std::abs(in_basis(0, 1)) - std::sqrt(eps * (n + 1.0))) < 1e-12);
  CHECK(std::abs(in_basis(1, 0)) < 1e-12);
  const ComplexMatrix l2 = es.eigenvectors.adjoint() * m.channels[1].op(t) * es.eigenvectors;
  CHECK(std::abs(std::abs(l2(1, 0)) - std::sqrt(eps * n)) < 1e-12);
}

TEST_CASE("Erasure parameter validation") {
  ErasureParams p;
  p.tau = 0.0;
  CHECK_THROWS_AS(build_erasure(p), Error);
  p = {};
  p.bath_beta = -1.0;
  CHECK_THROWS_AS(build_erasure(p), Error);
}

TEST_CASE("initial states") {
  const ComplexMatrix q = 0.5 * testing::pauli_z();
  SUBCASE("sorted ascending diagonal at beta = 0 is maximally mixed") {
    std::mt19937_64 rng(1);
    const ComplexMatrix h = testing::random_hermitian(5, rng);
    const DensityMatrix r = initial_state(initial::SortedAscendingDiagonal{0.0}, h);
    CHECK(testing::max_abs_diff(r.matrix(), DensityMatrix::maximally_mixed(5).matrix()) < 1e-12);
  }
  SUBCASE("qubit population inversion") {
    const DensityMatrix r = initial_state(initial::SortedAscendingDiagonal{1.0}, q);
    // ground state of (1/2) sz is |1>
    CHECK(r.matrix()(1, 1).real() == doctest::Approx(0.2689).epsilon(1e-4));
    CHECK(r.matrix()(0, 0).real() == doctest::Approx(0.7311).epsilon(1e-4));
  }
  SUBCASE("sorting preserves the entropy") {
    const ComplexMatrix h = build_rydberg({}).model.hamiltonian(0.0);
    const DensityMatrix sorted = initial_state(initial::SortedAscendingDiagonal{30.0}, h);
    const DensityMatrix gibbs = initial_state(initial::GibbsAt{30.0}, h);
    CHECK(std::abs(von_neumann_entropy(sorted) - von_neumann_entropy(gibbs)) < 1e-12);
  }
  SUBCASE("other kinds") {
    CHECK(initial_state(initial::MaximallyMixed{}, q).matrix() == DensityMatrix::maximally_mixed(2).matrix());
    const ComplexVector psi{0.0, 1.0};
    CHECK(initial_state(initial::Pure{psi}, q).matrix()(1, 1).real() == 1.0);
    const ComplexVector wrong{1.0};
    CHECK_THROWS_AS(initial_state(initial::Pure{wrong}, q), Error);
  }
}

TEST_CASE("sorted ascending arrangement is a local maximum of the initial energy contrast") {
  const ComplexMatrix h = build_rydberg({}).model.hamiltonian(0.0);
  const EigenSystem es = eigh(h);
  const DensityMatrix sorted = initial_state(initial::SortedAscendingDiagonal{30.0}, h);
  std::vector<double> p = populations(sorted, es);
  auto energy = [&](const std::vector<double>& w) {
    double e = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) e += w[k] * es.eigenvalues[k];
    return e;
  };
  const double best = energy(p);
  CHECK(best == doctest::Approx(trace_product(h, sorted.matrix()).real()).epsilon(1e-12));
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      std::vector<double> q = p;
      std::swap(q[i], q[j]);
      CHECK(energy(q) <= best + 1e-15);
    }
  }
}
