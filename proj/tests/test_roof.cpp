#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fidcoh/measures.hpp"

using namespace fidcoh;

namespace {

DensityMatrix qubit(Complex a, Complex b, Complex c, Complex d) {
  ComplexMatrix m(2, 2);
  m << a, b, c, d;
  return DensityMatrix(m);
}

DensityMatrix diagonal_state(const std::vector<double>& d) {
  ComplexMatrix m = ComplexMatrix::Zero(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return DensityMatrix(m);
}

}  // namespace

TEST_CASE("roof estimate on the reference qubit") {
  const DensityMatrix rho = qubit(0.5, 0.3, 0.3, 0.5);
  const RoofResult r = c_f_roof_estimate(rho);
  CHECK(r.value >= std::sqrt(0.1) - 1e-9);
  CHECK(r.value <= std::sqrt(0.1) + 1e-4);
  CHECK(r.ensemble.reconstruction_error(rho) <= 1e-9);
  CHECK(std::abs(r.value - r.ensemble.average_cf()) <= 1e-10);
  CHECK(r.converged);
}

TEST_CASE("roof estimate of a pure state is c_f_pure of its eigenvector") {
  Rng rng(Seed{3});
  for (int trial = 0; trial < 20; ++trial) {
    const int dim = 2 + trial % 3;
    const PureState psi = random_pure(dim, rng);
    const RoofResult r = c_f_roof_estimate(DensityMatrix::from_pure(psi));
    REQUIRE(r.ensemble.size() == 1);
    CHECK(r.ensemble.members()[0].weight == 1.0);
    CHECK(r.value == c_f_pure(r.ensemble.members()[0].state));
    CHECK(std::abs(r.value - c_f_pure(psi)) <= 1e-12);
  }
}

TEST_CASE("roof estimate of incoherent states vanishes") {
  CHECK(c_f_roof_estimate(diagonal_state({0.2, 0.3, 0.5})).value <= 1e-6);
  CHECK(c_f_roof_estimate(diagonal_state({1.0 / 3, 1.0 / 3, 1.0 / 3})).value <= 1e-6);
  CHECK(c_f_roof_estimate(diagonal_state({0.3, 0.7})).value <= 1e-6);
}

TEST_CASE("ensemble size below rank is rejected") {
  RoofConfig cfg;
  cfg.ensemble_size = 1;
  CHECK_THROWS_AS(c_f_roof_estimate(qubit(0.5, 0.3, 0.3, 0.5), cfg), ValidationError);
  cfg.ensemble_size = 2;
  CHECK_NOTHROW(c_f_roof_estimate(qubit(0.5, 0.3, 0.3, 0.5), cfg));
}

TEST_CASE("roof estimate upper-bounds the qubit closed form and is self-consistent") {
  Rng rng(Seed{21});
  RoofConfig cfg;
  cfg.restarts = 8;
  for (int trial = 0; trial < 40; ++trial) {
    const DensityMatrix rho = random_density(2, 2, rng);
    cfg.seed = Seed{static_cast<std::uint64_t>(trial)};
    const RoofResult r = c_f_roof_estimate(rho, cfg);
    CHECK(r.value >= c_f_qubit(rho) - 1e-9);
    CHECK(r.value <= c_f_qubit(rho) + 1e-4);
    CHECK(std::abs(r.value - r.ensemble.average_cf()) <= 1e-10);
    CHECK(r.ensemble.reconstruction_error(rho) <= 1e-9);
  }
}

TEST_CASE("roof estimate in dimension 3") {
  Rng rng(Seed{99});
  RoofConfig cfg;
  cfg.restarts = 6;
  for (int trial = 0; trial < 5; ++trial) {
    const DensityMatrix rho = random_density(3, 2 + trial % 2, rng);
    const RoofResult r = c_f_roof_estimate(rho, cfg);
    CHECK(r.ensemble.reconstruction_error(rho) <= 1e-9);
    CHECK(std::abs(r.value - r.ensemble.average_cf()) <= 1e-10);
    // any decomposition bounds the roof from above, the spectral one included
    double spectral = 0.0;
    const EigSystem es = hermitian_eig(rho.matrix());
    for (int k = 0; k < 3; ++k) {
      if (es.eigenvalues(k) > 1e-12) spectral += es.eigenvalues(k) * c_f_pure(PureState(es.eigenvectors.col(k)));
    }
    CHECK(r.value <= spectral + 1e-12);
    CHECK(r.value > 0.0);
  }
}

TEST_CASE("roof estimate is deterministic per seed") {
  const DensityMatrix rho = random_density(3, 3, Seed{4});
  RoofConfig cfg;
  cfg.restarts = 4;
  cfg.seed = Seed{17};
  const RoofResult a = c_f_roof_estimate(rho, cfg);
  const RoofResult b = c_f_roof_estimate(rho, cfg);
  CHECK(a.value == b.value);
  CHECK(a.iterations_used == b.iterations_used);
}

TEST_CASE("roof estimate is invariant under diagonal-unitary conjugation") {
  Rng rng(Seed{123});
  RoofConfig cfg;
  cfg.restarts = 6;
  cfg.seed = Seed{5};
  for (int trial = 0; trial < 10; ++trial) {
    const int dim = 2 + trial % 2;
    const DensityMatrix rho = random_density(dim, dim, rng);
    ComplexMatrix u = ComplexMatrix::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) u(i, i) = std::polar(1.0, 6.0 * rng.uniform());
    const DensityMatrix rotated(u * rho.matrix() * u.adjoint());
    CHECK(std::abs(c_f_roof_estimate(rotated, cfg).value - c_f_roof_estimate(rho, cfg).value) <= 1e-9);
  }
}
