#include "fidcoh/rng.hpp"

#include <cmath>

namespace fidcoh {

namespace {

constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

void require_dim(int dim) {
  if (dim < 1) throw ValidationError(ValidationError::Kind::InvalidArgument, dim, "dimension must be >= 1");
}

}  // namespace

std::uint64_t splitmix64_mix(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Seed derive_seed(Seed master, std::uint64_t index) {
  return Seed{splitmix64_mix(splitmix64_mix(master.value) ^ splitmix64_mix(index + kGoldenGamma))};
}

Rng::result_type Rng::operator()() {
  state_ += kGoldenGamma;
  return splitmix64_mix(state_);
}

double Rng::uniform() {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  return normal_(*this);
}

Complex Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re, im};
}

int Rng::index(int n) {
  return static_cast<int>(uniform() * n);
}

PureState random_pure(int dim, Seed seed) {
  Rng rng(seed);
  return random_pure(dim, rng);
}

PureState random_pure(int dim, Rng& rng) {
  require_dim(dim);
  ComplexVector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = rng.complex_normal();
  v.normalize();
  return PureState(std::move(v));
}

DensityMatrix random_density(int dim, int rank, Seed seed) {
  Rng rng(seed);
  return random_density(dim, rank, rng);
}

DensityMatrix random_density(int dim, int rank, Rng& rng) {
  require_dim(dim);
  if (rank < 1 || rank > dim) {
    throw ValidationError(ValidationError::Kind::InvalidArgument, rank,
                          "rank must lie in [1, " + std::to_string(dim) + "], got " + std::to_string(rank));
  }
  ComplexMatrix g(dim, rank);
  for (int j = 0; j < rank; ++j)
    for (int i = 0; i < dim; ++i) g(i, j) = rng.complex_normal();
  ComplexMatrix w = g * g.adjoint();
  w /= w.trace().real();
  return DensityMatrix(w);
}

DensityMatrix random_incoherent(int dim, Seed seed) {
  Rng rng(seed);
  return random_incoherent(dim, rng);
}

DensityMatrix random_incoherent(int dim, Rng& rng) {
  require_dim(dim);
  RealVector e(dim);
  // 1 − u lies in (0, 1], so the log is finite
  for (int i = 0; i < dim; ++i) e(i) = -std::log(1.0 - rng.uniform());
  e /= e.sum();
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) m(i, i) = e(i);
  return DensityMatrix(m);
}

ComplexMatrix random_unitary(int dim, Rng& rng) {
  require_dim(dim);
  ComplexMatrix g(dim, dim);
  for (int j = 0; j < dim; ++j)
    for (int i = 0; i < dim; ++i) g(i, j) = rng.complex_normal();
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    const Complex d = r(j, j);
    const double mod = std::abs(d);
    if (mod > 0.0) q.col(j) *= d / mod;
  }
  return q;
}

}  // namespace fidcoh
