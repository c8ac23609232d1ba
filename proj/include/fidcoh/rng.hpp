#pragma once

#include <cstdint>
#include <limits>
#include <random>

#include "fidcoh/core.hpp"

namespace fidcoh {

struct Seed {
  std::uint64_t value = 0;
  friend bool operator==(Seed, Seed) = default;
};

/// SplitMix64 finalizer (Steele, Lea & Flood 2014).
std::uint64_t splitmix64_mix(std::uint64_t x);

/// Child seed for sub-task `index` of a computation seeded with `master`.
/// Depends only on the pair, never on execution order.
Seed derive_seed(Seed master, std::uint64_t index);

/// Counter-based SplitMix64 generator: the k-th output is
/// mix(seed + (k + 1)·γ) with γ the 64-bit golden-ratio increment.
/// Satisfies UniformRandomBitGenerator.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(Seed seed) : state_(seed.value) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double normal();
  Complex complex_normal();
  /// Uniform integer in [0, n).
  int index(int n);

 private:
  std::uint64_t state_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Haar-random pure state: normalized vector of i.i.d. standard complex Gaussians.
PureState random_pure(int dim, Seed seed);
PureState random_pure(int dim, Rng& rng);

/// G·G†/Tr(G·G†) with G a dim×rank complex Gaussian matrix.
DensityMatrix random_density(int dim, int rank, Seed seed);
DensityMatrix random_density(int dim, int rank, Rng& rng);

/// Diagonal state with Dirichlet(1, ..., 1) diagonal.
DensityMatrix random_incoherent(int dim, Seed seed);
DensityMatrix random_incoherent(int dim, Rng& rng);

/// Haar-random unitary (QR of a Gaussian matrix with phase correction).
ComplexMatrix random_unitary(int dim, Rng& rng);

}  // namespace fidcoh
