#pragma once

#include <vector>

#include "fidcoh/core.hpp"
#include "fidcoh/rng.hpp"

namespace fidcoh {

/// Uhlmann fidelity [Tr √(√ρ σ √ρ)]², evaluated as the squared nuclear norm
/// of √ρ·√σ.
double uhlmann_fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

/// l1-norm of coherence: sum of moduli of the off-diagonal entries.
double c_l1(const DensityMatrix& rho);

/// Index of the largest-modulus amplitude; ties go to the smallest index.
int dominant_index(const PureState& psi);

/// √(1 − max_i |c_i|²)
double c_f_pure(const PureState& psi);

/// √((1 − √(1 − 4x²)) / 2) on [0, 1/2]. Inputs up to kStructuralTol past
/// 1/2 are clamped; anything else outside the domain throws.
double f_of(double x);

/// Closed-form fidelity coherence of a qubit, f(|ρ01|).
double c_f_qubit(const DensityMatrix& rho);

struct EnsembleMember {
  double weight;
  PureState state;
};

/// Weighted pure-state decomposition {p_n, |φ_n⟩}.
class Ensemble {
 public:
  Ensemble() = default;
  explicit Ensemble(std::vector<EnsembleMember> members, double tol = kStructuralTol);

  const std::vector<EnsembleMember>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }

  /// Σ p_n |φ_n⟩⟨φ_n|
  ComplexMatrix mixture() const;
  /// Σ p_n c_f_pure(φ_n)
  double average_cf() const;
  /// ‖mixture − ρ‖_max
  double reconstruction_error(const DensityMatrix& rho) const;

 private:
  std::vector<EnsembleMember> members_;
};

/// Optimal decomposition of a phase-canonical qubit state into two pure
/// states of equal coherence: √q|0⟩+√(1−q)|1⟩ and √(1−q)|0⟩+√q|1⟩.
struct QubitEnsemble {
  double q;
  double q_complement;  // 1 − q, evaluated without cancellation
  double p_tilde1;
  Ensemble ensemble;
};

/// Requires ρ01 real and non-negative (within kStructuralTol); see
/// canonicalize_qubit_mixed for arbitrary qubits.
QubitEnsemble optimal_qubit_ensemble(const DensityMatrix& rho);

struct RoofConfig {
  int ensemble_size = 0;  // 0 selects rank²
  int restarts = 32;
  int max_iterations = 500;  // sweeps per restart
  double convergence_tol = 1e-8;
  Seed seed{};
};

struct RoofResult {
  double value;
  Ensemble ensemble;
  bool converged;
  int iterations_used;
};

/// Upper bound on the convex roof of c_f_pure, found by local search over
/// the decompositions of ρ (see roof.cpp).
RoofResult c_f_roof_estimate(const DensityMatrix& rho, const RoofConfig& cfg = {});

}  // namespace fidcoh
