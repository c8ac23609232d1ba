#pragma once

#include <vector>

#include "fidcoh/channels.hpp"
#include "fidcoh/core.hpp"

namespace fidcoh {

/// Default slack on the C_F comparison in can_transform.
inline constexpr double kTransformTol = 1e-9;

/// Raised when a pure qubit cannot reach the requested target by incoherent
/// operations, i.e. C_F(source) < C_F(target).
class TransformError : public Error {
 public:
  TransformError(double source_cf, double target_cf);
  double source_cf() const noexcept { return source_cf_; }
  double target_cf() const noexcept { return target_cf_; }

 private:
  double source_cf_;
  double target_cf_;
};

/// U·φ = √p|0⟩ + √(1−p)|1⟩ with p ≥ 1/2 and U an incoherent unitary.
struct PureCanonicalForm {
  double p;
  double p_complement;  // 1 − p, taken from the smaller amplitude
  ComplexMatrix unitary;
};

PureCanonicalForm canonicalize_qubit_pure(const PureState& phi);

/// U·ρ·U† = p̃1|φ̃1⟩⟨φ̃1| + (1−p̃1)|φ̃2⟩⟨φ̃2| with |φ̃1⟩ = √q|0⟩+√(1−q)|1⟩,
/// |φ̃2⟩ = √(1−q)|0⟩+√q|1⟩, q ≥ 1/2, and U = diag(1, e^{i arg ρ01}).
struct MixedCanonicalForm {
  double q;
  double q_complement;
  double p_tilde1;  // set to 1 when q = 1/2 (both members coincide)
  ComplexMatrix unitary;
};

MixedCanonicalForm canonicalize_qubit_mixed(const DensityMatrix& rho);

/// Canonical parameters of a pure-qubit → qubit conversion.
struct TransformProblem {
  double p;
  double p_complement;
  double q;
  double q_complement;
  double p_tilde1;
  ComplexMatrix source_canonicalizer;
  ComplexMatrix target_canonicalizer;

  double p_tilde2() const { return 1.0 - p_tilde1; }
};

TransformProblem make_transform_problem(const PureState& phi, const DensityMatrix& rho);

/// c_f_pure(φ) ≥ c_f_qubit(ρ) − tol
bool can_transform(const PureState& phi, const DensityMatrix& rho, double tol = kTransformTol);

/// Kraus operators in the canonical frame, zero operators omitted. Assumes
/// p ≤ q; a source marginally above q (within the can_transform slack) is
/// treated as p = q.
std::vector<ComplexMatrix> canonical_transform_kraus(const TransformProblem& problem);

/// Incoherent channel Λ with Λ(|φ⟩⟨φ|) = ρ. Throws TransformError when
/// can_transform(φ, ρ) is false.
IncoherentChannel build_transform_channel(const PureState& phi, const DensityMatrix& rho);

}  // namespace fidcoh
