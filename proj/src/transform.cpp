#include "fidcoh/transform.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fidcoh/measures.hpp"

namespace fidcoh {

namespace {

// |2q − 1| below this is the maximally coherent target q = 1/2.
constexpr double kHalfDegeneracy = 1e-9;
// 1 − p below this is the incoherent source p = 1.
constexpr double kUnitDegeneracy = 1e-12;
// p within this of q is p = q, so the flip operators vanish instead of
// surviving as rounding-level terms.
constexpr double kEqualDegeneracy = 1e-12;

std::string transform_message(double source_cf, double target_cf) {
  std::ostringstream os;
  os.precision(12);
  os << "not transformable by incoherent operations: C_F(source) = " << source_cf << " < C_F(target) = " << target_cf;
  return os.str();
}

void require_dim2(int dim, const char* what) {
  if (dim != 2) {
    throw ValidationError(ValidationError::Kind::DimensionMismatch, dim,
                          std::string(what) + " must be a qubit (dim 2), got dim " + std::to_string(dim));
  }
}

Complex unit_phase_conj(Complex z) {
  const double mod = std::abs(z);
  return mod > 0.0 ? std::conj(z) / mod : Complex(1.0, 0.0);
}

ComplexMatrix antidiag(double upper, double lower) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = upper;
  m(1, 0) = lower;
  return m;
}

ComplexMatrix diag(double a, double b) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

}  // namespace

TransformError::TransformError(double source_cf, double target_cf)
    : Error(transform_message(source_cf, target_cf)), source_cf_(source_cf), target_cf_(target_cf) {}

PureCanonicalForm canonicalize_qubit_pure(const PureState& phi) {
  require_dim2(phi.dim(), "source state");
  const int top = dominant_index(phi);
  const int other = 1 - top;
  PureCanonicalForm out{std::norm(phi[top]), std::norm(phi[other]), ComplexMatrix::Zero(2, 2)};
  // |top> -> |0>, |other> -> |1>, each with its phase removed
  out.unitary(0, top) = unit_phase_conj(phi[top]);
  out.unitary(1, other) = unit_phase_conj(phi[other]);
  return out;
}

MixedCanonicalForm canonicalize_qubit_mixed(const DensityMatrix& rho) {
  require_dim2(rho.dim(), "target state");
  ComplexMatrix u = ComplexMatrix::Identity(2, 2);
  u(1, 1) = std::conj(unit_phase_conj(rho(0, 1)));
  const DensityMatrix rotated(u * rho.matrix() * u.adjoint());
  const QubitEnsemble ens = optimal_qubit_ensemble(rotated);
  return {ens.q, ens.q_complement, ens.p_tilde1, std::move(u)};
}

TransformProblem make_transform_problem(const PureState& phi, const DensityMatrix& rho) {
  PureCanonicalForm source = canonicalize_qubit_pure(phi);
  MixedCanonicalForm target = canonicalize_qubit_mixed(rho);
  return {source.p,         source.p_complement, target.q, target.q_complement, target.p_tilde1,
          std::move(source.unitary), std::move(target.unitary)};
}

bool can_transform(const PureState& phi, const DensityMatrix& rho, double tol) {
  require_dim2(phi.dim(), "source state");
  require_dim2(rho.dim(), "target state");
  return c_f_pure(phi) >= c_f_qubit(rho) - tol;
}

std::vector<ComplexMatrix> canonical_transform_kraus(const TransformProblem& pr) {
  const double q = pr.q;
  const double qc = pr.q_complement;
  const double p1 = pr.p_tilde1;
  const double p2 = pr.p_tilde2();
  const double two_q_minus_1 = q - qc;

  std::vector<ComplexMatrix> ops;
  const auto push = [&ops](double coeff, ComplexMatrix m) {
    if (coeff > 0.0) ops.push_back(std::sqrt(coeff) * m);
  };

  if (std::abs(two_q_minus_1) < kHalfDegeneracy) {
    // Target is the maximally coherent state, which forces p = 1/2.
    ops.push_back(ComplexMatrix::Identity(2, 2));
    return ops;
  }

  const bool source_above = pr.p > q - kEqualDegeneracy;
  const double p = source_above ? q : pr.p;
  const double pc = source_above ? qc : pr.p_complement;

  if (pc < kUnitDegeneracy) {
    // Incoherent source, hence incoherent target: prepare diag(p̃1, p̃2).
    push(p1, diag(1.0, 1.0));
    push(p2, antidiag(1.0, 1.0));
    return ops;
  }

  const double stay = (q - pc) / two_q_minus_1;                    // (p + q − 1)/(2q − 1)
  const double flip = std::max(0.0, (pc - qc) / two_q_minus_1);   // (q − p)/(2q − 1)
  const double a = std::sqrt(q / p);
  const double b = std::sqrt(qc / pc);
  const double c = std::sqrt(q / pc);
  const double d = std::sqrt(qc / p);

  push(p1 * stay, diag(a, b));
  push(p1 * flip, antidiag(c, d));
  push(p2 * stay, antidiag(b, a));
  push(p2 * flip, diag(d, c));
  return ops;
}

IncoherentChannel build_transform_channel(const PureState& phi, const DensityMatrix& rho) {
  if (!can_transform(phi, rho)) throw TransformError(c_f_pure(phi), c_f_qubit(rho));
  const TransformProblem pr = make_transform_problem(phi, rho);
  std::vector<ComplexMatrix> ops = canonical_transform_kraus(pr);
  for (auto& k : ops) k = pr.target_canonicalizer.adjoint() * k * pr.source_canonicalizer;
  return validate_channel(std::move(ops));
}

}  // namespace fidcoh
