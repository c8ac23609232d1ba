#include "fidcoh/measures.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fidcoh {

namespace {

void require_qubit(const DensityMatrix& rho, const char* what) {
  if (rho.dim() != 2) {
    throw ValidationError(ValidationError::Kind::DimensionMismatch, rho.dim(),
                          std::string(what) + " requires a qubit (dim 2), got dim " + std::to_string(rho.dim()));
  }
}

}  // namespace

double uhlmann_fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) {
    throw ValidationError(ValidationError::Kind::DimensionMismatch, 0.0,
                          "fidelity needs equal dimensions, got " + std::to_string(rho.dim()) + " and " +
                              std::to_string(sigma.dim()));
  }
  const ComplexMatrix product = matrix_sqrt_psd(rho.matrix()) * matrix_sqrt_psd(sigma.matrix());
  Eigen::JacobiSVD<ComplexMatrix> svd(product);
  const double nuclear = svd.singularValues().sum();
  return nuclear * nuclear;
}

double c_l1(const DensityMatrix& rho) {
  const ComplexMatrix& m = rho.matrix();
  double total = 0.0;
  for (int j = 0; j < m.cols(); ++j)
    for (int i = 0; i < m.rows(); ++i)
      if (i != j) total += std::abs(m(i, j));
  return total;
}

int dominant_index(const PureState& psi) {
  int best = 0;
  double best_mod = std::norm(psi[0]);
  for (int i = 1; i < psi.dim(); ++i) {
    const double mod = std::norm(psi[i]);
    if (mod > best_mod) {
      best = i;
      best_mod = mod;
    }
  }
  return best;
}

double c_f_pure(const PureState& psi) {
  const double top = std::norm(psi[dominant_index(psi)]);
  return std::sqrt(std::max(0.0, 1.0 - top));
}

double f_of(double x) {
  if (!(x >= -kStructuralTol && x <= 0.5 + kStructuralTol)) {
    throw ValidationError(ValidationError::Kind::Domain, x,
                          "f(x) is defined on [0, 1/2], got x = " + std::to_string(x));
  }
  x = std::clamp(x, 0.0, 0.5);
  // (1 − √(1 − 4x²))/2 rewritten as 2x²/(1 + √(1 − 4x²)) to avoid cancellation
  const double s = std::sqrt(std::max(0.0, 1.0 - 4.0 * x * x));
  return x * std::sqrt(2.0 / (1.0 + s));
}

double c_f_qubit(const DensityMatrix& rho) {
  require_qubit(rho, "c_f_qubit");
  return f_of(std::abs(rho(0, 1)));
}

Ensemble::Ensemble(std::vector<EnsembleMember> members, double tol) : members_(std::move(members)) {
  double total = 0.0;
  for (const auto& m : members_) {
    if (!(m.weight >= 0.0)) {
      throw ValidationError(ValidationError::Kind::InvalidArgument, m.weight, "ensemble weights must be non-negative");
    }
    total += m.weight;
  }
  if (!(std::abs(total - 1.0) <= tol)) {
    throw ValidationError(ValidationError::Kind::Normalization, total - 1.0, "ensemble weights must sum to 1");
  }
  for (std::size_t i = 1; i < members_.size(); ++i) {
    if (members_[i].state.dim() != members_[0].state.dim()) {
      throw ValidationError(ValidationError::Kind::DimensionMismatch, 0.0, "ensemble members differ in dimension");
    }
  }
}

ComplexMatrix Ensemble::mixture() const {
  if (members_.empty()) return {};
  const int d = members_.front().state.dim();
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  for (const auto& m : members_) out += m.weight * m.state.projector();
  return out;
}

double Ensemble::average_cf() const {
  double total = 0.0;
  for (const auto& m : members_) total += m.weight * c_f_pure(m.state);
  return total;
}

double Ensemble::reconstruction_error(const DensityMatrix& rho) const {
  return max_abs(mixture() - rho.matrix());
}

QubitEnsemble optimal_qubit_ensemble(const DensityMatrix& rho) {
  require_qubit(rho, "optimal_qubit_ensemble");
  const Complex off = rho(0, 1);
  if (std::abs(off.imag()) > kStructuralTol || off.real() < -kStructuralTol) {
    throw ValidationError(ValidationError::Kind::NonCanonical, std::abs(off.imag()),
                          "off-diagonal entry must be real and non-negative; apply canonicalize_qubit_mixed first");
  }
  const double x = std::abs(off);
  const double s = std::sqrt(std::max(0.0, 1.0 - 4.0 * x * x));
  QubitEnsemble out{};
  out.q = 0.5 * (1.0 + s);
  out.q_complement = 2.0 * x * x / (1.0 + s);

  std::vector<EnsembleMember> members;
  const double a = std::sqrt(out.q);
  const double b = std::sqrt(out.q_complement);
  if (s < kStructuralTol) {
    // q = 1/2: both members coincide
    out.p_tilde1 = 1.0;
    members.push_back({1.0, PureState(ComplexVector{{a, b}})});
  } else {
    out.p_tilde1 = std::clamp((rho(0, 0).real() - out.q_complement) / s, 0.0, 1.0);
    const double p2 = 1.0 - out.p_tilde1;
    if (out.p_tilde1 > 0.0) members.push_back({out.p_tilde1, PureState(ComplexVector{{a, b}})});
    if (p2 > 0.0) members.push_back({p2, PureState(ComplexVector{{b, a}})});
  }
  out.ensemble = Ensemble(std::move(members));
  return out;
}

}  // namespace fidcoh
