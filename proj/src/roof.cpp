// Convex-roof search for C_F on arbitrary states.
//
// Write ρ = Σ_k |ψ_k⟩⟨ψ_k| with ψ_k = √λ_k v_k over the nonzero spectrum. Every
// m-member decomposition of ρ is φ̃_n = Σ_k U_nk ψ_k for an m×r matrix U with
// orthonormal columns, and the ensemble weights are p_n = ‖φ̃_n‖². We store the
// rows φ̃_n directly (Φ = U·Ψᵀ) and move on the manifold by complex Givens
// rotations of row pairs, which keep U†U = I exactly. The cost of a row is
//   p_n·c_f_pure(φ̃_n/√p_n) = √(p_n (p_n − max_i |φ̃_ni|²)),
// so no normalization is needed inside the search.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "fidcoh/measures.hpp"

namespace fidcoh {

namespace {

// Eigenvalues at or below this (relative to the largest) are outside the support.
constexpr double kRankFloor = 1e-12;
constexpr int kCoarseSamples = 8;
constexpr double kAngleTol = 1e-9;
constexpr double kPolishTol = 1e-13;

struct PhaseCanonical {
  ComplexMatrix matrix;  // D ρ D†
  ComplexVector phases;  // diagonal of D
};

// Diagonal unitary D making a spanning set of off-diagonal entries real and
// non-negative: entry (r, j) for each column j, with r the first row above j
// of largest modulus. The result depends only on the moduli of ρ, so inputs
// related by diagonal-unitary conjugation map to the same matrix.
PhaseCanonical phase_canonicalize(const ComplexMatrix& rho) {
  const int d = static_cast<int>(rho.rows());
  ComplexVector phases = ComplexVector::Ones(d);
  for (int j = 1; j < d; ++j) {
    int r = 0;
    double best = std::abs(rho(0, j));
    for (int i = 1; i < j; ++i) {
      const double mod = std::abs(rho(i, j));
      if (mod > best) {
        best = mod;
        r = i;
      }
    }
    if (best > 0.0) phases(j) = phases(r) * std::polar(1.0, std::arg(rho(r, j)));
  }
  ComplexMatrix canon = phases.asDiagonal() * rho * phases.conjugate().asDiagonal();
  canon = 0.5 * (canon + canon.adjoint()).eval();
  return {std::move(canon), std::move(phases)};
}

double row_cost(const Complex* row, int d, Eigen::Index stride) {
  double weight = 0.0;
  double top = 0.0;
  for (int i = 0; i < d; ++i) {
    const double mod = std::norm(row[i * stride]);
    weight += mod;
    top = std::max(top, mod);
  }
  return std::sqrt(std::max(0.0, weight * (weight - top)));
}

class RowPairSearch {
 public:
  RowPairSearch(ComplexMatrix& phi, int i, int j, Complex phase)
      : phi_(phi), i_(i), j_(j), phase_(phase), d_(static_cast<int>(phi.cols())) {}

  double cost_at(double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const Complex a = -s * phase_;
    const Complex b = s * std::conj(phase_);
    scratch_i_.resize(d_);
    scratch_j_.resize(d_);
    for (int k = 0; k < d_; ++k) {
      const Complex x = phi_(i_, k);
      const Complex y = phi_(j_, k);
      scratch_i_(k) = c * x + a * y;
      scratch_j_(k) = b * x + c * y;
    }
    return row_cost(scratch_i_.data(), d_, 1) + row_cost(scratch_j_.data(), d_, 1);
  }

  void apply(double theta) {
    cost_at(theta);
    phi_.row(i_) = scratch_i_.transpose();
    phi_.row(j_) = scratch_j_.transpose();
  }

 private:
  ComplexMatrix& phi_;
  int i_;
  int j_;
  Complex phase_;
  int d_;
  ComplexVector scratch_i_;
  ComplexVector scratch_j_;
};

// Minimizes the pair cost over θ ∈ [−π/2, π/2) (the rotation has period π in
// cost): coarse grid, then golden-section refinement around the best sample.
// Returns the decrease achieved (≥ 0); Φ is only modified on strict decrease.
double improve_pair(ComplexMatrix& phi, int i, int j, Complex phase) {
  RowPairSearch search(phi, i, j, phase);
  const double current = search.cost_at(0.0);

  constexpr double kPi = std::numbers::pi;
  constexpr double kStep = kPi / kCoarseSamples;
  double best_theta = 0.0;
  double best_cost = current;
  for (int k = 0; k < kCoarseSamples; ++k) {
    const double theta = -0.5 * kPi + k * kStep;
    const double cost = search.cost_at(theta);
    if (cost < best_cost) {
      best_cost = cost;
      best_theta = theta;
    }
  }

  constexpr double kInvPhi = 0.6180339887498949;
  double lo = best_theta - kStep;
  double hi = best_theta + kStep;
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = search.cost_at(x1);
  double f2 = search.cost_at(x2);
  while (hi - lo > kAngleTol) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = search.cost_at(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = search.cost_at(x2);
    }
  }
  const double x_mid = 0.5 * (lo + hi);
  for (const auto& [theta, cost] : std::array{std::pair{x1, f1}, std::pair{x2, f2},
                                             std::pair{x_mid, search.cost_at(x_mid)}}) {
    if (cost < best_cost) {
      best_cost = cost;
      best_theta = theta;
    }
  }

  if (best_cost < current) {
    search.apply(best_theta);
    return current - best_cost;
  }
  return 0.0;
}

double total_cost(const ComplexMatrix& phi) {
  double total = 0.0;
  for (int n = 0; n < phi.rows(); ++n) total += row_cost(&phi(n, 0), static_cast<int>(phi.cols()), phi.outerStride());
  return total;
}

struct DescentOutcome {
  ComplexMatrix phi;
  double cost;
  bool converged;
  int sweeps;
};

DescentOutcome descend(ComplexMatrix phi, const RoofConfig& cfg) {
  const int m = static_cast<int>(phi.rows());
  // Real and imaginary Givens generators on every row pair.
  const std::array<Complex, 2> generators{Complex(1.0, 0.0), Complex(0.0, 1.0)};
  bool converged = m < 2;
  bool polished = converged;
  int sweeps = 0;
  // After the convergence test passes, keep sweeping until the gain is at
  // rounding level so that nearby starts settle on the same value.
  while (!polished && sweeps < cfg.max_iterations) {
    ++sweeps;
    double gained = 0.0;
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j)
        for (const Complex& g : generators) gained += improve_pair(phi, i, j, g);
    converged = converged || gained < cfg.convergence_tol;
    polished = gained < kPolishTol;
  }
  const double cost = total_cost(phi);
  return {std::move(phi), cost, converged, sweeps};
}

}  // namespace

RoofResult c_f_roof_estimate(const DensityMatrix& rho, const RoofConfig& cfg) {
  if (cfg.restarts < 1) {
    throw ValidationError(ValidationError::Kind::InvalidArgument, cfg.restarts, "restarts must be >= 1");
  }
  const int d = rho.dim();
  const PhaseCanonical canon = phase_canonicalize(rho.matrix());
  const EigSystem es = hermitian_eig(canon.matrix);

  // Support of ρ, largest eigenvalues first.
  const double top = std::max(es.eigenvalues.maxCoeff(), 0.0);
  std::vector<int> support;
  for (int k = d - 1; k >= 0; --k)
    if (es.eigenvalues(k) > kRankFloor * std::max(top, 1.0)) support.push_back(k);
  const int rank = static_cast<int>(support.size());

  const int m = cfg.ensemble_size == 0 ? rank * rank : cfg.ensemble_size;
  if (m < rank) {
    throw ValidationError(ValidationError::Kind::InvalidArgument, m,
                          "ensemble size " + std::to_string(m) + " is below the rank " + std::to_string(rank));
  }

  ComplexMatrix psi(d, rank);
  for (int c = 0; c < rank; ++c) {
    const int k = support[c];
    ComplexVector v = es.eigenvectors.col(k);
    // real positive phase on the first largest component
    Eigen::Index arg_top = 0;
    v.cwiseAbs().maxCoeff(&arg_top);
    const Complex z = v(arg_top);
    if (std::abs(z) > 0.0) v *= std::conj(z) / std::abs(z);
    psi.col(c) = std::sqrt(es.eigenvalues(k)) * v;
  }

  DescentOutcome best{{}, std::numeric_limits<double>::infinity(), false, 0};
  for (int t = 0; t < cfg.restarts; ++t) {
    ComplexMatrix u;
    if (t == 0) {
      // spectral decomposition itself
      u = ComplexMatrix::Identity(m, rank);
    } else {
      Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(t)));
      u = random_unitary(m, rng).leftCols(rank);
    }
    DescentOutcome run = descend(u * psi.transpose(), cfg);
    if (run.cost < best.cost) best = std::move(run);
  }

  // Back to the input frame: ρ = D† (DρD†) D.
  std::vector<EnsembleMember> members;
  double total_weight = 0.0;
  for (int n = 0; n < m; ++n) {
    ComplexVector v = canon.phases.conjugate().asDiagonal() * best.phi.row(n).transpose();
    const double w = v.squaredNorm();
    if (w <= 0.0) continue;
    v /= std::sqrt(w);
    members.push_back({w, PureState(std::move(v))});
    total_weight += w;
  }
  for (auto& member : members) member.weight /= total_weight;

  RoofResult result{0.0, Ensemble(std::move(members)), best.converged, best.sweeps};
  result.value = result.ensemble.average_cf();
  return result;
}

}  // namespace fidcoh
