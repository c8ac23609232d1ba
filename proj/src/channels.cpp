#include "fidcoh/channels.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fidcoh {

namespace {

// Fraction of a fresh column that must survive orthogonalization before the
// draw is accepted; smaller remnants are redrawn to keep conditioning sane.
constexpr double kSurvivalRatio = 1e-3;
constexpr int kDrawAttempts = 8;

std::string describe(const ChannelViolation& v) {
  std::ostringstream os;
  switch (v.kind) {
    case ChannelViolation::Kind::Dimension:
      os << "dimension mismatch: " << v.message;
      break;
    case ChannelViolation::Kind::Completeness:
      os << "completeness violation: max |sum K^dag K - I| = " << v.magnitude;
      break;
    case ChannelViolation::Kind::Incoherence:
      os << "incoherence violation: operator " << v.op << " column " << v.column << " has " << v.message
         << " (second largest modulus " << v.magnitude << ")";
      break;
  }
  return os.str();
}

}  // namespace

std::string ChannelReport::summary() const {
  std::ostringstream os;
  if (ok()) {
    os << "valid incoherent channel (" << n_ops << " Kraus operators, dim " << dim << ")";
    return os.str();
  }
  os << "invalid channel:";
  for (const auto& v : violations) os << "\n  " << describe(v);
  return os.str();
}

ChannelValidationError::ChannelValidationError(ChannelReport report)
    : ValidationError(Kind::Channel,
                      report.violations.empty() ? 0.0 : report.violations.front().magnitude, report.summary()),
      report_(std::move(report)) {}

bool is_incoherent_kraus(const ComplexMatrix& k, double tol) {
  for (int c = 0; c < k.cols(); ++c) {
    int nonzero = 0;
    for (int r = 0; r < k.rows(); ++r)
      if (std::abs(k(r, c)) > tol) ++nonzero;
    if (nonzero > 1) return false;
  }
  return true;
}

ChannelReport check_channel(const std::vector<ComplexMatrix>& ops, double tol) {
  ChannelReport report;
  report.n_ops = static_cast<int>(ops.size());
  if (ops.empty()) {
    report.violations.push_back({ChannelViolation::Kind::Dimension, -1, -1, 0.0, "no Kraus operators"});
    return report;
  }
  report.dim = static_cast<int>(ops.front().rows());
  for (std::size_t n = 0; n < ops.size(); ++n) {
    if (ops[n].rows() != report.dim || ops[n].cols() != report.dim || report.dim == 0) {
      report.violations.push_back({ChannelViolation::Kind::Dimension, static_cast<int>(n), -1, 0.0,
                                   "operator " + std::to_string(n) + " is " + std::to_string(ops[n].rows()) + "x" +
                                       std::to_string(ops[n].cols()) + ", expected " + std::to_string(report.dim) +
                                       "x" + std::to_string(report.dim)});
    }
  }
  if (!report.ok()) return report;

  ComplexMatrix gram = ComplexMatrix::Zero(report.dim, report.dim);
  for (const auto& k : ops) gram.noalias() += k.adjoint() * k;
  report.completeness_residual = max_abs(gram - ComplexMatrix::Identity(report.dim, report.dim));
  if (!(report.completeness_residual <= tol)) {
    report.violations.push_back(
        {ChannelViolation::Kind::Completeness, -1, -1, report.completeness_residual, ""});
  }

  for (std::size_t n = 0; n < ops.size(); ++n) {
    const ComplexMatrix& k = ops[n];
    for (int c = 0; c < k.cols(); ++c) {
      double first = 0.0;
      double second = 0.0;
      int nonzero = 0;
      for (int r = 0; r < k.rows(); ++r) {
        const double mod = std::abs(k(r, c));
        if (mod > tol) ++nonzero;
        if (mod > first) {
          second = first;
          first = mod;
        } else if (mod > second) {
          second = mod;
        }
      }
      report.incoherence_residual = std::max(report.incoherence_residual, second);
      if (nonzero > 1) {
        report.violations.push_back({ChannelViolation::Kind::Incoherence, static_cast<int>(n), c, second,
                                     std::to_string(nonzero) + " nonzero entries"});
      }
    }
  }
  return report;
}

IncoherentChannel validate_channel(std::vector<ComplexMatrix> ops, double tol) {
  ChannelReport report = check_channel(ops, tol);
  if (!report.ok()) throw ChannelValidationError(std::move(report));
  return IncoherentChannel(std::move(ops));
}

DensityMatrix apply_channel(const IncoherentChannel& channel, const DensityMatrix& rho) {
  if (channel.dim() != rho.dim()) {
    throw ValidationError(ValidationError::Kind::DimensionMismatch, 0.0,
                          "channel acts on dim " + std::to_string(channel.dim()) + ", state has dim " +
                              std::to_string(rho.dim()));
  }
  ComplexMatrix out = ComplexMatrix::Zero(rho.dim(), rho.dim());
  for (const auto& k : channel.kraus()) out.noalias() += k * rho.matrix() * k.adjoint();
  return DensityMatrix(out);
}

SelectiveMeasurement selective_outcomes(const IncoherentChannel& channel, const DensityMatrix& rho,
                                        double prob_floor) {
  if (channel.dim() != rho.dim()) {
    throw ValidationError(ValidationError::Kind::DimensionMismatch, 0.0, "channel and state dimensions differ");
  }
  SelectiveMeasurement result;
  for (std::size_t n = 0; n < channel.size(); ++n) {
    const ComplexMatrix branch = channel[n] * rho.matrix() * channel[n].adjoint();
    const double p = branch.trace().real();
    result.total_probability += p;
    if (p > prob_floor) {
      // rounding in the branch is amplified by 1/p after normalization
      const double tol = std::max(kStructuralTol, 1e-14 / p);
      result.outcomes.push_back({static_cast<int>(n), p, DensityMatrix(branch / p, tol)});
    } else {
      ++result.dropped;
      result.dropped_probability += std::max(p, 0.0);
    }
  }
  return result;
}

IncoherentChannel random_incoherent_channel(int dim, int n_kraus, Seed seed) {
  Rng rng(seed);
  return random_incoherent_channel(dim, n_kraus, rng);
}

IncoherentChannel random_incoherent_channel(int dim, int n_kraus, Rng& rng) {
  if (dim < 1 || n_kraus < 1) {
    throw ValidationError(ValidationError::Kind::InvalidArgument, n_kraus, "need dim >= 1 and n_kraus >= 1");
  }
  // Column i of the stacked matrix [K_1; ...; K_N] is amp[.][i] placed at rows
  // target[.][i]; columns i and j only overlap in blocks n where the targets agree.
  std::vector<std::vector<int>> target(n_kraus, std::vector<int>(dim));
  std::vector<ComplexVector> amp(dim, ComplexVector(n_kraus));

  const auto overlap_part = [&](int j, int i) {
    ComplexVector w = ComplexVector::Zero(n_kraus);
    for (int n = 0; n < n_kraus; ++n)
      if (target[n][j] == target[n][i]) w(n) = amp[j](n);
    return w;
  };

  for (int i = 0; i < dim; ++i) {
    bool placed = false;
    for (int attempt = 0; attempt < kDrawAttempts && !placed; ++attempt) {
      for (int n = 0; n < n_kraus; ++n) target[n][i] = rng.index(dim);
      ComplexVector a(n_kraus);
      for (int n = 0; n < n_kraus; ++n) a(n) = rng.complex_normal();
      const double start = a.norm();

      // Orthonormal basis of the earlier columns restricted to this support.
      std::vector<ComplexVector> basis;
      for (int j = 0; j < i; ++j) {
        ComplexVector w = overlap_part(j, i);
        for (int pass = 0; pass < 2; ++pass)
          for (const auto& b : basis) w -= b * b.dot(w);
        const double norm = w.norm();
        if (norm > 1e-12) basis.push_back(w / norm);
      }
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& b : basis) a -= b * b.dot(a);

      if (a.norm() > kSurvivalRatio * start) {
        amp[i] = a.normalized();
        placed = true;
      }
    }
    if (!placed) {
      // Send column i to rows no earlier column uses in the same operator;
      // i < dim guarantees a free row in every block.
      for (int n = 0; n < n_kraus; ++n) {
        std::vector<int> free_rows;
        for (int r = 0; r < dim; ++r) {
          bool used = false;
          for (int j = 0; j < i; ++j) used = used || (target[n][j] == r && amp[j](n) != Complex(0.0));
          if (!used) free_rows.push_back(r);
        }
        target[n][i] = free_rows[rng.index(static_cast<int>(free_rows.size()))];
      }
      ComplexVector a(n_kraus);
      for (int n = 0; n < n_kraus; ++n) a(n) = rng.complex_normal();
      amp[i] = a.normalized();
    }
  }

  std::vector<ComplexMatrix> ops(n_kraus, ComplexMatrix::Zero(dim, dim));
  for (int n = 0; n < n_kraus; ++n)
    for (int i = 0; i < dim; ++i) ops[n](target[n][i], i) = amp[i](n);
  return validate_channel(std::move(ops), 1e-12);
}

ComplexMatrix incoherent_unitary(std::span<const double> phases, std::span<const int> permutation) {
  const auto dim = static_cast<int>(permutation.size());
  if (phases.size() != permutation.size() || dim == 0) {
    throw ValidationError(ValidationError::Kind::InvalidArgument, 0.0,
                          "phases and permutation must be non-empty and of equal length");
  }
  std::vector<bool> hit(dim, false);
  for (int target : permutation) {
    if (target < 0 || target >= dim || hit[target]) {
      throw ValidationError(ValidationError::Kind::InvalidArgument, target, "permutation is not a bijection");
    }
    hit[target] = true;
  }
  ComplexMatrix u = ComplexMatrix::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) u(permutation[i], i) = std::polar(1.0, phases[i]);
  return u;
}

}  // namespace fidcoh
