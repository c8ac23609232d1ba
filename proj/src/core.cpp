#include "fidcoh/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace fidcoh {

namespace {

// Deviations below this are treated as floating-point drift and left alone,
// so that re-validating an already valid object never changes its bits.
constexpr double kRoundingFloor = 1e-13;

std::string format_g(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

EigSystem eig_2x2(const ComplexMatrix& m) {
  const double a = m(0, 0).real();
  const double d = m(1, 1).real();
  const Complex b = m(0, 1);
  const double mod_b = std::abs(b);
  const double phi = std::arg(b);
  const double mean = 0.5 * (a + d);
  const double half_gap = 0.5 * (a - d);
  const double radius = std::hypot(half_gap, mod_b);

  // Rotation angle in [0, π/4] measured from whichever basis vector carries
  // the larger diagonal entry; diagonal inputs give exact basis vectors.
  const double theta = 0.5 * std::atan2(mod_b, std::abs(half_gap));
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const Complex e_minus = std::polar(1.0, -phi);

  EigSystem out;
  out.eigenvalues.resize(2);
  out.eigenvalues << mean - radius, mean + radius;
  out.eigenvectors.resize(2, 2);
  if (half_gap >= 0.0) {
    // larger eigenvalue leans on |0>
    out.eigenvectors(0, 1) = c;
    out.eigenvectors(1, 1) = e_minus * s;
    out.eigenvectors(0, 0) = -std::conj(e_minus) * s;
    out.eigenvectors(1, 0) = c;
  } else {
    // smaller eigenvalue leans on |0>
    out.eigenvectors(0, 0) = c;
    out.eigenvectors(1, 0) = -e_minus * s;
    out.eigenvectors(0, 1) = std::conj(e_minus) * s;
    out.eigenvectors(1, 1) = c;
  }
  return out;
}

void require_square(const ComplexMatrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw ValidationError(ValidationError::Kind::Shape, 0.0,
                          "matrix must be square and non-empty, got " + std::to_string(m.rows()) + "x" +
                              std::to_string(m.cols()));
  }
}

}  // namespace

double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double max_asymmetry(const ComplexMatrix& m) {
  return max_abs(m - m.adjoint());
}

EigSystem hermitian_eig(const ComplexMatrix& m, double tol) {
  require_square(m);
  const double asym = max_asymmetry(m);
  if (!(asym <= tol)) {
    throw ValidationError(ValidationError::Kind::NotHermitian, asym,
                          "matrix is not Hermitian: max asymmetry " + format_g(asym));
  }
  const ComplexMatrix h = 0.5 * (m + m.adjoint());
  if (h.rows() == 1) {
    return {RealVector::Constant(1, h(0, 0).real()), ComplexMatrix::Identity(1, 1)};
  }
  if (h.rows() == 2) return eig_2x2(h);

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  if (solver.info() != Eigen::Success) throw Error("Hermitian eigensolver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

ComplexMatrix matrix_sqrt_psd(const ComplexMatrix& m, double tol) {
  const EigSystem es = hermitian_eig(m, tol);
  const double lowest = es.eigenvalues.minCoeff();
  if (lowest < -tol) {
    throw ValidationError(ValidationError::Kind::NotPsd, lowest,
                          "matrix is not positive semidefinite: eigenvalue " + format_g(lowest));
  }
  // Eigenvalues at rounding level carry no information; taking their root
  // would turn 1e-17 noise into 3e-9 garbage.
  const double noise = 8.0 * m.rows() * std::numeric_limits<double>::epsilon() *
                       std::max(es.eigenvalues.cwiseAbs().maxCoeff(), 0.0);
  const RealVector roots =
      es.eigenvalues.unaryExpr([noise](double l) { return l > noise ? std::sqrt(l) : 0.0; });
  return es.eigenvectors * roots.asDiagonal() * es.eigenvectors.adjoint();
}

PureState::PureState(ComplexVector amplitudes, double tol) : amps_(std::move(amplitudes)) {
  if (amps_.size() == 0) {
    throw ValidationError(ValidationError::Kind::Shape, 0.0, "pure state must have at least one amplitude");
  }
  const double norm2 = amps_.squaredNorm();
  const double dev = std::abs(norm2 - 1.0);
  if (!(dev <= tol)) {
    throw ValidationError(ValidationError::Kind::Normalization, dev,
                          "pure state is not normalized: |norm^2 - 1| = " + format_g(dev));
  }
  if (dev > kRoundingFloor) amps_ /= std::sqrt(norm2);
}

PureState PureState::basis(int dim, int index) {
  if (dim < 1 || index < 0 || index >= dim) {
    throw ValidationError(ValidationError::Kind::InvalidArgument, 0.0, "basis index out of range");
  }
  ComplexVector v = ComplexVector::Zero(dim);
  v(index) = 1.0;
  return PureState(std::move(v));
}

DensityMatrix::DensityMatrix(const ComplexMatrix& m, double tol) {
  require_square(m);
  const double asym = max_asymmetry(m);
  if (!(asym <= tol)) {
    throw ValidationError(ValidationError::Kind::NotHermitian, asym,
                          "density matrix is not Hermitian: max asymmetry " + format_g(asym));
  }
  m_ = 0.5 * (m + m.adjoint());

  const double trace = m_.trace().real();
  if (!(std::abs(trace - 1.0) <= tol)) {
    throw ValidationError(ValidationError::Kind::Trace, trace - 1.0,
                          "density matrix trace is " + format_g(trace) + ", expected 1");
  }

  const EigSystem es = hermitian_eig(m_, tol);
  const double lowest = es.eigenvalues.minCoeff();
  if (lowest < -tol) {
    throw ValidationError(ValidationError::Kind::NotPsd, lowest,
                          "density matrix is not positive semidefinite: eigenvalue " + format_g(lowest));
  }
  if (lowest < -kRoundingFloor) {
    const RealVector clipped = es.eigenvalues.cwiseMax(0.0);
    m_ = es.eigenvectors * clipped.asDiagonal() * es.eigenvectors.adjoint();
    m_ = 0.5 * (m_ + m_.adjoint()).eval();
  }
  const double new_trace = m_.trace().real();
  if (std::abs(new_trace - 1.0) > kRoundingFloor) m_ /= new_trace;
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
  return DensityMatrix(psi.projector());
}

DensityMatrix validate_density(const ComplexMatrix& m, double tol) {
  return DensityMatrix(m, tol);
}

bool is_incoherent(const DensityMatrix& rho, double tol) {
  const ComplexMatrix& m = rho.matrix();
  for (int j = 0; j < m.cols(); ++j) {
    for (int i = 0; i < m.rows(); ++i) {
      if (i != j && std::abs(m(i, j)) > tol) return false;
    }
  }
  return true;
}

DensityMatrix dephase(const DensityMatrix& rho) {
  const ComplexMatrix diag = rho.matrix().diagonal().asDiagonal();
  return DensityMatrix(diag);
}

}  // namespace fidcoh
