#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace fidcoh {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Slack granted to user-supplied inputs (Hermiticity, trace, PSD, normalization).
inline constexpr double kStructuralTol = 1e-9;
/// Expected accuracy of decompositions and constructions.
inline constexpr double kNumericTol = 1e-10;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input rejected by a validator. `magnitude` is the size of the offending
/// quantity (asymmetry, trace deviation, most negative eigenvalue, ...).
class ValidationError : public Error {
 public:
  enum class Kind {
    Shape,
    NotHermitian,
    Trace,
    NotPsd,
    Normalization,
    DimensionMismatch,
    Domain,
    NonCanonical,
    InvalidArgument,
    Channel,
  };

  ValidationError(Kind kind, double magnitude, const std::string& what)
      : Error(what), kind_(kind), magnitude_(magnitude) {}

  Kind kind() const noexcept { return kind_; }
  double magnitude() const noexcept { return magnitude_; }

 private:
  Kind kind_;
  double magnitude_;
};

/// Normalized amplitude vector in the reference basis.
class PureState {
 public:
  /// Throws ValidationError(Normalization) when |‖c‖² − 1| > tol. Inputs
  /// whose norm drifts only by rounding are kept bit-for-bit.
  explicit PureState(ComplexVector amplitudes, double tol = kStructuralTol);

  static PureState basis(int dim, int index);

  int dim() const { return static_cast<int>(amps_.size()); }
  const ComplexVector& amplitudes() const { return amps_; }
  Complex operator[](int i) const { return amps_(i); }

  ComplexMatrix projector() const { return amps_ * amps_.adjoint(); }

 private:
  ComplexVector amps_;
};

/// Hermitian, PSD, unit-trace matrix in the reference basis. Construction
/// always goes through the validator, so every instance satisfies the
/// invariants up to the tolerance it was built with.
class DensityMatrix {
 public:
  explicit DensityMatrix(const ComplexMatrix& m, double tol = kStructuralTol);

  static DensityMatrix from_pure(const PureState& psi);

  int dim() const { return static_cast<int>(m_.rows()); }
  const ComplexMatrix& matrix() const { return m_; }
  Complex operator()(int i, int j) const { return m_(i, j); }

 private:
  ComplexMatrix m_;
};

struct EigSystem {
  RealVector eigenvalues;      // ascending
  ComplexMatrix eigenvectors;  // columns
};

double max_abs(const ComplexMatrix& m);
/// max_ij |M_ij − conj(M_ji)|
double max_asymmetry(const ComplexMatrix& m);

/// Eigendecomposition of a Hermitian matrix. 2×2 inputs use the closed form.
EigSystem hermitian_eig(const ComplexMatrix& m, double tol = kStructuralTol);

/// Principal square root of a PSD matrix; eigenvalues in [−tol, 0) are
/// clipped to zero.
ComplexMatrix matrix_sqrt_psd(const ComplexMatrix& m, double tol = kStructuralTol);

DensityMatrix validate_density(const ComplexMatrix& m, double tol = kStructuralTol);

bool is_incoherent(const DensityMatrix& rho, double tol);
DensityMatrix dephase(const DensityMatrix& rho);

}  // namespace fidcoh
