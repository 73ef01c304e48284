#pragma once

#include <complex>

#include <Eigen/Dense>

namespace qrep {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

/// Eigenvalues closer than this to the line Re z = 1/2 make the Riesz
/// idempotent numerically meaningless.
inline constexpr double kSpectralGapThreshold = 1e-8;

/// Eigenvalues within this distance of (-inf, 0] are rejected by the
/// principal logarithm.
inline constexpr double kBranchCutThreshold = 1e-12;

/// A square complex matrix viewed as an element of M_n(C) with the
/// normalized trace tr/n as tracial state. Entries are always finite.
class TracialMatrix {
 public:
  explicit TracialMatrix(Matrix entries);

  static TracialMatrix identity(int dim);
  static TracialMatrix zero(int dim);
  static TracialMatrix diagonal(const Eigen::VectorXcd& diag);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Matrix& entries() const { return entries_; }
  Complex operator()(int row, int col) const { return entries_(row, col); }

  TracialMatrix adjoint() const;
  /// Throws SingularInput when the matrix is not invertible.
  TracialMatrix inverse() const;

  friend TracialMatrix operator*(const TracialMatrix& a, const TracialMatrix& b);
  friend TracialMatrix operator+(const TracialMatrix& a, const TracialMatrix& b);
  friend TracialMatrix operator-(const TracialMatrix& a, const TracialMatrix& b);
  friend TracialMatrix operator*(Complex s, const TracialMatrix& a);

 private:
  Matrix entries_;
};

Complex normalized_trace(const TracialMatrix& m);

/// Largest singular value.
double operator_norm(const TracialMatrix& m);

/// ||m* m - 1||.
double unitarity_defect(const TracialMatrix& m);

TracialMatrix matrix_exp(const TracialMatrix& m);

/// Principal logarithm: the unique L with exp(L) = m whose eigenvalues have
/// imaginary part in (-pi, pi). Throws SpectrumOnBranchCut when an
/// eigenvalue of m lies within kBranchCutThreshold of (-inf, 0].
TracialMatrix principal_log(const TracialMatrix& m);

struct RieszProjector {
  TracialMatrix source;
  TracialMatrix projector;
  /// Distance from the spectrum of `source` to the line Re z = 1/2.
  double gap;
  /// Number of eigenvalues with Re z > 1/2, counted with multiplicity.
  int rank;
};

/// Riesz idempotent of m for the half plane Re z > 1/2, computed from an
/// ordered Schur form. Valid for non-normal input.
RieszProjector riesz_half_plane(const TracialMatrix& m);

/// Unitary factor U of m = U (m* m)^{1/2}. Throws SingularInput when the
/// smallest singular value is below 1e-12.
TracialMatrix polar_unitary(const TracialMatrix& m);

}  // namespace qrep
