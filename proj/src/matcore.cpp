#include "qrep/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include <unsupported/Eigen/MatrixFunctions>

#include "qrep/error.hpp"

namespace qrep {

namespace {

// Swaps the adjacent diagonal entries k, k+1 of the upper-triangular t by a
// unitary similarity, accumulating the rotation into the Schur vectors q.
void swap_schur_entries(Matrix& t, Matrix& q, int k) {
  const Complex a = t(k, k);
  const Complex b = t(k + 1, k + 1);
  const Complex c = t(k, k + 1);
  // [c, b - a] is the eigenvector of the 2x2 block for eigenvalue b.
  Complex x1 = c;
  Complex x2 = b - a;
  const double norm = std::hypot(std::abs(x1), std::abs(x2));
  if (norm == 0.0) return;  // equal eigenvalues with zero coupling
  x1 /= norm;
  x2 /= norm;
  Eigen::Matrix2cd g;
  g << x1, -std::conj(x2), x2, std::conj(x1);

  t.middleRows(k, 2) = g.adjoint() * t.middleRows(k, 2);
  t.middleCols(k, 2) = t.middleCols(k, 2) * g;
  q.middleCols(k, 2) = q.middleCols(k, 2) * g;
  t(k + 1, k) = 0.0;
}

}  // namespace

TracialMatrix::TracialMatrix(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() < 1 || entries_.rows() != entries_.cols()) {
    std::ostringstream os;
    os << "TracialMatrix must be square with dim >= 1, got " << entries_.rows()
       << "x" << entries_.cols();
    throw Error(ErrorKind::InvalidArgument, os.str());
  }
  if (!entries_.allFinite()) {
    throw Error(ErrorKind::InvalidArgument, "TracialMatrix entries must be finite");
  }
}

TracialMatrix TracialMatrix::identity(int dim) {
  return TracialMatrix(Matrix::Identity(dim, dim));
}

TracialMatrix TracialMatrix::zero(int dim) {
  return TracialMatrix(Matrix::Zero(dim, dim));
}

TracialMatrix TracialMatrix::diagonal(const Eigen::VectorXcd& diag) {
  return TracialMatrix(Matrix(diag.asDiagonal()));
}

TracialMatrix TracialMatrix::adjoint() const { return TracialMatrix(entries_.adjoint()); }

TracialMatrix TracialMatrix::inverse() const {
  Eigen::PartialPivLU<Matrix> lu(entries_);
  const Eigen::VectorXcd diag = lu.matrixLU().diagonal();
  const double scale = entries_.cwiseAbs().maxCoeff();
  if (scale == 0.0 || diag.cwiseAbs().minCoeff() <= 1e-14 * scale) {
    throw Error(ErrorKind::SingularInput, "matrix is numerically singular");
  }
  return TracialMatrix(lu.inverse());
}

TracialMatrix operator*(const TracialMatrix& a, const TracialMatrix& b) {
  return TracialMatrix(a.entries_ * b.entries_);
}

TracialMatrix operator+(const TracialMatrix& a, const TracialMatrix& b) {
  return TracialMatrix(a.entries_ + b.entries_);
}

TracialMatrix operator-(const TracialMatrix& a, const TracialMatrix& b) {
  return TracialMatrix(a.entries_ - b.entries_);
}

TracialMatrix operator*(Complex s, const TracialMatrix& a) {
  return TracialMatrix(s * a.entries_);
}

Complex normalized_trace(const TracialMatrix& m) {
  return m.entries().trace() / static_cast<double>(m.dim());
}

double operator_norm(const TracialMatrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m.entries());
  return svd.singularValues()(0);
}

double unitarity_defect(const TracialMatrix& m) {
  const Matrix g = m.entries().adjoint() * m.entries() - Matrix::Identity(m.dim(), m.dim());
  return operator_norm(TracialMatrix(g));
}

TracialMatrix matrix_exp(const TracialMatrix& m) {
  return TracialMatrix(Matrix(m.entries().exp()));
}

TracialMatrix principal_log(const TracialMatrix& m) {
  Eigen::ComplexEigenSolver<Matrix> eig(m.entries(), /*computeEigenvectors=*/false);
  double worst = std::numeric_limits<double>::infinity();
  for (const Complex& lambda : eig.eigenvalues()) {
    const double dist = lambda.real() <= 0.0 ? std::abs(lambda.imag()) : std::abs(lambda);
    worst = std::min(worst, dist);
  }
  if (worst < kBranchCutThreshold) {
    std::ostringstream os;
    os << "eigenvalue within " << worst << " of the branch cut (-inf, 0]";
    throw Error(ErrorKind::SpectrumOnBranchCut, os.str());
  }
  return TracialMatrix(Matrix(m.entries().log()));
}

RieszProjector riesz_half_plane(const TracialMatrix& m) {
  const int n = m.dim();
  Eigen::ComplexSchur<Matrix> schur(m.entries());
  Matrix t = schur.matrixT();
  Matrix q = schur.matrixU();

  double gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) gap = std::min(gap, std::abs(t(i, i).real() - 0.5));
  if (gap < kSpectralGapThreshold) {
    std::ostringstream os;
    os << "spectral gap to Re z = 1/2 is " << gap << " (threshold "
       << kSpectralGapThreshold << ")";
    throw Error(ErrorKind::SpectralGapTooSmall, os.str());
  }

  // Bubble the eigenvalues with Re z > 1/2 to the leading block.
  int rank = 0;
  for (int i = 0; i < n; ++i) {
    if (t(i, i).real() > 0.5) {
      for (int k = i - 1; k >= rank; --k) swap_schur_entries(t, q, k);
      ++rank;
    }
  }

  Matrix p_hat = Matrix::Zero(n, n);
  if (rank > 0) {
    p_hat.topLeftCorner(rank, rank).setIdentity();
    const int rest = n - rank;
    if (rest > 0) {
      // T11 X - X T22 = T12, solved column by column.
      const Matrix t11 = t.topLeftCorner(rank, rank);
      const Matrix t12 = t.topRightCorner(rank, rest);
      const Matrix t22 = t.bottomRightCorner(rest, rest);
      Matrix x(rank, rest);
      for (int j = 0; j < rest; ++j) {
        Eigen::VectorXcd rhs = t12.col(j);
        for (int l = 0; l < j; ++l) rhs += x.col(l) * t22(l, j);
        Matrix shifted = t11;
        shifted.diagonal().array() -= t22(j, j);
        x.col(j) = shifted.triangularView<Eigen::Upper>().solve(rhs);
      }
      p_hat.topRightCorner(rank, rest) = x;
    }
  }
  return RieszProjector{m, TracialMatrix(q * p_hat * q.adjoint()), gap, rank};
}

TracialMatrix polar_unitary(const TracialMatrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m.entries(), Eigen::ComputeFullU | Eigen::ComputeFullV);
  const double smallest = svd.singularValues()(m.dim() - 1);
  if (smallest < 1e-12) {
    std::ostringstream os;
    os << "smallest singular value " << smallest << " below 1e-12";
    throw Error(ErrorKind::SingularInput, os.str());
  }
  return TracialMatrix(svd.matrixU() * svd.matrixV().adjoint());
}

}  // namespace qrep
