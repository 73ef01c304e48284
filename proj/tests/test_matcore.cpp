#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "qrep/error.hpp"
#include "qrep/matcore.hpp"
#include "qrep/random.hpp"

using namespace qrep;

namespace {

constexpr double kPi = std::numbers::pi;

double norm_of(const Matrix& m) { return operator_norm(TracialMatrix(m)); }

TracialMatrix random_matrix(int n, CounterRng& rng) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = Complex(standard_normal(rng), standard_normal(rng));
  return TracialMatrix(m);
}

// Projector from a full eigendecomposition: V 1_{Re > 1/2} V^-1.
Matrix brute_force_riesz(const Matrix& a) {
  Eigen::ComplexEigenSolver<Matrix> es(a);
  Eigen::VectorXcd mask(a.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i) mask[i] = es.eigenvalues()[i].real() > 0.5 ? 1.0 : 0.0;
  return es.eigenvectors() * mask.asDiagonal() * es.eigenvectors().inverse();
}

}  // namespace

TEST_CASE("construction rejects bad input") {
  CHECK_THROWS_AS(TracialMatrix(Matrix(2, 3)), Error);
  CHECK_THROWS_AS(TracialMatrix(Matrix(0, 0)), Error);
  Matrix nan = Matrix::Identity(2, 2);
  nan(0, 1) = Complex(std::nan(""), 0.0);
  CHECK_THROWS_AS(TracialMatrix{nan}, Error);
  CHECK(normalized_trace(TracialMatrix::identity(7)) == Complex(1.0, 0.0));
}

TEST_CASE("normalized trace is tracial") {
  CounterRng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 9;
    const TracialMatrix a = random_matrix(n, rng);
    const TracialMatrix b = random_matrix(n, rng);
    const double scale = operator_norm(a) * operator_norm(b);
    CHECK(std::abs(normalized_trace(a * b) - normalized_trace(b * a)) <= 1e-12 * scale);
  }
}

TEST_CASE("inverse of singular matrix throws") {
  Matrix m = Matrix::Zero(3, 3);
  m(0, 0) = 1.0;
  try {
    TracialMatrix(m).inverse();
    FAIL("expected SingularInput");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SingularInput);
  }
}

TEST_CASE("principal log") {
  CHECK(norm_of(principal_log(TracialMatrix::identity(4)).entries()) <= 1e-15);

  const Complex phase = std::polar(1.0, 2.0 * kPi * 0.2);
  const TracialMatrix scalar = phase * TracialMatrix::identity(3);
  const Matrix expected = Complex(0.0, 2.0 * kPi * 0.2) * Matrix::Identity(3, 3);
  CHECK(norm_of(principal_log(scalar).entries() - expected) <= 1e-14);

  // Round trip on random unitaries with spectrum kept off -1.
  CounterRng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const TracialMatrix w = random_unitary(10, rng);
    Eigen::VectorXcd d(10);
    for (int i = 0; i < 10; ++i) d[i] = std::polar(1.0, (2.0 * uniform01(rng) - 1.0) * (kPi - 0.1));
    const TracialMatrix u = w * TracialMatrix::diagonal(d) * w.adjoint();
    const TracialMatrix l = principal_log(u);
    CHECK(norm_of(matrix_exp(l).entries() - u.entries()) <= 1e-11);
    // log(exp(H)) = H for spectrum in (-pi + 0.1, pi - 0.1)
    Eigen::VectorXcd h(10);
    for (int i = 0; i < 10; ++i) h[i] = Complex(0.0, std::arg(d[i]));
    const TracialMatrix hm = w * TracialMatrix::diagonal(h) * w.adjoint();
    CHECK(norm_of(principal_log(matrix_exp(hm)).entries() - hm.entries()) <= 1e-10);
  }
}

TEST_CASE("principal log rejects the branch cut") {
  Eigen::VectorXcd d(2);
  d << 1.0, -1.0;
  try {
    principal_log(TracialMatrix::diagonal(d));
    FAIL("expected SpectrumOnBranchCut");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SpectrumOnBranchCut);
  }
}

TEST_CASE("riesz projector") {
  SUBCASE("diagonal") {
    Eigen::VectorXcd d(2);
    d << 0.05, 0.95;
    const RieszProjector r = riesz_half_plane(TracialMatrix::diagonal(d));
    Matrix expected = Matrix::Zero(2, 2);
    expected(1, 1) = 1.0;
    CHECK(norm_of(r.projector.entries() - expected) <= 1e-14);
    CHECK(r.rank == 1);
    CHECK(r.gap == doctest::Approx(0.45));
  }
  SUBCASE("non-normal idempotent is its own projector") {
    Matrix a(2, 2);
    a << 1.0, 1.0, 0.0, 0.0;
    const RieszProjector r = riesz_half_plane(TracialMatrix(a));
    CHECK(norm_of(r.projector.entries() - a) <= 1e-14);
  }
  SUBCASE("near-idempotent against eigendecomposition") {
    Eigen::VectorXcd d(3);
    d << 0.02, 0.97, 1.01;
    CounterRng rng(5);
    const TracialMatrix s = random_matrix(3, rng);
    const TracialMatrix a = s * TracialMatrix::diagonal(d) * s.inverse();
    const RieszProjector r = riesz_half_plane(a);
    CHECK(r.rank == 2);
    CHECK(norm_of(r.projector.entries() - brute_force_riesz(a.entries())) <= 1e-10);
  }
  SUBCASE("random non-normal matrices") {
    CounterRng rng(9);
    for (int trial = 0; trial < 30; ++trial) {
      const int n = 2 + trial % 12;
      const TracialMatrix a = random_matrix(n, rng);
      const RieszProjector r = riesz_half_plane(a);
      const Matrix& p = r.projector.entries();
      CHECK(norm_of(p * p - p) <= 1e-10 * std::max(1.0, norm_of(p)));
      CHECK(norm_of(p * a.entries() - a.entries() * p) <= 1e-10 * operator_norm(a) * std::max(1.0, norm_of(p)));
      CHECK(std::abs(normalized_trace(r.projector).real() * n - r.rank) <= 1e-8);
      CHECK(norm_of(p - brute_force_riesz(a.entries())) <= 1e-8 * std::max(1.0, norm_of(p)));
    }
  }
  SUBCASE("gap too small") {
    Eigen::VectorXcd d(2);
    d << 0.5, 1.0;
    try {
      riesz_half_plane(TracialMatrix::diagonal(d));
      FAIL("expected SpectralGapTooSmall");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::SpectralGapTooSmall);
    }
  }
}

TEST_CASE("polar unitary") {
  CounterRng rng(21);
  const TracialMatrix u = random_unitary(6, rng);
  CHECK(norm_of(polar_unitary(u).entries() - u.entries()) <= 1e-12);

  Eigen::VectorXcd d(2);
  d << 2.0, 0.5;
  CHECK(norm_of(polar_unitary(TracialMatrix::diagonal(d)).entries() - Matrix::Identity(2, 2)) <= 1e-14);

  for (int trial = 0; trial < 10; ++trial) {
    const TracialMatrix m = random_matrix(7, rng);
    const TracialMatrix w = polar_unitary(m);
    CHECK(unitarity_defect(w) <= 1e-12);
    // (m* m)^{1/2} from the Hermitian eigendecomposition
    Eigen::SelfAdjointEigenSolver<Matrix> es(m.entries().adjoint() * m.entries());
    const Matrix root = es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() *
                        es.eigenvectors().adjoint();
    CHECK(norm_of(m.entries() - w.entries() * root) <= 1e-10 * operator_norm(m));
  }

  Matrix singular = Matrix::Identity(3, 3);
  singular(2, 2) = 0.0;
  CHECK_THROWS_AS(polar_unitary(TracialMatrix(singular)), Error);
}

TEST_CASE("counter rng is deterministic and stream separated") {
  CounterRng a(42, 1), b(42, 1), c(42, 2);
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    CHECK(x == b());
    CHECK(x != c());
  }
  CounterRng h(5);
  const Matrix herm = random_hermitian(6, h);
  CHECK(norm_of(herm - herm.adjoint()) == 0.0);
}
