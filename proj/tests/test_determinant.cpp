#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <cmath>
#include <numbers>

#include "qrep/determinant.hpp"
#include "qrep/error.hpp"
#include "qrep/random.hpp"

using namespace qrep;

namespace {

constexpr double kPi = std::numbers::pi;

Matrix expm(const Matrix& m) { return matrix_exp(TracialMatrix(m)).entries(); }

// Hermitian matrix with operator norm `norm`.
Matrix scaled_hermitian(int n, double norm, CounterRng& rng) {
  Matrix h = random_hermitian(n, rng);
  return h * (norm / operator_norm(TracialMatrix(h)));
}

// t -> exp(i t H), a smooth unitary path.
MatrixPath exp_path(const Matrix& h) {
  const Complex i(0.0, 1.0);
  return MatrixPath::smooth([h, i](double t) { return expm(i * t * h); },
                            [h, i](double t) { Matrix m = i * h * expm(i * t * h); return m; });
}

}  // namespace

TEST_CASE("closed form on segments") {
  const TracialMatrix a = TracialMatrix::identity(4);
  CHECK(dhs_linear(a, a).value == 0.0);
  for (double phi : {-1.0, -0.3, 0.2, 1.0}) {
    const TracialMatrix b = std::polar(1.0, phi) * a;
    CHECK(dhs_linear(a, b).value == doctest::Approx(phi / (2.0 * kPi)).epsilon(1e-14));
  }
  try {
    dhs_linear(a, Complex(-1.0) * a);
    FAIL("expected SegmentNotInvertible");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SegmentNotInvertible);
  }
}

TEST_CASE("closed form agrees with quadrature") {
  CounterRng rng(77);
  const Complex i(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 7;
    const TracialMatrix a = random_unitary(n, rng);
    // x = exp(iH) with ||x - 1|| = 2 sin(||H|| / 2) = 0.5
    const double theta = 2.0 * std::asin(0.25);
    const TracialMatrix x(expm(i * scaled_hermitian(n, theta, rng)));
    CHECK(operator_norm(x - TracialMatrix::identity(n)) == doctest::Approx(0.5).epsilon(1e-10));
    const TracialMatrix b = x * a;
    const DhsValue closed = dhs_linear(a, b);
    const DhsValue quad = dhs_quadrature(MatrixPath::linear(a, b), 1e-11);
    CHECK(std::abs(closed.value - quad.value) <= 1e-9);
    CHECK(closed.imaginary_residual <= 1e-12);
  }
}

TEST_CASE("quadrature on loops and constant paths") {
  const Complex i(0.0, 1.0);
  const int n = 3;
  const MatrixPath loop = MatrixPath::smooth(
      [&](double t) -> Matrix { return std::exp(2.0 * kPi * i * t) * Matrix::Identity(n, n); },
      [&](double t) -> Matrix { return 2.0 * kPi * i * std::exp(2.0 * kPi * i * t) * Matrix::Identity(n, n); });
  CHECK(std::abs(dhs_quadrature(loop).value - 1.0) <= 1e-10);

  const TracialMatrix c = TracialMatrix::identity(2);
  CHECK(dhs_quadrature(MatrixPath::linear(c, c)).value == 0.0);

  // Sampled polygon through points of exp(iHt): matches the closed forms of
  // its segments.
  CounterRng rng(8);
  const Matrix h = scaled_hermitian(4, 1.0, rng);
  std::vector<std::pair<double, TracialMatrix>> samples;
  for (int k = 0; k <= 4; ++k) samples.emplace_back(k / 4.0, TracialMatrix(expm(i * (k / 4.0) * h)));
  double expected = 0.0;
  for (int k = 0; k < 4; ++k) expected += dhs_linear(samples[k].second, samples[k + 1].second).value;
  CHECK(std::abs(dhs_quadrature(MatrixPath::sampled(samples)).value - expected) <= 1e-9);
}

TEST_CASE("sampled paths are validated") {
  const TracialMatrix a = TracialMatrix::identity(2);
  CHECK_THROWS_AS(MatrixPath::sampled({{0.0, a}, {0.5, a}}), Error);
  CHECK_THROWS_AS(MatrixPath::sampled({{0.0, a}, {0.6, a}, {0.4, a}, {1.0, a}}), Error);
  CHECK_THROWS_AS(MatrixPath::sampled({{0.0, a}, {1.0, TracialMatrix::zero(2)}}), Error);
}

TEST_CASE("additivity under pointwise products") {
  CounterRng rng(12);
  const Complex i(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + trial % 4;
    const Matrix h1 = scaled_hermitian(n, 0.8, rng);
    const Matrix h2 = scaled_hermitian(n, 0.8, rng);
    const MatrixPath p1 = exp_path(h1);
    const MatrixPath p2 = exp_path(h2);
    const MatrixPath prod = MatrixPath::smooth(
        [&](double t) -> Matrix { return p1.value(t) * p2.value(t); },
        [&](double t) -> Matrix {
          return p1.derivative(t) * p2.value(t) + p1.value(t) * p2.derivative(t);
        });
    const double lhs = dhs_quadrature(prod, 1e-11).value;
    const double rhs = dhs_quadrature(p1, 1e-11).value + dhs_quadrature(p2, 1e-11).value;
    CHECK(std::abs(lhs - rhs) <= 1e-9);
    // exp(itH) has Delta = tr(H) / (2 pi n)
    CHECK(std::abs(dhs_quadrature(p1, 1e-11).value - h1.trace().real() / (2.0 * kPi * n)) <= 1e-9);
  }
}

TEST_CASE("reparameterization invariance") {
  CounterRng rng(14);
  for (int trial = 0; trial < 20; ++trial) {
    const TracialMatrix a = random_unitary(4, rng);
    const TracialMatrix b = TracialMatrix(expm(Complex(0.0, 1.0) * scaled_hermitian(4, 0.9, rng))) * a;
    const Matrix step = (b - a).entries();
    // phi(t) = t - sin(2 pi t) / (4 pi), increasing with phi(0) = 0, phi(1) = 1
    auto phi = [](double t) { return t - std::sin(2.0 * kPi * t) / (4.0 * kPi); };
    auto dphi = [](double t) { return 1.0 - 0.5 * std::cos(2.0 * kPi * t); };
    const MatrixPath warped = MatrixPath::smooth(
        [&](double t) -> Matrix { return (1.0 - phi(t)) * a.entries() + phi(t) * b.entries(); },
        [&](double t) -> Matrix { return dphi(t) * step; });
    CHECK(std::abs(dhs_quadrature(warped, 1e-11).value - dhs_linear(a, b).value) <= 1e-9);
  }
}

TEST_CASE("quadrature stalls on a non-integrable integrand") {
  const MatrixPath noisy = MatrixPath::smooth(
      [](double) -> Matrix { return Matrix::Identity(1, 1); },
      [](double t) -> Matrix {
        // sign flips driven by the bits of t: no interval looks smooth
        CounterRng rng(std::bit_cast<std::uint64_t>(t));
        return Matrix::Constant(1, 1, rng() % 2 ? 1.0 : -1.0);
      });
  try {
    dhs_quadrature(noisy, 1e-14);
    FAIL("expected QuadratureStall");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::QuadratureStall);
  }
}

TEST_CASE("winding invariant") {
  CHECK(std::abs(winding_invariant(identity_tuple(2, 3))) <= 1e-15);
  CHECK(std::abs(winding_invariant(perturbed_commuting_tuple(1, 6, 0.0, 4))) <= 1e-14);
  CHECK(std::abs(winding_invariant(clock_shift_tuple(5, 1)) + 0.2) <= 1e-12);
  CHECK(std::abs(winding_invariant(clock_shift_tuple(5, 2)) + 0.4) <= 1e-12);
  try {
    winding_invariant(clock_shift_tuple(2, 1));
    FAIL("expected BranchCutHit");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BranchCutHit);
  }
}

TEST_CASE("quantization of dim times winding") {
  for (int trial = 0; trial < 100; ++trial) {
    const int g = 1 + trial % 3;
    const UnitaryTuple t = perturbed_commuting_tuple(g, 4 + trial % 9, 0.2,
                                                     static_cast<std::uint64_t>(1000 + trial));
    if (commutator_defect(t) >= 1.0) continue;
    const double scaled = t.dim() * winding_invariant(t);
    CHECK(std::abs(scaled - std::round(scaled)) <= 1e-8);
  }
}
