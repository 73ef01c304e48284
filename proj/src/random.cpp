#include "qrep/random.hpp"

#include <cmath>
#include <numbers>

namespace qrep {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t splitmix_finalize(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(splitmix_finalize(seed + kGolden) ^ splitmix_finalize(~stream * kGolden)) {}

CounterRng::result_type CounterRng::operator()() {
  ++counter_;
  return splitmix_finalize(key_ + counter_ * kGolden);
}

double uniform01(CounterRng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double standard_normal(CounterRng& rng) {
  // Box-Muller; the sine branch is discarded to keep the stream stateless.
  double u1 = uniform01(rng);
  while (u1 <= 0.0) u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Matrix random_hermitian(int dim, CounterRng& rng) {
  Matrix g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = Complex(standard_normal(rng), standard_normal(rng));
  return 0.5 * (g + g.adjoint());
}

TracialMatrix random_unitary(int dim, CounterRng& rng) {
  Matrix g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = Complex(standard_normal(rng), standard_normal(rng));
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    const Complex d = r(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
  }
  return TracialMatrix(q);
}

}  // namespace qrep
