#pragma once

#include <cstdint>
#include <limits>

#include "qrep/matcore.hpp"

namespace qrep {

/// Counter-based generator: the i-th output is SplitMix64 finalization of
/// key + (i + 1) * golden, where key is derived from (seed, stream). The
/// state is just the counter, so independent streams never interact.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Uniform double in [0, 1) from the top 53 bits.
double uniform01(CounterRng& rng);
double standard_normal(CounterRng& rng);

/// Hermitian matrix with i.i.d. complex Gaussian entries (GUE-like).
Matrix random_hermitian(int dim, CounterRng& rng);

/// Haar-distributed unitary (QR of a complex Ginibre matrix, phase fixed).
TracialMatrix random_unitary(int dim, CounterRng& rng);

}  // namespace qrep
