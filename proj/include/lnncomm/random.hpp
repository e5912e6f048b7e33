#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace lnncomm {

using Rng = std::mt19937_64;

/// Mixes a base seed with up to two stream indices (splitmix64 finalizer), so
/// restarts, layers and samples each get an independent, reproducible stream.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream = 0) noexcept;

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0, std::uint64_t substream = 0) {
  return Rng(derive_seed(seed, stream, substream));
}

/// Draws from N(mean, variance). The second parameter is a variance throughout
/// the library.
inline double normal_variance(Rng& rng, double mean, double variance) {
  if (variance == 0.0) return mean;
  std::normal_distribution<double> dist(mean, std::sqrt(variance));
  return dist(rng);
}

}  // namespace lnncomm
