#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace idsbed {

/// SplitMix64 finalizer; used for all seed derivation.
std::uint64_t mix64(std::uint64_t x);

/// 64-bit FNV-1a over the bytes of `text`.
std::uint64_t fnv1a64(std::string_view text);

/// Child seed for one component of one client:
///   mix64(mix64(scenario_seed ^ fnv1a64(client_id)) + component_index).
/// Depends only on its three arguments, so editing one client never shifts the
/// stream of another.
std::uint64_t component_seed(std::uint64_t scenario_seed, std::string_view client_id,
                             std::size_t component_index);

/// Derives an independent sub-stream (movement, requests, ...) from a seed.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t tag);

/// Seeded pseudo-random stream. Draw transforms are implemented here rather
/// than with <random> distributions so output is identical across standard
/// library implementations.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform in the open interval (0, 1); safe for logarithms.
  double uniform_open() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Unbiased integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  bool coin() { return (engine_() >> 63) != 0; }

  bool bernoulli(double p) { return uniform01() < p; }

  /// Standard normal draw (Marsaglia polar method, no cached second value).
  double standard_normal();

 private:
  std::mt19937_64 engine_;
};

}  // namespace idsbed
