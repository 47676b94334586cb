#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <random>

namespace debias {

/// Role of a substream inside one replication. Distinct roles never share draws.
enum class StreamRole : std::uint32_t { chain = 0, coin = 1, bias = 2 };

/// Seeded source of uniform, normal and exponential variates.
///
/// Substreams are keyed by a path of integers (replication index, role, ...)
/// hashed with the base seed through std::seed_seq into one engine seed, so two
/// sources built from the same key replay the same sequence.
class RandomSource {
 public:
  using result_type = std::mt19937_64::result_type;

  explicit RandomSource(std::uint64_t seed);
  RandomSource(std::uint64_t seed, std::initializer_list<std::uint64_t> path);

  static RandomSource substream(std::uint64_t seed, std::uint64_t replication,
                                StreamRole role);

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform() { return uniform_(engine_); }
  double normal() { return normal_(engine_); }
  double exponential(double rate) {
    return std::exponential_distribution<double>(rate)(engine_);
  }

 private:
  std::mt19937_64 engine_;
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Mixes a seed with a path into a fresh 64-bit seed.
std::uint64_t derive_seed(std::uint64_t seed,
                          std::initializer_list<std::uint64_t> path);

}  // namespace debias
