#pragma once

#include <cstdint>

namespace geonet {

using Seed = std::uint64_t;

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Per-trial seed for sweep point `point`, trial `trial`.
///
/// Defined as splitmix64(splitmix64(splitmix64(base) ^ point) ^ ~trial), so it
/// only depends on 64-bit integer arithmetic and is identical on every
/// platform.
constexpr Seed derive_seed(Seed base, std::uint64_t point, std::uint64_t trial) noexcept {
  return splitmix64(splitmix64(splitmix64(base) ^ point) ^ ~trial);
}

/// Named sub-streams so that independent consumers of one seed never share draws.
enum class Stream : std::uint64_t {
  points = 1,
  count = 2,
  failures = 3,
  thresholds = 4,
  seed_node = 5,
  marks = 6,
};

/// Counter-based uniform stream: the i-th draw is a pure function of
/// (seed, stream, i), so draws can be taken in any order or in parallel.
class CounterStream {
 public:
  constexpr CounterStream(Seed seed, Stream stream) noexcept
      : key_(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(stream)))) {}

  constexpr std::uint64_t bits(std::uint64_t index) const noexcept {
    return splitmix64(key_ + index * 0xd1b54a32d192ed03ULL);
  }

  /// Uniform on the open interval (0, 1).
  constexpr double uniform(std::uint64_t index) const noexcept {
    return (static_cast<double>(bits(index) >> 11) + 0.5) * 0x1p-53;
  }

  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t index, std::uint64_t bound) const noexcept {
    return static_cast<std::uint64_t>(uniform(index) * static_cast<double>(bound)) % bound;
  }

 private:
  std::uint64_t key_;
};

}  // namespace geonet
