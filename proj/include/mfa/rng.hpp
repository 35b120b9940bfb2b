#pragma once

#include <cstdint>

namespace mfa {

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

/// Seed of the k-th independent substream under a master seed. Depends only on
/// (master, k), never on scheduling order.
constexpr std::uint64_t substream_seed(std::uint64_t master, std::uint64_t k) {
  return mix64(master ^ mix64((k + 1) * kGolden));
}

/// Counter-based stream: draw n is mix64(key + n * golden). Uniform doubles
/// are built from the top 53 bits so values are identical on every platform.
class CounterRng {
 public:
  explicit constexpr CounterRng(std::uint64_t key) : key_(key) {}

  constexpr std::uint64_t next() { return mix64(key_ + (++counter_) * kGolden); }

  /// Uniform on [0, 1).
  constexpr double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  /// Uniform on [lo, hi).
  constexpr double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  constexpr std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace mfa
