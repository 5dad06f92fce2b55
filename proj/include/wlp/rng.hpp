#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace wlp {

/// Seeded 64-bit generator with platform-independent conversions to
/// uniform reals and indices. Copyable; copies continue the same stream.
class Generator {
 public:
  explicit Generator(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  /// Uniform on {0, ..., count - 1}; count must be positive.
  std::size_t index(std::size_t count);

 private:
  std::mt19937_64 engine_;
};

/// Seed of stream `stream` split from `master`, via a splitmix64 finalizer.
/// Distinct streams give statistically independent generators.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

}  // namespace wlp
