#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <string>

namespace wlp {

/// Subset of [n] as a bitmask: bit i-1 set means element i is a member.
using Subset = std::uint32_t;

/// Default ceiling on the number of variables; every table has 2^n entries.
inline constexpr std::size_t kDefaultMaxArity = 20;
/// Hard ceiling imposed by the 32-bit subset representation.
inline constexpr std::size_t kHardMaxArity = 30;

inline constexpr Subset full_set(std::size_t n) {
  return n == 0 ? Subset{0} : static_cast<Subset>((std::uint64_t{1} << n) - 1);
}

inline constexpr std::size_t subset_count(std::size_t n) { return std::size_t{1} << n; }

inline constexpr unsigned cardinality(Subset s) { return static_cast<unsigned>(std::popcount(s)); }

/// True if element `index` (1-based) belongs to s.
inline constexpr bool contains(Subset s, std::size_t index) { return (s >> (index - 1)) & 1u; }

inline constexpr bool is_subset_of(Subset s, Subset t) { return (s & ~t) == 0; }

/// Exact binomial coefficient; valid (no overflow) for n <= 62.
std::uint64_t binomial(unsigned n, unsigned k);

/// Renders s as "{1,3}" (1-based members, ascending).
std::string format_subset(Subset s);

}  // namespace wlp
