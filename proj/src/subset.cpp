#include "wlp/subset.hpp"

#include <string>

namespace wlp {

std::uint64_t binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t result = 1;
  // result * (n - k + i) is always divisible by i at step i.
  for (unsigned i = 1; i <= k; ++i) result = result * (n - k + i) / i;
  return result;
}

std::string format_subset(Subset s) {
  std::string out = "{";
  bool first = true;
  for (std::size_t i = 1; s != 0; ++i, s >>= 1) {
    if ((s & 1u) == 0) continue;
    if (!first) out += ',';
    out += std::to_string(i);
    first = false;
  }
  out += '}';
  return out;
}

}  // namespace wlp
