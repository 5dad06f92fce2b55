#include "wlp/set_algebra.hpp"

#include <cmath>
#include <string>

#include "wlp/error.hpp"

namespace wlp {

RealSetFunction::RealSetFunction(std::size_t arity)
    : arity_(arity), table_(subset_count(arity), 0.0) {
  if (arity > kHardMaxArity) throw ArityError("set function arity too large");
}

RealSetFunction::RealSetFunction(std::size_t arity, std::vector<double> table)
    : arity_(arity), table_(std::move(table)) {
  if (arity > kHardMaxArity) throw ArityError("set function arity too large");
  if (table_.size() != subset_count(arity)) {
    throw ArityError("real set function of arity " + std::to_string(arity) + " needs " +
                     std::to_string(subset_count(arity)) + " entries, got " +
                     std::to_string(table_.size()));
  }
  for (double v : table_) {
    if (!std::isfinite(v)) throw DomainError("real set function entries must be finite");
  }
}

namespace {

// Yates-style sweep: one pass per element, combining each S containing i
// with S \ {i}.
RealSetFunction sweep(const RealSetFunction& in, double sign) {
  RealSetFunction out = in;
  const std::size_t count = in.size();
  for (std::size_t i = 0; i < in.arity(); ++i) {
    const Subset bit = Subset{1} << i;
    for (Subset s = 0; s < count; ++s) {
      if (s & bit) out[s] += sign * out[s ^ bit];
    }
  }
  return out;
}

}  // namespace

RealSetFunction mobius_transform(const RealSetFunction& f) { return sweep(f, -1.0); }

RealSetFunction zeta_transform(const RealSetFunction& m) { return sweep(m, 1.0); }

}  // namespace wlp
