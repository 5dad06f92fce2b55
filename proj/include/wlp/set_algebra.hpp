#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "wlp/subset.hpp"

namespace wlp {

/// Real-valued set function on 2^[n], indexed by subset bitmask.
class RealSetFunction {
 public:
  RealSetFunction() = default;
  /// All-zero table of arity n.
  explicit RealSetFunction(std::size_t arity);
  /// Throws ArityError on a wrong-sized table, DomainError on non-finite entries.
  RealSetFunction(std::size_t arity, std::vector<double> table);

  std::size_t arity() const { return arity_; }
  std::size_t size() const { return table_.size(); }
  double operator[](Subset s) const { return table_[s]; }
  double& operator[](Subset s) { return table_[s]; }
  std::span<const double> table() const { return table_; }

 private:
  std::size_t arity_ = 0;
  std::vector<double> table_{0.0};
};

/// m(S) = sum over T subset of S of (-1)^{|S|-|T|} f(T), in O(n 2^n).
RealSetFunction mobius_transform(const RealSetFunction& f);

/// f(S) = sum over T subset of S of m(T); the inverse of mobius_transform.
RealSetFunction zeta_transform(const RealSetFunction& m);

}  // namespace wlp
