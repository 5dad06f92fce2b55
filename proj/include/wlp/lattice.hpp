#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "wlp/expression.hpp"
#include "wlp/subset.hpp"

namespace wlp {

/// Totally ordered carrier [bottom, top] inside the extended reals.
class LatticeDomain {
 public:
  /// Throws DomainError unless bottom < top (NaN rejected).
  LatticeDomain(double bottom, double top);

  static LatticeDomain extended_reals();

  double bottom() const { return bottom_; }
  double top() const { return top_; }
  bool contains(double v) const { return v >= bottom_ && v <= top_; }

  friend bool operator==(const LatticeDomain&, const LatticeDomain&) = default;

 private:
  double bottom_;
  double top_;
};

/// A table of lattice values over all 2^n subsets of [n], indexed by bitmask.
class SetFunction {
 public:
  /// Throws ArityError for arity outside [1, max_arity] or a table of the
  /// wrong size, DomainError for values outside the domain.
  SetFunction(LatticeDomain domain, std::size_t arity, std::vector<double> table,
              std::size_t max_arity = kDefaultMaxArity);

  const LatticeDomain& domain() const { return domain_; }
  std::size_t arity() const { return arity_; }
  double operator[](Subset s) const { return table_[s]; }
  std::span<const double> table() const { return table_; }

  /// S subset of T implies w(S) <= w(T), checked over all covering pairs.
  bool is_nondecreasing() const;

  /// Copy with one entry replaced (the value must still be in the domain).
  SetFunction with_entry(Subset s, double value) const;

 private:
  LatticeDomain domain_;
  std::size_t arity_;
  std::vector<double> table_;
};

/// The n-tuple with beta at the positions in s and alpha elsewhere.
std::vector<double> characteristic_vector(Subset s, std::size_t n, double alpha, double beta);

/// Disjunctive normal form: join over S of [ w(S) meet (meet of x_i, i in S) ].
/// Accepts any table, monotone or not.
double eval_dnf(const SetFunction& w, std::span<const double> x);

/// w(S) = p(e_S^{a,b}) for every S. `arity` 0 means max(1, expr.arity()).
SetFunction canonical_set_function(const Expression& expr, const LatticeDomain& domain,
                                   std::size_t arity = 0,
                                   std::size_t max_arity = kDefaultMaxArity);

/// Range inside {a, b} with w(empty) = a and w([n]) = b.
bool is_lattice_polynomial(const SetFunction& w);

/// w(empty) = a and w([n]) = b.
bool is_sugeno_integral(const SetFunction& w);

/// k-th smallest component of x, with f_0 = a and f_{n+1} = b.
double order_statistic(std::size_t k, std::span<const double> x, const LatticeDomain& domain);

/// m(s) = w(S) for |S| = s when w depends only on |S| and m is nondecreasing.
std::optional<std::vector<double>> cardinality_profile(const SetFunction& w);

/// join over s of [ m(s) meet f_{n-s+1}(x) ]; m must be nondecreasing with n+1 entries.
double symmetric_decomposition_eval(std::span<const double> m, std::span<const double> x,
                                    const LatticeDomain& domain);

/// The cardinality-based set function w(S) = m(|S|).
SetFunction set_function_from_profile(std::span<const double> m, const LatticeDomain& domain);

/// Syntax tree of the k-th order statistic function of n variables
/// (a constant for k = 0 or k = n + 1).
Expression order_statistic_expression(std::size_t k, std::size_t n, const LatticeDomain& domain);

/// Syntax tree of the symmetric polynomial join_s [ m(s) meet f_{n-s+1} ].
Expression symmetric_expression(std::span<const double> m, const LatticeDomain& domain);

}  // namespace wlp
