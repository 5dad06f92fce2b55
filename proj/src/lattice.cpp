#include "wlp/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "wlp/error.hpp"

namespace wlp {

namespace {

void check_arity(std::size_t arity, std::size_t max_arity) {
  const std::size_t ceiling = std::min(max_arity, kHardMaxArity);
  if (arity == 0 || arity > ceiling) {
    throw ArityError("arity " + std::to_string(arity) + " outside [1, " +
                     std::to_string(ceiling) + "]");
  }
}

void check_values(const LatticeDomain& domain, std::span<const double> x, const char* what) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!domain.contains(x[i])) {
      throw DomainError(std::string(what) + " " + std::to_string(i + 1) + " = " +
                        std::to_string(x[i]) + " lies outside the lattice domain");
    }
  }
}

void check_nondecreasing_profile(std::span<const double> m) {
  for (std::size_t s = 1; s < m.size(); ++s) {
    if (!(m[s - 1] <= m[s])) throw DomainError("profile m must be nondecreasing");
  }
}

}  // namespace

LatticeDomain::LatticeDomain(double bottom, double top) : bottom_(bottom), top_(top) {
  if (!(bottom < top)) throw DomainError("lattice domain requires bottom < top");
}

LatticeDomain LatticeDomain::extended_reals() {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return LatticeDomain(-inf, inf);
}

SetFunction::SetFunction(LatticeDomain domain, std::size_t arity, std::vector<double> table,
                         std::size_t max_arity)
    : domain_(domain), arity_(arity), table_(std::move(table)) {
  check_arity(arity, max_arity);
  if (table_.size() != subset_count(arity)) {
    throw ArityError("set function of arity " + std::to_string(arity) + " needs " +
                     std::to_string(subset_count(arity)) + " entries, got " +
                     std::to_string(table_.size()));
  }
  check_values(domain_, table_, "set function entry");
}

bool SetFunction::is_nondecreasing() const {
  // Covering pairs S < S + {i} suffice by transitivity.
  for (Subset s = 0; s < table_.size(); ++s) {
    for (std::size_t i = 0; i < arity_; ++i) {
      const Subset bit = Subset{1} << i;
      if ((s & bit) == 0 && table_[s] > table_[s | bit]) return false;
    }
  }
  return true;
}

SetFunction SetFunction::with_entry(Subset s, double value) const {
  std::vector<double> copy = table_;
  copy.at(s) = value;
  return SetFunction(domain_, arity_, std::move(copy), kHardMaxArity);
}

std::vector<double> characteristic_vector(Subset s, std::size_t n, double alpha, double beta) {
  std::vector<double> v(n, alpha);
  for (std::size_t i = 1; i <= n; ++i) {
    if (contains(s, i)) v[i - 1] = beta;
  }
  return v;
}

double eval_dnf(const SetFunction& w, std::span<const double> x) {
  const std::size_t n = w.arity();
  if (x.size() != n) {
    throw ArityError("eval_dnf: expected " + std::to_string(n) + " arguments, got " +
                     std::to_string(x.size()));
  }
  check_values(w.domain(), x, "argument");

  // meets[S] = meet of x_i over i in S, built from S minus its lowest element.
  std::vector<double> meets(subset_count(n));
  meets[0] = w.domain().top();
  double result = std::min(w[0], meets[0]);
  for (Subset s = 1; s < meets.size(); ++s) {
    const unsigned low = static_cast<unsigned>(std::countr_zero(s));
    meets[s] = std::min(meets[s & (s - 1)], x[low]);
    result = std::max(result, std::min(w[s], meets[s]));
  }
  return std::max(result, w.domain().bottom());
}

SetFunction canonical_set_function(const Expression& expr, const LatticeDomain& domain,
                                   std::size_t arity, std::size_t max_arity) {
  if (arity == 0) arity = std::max<std::size_t>(1, expr.arity());
  check_arity(arity, max_arity);
  if (arity < expr.arity()) {
    throw ArityError("expression uses x" + std::to_string(expr.arity()) +
                     " but arity is " + std::to_string(arity));
  }
  std::vector<double> table(subset_count(arity));
  std::vector<double> point(arity);
  for (Subset s = 0; s < table.size(); ++s) {
    for (std::size_t i = 0; i < arity; ++i) {
      point[i] = ((s >> i) & 1u) ? domain.top() : domain.bottom();
    }
    table[s] = eval_ast(expr, point);
  }
  return SetFunction(domain, arity, std::move(table), max_arity);
}

bool is_lattice_polynomial(const SetFunction& w) {
  const double a = w.domain().bottom();
  const double b = w.domain().top();
  if (w[0] != a || w[full_set(w.arity())] != b) return false;
  return std::all_of(w.table().begin(), w.table().end(),
                     [&](double v) { return v == a || v == b; });
}

bool is_sugeno_integral(const SetFunction& w) {
  return w[0] == w.domain().bottom() && w[full_set(w.arity())] == w.domain().top();
}

double order_statistic(std::size_t k, std::span<const double> x, const LatticeDomain& domain) {
  const std::size_t n = x.size();
  if (k > n + 1) {
    throw DomainError("order statistic index " + std::to_string(k) + " outside [0, " +
                      std::to_string(n + 1) + "]");
  }
  if (k == 0) return domain.bottom();
  if (k == n + 1) return domain.top();
  std::vector<double> sorted(x.begin(), x.end());
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(k - 1),
                   sorted.end());
  return sorted[k - 1];
}

std::optional<std::vector<double>> cardinality_profile(const SetFunction& w) {
  const std::size_t n = w.arity();
  std::vector<double> m(n + 1);
  std::vector<bool> seen(n + 1, false);
  for (Subset s = 0; s < w.table().size(); ++s) {
    const unsigned c = cardinality(s);
    if (!seen[c]) {
      m[c] = w[s];
      seen[c] = true;
    } else if (m[c] != w[s]) {
      return std::nullopt;
    }
  }
  for (std::size_t s = 1; s <= n; ++s) {
    if (m[s - 1] > m[s]) return std::nullopt;
  }
  return m;
}

double symmetric_decomposition_eval(std::span<const double> m, std::span<const double> x,
                                    const LatticeDomain& domain) {
  const std::size_t n = x.size();
  if (m.size() != n + 1) {
    throw ArityError("profile needs n + 1 = " + std::to_string(n + 1) + " entries, got " +
                     std::to_string(m.size()));
  }
  check_nondecreasing_profile(m);
  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());
  // f_{n-s+1}(x) is sorted[n - s] for 1 <= s <= n; f_{n+1} = top.
  double result = std::min(m[0], domain.top());
  for (std::size_t s = 1; s <= n; ++s) {
    result = std::max(result, std::min(m[s], sorted[n - s]));
  }
  return result;
}

SetFunction set_function_from_profile(std::span<const double> m, const LatticeDomain& domain) {
  if (m.empty()) throw ArityError("profile must have at least two entries");
  const std::size_t n = m.size() - 1;
  check_arity(n, kHardMaxArity);
  check_nondecreasing_profile(m);
  std::vector<double> table(subset_count(n));
  for (Subset s = 0; s < table.size(); ++s) table[s] = m[cardinality(s)];
  return SetFunction(domain, n, std::move(table), kHardMaxArity);
}

namespace {

// Join over |S| = size of the meet of x_i, i in S.
Expression join_of_meets(std::size_t size, std::size_t n) {
  std::optional<Expression> joined;
  for (Subset s = 0; s < subset_count(n); ++s) {
    if (cardinality(s) != size) continue;
    std::optional<Expression> met;
    for (std::size_t i = 1; i <= n; ++i) {
      if (!contains(s, i)) continue;
      auto x = Expression::projection(i);
      met = met ? Expression::meet(*met, x) : x;
    }
    joined = joined ? Expression::join(*joined, *met) : *met;
  }
  return *joined;
}

}  // namespace

Expression order_statistic_expression(std::size_t k, std::size_t n, const LatticeDomain& domain) {
  if (n == 0 || k > n + 1) {
    throw DomainError("order statistic index " + std::to_string(k) + " outside [0, " +
                      std::to_string(n + 1) + "]");
  }
  if (k == 0) return Expression::constant(domain.bottom());
  if (k == n + 1) return Expression::constant(domain.top());
  return join_of_meets(n - k + 1, n);
}

Expression symmetric_expression(std::span<const double> m, const LatticeDomain& domain) {
  if (m.size() < 2) throw ArityError("profile must have at least two entries");
  check_nondecreasing_profile(m);
  check_values(domain, m, "profile entry");
  const std::size_t n = m.size() - 1;
  Expression result = Expression::constant(m[0]);
  for (std::size_t s = 1; s <= n; ++s) {
    result = Expression::join(
        result, Expression::meet(Expression::constant(m[s]), join_of_meets(s, n)));
  }
  return result;
}

}  // namespace wlp
