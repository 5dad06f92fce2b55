#pragma once

#include <cstddef>
#include <memory>
#include <span>

namespace wlp {

/// Immutable weighted-lattice-polynomial syntax tree: projections x_k,
/// constants, and binary meet (min) / join (max). Copies share structure.
class Expression {
 public:
  enum class Kind { kProjection, kConstant, kMeet, kJoin };

  /// x_index, with index >= 1.
  static Expression projection(std::size_t index);
  static Expression constant(double value);
  static Expression meet(Expression left, Expression right);
  static Expression join(Expression left, Expression right);

  Kind kind() const;
  /// Projection index; only meaningful for kProjection.
  std::size_t index() const;
  /// Constant value; only meaningful for kConstant.
  double value() const;
  /// Operands; only meaningful for kMeet / kJoin.
  const Expression& left() const;
  const Expression& right() const;

  /// Largest projection index in the tree (0 for a constant-only tree).
  std::size_t arity() const;
  /// Height of the tree; leaves have depth 1.
  std::size_t depth() const;
  std::size_t node_count() const;

  bool is_binary() const { return kind() == Kind::kMeet || kind() == Kind::kJoin; }

  /// Structural equality. Constants compare with ==.
  friend bool operator==(const Expression& a, const Expression& b);

 private:
  struct Node;
  explicit Expression(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Recursive min/max evaluation. Throws ArityError if x has fewer entries
/// than expr.arity().
double eval_ast(const Expression& expr, std::span<const double> x);

}  // namespace wlp
