#include "wlp/expression.hpp"

#include <algorithm>
#include <optional>
#include <string>

#include "wlp/error.hpp"

namespace wlp {

struct Expression::Node {
  Kind kind;
  std::size_t index = 0;
  double value = 0.0;
  std::optional<Expression> left;
  std::optional<Expression> right;
  std::size_t arity = 0;
  std::size_t depth = 1;
  std::size_t nodes = 1;
};

Expression Expression::projection(std::size_t index) {
  if (index == 0) throw DomainError("projection index must be at least 1");
  auto node = std::make_shared<Node>();
  node->kind = Kind::kProjection;
  node->index = index;
  node->arity = index;
  return Expression(std::move(node));
}

Expression Expression::constant(double value) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::kConstant;
  node->value = value;
  return Expression(std::move(node));
}

Expression Expression::meet(Expression left, Expression right) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::kMeet;
  node->arity = std::max(left.arity(), right.arity());
  node->depth = 1 + std::max(left.depth(), right.depth());
  node->nodes = 1 + left.node_count() + right.node_count();
  node->left = std::move(left);
  node->right = std::move(right);
  return Expression(std::move(node));
}

Expression Expression::join(Expression left, Expression right) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::kJoin;
  node->arity = std::max(left.arity(), right.arity());
  node->depth = 1 + std::max(left.depth(), right.depth());
  node->nodes = 1 + left.node_count() + right.node_count();
  node->left = std::move(left);
  node->right = std::move(right);
  return Expression(std::move(node));
}

Expression::Kind Expression::kind() const { return node_->kind; }
std::size_t Expression::index() const { return node_->index; }
double Expression::value() const { return node_->value; }
const Expression& Expression::left() const { return *node_->left; }
const Expression& Expression::right() const { return *node_->right; }
std::size_t Expression::arity() const { return node_->arity; }
std::size_t Expression::depth() const { return node_->depth; }
std::size_t Expression::node_count() const { return node_->nodes; }

bool operator==(const Expression& a, const Expression& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Expression::Kind::kProjection:
      return a.index() == b.index();
    case Expression::Kind::kConstant:
      return a.value() == b.value();
    default:
      return a.left() == b.left() && a.right() == b.right();
  }
}

namespace {

double eval_node(const Expression& e, std::span<const double> x) {
  switch (e.kind()) {
    case Expression::Kind::kProjection:
      return x[e.index() - 1];
    case Expression::Kind::kConstant:
      return e.value();
    case Expression::Kind::kMeet:
      return std::min(eval_node(e.left(), x), eval_node(e.right(), x));
    case Expression::Kind::kJoin:
      return std::max(eval_node(e.left(), x), eval_node(e.right(), x));
  }
  return 0.0;
}

}  // namespace

double eval_ast(const Expression& expr, std::span<const double> x) {
  if (x.size() < expr.arity()) {
    throw ArityError("expression uses x" + std::to_string(expr.arity()) + " but only " +
                     std::to_string(x.size()) + " values were supplied");
  }
  return eval_node(expr, x);
}

}  // namespace wlp
