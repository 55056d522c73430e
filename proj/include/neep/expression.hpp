#ifndef NEEP_EXPRESSION_HPP
#define NEEP_EXPRESSION_HPP

#include <cmath>
#include <cstdio>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "neep/symbols.hpp"

namespace neep {

// Division guard from the protected-evaluation scheme: x / (y + kDivEps).
inline constexpr double kDivEps = 1e-100;

// Arity-correct operator/terminal tree; the phenotype evaluated on data.
// Constant leaves never appear in search alphabets; they exist so benchmark
// target functions can be expressed as trees.
struct ExpressionTree {
  enum class NodeKind { function, variable, constant };

  NodeKind kind = NodeKind::constant;
  Op op = Op::add;
  int var = 0;
  double value = 0.0;
  std::vector<ExpressionTree> children;

  static ExpressionTree function(Op op, std::vector<ExpressionTree> kids) {
    if (static_cast<int>(kids.size()) != arity(op))
      throw std::invalid_argument("child count does not match operator arity");
    ExpressionTree t;
    t.kind = NodeKind::function;
    t.op = op;
    t.children = std::move(kids);
    return t;
  }

  static ExpressionTree variable(int index) {
    ExpressionTree t;
    t.kind = NodeKind::variable;
    t.var = index;
    return t;
  }

  static ExpressionTree constant(double v) {
    ExpressionTree t;
    t.kind = NodeKind::constant;
    t.value = v;
    return t;
  }

  static ExpressionTree leaf(Symbol const& s) {
    if (!s.is_terminal())
      throw std::invalid_argument("leaf symbol must be a terminal");
    return variable(s.var);
  }

  std::size_t node_count() const {
    std::size_t n = 1;
    for (auto const& c : children) n += c.node_count();
    return n;
  }

  std::size_t leaf_count() const {
    if (children.empty()) return 1;
    std::size_t n = 0;
    for (auto const& c : children) n += c.leaf_count();
    return n;
  }
};

namespace detail {

inline double apply_protected(Op op, double a, double b) {
  switch (op) {
    case Op::add: return a + b;
    case Op::sub: return a - b;
    case Op::mul: return a * b;
    case Op::div: return a / (b + kDivEps);
    case Op::sin: return std::sin(a);
    case Op::cos: return std::cos(a);
    case Op::exp: return std::exp(a);
    case Op::log: return std::log(std::fabs(a));
    case Op::sqrt: return std::sqrt(std::fabs(a));
  }
  return 0.0;
}

inline double apply_unprotected(Op op, double a, double b) {
  switch (op) {
    case Op::add: return a + b;
    case Op::sub: return a - b;
    case Op::mul: return a * b;
    case Op::div: return a / b;
    case Op::sin: return std::sin(a);
    case Op::cos: return std::cos(a);
    case Op::exp: return std::exp(a);
    case Op::log: return std::log(a);
    case Op::sqrt: return std::sqrt(a);
  }
  return 0.0;
}

}  // namespace detail

// Protected recursive evaluation. Division is x/(y+eps), ln and sqrt take
// |n|; exp is unprotected, so results may be non-finite and are returned
// as-is.
inline double eval_node(ExpressionTree const& tree, std::span<double const> point) {
  switch (tree.kind) {
    case ExpressionTree::NodeKind::constant:
      return tree.value;
    case ExpressionTree::NodeKind::variable:
      if (tree.var < 0 || static_cast<std::size_t>(tree.var) >= point.size())
        throw std::invalid_argument("evaluation point has too few coordinates");
      return point[static_cast<std::size_t>(tree.var)];
    case ExpressionTree::NodeKind::function: {
      double a = eval_node(tree.children[0], point);
      double b = tree.children.size() > 1 ? eval_node(tree.children[1], point) : 0.0;
      return detail::apply_protected(tree.op, a, b);
    }
  }
  return 0.0;
}

// Unprotected evaluation; used for closed-form benchmark targets where exact
// zero denominators are rejected upstream by resampling.
inline double eval_node_unprotected(ExpressionTree const& tree,
                                    std::span<double const> point) {
  switch (tree.kind) {
    case ExpressionTree::NodeKind::constant:
      return tree.value;
    case ExpressionTree::NodeKind::variable:
      if (tree.var < 0 || static_cast<std::size_t>(tree.var) >= point.size())
        throw std::invalid_argument("evaluation point has too few coordinates");
      return point[static_cast<std::size_t>(tree.var)];
    case ExpressionTree::NodeKind::function: {
      double a = eval_node_unprotected(tree.children[0], point);
      double b = tree.children.size() > 1
                     ? eval_node_unprotected(tree.children[1], point)
                     : 0.0;
      return detail::apply_unprotected(tree.op, a, b);
    }
  }
  return 0.0;
}

namespace detail {

inline std::string format_constant(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

inline std::string infix(ExpressionTree const& t,
                         std::span<std::string const> names, bool outer);

inline std::string leaf_text(ExpressionTree const& t,
                             std::span<std::string const> names) {
  if (t.kind == ExpressionTree::NodeKind::constant) return format_constant(t.value);
  if (static_cast<std::size_t>(t.var) < names.size())
    return names[static_cast<std::size_t>(t.var)];
  return "x" + std::to_string(t.var + 1);
}

inline std::string infix(ExpressionTree const& t,
                         std::span<std::string const> names, bool outer) {
  if (t.kind != ExpressionTree::NodeKind::function) return leaf_text(t, names);
  if (arity(t.op) == 1)
    return std::string(name(t.op)) + "(" + infix(t.children[0], names, true) + ")";
  std::string body = infix(t.children[0], names, false) + std::string(name(t.op)) +
                     infix(t.children[1], names, false);
  return outer ? body : "(" + body + ")";
}

}  // namespace detail

// Infix form with explicit parentheses, e.g. sqrt(((x*y)-x)+(x*sin(y))).
// Function-call and outermost parentheses absorb one wrapping level.
inline std::string to_infix(ExpressionTree const& tree,
                            std::span<std::string const> variable_names = {}) {
  return detail::infix(tree, variable_names, true);
}

inline std::string to_infix(ExpressionTree const& tree, Alphabet const& alphabet) {
  std::vector<std::string> names;
  names.reserve(alphabet.n_terminals());
  for (std::size_t v = 0; v < alphabet.n_terminals(); ++v)
    names.push_back(alphabet.variable_name(static_cast<int>(v)));
  return to_infix(tree, names);
}

}  // namespace neep

#endif  // NEEP_EXPRESSION_HPP
