#ifndef NEEP_SYMBOLS_HPP
#define NEEP_SYMBOLS_HPP

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace neep {

enum class Op : int { add, sub, mul, div, sin, cos, exp, log, sqrt };

constexpr int arity(Op op) {
  switch (op) {
    case Op::add:
    case Op::sub:
    case Op::mul:
    case Op::div:
      return 2;
    case Op::sin:
    case Op::cos:
    case Op::exp:
    case Op::log:
    case Op::sqrt:
      return 1;
  }
  return 0;
}

constexpr std::string_view name(Op op) {
  switch (op) {
    case Op::add: return "+";
    case Op::sub: return "-";
    case Op::mul: return "*";
    case Op::div: return "/";
    case Op::sin: return "sin";
    case Op::cos: return "cos";
    case Op::exp: return "exp";
    case Op::log: return "ln";
    case Op::sqrt: return "sqrt";
  }
  return "?";
}

enum class SymbolKind { function, terminal };

// One alphabet entry: either a function operator or a terminal variable.
struct Symbol {
  SymbolKind kind;
  Op op = Op::add;  // meaningful when kind == function
  int var = 0;      // variable index, meaningful when kind == terminal

  static Symbol function(Op op) { return Symbol{SymbolKind::function, op, 0}; }
  static Symbol variable(int index) {
    return Symbol{SymbolKind::terminal, Op::add, index};
  }

  bool is_terminal() const { return kind == SymbolKind::terminal; }

  friend bool operator==(Symbol const& a, Symbol const& b) {
    if (a.kind != b.kind) return false;
    return a.is_terminal() ? a.var == b.var : a.op == b.op;
  }
};

inline int arity(Symbol const& s) {
  return s.is_terminal() ? 0 : arity(s.op);
}

// Ordered function + terminal sets. The ordering is fixed for a run: it
// defines output-neuron indices and argmax tie-breaking.
class Alphabet {
 public:
  Alphabet(std::vector<Op> functions, std::vector<std::string> variable_names)
      : variable_names_(std::move(variable_names)) {
    if (variable_names_.empty())
      throw std::invalid_argument("alphabet needs at least one terminal");
    functions_.reserve(functions.size());
    for (Op op : functions) functions_.push_back(Symbol::function(op));
    for (int v = 0; v < static_cast<int>(variable_names_.size()); ++v)
      terminals_.push_back(Symbol::variable(v));
  }

  Alphabet(std::vector<Op> functions, int n_vars)
      : Alphabet(std::move(functions), default_names(n_vars)) {}

  std::vector<Symbol> const& functions() const { return functions_; }
  std::vector<Symbol> const& terminals() const { return terminals_; }
  std::size_t n_functions() const { return functions_.size(); }
  std::size_t n_terminals() const { return terminals_.size(); }
  std::size_t size() const { return functions_.size() + terminals_.size(); }

  // Combined index: functions first, then terminals.
  Symbol const& symbol_at(std::size_t i) const {
    if (i < functions_.size()) return functions_[i];
    i -= functions_.size();
    if (i < terminals_.size()) return terminals_[i];
    throw std::out_of_range("alphabet symbol index out of range");
  }

  int max_arity() const {
    int m = 1;
    for (auto const& f : functions_) m = std::max(m, arity(f));
    return m;
  }

  std::string const& variable_name(int index) const {
    if (index < 0 || index >= static_cast<int>(variable_names_.size()))
      throw std::out_of_range("variable index out of range");
    return variable_names_[static_cast<std::size_t>(index)];
  }

  std::string symbol_name(Symbol const& s) const {
    return s.is_terminal() ? variable_name(s.var) : std::string(name(s.op));
  }

  // Token lookup: functions first, then variable names. Returns false when
  // the token names no symbol in this alphabet.
  bool lookup(std::string_view token, Symbol& out) const {
    for (auto const& f : functions_)
      if (name(f.op) == token) {
        out = f;
        return true;
      }
    for (std::size_t v = 0; v < variable_names_.size(); ++v)
      if (variable_names_[v] == token) {
        out = terminals_[v];
        return true;
      }
    return false;
  }

  static std::vector<std::string> default_names(int n_vars) {
    if (n_vars < 1)
      throw std::invalid_argument("alphabet needs at least one terminal");
    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(n_vars));
    for (int i = 1; i <= n_vars; ++i) names.push_back("x" + std::to_string(i));
    return names;
  }

 private:
  std::vector<Symbol> functions_;
  std::vector<Symbol> terminals_;
  std::vector<std::string> variable_names_;
};

// {+, -, *, /}
inline std::vector<Op> function_set_a() {
  return {Op::add, Op::sub, Op::mul, Op::div};
}

// {+, -, *, /, sin, cos, exp, ln}
inline std::vector<Op> function_set_b() {
  return {Op::add, Op::sub, Op::mul, Op::div, Op::sin, Op::cos, Op::exp, Op::log};
}

// Set B plus sqrt; used for decoding genes that carry sqrt.
inline std::vector<Op> function_set_full() {
  auto ops = function_set_b();
  ops.push_back(Op::sqrt);
  return ops;
}

}  // namespace neep

#endif  // NEEP_SYMBOLS_HPP
