#ifndef NEEP_GENE_HPP
#define NEEP_GENE_HPP

#include <cstddef>
#include <deque>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "neep/expression.hpp"
#include "neep/random.hpp"
#include "neep/symbols.hpp"

namespace neep {

// Standard GEP tail sizing: t = h*(a_max - 1) + 1.
inline int tail_length(int head_len, int max_arity) {
  return head_len * (max_arity - 1) + 1;
}

// Fixed-length linear K-expression. Head may hold functions and terminals,
// tail holds terminals only; that rule plus the tail-length formula
// guarantees every gene decodes to a complete tree.
struct Gene {
  std::vector<Symbol> symbols;
  int head_len = 0;
  int tail_len = 0;

  int length() const { return static_cast<int>(symbols.size()); }
};

inline bool is_valid_gene(Gene const& gene, int max_arity) {
  if (gene.head_len < 1) return false;
  if (gene.tail_len != tail_length(gene.head_len, max_arity)) return false;
  if (gene.length() != gene.head_len + gene.tail_len) return false;
  for (int i = gene.head_len; i < gene.length(); ++i)
    if (!gene.symbols[static_cast<std::size_t>(i)].is_terminal()) return false;
  return true;
}

inline void require_valid_gene(Gene const& gene, int max_arity) {
  if (!is_valid_gene(gene, max_arity))
    throw std::invalid_argument("gene violates head/tail invariants");
}

struct GeneDecodeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Breadth-first (Karva) translation of a raw symbol sequence. The first
// symbol is the root; children are assigned in queue order until all open
// arities are filled. Trailing unused symbols are ignored. Throws when the
// sequence ends before every arity is satisfied (cannot happen for a valid
// Gene).
inline ExpressionTree decode_symbols(std::span<Symbol const> symbols,
                                     std::size_t* consumed = nullptr) {
  if (symbols.empty()) throw GeneDecodeError("empty symbol sequence");

  auto make_node = [](Symbol const& s) {
    ExpressionTree t;
    if (s.is_terminal()) {
      t = ExpressionTree::variable(s.var);
    } else {
      t.kind = ExpressionTree::NodeKind::function;
      t.op = s.op;
    }
    return t;
  };

  ExpressionTree root = make_node(symbols[0]);
  std::size_t pos = 1;
  std::deque<ExpressionTree*> queue;
  queue.push_back(&root);
  while (!queue.empty()) {
    ExpressionTree* node = queue.front();
    queue.pop_front();
    int need = node->kind == ExpressionTree::NodeKind::function ? arity(node->op) : 0;
    if (need == 0) continue;
    node->children.reserve(static_cast<std::size_t>(need));
    for (int c = 0; c < need; ++c) {
      if (pos >= symbols.size())
        throw GeneDecodeError("symbol sequence ends before all arities are filled");
      node->children.push_back(make_node(symbols[pos++]));
    }
    for (auto& child : node->children) queue.push_back(&child);
  }
  if (consumed != nullptr) *consumed = pos;
  return root;
}

inline ExpressionTree decode(Gene const& gene) {
  return decode_symbols(gene.symbols);
}

// Number of symbols consumed by decode; always <= head + tail.
inline int effective_length(Gene const& gene) {
  std::size_t pos = 1;
  std::size_t open = static_cast<std::size_t>(arity(gene.symbols[0]));
  while (open > 0) {
    if (pos >= gene.symbols.size())
      throw GeneDecodeError("symbol sequence ends before all arities are filled");
    open += static_cast<std::size_t>(arity(gene.symbols[pos])) - 1;
    ++pos;
  }
  return static_cast<int>(pos);
}

// Head positions draw uniformly from functions + terminals, tail positions
// from terminals only.
inline Gene random_gene(Rng& rng, int head_len, Alphabet const& alphabet) {
  if (head_len < 1) throw std::invalid_argument("head length must be >= 1");
  Gene gene;
  gene.head_len = head_len;
  gene.tail_len = tail_length(head_len, alphabet.max_arity());
  gene.symbols.reserve(static_cast<std::size_t>(gene.head_len + gene.tail_len));
  for (int i = 0; i < gene.head_len; ++i)
    gene.symbols.push_back(alphabet.symbol_at(rng.below(alphabet.size())));
  for (int i = 0; i < gene.tail_len; ++i)
    gene.symbols.push_back(
        alphabet.terminals()[rng.below(alphabet.n_terminals())]);
  return gene;
}

// Whitespace-separated symbol string, e.g. "sqrt + - * * x x sin x y ...".
inline std::string gene_to_string(Gene const& gene, Alphabet const& alphabet) {
  std::string out;
  for (int i = 0; i < gene.length(); ++i) {
    if (i > 0) out.push_back(' ');
    out += alphabet.symbol_name(gene.symbols[static_cast<std::size_t>(i)]);
  }
  return out;
}

struct GeneParseError : std::runtime_error {
  GeneParseError(std::string const& token, std::size_t index)
      : std::runtime_error("unknown symbol '" + token + "' at position " +
                           std::to_string(index + 1)),
        token_index(index) {}
  std::size_t token_index;
};

inline std::vector<Symbol> parse_symbols(std::string const& text,
                                         Alphabet const& alphabet) {
  std::vector<Symbol> symbols;
  std::istringstream in(text);
  std::string token;
  std::size_t index = 0;
  while (in >> token) {
    Symbol s{};
    if (!alphabet.lookup(token, s)) throw GeneParseError(token, index);
    symbols.push_back(s);
    ++index;
  }
  return symbols;
}

// Parses a serialized gene; the head length is recovered from the total
// length via t = h*(a_max - 1) + 1.
inline Gene parse_gene(std::string const& text, Alphabet const& alphabet) {
  Gene gene;
  gene.symbols = parse_symbols(text, alphabet);
  int total = gene.length();
  int a_max = alphabet.max_arity();
  if (total < 1 || (total - 1) % a_max != 0)
    throw GeneDecodeError("symbol count does not match any head/tail split");
  gene.head_len = (total - 1) / a_max;
  gene.tail_len = total - gene.head_len;
  require_valid_gene(gene, a_max);
  return gene;
}

}  // namespace neep

#endif  // NEEP_GENE_HPP
