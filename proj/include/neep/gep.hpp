#ifndef NEEP_GEP_HPP
#define NEEP_GEP_HPP

#include <algorithm>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "neep/dataset.hpp"
#include "neep/gene.hpp"
#include "neep/optimizer.hpp"
#include "neep/random.hpp"

namespace neep {

// Standard GEP operator rates (paper's baseline configuration).
struct GepParams {
  int pop_size = 100;
  int generations = 500;
  int head_len = 30;
  double crossover_rate = 0.7;
  double mutation_rate = 0.1;  // per-position replacement probability
  double is_rate = 0.1;
  double ris_rate = 0.1;
  double inversion_rate = 0.1;
  int tournament_size = 3;
  int elitism = 1;
  int max_transposon_len = 3;

  void validate() const {
    if (pop_size < 2) throw std::invalid_argument("population size must be >= 2");
    if (generations < 0) throw std::invalid_argument("generations must be >= 0");
    if (head_len < 1) throw std::invalid_argument("head length must be >= 1");
    if (elitism < 0 || elitism >= pop_size)
      throw std::invalid_argument("elitism must lie in [0, pop_size)");
    for (double r : {crossover_rate, mutation_rate, is_rate, ris_rate, inversion_rate})
      if (r < 0.0 || r > 1.0) throw std::invalid_argument("rates must lie in [0, 1]");
  }
};

// Point mutation: head positions redraw from functions + terminals, tail
// positions from terminals only.
inline Gene mutate(Gene const& gene, Rng& rng, double rate, Alphabet const& alphabet) {
  Gene out = gene;
  for (int i = 0; i < out.length(); ++i) {
    if (!rng.chance(rate)) continue;
    auto idx = static_cast<std::size_t>(i);
    out.symbols[idx] = i < out.head_len
                           ? alphabet.symbol_at(rng.below(alphabet.size()))
                           : alphabet.terminals()[rng.below(alphabet.n_terminals())];
  }
  return out;
}

// Suffixes exchanged after a uniform cut point; position-aligned exchange
// preserves the tail rule.
inline std::pair<Gene, Gene> one_point_crossover(Gene const& a, Gene const& b,
                                                 Rng& rng) {
  if (a.head_len != b.head_len || a.length() != b.length())
    throw std::invalid_argument("crossover requires equal gene shapes");
  Gene ca = a;
  Gene cb = b;
  auto cut = static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(a.length())));
  for (std::size_t i = cut; i < ca.symbols.size(); ++i)
    std::swap(ca.symbols[i], cb.symbols[i]);
  return {std::move(ca), std::move(cb)};
}

// Insertion-sequence transposition: a random segment (length <= 3) is copied
// into the head at a position past the root; the head is truncated back to
// its fixed length.
inline Gene is_transposition(Gene const& gene, Rng& rng, int max_len = 3) {
  if (gene.head_len < 2) return gene;
  int seg_len = static_cast<int>(rng.between(1, max_len));
  seg_len = std::min(seg_len, gene.length());
  int src = static_cast<int>(rng.between(0, gene.length() - seg_len));
  int site = static_cast<int>(rng.between(1, gene.head_len - 1));  // 0-based, >= 2nd position

  std::vector<Symbol> segment(gene.symbols.begin() + src,
                              gene.symbols.begin() + src + seg_len);
  Gene out = gene;
  std::vector<Symbol> head(gene.symbols.begin(), gene.symbols.begin() + gene.head_len);
  head.insert(head.begin() + site, segment.begin(), segment.end());
  head.resize(static_cast<std::size_t>(gene.head_len));
  std::copy(head.begin(), head.end(), out.symbols.begin());
  return out;
}

// Root-insertion-sequence transposition: scan the head from a random point
// for a function; the segment starting there is copied to the head start.
// Genes without any function in the scanned range are returned unchanged.
inline Gene ris_transposition(Gene const& gene, Rng& rng, int max_len = 3) {
  int start = static_cast<int>(rng.between(0, gene.head_len - 1));
  int func_pos = -1;
  for (int i = start; i < gene.head_len; ++i)
    if (!gene.symbols[static_cast<std::size_t>(i)].is_terminal()) {
      func_pos = i;
      break;
    }
  if (func_pos < 0) return gene;

  int seg_len = static_cast<int>(rng.between(1, max_len));
  seg_len = std::min(seg_len, gene.length() - func_pos);
  std::vector<Symbol> segment(gene.symbols.begin() + func_pos,
                              gene.symbols.begin() + func_pos + seg_len);
  Gene out = gene;
  std::vector<Symbol> head(gene.symbols.begin(), gene.symbols.begin() + gene.head_len);
  head.insert(head.begin(), segment.begin(), segment.end());
  head.resize(static_cast<std::size_t>(gene.head_len));
  std::copy(head.begin(), head.end(), out.symbols.begin());
  return out;
}

// Reverses a random head segment; the tail is untouched.
inline Gene inversion(Gene const& gene, Rng& rng) {
  int a = static_cast<int>(rng.between(0, gene.head_len - 1));
  int b = static_cast<int>(rng.between(0, gene.head_len - 1));
  if (a > b) std::swap(a, b);
  Gene out = gene;
  std::reverse(out.symbols.begin() + a, out.symbols.begin() + b + 1);
  return out;
}

struct GepResult {
  Gene best_gene;
  double best_fitness = kWorstFitness;
  std::vector<double> history;  // best-so-far per generation
  std::uint64_t evaluations = 0;
};

// Generational GEP over K-expression genes: tournament selection, then the
// operators at their configured rates, elitism 1. Fitness is the MSE of the
// decoded tree on the training data.
inline GepResult gep_evolve(GepParams const& params, Dataset const& train,
                            Alphabet const& alphabet, Rng& rng,
                            ProgressSink const& progress = nullptr) {
  params.validate();
  auto fitness_of = [&](Gene const& g) { return mse_fitness(decode(g), train); };

  GepResult result;
  auto pop_size = static_cast<std::size_t>(params.pop_size);
  std::vector<Gene> pop;
  pop.reserve(pop_size);
  std::vector<double> fit(pop_size);
  for (std::size_t i = 0; i < pop_size; ++i) {
    pop.push_back(random_gene(rng, params.head_len, alphabet));
    fit[i] = fitness_of(pop[i]);
    ++result.evaluations;
    if (fit[i] < result.best_fitness) {
      result.best_fitness = fit[i];
      result.best_gene = pop[i];
    }
  }

  auto tournament = [&]() {
    std::size_t winner = rng.below(pop_size);
    for (int k = 1; k < params.tournament_size; ++k) {
      std::size_t c = rng.below(pop_size);
      if (fit[c] < fit[winner]) winner = c;
    }
    return winner;
  };

  std::vector<Gene> next;
  std::vector<double> next_fit(pop_size);
  std::vector<std::size_t> by_fitness(pop_size);
  for (int gen = 0; gen < params.generations; ++gen) {
    std::iota(by_fitness.begin(), by_fitness.end(), std::size_t{0});
    std::stable_sort(by_fitness.begin(), by_fitness.end(),
                     [&](std::size_t a, std::size_t b) { return fit[a] < fit[b]; });
    std::vector<std::size_t> elites(
        by_fitness.begin(),
        by_fitness.begin() + static_cast<std::size_t>(params.elitism));

    next.clear();
    while (next.size() < pop_size) {
      Gene a = pop[tournament()];
      if (next.size() + 1 < pop_size) {
        Gene b = pop[tournament()];
        if (rng.chance(params.crossover_rate)) {
          auto [ca, cb] = one_point_crossover(a, b, rng);
          a = std::move(ca);
          b = std::move(cb);
        }
        next.push_back(std::move(a));
        next.push_back(std::move(b));
      } else {
        next.push_back(std::move(a));
      }
    }
    for (auto& g : next) {
      g = mutate(g, rng, params.mutation_rate, alphabet);
      if (rng.chance(params.is_rate)) g = is_transposition(g, rng, params.max_transposon_len);
      if (rng.chance(params.ris_rate)) g = ris_transposition(g, rng, params.max_transposon_len);
      if (rng.chance(params.inversion_rate)) g = inversion(g, rng);
    }

    double mean = 0.0;
    for (std::size_t i = 0; i < pop_size; ++i) {
      next_fit[i] = fitness_of(next[i]);
      ++result.evaluations;
      mean += next_fit[i];
      if (next_fit[i] < result.best_fitness) {
        result.best_fitness = next_fit[i];
        result.best_gene = next[i];
      }
    }
    mean /= static_cast<double>(pop_size);

    if (params.elitism > 0) {
      std::iota(by_fitness.begin(), by_fitness.end(), std::size_t{0});
      std::stable_sort(by_fitness.begin(), by_fitness.end(), [&](std::size_t a, std::size_t b) {
        return next_fit[a] > next_fit[b];
      });
      for (std::size_t e = 0; e < elites.size(); ++e) {
        std::size_t worst = by_fitness[e];
        if (fit[elites[e]] < next_fit[worst]) {
          next[worst] = pop[elites[e]];
          next_fit[worst] = fit[elites[e]];
        }
      }
    }
    pop.swap(next);
    fit.swap(next_fit);

    result.history.push_back(result.best_fitness);
    if (progress) progress({gen, result.best_fitness, mean, 0.0});
  }
  return result;
}

}  // namespace neep

#endif  // NEEP_GEP_HPP
