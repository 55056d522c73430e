#ifndef NEEP_GA_HPP
#define NEEP_GA_HPP

#include <numeric>
#include <span>
#include <vector>

#include "neep/optimizer.hpp"
#include "neep/random.hpp"

namespace neep {

// Real-coded GA: tournament selection (size 3), arithmetic crossover with a
// uniform per-gene blend factor, per-coordinate Gaussian mutation, elitism 1.
struct GaParams {
  double crossover_rate = 0.9;
  double mutation_sigma_factor = 0.1;  // sigma = factor * init-range width
  int tournament_size = 3;
};

inline BestSoFar ga_minimize(Objective const& obj, OptimizerRun const& run,
                             GaParams const& params = {},
                             ProgressSink const& progress = nullptr) {
  run.validate();
  if (obj.dimension < 1) throw std::invalid_argument("dimension must be >= 1");

  Rng rng(run.seed);
  std::size_t dim = obj.dimension;
  std::size_t pop_size = static_cast<std::size_t>(run.population_size);
  double width = run.init_hi - run.init_lo;
  double sigma = params.mutation_sigma_factor * width;
  double mutation_prob = 1.0 / static_cast<double>(dim);

  std::vector<std::vector<double>> pop(pop_size, std::vector<double>(dim));
  std::vector<double> fit(pop_size);
  BestSoFar best;
  for (std::size_t i = 0; i < pop_size; ++i) {
    for (auto& v : pop[i]) v = rng.uniform(run.init_lo, run.init_hi);
    fit[i] = detail::sanitize_fitness(obj.evaluate(pop[i]));
    ++best.evaluations;
    best.offer(pop[i], fit[i]);
  }

  auto tournament = [&]() {
    std::size_t winner = rng.below(pop_size);
    for (int k = 1; k < params.tournament_size; ++k) {
      std::size_t c = rng.below(pop_size);
      if (fit[c] < fit[winner]) winner = c;
    }
    return winner;
  };

  std::vector<std::vector<double>> next(pop_size, std::vector<double>(dim));
  std::vector<double> next_fit(pop_size);
  for (int gen = 0; gen < run.generations; ++gen) {
    std::size_t elite = 0;
    for (std::size_t i = 1; i < pop_size; ++i)
      if (fit[i] < fit[elite]) elite = i;

    for (std::size_t i = 0; i < pop_size; i += 2) {
      std::size_t a = tournament();
      std::size_t b = tournament();
      next[i] = pop[a];
      std::size_t j = i + 1 < pop_size ? i + 1 : i;
      if (j != i) next[j] = pop[b];
      if (j != i && rng.chance(params.crossover_rate)) {
        for (std::size_t d = 0; d < dim; ++d) {
          double alpha = rng.uniform01();
          double x = pop[a][d];
          double y = pop[b][d];
          next[i][d] = alpha * x + (1.0 - alpha) * y;
          next[j][d] = (1.0 - alpha) * x + alpha * y;
        }
      }
    }
    for (std::size_t i = 0; i < pop_size; ++i)
      for (std::size_t d = 0; d < dim; ++d)
        if (rng.chance(mutation_prob)) next[i][d] += rng.normal(0.0, sigma);

    double mean = 0.0;
    for (std::size_t i = 0; i < pop_size; ++i) {
      next_fit[i] = detail::sanitize_fitness(obj.evaluate(next[i]));
      ++best.evaluations;
      best.offer(next[i], next_fit[i]);
      mean += next_fit[i];
    }
    mean /= static_cast<double>(pop_size);

    // Elitism: the previous best replaces the worst offspring.
    std::size_t worst = 0;
    for (std::size_t i = 1; i < pop_size; ++i)
      if (next_fit[i] > next_fit[worst]) worst = i;
    if (fit[elite] < next_fit[worst]) {
      next[worst] = pop[elite];
      next_fit[worst] = fit[elite];
    }
    pop.swap(next);
    fit.swap(next_fit);

    best.history.push_back(best.fitness);
    if (progress) progress({gen, best.fitness, mean, 0.0});
  }
  return best;
}

}  // namespace neep

#endif  // NEEP_GA_HPP
