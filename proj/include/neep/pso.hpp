#ifndef NEEP_PSO_HPP
#define NEEP_PSO_HPP

#include <algorithm>
#include <span>
#include <vector>

#include "neep/optimizer.hpp"
#include "neep/random.hpp"

namespace neep {

// Global-best PSO with constriction-equivalent coefficients. Velocities are
// clamped to the init-range width; particles start with zero velocity.
struct PsoParams {
  double inertia = 0.7298;
  double cognitive = 1.49618;
  double social = 1.49618;
};

inline BestSoFar pso_minimize(Objective const& obj, OptimizerRun const& run,
                              PsoParams const& params = {},
                              ProgressSink const& progress = nullptr) {
  run.validate();
  if (obj.dimension < 1) throw std::invalid_argument("dimension must be >= 1");

  Rng rng(run.seed);
  std::size_t dim = obj.dimension;
  std::size_t swarm = static_cast<std::size_t>(run.population_size);
  double v_max = run.init_hi - run.init_lo;

  std::vector<std::vector<double>> x(swarm, std::vector<double>(dim));
  std::vector<std::vector<double>> v(swarm, std::vector<double>(dim, 0.0));
  std::vector<std::vector<double>> pbest(swarm);
  std::vector<double> pbest_fit(swarm);
  BestSoFar best;

  for (std::size_t i = 0; i < swarm; ++i) {
    for (auto& c : x[i]) c = rng.uniform(run.init_lo, run.init_hi);
    double f = detail::sanitize_fitness(obj.evaluate(x[i]));
    ++best.evaluations;
    pbest[i] = x[i];
    pbest_fit[i] = f;
    best.offer(x[i], f);
  }

  for (int gen = 0; gen < run.generations; ++gen) {
    double mean = 0.0;
    for (std::size_t i = 0; i < swarm; ++i) {
      for (std::size_t d = 0; d < dim; ++d) {
        double r1 = rng.uniform01();
        double r2 = rng.uniform01();
        double vel = params.inertia * v[i][d] +
                     params.cognitive * r1 * (pbest[i][d] - x[i][d]) +
                     params.social * r2 * (best.vector[d] - x[i][d]);
        v[i][d] = std::clamp(vel, -v_max, v_max);
        x[i][d] += v[i][d];
      }
      double f = detail::sanitize_fitness(obj.evaluate(x[i]));
      ++best.evaluations;
      mean += f;
      if (f < pbest_fit[i]) {
        pbest_fit[i] = f;
        pbest[i] = x[i];
      }
      best.offer(x[i], f);
    }
    mean /= static_cast<double>(swarm);
    best.history.push_back(best.fitness);
    if (progress) progress({gen, best.fitness, mean, 0.0});
  }
  return best;
}

}  // namespace neep

#endif  // NEEP_PSO_HPP
