#ifndef NEEP_DATASET_HPP
#define NEEP_DATASET_HPP

#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "neep/expression.hpp"

namespace neep {

// Row-major matrix of input points plus target values.
struct Dataset {
  std::size_t n_vars = 0;
  std::vector<double> inputs;   // n_points x n_vars, row-major
  std::vector<double> targets;  // n_points

  std::size_t n_points() const { return targets.size(); }

  std::span<double const> point(std::size_t row) const {
    return {inputs.data() + row * n_vars, n_vars};
  }

  void push_row(std::span<double const> x, double y) {
    if (x.size() != n_vars)
      throw std::invalid_argument("row width does not match n_vars");
    inputs.insert(inputs.end(), x.begin(), x.end());
    targets.push_back(y);
  }

  void validate() const {
    if (n_vars == 0 || targets.empty() || inputs.size() != n_vars * targets.size())
      throw std::invalid_argument("dataset shape is inconsistent");
    for (double v : inputs)
      if (!std::isfinite(v)) throw std::invalid_argument("non-finite input value");
    for (double v : targets)
      if (!std::isfinite(v)) throw std::invalid_argument("non-finite target value");
  }
};

inline constexpr double kWorstFitness = std::numeric_limits<double>::infinity();

// Mean squared error of the tree over the dataset. Any non-finite prediction
// maps to the worst-fitness sentinel so optimizers discard the candidate.
inline double mse_fitness(ExpressionTree const& tree, Dataset const& data) {
  std::size_t n = data.n_points();
  if (n == 0) throw std::invalid_argument("mse_fitness: empty dataset");
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double pred = eval_node(tree, data.point(i));
    if (!std::isfinite(pred)) return kWorstFitness;
    double r = pred - data.targets[i];
    sum += r * r;
  }
  return sum / static_cast<double>(n);
}

}  // namespace neep

#endif  // NEEP_DATASET_HPP
