#ifndef NEEP_OPTIMIZER_HPP
#define NEEP_OPTIMIZER_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace neep {

// Black-box minimization target; evaluate must be deterministic and pure.
struct Objective {
  std::size_t dimension = 0;
  std::function<double(std::span<double const>)> evaluate;
};

struct OptimizerRun {
  int population_size = 100;
  int generations = 500;
  std::uint64_t seed = 0;
  double init_lo = -2.0;
  double init_hi = 2.0;

  void validate() const {
    if (population_size < 4)
      throw std::invalid_argument("population size must be >= 4");
    if (generations < 1) throw std::invalid_argument("generations must be >= 1");
    if (!(init_lo < init_hi))
      throw std::invalid_argument("init range must be non-degenerate");
  }
};

// Per-generation telemetry record; sigma is meaningful for CMA-ES only.
struct ProgressRecord {
  int generation = 0;
  double best = 0.0;       // best-so-far fitness
  double mean = 0.0;       // mean fitness of the generation
  double sigma = 0.0;
};

using ProgressSink = std::function<void(ProgressRecord const&)>;

inline std::string progress_csv_header() { return "generation,best,mean,sigma"; }

inline std::string to_csv_row(ProgressRecord const& r) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g", r.generation, r.best,
                r.mean, r.sigma);
  return buf;
}

struct BestSoFar {
  std::vector<double> vector;
  double fitness = std::numeric_limits<double>::infinity();
  std::vector<double> history;  // best-so-far per generation, non-increasing
  std::uint64_t evaluations = 0;
  int restarts = 0;  // CMA-ES covariance resets

  void offer(std::span<double const> x, double f) {
    if (f < fitness || vector.empty()) {
      fitness = std::min(f, fitness);
      vector.assign(x.begin(), x.end());
    }
  }
};

namespace detail {

// NaN never wins a comparison; map it to the worst-fitness sentinel so that
// ordering stays total.
inline double sanitize_fitness(double f) {
  return std::isnan(f) ? std::numeric_limits<double>::infinity() : f;
}

}  // namespace detail

}  // namespace neep

#endif  // NEEP_OPTIMIZER_HPP
