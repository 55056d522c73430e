#ifndef NEEP_CMAES_HPP
#define NEEP_CMAES_HPP

#include <Eigen/Core>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "neep/optimizer.hpp"
#include "neep/random.hpp"

namespace neep {

// Covariance matrix adaptation evolution strategy with log-rank
// recombination weights, cumulative step-size adaptation and the rank-one
// plus rank-mu covariance update. lambda = population_size, mu = lambda/2.
struct CmaesParams {
  double sigma_factor = 0.3;  // sigma0 = factor * init-range width
};

inline BestSoFar cmaes_minimize(Objective const& obj, OptimizerRun const& run,
                                CmaesParams const& params = {},
                                ProgressSink const& progress = nullptr) {
  run.validate();
  std::size_t n = obj.dimension;
  if (n < 1) throw std::invalid_argument("dimension must be >= 1");
  auto nd = static_cast<double>(n);
  auto ni = static_cast<Eigen::Index>(n);

  int lambda = run.population_size;
  int mu = lambda / 2;
  Eigen::VectorXd weights(mu);
  for (int i = 0; i < mu; ++i)
    weights[i] = std::log((lambda + 1) / 2.0) - std::log(i + 1.0);
  weights /= weights.sum();
  double mu_eff = 1.0 / weights.squaredNorm();

  double c_sigma = (mu_eff + 2.0) / (nd + mu_eff + 5.0);
  double d_sigma =
      1.0 + 2.0 * std::max(0.0, std::sqrt((mu_eff - 1.0) / (nd + 1.0)) - 1.0) +
      c_sigma;
  double c_c = (4.0 + mu_eff / nd) / (nd + 4.0 + 2.0 * mu_eff / nd);
  double c_1 = 2.0 / ((nd + 1.3) * (nd + 1.3) + mu_eff);
  double c_mu = std::min(1.0 - c_1, 2.0 * (mu_eff - 2.0 + 1.0 / mu_eff) /
                                        ((nd + 2.0) * (nd + 2.0) + mu_eff));
  double chi_n = std::sqrt(nd) * (1.0 - 1.0 / (4.0 * nd) + 1.0 / (21.0 * nd * nd));

  Rng rng(run.seed);
  double sigma0 = params.sigma_factor * (run.init_hi - run.init_lo);
  double sigma = sigma0;
  Eigen::VectorXd mean(ni);
  for (Eigen::Index i = 0; i < ni; ++i)
    mean[i] = rng.uniform(run.init_lo, run.init_hi);

  Eigen::MatrixXd cov = Eigen::MatrixXd::Identity(ni, ni);
  Eigen::MatrixXd basis = Eigen::MatrixXd::Identity(ni, ni);
  Eigen::VectorXd scale = Eigen::VectorXd::Ones(ni);  // sqrt of eigenvalues
  Eigen::VectorXd path_sigma = Eigen::VectorXd::Zero(ni);
  Eigen::VectorXd path_c = Eigen::VectorXd::Zero(ni);

  BestSoFar best;
  std::uint64_t last_eigen_eval = 0;
  double eigen_interval = static_cast<double>(lambda) / (c_1 + c_mu) / nd / 10.0;

  std::vector<Eigen::VectorXd> zs(static_cast<std::size_t>(lambda));
  std::vector<Eigen::VectorXd> ys(static_cast<std::size_t>(lambda));
  std::vector<Eigen::VectorXd> xs(static_cast<std::size_t>(lambda));
  std::vector<double> fitness(static_cast<std::size_t>(lambda));
  std::vector<int> order(static_cast<std::size_t>(lambda));

  auto restart_covariance = [&](bool reset_sigma) {
    cov.setIdentity();
    basis.setIdentity();
    scale.setOnes();
    path_sigma.setZero();
    path_c.setZero();
    if (reset_sigma || !std::isfinite(sigma) || sigma <= 0.0) sigma = sigma0;
    ++best.restarts;
  };

  for (int gen = 0; gen < run.generations; ++gen) {
    double mean_fit = 0.0;
    for (int k = 0; k < lambda; ++k) {
      auto ks = static_cast<std::size_t>(k);
      zs[ks].resize(ni);
      for (Eigen::Index i = 0; i < ni; ++i) zs[ks][i] = rng.normal();
      ys[ks] = basis * (scale.cwiseProduct(zs[ks]));
      xs[ks] = mean + sigma * ys[ks];
      double f = detail::sanitize_fitness(
          obj.evaluate(std::span<double const>(xs[ks].data(), n)));
      ++best.evaluations;
      fitness[ks] = f;
      mean_fit += f;
      best.offer(std::span<double const>(xs[ks].data(), n), f);
    }
    mean_fit /= static_cast<double>(lambda);

    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return fitness[static_cast<std::size_t>(a)] <
             fitness[static_cast<std::size_t>(b)];
    });

    Eigen::VectorXd y_w = Eigen::VectorXd::Zero(ni);
    for (int i = 0; i < mu; ++i)
      y_w += weights[i] * ys[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
    mean += sigma * y_w;

    // C^(-1/2) * y_w without materializing the matrix.
    Eigen::VectorXd whitened =
        basis * (basis.transpose() * y_w).cwiseQuotient(scale);
    path_sigma = (1.0 - c_sigma) * path_sigma +
                 std::sqrt(c_sigma * (2.0 - c_sigma) * mu_eff) * whitened;

    double ps_norm = path_sigma.norm();
    double decay = 1.0 - std::pow(1.0 - c_sigma, 2.0 * (gen + 1));
    bool h_sigma = ps_norm / std::sqrt(decay) / chi_n < 1.4 + 2.0 / (nd + 1.0);

    path_c = (1.0 - c_c) * path_c;
    if (h_sigma) path_c += std::sqrt(c_c * (2.0 - c_c) * mu_eff) * y_w;

    double c1a = c_1 * (1.0 - (h_sigma ? 0.0 : 1.0) * c_c * (2.0 - c_c));
    cov *= 1.0 - c1a - c_mu;
    cov.selfadjointView<Eigen::Lower>().rankUpdate(path_c, c_1);
    for (int i = 0; i < mu; ++i)
      cov.selfadjointView<Eigen::Lower>().rankUpdate(
          ys[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])],
          c_mu * weights[i]);

    sigma *= std::exp((c_sigma / d_sigma) * (ps_norm / chi_n - 1.0));
    if (!std::isfinite(sigma) || sigma <= 0.0) restart_covariance(true);

    if (static_cast<double>(best.evaluations - last_eigen_eval) > eigen_interval ||
        gen + 1 == run.generations) {
      last_eigen_eval = best.evaluations;
      cov.triangularView<Eigen::Upper>() = cov.transpose();
      if (!cov.allFinite()) {
        restart_covariance(true);
      } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
        if (solver.info() != Eigen::Success ||
            solver.eigenvalues().minCoeff() <= 0.0 ||
            !solver.eigenvalues().allFinite()) {
          restart_covariance(false);
        } else {
          basis = solver.eigenvectors();
          scale = solver.eigenvalues().cwiseSqrt();
        }
      }
    }

    best.history.push_back(best.fitness);
    if (progress) progress({gen, best.fitness, mean_fit, sigma});
  }
  return best;
}

}  // namespace neep

#endif  // NEEP_CMAES_HPP
