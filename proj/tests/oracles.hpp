// Test-only reference implementations, kept independent of the library's
// production code paths they are used to check.
#ifndef NEEP_TESTS_ORACLES_HPP
#define NEEP_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "neep/expression.hpp"
#include "neep/gene.hpp"
#include "neep/optimizer.hpp"
#include "neep/random.hpp"
#include "neep/symbols.hpp"

namespace oracles {

// Level-by-level K-expression decoder: first lay the symbols out into
// levels (each level consumes the arity sum of the previous one), then link
// children upward. Structurally different from the library's queue decoder.
inline neep::ExpressionTree reference_decode(std::span<neep::Symbol const> symbols,
                                             std::size_t* consumed = nullptr) {
  if (symbols.empty()) throw std::runtime_error("empty symbol sequence");
  std::vector<std::vector<std::size_t>> levels;
  levels.push_back({0});
  std::size_t pos = 1;
  while (true) {
    std::size_t need = 0;
    for (std::size_t i : levels.back())
      need += static_cast<std::size_t>(neep::arity(symbols[i]));
    if (need == 0) break;
    std::vector<std::size_t> level(need);
    for (std::size_t k = 0; k < need; ++k) {
      if (pos >= symbols.size())
        throw std::runtime_error("sequence ends before all arities are filled");
      level[k] = pos++;
    }
    levels.push_back(std::move(level));
  }
  if (consumed != nullptr) *consumed = pos;

  auto make_node = [&](std::size_t i) {
    neep::ExpressionTree t;
    auto const& s = symbols[i];
    if (s.is_terminal()) {
      t = neep::ExpressionTree::variable(s.var);
    } else {
      t.kind = neep::ExpressionTree::NodeKind::function;
      t.op = s.op;
    }
    return t;
  };

  // Build bottom-up: each level's trees feed the level above in order.
  std::vector<neep::ExpressionTree> below;
  for (std::size_t l = levels.size(); l > 0; --l) {
    auto const& level = levels[l - 1];
    std::vector<neep::ExpressionTree> current;
    current.reserve(level.size());
    std::deque<neep::ExpressionTree> feed(below.begin(), below.end());
    for (std::size_t i : level) {
      auto node = make_node(i);
      for (int c = 0; c < neep::arity(symbols[i]); ++c) {
        node.children.push_back(std::move(feed.front()));
        feed.pop_front();
      }
      current.push_back(std::move(node));
    }
    below = std::move(current);
  }
  return std::move(below.front());
}

inline bool trees_equal(neep::ExpressionTree const& a, neep::ExpressionTree const& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case neep::ExpressionTree::NodeKind::constant:
      if (a.value != b.value) return false;
      break;
    case neep::ExpressionTree::NodeKind::variable:
      if (a.var != b.var) return false;
      break;
    case neep::ExpressionTree::NodeKind::function:
      if (a.op != b.op) return false;
      break;
  }
  if (a.children.size() != b.children.size()) return false;
  for (std::size_t i = 0; i < a.children.size(); ++i)
    if (!trees_equal(a.children[i], b.children[i])) return false;
  return true;
}

// Uniform random search over the init box with the same evaluation budget;
// the baseline the population optimizers must beat.
inline double random_search(neep::Objective const& obj, neep::OptimizerRun const& run) {
  neep::Rng rng(neep::derive_seed(run.seed, 0x5EA8C4ull));
  std::vector<double> x(obj.dimension);
  double best = std::numeric_limits<double>::infinity();
  std::uint64_t budget = static_cast<std::uint64_t>(run.population_size) *
                         static_cast<std::uint64_t>(run.generations + 1);
  for (std::uint64_t e = 0; e < budget; ++e) {
    for (auto& v : x) v = rng.uniform(run.init_lo, run.init_hi);
    best = std::min(best, obj.evaluate(x));
  }
  return best;
}

// Minimal independent ask/tell CMA-ES used to cross-check the library
// implementation. Linear algebra is a hand-rolled cyclic Jacobi
// eigendecomposition; no Eigen involved.
class ReferenceCmaes {
 public:
  ReferenceCmaes(std::size_t dim, int lambda, double sigma,
                 std::vector<double> mean, std::uint64_t seed)
      : n_(dim),
        lambda_(lambda),
        mu_(lambda / 2),
        sigma_(sigma),
        mean_(std::move(mean)),
        rng_(seed) {
    weights_.resize(static_cast<std::size_t>(mu_));
    double sum = 0.0;
    for (int i = 0; i < mu_; ++i) {
      weights_[static_cast<std::size_t>(i)] =
          std::log((lambda_ + 1) / 2.0) - std::log(i + 1.0);
      sum += weights_[static_cast<std::size_t>(i)];
    }
    double sq = 0.0;
    for (auto& w : weights_) {
      w /= sum;
      sq += w * w;
    }
    mu_eff_ = 1.0 / sq;
    double nd = static_cast<double>(n_);
    c_sigma_ = (mu_eff_ + 2.0) / (nd + mu_eff_ + 5.0);
    d_sigma_ = 1.0 + 2.0 * std::max(0.0, std::sqrt((mu_eff_ - 1.0) / (nd + 1.0)) - 1.0) +
               c_sigma_;
    c_c_ = (4.0 + mu_eff_ / nd) / (nd + 4.0 + 2.0 * mu_eff_ / nd);
    c_1_ = 2.0 / ((nd + 1.3) * (nd + 1.3) + mu_eff_);
    c_mu_ = std::min(1.0 - c_1_, 2.0 * (mu_eff_ - 2.0 + 1.0 / mu_eff_) /
                                     ((nd + 2.0) * (nd + 2.0) + mu_eff_));
    chi_n_ = std::sqrt(nd) * (1.0 - 1.0 / (4.0 * nd) + 1.0 / (21.0 * nd * nd));
    cov_.assign(n_ * n_, 0.0);
    basis_.assign(n_ * n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
      cov_[i * n_ + i] = 1.0;
      basis_[i * n_ + i] = 1.0;
    }
    scale_.assign(n_, 1.0);
    p_sigma_.assign(n_, 0.0);
    p_c_.assign(n_, 0.0);
  }

  std::vector<std::vector<double>> ask() {
    std::vector<std::vector<double>> xs(static_cast<std::size_t>(lambda_));
    ys_.assign(static_cast<std::size_t>(lambda_), std::vector<double>(n_, 0.0));
    for (int k = 0; k < lambda_; ++k) {
      auto ks = static_cast<std::size_t>(k);
      std::vector<double> z(n_);
      for (auto& v : z) v = rng_.normal();
      for (std::size_t i = 0; i < n_; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n_; ++j)
          acc += basis_[i * n_ + j] * scale_[j] * z[j];
        ys_[ks][i] = acc;
      }
      xs[ks].resize(n_);
      for (std::size_t i = 0; i < n_; ++i) xs[ks][i] = mean_[i] + sigma_ * ys_[ks][i];
    }
    return xs;
  }

  void tell(std::vector<double> const& fitness) {
    std::vector<int> order(static_cast<std::size_t>(lambda_));
    for (int i = 0; i < lambda_; ++i) order[static_cast<std::size_t>(i)] = i;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return fitness[static_cast<std::size_t>(a)] < fitness[static_cast<std::size_t>(b)];
    });

    std::vector<double> y_w(n_, 0.0);
    for (int i = 0; i < mu_; ++i) {
      auto const& y = ys_[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
      for (std::size_t d = 0; d < n_; ++d)
        y_w[d] += weights_[static_cast<std::size_t>(i)] * y[d];
    }
    for (std::size_t d = 0; d < n_; ++d) mean_[d] += sigma_ * y_w[d];

    // whitened = B * diag(1/scale) * B^T * y_w
    std::vector<double> tmp(n_, 0.0);
    for (std::size_t j = 0; j < n_; ++j) {
      double acc = 0.0;
      for (std::size_t i = 0; i < n_; ++i) acc += basis_[i * n_ + j] * y_w[i];
      tmp[j] = acc / scale_[j];
    }
    std::vector<double> whitened(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n_; ++j) acc += basis_[i * n_ + j] * tmp[j];
      whitened[i] = acc;
    }

    double ps_sq = 0.0;
    for (std::size_t d = 0; d < n_; ++d) {
      p_sigma_[d] = (1.0 - c_sigma_) * p_sigma_[d] +
                    std::sqrt(c_sigma_ * (2.0 - c_sigma_) * mu_eff_) * whitened[d];
      ps_sq += p_sigma_[d] * p_sigma_[d];
    }
    ++generation_;
    double decay = 1.0 - std::pow(1.0 - c_sigma_, 2.0 * generation_);
    bool h_sigma =
        std::sqrt(ps_sq) / std::sqrt(decay) / chi_n_ < 1.4 + 2.0 / (n_ + 1.0);

    for (std::size_t d = 0; d < n_; ++d) {
      p_c_[d] = (1.0 - c_c_) * p_c_[d];
      if (h_sigma) p_c_[d] += std::sqrt(c_c_ * (2.0 - c_c_) * mu_eff_) * y_w[d];
    }

    double c1a = c_1_ * (1.0 - (h_sigma ? 0.0 : 1.0) * c_c_ * (2.0 - c_c_));
    for (auto& v : cov_) v *= 1.0 - c1a - c_mu_;
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) cov_[i * n_ + j] += c_1_ * p_c_[i] * p_c_[j];
    for (int k = 0; k < mu_; ++k) {
      auto const& y = ys_[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])];
      double w = c_mu_ * weights_[static_cast<std::size_t>(k)];
      for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) cov_[i * n_ + j] += w * y[i] * y[j];
    }

    sigma_ *= std::exp((c_sigma_ / d_sigma_) * (std::sqrt(ps_sq) / chi_n_ - 1.0));
    jacobi_eigen();
  }

  std::vector<double> const& mean() const { return mean_; }
  double sigma() const { return sigma_; }

 private:
  // Cyclic Jacobi sweeps; good enough for the small test dimensions.
  void jacobi_eigen() {
    std::vector<double> a = cov_;
    std::vector<double> v(n_ * n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) v[i * n_ + i] = 1.0;
    for (int sweep = 0; sweep < 30; ++sweep) {
      double off = 0.0;
      for (std::size_t p = 0; p < n_; ++p)
        for (std::size_t q = p + 1; q < n_; ++q) off += a[p * n_ + q] * a[p * n_ + q];
      if (off < 1e-26) break;
      for (std::size_t p = 0; p < n_; ++p) {
        for (std::size_t q = p + 1; q < n_; ++q) {
          double apq = a[p * n_ + q];
          if (std::fabs(apq) < 1e-300) continue;
          double theta = (a[q * n_ + q] - a[p * n_ + p]) / (2.0 * apq);
          double t = (theta >= 0 ? 1.0 : -1.0) /
                     (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
          double c = 1.0 / std::sqrt(t * t + 1.0);
          double s = t * c;
          for (std::size_t k = 0; k < n_; ++k) {
            double akp = a[k * n_ + p];
            double akq = a[k * n_ + q];
            a[k * n_ + p] = c * akp - s * akq;
            a[k * n_ + q] = s * akp + c * akq;
          }
          for (std::size_t k = 0; k < n_; ++k) {
            double apk = a[p * n_ + k];
            double aqk = a[q * n_ + k];
            a[p * n_ + k] = c * apk - s * aqk;
            a[q * n_ + k] = s * apk + c * aqk;
          }
          for (std::size_t k = 0; k < n_; ++k) {
            double vkp = v[k * n_ + p];
            double vkq = v[k * n_ + q];
            v[k * n_ + p] = c * vkp - s * vkq;
            v[k * n_ + q] = s * vkp + c * vkq;
          }
        }
      }
    }
    basis_ = v;
    for (std::size_t i = 0; i < n_; ++i)
      scale_[i] = std::sqrt(std::max(a[i * n_ + i], 1e-300));
  }

  std::size_t n_;
  int lambda_;
  int mu_;
  double sigma_;
  std::vector<double> mean_;
  neep::Rng rng_;
  std::vector<double> weights_;
  double mu_eff_ = 0.0;
  double c_sigma_ = 0.0;
  double d_sigma_ = 0.0;
  double c_c_ = 0.0;
  double c_1_ = 0.0;
  double c_mu_ = 0.0;
  double chi_n_ = 0.0;
  std::vector<double> cov_;
  std::vector<double> basis_;
  std::vector<double> scale_;
  std::vector<double> p_sigma_;
  std::vector<double> p_c_;
  std::vector<std::vector<double>> ys_;
  int generation_ = 0;
};

}  // namespace oracles

#endif  // NEEP_TESTS_ORACLES_HPP
