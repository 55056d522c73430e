#ifndef NEEP_STATS_HPP
#define NEEP_STATS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace neep {

// Median (mean of the middle two for even n) and sample standard deviation
// (n-1 denominator; 0 for a single sample).
inline std::pair<double, double> median_and_std(std::span<double const> values) {
  if (values.empty()) throw std::invalid_argument("median_and_std: empty list");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  std::size_t n = sorted.size();
  double median = n % 2 == 1 ? sorted[n / 2]
                             : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  if (n == 1) return {median, 0.0};
  double mean = 0.0;
  for (double v : sorted) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : sorted) ss += (v - mean) * (v - mean);
  return {median, std::sqrt(ss / static_cast<double>(n - 1))};
}

struct RankSumResult {
  double u = 0.0;        // U statistic of the first sample
  double p = 1.0;        // two-sided
  char verdict = '=';    // '+': first sample significantly lower (better)
};

namespace detail {

// Midranks of the pooled sample, returned per-element in pooled order.
inline std::vector<double> midranks(std::vector<double> const& pooled_sorted) {
  std::size_t n = pooled_sorted.size();
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && pooled_sorted[j + 1] == pooled_sorted[i]) ++j;
    double r = 0.5 * static_cast<double>(i + 1 + j + 1);
    for (std::size_t k = i; k <= j; ++k) ranks[k] = r;
    i = j + 1;
  }
  return ranks;
}

// Exact two-sided tail probability of the rank-sum by enumerating all
// C(n, n1) assignments of the pooled midranks to the first sample.
inline double exact_rank_sum_p(std::vector<double> const& ranks, std::size_t n1,
                               double u_obs) {
  std::size_t n = ranks.size();
  double offset = 0.5 * static_cast<double>(n1 * (n1 + 1));
  std::vector<std::size_t> pick(n1);
  for (std::size_t i = 0; i < n1; ++i) pick[i] = i;
  std::uint64_t total = 0;
  std::uint64_t le = 0;
  std::uint64_t ge = 0;
  while (true) {
    double sum = 0.0;
    for (std::size_t i : pick) sum += ranks[i];
    double u = sum - offset;
    ++total;
    if (u <= u_obs + 1e-12) ++le;
    if (u >= u_obs - 1e-12) ++ge;
    // next combination
    std::size_t i = n1;
    while (i > 0) {
      --i;
      if (pick[i] != i + n - n1) {
        ++pick[i];
        for (std::size_t j = i + 1; j < n1; ++j) pick[j] = pick[j - 1] + 1;
        break;
      }
      if (i == 0) {
        double lo = static_cast<double>(le) / static_cast<double>(total);
        double hi = static_cast<double>(ge) / static_cast<double>(total);
        return std::min(1.0, 2.0 * std::min(lo, hi));
      }
    }
  }
}

// Normal approximation with tie correction and 0.5 continuity correction.
// `values` is the pooled sorted sample. Returns 1 when the variance
// degenerates (all values tied).
inline double normal_rank_sum_p(std::vector<double> const& values, std::size_t n1,
                                std::size_t n2, double u_obs) {
  std::size_t n = n1 + n2;
  double mu = 0.5 * static_cast<double>(n1) * static_cast<double>(n2);
  double tie_term = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[j + 1] == values[i]) ++j;
    double t = static_cast<double>(j - i + 1);
    tie_term += t * t * t - t;
    i = j + 1;
  }
  double nn = static_cast<double>(n);
  double var = mu / 6.0 * ((nn + 1.0) - tie_term / (nn * (nn - 1.0)));
  if (var <= 0.0) return 1.0;
  double diff = std::fabs(u_obs - mu) - 0.5;
  double z = diff > 0.0 ? diff / std::sqrt(var) : 0.0;
  return std::erfc(z / std::sqrt(2.0));
}

}  // namespace detail

// Mann-Whitney U rank-sum test with midrank ties. Exact enumeration when
// n1 + n2 <= 12, otherwise the normal approximation with tie correction and
// 0.5 continuity correction. Verdict '+' means the first sample (the
// proposed method) is significantly lower at level alpha.
inline RankSumResult wilcoxon_rank_sum(std::span<double const> a,
                                       std::span<double const> b,
                                       double alpha = 0.05) {
  std::size_t n1 = a.size();
  std::size_t n2 = b.size();
  if (n1 < 3 || n2 < 3)
    throw std::invalid_argument("rank-sum test needs at least 3 per sample");
  std::size_t n = n1 + n2;

  std::vector<std::pair<double, int>> pooled;
  pooled.reserve(n);
  for (double v : a) pooled.emplace_back(v, 0);
  for (double v : b) pooled.emplace_back(v, 1);
  std::stable_sort(pooled.begin(), pooled.end(),
                   [](auto const& x, auto const& y) { return x.first < y.first; });
  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = pooled[i].first;
  std::vector<double> ranks = detail::midranks(values);

  double r1 = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    if (pooled[i].second == 0) r1 += ranks[i];
  double mu = 0.5 * static_cast<double>(n1) * static_cast<double>(n2);
  RankSumResult result;
  result.u = r1 - 0.5 * static_cast<double>(n1 * (n1 + 1));

  bool all_equal = values.front() == values.back();
  if (all_equal) {
    result.p = 1.0;
    result.verdict = '=';
    return result;
  }

  result.p = n <= 12 ? detail::exact_rank_sum_p(ranks, n1, result.u)
                     : detail::normal_rank_sum_p(values, n1, n2, result.u);

  if (result.p < alpha) result.verdict = result.u < mu ? '+' : '-';
  return result;
}

struct RankTable {
  std::vector<std::vector<int>> ranks;  // [benchmark][method]
  std::vector<double> average;          // per method
};

// Rank 1 is the lowest median; ties share the lower rank.
inline RankTable rank_table(std::vector<std::vector<double>> const& medians) {
  RankTable table;
  if (medians.empty()) return table;
  std::size_t n_benchmarks = medians.size();
  std::size_t n_methods = medians.front().size();
  for (auto const& row : medians)
    if (row.size() != n_methods)
      throw std::invalid_argument("rank_table: ragged median table");

  table.ranks.resize(n_benchmarks, std::vector<int>(n_methods));
  table.average.assign(n_methods, 0.0);
  for (std::size_t b = 0; b < n_benchmarks; ++b) {
    for (std::size_t m = 0; m < n_methods; ++m) {
      double v = medians[b][m];
      if (std::isnan(v)) v = std::numeric_limits<double>::infinity();
      int rank = 1;
      for (std::size_t k = 0; k < n_methods; ++k) {
        double w = medians[b][k];
        if (std::isnan(w)) w = std::numeric_limits<double>::infinity();
        if (w < v) ++rank;
      }
      table.ranks[b][m] = rank;
      table.average[m] += static_cast<double>(rank);
    }
  }
  for (auto& avg : table.average) avg /= static_cast<double>(n_benchmarks);
  return table;
}

}  // namespace neep

#endif  // NEEP_STATS_HPP
