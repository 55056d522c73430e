#ifndef NEEP_EXPERIMENT_HPP
#define NEEP_EXPERIMENT_HPP

#include <atomic>
#include <cctype>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "neep/benchmarks.hpp"
#include "neep/cmaes.hpp"
#include "neep/csv.hpp"
#include "neep/encoder.hpp"
#include "neep/ga.hpp"
#include "neep/gep.hpp"
#include "neep/pso.hpp"
#include "neep/stats.hpp"

namespace neep {

enum class Method { ga_neep, pso_neep, cmaes_neep, gep };

inline std::vector<std::pair<std::string, Method>> const& method_names() {
  static std::vector<std::pair<std::string, Method>> const names = {
      {"ga-neep", Method::ga_neep},
      {"pso-neep", Method::pso_neep},
      {"cmaes-neep", Method::cmaes_neep},
      {"gep", Method::gep},
  };
  return names;
}

inline std::string method_label(Method m) {
  switch (m) {
    case Method::ga_neep: return "GA-NEEP";
    case Method::pso_neep: return "PSO-NEEP";
    case Method::cmaes_neep: return "CMAES-NEEP";
    case Method::gep: return "GEP";
  }
  return "?";
}

inline std::optional<Method> parse_method(std::string name) {
  for (auto& c : name) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  for (auto const& [label, m] : method_names())
    if (label == name) return m;
  return std::nullopt;
}

struct RunConfig {
  Method method = Method::cmaes_neep;
  std::string benchmark;
  int trials = 50;
  std::uint64_t seed = 0;
  int pop_size = 100;
  int generations = 500;
  EncoderConfig encoder;
  GaParams ga;
  PsoParams pso;
  CmaesParams cmaes;
  GepParams gep;
  std::string data_path;          // CSV-backed benchmarks
  std::string target_column = "-1";  // header name or index; -1 = last column
  double train_fraction = 0.7;    // CSV-backed split

  void validate() const {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (pop_size < 4) throw std::invalid_argument("population size must be >= 4");
    if (generations < 1) throw std::invalid_argument("generations must be >= 1");
    encoder.validate();
  }
};

struct TrialResult {
  Gene best_gene;
  std::string gene_text;            // serialized gene, parse_gene round-trips
  std::string expression;
  std::vector<double> genome;       // best RNN output weights; empty for GEP
  std::vector<double> train_trace;  // best-so-far train MSE per generation
  double train_mse = kWorstFitness;
  double test_mse = kWorstFitness;
  double wall_seconds = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t evaluations = 0;
  int restarts = 0;
};

namespace detail {

// Seed streams inside one trial.
enum : std::uint64_t {
  kStreamDatasets = 0,
  kStreamWeights = 3,
  kStreamOptimizer = 4,
  kStreamExperimentWeights = 0xF17Edull,
};

}  // namespace detail

// One independent trial: derive the trial seed, build datasets and fixed
// weights, optimize genomes (or run the GEP baseline), then score the best
// individual on the test data.
inline TrialResult run_trial(RunConfig const& config, BenchmarkSpec const& spec,
                             int trial_index,
                             Dataset const* csv_all = nullptr,
                             ProgressSink const& progress = nullptr) {
  config.validate();
  auto start = std::chrono::steady_clock::now();
  std::uint64_t trial_seed = derive_seed(config.seed, static_cast<std::uint64_t>(trial_index));

  Alphabet alphabet = alphabet_for(spec);
  Dataset train;
  Dataset test;
  if (spec.csv_backed) {
    if (csv_all == nullptr)
      throw std::invalid_argument(spec.name + " requires a loaded CSV dataset");
    std::tie(train, test) = split_train_test(
        *csv_all, config.train_fraction, derive_seed(trial_seed, detail::kStreamDatasets));
  } else {
    std::tie(train, test) = make_train_test(spec, trial_seed);
  }

  TrialResult result;
  result.seed = trial_seed;

  if (config.method == Method::gep) {
    GepParams params = config.gep;
    params.pop_size = config.pop_size;
    params.generations = config.generations;
    params.head_len = config.encoder.head_len;
    Rng rng(derive_seed(trial_seed, detail::kStreamOptimizer));
    GepResult gep = gep_evolve(params, train, alphabet, rng, progress);
    result.best_gene = std::move(gep.best_gene);
    result.train_trace = std::move(gep.history);
    result.train_mse = gep.best_fitness;
    result.evaluations = gep.evaluations;
  } else {
    std::uint64_t weight_seed =
        config.encoder.fixed_weights_per_trial
            ? derive_seed(trial_seed, detail::kStreamWeights)
            : derive_seed(config.seed, detail::kStreamExperimentWeights);
    FixedHiddenWeights weights = make_fixed_weights(config.encoder, weight_seed);
    EncoderRollout rollout(weights, config.encoder, alphabet);

    Objective objective;
    objective.dimension = genome_length(config.encoder, alphabet);
    objective.evaluate = [&](std::span<double const> genome) {
      return mse_fitness(decode(generate_gene(genome, rollout, alphabet)), train);
    };
    OptimizerRun run;
    run.population_size = config.pop_size;
    run.generations = config.generations;
    run.seed = derive_seed(trial_seed, detail::kStreamOptimizer);
    run.init_lo = config.encoder.init_weight_lo;
    run.init_hi = config.encoder.init_weight_hi;

    BestSoFar best;
    switch (config.method) {
      case Method::ga_neep: best = ga_minimize(objective, run, config.ga, progress); break;
      case Method::pso_neep: best = pso_minimize(objective, run, config.pso, progress); break;
      default: best = cmaes_minimize(objective, run, config.cmaes, progress); break;
    }
    result.best_gene = generate_gene(best.vector, rollout, alphabet);
    result.genome = std::move(best.vector);
    result.train_trace = std::move(best.history);
    result.train_mse = best.fitness;
    result.evaluations = best.evaluations;
    result.restarts = best.restarts;
  }

  result.gene_text = gene_to_string(result.best_gene, alphabet);
  result.expression = to_infix(decode(result.best_gene), alphabet);
  result.test_mse = mse_fitness(decode(result.best_gene), test);
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

struct CellResult {
  RunConfig config;
  std::vector<TrialResult> trials;
  std::string error;  // non-empty when the cell failed

  bool ok() const { return error.empty(); }

  std::vector<double> test_errors() const {
    std::vector<double> v;
    v.reserve(trials.size());
    for (auto const& t : trials) v.push_back(t.test_mse);
    return v;
  }
};

struct SuiteResult {
  std::vector<CellResult> cells;
};

inline void parallel_for(std::size_t jobs, int workers,
                         std::function<void(std::size_t)> const& body) {
  if (workers <= 1 || jobs <= 1) {
    for (std::size_t i = 0; i < jobs; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto loop = [&] {
    for (std::size_t i = next.fetch_add(1); i < jobs; i = next.fetch_add(1)) body(i);
  };
  std::vector<std::thread> pool;
  auto n_threads = std::min<std::size_t>(static_cast<std::size_t>(workers), jobs);
  pool.reserve(n_threads);
  for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(loop);
  for (auto& t : pool) t.join();
}

// Executes every (method x benchmark) cell; trials are independent jobs on a
// bounded worker pool. A failing cell records its error and the suite
// continues. The optional sink streams per-generation progress of the first
// cell's first trial.
inline SuiteResult run_suite(std::vector<RunConfig> const& configs, int workers = 1,
                             ProgressSink const& first_trial_progress = nullptr) {
  SuiteResult suite;
  suite.cells.resize(configs.size());

  struct Job {
    std::size_t cell;
    int trial;
  };
  std::vector<Job> jobs;
  std::vector<std::optional<Dataset>> csv_data(configs.size());
  std::vector<BenchmarkSpec const*> specs(configs.size(), nullptr);

  for (std::size_t c = 0; c < configs.size(); ++c) {
    auto& cell = suite.cells[c];
    cell.config = configs[c];
    BenchmarkSpec const* spec = find_benchmark(configs[c].benchmark);
    if (spec == nullptr) {
      cell.error = "unknown benchmark: " + configs[c].benchmark;
      continue;
    }
    specs[c] = spec;
    if (spec->csv_backed) {
      try {
        if (configs[c].data_path.empty())
          throw CsvError(spec->name + " requires --data <csv>");
        csv_data[c] =
            load_csv_dataset(configs[c].data_path, configs[c].target_column).data;
      } catch (std::exception const& e) {
        cell.error = e.what();
        continue;
      }
    }
    cell.trials.resize(static_cast<std::size_t>(configs[c].trials));
    for (int t = 0; t < configs[c].trials; ++t) jobs.push_back({c, t});
  }

  std::mutex error_mutex;
  parallel_for(jobs.size(), workers, [&](std::size_t j) {
    auto [c, t] = jobs[j];
    auto& cell = suite.cells[c];
    try {
      Dataset const* csv = csv_data[c] ? &*csv_data[c] : nullptr;
      static ProgressSink const no_sink{};
      auto const& sink = c == 0 && t == 0 ? first_trial_progress : no_sink;
      cell.trials[static_cast<std::size_t>(t)] =
          run_trial(cell.config, *specs[c], t, csv, sink);
    } catch (std::exception const& e) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (cell.error.empty())
        cell.error = "trial " + std::to_string(t) + ": " + e.what();
    }
  });
  for (auto& cell : suite.cells)
    if (!cell.ok()) cell.trials.clear();
  return suite;
}

struct SummaryRow {
  std::string method;
  std::string benchmark;
  int trials = 0;
  double median = 0.0;
  double stddev = 0.0;
  int rank = 0;
  std::string verdict;  // vs GEP; empty when not applicable
  std::string error;
};

// Table-shaped summary: per-cell median/std of test errors, per-benchmark
// ranks (1 = lowest median, ties share the lower rank) and rank-sum verdicts
// of each proposed method against the GEP baseline.
inline std::vector<SummaryRow> summarize(SuiteResult const& suite, double alpha = 0.05) {
  std::vector<SummaryRow> rows(suite.cells.size());
  for (std::size_t c = 0; c < suite.cells.size(); ++c) {
    auto const& cell = suite.cells[c];
    auto& row = rows[c];
    row.method = method_label(cell.config.method);
    row.benchmark = cell.config.benchmark;
    row.trials = static_cast<int>(cell.trials.size());
    row.error = cell.error;
    if (!cell.ok()) continue;
    auto errors = cell.test_errors();
    auto [median, stddev] = median_and_std(errors);
    row.median = median;
    row.stddev = stddev;
  }

  // Ranks within each benchmark, over the cells that succeeded.
  for (std::size_t c = 0; c < rows.size(); ++c) {
    if (!rows[c].error.empty()) continue;
    int rank = 1;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      if (k == c || !rows[k].error.empty()) continue;
      if (rows[k].benchmark != rows[c].benchmark) continue;
      if (rows[k].median < rows[c].median) ++rank;
    }
    rows[c].rank = rank;
  }

  // Verdicts against the GEP cell on the same benchmark.
  for (std::size_t c = 0; c < rows.size(); ++c) {
    auto const& cell = suite.cells[c];
    if (!cell.ok() || cell.config.method == Method::gep) continue;
    for (std::size_t k = 0; k < suite.cells.size(); ++k) {
      auto const& other = suite.cells[k];
      if (!other.ok() || other.config.method != Method::gep) continue;
      if (other.config.benchmark != cell.config.benchmark) continue;
      auto a = cell.test_errors();
      auto b = other.test_errors();
      if (a.size() < 3 || b.size() < 3) continue;
      rows[c].verdict = std::string(1, wilcoxon_rank_sum(a, b, alpha).verdict);
      break;
    }
  }
  return rows;
}

namespace detail {

inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

inline std::string summary_csv(std::vector<SummaryRow> const& rows) {
  std::string out = "method,benchmark,trials,median_test_mse,std_test_mse,rank,verdict_vs_gep\n";
  for (auto const& r : rows) {
    if (!r.error.empty()) {
      out += r.method + "," + r.benchmark + "," + std::to_string(r.trials) +
             ",error,error,0,\n";
      continue;
    }
    out += r.method + "," + r.benchmark + "," + std::to_string(r.trials) + "," +
           detail::fmt_double(r.median) + "," + detail::fmt_double(r.stddev) + "," +
           std::to_string(r.rank) + "," + r.verdict + "\n";
  }
  return out;
}

// Per-generation mean of the best-so-far training error over trials.
inline std::string trace_csv(SuiteResult const& suite) {
  std::string out = "method,benchmark,generation,mean_best_train_mse\n";
  for (auto const& cell : suite.cells) {
    if (!cell.ok() || cell.trials.empty()) continue;
    std::size_t gens = cell.trials.front().train_trace.size();
    for (std::size_t g = 0; g < gens; ++g) {
      double sum = 0.0;
      for (auto const& t : cell.trials) sum += t.train_trace[g];
      double mean = sum / static_cast<double>(cell.trials.size());
      out += method_label(cell.config.method) + "," + cell.config.benchmark + "," +
             std::to_string(g) + "," + detail::fmt_double(mean) + "\n";
    }
  }
  return out;
}

// Machine-readable mirror of the summary; non-finite aggregates are emitted
// as strings since JSON has no inf/nan literals.
inline std::string summary_json(std::vector<SummaryRow> const& rows) {
  auto number_or_string = [](double v) -> nlohmann::json {
    if (std::isfinite(v)) return v;
    return detail::fmt_double(v);
  };
  nlohmann::json doc;
  doc["rows"] = nlohmann::json::array();
  std::vector<std::string> methods;
  for (auto const& r : rows) {
    nlohmann::json row;
    row["method"] = r.method;
    row["benchmark"] = r.benchmark;
    row["trials"] = r.trials;
    if (r.error.empty()) {
      row["median_test_mse"] = number_or_string(r.median);
      row["std_test_mse"] = number_or_string(r.stddev);
      row["rank"] = r.rank;
      row["verdict_vs_gep"] = r.verdict;
    } else {
      row["error"] = r.error;
    }
    doc["rows"].push_back(std::move(row));
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end())
      methods.push_back(r.method);
  }
  nlohmann::json averages;
  for (auto const& m : methods) {
    double sum = 0.0;
    int count = 0;
    for (auto const& r : rows)
      if (r.method == m && r.error.empty()) {
        sum += r.rank;
        ++count;
      }
    if (count > 0) averages[m] = sum / count;
  }
  doc["average_rank"] = std::move(averages);
  return doc.dump(2) + "\n";
}

inline std::string trials_csv(SuiteResult const& suite) {
  std::string out =
      "method,benchmark,trial,seed,train_mse,test_mse,evaluations,gene,expression\n";
  for (auto const& cell : suite.cells) {
    for (std::size_t t = 0; t < cell.trials.size(); ++t) {
      auto const& tr = cell.trials[t];
      out += method_label(cell.config.method) + "," + cell.config.benchmark + "," +
             std::to_string(t) + "," + std::to_string(tr.seed) + "," +
             detail::fmt_double(tr.train_mse) + "," + detail::fmt_double(tr.test_mse) +
             "," + std::to_string(tr.evaluations) + "," + tr.gene_text + "," +
             tr.expression + "\n";
    }
  }
  return out;
}

// One line per NEEP trial: method benchmark trial followed by the flat
// genome row; enough to regenerate the gene with the echoed config.
inline std::string genomes_text(SuiteResult const& suite) {
  std::string out;
  for (auto const& cell : suite.cells) {
    for (std::size_t t = 0; t < cell.trials.size(); ++t) {
      auto const& tr = cell.trials[t];
      if (tr.genome.empty()) continue;
      out += method_label(cell.config.method) + " " + cell.config.benchmark + " " +
             std::to_string(t) + " " + genome_to_text(tr.genome) + "\n";
    }
  }
  return out;
}

}  // namespace neep

#endif  // NEEP_EXPERIMENT_HPP
