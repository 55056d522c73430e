#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "neep/config.hpp"
#include "neep/experiment.hpp"
#include "neep/gene.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInternal = 2;

std::vector<std::string> split_list(std::string const& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string join(std::vector<std::string> const& items, char sep) {
  std::string out;
  for (auto const& item : items) {
    if (!out.empty()) out.push_back(sep);
    out += item;
  }
  return out;
}

std::size_t edit_distance(std::string const& a, std::string const& b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t next = std::min({row[j] + 1, row[j - 1] + 1,
                                   diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = row[j];
      row[j] = next;
    }
  }
  return row[b.size()];
}

std::string suggestions_for(std::string const& name,
                            std::vector<std::string> const& known) {
  std::vector<std::string> close;
  for (auto const& k : known)
    if (edit_distance(name, k) <= std::max<std::size_t>(2, name.size() / 3))
      close.push_back(k);
  if (close.empty()) return join(known, ' ');
  return join(close, ' ');
}

void write_file(std::filesystem::path const& path, std::string const& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

int cmd_list(std::string const& filter) {
  for (auto const& spec : neep::benchmark_registry()) {
    if (!filter.empty() && spec.name.find(filter) == std::string::npos) continue;
    std::string set = spec.function_set == neep::FunctionSet::a ? "A" : "B";
    if (spec.csv_backed) {
      std::printf("%-10s vars=%-2d set=%s  csv-backed (pass --data)\n",
                  spec.name.c_str(), spec.n_vars, set.c_str());
    } else {
      std::printf("%-10s vars=%-2d set=%s  train %-28s test %s\n", spec.name.c_str(),
                  spec.n_vars, set.c_str(), spec.train.describe().c_str(),
                  spec.test.describe().c_str());
    }
  }
  return kExitOk;
}

int cmd_decode(std::vector<std::string> const& tokens, std::string const& functions,
               std::string const& vars) {
  std::vector<neep::Op> ops;
  if (functions == "a") {
    ops = neep::function_set_a();
  } else if (functions == "b") {
    ops = neep::function_set_b();
  } else if (functions == "full") {
    ops = neep::function_set_full();
  } else {
    std::fprintf(stderr, "unknown function set '%s' (choose a, b or full)\n",
                 functions.c_str());
    return kExitUsage;
  }

  std::vector<std::string> names;
  char* end = nullptr;
  long n = std::strtol(vars.c_str(), &end, 10);
  if (end == vars.c_str() + vars.size() && n >= 1) {
    names = neep::Alphabet::default_names(static_cast<int>(n));
  } else {
    names = split_list(vars);
  }
  if (names.empty()) {
    std::fprintf(stderr, "--vars needs a count or a comma-separated name list\n");
    return kExitUsage;
  }

  neep::Alphabet alphabet(ops, names);
  try {
    auto symbols = neep::parse_symbols(join(tokens, ' '), alphabet);
    std::size_t consumed = 0;
    auto tree = neep::decode_symbols(symbols, &consumed);
    std::printf("%s\n", neep::to_infix(tree, alphabet).c_str());
    std::printf("effective length: %zu of %zu\n", consumed, symbols.size());
    return kExitOk;
  } catch (neep::GeneParseError const& e) {
    std::fprintf(stderr, "parse error: %s\n", e.what());
    return kExitUsage;
  } catch (neep::GeneDecodeError const& e) {
    std::fprintf(stderr, "decode error: %s\n", e.what());
    return kExitUsage;
  }
}

struct RunOptions {
  std::string config_path;
  std::string methods = "cmaes-neep";
  std::string problems;
  std::string out_dir;
  int workers = 0;
  bool progress = false;
  // CLI overrides; negative/empty means "not given".
  int trials = -1;
  long long seed = -1;
  int pop = -1;
  int generations = -1;
  std::string data;
  std::string target_column;
};

int cmd_run(RunOptions const& opt) {
  neep::RunConfig base;
  std::string methods = opt.methods;
  std::string problems = opt.problems;

  if (!opt.config_path.empty()) {
    auto ini = neep::IniFile::load(opt.config_path);
    neep::apply_config(ini, base);
    methods = ini.get_string("experiment", "method", methods);
    problems = ini.get_string("experiment", "problem", problems);
  }
  // Overrides win over file values.
  if (opt.trials >= 0) base.trials = opt.trials;
  if (opt.seed >= 0) base.seed = static_cast<std::uint64_t>(opt.seed);
  if (opt.pop >= 0) base.pop_size = opt.pop;
  if (opt.generations >= 0) base.generations = opt.generations;
  if (!opt.data.empty()) base.data_path = opt.data;
  if (!opt.target_column.empty()) base.target_column = opt.target_column;

  auto method_tokens = split_list(methods);
  auto problem_tokens = split_list(problems);
  if (method_tokens.empty() || problem_tokens.empty()) {
    std::fprintf(stderr, "run needs --method and --problem (or a config file)\n");
    return kExitUsage;
  }

  std::vector<std::string> known_methods;
  for (auto const& [label, m] : neep::method_names()) known_methods.push_back(label);
  std::vector<std::string> known_problems;
  for (auto const& spec : neep::benchmark_registry()) known_problems.push_back(spec.name);

  std::vector<neep::RunConfig> configs;
  for (auto const& m : method_tokens) {
    auto method = neep::parse_method(m);
    if (!method) {
      std::fprintf(stderr, "unknown method '%s'; valid: %s\n", m.c_str(),
                   suggestions_for(m, known_methods).c_str());
      return kExitUsage;
    }
    for (auto const& p : problem_tokens) {
      if (neep::find_benchmark(p) == nullptr) {
        std::fprintf(stderr, "unknown benchmark '%s'; did you mean: %s\n", p.c_str(),
                     suggestions_for(p, known_problems).c_str());
        return kExitUsage;
      }
      neep::RunConfig config = base;
      config.method = *method;
      config.benchmark = p;
      config.validate();
      configs.push_back(std::move(config));
    }
  }

  int workers = opt.workers;
  if (workers <= 0) {
    workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
  }

  std::filesystem::path out_dir;
  if (!opt.out_dir.empty()) {
    out_dir = opt.out_dir;
  } else {
    char const* root = std::getenv("NEEP_OUT");
    out_dir = std::filesystem::path(root != nullptr ? root : "neep_runs") /
              (join(method_tokens, '+') + "_" + join(problem_tokens, '+') + "_s" +
               std::to_string(base.seed));
  }
  std::filesystem::create_directories(out_dir);

  std::string progress_rows = neep::progress_csv_header() + "\n";
  neep::ProgressSink sink;
  if (opt.progress)
    sink = [&progress_rows](neep::ProgressRecord const& r) {
      progress_rows += neep::to_csv_row(r) + "\n";
    };

  std::fprintf(stderr, "running %zu cell(s) x %d trial(s) on %d worker(s)\n",
               configs.size(), base.trials, workers);
  auto suite = neep::run_suite(configs, workers, sink);
  auto rows = neep::summarize(suite);

  auto echo = neep::config_to_ini(base, join(method_tokens, ','),
                                  join(problem_tokens, ','), workers);
  write_file(out_dir / "config.ini", echo.serialize());
  write_file(out_dir / "summary.csv", neep::summary_csv(rows));
  write_file(out_dir / "summary.json", neep::summary_json(rows));
  write_file(out_dir / "trace.csv", neep::trace_csv(suite));
  write_file(out_dir / "trials.csv", neep::trials_csv(suite));
  auto genomes = neep::genomes_text(suite);
  if (!genomes.empty()) write_file(out_dir / "genomes.txt", genomes);
  if (opt.progress) write_file(out_dir / "progress.csv", progress_rows);

  bool any_error = false;
  for (auto const& row : rows) {
    if (!row.error.empty()) {
      any_error = true;
      std::fprintf(stderr, "cell %s/%s failed: %s\n", row.method.c_str(),
                   row.benchmark.c_str(), row.error.c_str());
    } else {
      std::fprintf(stderr, "%-10s %-9s median=%.6g std=%.6g rank=%d %s\n",
                   row.method.c_str(), row.benchmark.c_str(), row.median, row.stddev,
                   row.rank, row.verdict.c_str());
    }
  }
  std::fprintf(stderr, "results written to %s\n", out_dir.string().c_str());
  return any_error ? kExitUsage : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"neuro-encoded expression programming for symbolic regression"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "list the benchmark registry");
  std::string filter;
  list->add_option("--filter", filter, "substring filter on benchmark names");

  auto* run = app.add_subcommand("run", "run an experiment suite");
  RunOptions opt;
  run->add_option("--config", opt.config_path, "key-value config file");
  run->add_option("--method", opt.methods,
                  "comma-separated: ga-neep, pso-neep, cmaes-neep, gep");
  run->add_option("--problem", opt.problems, "comma-separated benchmark names");
  run->add_option("--trials", opt.trials, "independent trials per cell");
  run->add_option("--seed", opt.seed, "master seed");
  run->add_option("--pop", opt.pop, "population size");
  run->add_option("--generations", opt.generations, "generations per trial");
  run->add_option("--workers", opt.workers, "trial worker pool size (0 = hardware)");
  run->add_option("--data", opt.data, "CSV file for csv-backed benchmarks");
  run->add_option("--target-column", opt.target_column,
                  "CSV target column name or index (-1 = last)");
  run->add_option("--out", opt.out_dir, "output directory (default $NEEP_OUT)");
  run->add_flag("--progress", opt.progress,
                "stream per-generation progress of the first trial to progress.csv");

  auto* decode = app.add_subcommand("decode", "decode a gene string to infix form");
  std::vector<std::string> tokens;
  std::string functions = "full";
  std::string vars = "x,y";
  decode->add_option("gene", tokens, "whitespace-separated gene symbols")->required();
  decode->add_option("--functions", functions, "function set: a, b or full");
  decode->add_option("--vars", vars, "variable count or comma-separated names");

  try {
    app.parse(argc, argv);
  } catch (CLI::ParseError const& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (list->parsed()) return cmd_list(filter);
    if (run->parsed()) return cmd_run(opt);
    if (decode->parsed()) return cmd_decode(tokens, functions, vars);
  } catch (neep::ConfigError const& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitUsage;
  } catch (neep::CsvError const& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return kExitUsage;
  } catch (std::invalid_argument const& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (std::exception const& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return kExitInternal;
  }
  return kExitUsage;
}
