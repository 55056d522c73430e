#ifndef NEEP_CONFIG_HPP
#define NEEP_CONFIG_HPP

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "neep/experiment.hpp"

namespace neep {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Plain key-value file with [section] headers; '#' and ';' start comments.
class IniFile {
 public:
  IniFile() = default;

  static IniFile parse(std::istream& in) {
    IniFile ini;
    std::string line;
    std::string section;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      auto text = trim(strip_comment(line));
      if (text.empty()) continue;
      if (text.front() == '[') {
        if (text.back() != ']')
          throw ConfigError("line " + std::to_string(line_no) + ": unterminated section");
        section = trim(text.substr(1, text.size() - 2));
        continue;
      }
      auto eq = text.find('=');
      if (eq == std::string::npos)
        throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
      auto key = trim(text.substr(0, eq));
      auto value = trim(text.substr(eq + 1));
      if (key.empty())
        throw ConfigError("line " + std::to_string(line_no) + ": empty key");
      ini.set(section, key, value);
    }
    return ini;
  }

  static IniFile load(std::string const& path) {
    std::ifstream file(path);
    if (!file) throw ConfigError("cannot open config file: " + path);
    return parse(file);
  }

  void set(std::string const& section, std::string const& key, std::string value) {
    auto full = section + "." + key;
    auto it = index_.find(full);
    if (it == index_.end()) {
      index_[full] = entries_.size();
      entries_.push_back({section, key, std::move(value)});
    } else {
      entries_[it->second].value = std::move(value);
    }
  }

  std::string const* find(std::string const& section, std::string const& key) const {
    auto it = index_.find(section + "." + key);
    return it == index_.end() ? nullptr : &entries_[it->second].value;
  }

  std::string get_string(std::string const& section, std::string const& key,
                         std::string fallback) const {
    auto const* v = find(section, key);
    return v != nullptr ? *v : std::move(fallback);
  }

  double get_double(std::string const& section, std::string const& key,
                    double fallback) const {
    auto const* v = find(section, key);
    if (v == nullptr) return fallback;
    char* end = nullptr;
    double parsed = std::strtod(v->c_str(), &end);
    if (end != v->c_str() + v->size())
      throw ConfigError(section + "." + key + ": not a number: " + *v);
    return parsed;
  }

  std::int64_t get_int(std::string const& section, std::string const& key,
                       std::int64_t fallback) const {
    auto const* v = find(section, key);
    if (v == nullptr) return fallback;
    char* end = nullptr;
    auto parsed = std::strtoll(v->c_str(), &end, 10);
    if (end != v->c_str() + v->size())
      throw ConfigError(section + "." + key + ": not an integer: " + *v);
    return parsed;
  }

  bool get_bool(std::string const& section, std::string const& key,
                bool fallback) const {
    auto const* v = find(section, key);
    if (v == nullptr) return fallback;
    if (*v == "true" || *v == "1" || *v == "yes") return true;
    if (*v == "false" || *v == "0" || *v == "no") return false;
    throw ConfigError(section + "." + key + ": not a boolean: " + *v);
  }

  // Serialization preserves insertion order, grouped by section.
  std::string serialize() const {
    std::string out;
    std::vector<std::string> sections;
    for (auto const& e : entries_)
      if (std::find(sections.begin(), sections.end(), e.section) == sections.end())
        sections.push_back(e.section);
    for (auto const& s : sections) {
      if (!out.empty()) out += "\n";
      if (!s.empty()) out += "[" + s + "]\n";
      for (auto const& e : entries_)
        if (e.section == s) out += e.key + " = " + e.value + "\n";
    }
    return out;
  }

 private:
  struct Entry {
    std::string section;
    std::string key;
    std::string value;
  };

  static std::string strip_comment(std::string const& line) {
    auto pos = line.find_first_of("#;");
    return pos == std::string::npos ? line : line.substr(0, pos);
  }

  static std::string trim(std::string const& text) {
    auto begin = text.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    auto end = text.find_last_not_of(" \t\r");
    return text.substr(begin, end - begin + 1);
  }

  std::vector<Entry> entries_;
  std::map<std::string, std::size_t> index_;
};

namespace detail {

inline std::string fmt_config_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

}  // namespace detail

// Applies file values on top of the built-in defaults. Method and benchmark
// are handled by the caller (they may be comma-separated lists).
inline void apply_config(IniFile const& ini, RunConfig& config) {
  config.trials = static_cast<int>(ini.get_int("experiment", "trials", config.trials));
  config.seed = static_cast<std::uint64_t>(
      ini.get_int("experiment", "seed", static_cast<std::int64_t>(config.seed)));
  config.pop_size = static_cast<int>(ini.get_int("experiment", "pop", config.pop_size));
  config.generations = static_cast<int>(
      ini.get_int("experiment", "generations", config.generations));
  config.data_path = ini.get_string("experiment", "data", config.data_path);
  config.target_column =
      ini.get_string("experiment", "target_column", config.target_column);
  config.train_fraction =
      ini.get_double("experiment", "train_fraction", config.train_fraction);

  auto& enc = config.encoder;
  enc.n_hidden = static_cast<int>(ini.get_int("encoder", "hidden", enc.n_hidden));
  enc.time_steps = static_cast<int>(ini.get_int("encoder", "time_steps", enc.time_steps));
  enc.sparsity = ini.get_double("encoder", "sparsity", enc.sparsity);
  enc.fixed_weight_lo = ini.get_double("encoder", "fixed_weight_lo", enc.fixed_weight_lo);
  enc.fixed_weight_hi = ini.get_double("encoder", "fixed_weight_hi", enc.fixed_weight_hi);
  enc.init_weight_lo = ini.get_double("encoder", "init_weight_lo", enc.init_weight_lo);
  enc.init_weight_hi = ini.get_double("encoder", "init_weight_hi", enc.init_weight_hi);
  enc.head_len = static_cast<int>(ini.get_int("encoder", "head", enc.head_len));
  enc.fixed_weights_per_trial =
      ini.get_bool("encoder", "fixed_weights_per_trial", enc.fixed_weights_per_trial);

  config.ga.crossover_rate = ini.get_double("ga", "crossover_rate", config.ga.crossover_rate);
  config.ga.mutation_sigma_factor =
      ini.get_double("ga", "mutation_sigma_factor", config.ga.mutation_sigma_factor);
  config.ga.tournament_size =
      static_cast<int>(ini.get_int("ga", "tournament_size", config.ga.tournament_size));

  config.pso.inertia = ini.get_double("pso", "inertia", config.pso.inertia);
  config.pso.cognitive = ini.get_double("pso", "cognitive", config.pso.cognitive);
  config.pso.social = ini.get_double("pso", "social", config.pso.social);

  config.cmaes.sigma_factor =
      ini.get_double("cmaes", "sigma_factor", config.cmaes.sigma_factor);

  auto& gep = config.gep;
  gep.crossover_rate = ini.get_double("gep", "crossover_rate", gep.crossover_rate);
  gep.mutation_rate = ini.get_double("gep", "mutation_rate", gep.mutation_rate);
  gep.is_rate = ini.get_double("gep", "is_rate", gep.is_rate);
  gep.ris_rate = ini.get_double("gep", "ris_rate", gep.ris_rate);
  gep.inversion_rate = ini.get_double("gep", "inversion_rate", gep.inversion_rate);
  gep.tournament_size =
      static_cast<int>(ini.get_int("gep", "tournament_size", gep.tournament_size));
  gep.elitism = static_cast<int>(ini.get_int("gep", "elitism", gep.elitism));
  gep.max_transposon_len = static_cast<int>(
      ini.get_int("gep", "max_transposon_len", gep.max_transposon_len));
}

// Effective-config echo; every tunable default appears here.
inline IniFile config_to_ini(RunConfig const& config, std::string const& methods,
                             std::string const& problems, int workers) {
  using detail::fmt_config_double;
  IniFile ini;
  ini.set("experiment", "method", methods);
  ini.set("experiment", "problem", problems);
  ini.set("experiment", "trials", std::to_string(config.trials));
  ini.set("experiment", "seed", std::to_string(config.seed));
  ini.set("experiment", "pop", std::to_string(config.pop_size));
  ini.set("experiment", "generations", std::to_string(config.generations));
  ini.set("experiment", "workers", std::to_string(workers));
  if (!config.data_path.empty()) ini.set("experiment", "data", config.data_path);
  ini.set("experiment", "target_column", config.target_column);
  ini.set("experiment", "train_fraction", fmt_config_double(config.train_fraction));

  auto const& enc = config.encoder;
  ini.set("encoder", "hidden", std::to_string(enc.n_hidden));
  ini.set("encoder", "time_steps", std::to_string(enc.time_steps));
  ini.set("encoder", "sparsity", fmt_config_double(enc.sparsity));
  ini.set("encoder", "fixed_weight_lo", fmt_config_double(enc.fixed_weight_lo));
  ini.set("encoder", "fixed_weight_hi", fmt_config_double(enc.fixed_weight_hi));
  ini.set("encoder", "init_weight_lo", fmt_config_double(enc.init_weight_lo));
  ini.set("encoder", "init_weight_hi", fmt_config_double(enc.init_weight_hi));
  ini.set("encoder", "head", std::to_string(enc.head_len));
  ini.set("encoder", "fixed_weights_per_trial",
          enc.fixed_weights_per_trial ? "true" : "false");

  ini.set("ga", "crossover_rate", fmt_config_double(config.ga.crossover_rate));
  ini.set("ga", "mutation_sigma_factor",
          fmt_config_double(config.ga.mutation_sigma_factor));
  ini.set("ga", "tournament_size", std::to_string(config.ga.tournament_size));

  ini.set("pso", "inertia", fmt_config_double(config.pso.inertia));
  ini.set("pso", "cognitive", fmt_config_double(config.pso.cognitive));
  ini.set("pso", "social", fmt_config_double(config.pso.social));

  ini.set("cmaes", "sigma_factor", fmt_config_double(config.cmaes.sigma_factor));

  ini.set("gep", "crossover_rate", fmt_config_double(config.gep.crossover_rate));
  ini.set("gep", "mutation_rate", fmt_config_double(config.gep.mutation_rate));
  ini.set("gep", "is_rate", fmt_config_double(config.gep.is_rate));
  ini.set("gep", "ris_rate", fmt_config_double(config.gep.ris_rate));
  ini.set("gep", "inversion_rate", fmt_config_double(config.gep.inversion_rate));
  ini.set("gep", "tournament_size", std::to_string(config.gep.tournament_size));
  ini.set("gep", "elitism", std::to_string(config.gep.elitism));
  ini.set("gep", "max_transposon_len",
          std::to_string(config.gep.max_transposon_len));
  return ini;
}

}  // namespace neep

#endif  // NEEP_CONFIG_HPP
