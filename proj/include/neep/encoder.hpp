#ifndef NEEP_ENCODER_HPP
#define NEEP_ENCODER_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "neep/gene.hpp"
#include "neep/random.hpp"
#include "neep/symbols.hpp"

namespace neep {

// Recurrent encoder settings (paper's experimental defaults).
struct EncoderConfig {
  int n_hidden = 40;
  int time_steps = 10;
  double sparsity = 0.5;
  double fixed_weight_lo = -1.0;  // range of the fixed hidden weights
  double fixed_weight_hi = 1.0;
  double init_weight_lo = -2.0;   // initial range of the evolved output weights
  double init_weight_hi = 2.0;
  int head_len = 30;
  bool fixed_weights_per_trial = true;  // regenerate A per trial vs per experiment

  void validate() const {
    if (n_hidden < 1) throw std::invalid_argument("n_hidden must be >= 1");
    if (time_steps < 1) throw std::invalid_argument("time_steps must be >= 1");
    if (sparsity < 0.0 || sparsity > 1.0)
      throw std::invalid_argument("sparsity must lie in [0, 1]");
    if (head_len < 1) throw std::invalid_argument("head_len must be >= 1");
  }
};

inline double gaussian_activation(double x) { return std::exp(-x * x); }

// Hidden-to-hidden weight matrix, randomized once and shared read-only by
// every individual. Exactly round(sparsity * n^2) entries are zero.
struct FixedHiddenWeights {
  int n_hidden = 0;
  std::uint64_t seed = 0;
  std::vector<double> values;  // n_hidden x n_hidden, row-major

  double at(int row, int col) const {
    return values[static_cast<std::size_t>(row) * static_cast<std::size_t>(n_hidden) +
                  static_cast<std::size_t>(col)];
  }
};

inline FixedHiddenWeights make_fixed_weights(EncoderConfig const& config,
                                             std::uint64_t seed) {
  config.validate();
  std::size_t n = static_cast<std::size_t>(config.n_hidden);
  std::size_t total = n * n;
  FixedHiddenWeights w;
  w.n_hidden = config.n_hidden;
  w.seed = seed;
  w.values.resize(total);
  Rng rng(seed);
  for (auto& v : w.values)
    v = rng.uniform(config.fixed_weight_lo, config.fixed_weight_hi);
  // Zero positions drawn uniformly without replacement (partial shuffle).
  auto zeros = static_cast<std::size_t>(
      std::llround(config.sparsity * static_cast<double>(total)));
  std::vector<std::uint32_t> idx(total);
  for (std::size_t i = 0; i < total; ++i) idx[i] = static_cast<std::uint32_t>(i);
  for (std::size_t i = 0; i < zeros; ++i) {
    std::size_t j = i + rng.below(total - i);
    std::swap(idx[i], idx[j]);
    w.values[idx[i]] = 0.0;
  }
  return w;
}

// Hidden activations; initialized to all zeros.
struct EncoderState {
  std::vector<double> hidden;

  explicit EncoderState(int n_hidden = 0)
      : hidden(static_cast<std::size_t>(n_hidden), 0.0) {}
};

// One recurrent step: h'_i = f(sum_j A_ij h_j). No external input.
inline EncoderState step(EncoderState const& state, FixedHiddenWeights const& a) {
  if (static_cast<int>(state.hidden.size()) != a.n_hidden)
    throw std::invalid_argument("state size does not match weight matrix");
  EncoderState next(a.n_hidden);
  int n = a.n_hidden;
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    double const* row = a.values.data() + static_cast<std::size_t>(i) * n;
    for (int j = 0; j < n; ++j) acc += row[j] * state.hidden[static_cast<std::size_t>(j)];
    next.hidden[static_cast<std::size_t>(i)] = gaussian_activation(acc);
  }
  return next;
}

// Number of evolved weights: one row per output neuron (one neuron per
// alphabet symbol plus the position-insertion neuron).
inline std::size_t genome_length(EncoderConfig const& config, Alphabet const& alphabet) {
  return (alphabet.size() + 1) * static_cast<std::size_t>(config.n_hidden);
}

inline std::size_t n_outputs(Alphabet const& alphabet) { return alphabet.size() + 1; }

// o_j = f(sum_k W_jk h_k); genome is row-major by output neuron.
inline std::vector<double> read_outputs(EncoderState const& state,
                                        std::span<double const> genome,
                                        std::size_t n_out) {
  std::size_t n_hidden = state.hidden.size();
  if (genome.size() != n_out * n_hidden)
    throw std::invalid_argument("genome length does not match outputs x hidden");
  std::vector<double> out(n_out);
  for (std::size_t j = 0; j < n_out; ++j) {
    double acc = 0.0;
    double const* row = genome.data() + j * n_hidden;
    for (std::size_t k = 0; k < n_hidden; ++k) acc += row[k] * state.hidden[k];
    out[j] = gaussian_activation(acc);
  }
  return out;
}

enum class InsertPhase { head, tail };

// Eq. 1 (head) / Eq. 2 (tail) insertion point, 1-based, with round(x) =
// floor(x + 0.5). Clamping keeps the boundary cases of Eq. 2 legal
// (i_out -> 0+ lands on the head side and is pulled back to h + 1).
inline int insertion_position(double i_out, int current_len, int head_len,
                              InsertPhase phase) {
  if (!(i_out >= 0.0 && i_out <= 1.0))
    throw std::logic_error("position rate outside [0, 1]");
  auto round_half_up = [](double x) {
    return static_cast<int>(std::floor(x + 0.5));
  };
  if (phase == InsertPhase::head) {
    int p = round_half_up(i_out * current_len + 1.0);
    return std::clamp(p, 1, current_len + 1);
  }
  int p = round_half_up(i_out * (current_len - head_len + 1) + head_len);
  return std::clamp(p, head_len + 1, current_len + 1);
}

// Argmax symbol choice; the position neuron is excluded. In the tail phase
// only terminal neurons compete. Ties break to the lowest alphabet index.
inline Symbol select_symbol(std::span<double const> outputs, InsertPhase phase,
                            Alphabet const& alphabet) {
  std::size_t begin = phase == InsertPhase::head ? 0 : alphabet.n_functions();
  std::size_t end = alphabet.size();
  std::size_t best = begin;
  for (std::size_t j = begin + 1; j < end; ++j)
    if (outputs[j] > outputs[best]) best = j;
  return alphabet.symbol_at(best);
}

// Hidden states at each of the head+tail readout instants. The recurrence
// has no input, so the trajectory is shared by every genome and can be
// computed once per fixed-weight matrix.
class EncoderRollout {
 public:
  EncoderRollout(FixedHiddenWeights const& weights, EncoderConfig const& config,
                 Alphabet const& alphabet)
      : n_hidden_(config.n_hidden),
        head_len_(config.head_len),
        tail_len_(tail_length(config.head_len, alphabet.max_arity())) {
    config.validate();
    if (weights.n_hidden != config.n_hidden)
      throw std::invalid_argument("weight matrix does not match config");
    int insertions = head_len_ + tail_len_;
    states_.reserve(static_cast<std::size_t>(insertions) *
                    static_cast<std::size_t>(n_hidden_));
    EncoderState state(n_hidden_);
    for (int k = 0; k < insertions; ++k) {
      for (int t = 0; t < config.time_steps; ++t) state = step(state, weights);
      states_.insert(states_.end(), state.hidden.begin(), state.hidden.end());
    }
  }

  int head_len() const { return head_len_; }
  int tail_len() const { return tail_len_; }
  int insertions() const { return head_len_ + tail_len_; }
  int n_hidden() const { return n_hidden_; }

  std::span<double const> state_at(int insertion) const {
    return {states_.data() + static_cast<std::size_t>(insertion) *
                                 static_cast<std::size_t>(n_hidden_),
            static_cast<std::size_t>(n_hidden_)};
  }

 private:
  int n_hidden_;
  int head_len_;
  int tail_len_;
  std::vector<double> states_;
};

// Deterministic genome -> gene translation: per insertion, advance the
// recurrence T steps (hidden state persists across insertions), read the
// outputs, pick the symbol by phase and insert it at the Eq. 1/Eq. 2
// position (list insertion; existing symbols shift right).
inline Gene generate_gene(std::span<double const> genome,
                          EncoderRollout const& rollout, Alphabet const& alphabet) {
  std::size_t n_out = n_outputs(alphabet);
  std::size_t n_hidden = static_cast<std::size_t>(rollout.n_hidden());
  if (genome.size() != n_out * n_hidden)
    throw std::invalid_argument("genome length does not match outputs x hidden");

  int head_len = rollout.head_len();
  Gene gene;
  gene.head_len = head_len;
  gene.tail_len = rollout.tail_len();
  gene.symbols.reserve(static_cast<std::size_t>(rollout.insertions()));

  std::vector<double> outputs(n_out);
  for (int k = 0; k < rollout.insertions(); ++k) {
    auto hidden = rollout.state_at(k);
    for (std::size_t j = 0; j < n_out; ++j) {
      double acc = 0.0;
      double const* row = genome.data() + j * n_hidden;
      for (std::size_t h = 0; h < n_hidden; ++h) acc += row[h] * hidden[h];
      outputs[j] = gaussian_activation(acc);
    }
    int current_len = gene.length();
    InsertPhase phase =
        current_len < head_len ? InsertPhase::head : InsertPhase::tail;
    Symbol symbol = select_symbol(outputs, phase, alphabet);
    double i_out = outputs[n_out - 1];
    int pos = insertion_position(i_out, current_len, head_len, phase);
    gene.symbols.insert(gene.symbols.begin() + (pos - 1), symbol);
  }
  return gene;
}

inline Gene generate_gene(std::span<double const> genome,
                          FixedHiddenWeights const& weights,
                          EncoderConfig const& config, Alphabet const& alphabet) {
  EncoderRollout rollout(weights, config, alphabet);
  return generate_gene(genome, rollout, alphabet);
}

// Flat numeric text row; round-trips a genome for reproducibility files.
inline std::string genome_to_text(std::span<double const> genome) {
  std::string out;
  char buf[40];
  for (std::size_t i = 0; i < genome.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", genome[i]);
    if (i > 0) out.push_back(' ');
    out += buf;
  }
  return out;
}

inline std::vector<double> parse_genome_text(std::string const& text) {
  std::vector<double> genome;
  std::istringstream in(text);
  double v = 0.0;
  while (in >> v) genome.push_back(v);
  if (!in.eof()) throw std::invalid_argument("genome text contains a non-number");
  return genome;
}

}  // namespace neep

#endif  // NEEP_ENCODER_HPP
