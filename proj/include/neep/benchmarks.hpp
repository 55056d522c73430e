#ifndef NEEP_BENCHMARKS_HPP
#define NEEP_BENCHMARKS_HPP

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "neep/csv.hpp"
#include "neep/dataset.hpp"
#include "neep/expression.hpp"
#include "neep/random.hpp"
#include "neep/symbols.hpp"

namespace neep {

enum class FunctionSet { a, b };

struct MeshAxis {
  double lo = 0.0;
  double hi = 0.0;
  double step = 1.0;
};

// U[a, b, c]: c samples per variable, iid uniform on [a, b].
// E[a, b, c]: per-variable grid from a to b inclusive with interval c;
// multiple variables form the Cartesian product.
struct SamplerSpec {
  enum class Kind { uniform, mesh };
  Kind kind = Kind::uniform;
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 0;
  std::vector<MeshAxis> axes;

  static SamplerSpec uniform(double lo, double hi, std::size_t count) {
    SamplerSpec s;
    s.kind = Kind::uniform;
    s.lo = lo;
    s.hi = hi;
    s.count = count;
    return s;
  }

  static SamplerSpec mesh(std::vector<MeshAxis> axes) {
    SamplerSpec s;
    s.kind = Kind::mesh;
    s.axes = std::move(axes);
    return s;
  }

  std::string describe() const {
    char buf[96];
    if (kind == Kind::uniform) {
      std::snprintf(buf, sizeof(buf), "U[%g, %g, %zu]", lo, hi, count);
      return buf;
    }
    std::string out;
    for (std::size_t i = 0; i < axes.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "E[%g, %g, %g]", axes[i].lo, axes[i].hi,
                    axes[i].step);
      if (i > 0) out += " x ";
      out += buf;
    }
    return out;
  }
};

struct BenchmarkSpec {
  std::string name;
  int n_vars = 1;  // terminal count, including decoy variables
  FunctionSet function_set = FunctionSet::b;
  bool csv_backed = false;
  ExpressionTree target;  // synthetic benchmarks only
  SamplerSpec train;
  SamplerSpec test;
};

inline Alphabet alphabet_for(BenchmarkSpec const& spec) {
  return Alphabet(spec.function_set == FunctionSet::a ? function_set_a()
                                                      : function_set_b(),
                  spec.n_vars);
}

// Exact closed-form target value; evaluated unprotected so that a
// measure-zero exact-zero denominator shows up as a non-finite value.
inline double target_eval(BenchmarkSpec const& spec, std::span<double const> point) {
  if (spec.csv_backed)
    throw std::invalid_argument(spec.name + " has no closed-form target");
  return eval_node_unprotected(spec.target, point);
}

inline std::vector<double> mesh_axis_values(MeshAxis const& axis) {
  if (axis.step <= 0.0) throw std::invalid_argument("mesh step must be positive");
  auto k_max = static_cast<std::size_t>(
      std::floor((axis.hi - axis.lo) / axis.step + 1e-9));
  std::vector<double> values(k_max + 1);
  for (std::size_t k = 0; k <= k_max; ++k)
    values[k] = axis.lo + static_cast<double>(k) * axis.step;
  return values;
}

// c points, each coordinate iid uniform on [a, b].
inline std::vector<double> sample_uniform(double lo, double hi, std::size_t count,
                                          int n_vars, Rng& rng) {
  if (!(lo < hi)) throw std::invalid_argument("uniform sampler needs lo < hi");
  std::vector<double> inputs;
  inputs.reserve(count * static_cast<std::size_t>(n_vars));
  for (std::size_t i = 0; i < count * static_cast<std::size_t>(n_vars); ++i)
    inputs.push_back(rng.uniform(lo, hi));
  return inputs;
}

// Cartesian product of per-variable grids, first axis slowest.
inline std::vector<double> sample_mesh(std::vector<MeshAxis> const& axes) {
  std::vector<std::vector<double>> grids;
  grids.reserve(axes.size());
  std::size_t total = 1;
  for (auto const& axis : axes) {
    grids.push_back(mesh_axis_values(axis));
    total *= grids.back().size();
  }
  std::vector<double> inputs;
  inputs.reserve(total * axes.size());
  std::vector<std::size_t> odo(axes.size(), 0);
  for (std::size_t row = 0; row < total; ++row) {
    for (std::size_t v = 0; v < axes.size(); ++v) inputs.push_back(grids[v][odo[v]]);
    for (std::size_t v = axes.size(); v > 0; --v) {
      if (++odo[v - 1] < grids[v - 1].size()) break;
      odo[v - 1] = 0;
    }
  }
  return inputs;
}

// Samples one dataset for a synthetic benchmark. Uniform rows whose target
// value is non-finite (exact-zero denominator draws) are rejected and
// resampled; mesh grids must evaluate finite everywhere.
inline Dataset make_synthetic_dataset(BenchmarkSpec const& spec,
                                      SamplerSpec const& sampler, Rng& rng) {
  Dataset data;
  data.n_vars = static_cast<std::size_t>(spec.n_vars);
  if (sampler.kind == SamplerSpec::Kind::uniform) {
    std::vector<double> row(data.n_vars);
    for (std::size_t i = 0; i < sampler.count; ++i) {
      double y = 0.0;
      int tries = 0;
      do {
        if (++tries > 1000)
          throw std::runtime_error(spec.name + ": sampler cannot avoid singular points");
        for (auto& x : row) x = rng.uniform(sampler.lo, sampler.hi);
        y = target_eval(spec, row);
      } while (!std::isfinite(y));
      data.push_row(row, y);
    }
  } else {
    if (sampler.axes.size() != data.n_vars)
      throw std::invalid_argument(spec.name + ": mesh axis count mismatch");
    auto inputs = sample_mesh(sampler.axes);
    std::size_t rows = inputs.size() / data.n_vars;
    for (std::size_t i = 0; i < rows; ++i) {
      std::span<double const> row(inputs.data() + i * data.n_vars, data.n_vars);
      double y = target_eval(spec, row);
      if (!std::isfinite(y))
        throw std::runtime_error(spec.name + ": mesh point evaluates non-finite");
      data.push_row(row, y);
    }
  }
  data.validate();
  return data;
}

// Train/test pair from independent rng streams derived from one seed.
inline std::pair<Dataset, Dataset> make_train_test(BenchmarkSpec const& spec,
                                                   std::uint64_t seed) {
  if (spec.csv_backed)
    throw std::invalid_argument(spec.name + " is CSV-backed; pass a data file");
  Rng train_rng(derive_seed(seed, 1));
  Rng test_rng(derive_seed(seed, 2));
  return {make_synthetic_dataset(spec, spec.train, train_rng),
          make_synthetic_dataset(spec, spec.test, test_rng)};
}

namespace detail {

inline ExpressionTree var(int i) { return ExpressionTree::variable(i); }
inline ExpressionTree cst(double v) { return ExpressionTree::constant(v); }
inline ExpressionTree add(ExpressionTree a, ExpressionTree b) {
  return ExpressionTree::function(Op::add, {std::move(a), std::move(b)});
}
inline ExpressionTree sub(ExpressionTree a, ExpressionTree b) {
  return ExpressionTree::function(Op::sub, {std::move(a), std::move(b)});
}
inline ExpressionTree mul(ExpressionTree a, ExpressionTree b) {
  return ExpressionTree::function(Op::mul, {std::move(a), std::move(b)});
}
inline ExpressionTree div(ExpressionTree a, ExpressionTree b) {
  return ExpressionTree::function(Op::div, {std::move(a), std::move(b)});
}
inline ExpressionTree sin_(ExpressionTree a) {
  return ExpressionTree::function(Op::sin, {std::move(a)});
}
inline ExpressionTree cos_(ExpressionTree a) {
  return ExpressionTree::function(Op::cos, {std::move(a)});
}
inline ExpressionTree exp_(ExpressionTree a) {
  return ExpressionTree::function(Op::exp, {std::move(a)});
}
inline ExpressionTree ln_(ExpressionTree a) {
  return ExpressionTree::function(Op::log, {std::move(a)});
}
inline ExpressionTree sqrt_(ExpressionTree a) {
  return ExpressionTree::function(Op::sqrt, {std::move(a)});
}
inline ExpressionTree sq(ExpressionTree a) {
  auto b = a;
  return mul(std::move(a), std::move(b));
}
inline ExpressionTree tan_(ExpressionTree a) {
  auto b = a;
  return div(sin_(std::move(a)), cos_(std::move(b)));
}

inline std::vector<BenchmarkSpec> build_registry() {
  std::vector<BenchmarkSpec> specs;
  auto synth = [&](std::string name, int n_vars, FunctionSet set,
                   ExpressionTree target, SamplerSpec train, SamplerSpec test) {
    BenchmarkSpec s;
    s.name = std::move(name);
    s.n_vars = n_vars;
    s.function_set = set;
    s.target = std::move(target);
    s.train = std::move(train);
    s.test = std::move(test);
    specs.push_back(std::move(s));
  };
  auto u = [](double lo, double hi, std::size_t c) {
    return SamplerSpec::uniform(lo, hi, c);
  };

  synth("Sphere5", 5, FunctionSet::a,
        add(add(add(add(sq(var(0)), sq(var(1))), sq(var(2))), sq(var(3))),
            sq(var(4))),
        u(1, 11, 1000), u(1, 11, 1000));

  synth("Dic1", 10, FunctionSet::b,
        add(add(add(add(var(0), var(1)), var(2)), var(3)), var(4)),
        u(1, 11, 1000), u(1, 11, 1000));

  synth("Dic3", 10, FunctionSet::b,
        add(add(var(0), div(mul(var(1), var(2)), var(3))),
            div(mul(var(2), var(3)), var(4))),
        u(1, 11, 1000), u(1, 11, 1000));

  synth("Dic4", 10, FunctionSet::b,
        add(add(add(mul(var(0), var(1)), mul(var(1), var(2))),
                mul(mul(var(2), var(3)), var(4))),
            mul(var(4), var(5))),
        u(1, 11, 1000), u(1, 11, 1000));

  synth("Dic5", 10, FunctionSet::b,
        add(add(sqrt_(var(0)), sin_(var(1))), ln_(var(2))), u(1, 11, 1000),
        u(1, 11, 1000));

  synth("Nico9", 2, FunctionSet::b,
        sub(add(sub(mul(mul(mul(var(0), var(0)), var(0)), var(0)),
                    mul(mul(var(0), var(0)), var(0))),
                div(sq(var(1)), cst(2))),
            var(1)),
        u(-5, 5, 1000), u(-5, 5, 1000));

  synth("Nico14", 6, FunctionSet::b,
        div(mul(var(4), var(5)), mul(div(var(0), var(1)), div(var(2), var(3)))),
        u(-5, 5, 1000), u(-5, 5, 1000));

  synth("Nico16", 4, FunctionSet::b,
        sub(cst(32),
            mul(mul(cst(3), div(tan_(var(0)), tan_(var(1)))),
                div(tan_(var(2)), tan_(var(3))))),
        u(-5, 5, 1000), u(-5, 5, 1000));

  synth("Nico20", 10, FunctionSet::b,
        add(add(add(add(div(cst(1), var(0)), div(cst(1), var(1))),
                    div(cst(1), var(2))),
                div(cst(1), var(3))),
            div(cst(1), var(4))),
        u(-5, 5, 1000), u(-5, 5, 1000));

  synth("Poly10", 10, FunctionSet::a,
        add(add(add(add(add(add(mul(var(0), var(1)), mul(var(1), var(2))),
                            mul(var(2), var(3))),
                        mul(var(3), var(4))),
                    mul(var(4), var(5))),
                mul(mul(var(0), var(6)), var(8))),
            mul(mul(var(2), var(5)), var(9))),
        u(-1, 1, 250), u(-1, 1, 250));

  auto inv_quartic = [&](int v) {
    return div(cst(1), add(cst(1), div(cst(1), sq(sq(var(v))))));
  };
  synth("Pagie1", 2, FunctionSet::b, add(inv_quartic(0), inv_quartic(1)),
        SamplerSpec::mesh({{-5, 5, 0.4}, {-5, 5, 0.4}}),
        SamplerSpec::mesh({{-4.95, 5.05, 0.4}, {-4.95, 5.05, 0.4}}));

  synth("Nguyen6", 1, FunctionSet::b,
        add(sin_(var(0)), sin_(add(var(0), sq(var(0))))), u(-1, 1, 20),
        u(-1, 1, 20));

  synth("Nguyen7", 1, FunctionSet::b,
        add(ln_(add(var(0), cst(1))), ln_(add(sq(var(0)), cst(1)))), u(0, 2, 20),
        u(0, 2, 20));

  synth("Vlad3", 2, FunctionSet::b,
        mul(mul(mul(mul(exp_(sub(cst(0), var(0))),
                        mul(sq(var(0)), var(0))),
                    mul(cos_(var(0)), sin_(var(0)))),
                sub(mul(cos_(var(0)), sq(sin_(var(0)))), cst(1))),
            sub(var(1), cst(5))),
        SamplerSpec::mesh({{0.05, 10, 0.1}, {0.05, 10.05, 2}}),
        SamplerSpec::mesh({{-0.5, 10.5, 0.05}, {-0.5, 10.5, 0.5}}));

  for (auto name : {"Energy", "Concrete"}) {
    BenchmarkSpec s;
    s.name = name;
    s.n_vars = 8;
    s.function_set = FunctionSet::b;
    s.csv_backed = true;
    specs.push_back(std::move(s));
  }
  return specs;
}

}  // namespace detail

inline std::vector<BenchmarkSpec> const& benchmark_registry() {
  static std::vector<BenchmarkSpec> const specs = detail::build_registry();
  return specs;
}

inline BenchmarkSpec const* find_benchmark(std::string const& name) {
  for (auto const& spec : benchmark_registry())
    if (spec.name == name) return &spec;
  return nullptr;
}

}  // namespace neep

#endif  // NEEP_BENCHMARKS_HPP
