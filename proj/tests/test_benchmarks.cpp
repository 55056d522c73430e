#include <catch2/catch_amalgamated.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "neep/benchmarks.hpp"
#include "neep/csv.hpp"

using namespace neep;

TEST_CASE("registry completeness") {
  auto const& specs = benchmark_registry();
  REQUIRE(specs.size() == 16);

  std::set<std::string> names;
  int synthetic = 0;
  int csv_backed = 0;
  for (auto const& spec : specs) {
    names.insert(spec.name);
    spec.csv_backed ? ++csv_backed : ++synthetic;
  }
  CHECK(names.size() == 16);
  CHECK(synthetic == 14);
  CHECK(csv_backed == 2);

  for (auto name : {"Sphere5", "Dic1", "Dic3", "Dic4", "Dic5", "Nico9", "Nico14",
                    "Nico16", "Nico20", "Poly10", "Pagie1", "Nguyen6", "Nguyen7",
                    "Vlad3", "Energy", "Concrete"})
    CHECK(find_benchmark(name) != nullptr);
  CHECK(find_benchmark("Nope") == nullptr);

  CHECK(find_benchmark("Sphere5")->function_set == FunctionSet::a);
  CHECK(find_benchmark("Poly10")->function_set == FunctionSet::a);
  CHECK(find_benchmark("Nguyen6")->function_set == FunctionSet::b);
  CHECK(find_benchmark("Dic1")->n_vars == 10);  // decoy variables stay
  CHECK(find_benchmark("Nico14")->n_vars == 6);
}

TEST_CASE("target values") {
  double ones[] = {1.0, 1.0, 1.0, 1.0, 1.0};
  CHECK(target_eval(*find_benchmark("Sphere5"), ones) == 5.0);

  double zeros[] = {0.0, 0.0};
  CHECK(target_eval(*find_benchmark("Nico9"), zeros) == 0.0);

  double one_one[] = {1.0, 1.0};
  CHECK(target_eval(*find_benchmark("Pagie1"), one_one) == 1.0);

  double dic5_point[] = {4.0, 0.0, 1.0, 9, 9, 9, 9, 9, 9, 9};
  CHECK(target_eval(*find_benchmark("Dic5"), dic5_point) == 2.0);  // sqrt(4)+sin(0)+ln(1)

  CHECK_THROWS_AS(target_eval(*find_benchmark("Energy"), ones), std::invalid_argument);
}

TEST_CASE("uniform sampler") {
  Rng rng(4);
  auto inputs = sample_uniform(1.0, 11.0, 1000, 5, rng);
  REQUIRE(inputs.size() == 5000);
  for (double v : inputs) {
    REQUIRE(v >= 1.0);
    REQUIRE(v <= 11.0);
  }

  Rng r1(9);
  Rng r2(9);
  CHECK(sample_uniform(-1, 1, 50, 3, r1) == sample_uniform(-1, 1, 50, 3, r2));

  Rng tiny(5);
  for (double v : sample_uniform(0.0, 1e-9, 100, 1, tiny)) REQUIRE(v <= 1e-9);

  CHECK_THROWS_AS(sample_uniform(2.0, 2.0, 10, 1, rng), std::invalid_argument);
}

TEST_CASE("mesh sampler") {
  SECTION("pagie grid is 26 x 26") {
    auto values = mesh_axis_values({-5.0, 5.0, 0.4});
    REQUIRE(values.size() == 26);
    CHECK(values.front() == -5.0);
    CHECK(values.back() == Catch::Approx(5.0));
    auto test_values = mesh_axis_values({-4.95, 5.05, 0.4});
    REQUIRE(test_values.size() == 26);

    auto inputs = sample_mesh({{-5.0, 5.0, 0.4}, {-5.0, 5.0, 0.4}});
    CHECK(inputs.size() == 676 * 2);
  }

  SECTION("unit step grid") {
    auto values = mesh_axis_values({0.0, 1.0, 1.0});
    REQUIRE(values == std::vector<double>{0.0, 1.0});
  }

  SECTION("vlad3 training grid is 100 x 6 = 600 points") {
    auto const& spec = *find_benchmark("Vlad3");
    REQUIRE(mesh_axis_values(spec.train.axes[0]).size() == 100);
    REQUIRE(mesh_axis_values(spec.train.axes[1]).size() == 6);
    Rng rng(0);
    auto data = make_synthetic_dataset(spec, spec.train, rng);
    CHECK(data.n_points() == 600);
  }
}

TEST_CASE("self-consistency: every synthetic target scores zero on its own data") {
  for (auto const& spec : benchmark_registry()) {
    if (spec.csv_backed) continue;
    INFO(spec.name);
    auto [train, test] = make_train_test(spec, 1);
    CHECK(mse_fitness(spec.target, train) == 0.0);
    CHECK(mse_fitness(spec.target, test) == 0.0);
  }
}

TEST_CASE("train and test are independent draws") {
  auto const& spec = *find_benchmark("Nguyen6");
  auto [train, test] = make_train_test(spec, 7);
  REQUIRE(train.n_points() == 20);
  REQUIRE(test.n_points() == 20);
  CHECK(train.inputs != test.inputs);

  auto [train2, test2] = make_train_test(spec, 7);
  CHECK(train.inputs == train2.inputs);  // same seed reproduces
  auto [train3, test3] = make_train_test(spec, 8);
  CHECK(train.inputs != train3.inputs);
}

TEST_CASE("non-finite target draws are resampled") {
  // ln(x) is non-finite for x <= 0 unprotected; sampling over [-1, 1] must
  // reject and redraw until the target is finite.
  BenchmarkSpec spec;
  spec.name = "LogOnly";
  spec.n_vars = 1;
  spec.target = ExpressionTree::function(Op::log, {ExpressionTree::variable(0)});
  spec.train = SamplerSpec::uniform(-1.0, 1.0, 200);
  spec.test = spec.train;

  Rng rng(12);
  auto data = make_synthetic_dataset(spec, spec.train, rng);
  REQUIRE(data.n_points() == 200);
  for (std::size_t i = 0; i < data.n_points(); ++i) {
    REQUIRE(data.point(i)[0] > 0.0);
    REQUIRE(std::isfinite(data.targets[i]));
  }
}

namespace {

std::filesystem::path write_temp_csv(std::string const& name, std::string const& body) {
  auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path);
  out << body;
  out.close();
  return path;
}

}  // namespace

TEST_CASE("csv ingestion") {
  SECTION("three-row fixture parses exactly") {
    auto path = write_temp_csv("neep_fixture.csv",
                               "a,b,y\n1,2,3\n4,5,6\n7,8,9\n");
    auto csv = load_csv_dataset(path.string(), "y");
    REQUIRE(csv.data.n_points() == 3);
    REQUIRE(csv.data.n_vars == 2);
    CHECK(csv.rejected_rows == 0);
    CHECK(csv.data.point(0)[0] == 1.0);
    CHECK(csv.data.point(0)[1] == 2.0);
    CHECK(csv.data.targets[0] == 3.0);
    CHECK(csv.data.targets[2] == 9.0);

    auto by_index = load_csv_dataset(path.string(), "2");
    CHECK(by_index.data.targets == csv.data.targets);
    auto by_negative = load_csv_dataset(path.string(), "-1");
    CHECK(by_negative.data.targets == csv.data.targets);
  }

  SECTION("header-only file is an empty-dataset error") {
    auto path = write_temp_csv("neep_header_only.csv", "a,b,y\n");
    CHECK_THROWS_AS(load_csv_dataset(path.string(), "y"), CsvError);
  }

  SECTION("missing file and bad target column are errors") {
    CHECK_THROWS_AS(load_csv_dataset("/nonexistent/file.csv", "y"), CsvError);
    auto path = write_temp_csv("neep_two_col.csv", "1,2\n3,4\n");
    CHECK_THROWS_AS(load_csv_dataset(path.string(), "nope"), CsvError);
  }

  SECTION("non-numeric rows are rejected and counted") {
    auto path = write_temp_csv("neep_reject.csv",
                               "a,b\n1,2\nbad,3\n4,?\n5,6\n7,8,9\n");
    auto csv = load_csv_dataset(path.string(), "-1");
    CHECK(csv.data.n_points() == 2);
    CHECK(csv.rejected_rows == 3);  // two non-numeric plus one ragged row
  }

  SECTION("the 70/30 split of 1030 rows x 8 features is 721/309") {
    std::string body = "x1,x2,x3,x4,x5,x6,x7,x8,y\n";
    for (int i = 0; i < 1030; ++i) {
      char buf[128];
      std::snprintf(buf, sizeof(buf), "%d,%d,%d,%d,%d,%d,%d,%d,%d\n", i, 2 * i,
                    3 * i + 1, i % 7, i % 11, 5 * i, i + 2, i % 3, 3 * i);
      body += buf;
    }
    auto path = write_temp_csv("neep_concrete_shape.csv", body);
    auto csv = load_csv_dataset(path.string(), "y");
    REQUIRE(csv.data.n_points() == 1030);
    REQUIRE(csv.data.n_vars == 8);

    auto [train, test] = split_train_test(csv.data, 0.7, 99);
    CHECK(train.n_points() == 721);
    CHECK(test.n_points() == 309);

    auto [train2, test2] = split_train_test(csv.data, 0.7, 99);
    CHECK(train.inputs == train2.inputs);  // seeded determinism
    auto [train3, test3] = split_train_test(csv.data, 0.7, 100);
    CHECK(train.inputs != train3.inputs);

    // Disjoint and exhaustive: targets 3i are unique row markers.
    std::set<double> seen;
    for (double y : train.targets) seen.insert(y);
    for (double y : test.targets) {
      REQUIRE(seen.count(y) == 0);
      seen.insert(y);
    }
    CHECK(seen.size() == 1030);
  }
}
