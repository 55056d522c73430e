#include <catch2/catch_amalgamated.hpp>

#include "neep/gene.hpp"
#include "neep/random.hpp"
#include "neep/symbols.hpp"
#include "oracles.hpp"

using namespace neep;

namespace {

Alphabet paper_alphabet() {
  return Alphabet(function_set_full(), {"x", "y"});
}

char const* kPaperGene = "sqrt + - * * x x sin x y y y x y x x y";

}  // namespace

TEST_CASE("breadth-first decode of the worked gene") {
  auto ab = paper_alphabet();
  auto symbols = parse_symbols(kPaperGene, ab);
  REQUIRE(symbols.size() == 17);

  std::size_t consumed = 0;
  auto tree = decode_symbols(symbols, &consumed);
  CHECK(to_infix(tree, ab) == "sqrt(((x*y)-x)+(x*sin(y)))");
  CHECK(consumed == 11);

  // Structure check against the hand queue trace.
  REQUIRE(tree.op == Op::sqrt);
  auto const& sum = tree.children[0];
  REQUIRE(sum.op == Op::add);
  CHECK(sum.children[0].op == Op::sub);
  CHECK(sum.children[1].op == Op::mul);
}

TEST_CASE("trivial decodes") {
  auto ab = paper_alphabet();

  SECTION("terminal at position 1 gives a single-node tree") {
    auto symbols = parse_symbols("x y y", ab);
    std::size_t consumed = 0;
    auto tree = decode_symbols(symbols, &consumed);
    CHECK(tree.kind == ExpressionTree::NodeKind::variable);
    CHECK(consumed == 1);
  }

  SECTION("binary root fills from positions 2-3") {
    auto symbols = parse_symbols("+ x y x x", ab);
    auto tree = decode_symbols(symbols);
    CHECK(to_infix(tree, ab) == "x+y");
  }

  SECTION("incomplete sequence is an error") {
    auto symbols = parse_symbols("+ x", ab);
    CHECK_THROWS_AS(decode_symbols(symbols), GeneDecodeError);
  }
}

TEST_CASE("effective length") {
  auto ab = paper_alphabet();

  SECTION("worked gene consumes 11 symbols") {
    Gene gene = parse_gene(kPaperGene, ab);
    CHECK(gene.head_len == 8);
    CHECK(gene.tail_len == 9);
    CHECK(effective_length(gene) == 11);
  }

  SECTION("terminal-rooted gene consumes one symbol") {
    Gene gene = parse_gene("x y y", ab);
    CHECK(effective_length(gene) == 1);
  }

  SECTION("full binary head of functions, h = 3, consumes 7") {
    Gene gene = parse_gene("+ + + x y x y", ab);
    REQUIRE(gene.head_len == 3);
    CHECK(effective_length(gene) == 7);
    CHECK(effective_length(gene) == gene.head_len + gene.tail_len);
  }

  SECTION("never exceeds head + tail") {
    Rng rng(99);
    for (int i = 0; i < 2000; ++i) {
      Gene gene = random_gene(rng, 7, ab);
      int eff = effective_length(gene);
      CHECK(eff <= gene.head_len + gene.tail_len);
      bool all_max_arity = true;
      for (int k = 0; k < gene.head_len; ++k)
        if (arity(gene.symbols[static_cast<std::size_t>(k)]) != ab.max_arity())
          all_max_arity = false;
      if (eff == gene.head_len + gene.tail_len) CHECK(all_max_arity);
    }
  }
}

TEST_CASE("random genes satisfy the gene invariants") {
  auto ab = paper_alphabet();
  Rng rng(1234);
  for (int i = 0; i < 10000; ++i) {
    Gene gene = random_gene(rng, 30, ab);
    REQUIRE(is_valid_gene(gene, ab.max_arity()));
  }
  CHECK(tail_length(1, 2) == 2);
  CHECK(tail_length(30, 2) == 31);

  SECTION("h = 1 over {+, x} gives length 3 with an all-x tail") {
    Alphabet tiny(std::vector<Op>{Op::add}, 1);
    for (int i = 0; i < 100; ++i) {
      Gene gene = random_gene(rng, 1, tiny);
      REQUIRE(gene.length() == 3);
      CHECK(gene.symbols[1].is_terminal());
      CHECK(gene.symbols[2].is_terminal());
    }
    CHECK_THROWS_AS(random_gene(rng, 0, tiny), std::invalid_argument);
  }

  Rng a(42);
  Rng b(42);
  for (int i = 0; i < 50; ++i) {
    Gene ga = random_gene(a, 30, ab);
    Gene gb = random_gene(b, 30, ab);
    REQUIRE(ga.symbols.size() == gb.symbols.size());
    for (std::size_t k = 0; k < ga.symbols.size(); ++k)
      REQUIRE(ga.symbols[k] == gb.symbols[k]);
  }
}

TEST_CASE("queue decoder equals the level-by-level reference decoder") {
  auto ab = paper_alphabet();
  Rng rng(31337);
  for (int i = 0; i < 10000; ++i) {
    Gene gene = random_gene(rng, 10, ab);
    std::size_t consumed_a = 0;
    std::size_t consumed_b = 0;
    auto tree = decode_symbols(gene.symbols, &consumed_a);
    auto ref = oracles::reference_decode(gene.symbols, &consumed_b);
    REQUIRE(oracles::trees_equal(tree, ref));
    REQUIRE(consumed_a == consumed_b);
    REQUIRE(static_cast<int>(consumed_a) == effective_length(gene));
  }
}

TEST_CASE("binary-only decode has leaves = internal nodes + 1") {
  Alphabet ab(function_set_a(), 3);
  Rng rng(555);
  for (int i = 0; i < 3000; ++i) {
    Gene gene = random_gene(rng, 12, ab);
    auto tree = decode(gene);
    std::size_t leaves = tree.leaf_count();
    std::size_t internal = tree.node_count() - leaves;
    REQUIRE(leaves == internal + 1);
  }
}

TEST_CASE("gene serialization round-trips") {
  auto ab = paper_alphabet();
  Rng rng(2718);
  for (int i = 0; i < 500; ++i) {
    Gene gene = random_gene(rng, 9, ab);
    Gene back = parse_gene(gene_to_string(gene, ab), ab);
    REQUIRE(back.head_len == gene.head_len);
    REQUIRE(back.symbols.size() == gene.symbols.size());
    for (std::size_t k = 0; k < gene.symbols.size(); ++k)
      REQUIRE(back.symbols[k] == gene.symbols[k]);
  }
}

TEST_CASE("gene parse errors name the offending position") {
  auto ab = paper_alphabet();
  try {
    parse_symbols("+ x $ y", ab);
    FAIL("expected a parse error");
  } catch (GeneParseError const& e) {
    CHECK(e.token_index == 2);
    CHECK(std::string(e.what()).find("'$'") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_gene("+ x y x", ab), GeneDecodeError);  // no valid split
}
