#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "support/oracles.hpp"
#include "support/random_trees.hpp"
#include "treesib/finite_tree.hpp"

using namespace treesib;

namespace {

bool map_is_embedding(const FiniteRootedTree& a, const FiniteRootedTree& b,
                      const VertexMap& map, bool rooted) {
  if (static_cast<int>(map.size()) != a.size()) return false;
  std::set<int> image;
  for (int v = 0; v < a.size(); ++v) {
    if (map[v] < 0 || map[v] >= b.size()) return false;
    if (!image.insert(map[v]).second) return false;
  }
  if (rooted && map[a.root()] != b.root()) return false;
  auto adjacent = [&](int x, int y) {
    return b.parent(x) == y || b.parent(y) == x;
  };
  for (int v = 1; v < a.size(); ++v)
    if (!adjacent(map[v], map[a.parent(v)])) return false;
  return true;
}

}  // namespace

TEST_CASE("canonical code basics") {
  CHECK(canonical_code(FiniteRootedTree::single()).text == "()");
  CHECK(canonical_code(FiniteRootedTree::path(1)).text == "(())");
  CHECK(canonical_code(FiniteRootedTree::path(2)).text == "((()))");
  CHECK(canonical_code(FiniteRootedTree::star(2)).text == "(()())");

  // Root with children {leaf, 2-chain} in either insertion order.
  FiniteRootedTree t1({-1, 0, 0, 2});
  FiniteRootedTree t2({-1, 0, 1, 0});
  CHECK(canonical_code(t1) == canonical_code(t2));
  // Child codes sort lexicographically; '(' < ')' puts the chain first.
  CHECK(canonical_code(t1).text == "((())())");
}

TEST_CASE("canonical code length is twice the vertex count") {
  std::mt19937 rng(7001);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 1 + trial % 12;
    auto t = oracle::random_tree(rng, n);
    CHECK(canonical_code(t).text.size() == 2u * n);
  }
}

TEST_CASE("parse and encode round-trip") {
  for (const char* code : {"()", "(())", "(()())", "((())())", "(()(()))"}) {
    auto t = FiniteRootedTree::parse(code);
    CHECK(t.encode() == code);
  }
  // Canonical codes re-parse to trees with the same canonical code.
  std::mt19937 rng(7002);
  for (int trial = 0; trial < 100; ++trial) {
    auto t = oracle::random_tree(rng, 1 + trial % 10);
    auto code = canonical_code(t);
    CHECK(canonical_code(FiniteRootedTree::parse(code.text)) == code);
  }
  CHECK_THROWS_AS(FiniteRootedTree::parse("(()"), Error);
  CHECK_THROWS_AS(FiniteRootedTree::parse("())("), Error);
  CHECK_THROWS_AS(FiniteRootedTree::parse("()()"), Error);
  CHECK_THROWS_AS(FiniteRootedTree::parse(""), Error);
}

TEST_CASE("rooted isomorphism distinguishes root placement") {
  CHECK(is_isomorphic_rooted(FiniteRootedTree::single(),
                             FiniteRootedTree::single()));
  // 3-vertex path rooted at an end vs rooted at the middle.
  auto end_rooted = FiniteRootedTree::path(2);
  FiniteRootedTree mid_rooted({-1, 0, 0});
  CHECK_FALSE(is_isomorphic_rooted(end_rooted, mid_rooted));
}

TEST_CASE("rooted tree enumeration matches known counts") {
  const int expected[] = {1, 1, 2, 4, 9, 20, 48, 115};
  for (int n = 1; n <= 8; ++n) {
    auto trees = oracle::all_rooted_trees(n);
    CHECK(trees.size() == static_cast<size_t>(expected[n - 1]));
    // No two enumerated trees are isomorphic (checked by permutation search
    // at small n; the full n = 8 sweep lives in the acceptance suite).
    if (n <= 6) {
      for (size_t i = 0; i < trees.size(); ++i)
        for (size_t j = i + 1; j < trees.size(); ++j)
          CHECK_FALSE(oracle::isomorphic_rooted_bruteforce(trees[i], trees[j]));
    }
  }
}

TEST_CASE("code equality coincides with brute-force isomorphism up to 6") {
  for (int n = 1; n <= 6; ++n) {
    auto trees = oracle::all_rooted_trees(n);
    for (size_t i = 0; i < trees.size(); ++i) {
      for (size_t j = 0; j < trees.size(); ++j) {
        bool codes = canonical_code(trees[i]) == canonical_code(trees[j]);
        bool brute = oracle::isomorphic_rooted_bruteforce(trees[i], trees[j]);
        CHECK(codes == brute);
        CHECK(is_isomorphic_rooted(trees[i], trees[j]) == brute);
      }
    }
  }
}

TEST_CASE("rooted embedding examples") {
  // 2-vertex path into 3-vertex path, both rooted at an end.
  auto p2 = FiniteRootedTree::path(1);
  auto p3 = FiniteRootedTree::path(2);
  auto map = embeds_rooted(p2, p3);
  REQUIRE(map.has_value());
  CHECK(map_is_embedding(p2, p3, *map, true));
  CHECK_FALSE(embeds_rooted(p3, p2).has_value());

  // A chain cannot embed into a star of the same size below the root.
  CHECK_FALSE(embeds_rooted(FiniteRootedTree::path(2),
                            FiniteRootedTree::star(2)).has_value());
  CHECK(embeds_rooted(FiniteRootedTree::star(2), FiniteRootedTree::star(3))
            .has_value());
}

TEST_CASE("rooted embedding agrees with exhaustive search up to 5") {
  for (int n = 1; n <= 5; ++n) {
    auto small = oracle::all_rooted_trees(n);
    for (int m = 1; m <= 5; ++m) {
      auto big = oracle::all_rooted_trees(m);
      for (const auto& a : small)
        for (const auto& b : big)
          CHECK(embeds_rooted(a, b).has_value() ==
                oracle::embeds_rooted_bruteforce(a, b));
    }
  }
}

TEST_CASE("unrooted embedding agrees with exhaustive search up to 5") {
  for (int n = 2; n <= 5; ++n) {
    auto small = oracle::all_rooted_trees(n);
    for (int m = 2; m <= 5; ++m) {
      auto big = oracle::all_rooted_trees(m);
      for (const auto& a : small)
        for (const auto& b : big)
          CHECK(embeds_unrooted(a, b).has_value() ==
                oracle::embeds_unrooted_bruteforce(a, b));
    }
  }
}

TEST_CASE("unrooted embedding ignores root placement") {
  // 3-vertex path rooted at the middle embeds into a longer chain.
  FiniteRootedTree mid_rooted({-1, 0, 0});
  auto p5 = FiniteRootedTree::path(4);
  CHECK_FALSE(embeds_rooted(mid_rooted, p5).has_value());
  auto map = embeds_unrooted(mid_rooted, p5);
  REQUIRE(map.has_value());
  CHECK(map_is_embedding(mid_rooted, p5, *map, false));
}

TEST_CASE("returned maps are injective and adjacency-preserving") {
  std::mt19937 rng(7003);
  int found = 0;
  for (int trial = 0; trial < 400; ++trial) {
    auto a = oracle::random_tree(rng, 1 + trial % 7);
    auto b = oracle::random_tree(rng, 1 + (trial * 13 + 5) % 11);
    if (auto map = embeds_rooted(a, b)) {
      CHECK(map_is_embedding(a, b, *map, true));
      ++found;
    }
    if (auto map = embeds_unrooted(a, b)) {
      CHECK(map_is_embedding(a, b, *map, false));
      ++found;
    }
  }
  CHECK(found > 50);
}

TEST_CASE("embedding is reflexive and transitive on samples") {
  std::mt19937 rng(7004);
  for (int trial = 0; trial < 50; ++trial) {
    auto t = oracle::random_tree(rng, 1 + trial % 9);
    auto self = embeds_rooted(t, t);
    REQUIRE(self.has_value());
    CHECK(map_is_embedding(t, t, *self, true));
  }
  // Transitivity: compose witnessed maps and re-check.
  for (int trial = 0; trial < 80; ++trial) {
    auto a = oracle::random_tree(rng, 1 + trial % 5);
    auto b = oracle::random_tree(rng, 1 + (trial * 7) % 8);
    auto c = oracle::random_tree(rng, 1 + (trial * 11) % 12);
    auto ab = embeds_rooted(a, b);
    auto bc = embeds_rooted(b, c);
    if (!ab || !bc) continue;
    VertexMap ac(a.size());
    for (int v = 0; v < a.size(); ++v) ac[v] = (*bc)[(*ab)[v]];
    CHECK(map_is_embedding(a, c, ac, true));
  }
}

TEST_CASE("mutual rooted embeddability implies isomorphism up to 6") {
  for (int n = 1; n <= 6; ++n) {
    auto trees = oracle::all_rooted_trees(n);
    for (size_t i = 0; i < trees.size(); ++i) {
      for (size_t j = 0; j < trees.size(); ++j) {
        bool fwd = embeds_rooted(trees[i], trees[j]).has_value();
        bool bwd = embeds_rooted(trees[j], trees[i]).has_value();
        if (fwd && bwd)
          CHECK(is_isomorphic_rooted(trees[i], trees[j]));
      }
    }
  }
}
