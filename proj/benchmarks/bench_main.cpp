// Microbenchmarks for the hot analysis paths: canonical codes, rooted
// embedding search, truncation, and self-embedding search.
#include <benchmark/benchmark.h>

#include <random>

#include "treesib/embedding.hpp"
#include "treesib/presentation.hpp"

using namespace treesib;

namespace {

TreePresentation comb() {
  FiniteRootedTree core = FiniteRootedTree::single();
  DecorationSeq tooth = DecorationSeq::periodic({}, {FiniteRootedTree::parse("(())")});
  return TreePresentation(core, {Arm{"A", 0, tooth}}, {"v0"}, "COMB");
}

TreePresentation dray() {
  FiniteRootedTree core = FiniteRootedTree::single();
  DecorationSeq bare = DecorationSeq::periodic({}, {FiniteRootedTree::single()});
  return TreePresentation(core, {Arm{"A", 0, bare}, Arm{"B", 0, bare}}, {"v0"},
                          "DRAY");
}

// Random rooted tree on n vertices with parent(v) uniform over 0..v-1.
FiniteRootedTree random_tree(std::mt19937& rng, int n) {
  std::vector<int> parents(n, -1);
  for (int v = 1; v < n; ++v)
    parents[v] = std::uniform_int_distribution<int>(0, v - 1)(rng);
  return FiniteRootedTree(std::move(parents));
}

void BM_canonical_code(benchmark::State& state) {
  std::mt19937 rng(7);
  std::vector<FiniteRootedTree> trees;
  for (int i = 0; i < 64; ++i)
    trees.push_back(random_tree(rng, static_cast<int>(state.range(0))));
  size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(canonical_code(trees[i % trees.size()]));
    ++i;
  }
}
BENCHMARK(BM_canonical_code)->Arg(16)->Arg(64)->Arg(256);

void BM_embeds_rooted(benchmark::State& state) {
  std::mt19937 rng(11);
  int n = static_cast<int>(state.range(0));
  std::vector<std::pair<FiniteRootedTree, FiniteRootedTree>> pairs;
  for (int i = 0; i < 32; ++i)
    pairs.emplace_back(random_tree(rng, n), random_tree(rng, 2 * n));
  size_t i = 0;
  for (auto _ : state) {
    const auto& [a, b] = pairs[i % pairs.size()];
    benchmark::DoNotOptimize(embeds_rooted(a, b));
    ++i;
  }
}
BENCHMARK(BM_embeds_rooted)->Arg(8)->Arg(16)->Arg(32);

void BM_truncate(benchmark::State& state) {
  TreePresentation p = comb();
  int depth = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(truncate(p, depth));
}
BENCHMARK(BM_truncate)->Arg(8)->Arg(64)->Arg(512);

void BM_search_embeddings(benchmark::State& state) {
  TreePresentation p = state.range(0) == 0 ? comb() : dray();
  SearchBounds b{1, 2};
  for (auto _ : state) benchmark::DoNotOptimize(search_embeddings(p, b));
}
BENCHMARK(BM_search_embeddings)->Arg(0)->Arg(1);

}  // namespace

BENCHMARK_MAIN();
