#ifndef TREESIB_TESTS_ORACLES_HPP
#define TREESIB_TESTS_ORACLES_HPP

#include <optional>
#include <vector>

#include "treesib/finite_tree.hpp"

// Deliberately naive reference implementations. They share no code with the
// library algorithms they check: isomorphism is decided by permutation
// search, embeddings by exhaustive assignment, and enumeration by the
// Beyer-Hedetniemi level-sequence successor.
namespace treesib::oracle {

// All unordered rooted trees with exactly n vertices, each isomorphism
// class exactly once. Counts for n = 1.. are 1, 1, 2, 4, 9, 20, 48, 115.
std::vector<FiniteRootedTree> all_rooted_trees(int n);

// Root-preserving bijection search, trying child assignments exhaustively.
bool isomorphic_rooted_bruteforce(const FiniteRootedTree& a,
                                  const FiniteRootedTree& b);

// Injective root-preserving adjacency-preserving map search, exhaustive.
bool embeds_rooted_bruteforce(const FiniteRootedTree& a,
                              const FiniteRootedTree& b);

// Exhaustive unrooted embedding: tries every anchor pair.
bool embeds_unrooted_bruteforce(const FiniteRootedTree& a,
                                const FiniteRootedTree& b);

}  // namespace treesib::oracle

#endif
