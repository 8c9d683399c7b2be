#include "support/oracles.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace treesib::oracle {

namespace {

FiniteRootedTree tree_of_levels(const std::vector<int>& levels) {
  // levels[0] == 1; parent of i is the nearest j < i with level one less.
  std::vector<int> parents(levels.size(), -1);
  for (size_t i = 1; i < levels.size(); ++i) {
    for (size_t j = i; j-- > 0;) {
      if (levels[j] == levels[i] - 1) {
        parents[i] = static_cast<int>(j);
        break;
      }
    }
  }
  return FiniteRootedTree(std::move(parents));
}

}  // namespace

std::vector<FiniteRootedTree> all_rooted_trees(int n) {
  std::vector<FiniteRootedTree> out;
  if (n <= 0) return out;
  if (n == 1) {
    out.push_back(FiniteRootedTree::single());
    return out;
  }
  // Beyer-Hedetniemi successor walk over level sequences, starting at the
  // path 1,2,...,n and ending at the star 1,2,2,...,2.
  std::vector<int> l(n);
  std::iota(l.begin(), l.end(), 1);
  for (;;) {
    out.push_back(tree_of_levels(l));
    int p = -1;
    for (int i = n - 1; i >= 0; --i) {
      if (l[i] > 2) {
        p = i;
        break;
      }
    }
    if (p < 0) break;
    int q = -1;
    for (int i = p - 1; i >= 0; --i) {
      if (l[i] == l[p] - 1) {
        q = i;
        break;
      }
    }
    for (int i = p; i < n; ++i) l[i] = l[i - (p - q)];
  }
  return out;
}

namespace {

bool iso_match(const FiniteRootedTree& a, const FiniteRootedTree& b, int u,
               int v);

// Try every bijection between the child lists.
bool iso_children(const FiniteRootedTree& a, const FiniteRootedTree& b,
                  const std::vector<int>& cu, std::vector<int> cv) {
  std::sort(cv.begin(), cv.end());
  do {
    bool ok = true;
    for (size_t i = 0; i < cu.size() && ok; ++i)
      ok = iso_match(a, b, cu[i], cv[i]);
    if (ok) return true;
  } while (std::next_permutation(cv.begin(), cv.end()));
  return false;
}

bool iso_match(const FiniteRootedTree& a, const FiniteRootedTree& b, int u,
               int v) {
  const auto& cu = a.children(u);
  const auto& cv = b.children(v);
  if (cu.size() != cv.size()) return false;
  if (cu.empty()) return true;
  return iso_children(a, b, cu, cv);
}

bool embed_match(const FiniteRootedTree& a, const FiniteRootedTree& b, int u,
                 int v);

bool embed_children(const FiniteRootedTree& a, const FiniteRootedTree& b,
                    const std::vector<int>& cu, const std::vector<int>& cv,
                    size_t i, std::vector<char>& used) {
  if (i == cu.size()) return true;
  for (size_t j = 0; j < cv.size(); ++j) {
    if (used[j]) continue;
    if (!embed_match(a, b, cu[i], cv[j])) continue;
    used[j] = 1;
    if (embed_children(a, b, cu, cv, i + 1, used)) return true;
    used[j] = 0;
  }
  return false;
}

bool embed_match(const FiniteRootedTree& a, const FiniteRootedTree& b, int u,
                 int v) {
  const auto& cu = a.children(u);
  const auto& cv = b.children(v);
  if (cu.size() > cv.size()) return false;
  std::vector<char> used(cv.size(), 0);
  return embed_children(a, b, cu, cv, 0, used);
}

FiniteRootedTree rerooted(const FiniteRootedTree& b, int new_root) {
  int n = b.size();
  std::vector<std::vector<int>> adj(n);
  for (int v = 1; v < n; ++v) {
    adj[v].push_back(b.parent(v));
    adj[b.parent(v)].push_back(v);
  }
  std::vector<int> parents;
  std::vector<int> index(n, -1);
  std::vector<int> queue{new_root};
  index[new_root] = 0;
  parents.push_back(-1);
  for (size_t q = 0; q < queue.size(); ++q) {
    for (int w : adj[queue[q]]) {
      if (index[w] != -1) continue;
      index[w] = static_cast<int>(parents.size());
      parents.push_back(index[queue[q]]);
      queue.push_back(w);
    }
  }
  return FiniteRootedTree(std::move(parents));
}

}  // namespace

bool isomorphic_rooted_bruteforce(const FiniteRootedTree& a,
                                  const FiniteRootedTree& b) {
  if (a.size() != b.size()) return false;
  return iso_match(a, b, a.root(), b.root());
}

bool embeds_rooted_bruteforce(const FiniteRootedTree& a,
                              const FiniteRootedTree& b) {
  if (a.size() > b.size()) return false;
  return embed_match(a, b, a.root(), b.root());
}

bool embeds_unrooted_bruteforce(const FiniteRootedTree& a,
                                const FiniteRootedTree& b) {
  if (a.size() > b.size()) return false;
  for (int u = 0; u < a.size(); ++u)
    for (int v = 0; v < b.size(); ++v)
      if (embed_match(rerooted(a, u), rerooted(b, v), 0, 0)) return true;
  return false;
}

}  // namespace treesib::oracle
