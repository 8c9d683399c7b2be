#include "treesib/finite_tree.hpp"

#include <algorithm>
#include <functional>

namespace treesib {

FiniteRootedTree::FiniteRootedTree(std::vector<int> parents)
    : parents_(std::move(parents)) {
  if (parents_.empty())
    throw Error(ErrorKind::InvalidArgument, "tree must have a vertex");
  if (parents_[0] != -1)
    throw Error(ErrorKind::InvalidArgument, "vertex 0 must be the root");
  int n = static_cast<int>(parents_.size());
  children_.assign(n, {});
  for (int v = 1; v < n; ++v) {
    if (parents_[v] < 0 || parents_[v] >= n)
      throw Error(ErrorKind::InvalidArgument, "parent out of range");
    children_[parents_[v]].push_back(v);
  }
  // Reject cycles: every vertex must reach the root.
  std::vector<int> state(n, 0);
  for (int v = 0; v < n; ++v) {
    int u = v;
    std::vector<int> chain;
    while (u != -1 && state[u] == 0) {
      state[u] = 1;
      chain.push_back(u);
      u = parents_[u];
    }
    if (u != -1 && state[u] == 1)
      throw Error(ErrorKind::InvalidArgument, "parent relation has a cycle");
    for (int w : chain) state[w] = 2;
  }
}

FiniteRootedTree FiniteRootedTree::single() {
  return FiniteRootedTree({-1});
}

FiniteRootedTree FiniteRootedTree::path(int edges) {
  if (edges < 0) throw Error(ErrorKind::InvalidArgument, "negative path length");
  std::vector<int> parents(edges + 1);
  parents[0] = -1;
  for (int v = 1; v <= edges; ++v) parents[v] = v - 1;
  return FiniteRootedTree(std::move(parents));
}

FiniteRootedTree FiniteRootedTree::star(int leaves) {
  if (leaves < 0) throw Error(ErrorKind::InvalidArgument, "negative leaf count");
  std::vector<int> parents(leaves + 1, 0);
  parents[0] = -1;
  return FiniteRootedTree(std::move(parents));
}

FiniteRootedTree FiniteRootedTree::parse(std::string_view code) {
  std::vector<int> parents;
  int current = -1;
  for (char c : code) {
    if (c == '(') {
      parents.push_back(current);
      current = static_cast<int>(parents.size()) - 1;
    } else if (c == ')') {
      if (current < 0)
        throw Error(ErrorKind::InvalidArgument, "unbalanced ')' in tree code");
      current = parents[current];
    } else if (c == ' ' || c == '\t') {
      continue;
    } else {
      throw Error(ErrorKind::InvalidArgument,
                  std::string("unexpected character '") + c + "' in tree code");
    }
  }
  if (current != -1)
    throw Error(ErrorKind::InvalidArgument, "unbalanced '(' in tree code");
  if (parents.empty())
    throw Error(ErrorKind::InvalidArgument, "empty tree code");
  if (std::count(parents.begin() + 1, parents.end(), -1) > 0)
    throw Error(ErrorKind::InvalidArgument, "tree code has several roots");
  return FiniteRootedTree(std::move(parents));
}

int FiniteRootedTree::degree(int v) const {
  return static_cast<int>(children_.at(v).size()) + (v == 0 ? 0 : 1);
}

int FiniteRootedTree::depth(int v) const {
  int d = 0;
  while (parents_.at(v) != -1) {
    v = parents_[v];
    ++d;
  }
  return d;
}

int FiniteRootedTree::height() const {
  int h = 0;
  for (int v = 0; v < size(); ++v) h = std::max(h, depth(v));
  return h;
}

std::string FiniteRootedTree::encode() const {
  std::string out;
  std::function<void(int)> emit = [&](int v) {
    out += '(';
    for (int c : children_[v]) emit(c);
    out += ')';
  };
  emit(0);
  return out;
}

CanonicalCode canonical_code(const FiniteRootedTree& t) {
  std::function<std::string(int)> code = [&](int v) {
    std::vector<std::string> parts;
    parts.reserve(t.children(v).size());
    for (int c : t.children(v)) parts.push_back(code(c));
    std::sort(parts.begin(), parts.end());
    std::string out = "(";
    for (const std::string& p : parts) out += p;
    out += ')';
    return out;
  };
  return CanonicalCode{code(t.root())};
}

bool is_isomorphic_rooted(const FiniteRootedTree& a, const FiniteRootedTree& b) {
  if (a.size() != b.size()) return false;
  return canonical_code(a) == canonical_code(b);
}

namespace {

// Kuhn's augmenting-path matching on the feasibility relation between
// child lists; adj[i] lists the target children usable for source child i.
bool try_kuhn(int i, const std::vector<std::vector<int>>& adj,
              std::vector<int>& match_of_target, std::vector<char>& seen) {
  for (int j : adj[i]) {
    if (seen[j]) continue;
    seen[j] = 1;
    if (match_of_target[j] == -1 ||
        try_kuhn(match_of_target[j], adj, match_of_target, seen)) {
      match_of_target[j] = i;
      return true;
    }
  }
  return false;
}

// match[i] = chosen target child for source child i, or empty if no full
// matching exists.
std::optional<std::vector<int>> full_matching(
    const std::vector<std::vector<int>>& adj, int target_count) {
  std::vector<int> match_of_target(target_count, -1);
  for (int i = 0; i < static_cast<int>(adj.size()); ++i) {
    std::vector<char> seen(target_count, 0);
    if (!try_kuhn(i, adj, match_of_target, seen)) return std::nullopt;
  }
  std::vector<int> match(adj.size(), -1);
  for (int j = 0; j < target_count; ++j)
    if (match_of_target[j] != -1) match[match_of_target[j]] = j;
  return match;
}

struct EmbedTable {
  const FiniteRootedTree& a;
  const FiniteRootedTree& b;
  // -1 unknown, 0 no, 1 yes for (u of a, v of b) with u -> v.
  std::vector<signed char> memo;

  EmbedTable(const FiniteRootedTree& a_, const FiniteRootedTree& b_)
      : a(a_), b(b_), memo(static_cast<size_t>(a_.size()) * b_.size(), -1) {}

  bool feasible(int u, int v) {
    signed char& m = memo[static_cast<size_t>(u) * b.size() + v];
    if (m != -1) return m == 1;
    const auto& cu = a.children(u);
    const auto& cv = b.children(v);
    if (cu.size() > cv.size()) {
      m = 0;
      return false;
    }
    std::vector<std::vector<int>> adj(cu.size());
    for (size_t i = 0; i < cu.size(); ++i)
      for (size_t j = 0; j < cv.size(); ++j)
        if (feasible(cu[i], cv[j])) adj[i].push_back(static_cast<int>(j));
    m = full_matching(adj, static_cast<int>(cv.size())).has_value() ? 1 : 0;
    return m == 1;
  }

  void realize(int u, int v, VertexMap& out) {
    out[u] = v;
    const auto& cu = a.children(u);
    const auto& cv = b.children(v);
    if (cu.empty()) return;
    std::vector<std::vector<int>> adj(cu.size());
    for (size_t i = 0; i < cu.size(); ++i)
      for (size_t j = 0; j < cv.size(); ++j)
        if (feasible(cu[i], cv[j])) adj[i].push_back(static_cast<int>(j));
    auto match = full_matching(adj, static_cast<int>(cv.size()));
    for (size_t i = 0; i < cu.size(); ++i)
      realize(cu[i], cv[(*match)[i]], out);
  }
};

}  // namespace

std::optional<VertexMap> embeds_rooted(const FiniteRootedTree& a,
                                       const FiniteRootedTree& b) {
  if (a.size() > b.size()) return std::nullopt;
  EmbedTable table(a, b);
  if (!table.feasible(a.root(), b.root())) return std::nullopt;
  VertexMap out(a.size(), -1);
  table.realize(a.root(), b.root(), out);
  return out;
}

namespace {

// b re-rooted at new_root, with old_index[v_new] = v_old.
FiniteRootedTree reroot(const FiniteRootedTree& b, int new_root,
                        std::vector<int>& old_index) {
  int n = b.size();
  std::vector<std::vector<int>> adj(n);
  for (int v = 1; v < n; ++v) {
    adj[v].push_back(b.parent(v));
    adj[b.parent(v)].push_back(v);
  }
  std::vector<int> parents_new;
  std::vector<int> new_index(n, -1);
  old_index.clear();
  std::vector<int> queue{new_root};
  new_index[new_root] = 0;
  old_index.push_back(new_root);
  parents_new.push_back(-1);
  for (size_t q = 0; q < queue.size(); ++q) {
    int v = queue[q];
    for (int w : adj[v]) {
      if (new_index[w] != -1) continue;
      new_index[w] = static_cast<int>(old_index.size());
      old_index.push_back(w);
      parents_new.push_back(new_index[v]);
      queue.push_back(w);
    }
  }
  return FiniteRootedTree(std::move(parents_new));
}

}  // namespace

std::optional<VertexMap> embeds_unrooted(const FiniteRootedTree& a,
                                         const FiniteRootedTree& b) {
  // Any injective adjacency-preserving map becomes a rooted embedding of
  // (a, root) into b re-anchored at the image of a's root.
  if (a.size() > b.size()) return std::nullopt;
  for (int anchor = 0; anchor < b.size(); ++anchor) {
    std::vector<int> old_index;
    FiniteRootedTree rb = reroot(b, anchor, old_index);
    if (auto map = embeds_rooted(a, rb)) {
      VertexMap out(a.size());
      for (int v = 0; v < a.size(); ++v) out[v] = old_index[(*map)[v]];
      return out;
    }
  }
  return std::nullopt;
}

}  // namespace treesib
