#include "support/naive_expand.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

namespace treesib::oracle {

std::string naive_vertex_id(const Vertex& v) {
  switch (v.kind) {
    case Vertex::Kind::Core:
      return "c" + std::to_string(v.core);
    case Vertex::Kind::Spine:
      return "s" + std::to_string(v.arm) + ":" + std::to_string(v.pos);
    case Vertex::Kind::Dec:
      return "d" + std::to_string(v.arm) + ":" + std::to_string(v.pos) + ":" +
             std::to_string(v.node);
  }
  throw std::logic_error("bad vertex kind");
}

NaiveGraph naive_graph(const TreePresentation& p, long long pos_bound) {
  NaiveGraph g;
  auto link = [&](const std::string& a, const std::string& b) {
    g[a].push_back(b);
    g[b].push_back(a);
  };
  for (int v = 0; v < p.core().size(); ++v) {
    g["c" + std::to_string(v)];
    if (v != p.core().root())
      link("c" + std::to_string(v), "c" + std::to_string(p.core().parent(v)));
  }
  for (int a = 0; a < p.arm_count(); ++a) {
    std::string prev = "c" + std::to_string(p.arm(a).attach);
    for (long long n = 0; n <= pos_bound; ++n) {
      std::string spine = naive_vertex_id(Vertex::spine(a, n));
      link(prev, spine);
      prev = spine;
      auto dec = p.decoration_at(a, n);
      for (int k = 1; k < dec.size(); ++k) {
        int parent = dec.parent(k);
        link(naive_vertex_id(Vertex::dec(a, n, k)),
             parent == 0 ? spine : naive_vertex_id(Vertex::dec(a, n, parent)));
      }
    }
  }
  for (auto& [id, adj] : g) std::sort(adj.begin(), adj.end());
  return g;
}

namespace {

std::map<std::string, int> bfs_distances(const NaiveGraph& g,
                                         const std::string& from) {
  std::map<std::string, int> dist{{from, 0}};
  std::queue<std::string> q;
  q.push(from);
  while (!q.empty()) {
    auto v = q.front();
    q.pop();
    for (const auto& w : g.at(v))
      if (!dist.count(w)) {
        dist[w] = dist[v] + 1;
        q.push(w);
      }
  }
  return dist;
}

}  // namespace

std::string naive_ball_code(const TreePresentation& p, int d) {
  // Spine position n sits at distance >= n + 1 from the basepoint, so
  // positions beyond d never enter the ball.
  NaiveGraph g = naive_graph(p, d + 1);
  auto dist = bfs_distances(g, naive_vertex_id(p.basepoint()));
  std::vector<int> parents{-1};
  std::vector<std::string> order{naive_vertex_id(p.basepoint())};
  std::map<std::string, int> index{{order[0], 0}};
  for (size_t i = 0; i < order.size(); ++i) {
    for (const auto& w : g.at(order[i])) {
      if (index.count(w) || dist.at(w) > d || dist.at(w) != dist.at(order[i]) + 1)
        continue;
      index[w] = static_cast<int>(parents.size());
      parents.push_back(static_cast<int>(i));
      order.push_back(w);
    }
  }
  return canonical_code(FiniteRootedTree(std::move(parents))).text;
}

int naive_graph_distance(const TreePresentation& p, const Vertex& u,
                         const Vertex& v, long long pos_bound) {
  NaiveGraph g = naive_graph(p, pos_bound);
  auto dist = bfs_distances(g, naive_vertex_id(u));
  return dist.at(naive_vertex_id(v));
}

}  // namespace treesib::oracle
