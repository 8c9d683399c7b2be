#include "treesib/presentation.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <numeric>
#include <queue>
#include <set>

namespace treesib {

namespace {

void require(bool ok, ErrorKind kind, const std::string& message) {
  if (!ok) throw Error(kind, message);
}

}  // namespace

FiniteRootedTree shape_tree(DecorationSeq::Shape shape, long long size) {
  require(size >= 0, ErrorKind::InvalidArgument, "shape size must be >= 0");
  int m = static_cast<int>(size);
  return shape == DecorationSeq::Shape::Path ? FiniteRootedTree::path(m)
                                             : FiniteRootedTree::star(m);
}

DecorationSeq DecorationSeq::periodic(std::vector<FiniteRootedTree> prefix,
                                      std::vector<FiniteRootedTree> period) {
  require(!period.empty(), ErrorKind::InvalidArgument, "period must be nonempty");
  DecorationSeq s;
  s.kind_ = Kind::Periodic;
  s.prefix_ = std::move(prefix);
  s.period_ = std::move(period);
  return s;
}

DecorationSeq DecorationSeq::generated(Shape shape, long long a, long long b) {
  require(a >= 0 && b >= 0, ErrorKind::InvalidArgument,
          "rule coefficients must be >= 0");
  if (a == 0) return periodic({}, {shape_tree(shape, b)});
  DecorationSeq s;
  s.kind_ = Kind::Generated;
  s.shape_ = shape;
  s.slope_ = a;
  s.offset_ = b;
  return s;
}

FiniteRootedTree DecorationSeq::at(long long n) const {
  require(n >= 0, ErrorKind::InvalidArgument, "position must be >= 0");
  if (kind_ == Kind::Generated) return shape_tree(shape_, slope_ * n + offset_);
  auto p = static_cast<long long>(prefix_.size());
  if (n < p) return prefix_[static_cast<size_t>(n)];
  return period_[static_cast<size_t>((n - p) % period_.size())];
}

bool DecorationSeq::trivial_from(long long from) const {
  if (kind_ == Kind::Generated) return false;  // slope >= 1 after normalizing
  auto p = static_cast<long long>(prefix_.size());
  for (long long n = from; n < p; ++n)
    if (!prefix_[static_cast<size_t>(n)].trivial()) return false;
  for (const auto& t : period_)
    if (!t.trivial()) return false;
  return true;
}

TreePresentation::TreePresentation(FiniteRootedTree core, std::vector<Arm> arms,
                                   std::vector<std::string> core_names,
                                   std::string name)
    : core_(std::move(core)),
      arms_(std::move(arms)),
      core_names_(std::move(core_names)),
      name_(std::move(name)) {
  int n = core_.size();
  if (core_names_.empty()) {
    for (int i = 0; i < n; ++i) core_names_.push_back("v" + std::to_string(i));
  }
  require(static_cast<int>(core_names_.size()) == n, ErrorKind::InvalidArgument,
          "one name per core vertex required");
  for (size_t i = 0; i < arms_.size(); ++i) {
    if (arms_[i].name.empty())
      arms_[i].name = std::string(1, static_cast<char>('A' + i % 26));
    require(arms_[i].attach >= 0 && arms_[i].attach < n,
            ErrorKind::InvalidArgument,
            "arm " + arms_[i].name + " attaches to a missing core vertex");
  }
  std::set<std::string> seen(core_names_.begin(), core_names_.end());
  require(static_cast<int>(seen.size()) == n, ErrorKind::InvalidArgument,
          "core vertex names must be unique");
  for (const auto& a : arms_)
    require(seen.insert(a.name).second, ErrorKind::InvalidArgument,
            "duplicate name " + a.name);

  core_adj_.assign(n, {});
  for (int v = 1; v < n; ++v) {
    core_adj_[core_.parent(v)].push_back(v);
    core_adj_[v].push_back(core_.parent(v));
  }
  for (auto& row : core_adj_) std::sort(row.begin(), row.end());
  arms_at_.assign(n, {});
  for (size_t i = 0; i < arms_.size(); ++i)
    arms_at_[arms_[i].attach].push_back(static_cast<int>(i));

  core_dist_.assign(n, std::vector<int>(n, -1));
  for (int s = 0; s < n; ++s) {
    std::queue<int> bfs;
    bfs.push(s);
    core_dist_[s][s] = 0;
    while (!bfs.empty()) {
      int v = bfs.front();
      bfs.pop();
      for (int w : core_adj_[v])
        if (core_dist_[s][w] < 0) {
          core_dist_[s][w] = core_dist_[s][v] + 1;
          bfs.push(w);
        }
    }
  }
}

const Arm& TreePresentation::arm(int i) const {
  require(i >= 0 && i < arm_count(), ErrorKind::InvalidArgument, "bad arm index");
  return arms_[static_cast<size_t>(i)];
}

const std::string& TreePresentation::core_name(int c) const {
  require(c >= 0 && c < core_.size(), ErrorKind::InvalidArgument,
          "bad core vertex");
  return core_names_[static_cast<size_t>(c)];
}

std::optional<int> TreePresentation::core_index(std::string_view name) const {
  for (size_t i = 0; i < core_names_.size(); ++i)
    if (core_names_[i] == name) return static_cast<int>(i);
  return std::nullopt;
}

std::optional<int> TreePresentation::arm_index(std::string_view name) const {
  for (size_t i = 0; i < arms_.size(); ++i)
    if (arms_[i].name == name) return static_cast<int>(i);
  return std::nullopt;
}

bool TreePresentation::valid_vertex(const Vertex& v) const {
  switch (v.kind) {
    case Vertex::Kind::Core:
      return v.core >= 0 && v.core < core_.size() && v.arm == -1 &&
             v.pos == 0 && v.node == 0;
    case Vertex::Kind::Spine:
      return v.core == -1 && v.arm >= 0 && v.arm < arm_count() && v.pos >= 0 &&
             v.node == 0;
    case Vertex::Kind::Dec: {
      if (v.core != -1 || v.arm < 0 || v.arm >= arm_count() || v.pos < 0 ||
          v.node < 1)
        return false;
      return v.node < decoration_at(v.arm, v.pos).size();
    }
  }
  return false;
}

FiniteRootedTree TreePresentation::decoration_at(int arm, long long pos) const {
  return this->arm(arm).seq.at(pos);
}

std::vector<Vertex> TreePresentation::neighbors(const Vertex& v) const {
  require(valid_vertex(v), ErrorKind::InvalidArgument, "vertex not in tree");
  std::vector<Vertex> out;
  switch (v.kind) {
    case Vertex::Kind::Core: {
      for (int w : core_adj_[static_cast<size_t>(v.core)])
        out.push_back(Vertex::core_vertex(w));
      for (int a : arms_at_[static_cast<size_t>(v.core)])
        out.push_back(Vertex::spine(a, 0));
      break;
    }
    case Vertex::Kind::Spine: {
      if (v.pos == 0)
        out.push_back(Vertex::core_vertex(arms_[static_cast<size_t>(v.arm)].attach));
      else
        out.push_back(Vertex::spine(v.arm, v.pos - 1));
      out.push_back(Vertex::spine(v.arm, v.pos + 1));
      auto dec = decoration_at(v.arm, v.pos);
      for (int c : dec.children(dec.root()))
        out.push_back(Vertex::dec(v.arm, v.pos, c));
      break;
    }
    case Vertex::Kind::Dec: {
      auto dec = decoration_at(v.arm, v.pos);
      int parent = dec.parent(v.node);
      out.push_back(parent == dec.root() ? Vertex::spine(v.arm, v.pos)
                                         : Vertex::dec(v.arm, v.pos, parent));
      for (int c : dec.children(v.node))
        out.push_back(Vertex::dec(v.arm, v.pos, c));
      break;
    }
  }
  return out;
}

int TreePresentation::degree(const Vertex& v) const {
  return static_cast<int>(neighbors(v).size());
}

int TreePresentation::core_distance(int a, int b) const {
  require(a >= 0 && a < core_.size() && b >= 0 && b < core_.size(),
          ErrorKind::InvalidArgument, "bad core vertex");
  return core_dist_[static_cast<size_t>(a)][static_cast<size_t>(b)];
}

int TreePresentation::core_diameter() const {
  int best = 0;
  for (const auto& row : core_dist_)
    for (int d : row) best = std::max(best, d);
  return best;
}

std::optional<int> Truncation::index_of(const Vertex& v) const {
  for (size_t i = 0; i < vertex_of.size(); ++i)
    if (vertex_of[i] == v) return static_cast<int>(i);
  return std::nullopt;
}

Truncation truncate_with_map(const TreePresentation& p, int d) {
  require(d >= 0, ErrorKind::InvalidArgument, "radius must be >= 0");
  std::vector<int> parents{-1};
  std::vector<Vertex> vertex_of{p.basepoint()};
  std::map<Vertex, int> index{{p.basepoint(), 0}};
  std::queue<std::pair<Vertex, int>> bfs;
  bfs.emplace(p.basepoint(), 0);
  while (!bfs.empty()) {
    auto [v, dist] = bfs.front();
    bfs.pop();
    if (dist == d) continue;
    for (const Vertex& w : p.neighbors(v)) {
      if (index.count(w)) continue;
      index.emplace(w, static_cast<int>(parents.size()));
      parents.push_back(index.at(v));
      vertex_of.push_back(w);
      bfs.emplace(w, dist + 1);
    }
  }
  return Truncation{FiniteRootedTree(std::move(parents)), std::move(vertex_of)};
}

FiniteRootedTree truncate(const TreePresentation& p, int d) {
  return truncate_with_map(p, d).tree;
}

long long tree_distance(const TreePresentation& p, const Vertex& u,
                        const Vertex& v) {
  require(p.valid_vertex(u) && p.valid_vertex(v), ErrorKind::InvalidArgument,
          "vertex not in tree");
  // Depth inside the decoration; the path to anything outside the decoration
  // passes through its root, the spine vertex.
  auto dec_depth = [&](const Vertex& x) -> long long {
    return x.kind == Vertex::Kind::Dec
               ? p.decoration_at(x.arm, x.pos).depth(x.node)
               : 0;
  };
  if (u.kind == Vertex::Kind::Core && v.kind == Vertex::Kind::Core)
    return p.core_distance(u.core, v.core);
  if (u.kind != Vertex::Kind::Core && v.kind != Vertex::Kind::Core &&
      u.arm == v.arm) {
    if (u.pos == v.pos) {
      // Same decoration (the spine vertex is its root, node 0).
      auto dec = p.decoration_at(u.arm, u.pos);
      int a = u.kind == Vertex::Kind::Dec ? u.node : dec.root();
      int b = v.kind == Vertex::Kind::Dec ? v.node : dec.root();
      int da = dec.depth(a), db = dec.depth(b);
      long long d = 0;
      while (da > db) a = dec.parent(a), --da, ++d;
      while (db > da) b = dec.parent(b), --db, ++d;
      while (a != b) a = dec.parent(a), b = dec.parent(b), d += 2;
      return d;
    }
    return dec_depth(u) + std::llabs(u.pos - v.pos) + dec_depth(v);
  }
  // Route through the core.
  auto to_attach = [&](const Vertex& x) -> std::pair<int, long long> {
    if (x.kind == Vertex::Kind::Core) return {x.core, 0};
    int attach = p.arm(x.arm).attach;
    return {attach, dec_depth(x) + x.pos + 1};
  };
  auto [cu, du] = to_attach(u);
  auto [cv, dv] = to_attach(v);
  return du + p.core_distance(cu, cv) + dv;
}

std::vector<End> ends(const TreePresentation& p) {
  std::vector<End> out;
  for (int a = 0; a < p.arm_count(); ++a) out.push_back(End{a});
  return out;
}

std::optional<RakeWitness> find_rake(const TreePresentation& p) {
  for (int a = 0; a < p.arm_count(); ++a) {
    const DecorationSeq& seq = p.arm(a).seq;
    if (seq.is_generated()) {
      // slope >= 1: sizes a*n + b reach 1 at n = 0 (b >= 1) or n = 1.
      return RakeWitness{a, seq.offset() >= 1 ? 0 : 1, 1};
    }
    const auto& period = seq.period();
    for (size_t j = 0; j < period.size(); ++j)
      if (!period[j].trivial())
        return RakeWitness{a,
                           static_cast<long long>(seq.prefix().size() + j),
                           static_cast<long long>(period.size())};
  }
  return std::nullopt;
}

NearlyFiniteReport is_nearly_finite(const TreePresentation& p) {
  auto rake = find_rake(p);
  return NearlyFiniteReport{!rake.has_value(), rake};
}

FiniteRootedTree branch_subtree(const TreePresentation& p, int arm,
                                long long n) {
  require(n >= 1, ErrorKind::Unsupported,
          "position 0 faces the core; its branch is not finite");
  return p.decoration_at(arm, n);
}

namespace {

bool equimorphic_rooted(const FiniteRootedTree& a, const FiniteRootedTree& b) {
  return embeds_rooted(a, b).has_value() && embeds_rooted(b, a).has_value();
}

}  // namespace

EndRegularity end_regularity(const TreePresentation& p, int arm) {
  const DecorationSeq& seq = p.arm(arm).seq;
  EndRegularity out;
  if (seq.is_periodic()) {
    out.regular = true;
    std::vector<FiniteRootedTree> reps;
    auto classify = [&](const FiniteRootedTree& t) {
      for (const auto& r : reps)
        if (equimorphic_rooted(t, r)) return;
      reps.push_back(t);
    };
    for (const auto& t : seq.prefix()) classify(t);
    for (const auto& t : seq.period()) classify(t);
    // The core-side branch at position 0 counts as one more class.
    out.class_count = static_cast<int>(reps.size()) + 1;
    return out;
  }
  out.regular = false;
  for (long long n = 1; n <= 8; ++n) {
    bool up = embeds_rooted(seq.at(n), seq.at(n + 1)).has_value();
    bool down = embeds_rooted(seq.at(n + 1), seq.at(n)).has_value();
    require(up && !down, ErrorKind::Internal,
            "generated decorations must grow strictly");
    out.witness_pairs.emplace_back(n, n + 1);
  }
  return out;
}

namespace {

int max_decoration_height(const TreePresentation& p) {
  int h = 0;
  for (const Arm& a : p.arms()) {
    if (a.seq.is_periodic()) {
      for (const auto& t : a.seq.prefix()) h = std::max(h, t.height());
      for (const auto& t : a.seq.period()) h = std::max(h, t.height());
    } else {
      // Probe small positions; generated arms never yield Isomorphic anyway.
      for (long long n = 0; n <= 4; ++n)
        h = std::max(h, a.seq.at(n).height());
    }
  }
  return h;
}

int max_prefix_length(const TreePresentation& p) {
  size_t m = 0;
  for (const Arm& a : p.arms())
    if (a.seq.is_periodic()) m = std::max(m, a.seq.prefix().size());
  return static_cast<int>(m);
}

bool all_periodic(const TreePresentation& p) {
  for (const Arm& a : p.arms())
    if (a.seq.is_generated()) return false;
  return true;
}

}  // namespace

long long period_lcm(const TreePresentation& p) {
  long long l = 1;
  for (const Arm& a : p.arms())
    if (a.seq.is_periodic())
      l = std::lcm(l, static_cast<long long>(a.seq.period().size()));
  return l;
}

IsoVerdict is_isomorphic_presentation(const TreePresentation& p,
                                      const TreePresentation& q) {
  long long lcm = std::lcm(period_lcm(p), period_lcm(q));
  int dstar = p.core().size() + q.core().size() +
              std::max(max_prefix_length(p), max_prefix_length(q)) +
              static_cast<int>(2 * lcm) +
              std::max(max_decoration_height(p), max_decoration_height(q)) + 2;
  for (int d = 0; d <= dstar; ++d)
    if (canonical_code(truncate(p, d)) != canonical_code(truncate(q, d)))
      return IsoVerdict{IsoVerdict::Kind::Distinct, d};
  bool certified = all_periodic(p) && all_periodic(q);
  return IsoVerdict{certified ? IsoVerdict::Kind::Isomorphic
                              : IsoVerdict::Kind::AgreeToDepth,
                    dstar};
}

bool is_ray(const TreePresentation& p) {
  if (p.arm_count() != 1) return false;
  if (!p.arm(0).seq.trivial_from(0)) return false;
  // The core must be a bare path with the arm hanging off one endpoint.
  const FiniteRootedTree& core = p.core();
  for (int v = 0; v < core.size(); ++v)
    if (core.degree(v) > 2) return false;
  int attach = p.arm(0).attach;
  return core.degree(attach) <= 1;
}

}  // namespace treesib
