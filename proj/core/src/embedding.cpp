#include "treesib/embedding.hpp"

#include <algorithm>
#include <climits>
#include <cstdlib>
#include <numeric>
#include <set>
#include <sstream>

namespace treesib {

namespace {

std::string vertex_str(const TreePresentation& p, const Vertex& v) {
  switch (v.kind) {
    case Vertex::Kind::Core:
      return p.core_name(v.core);
    case Vertex::Kind::Spine:
      return p.arm(v.arm).name + std::to_string(v.pos);
    default:
      return p.arm(v.arm).name + std::to_string(v.pos) + "." +
             std::to_string(v.node);
  }
}

long long span_of(const TreePresentation& p, const Vertex& v) {
  return tree_distance(p, Vertex::core_vertex(0), v);
}

// Canonical rooted-embedding witness for the decoration pair a rule moves.
VertexMap dec_witness(const TreePresentation& p, const TreePresentation& q,
                      const TailRule& r, long long n) {
  FiniteRootedTree src = p.decoration_at(r.source_arm, n);
  FiniteRootedTree tgt = q.decoration_at(r.target_arm, n + r.shift);
  auto w = embeds_rooted(src, tgt);
  if (!w) {
    throw Error(ErrorKind::Internal,
                "tail rule lacks a decoration witness at position " +
                    std::to_string(n));
  }
  return *w;
}

// First spine position where the rule's decoration certificate fails, if any.
// Periodic pairs are checked over one full lcm cycle past both prefixes;
// growth against a generated target is monotone, so first occurrences
// suffice; a generated source must fail against any periodic target and is
// scanned until the guaranteed failure.
std::optional<long long> certificate_failure(const TreePresentation& p,
                                             const TreePresentation& q,
                                             const TailRule& r) {
  if (r.valid_from + r.shift < 0) return r.valid_from;
  const DecorationSeq& s = p.arm(r.source_arm).seq;
  const DecorationSeq& t = q.arm(r.target_arm).seq;
  auto ok = [&](long long n) {
    return embeds_rooted(s.at(n), t.at(n + r.shift)).has_value();
  };
  if (s.is_periodic() && t.is_periodic()) {
    long long n0 = std::max({r.valid_from,
                             static_cast<long long>(s.prefix().size()),
                             static_cast<long long>(t.prefix().size()) -
                                 r.shift});
    long long cycle = std::lcm(static_cast<long long>(s.period().size()),
                               static_cast<long long>(t.period().size()));
    for (long long n = r.valid_from; n < n0 + cycle; ++n)
      if (!ok(n)) return n;
    return std::nullopt;
  }
  if (s.is_periodic()) {
    long long n0 =
        std::max(r.valid_from, static_cast<long long>(s.prefix().size()));
    for (long long n = r.valid_from;
         n < n0 + static_cast<long long>(s.period().size()); ++n)
      if (!ok(n)) return n;
    return std::nullopt;
  }
  if (t.is_periodic()) {
    for (long long n = r.valid_from; n < r.valid_from + 100000; ++n)
      if (!ok(n)) return n;
    throw Error(ErrorKind::Internal,
                "generated decorations failed to outgrow a periodic target");
  }
  if (s.shape() == t.shape() && s.slope() <= t.slope() &&
      s.slope() * r.valid_from + s.offset() <=
          t.slope() * (r.valid_from + r.shift) + t.offset()) {
    return std::nullopt;
  }
  for (long long n = r.valid_from; n < r.valid_from + 100000; ++n)
    if (!ok(n)) return n;
  throw Error(ErrorKind::Internal,
              "infeasible generated rule without a witnessed failure");
}

struct EmbeddingExtent {
  long long span = 0;       // patch keys in p and values in q
  long long max_shift = 0;
  long long max_vf = 0;
};

EmbeddingExtent extent_of(const TreePresentation& p, const TreePresentation& q,
                          const PresentedEmbedding& f) {
  EmbeddingExtent e;
  for (const auto& [k, v] : f.patch()) {
    e.span = std::max(e.span, span_of(p, k));
    e.span = std::max(e.span, span_of(q, v));
  }
  for (const TailRule& r : f.rules()) {
    e.max_shift = std::max(e.max_shift, std::llabs(r.shift));
    e.max_vf = std::max(e.max_vf, r.valid_from);
  }
  return e;
}

long long max_dec_height(const TreePresentation& p, long long up_to) {
  long long h = 0;
  for (int a = 0; a < p.arm_count(); ++a)
    for (long long n = 0; n <= up_to; ++n)
      h = std::max(h,
                   static_cast<long long>(p.decoration_at(a, n).height()));
  return h;
}

// Radius past which only tail-rule images remain: any interaction between
// the patch, the cores, and rule starts happens inside it.
long long window_radius(const TreePresentation& p, const TreePresentation& q,
                        const PresentedEmbedding& f) {
  EmbeddingExtent ex = extent_of(p, q, f);
  long long reach = ex.span + ex.max_shift + q.core().size() + 1;
  return ex.span + ex.max_shift + ex.max_vf + p.core().size() +
         q.core().size() + max_dec_height(p, reach) + 2;
}

// Injectivity and adjacency over an explicit ball of window_radius (or any
// larger one).  Assumes cores, patch coverage, and certificates were already
// checked, so every ball vertex has an image; the witness memo is keyed by
// (arm, position) and may be shared across patches under the same rules.
void window_check(const TreePresentation& p, const TreePresentation& q,
                  const PresentedEmbedding& f, const Truncation& ball,
                  std::map<std::pair<int, long long>, VertexMap>& wmemo,
                  std::vector<Violation>& out) {
  auto apply_fast = [&](const Vertex& v) -> Vertex {
    auto it = f.patch().find(v);
    if (it != f.patch().end()) return it->second;
    const TailRule* r = f.find_rule(v.arm);
    long long m = v.pos + r->shift;
    if (v.kind == Vertex::Kind::Spine) return Vertex::spine(r->target_arm, m);
    auto [mit, fresh] = wmemo.try_emplace({v.arm, v.pos});
    if (fresh) mit->second = dec_witness(p, q, *r, v.pos);
    return Vertex::dec(r->target_arm, m, mit->second[v.node]);
  };
  std::vector<Vertex> img(ball.vertex_of.size());
  std::map<Vertex, int> pre;
  for (size_t i = 0; i < ball.vertex_of.size(); ++i) {
    img[i] = apply_fast(ball.vertex_of[i]);
    auto [it, fresh] = pre.emplace(img[i], static_cast<int>(i));
    if (!fresh)
      out.push_back({ViolationKind::NotInjective,
                     vertex_str(p, ball.vertex_of[it->second]) + " and " +
                         vertex_str(p, ball.vertex_of[i]) +
                         " share the image " + vertex_str(q, img[i]),
                     ball.vertex_of[it->second], ball.vertex_of[i], -1, -1});
  }
  // Every edge inside the ball is one of the truncation's parent links.
  for (int i = 1; i < ball.tree.size(); ++i) {
    int up = ball.tree.parent(i);
    if (tree_distance(q, img[i], img[up]) != 1)
      out.push_back({ViolationKind::AdjacencyBroken,
                     "edge " + vertex_str(p, ball.vertex_of[up]) + " - " +
                         vertex_str(p, ball.vertex_of[i]) +
                         " maps to a non-edge",
                     ball.vertex_of[up], ball.vertex_of[i], -1, -1});
  }
}

// Geodesic from x to y, inclusive.
std::vector<Vertex> walk_path(const TreePresentation& p, Vertex x,
                              const Vertex& y) {
  std::vector<Vertex> out{x};
  long long d = tree_distance(p, x, y);
  while (d > 0) {
    bool moved = false;
    for (const Vertex& w : p.neighbors(x)) {
      if (tree_distance(p, w, y) == d - 1) {
        x = w;
        moved = true;
        break;
      }
    }
    if (!moved) throw Error(ErrorKind::Internal, "geodesic walk got stuck");
    --d;
    out.push_back(x);
  }
  return out;
}

// Linearization of the invariant ray (parabolic) or double ray (hyperbolic):
// an explicit window plus spine-tail formulas on each side.
struct AxisInfo {
  std::vector<Vertex> window;
  int fwd_arm = -1;
  long long fwd_pos0 = 0;   // window.back() == Spine(fwd_arm, fwd_pos0)
  bool two_sided = false;
  int back_arm = -1;
  long long back_pos0 = 0;  // window.front() == Spine(back_arm, back_pos0)
};

std::optional<long long> axis_coord(const AxisInfo& ax, const Vertex& v) {
  for (size_t i = 0; i < ax.window.size(); ++i)
    if (ax.window[i] == v) return static_cast<long long>(i);
  if (v.kind == Vertex::Kind::Spine) {
    if (v.arm == ax.fwd_arm && v.pos > ax.fwd_pos0)
      return static_cast<long long>(ax.window.size()) - 1 + (v.pos - ax.fwd_pos0);
    if (ax.two_sided && v.arm == ax.back_arm && v.pos > ax.back_pos0)
      return -(v.pos - ax.back_pos0);
  }
  return std::nullopt;
}

void analyze(const TreePresentation& p, const PresentedEmbedding& f,
             Classification& cls, AxisInfo& axis);

}  // namespace

PresentedEmbedding::PresentedEmbedding(std::map<Vertex, Vertex> patch,
                                       std::vector<TailRule> rules)
    : patch_(std::move(patch)), rules_(std::move(rules)) {
  std::sort(rules_.begin(), rules_.end(),
            [](const TailRule& a, const TailRule& b) {
              return a.source_arm < b.source_arm;
            });
  for (size_t i = 0; i + 1 < rules_.size(); ++i) {
    if (rules_[i].source_arm == rules_[i + 1].source_arm)
      throw Error(ErrorKind::InvalidArgument,
                  "two tail rules share a source arm");
  }
}

const TailRule* PresentedEmbedding::find_rule(int source_arm) const {
  for (const TailRule& r : rules_)
    if (r.source_arm == source_arm) return &r;
  return nullptr;
}

Vertex apply_into(const TreePresentation& p, const TreePresentation& q,
                  const PresentedEmbedding& f, const Vertex& v) {
  if (!p.valid_vertex(v))
    throw Error(ErrorKind::InvalidArgument,
                "apply: not a vertex of the source tree");
  auto it = f.patch().find(v);
  if (it != f.patch().end()) return it->second;
  if (v.kind == Vertex::Kind::Core)
    throw Error(ErrorKind::InvalidArgument,
                "apply: core vertex " + vertex_str(p, v) +
                    " is not covered by the patch");
  const TailRule* r = f.find_rule(v.arm);
  if (!r || v.pos < r->valid_from)
    throw Error(ErrorKind::InvalidArgument,
                "apply: " + vertex_str(p, v) +
                    " is covered by neither patch nor rule");
  long long m = v.pos + r->shift;
  if (v.kind == Vertex::Kind::Spine) return Vertex::spine(r->target_arm, m);
  VertexMap w = dec_witness(p, q, *r, v.pos);
  return Vertex::dec(r->target_arm, m, w[v.node]);
}

Vertex apply(const TreePresentation& p, const PresentedEmbedding& f,
             const Vertex& v) {
  return apply_into(p, p, f, v);
}

std::vector<Violation> validate_into(const TreePresentation& p,
                                     const TreePresentation& q,
                                     const PresentedEmbedding& f) {
  for (const TailRule& r : f.rules()) {
    if (r.source_arm < 0 || r.source_arm >= p.arm_count() ||
        r.target_arm < 0 || r.target_arm >= q.arm_count() || r.valid_from < 0)
      throw Error(ErrorKind::InvalidArgument,
                  "tail rule references a missing arm");
  }
  for (const auto& [k, v] : f.patch()) {
    if (!p.valid_vertex(k) || !q.valid_vertex(v))
      throw Error(ErrorKind::InvalidArgument,
                  "patch references a missing vertex");
  }

  std::vector<Violation> out;
  bool all_ruled = true;
  for (int a = 0; a < p.arm_count(); ++a) {
    if (!f.find_rule(a)) {
      all_ruled = false;
      out.push_back({ViolationKind::BoundaryMismatch,
                     "arm " + p.arm(a).name + " has no tail rule",
                     {}, {}, a, -1});
    }
  }
  if (!all_ruled) return out;

  for (size_t i = 0; i < f.rules().size(); ++i) {
    for (size_t j = i + 1; j < f.rules().size(); ++j) {
      if (f.rules()[i].target_arm == f.rules()[j].target_arm) {
        out.push_back({ViolationKind::NotInjective,
                       "rules for arms " + p.arm(f.rules()[i].source_arm).name +
                           " and " + p.arm(f.rules()[j].source_arm).name +
                           " share target arm " +
                           q.arm(f.rules()[i].target_arm).name,
                       {}, {}, f.rules()[i].target_arm, -1});
      }
    }
  }

  bool certs_ok = true;
  for (const TailRule& r : f.rules()) {
    if (auto bad = certificate_failure(p, q, r)) {
      certs_ok = false;
      std::string why =
          (*bad + r.shift < 0)
              ? "rule sends position " + std::to_string(*bad) +
                    " of arm " + p.arm(r.source_arm).name +
                    " below the target arm start"
              : "decoration at position " + std::to_string(*bad) +
                    " of arm " + p.arm(r.source_arm).name +
                    " does not embed under the rule";
      out.push_back(
          {ViolationKind::CertificateFails, why, {}, {}, r.source_arm, *bad});
    }
  }

  for (int a = 0; a < p.arm_count(); ++a) {
    const TailRule& r = *f.find_rule(a);
    for (long long n = 0; n < r.valid_from; ++n) {
      Vertex sv = Vertex::spine(a, n);
      if (!f.patch().count(sv))
        out.push_back({ViolationKind::BoundaryMismatch,
                       "patch misses " + vertex_str(p, sv), sv, {}, a, n});
      FiniteRootedTree dt = p.decoration_at(a, n);
      for (int node = 1; node < dt.size(); ++node) {
        Vertex dv = Vertex::dec(a, n, node);
        if (!f.patch().count(dv))
          out.push_back({ViolationKind::BoundaryMismatch,
                         "patch misses " + vertex_str(p, dv), dv, {}, a, n});
      }
    }
  }
  for (int c = 0; c < p.core().size(); ++c) {
    Vertex cv = Vertex::core_vertex(c);
    if (!f.patch().count(cv))
      out.push_back({ViolationKind::BoundaryMismatch,
                     "patch misses " + vertex_str(p, cv), cv, {}, -1, -1});
  }

  // On overlap the patch must agree with the rule.
  if (certs_ok) {
    for (const auto& [k, v] : f.patch()) {
      if (k.kind == Vertex::Kind::Core) continue;
      const TailRule& r = *f.find_rule(k.arm);
      if (k.pos < r.valid_from) continue;
      Vertex want =
          k.kind == Vertex::Kind::Spine
              ? Vertex::spine(r.target_arm, k.pos + r.shift)
              : Vertex::dec(r.target_arm, k.pos + r.shift,
                            dec_witness(p, q, r, k.pos)[k.node]);
      if (v != want)
        out.push_back({ViolationKind::BoundaryMismatch,
                       "patch disagrees with the tail rule at " +
                           vertex_str(p, k),
                       k, v, k.arm, k.pos});
    }
  }
  if (!out.empty()) return out;

  // Explicit window: beyond it only tail-rule images remain, and those are
  // injective and adjacency-preserving by construction.
  long long w = window_radius(p, q, f);
  Truncation ball = truncate_with_map(p, static_cast<int>(w));
  std::map<std::pair<int, long long>, VertexMap> wmemo;
  window_check(p, q, f, ball, wmemo, out);
  return out;
}

std::vector<Violation> validate(const TreePresentation& p,
                                const PresentedEmbedding& f) {
  return validate_into(p, p, f);
}

namespace {

void analyze(const TreePresentation& p, const PresentedEmbedding& f,
             Classification& cls, AxisInfo& axis) {
  auto bad = validate(p, f);
  if (!bad.empty())
    throw Error(ErrorKind::NotValidated,
                "embedding does not validate: " + bad.front().message);

  EmbeddingExtent ex = extent_of(p, p, f);
  long long b = ex.span + ex.max_shift + ex.max_vf + p.core_diameter() +
                period_lcm(p) + 2;
  Truncation ball = truncate_with_map(p, static_cast<int>(b));

  // Minimal displacement over the ball decides ellipticity: tail rules only
  // add constant displacement far out, so the minimum is visible here.
  long long best = LLONG_MAX;
  Vertex best_v{};
  std::map<Vertex, Vertex> image;
  for (const Vertex& v : ball.vertex_of) {
    Vertex u = apply(p, f, v);
    image.emplace(v, u);
    long long d = tree_distance(p, v, u);
    if (d < best ||
        (d == best && std::pair(span_of(p, v), v) <
                          std::pair(span_of(p, best_v), best_v))) {
      best = d;
      best_v = v;
    }
  }
  if (best == 0) {
    cls.kind = Classification::Kind::Elliptic;
    cls.fixed_vertex = best_v;
    return;
  }
  if (best == 1) {
    std::optional<std::pair<Vertex, Vertex>> edge;
    for (const auto& [v, u] : image) {
      if (tree_distance(p, v, u) != 1) continue;
      if (apply(p, f, u) != v) continue;
      std::pair<Vertex, Vertex> e = v < u ? std::pair(v, u) : std::pair(u, v);
      if (!edge || std::pair(span_of(p, e.first), e.first) <
                       std::pair(span_of(p, edge->first), edge->first))
        edge = e;
    }
    if (edge) {
      cls.kind = Classification::Kind::Elliptic;
      cls.fixed_edge = edge;
      return;
    }
  }

  std::vector<int> self_arms;
  for (int a = 0; a < p.arm_count(); ++a) {
    const TailRule* r = f.find_rule(a);
    if (r->target_arm == a) self_arms.push_back(a);
  }

  if (self_arms.size() == 1) {
    int arm = self_arms[0];
    const TailRule& r = *f.find_rule(arm);
    if (r.shift <= 0)
      throw Error(ErrorKind::Internal,
                  "non-elliptic embedding with a single non-forward self arm");
    long long per = r.shift;
    // Maximal invariant ray: pull the spine anchor back through preimages
    // until none exists.
    Vertex cur = Vertex::spine(arm, r.valid_from + per + 2);
    std::map<Vertex, Vertex> rev;
    for (const auto& [v, u] : image) rev.emplace(u, v);
    std::vector<Vertex> chain{cur};
    for (size_t guard = 0; guard <= image.size(); ++guard) {
      auto it = rev.find(cur);
      if (it == rev.end()) break;
      cur = it->second;
      chain.push_back(cur);
      if (guard == image.size())
        throw Error(ErrorKind::Internal, "preimage chain does not terminate");
    }
    long long legs = 0;
    for (size_t i = 0; i + 1 < chain.size(); ++i)
      legs += tree_distance(p, chain[i], chain[i + 1]);
    if (legs != tree_distance(p, chain.front(), chain.back()))
      throw Error(ErrorKind::Internal, "invariant ray is not a geodesic");

    axis.window = walk_path(p, chain.back(), chain.front());
    // A vertex x extends the ray iff f(x) lies on it, and injectivity pins
    // f(x) to window[per - 1]; pulling that vertex back finds the true start
    // even when the per-step orbit chain above skips it.
    for (size_t guard = 0;; ++guard) {
      if (axis.window.size() < static_cast<size_t>(per)) break;
      auto it = rev.find(axis.window[per - 1]);
      if (it == rev.end()) break;
      if (guard > image.size())
        throw Error(ErrorKind::Internal, "ray extension does not terminate");
      axis.window.insert(axis.window.begin(), it->second);
    }
    axis.fwd_arm = arm;
    axis.fwd_pos0 = r.valid_from + per + 2;
    axis.two_sided = false;
    for (size_t i = 0; i + per < axis.window.size(); ++i) {
      if (apply(p, f, axis.window[i]) != axis.window[i + per])
        throw Error(ErrorKind::Internal,
                    "invariant ray is not translated by the periodicity");
    }
    cls.kind = Classification::Kind::Parabolic;
    cls.forward = End{arm};
    cls.periodicity = per;
    cls.ray_sample.assign(
        axis.window.begin(),
        axis.window.begin() +
            std::min<size_t>(axis.window.size(), 12));
    return;
  }

  if (self_arms.size() == 2) {
    const TailRule& r0 = *f.find_rule(self_arms[0]);
    const TailRule& r1 = *f.find_rule(self_arms[1]);
    const TailRule& fw = r0.shift > 0 ? r0 : r1;
    const TailRule& bk = r0.shift > 0 ? r1 : r0;
    if (fw.shift <= 0 || bk.shift >= 0 || fw.shift != -bk.shift)
      throw Error(ErrorKind::Internal,
                  "hyperbolic self arms with inconsistent shifts");
    long long per = fw.shift;
    long long wb = bk.valid_from + per + 2;
    long long wf = fw.valid_from + per + 2;
    axis.window = walk_path(p, Vertex::spine(bk.source_arm, wb),
                            Vertex::spine(fw.source_arm, wf));
    axis.fwd_arm = fw.source_arm;
    axis.fwd_pos0 = wf;
    axis.two_sided = true;
    axis.back_arm = bk.source_arm;
    axis.back_pos0 = wb;
    for (size_t i = 0; i + per < axis.window.size(); ++i) {
      if (apply(p, f, axis.window[i]) != axis.window[i + per])
        throw Error(ErrorKind::Internal,
                    "invariant double ray is not translated consistently");
    }
    cls.kind = Classification::Kind::Hyperbolic;
    cls.forward = End{fw.source_arm};
    cls.backward = End{bk.source_arm};
    cls.periodicity = per;
    cls.ray_sample = axis.window;
    return;
  }

  throw Error(ErrorKind::Internal,
              "non-elliptic embedding fixes " +
                  std::to_string(self_arms.size()) + " arms");
}

}  // namespace

Classification classify(const TreePresentation& p,
                        const PresentedEmbedding& f) {
  Classification cls;
  AxisInfo axis;
  analyze(p, f, cls, axis);
  return cls;
}

End direction(const TreePresentation& p, const PresentedEmbedding& f) {
  Classification cls;
  AxisInfo axis;
  analyze(p, f, cls, axis);
  if (cls.kind == Classification::Kind::Elliptic)
    throw Error(ErrorKind::IsElliptic,
                "elliptic embeddings have no direction");
  EmbeddingExtent ex = extent_of(p, p, f);
  long long cap = 4 * (ex.span + ex.max_shift + ex.max_vf +
                       p.core_diameter() + period_lcm(p)) +
                  50;
  Vertex x = p.basepoint();
  for (long long step = 0; step < cap; ++step) {
    x = apply(p, f, x);
    if (x.kind != Vertex::Kind::Spine) continue;
    const TailRule* r = f.find_rule(x.arm);
    if (r->target_arm == x.arm && r->shift > 0 && x.pos >= r->valid_from) {
      if (End{x.arm} != *cls.forward)
        throw Error(ErrorKind::Internal,
                    "orbit direction disagrees with the classification");
      return End{x.arm};
    }
  }
  throw Error(ErrorKind::Internal, "basepoint orbit failed to stabilize");
}

long long periodicity(const TreePresentation& p, const PresentedEmbedding& f) {
  Classification cls = classify(p, f);
  if (cls.kind == Classification::Kind::Elliptic)
    throw Error(ErrorKind::IsElliptic,
                "elliptic embeddings have no periodicity");
  return cls.periodicity;
}

FixedStructure fixed_structure(const TreePresentation& p,
                               const PresentedEmbedding& f) {
  Classification cls = classify(p, f);
  FixedStructure fs;
  switch (cls.kind) {
    case Classification::Kind::Elliptic:
      if (cls.fixed_vertex) {
        fs.kind = FixedStructure::Kind::FixedVertex;
        fs.vertex = cls.fixed_vertex;
      } else {
        fs.kind = FixedStructure::Kind::FixedEdge;
        fs.edge = cls.fixed_edge;
      }
      break;
    case Classification::Kind::Parabolic:
      fs.kind = FixedStructure::Kind::InvariantRay;
      fs.ray_sample = cls.ray_sample;
      fs.forward = cls.forward;
      break;
    case Classification::Kind::Hyperbolic:
      fs.kind = FixedStructure::Kind::InvariantDoubleRay;
      fs.ray_sample = cls.ray_sample;
      fs.forward = cls.forward;
      fs.backward = cls.backward;
      break;
  }
  return fs;
}

SpineOrder spine_order(const TreePresentation& p, const PresentedEmbedding& f,
                       const Vertex& s, const Vertex& t) {
  if (!p.valid_vertex(s) || !p.valid_vertex(t))
    throw Error(ErrorKind::InvalidArgument,
                "spine_order: not a vertex of the tree");
  Classification cls;
  AxisInfo axis;
  analyze(p, f, cls, axis);
  if (cls.kind == Classification::Kind::Elliptic)
    throw Error(ErrorKind::IsElliptic,
                "elliptic embeddings have no spine order");
  auto cs = axis_coord(axis, s);
  auto ct = axis_coord(axis, t);
  if (!cs || !ct) return SpineOrder::NotOnSpine;
  if (*cs == *ct) return SpineOrder::Equal;
  return *cs < *ct ? SpineOrder::LeftOf : SpineOrder::RightOf;
}

bool preserves_forward(const TreePresentation& p, const PresentedEmbedding& f,
                       const End& e) {
  if (e.arm < 0 || e.arm >= p.arm_count())
    throw Error(ErrorKind::InvalidArgument, "no such end");
  auto bad = validate(p, f);
  if (!bad.empty())
    throw Error(ErrorKind::NotValidated,
                "embedding does not validate: " + bad.front().message);
  const TailRule* r = f.find_rule(e.arm);
  return r->target_arm == e.arm && r->shift >= 0;
}

bool preserves_backward(const TreePresentation& p, const PresentedEmbedding& f,
                        const End& e) {
  if (e.arm < 0 || e.arm >= p.arm_count())
    throw Error(ErrorKind::InvalidArgument, "no such end");
  auto bad = validate(p, f);
  if (!bad.empty())
    throw Error(ErrorKind::NotValidated,
                "embedding does not validate: " + bad.front().message);
  const TailRule* r = f.find_rule(e.arm);
  return r->target_arm == e.arm && r->shift <= 0;
}

namespace {

std::string embedding_key(const PresentedEmbedding& f) {
  std::ostringstream os;
  for (const TailRule& r : f.rules())
    os << r.source_arm << ',' << r.target_arm << ',' << r.shift << ','
       << r.valid_from << ';';
  os << '|';
  for (const auto& [k, v] : f.patch())
    os << static_cast<int>(k.kind) << ',' << k.core << ',' << k.arm << ','
       << k.pos << ',' << k.node << ">" << static_cast<int>(v.kind) << ','
       << v.core << ',' << v.arm << ',' << v.pos << ',' << v.node << ';';
  return os.str();
}

struct DomainVertex {
  Vertex v;
  int parent = -1;  // index in the domain ordering
  int degree = 0;
};

// The patch domain: core plus every arm position below valid_from, with
// complete decorations, in BFS order from the basepoint.
std::vector<DomainVertex> patch_domain(const TreePresentation& p,
                                       long long l) {
  std::vector<DomainVertex> out;
  std::set<Vertex> seen;
  out.push_back({p.basepoint(), -1, p.degree(p.basepoint())});
  seen.insert(p.basepoint());
  for (size_t i = 0; i < out.size(); ++i) {
    Vertex v = out[i].v;
    for (const Vertex& w : p.neighbors(v)) {
      if (w.kind != Vertex::Kind::Core && w.pos >= l) continue;
      if (!seen.insert(w).second) continue;
      out.push_back({w, static_cast<int>(i), p.degree(w)});
    }
  }
  return out;
}

// Occupancy of target vertices by tail-rule images under a fixed schema.
struct RuleImages {
  const TreePresentation* p = nullptr;
  const TreePresentation* q = nullptr;
  std::vector<TailRule> rules;     // indexed by source arm
  std::vector<int> rule_into;      // target arm -> source arm, -1 if none
  std::map<std::pair<int, long long>, std::vector<char>> dec_nodes;

  bool occupied(const Vertex& u) {
    if (u.kind == Vertex::Kind::Core) return false;
    int src = rule_into[u.arm];
    if (src < 0) return false;
    const TailRule& r = rules[src];
    long long n = u.pos - r.shift;
    if (n < r.valid_from) return false;
    if (u.kind == Vertex::Kind::Spine) return true;
    auto key = std::pair(src, n);
    auto it = dec_nodes.find(key);
    if (it == dec_nodes.end()) {
      VertexMap w = dec_witness(*p, *q, r, n);
      std::vector<char> bm(q->decoration_at(r.target_arm, u.pos).size(), 0);
      for (size_t i = 1; i < w.size(); ++i) bm[w[i]] = 1;
      it = dec_nodes.emplace(key, std::move(bm)).first;
    }
    return it->second[u.node] != 0;
  }
};

struct PatchSearch {
  const TreePresentation* p = nullptr;
  const TreePresentation* q = nullptr;
  long long l = 0;
  const std::vector<DomainVertex>* domain = nullptr;
  const std::vector<Vertex>* anchors = nullptr;
  RuleImages* ri = nullptr;
  std::vector<Vertex> assigned;
  std::set<Vertex> used;
  std::vector<PresentedEmbedding>* results = nullptr;
  std::map<long long, Truncation>* balls = nullptr;
  std::map<std::pair<int, long long>, VertexMap> wmemo;

  void run() {
    assigned.assign(domain->size(), Vertex{});
    dfs(0);
  }

  void dfs(size_t i) {
    if (i == domain->size()) {
      finalize();
      return;
    }
    const DomainVertex& dv = (*domain)[i];
    std::vector<Vertex> pool =
        dv.parent < 0 ? *anchors : q->neighbors(assigned[dv.parent]);
    for (const Vertex& c : pool) {
      if (used.count(c) || ri->occupied(c) || q->degree(c) < dv.degree)
        continue;
      if (dv.v.kind == Vertex::Kind::Spine && dv.v.pos == l - 1) {
        const TailRule& r = ri->rules[dv.v.arm];
        Vertex rim = Vertex::spine(r.target_arm, l + r.shift);
        if (tree_distance(*q, c, rim) != 1) continue;
      }
      assigned[i] = c;
      used.insert(c);
      dfs(i + 1);
      used.erase(c);
    }
  }

  // Candidates reaching here satisfy every patch-level requirement by
  // construction (coverage and overlap by the domain shape, certificates by
  // the schema pre-check, local adjacency and injectivity by the DFS), so
  // only the window scan of validation still has teeth.  Sharing truncations
  // per radius and witnesses per rule schema keeps it affordable.
  void finalize() {
    std::map<Vertex, Vertex> patch;
    for (size_t i = 0; i < domain->size(); ++i)
      patch.emplace((*domain)[i].v, assigned[i]);
    PresentedEmbedding emb(std::move(patch), ri->rules);
    long long w = window_radius(*p, *q, emb);
    auto it = balls->find(w);
    if (it == balls->end())
      it = balls->emplace(w, truncate_with_map(*p, static_cast<int>(w)))
               .first;
    std::vector<Violation> bad;
    window_check(*p, *q, emb, it->second, wmemo, bad);
    if (bad.empty()) results->push_back(emb);
  }
};

void build_injections(int slots, int targets, std::vector<int>& cur,
                      std::vector<bool>& taken,
                      std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == slots) {
    out.push_back(cur);
    return;
  }
  for (int t = 0; t < targets; ++t) {
    if (taken[t]) continue;
    taken[t] = true;
    cur.push_back(t);
    build_injections(slots, targets, cur, taken, out);
    cur.pop_back();
    taken[t] = false;
  }
}

}  // namespace

std::vector<PresentedEmbedding> search_embeddings_into(
    const TreePresentation& p, const TreePresentation& q,
    const SearchBounds& bounds) {
  if (bounds.shift_bound < 1 || bounds.patch_radius < 1)
    throw Error(ErrorKind::InvalidArgument,
                "search bounds must be at least 1");
  long long l = bounds.patch_radius;
  long long sb = bounds.shift_bound;
  int ap = p.arm_count();
  int aq = q.arm_count();
  std::vector<PresentedEmbedding> results;
  if (ap > aq) return results;

  std::vector<std::vector<int>> injections;
  {
    std::vector<int> cur;
    std::vector<bool> taken(aq, false);
    build_injections(ap, aq, cur, taken, injections);
  }

  std::vector<DomainVertex> domain = patch_domain(p, l);
  long long hp = max_dec_height(p, l);
  long long hq = max_dec_height(q, l + sb + 1);
  long long anchor_radius = 2 * l + sb + p.core().size() + q.core().size() +
                            hp + hq + 2;
  std::vector<Vertex> anchors =
      truncate_with_map(q, static_cast<int>(anchor_radius)).vertex_of;
  std::map<long long, Truncation> balls;

  for (const std::vector<int>& sigma : injections) {
    std::vector<long long> shifts(ap, -sb);
    while (true) {
      std::vector<TailRule> rules;
      for (int a = 0; a < ap; ++a)
        rules.push_back({a, sigma[a], shifts[a], l});
      bool feasible = true;
      for (const TailRule& r : rules) {
        if (certificate_failure(p, q, r)) {
          feasible = false;
          break;
        }
      }
      if (feasible) {
        RuleImages ri;
        ri.p = &p;
        ri.q = &q;
        ri.rules = rules;
        ri.rule_into.assign(aq, -1);
        for (int a = 0; a < ap; ++a) ri.rule_into[sigma[a]] = a;
        PatchSearch ps;
        ps.p = &p;
        ps.q = &q;
        ps.l = l;
        ps.domain = &domain;
        ps.anchors = &anchors;
        ps.ri = &ri;
        ps.results = &results;
        ps.balls = &balls;
        ps.run();
      }
      int i = 0;
      while (i < ap && shifts[i] == sb) shifts[i++] = -sb;
      if (i == ap) break;  // odometer done; zero arms run the body once
      ++shifts[i];
    }
  }

  std::sort(results.begin(), results.end(),
            [](const PresentedEmbedding& a, const PresentedEmbedding& b) {
              return embedding_key(a) < embedding_key(b);
            });
  return results;
}

std::vector<PresentedEmbedding> search_embeddings(const TreePresentation& p,
                                                  const SearchBounds& bounds) {
  return search_embeddings_into(p, p, bounds);
}

DirectionSet directions_set(const TreePresentation& p,
                            const std::vector<PresentedEmbedding>& results) {
  // The forward end of a validated non-elliptic embedding is its unique
  // self-arm with positive shift: an arm cycle of length >= 2 must have
  // total shift zero (the image of a path between deep vertices of two
  // cycled arms would otherwise be longer than the path itself), so orbits
  // escape only along positive self-arms.  Reading ends off the rules keeps
  // this linear in the result count; one witness per end is still classified
  // to confirm the rule-level reading.
  std::map<End, PresentedEmbedding> found;
  for (const PresentedEmbedding& f : results) {
    const TailRule* fwd = nullptr;
    for (const TailRule& r : f.rules())
      if (r.source_arm == r.target_arm && r.shift > 0) fwd = &r;
    if (!fwd) continue;
    End e{fwd->source_arm};
    if (found.count(e)) continue;
    Classification cls = classify(p, f);
    if (cls.kind == Classification::Kind::Elliptic || !cls.forward ||
        cls.forward->arm != e.arm)
      throw Error(ErrorKind::Internal,
                  "rule-level direction disagrees with the classification");
    found.emplace(e, f);
  }
  if (found.size() > 2)
    throw Error(ErrorKind::Internal,
                "directions sample exceeds two ends");
  DirectionSet ds;
  for (const auto& [e, f] : found) {
    ds.ends.push_back(e);
    ds.witnesses.push_back(f);
  }
  return ds;
}

DirectionSet directions_set(const TreePresentation& p,
                            const SearchBounds& bounds) {
  return directions_set(p, search_embeddings(p, bounds));
}

std::vector<End> limit_set_sample(const TreePresentation& p,
                                  const std::vector<PresentedEmbedding>& gens,
                                  int word_length, int depth) {
  if (word_length < 0 || depth < 1)
    throw Error(ErrorKind::InvalidArgument,
                "word length must be >= 0 and depth >= 1");
  for (const PresentedEmbedding& g : gens) {
    auto bad = validate(p, g);
    if (!bad.empty())
      throw Error(ErrorKind::NotValidated,
                  "generator does not validate: " + bad.front().message);
  }
  std::set<Vertex> frontier{p.basepoint()};
  std::set<Vertex> all = frontier;
  for (int step = 0; step < word_length; ++step) {
    std::set<Vertex> next;
    for (const Vertex& v : frontier)
      for (const PresentedEmbedding& g : gens) next.insert(apply(p, g, v));
    frontier = next;
    all.insert(next.begin(), next.end());
  }
  std::set<End> ends;
  for (const Vertex& v : all) {
    if (v.kind == Vertex::Kind::Core) continue;
    if (tree_distance(p, p.basepoint(), v) >= depth) ends.insert(End{v.arm});
  }
  return {ends.begin(), ends.end()};
}

VertexSeq VertexSeq::spine(int arm) {
  VertexSeq s;
  s.kind = Kind::Spine;
  s.arm = arm;
  return s;
}

VertexSeq VertexSeq::teeth(int arm) {
  VertexSeq s;
  s.kind = Kind::Teeth;
  s.arm = arm;
  return s;
}

VertexSeq VertexSeq::ray_teeth(int arm, Vertex x0) {
  VertexSeq s;
  s.kind = Kind::RayTeeth;
  s.arm = arm;
  s.base = x0;
  return s;
}

VertexSeq VertexSeq::constant(Vertex v) {
  VertexSeq s;
  s.kind = Kind::Constant;
  s.base = v;
  return s;
}

Vertex VertexSeq::at(long long m) const {
  switch (kind) {
    case Kind::Spine:
      return Vertex::spine(arm, m);
    case Kind::Teeth:
      return Vertex::dec(arm, m, 1);
    case Kind::RayTeeth:
      return m == 0 ? base : Vertex::dec(arm, m - 1, 1);
    default:
      return base;
  }
}

ConvergenceReport converges_to(const TreePresentation& p, const VertexSeq& seq,
                               const End& e, int bound) {
  if (e.arm < 0 || e.arm >= p.arm_count())
    throw Error(ErrorKind::InvalidArgument, "no such end");
  if (bound < 1)
    throw Error(ErrorKind::InvalidArgument, "bound must be >= 1");

  // The e-ray from the basepoint: geodesic through the core, then the spine.
  std::vector<Vertex> core_part{p.basepoint()};
  int attach = p.arm(e.arm).attach;
  int c = 0;
  while (c != attach) {
    int step = -1;
    for (const Vertex& w : p.neighbors(Vertex::core_vertex(c))) {
      if (w.kind != Vertex::Kind::Core) continue;
      if (p.core_distance(w.core, attach) == p.core_distance(c, attach) - 1) {
        step = w.core;
        break;
      }
    }
    if (step < 0) throw Error(ErrorKind::Internal, "core walk got stuck");
    c = step;
    core_part.push_back(Vertex::core_vertex(c));
  }
  long long cpl = static_cast<long long>(core_part.size());
  auto ray_at = [&](long long j) {
    return j < cpl ? core_part[j] : Vertex::spine(e.arm, j - cpl);
  };
  auto member = [&](long long m) {
    Vertex x = seq.at(m);
    if (!p.valid_vertex(x))
      throw Error(ErrorKind::InvalidArgument,
                  "sequence leaves the tree at member " + std::to_string(m));
    return x;
  };
  // Distances to consecutive ray vertices change by exactly one, so the
  // projection is the first index where they stop decreasing.
  auto proj = [&](const Vertex& x) {
    long long best = tree_distance(p, x, ray_at(0));
    long long bj = 0;
    long long cap = bound + best + 2;  // the projection sits within d(x, r_0)
    for (long long j = 1; j <= cap; ++j) {
      long long d = tree_distance(p, x, ray_at(j));
      if (d < best) {
        best = d;
        bj = j;
      } else {
        break;
      }
    }
    return bj;
  };

  ConvergenceReport rep;
  rep.counts.assign(bound + 1, 0);
  if (seq.kind == VertexSeq::Kind::Constant) {
    long long j0 = proj(member(0));
    for (int n = 0; n <= bound; ++n) rep.counts[n] = n >= j0 ? -1 : 0;
    rep.converges = false;
    return rep;
  }
  if (seq.arm != e.arm) {
    // Every member projects through the same attach vertex.
    long long j0 = proj(member(0));
    long long j1 = proj(member(1));
    if (proj(member(2)) != j1 || proj(member(3)) != j1)
      throw Error(ErrorKind::Internal,
                  "off-arm projections failed to settle");
    for (int n = 0; n <= bound; ++n)
      rep.counts[n] = n >= j1 ? -1 : (j0 <= n ? 1 : 0);
    rep.converges = false;
    return rep;
  }
  long long prev = -1;
  for (long long m = 0;; ++m) {
    long long j = proj(member(m));
    if (j < prev)
      throw Error(ErrorKind::Internal, "on-arm projections not monotone");
    prev = j;
    if (j > bound) break;
    for (long long n = j; n <= bound; ++n) ++rep.counts[n];
    if (m > bound + cpl + 4)
      throw Error(ErrorKind::Internal, "on-arm projections stalled");
  }
  rep.converges = true;
  return rep;
}

PresentedEmbedding identity_embedding(const TreePresentation& p) {
  std::map<Vertex, Vertex> patch;
  for (int c = 0; c < p.core().size(); ++c)
    patch.emplace(Vertex::core_vertex(c), Vertex::core_vertex(c));
  std::vector<TailRule> rules;
  for (int a = 0; a < p.arm_count(); ++a) rules.push_back({a, a, 0, 0});
  return PresentedEmbedding(std::move(patch), std::move(rules));
}

PresentedEmbedding power_embedding(const TreePresentation& p,
                                   const PresentedEmbedding& f, int m) {
  if (m < 1)
    throw Error(ErrorKind::InvalidArgument, "power must be >= 1");
  auto bad = validate(p, f);
  if (!bad.empty())
    throw Error(ErrorKind::NotValidated,
                "embedding does not validate: " + bad.front().message);
  std::vector<TailRule> rules;
  for (int a = 0; a < p.arm_count(); ++a) {
    int cur = a;
    long long pre = 0;
    long long vfm = 0;
    for (int i = 0; i < m; ++i) {
      const TailRule& r = *f.find_rule(cur);
      vfm = std::max(vfm, r.valid_from - pre);
      pre += r.shift;
      cur = r.target_arm;
    }
    rules.push_back({a, cur, pre, std::max(vfm, 0LL)});
  }
  std::map<Vertex, Vertex> patch;
  auto add = [&](const Vertex& v) {
    Vertex u = v;
    for (int i = 0; i < m; ++i) u = apply(p, f, u);
    patch.emplace(v, u);
  };
  for (int c = 0; c < p.core().size(); ++c) add(Vertex::core_vertex(c));
  for (int a = 0; a < p.arm_count(); ++a) {
    for (long long n = 0; n < rules[a].valid_from; ++n) {
      add(Vertex::spine(a, n));
      FiniteRootedTree dt = p.decoration_at(a, n);
      for (int node = 1; node < dt.size(); ++node)
        add(Vertex::dec(a, n, node));
    }
  }
  return PresentedEmbedding(std::move(patch), std::move(rules));
}

}  // namespace treesib
