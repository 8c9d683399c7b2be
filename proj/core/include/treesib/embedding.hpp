#ifndef TREESIB_EMBEDDING_HPP
#define TREESIB_EMBEDDING_HPP

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "treesib/presentation.hpp"

namespace treesib {

// Eventual behaviour of an embedding on one arm: spine position n maps to
// position n + shift on the target arm for every n >= valid_from, with the
// decoration carried by a rooted embedding (certified finitely, realized by
// the canonical witness).
struct TailRule {
  int source_arm = 0;
  int target_arm = 0;
  long long shift = 0;
  long long valid_from = 0;
};

// Self-embedding (or embedding into another presentation) in tail-regular
// form: an explicit finite patch plus one tail rule per arm.  The patch must
// cover the core and everything below each rule's valid_from; on overlap the
// patch must agree with the rule.
class PresentedEmbedding {
 public:
  PresentedEmbedding(std::map<Vertex, Vertex> patch, std::vector<TailRule> rules);

  const std::map<Vertex, Vertex>& patch() const { return patch_; }
  const std::vector<TailRule>& rules() const { return rules_; }
  // Null when no rule covers the arm.
  const TailRule* find_rule(int source_arm) const;

 private:
  std::map<Vertex, Vertex> patch_;
  std::vector<TailRule> rules_;
};

enum class ViolationKind {
  AdjacencyBroken,
  NotInjective,
  CertificateFails,
  BoundaryMismatch,
};

struct Violation {
  ViolationKind kind = ViolationKind::BoundaryMismatch;
  std::string message;
  Vertex u{};
  Vertex v{};
  int arm = -1;
  long long pos = -1;
};

// Empty result means the embedding is valid.  Patch and window behaviour is
// checked vertex by vertex; tails are checked by per-rule certificates (one
// lcm cycle for periodic pairs, affine feasibility for generated ones).
std::vector<Violation> validate(const TreePresentation& p,
                                const PresentedEmbedding& f);
std::vector<Violation> validate_into(const TreePresentation& p,
                                     const TreePresentation& q,
                                     const PresentedEmbedding& f);

// Image of one vertex.  Decoration vertices in rule regions go through the
// canonical rooted-embedding witness of their decoration pair.
Vertex apply(const TreePresentation& p, const PresentedEmbedding& f,
             const Vertex& v);
Vertex apply_into(const TreePresentation& p, const TreePresentation& q,
                  const PresentedEmbedding& f, const Vertex& v);

struct Classification {
  enum class Kind { Elliptic, Parabolic, Hyperbolic };
  Kind kind = Kind::Elliptic;
  // Elliptic: exactly one of these is set.
  std::optional<Vertex> fixed_vertex;
  std::optional<std::pair<Vertex, Vertex>> fixed_edge;
  // Non-elliptic: the direction f+ (and f- when hyperbolic) and p(f).
  std::optional<End> forward;
  std::optional<End> backward;
  long long periodicity = 0;
  // Start of the maximal invariant ray / a window of the double ray.
  std::vector<Vertex> ray_sample;
};

// Halin trichotomy via minimal displacement over a large enough ball.
Classification classify(const TreePresentation& p, const PresentedEmbedding& f);

// Arm hosting the tail of the basepoint orbit x, f(x), f(f(x)), ...
End direction(const TreePresentation& p, const PresentedEmbedding& f);

// d(r, f(r)) for r on the invariant ray / double ray.
long long periodicity(const TreePresentation& p, const PresentedEmbedding& f);

struct FixedStructure {
  enum class Kind { FixedVertex, FixedEdge, InvariantRay, InvariantDoubleRay };
  Kind kind = Kind::FixedVertex;
  std::optional<Vertex> vertex;
  std::optional<std::pair<Vertex, Vertex>> edge;
  std::vector<Vertex> ray_sample;
  std::optional<End> forward;
  std::optional<End> backward;
};

FixedStructure fixed_structure(const TreePresentation& p,
                               const PresentedEmbedding& f);

enum class SpineOrder { LeftOf, RightOf, Equal, NotOnSpine };

// s left of t when the piece of the invariant (double) ray beyond s toward
// f+ contains t.
SpineOrder spine_order(const TreePresentation& p, const PresentedEmbedding& f,
                       const Vertex& s, const Vertex& t);

// Forward: some ray to e maps into itself (self-rule with shift >= 0).
// Backward: some ray to e is contained in its image (shift <= 0).
bool preserves_forward(const TreePresentation& p, const PresentedEmbedding& f,
                       const End& e);
bool preserves_backward(const TreePresentation& p, const PresentedEmbedding& f,
                        const End& e);

struct SearchBounds {
  long long shift_bound = 1;
  int patch_radius = 2;
};

// Enumerates tail-regular embeddings: injective arm assignments, shifts in
// [-shift_bound, shift_bound], valid_from = patch_radius, patches completed
// by backtracking.  Every result validates; order is deterministic.
std::vector<PresentedEmbedding> search_embeddings(const TreePresentation& p,
                                                  const SearchBounds& bounds);
std::vector<PresentedEmbedding> search_embeddings_into(
    const TreePresentation& p, const TreePresentation& q,
    const SearchBounds& bounds);

// D(M) over everything the bounded search finds, with one witness per end.
struct DirectionSet {
  std::vector<End> ends;
  std::vector<PresentedEmbedding> witnesses;
};

DirectionSet directions_set(const TreePresentation& p,
                            const SearchBounds& bounds);

// Same, over embeddings already found (and validated) by a search.
DirectionSet directions_set(const TreePresentation& p,
                            const std::vector<PresentedEmbedding>& results);

// Arms hosting orbit points at distance >= depth under words of length
// <= word_length over the generators; an under-approximation of L(M).
std::vector<End> limit_set_sample(const TreePresentation& p,
                                  const std::vector<PresentedEmbedding>& gens,
                                  int word_length, int depth);

// Infinite vertex sequences used by the convergence checker.
struct VertexSeq {
  enum class Kind { Spine, Teeth, RayTeeth, Constant };
  Kind kind = Kind::Constant;
  int arm = 0;
  Vertex base{};

  static VertexSeq spine(int arm);
  // Tooth (first decoration child) at spine position m.
  static VertexSeq teeth(int arm);
  // x_0 = a designated core vertex, x_m = tooth at spine position m - 1.
  static VertexSeq ray_teeth(int arm, Vertex x0);
  static VertexSeq constant(Vertex v);

  Vertex at(long long m) const;
};

// counts[n] = number of sequence members separated from e by the n-th ray
// vertex (-1 when infinite).  Converges iff every count is finite.
struct ConvergenceReport {
  bool converges = false;
  std::vector<long long> counts;
};

ConvergenceReport converges_to(const TreePresentation& p, const VertexSeq& seq,
                               const End& e, int bound);

PresentedEmbedding identity_embedding(const TreePresentation& p);

// f applied m times, in tail-regular form.  Agrees with the m-fold iterate
// on the core and all spine vertices; decoration interiors inside rule
// regions are re-canonicalized.
PresentedEmbedding power_embedding(const TreePresentation& p,
                                   const PresentedEmbedding& f, int m);

}  // namespace treesib

#endif
