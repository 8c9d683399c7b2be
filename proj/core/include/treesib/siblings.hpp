#ifndef TREESIB_SIBLINGS_HPP
#define TREESIB_SIBLINGS_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "treesib/embedding.hpp"
#include "treesib/presentation.hpp"

namespace treesib {

// Symbolic certificate that the complement of the image has unboundedly many
// components: along the named self-rule, the decoration at n + shift strictly
// exceeds the one at n (admits it, is not admitted back) at every position
// n = from + k * stride, so each such position leaves at least one uncovered
// vertex in its own component.
struct UnboundedComponents {
  int arm = 0;
  long long shift = 0;
  long long from = 0;
  long long stride = 1;
};

// One component of the difference forest, complete within the horizon.
struct DifferenceComponent {
  std::vector<Vertex> vertices;   // sorted
  bool touches_horizon = false;   // may continue past the deepest horizon
  bool nearly_finite = true;      // the whole component, continuation included
};

// Components of the presented tree minus the image of a validated
// self-embedding.  The horizon of depth d is the core plus arm positions
// <= d with their decorations taken whole, so counts never split a
// decoration.  Components touching the horizon are excluded from the counts
// unless the symbolic certificate is present (then they are known to extend
// and are counted).  Counts are exact per horizon and, for the certified
// case, lower bounds of the full forest, monotone in d.
struct DifferenceForestReport {
  std::map<int, long long> count_at_depth;      // keys 0..depth
  std::vector<DifferenceComponent> components;  // at the deepest horizon
  std::optional<UnboundedComponents> certificate;
};

DifferenceForestReport difference_forest(const TreePresentation& p,
                                         const PresentedEmbedding& f,
                                         int depth);

// Scans the self-rules of f for a certified strictly-growing arm: periodic
// pairs are decided over one period, generated ones by slope and one sample
// comparison, both via rooted embeddings in the two directions.  Absent when
// f is elliptic, has no self-rule, or no rule certifies.
std::optional<UnboundedComponents> infinite_components_certificate(
    const TreePresentation& p, const PresentedEmbedding& f);

// The presentation obtained by replacing the branch subtrees at the k spine
// positions f(s), ..., f^k(s) with trivial decorations, where s is the first
// branching vertex (degree >= 3) of the invariant ray of f.  Requires f
// parabolic with a regular direction and p not a ray; the result is a proper
// sub-presentation of p into which f^(k+1) embeds p.
TreePresentation construct_sibling_sk(const TreePresentation& p,
                                      const PresentedEmbedding& f, int k);

// S_1, ..., S_count with the witnesses that make them mutually embeddable
// with the base: per member, the inclusion into the base and the power of f
// that embeds the base into the member.  Every witness validates and each
// member is a proper sub-presentation of the previous one.
struct SiblingFamily {
  TreePresentation base;
  std::vector<TreePresentation> members;
  std::vector<PresentedEmbedding> into_base;  // inclusion of members[k]
  std::vector<PresentedEmbedding> from_base;  // f^(k+2) into members[k]
};

SiblingFamily build_sibling_family(const TreePresentation& p,
                                   const PresentedEmbedding& f, int count);

// Least horizon whose truncation codes differ, if one exists up to `depth`,
// together with the presentation-level verdict.
struct PairSeparation {
  int first = 0;
  int second = 0;
  std::optional<int> separating_depth;
  IsoVerdict verdict;
};

struct PairwiseDistinctReport {
  bool all_distinct = false;
  std::vector<PairSeparation> pairs;
};

// Checks every unordered pair of the family: distinct per
// is_isomorphic_presentation and separated by a truncation code at some
// depth <= depth.
PairwiseDistinctReport verify_pairwise_noniso(
    const std::vector<TreePresentation>& family, int depth);

// Mutual embeddability within the search bounds.  OneWay reports the single
// direction found; Unknown means the bounded search found neither, which
// decides nothing.
struct EquimorphyResult {
  enum class Kind { MutualEmbeddings, OneWay, Unknown };
  Kind kind = Kind::Unknown;
  std::optional<PresentedEmbedding> p_into_q;
  std::optional<PresentedEmbedding> q_into_p;
};

EquimorphyResult equimorphy_check(const TreePresentation& p,
                                  const TreePresentation& q,
                                  const SearchBounds& bounds);

// Verdict of the case analysis for the number of siblings of p, with the
// evidence that produced it.  ExactlyOne for a ray is asserted classically
// rather than derived here, and is flagged as such.  Whenever a witness
// route applies its objects are attached; both routes to Infinite are
// carried when both hold.
struct SiblingCertificate {
  enum class Verdict { ExactlyOne, Infinite, OpenCase };
  Verdict verdict = Verdict::OpenCase;
  std::string reason;
  bool classical = false;
  std::vector<End> directions;
  std::optional<PresentedEmbedding> witness;
  std::optional<SiblingFamily> family;
  std::optional<UnboundedComponents> components;
  std::optional<End> non_regular_end;
};

// Case ladder over everything the bounded search finds: ray (classical);
// no directions; two directions; parabolic with regular direction (sibling
// family); a preserved non-regular end; otherwise open.
SiblingCertificate sibling_number_report(const TreePresentation& p,
                                         const SearchBounds& bounds);

}  // namespace treesib

#endif
