#ifndef TREESIB_TESTS_FIXTURES_HPP
#define TREESIB_TESTS_FIXTURES_HPP

#include <vector>

#include "treesib/presentation.hpp"

// The presentations exercised throughout the suite, built directly against
// the library API.  The .tree files shipped with the CLI must parse to
// structurally equal presentations (compared via truncation codes).
namespace treesib::fixture {

inline FiniteRootedTree trivial_dec() { return FiniteRootedTree::single(); }
inline FiniteRootedTree tooth() { return FiniteRootedTree::parse("(())"); }

// One-way infinite path: single core vertex, one bare arm.
inline TreePresentation ray() {
  return TreePresentation(FiniteRootedTree::single(),
                          {Arm{"A", 0, DecorationSeq::periodic({}, {trivial_dec()})}},
                          {"v0"}, "RAY");
}

// Two-way infinite path: two bare arms off one core vertex.
inline TreePresentation dray() {
  return TreePresentation(FiniteRootedTree::single(),
                          {Arm{"A", 0, DecorationSeq::periodic({}, {trivial_dec()})},
                           Arm{"B", 0, DecorationSeq::periodic({}, {trivial_dec()})}},
                          {"v0"}, "DRAY");
}

// Ray with one tooth at every spine vertex.
inline TreePresentation comb() {
  return TreePresentation(FiniteRootedTree::single(),
                          {Arm{"A", 0, DecorationSeq::periodic({}, {tooth()})}},
                          {"v0"}, "COMB");
}

// Three bare arms off one core vertex.
inline TreePresentation spider3() {
  return TreePresentation(FiniteRootedTree::single(),
                          {Arm{"A", 0, DecorationSeq::periodic({}, {trivial_dec()})},
                           Arm{"B", 0, DecorationSeq::periodic({}, {trivial_dec()})},
                           Arm{"C", 0, DecorationSeq::periodic({}, {trivial_dec()})}},
                          {"v0"}, "SPIDER3");
}

// Double ray with teeth on one side only.
inline TreePresentation halfcomb() {
  return TreePresentation(FiniteRootedTree::single(),
                          {Arm{"A", 0, DecorationSeq::periodic({}, {tooth()})},
                           Arm{"B", 0, DecorationSeq::periodic({}, {trivial_dec()})}},
                          {"v0"}, "HALFCOMB");
}

// Double comb: teeth at every spine vertex including the center (t0).
inline TreePresentation dcomb() {
  return TreePresentation(FiniteRootedTree({-1, 0}),
                          {Arm{"A", 0, DecorationSeq::periodic({}, {tooth()})},
                           Arm{"B", 0, DecorationSeq::periodic({}, {tooth()})}},
                          {"v0", "t0"}, "DCOMB");
}

// Double comb missing only the center tooth.
inline TreePresentation dcomb_bare() {
  return TreePresentation(FiniteRootedTree::single(),
                          {Arm{"A", 0, DecorationSeq::periodic({}, {tooth()})},
                           Arm{"B", 0, DecorationSeq::periodic({}, {tooth()})}},
                          {"v0"}, "DCOMB_BARE");
}

// Ray with the path P_n glued at spine position n.
inline TreePresentation growcomb() {
  return TreePresentation(
      FiniteRootedTree::single(),
      {Arm{"A", 0, DecorationSeq::generated(DecorationSeq::Shape::Path, 1, 0)}},
      {"v0"}, "GROWCOMB");
}

// Comb with an extra core tooth x0: ray r0 r1 r2 ... with x_n glued at r_n.
inline TreePresentation xcomb() {
  return TreePresentation(FiniteRootedTree({-1, 0}),
                          {Arm{"A", 0, DecorationSeq::periodic({}, {tooth()})}},
                          {"v0", "x0"}, "XCOMB");
}

// Teeth at every other spine vertex: period [trivial, tooth].
inline TreePresentation stripe() {
  return TreePresentation(
      FiniteRootedTree::single(),
      {Arm{"A", 0, DecorationSeq::periodic({}, {trivial_dec(), tooth()})}},
      {"v0"}, "STRIPE");
}

// Finite tree, no arms: v0 with children v1, v2; v3 under v2.
inline TreePresentation fincore() {
  return TreePresentation(FiniteRootedTree({-1, 0, 0, 2}), {},
                          {"v0", "v1", "v2", "v3"}, "FINCORE");
}

inline std::vector<TreePresentation> all_fixtures() {
  return {ray(),       dray(),     comb(),    spider3(), halfcomb(), dcomb(),
          dcomb_bare(), growcomb(), xcomb(),   stripe(),  fincore()};
}

}  // namespace treesib::fixture

#endif
