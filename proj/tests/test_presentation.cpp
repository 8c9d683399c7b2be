#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>
#include <set>

#include "doctest.h"
#include "support/fixtures.hpp"
#include "support/naive_expand.hpp"
#include "support/random_presentations.hpp"

using namespace treesib;

namespace {

bool same_code(const FiniteRootedTree& a, const FiniteRootedTree& b) {
  return canonical_code(a) == canonical_code(b);
}

}  // namespace

TEST_CASE("decoration sequences index prefix then period") {
  auto seq = DecorationSeq::periodic(
      {FiniteRootedTree::path(1)},
      {FiniteRootedTree::single(), FiniteRootedTree::star(2)});
  CHECK(seq.at(0) == FiniteRootedTree::path(1));
  CHECK(seq.at(1) == FiniteRootedTree::single());
  CHECK(seq.at(2) == FiniteRootedTree::star(2));
  CHECK(seq.at(3) == FiniteRootedTree::single());
  CHECK(seq.at(42) == FiniteRootedTree::star(2));
  CHECK_FALSE(seq.trivial_from(0));

  auto flat = DecorationSeq::generated(DecorationSeq::Shape::Path, 0, 3);
  CHECK(flat.is_periodic());  // no growth: normalized away
  CHECK(flat.at(7) == FiniteRootedTree::path(3));

  auto grow = DecorationSeq::generated(DecorationSeq::Shape::Path, 1, 0);
  CHECK(grow.is_generated());
  CHECK(grow.at(0) == FiniteRootedTree::single());
  CHECK(grow.at(4) == FiniteRootedTree::path(4));
  CHECK_FALSE(grow.trivial_from(100));

  CHECK(DecorationSeq::periodic({}, {FiniteRootedTree::single()}).trivial_from(0));
  CHECK_THROWS_AS(DecorationSeq::periodic({}, {}), Error);
  CHECK_THROWS_AS(DecorationSeq::generated(DecorationSeq::Shape::Star, -1, 0),
                  Error);
}

TEST_CASE("presentation construction validates its input") {
  CHECK_THROWS_AS(
      TreePresentation(FiniteRootedTree::single(),
                       {Arm{"A", 3, DecorationSeq::periodic(
                                        {}, {FiniteRootedTree::single()})}}),
      Error);
  CHECK_THROWS_AS(
      TreePresentation(
          FiniteRootedTree::single(),
          {Arm{"A", 0, DecorationSeq::periodic({}, {FiniteRootedTree::single()})},
           Arm{"A", 0, DecorationSeq::periodic({}, {FiniteRootedTree::single()})}},
          {"v0"}),
      Error);
}

TEST_CASE("neighbors and degrees match fixture geometry") {
  auto comb = fixture::comb();
  CHECK(comb.degree(comb.basepoint()) == 1);
  CHECK(comb.degree(Vertex::spine(0, 0)) == 3);
  CHECK(comb.degree(Vertex::spine(0, 7)) == 3);
  CHECK(comb.degree(Vertex::dec(0, 5, 1)) == 1);
  auto tooth_nbrs = comb.neighbors(Vertex::dec(0, 5, 1));
  REQUIRE(tooth_nbrs.size() == 1);
  CHECK(tooth_nbrs[0] == Vertex::spine(0, 5));

  auto ray = fixture::ray();
  CHECK(ray.degree(Vertex::spine(0, 3)) == 2);

  CHECK_FALSE(comb.valid_vertex(Vertex::dec(0, 2, 0)));
  CHECK_FALSE(comb.valid_vertex(Vertex::spine(4, 0)));
  CHECK_FALSE(comb.valid_vertex(Vertex::core_vertex(9)));
  CHECK_THROWS_AS(comb.neighbors(Vertex::core_vertex(9)), Error);

  // Adjacency is symmetric on a sample ball.
  for (const auto& p : fixture::all_fixtures()) {
    auto ball = truncate_with_map(p, 4);
    for (const auto& v : ball.vertex_of)
      for (const auto& w : p.neighbors(v)) {
        auto back = p.neighbors(w);
        CHECK(std::count(back.begin(), back.end(), v) == 1);
      }
  }
}

TEST_CASE("truncate matches hand-expanded examples") {
  CHECK(same_code(truncate(fixture::ray(), 3), FiniteRootedTree::path(3)));
  CHECK(truncate(fixture::ray(), 0).size() == 1);

  auto fincore = fixture::fincore();
  CHECK(same_code(truncate(fincore, 3), fincore.core()));
  CHECK(same_code(truncate(fincore, 12), fincore.core()));

  // Metric ball of radius 2 on COMB: v0, a0, a1 and the tooth at a0 only
  // (the tooth at a1 sits at distance 3).
  auto ball = truncate(fixture::comb(), 2);
  CHECK(ball.size() == 4);
  CHECK(canonical_code(ball).text == "((()()))");

  CHECK_THROWS_AS(truncate(fixture::comb(), -1), Error);
}

TEST_CASE("truncate agrees with independent breadth-first expansion") {
  for (const auto& p : fixture::all_fixtures())
    for (int d = 0; d <= 8; ++d)
      CHECK(canonical_code(truncate(p, d)).text == oracle::naive_ball_code(p, d));

  std::mt19937 rng(7101);
  for (int trial = 0; trial < 40; ++trial) {
    auto p = oracle::random_presentation(rng, 2, true);
    for (int d : {0, 2, 4, 6})
      CHECK(canonical_code(truncate(p, d)).text == oracle::naive_ball_code(p, d));
  }
}

TEST_CASE("truncate is monotone in the radius") {
  for (const auto& p : fixture::all_fixtures())
    for (int d = 0; d <= 12; ++d)
      CHECK(embeds_rooted(truncate(p, d), truncate(p, d + 1)).has_value());
}

TEST_CASE("truncation maps report faithful addresses") {
  for (const auto& p : fixture::all_fixtures()) {
    auto ball = truncate_with_map(p, 5);
    REQUIRE(ball.vertex_of.size() == static_cast<size_t>(ball.tree.size()));
    CHECK(ball.index_of(p.basepoint()) == 0);
    std::set<Vertex> seen(ball.vertex_of.begin(), ball.vertex_of.end());
    CHECK(seen.size() == ball.vertex_of.size());
    for (int i = 1; i < ball.tree.size(); ++i) {
      auto nbrs = p.neighbors(ball.vertex_of[i]);
      CHECK(std::count(nbrs.begin(), nbrs.end(),
                       ball.vertex_of[ball.tree.parent(i)]) == 1);
      CHECK(ball.tree.depth(i) ==
            tree_distance(p, p.basepoint(), ball.vertex_of[i]));
    }
  }
}

TEST_CASE("tree distance matches BFS on the expanded graph") {
  for (const auto& p : fixture::all_fixtures()) {
    auto ball = truncate_with_map(p, 4);
    for (size_t i = 0; i < ball.vertex_of.size(); ++i)
      for (size_t j = i; j < ball.vertex_of.size(); ++j) {
        long long got = tree_distance(p, ball.vertex_of[i], ball.vertex_of[j]);
        CHECK(got == oracle::naive_graph_distance(p, ball.vertex_of[i],
                                                  ball.vertex_of[j], 8));
      }
  }
}

TEST_CASE("ends are one per arm") {
  CHECK(ends(fixture::ray()).size() == 1);
  CHECK(ends(fixture::dray()).size() == 2);
  CHECK(ends(fixture::fincore()).empty());
  CHECK(ends(fixture::spider3()).size() == 3);
  for (const auto& p : fixture::all_fixtures())
    CHECK(ends(p).size() == static_cast<size_t>(p.arm_count()));
}

TEST_CASE("nearly finite detection and rake witnesses") {
  CHECK(is_nearly_finite(fixture::spider3()).value);
  CHECK(is_nearly_finite(fixture::ray()).value);
  CHECK(is_nearly_finite(fixture::dray()).value);
  CHECK(is_nearly_finite(fixture::fincore()).value);
  CHECK_FALSE(is_nearly_finite(fixture::comb()).value);
  CHECK_FALSE(is_nearly_finite(fixture::growcomb()).value);
  CHECK_FALSE(is_nearly_finite(fixture::halfcomb()).value);

  CHECK_FALSE(find_rake(fixture::spider3()).has_value());

  auto comb_rake = find_rake(fixture::comb());
  REQUIRE(comb_rake.has_value());
  CHECK(comb_rake->arm == 0);
  CHECK(comb_rake->start == 0);
  CHECK(comb_rake->stride == 1);

  auto stripe_rake = find_rake(fixture::stripe());
  REQUIRE(stripe_rake.has_value());
  CHECK(stripe_rake->start == 1);
  CHECK(stripe_rake->stride == 2);

  auto grow_rake = find_rake(fixture::growcomb());
  REQUIRE(grow_rake.has_value());
  CHECK(grow_rake->start == 1);

  // Witness positions carry degree >= 3, confirmed on truncations.
  for (const auto& p : {fixture::comb(), fixture::stripe(), fixture::growcomb(),
                        fixture::dcomb(), fixture::xcomb()}) {
    auto rake = find_rake(p);
    REQUIRE(rake.has_value());
    for (int d : {5, 10, 15}) {
      auto ball = truncate_with_map(p, d);
      for (long long n = rake->start;; n += rake->stride) {
        Vertex s = Vertex::spine(rake->arm, n);
        if (tree_distance(p, p.basepoint(), s) + 1 > d) break;
        auto idx = ball.index_of(s);
        REQUIRE(idx.has_value());
        CHECK(ball.tree.degree(*idx) >= 3);
      }
    }
  }
}

TEST_CASE("rake absence means bare spines beyond the prefix") {
  std::mt19937 rng(7102);
  int nearly_finite_seen = 0;
  for (int trial = 0; trial < 100; ++trial) {
    auto p = oracle::random_presentation(rng, 2, true);
    auto report = is_nearly_finite(p);
    CHECK(report.value == !find_rake(p).has_value());
    CHECK(report.value == !report.rake.has_value());
    if (report.value) {
      ++nearly_finite_seen;
      for (int a = 0; a < p.arm_count(); ++a) {
        long long from =
            static_cast<long long>(p.arm(a).seq.prefix().size());
        for (long long n = from; n <= from + 10; ++n)
          CHECK(p.degree(Vertex::spine(a, n)) == 2);
      }
    }
  }
  CHECK(nearly_finite_seen > 5);
}

TEST_CASE("branch subtrees return glued decorations") {
  CHECK(same_code(branch_subtree(fixture::comb(), 0, 5),
                  FiniteRootedTree::parse("(())")));
  CHECK(same_code(branch_subtree(fixture::growcomb(), 0, 4),
                  FiniteRootedTree::path(4)));
  CHECK(branch_subtree(fixture::ray(), 0, 7).trivial());
  CHECK_THROWS_AS(branch_subtree(fixture::comb(), 0, 0), Error);
  try {
    branch_subtree(fixture::comb(), 0, 0);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Unsupported);
  }
}

TEST_CASE("end regularity splits periodic from generated arms") {
  auto comb_reg = end_regularity(fixture::comb(), 0);
  CHECK(comb_reg.regular);
  CHECK(comb_reg.class_count == 2);

  CHECK(end_regularity(fixture::ray(), 0).regular);

  auto stripe_reg = end_regularity(fixture::stripe(), 0);
  CHECK(stripe_reg.regular);
  CHECK(stripe_reg.class_count == 3);

  auto grow_reg = end_regularity(fixture::growcomb(), 0);
  CHECK_FALSE(grow_reg.regular);
  REQUIRE(grow_reg.witness_pairs.size() >= 3);
  for (auto [n1, n2] : grow_reg.witness_pairs) {
    auto lo = branch_subtree(fixture::growcomb(), 0, n1);
    auto hi = branch_subtree(fixture::growcomb(), 0, n2);
    CHECK(embeds_rooted(lo, hi).has_value());
    CHECK_FALSE(embeds_rooted(hi, lo).has_value());
  }

  // Periodic arms are always regular, with the documented class bound.
  std::mt19937 rng(7103);
  for (int trial = 0; trial < 100; ++trial) {
    auto p = oracle::random_presentation(rng, 2, false);
    for (int a = 0; a < p.arm_count(); ++a) {
      auto reg = end_regularity(p, a);
      CHECK(reg.regular);
      CHECK(reg.class_count <=
            static_cast<int>(p.arm(a).seq.prefix().size() +
                             p.arm(a).seq.period().size()) +
                1);
    }
  }
}

TEST_CASE("presentation isomorphism verdicts") {
  auto fixtures = fixture::all_fixtures();
  for (const auto& p : fixtures) {
    auto self = is_isomorphic_presentation(p, p);
    bool generated = false;
    for (const auto& a : p.arms()) generated |= a.seq.is_generated();
    CHECK(self.kind == (generated ? IsoVerdict::Kind::AgreeToDepth
                                  : IsoVerdict::Kind::Isomorphic));
  }

  auto comb_ray = is_isomorphic_presentation(fixture::comb(), fixture::ray());
  CHECK(comb_ray.kind == IsoVerdict::Kind::Distinct);
  CHECK(comb_ray.depth == 2);

  auto dc = is_isomorphic_presentation(fixture::dcomb(), fixture::dcomb_bare());
  CHECK(dc.kind == IsoVerdict::Kind::Distinct);
  CHECK(dc.depth == 1);

  auto rd = is_isomorphic_presentation(fixture::ray(), fixture::dray());
  CHECK(rd.kind == IsoVerdict::Kind::Distinct);
  CHECK(rd.depth == 1);

  // Symmetric, and Distinct verdicts are confirmed by the codes themselves.
  for (const auto& p : fixtures)
    for (const auto& q : fixtures) {
      auto v = is_isomorphic_presentation(p, q);
      auto w = is_isomorphic_presentation(q, p);
      CHECK(v.kind == w.kind);
      CHECK(v.depth == w.depth);
      if (v.kind == IsoVerdict::Kind::Distinct)
        CHECK(canonical_code(truncate(p, v.depth)) !=
              canonical_code(truncate(q, v.depth)));
      else
        CHECK(canonical_code(truncate(p, 7)) == canonical_code(truncate(q, 7)));
    }
}

TEST_CASE("ray recognition") {
  CHECK(is_ray(fixture::ray()));
  for (const auto& p : fixture::all_fixtures())
    if (p.name() != "RAY") CHECK_FALSE(is_ray(p));

  // Longer core path, arm at an endpoint: still a ray.
  auto bent = TreePresentation(
      FiniteRootedTree({-1, 0, 1}),
      {Arm{"A", 2, DecorationSeq::periodic({}, {FiniteRootedTree::single()})}},
      {"v0", "v1", "v2"});
  CHECK(is_ray(bent));

  // Arm off the middle of the path: degree 3 at the junction.
  auto tee = TreePresentation(
      FiniteRootedTree({-1, 0, 1}),
      {Arm{"A", 1, DecorationSeq::periodic({}, {FiniteRootedTree::single()})}},
      {"v0", "v1", "v2"});
  CHECK_FALSE(is_ray(tee));
}

TEST_CASE("period lcm over arms") {
  CHECK(period_lcm(fixture::comb()) == 1);
  CHECK(period_lcm(fixture::stripe()) == 2);
  CHECK(period_lcm(fixture::growcomb()) == 1);
  auto two_three = TreePresentation(
      FiniteRootedTree::single(),
      {Arm{"A", 0,
           DecorationSeq::periodic({}, {FiniteRootedTree::single(),
                                        FiniteRootedTree::single()})},
       Arm{"B", 0,
           DecorationSeq::periodic({}, {FiniteRootedTree::single(),
                                        FiniteRootedTree::single(),
                                        FiniteRootedTree::single()})}},
      {"v0"});
  CHECK(period_lcm(two_three) == 6);
}
