#include <gtest/gtest.h>

#include <random>

#include "isingtri/catalog.hpp"
#include "isingtri/construct.hpp"

using namespace isingtri;

namespace {

Triangulation build(std::string_view word) {
  return evaluate_plan(ConstructionPlan::chain(parse_ops(word))).tri;
}

bool is_path(const DualTree& tree) {
  const int internal = tree.internal_count();
  int ends = 0;
  for (int f = 0; f < internal; ++f) {
    int internal_nbrs = 0;
    for (int w : tree.adjacency[static_cast<std::size_t>(f)]) internal_nbrs += !tree.is_leaf(w);
    if (internal_nbrs > 2) return false;
    ends += internal_nbrs <= 1;
  }
  return internal == 1 || ends == 2;
}

}  // namespace

TEST(Ops, ParseAndPrint) {
  const auto ops = parse_ops("WZZ");
  ASSERT_EQ(ops.size(), 3u);
  EXPECT_EQ(ops[0], Op::W);
  EXPECT_EQ(ops[2], Op::Z);
  EXPECT_EQ(to_string(ops), "WZZ");
  EXPECT_THROW(parse_ops("WQ"), std::invalid_argument);
}

TEST(Grow, WOnTheEdgeGivesTriangle) {
  const auto w = apply_w(Triangulation::degenerate(), {0, 1});
  EXPECT_EQ(w.tri, Triangulation(3, {}));
  const auto z = apply_z(Triangulation::degenerate(), {0, 1});
  EXPECT_EQ(z.tri, Triangulation(3, {}));
  EXPECT_NE(w.bottom, z.bottom);
  EXPECT_TRUE(is_boundary_edge(w.tri, w.bottom));
  EXPECT_TRUE(is_boundary_edge(z.tri, z.bottom));
}

TEST(Grow, BottomMustBeBoundary) {
  EXPECT_THROW(apply_w(Triangulation(4, {{0, 2}}), {0, 2}), std::invalid_argument);
}

TEST(Grow, WZZBuildsFivegonStrip) {
  const Triangulation t = build("WZZ");
  EXPECT_EQ(t.size(), 5);
  EXPECT_TRUE(validate(t).empty());
  EXPECT_EQ(interior_count(t), 0);
  EXPECT_TRUE(is_path(dual_tree(t)));
}

TEST(Grow, ZWWDualIsThreePath) {
  const Triangulation t = build("WWZ");
  const DualTree tree = dual_tree(t);
  EXPECT_EQ(tree.internal_count(), 3);
  EXPECT_TRUE(is_path(tree));
  EXPECT_TRUE(check_dual_tree(tree).empty());
}

TEST(Grow, NewBottomSharesAVertexWithOld) {
  const Triangulation sq(4, {{0, 2}});
  for (const auto& e : boundary_edges(sq)) {
    for (Op op : {Op::W, Op::Z}) {
      const auto r = apply_op(op, sq, e);
      ASSERT_TRUE(validate(r.tri).empty());
      EXPECT_TRUE(is_boundary_edge(r.tri, r.bottom));
      const Vertex kept = op == Op::W ? r.relabel[static_cast<std::size_t>(e.b2)] : r.relabel[static_cast<std::size_t>(e.b1)];
      EXPECT_EQ(op == Op::W ? r.bottom.b2 : r.bottom.b1, kept);
      // The old bottom becomes a diagonal.
      EXPECT_TRUE(r.tri.has_diagonal(r.relabel[static_cast<std::size_t>(e.b1)], r.relabel[static_cast<std::size_t>(e.b2)]));
    }
  }
}

// Z is W seen in a mirror.
TEST(Grow, ZIsMirroredW) {
  for (int n = 3; n <= 8; ++n)
    for (const auto& t : enumerate_triangulations(n))
      for (const auto& e : boundary_edges(t)) {
        const auto z = apply_z(t, e);
        const auto w = apply_w(mirrored(t), mirrored(n, e));
        EXPECT_TRUE(rooted_equivalent(mirrored(w.tri), mirrored(n + 1, w.bottom), z.tri, z.bottom));
      }
}

TEST(Merge, SquareWithSquare) {
  const Triangulation sq(4, {{0, 2}});
  const auto m = merge(sq, {0, 1}, sq, {0, 1});
  EXPECT_EQ(m.tri.size(), 7);
  EXPECT_TRUE(validate(m.tri).empty());
  EXPECT_TRUE(is_boundary_edge(m.tri, m.bottom));
  // The merged face carries the new bottom, so it is not interior yet...
  EXPECT_EQ(interior_count(m.tri), 0);
  // ...but growing on it makes it interior when both operands had n >= 3.
  EXPECT_EQ(interior_count(apply_w(m.tri, m.bottom).tri), 1);
  EXPECT_EQ(interior_count(apply_z(m.tri, m.bottom).tri), 1);
}

TEST(Merge, DegenerateOperandsNeverCreateInteriorFaces) {
  const Triangulation sq(4, {{0, 2}});
  const auto m = merge(sq, {0, 1}, Triangulation::degenerate(), {0, 1});
  EXPECT_EQ(m.tri.size(), 5);
  EXPECT_EQ(interior_count(apply_w(m.tri, m.bottom).tri), 0);
}

TEST(DualTree, InvariantsOverEnumeration) {
  for (int n = 3; n <= 10; ++n)
    for (const auto& t : enumerate_triangulations(n)) {
      const DualTree tree = dual_tree(t);
      EXPECT_EQ(tree.internal_count(), n - 2);
      EXPECT_EQ(tree.leaf_count(), n);
      const auto problems = check_dual_tree(tree);
      EXPECT_TRUE(problems.empty()) << serialize_tri(t) << problems.front();
      if (interior_count(t) == 0) {
        EXPECT_TRUE(is_path(tree));
      }
    }
}

TEST(DualTree, StarHasDegreeThreeInterior) {
  const DualTree tree = dual_tree(Triangulation(6, {{0, 2}, {2, 4}, {0, 4}}));
  for (int f = 0; f < tree.internal_count(); ++f) {
    const auto& adj = tree.adjacency[static_cast<std::size_t>(f)];
    ASSERT_EQ(adj.size(), 3u);
    const bool all_internal = std::none_of(adj.begin(), adj.end(), [&](int w) { return tree.is_leaf(w); });
    EXPECT_EQ(all_internal, tree.faces[static_cast<std::size_t>(f)].interior);
  }
}

TEST(Plan, SexprRoundTrip) {
  const auto plan = ConstructionPlan::merge(ConstructionPlan::apply(Op::W, ConstructionPlan::leaf()),
                                            ConstructionPlan::leaf());
  EXPECT_EQ(plan.to_sexpr(), "(merge (apply W (leaf)) (leaf))");
  EXPECT_EQ(ConstructionPlan::parse_sexpr(plan.to_sexpr()).to_sexpr(), plan.to_sexpr());
  EXPECT_THROW(ConstructionPlan::parse_sexpr("(merge (leaf)"), std::invalid_argument);
  EXPECT_THROW(ConstructionPlan::parse_sexpr("(apply Q (leaf))"), std::invalid_argument);
}

TEST(Plan, VertexCount) {
  EXPECT_EQ(ConstructionPlan::leaf().vertex_count(), 2);
  EXPECT_EQ(ConstructionPlan::chain(parse_ops("WZZ")).vertex_count(), 5);
}

TEST(Plan, SquareDecomposesIntoTwoApplies) {
  const Triangulation sq(4, {{0, 2}});
  for (const auto& e : boundary_edges(sq)) {
    const auto plan = decompose(sq, e);
    EXPECT_EQ(plan.count(ConstructionPlan::Kind::Apply), 2u);
    EXPECT_EQ(plan.count(ConstructionPlan::Kind::Merge), 0u);
    EXPECT_EQ(plan.count(ConstructionPlan::Kind::Leaf), 1u);
  }
}

// decompose followed by evaluate reproduces (T, bottom) up to a dihedral
// relabeling that fixes the bottom edge.
TEST(Plan, RoundTripAllBottoms) {
  for (int n = 3; n <= 10; ++n)
    for (const auto& t : enumerate_triangulations(n))
      for (const auto& e : boundary_edges(t)) {
        const auto plan = decompose(t, e);
        ASSERT_EQ(plan.vertex_count(), n);
        const auto rebuilt = evaluate_plan(plan);
        ASSERT_TRUE(rooted_equivalent(rebuilt.tri, rebuilt.bottom, t, e))
            << serialize_tri(t) << "bottom " << e.b1 << " " << e.b2 << "\n" << plan.to_sexpr();
        // Also in the reverse orientation of the same edge.
        const BoundaryEdge flipped{e.b2, e.b1};
        const auto back = evaluate_plan(decompose(t, flipped));
        ASSERT_TRUE(rooted_equivalent(back.tri, back.bottom, t, flipped));
      }
}

// Proper merges (both operands non-trivial) are the interior faces, plus the
// bottom face itself when it has exactly one polygon side.
TEST(Plan, ProperMergesCountInteriorFaces) {
  for (int n = 3; n <= 10; ++n)
    for (const auto& t : enumerate_triangulations(n))
      for (const auto& e : boundary_edges(t)) {
        const auto plan = decompose(t, e);
        int bottom_face_sides = 0;
        for (const Face& f : faces(t)) {
          const Edge be = make_edge(e.b1, e.b2);
          const bool on_bottom = (make_edge(f.a, f.b) == be) || (make_edge(f.b, f.c) == be) || (make_edge(f.a, f.c) == be);
          if (!on_bottom) continue;
          bottom_face_sides = is_polygon_side(n, f.a, f.b) + is_polygon_side(n, f.b, f.c) + is_polygon_side(n, f.a, f.c);
        }
        const std::size_t expected = static_cast<std::size_t>(interior_count(t)) + (bottom_face_sides == 1 ? 1 : 0);
        EXPECT_EQ(plan.proper_merge_count(), expected);
      }
}

TEST(StripWord, Exponents) {
  const auto w = strip_word(parse_ops("WWZWZZZ"));
  EXPECT_EQ(w.w, (std::vector<int>{2, 1}));
  EXPECT_EQ(w.z, (std::vector<int>{1, 3}));
  const auto leading_z = strip_word(parse_ops("ZZW"));
  EXPECT_EQ(leading_z.w, (std::vector<int>{0, 1}));
  EXPECT_EQ(leading_z.z, (std::vector<int>{2, 0}));
}

TEST(StripDecompose, ReplaysToSameStrip) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::string word;
    const int len = 1 + static_cast<int>(rng() % 30);
    for (int i = 0; i < len; ++i) word += (rng() & 1U) ? 'W' : 'Z';
    const auto r = evaluate_plan(ConstructionPlan::chain(parse_ops(word)));
    const StripWord sw = strip_decompose(r.tri, r.bottom);
    const auto again = evaluate_plan(ConstructionPlan::chain(sw.ops));
    EXPECT_TRUE(rooted_equivalent(again.tri, again.bottom, r.tri, r.bottom)) << word;
    EXPECT_EQ(static_cast<int>(sw.ops.size()), len);
  }
}

TEST(StripDecompose, ZigzagAlternates) {
  const Triangulation zigzag(6, {{0, 2}, {2, 5}, {3, 5}});
  // Bottom on the ear at vertex 1. The two sides of the ear share every op but
  // the last, which picks the side.
  const StripWord left = strip_decompose(zigzag, {0, 1});
  const StripWord right = strip_decompose(zigzag, {1, 2});
  EXPECT_EQ(to_string(left.ops), "WZWZ");
  EXPECT_EQ(to_string(right.ops), "WZWW");
  for (std::size_t i = 1; i < left.ops.size(); ++i) EXPECT_NE(left.ops[i], left.ops[i - 1]);
}

TEST(StripDecompose, Rejections) {
  EXPECT_THROW(strip_decompose(Triangulation(6, {{0, 2}, {2, 4}, {0, 4}}), {0, 1}), NotAStrip);
  // Middle triangle of a fan-shaped strip.
  EXPECT_THROW(strip_decompose(Triangulation(5, {{0, 2}, {0, 3}}), {2, 3}), NotAStrip);
  // Triangle: W first.
  const StripWord tri = strip_decompose(Triangulation(3, {}), {0, 1});
  EXPECT_EQ(tri.w, (std::vector<int>{1}));
  EXPECT_EQ(tri.z, (std::vector<int>{0}));
}
