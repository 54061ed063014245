#include <gtest/gtest.h>

#include <set>

#include "fpp/errors.hpp"
#include "fpp/graph.hpp"

using namespace fpp;

namespace {

std::set<VertexId> names(const BaseGraph& g) {
  return {g.vertex_names().begin(), g.vertex_names().end()};
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::InvalidSpec;
}

}  // namespace

TEST(Graph, PawShape) {
  const BaseGraph g = builtin::paw();
  EXPECT_EQ(g.num_vertices(), 4u);
  EXPECT_EQ(g.edges().size(), 4u);
  EXPECT_DOUBLE_EQ(g.delta(), 3.0);
  EXPECT_DOUBLE_EQ(g.delta_out(), 3.0);
}

TEST(Graph, K2Degrees) {
  const BaseGraph g = builtin::complete(2);
  EXPECT_DOUBLE_EQ(g.delta(), 1.0);
  EXPECT_DOUBLE_EQ(g.delta_out(), 1.0);
  EXPECT_DOUBLE_EQ(g.delta_in(), 1.0);
}

TEST(Graph, Validation) {
  EXPECT_EQ(kind_of([] { BaseGraph::finite({"x"}, {{"x", "x"}}); }), ErrorKind::LoopEdge);
  EXPECT_EQ(kind_of([] { BaseGraph::finite({"x", "y"}, {{"x", "y", false, 0.0}}); }),
            ErrorKind::NonpositiveIntensity);
  EXPECT_EQ(kind_of([] { BaseGraph::finite({"x", "y"}, {{"x", "y", false, -1.0}}); }),
            ErrorKind::NonpositiveIntensity);
  EXPECT_EQ(kind_of([] { BaseGraph::finite({"x"}, {{"x", "z"}}); }), ErrorKind::UnknownVertex);
}

TEST(Graph, MultiplicityFoldsIntoIntensity) {
  const BaseGraph a = BaseGraph::finite({"x", "y"}, {{"x", "y", true, 1.5, 2}});
  const BaseGraph b = BaseGraph::finite({"x", "y"}, {{"x", "y", true, 3.0, 1}});
  EXPECT_TRUE(a.adjacency().isApprox(b.adjacency()));
  EXPECT_DOUBLE_EQ(a.delta_out(), 3.0);
  EXPECT_DOUBLE_EQ(a.delta(), 2.0);
}

TEST(Graph, DeltaOutIsExactMaximum) {
  const BaseGraph g = BaseGraph::finite(
      {"a", "b", "c"}, {{"a", "b", true, 0.5}, {"a", "c", false, 2.0}, {"b", "c", true, 1.0, 3}});
  // a: 0.5 + 2, b: 3, c: 2 (undirected edge back to a)
  EXPECT_DOUBLE_EQ(g.delta_out(), 3.0);
}

TEST(Graph, ProductOfK2IsFourCycle) {
  const BaseGraph k2 = builtin::complete(2);
  const BaseGraph c4 = cartesian_product(k2, k2);
  EXPECT_EQ(c4.num_vertices(), 4u);
  EXPECT_EQ(c4.edges().size(), 4u);
  for (const auto& e : c4.edges()) EXPECT_FALSE(e.oriented);
  EXPECT_DOUBLE_EQ(c4.delta(), 2.0);
}

TEST(Graph, ProductOfDirectedEdges) {
  const BaseGraph d = builtin::directed_edge();
  const BaseGraph sq = cartesian_product(d, d);
  EXPECT_EQ(sq.num_vertices(), 4u);
  EXPECT_EQ(sq.edges().size(), 4u);
  for (const auto& e : sq.edges()) EXPECT_TRUE(e.oriented);
  EXPECT_EQ(distance(sq, "(0,0)", "(1,1)", 4), 2);
  EXPECT_EQ(distance(sq, "(1,1)", "(0,0)", 4), -1);
}

TEST(Graph, ProductKeepsIntensities) {
  const BaseGraph g = BaseGraph::finite({"x", "y"}, {{"x", "y", true, 2.5}});
  const BaseGraph p = cartesian_product(g, builtin::complete(2));
  EXPECT_DOUBLE_EQ(p.adjacency()(static_cast<Eigen::Index>(p.index_of("(x,0)")),
                                 static_cast<Eigen::Index>(p.index_of("(y,0)"))),
                   2.5);
}

TEST(Graph, ProductCountsAndAssociativity) {
  const BaseGraph a = builtin::path(2);
  const BaseGraph b = builtin::complete(3);
  const BaseGraph c = builtin::directed_edge();
  EXPECT_EQ(cartesian_product(a, b).num_vertices(), a.num_vertices() * b.num_vertices());
  const BaseGraph left = cartesian_product(cartesian_product(a, b), c);
  const BaseGraph right = cartesian_product(a, cartesian_product(b, c));
  EXPECT_EQ(left.num_vertices(), right.num_vertices());
  EXPECT_EQ(left.edges().size(), right.edges().size());
  EXPECT_DOUBLE_EQ(left.delta_out(), right.delta_out());
}

TEST(Graph, ProductRejectsOracles) {
  EXPECT_EQ(kind_of([] { cartesian_product(builtin::integer_chain(), builtin::complete(2)); }),
            ErrorKind::OracleGraphUnsupported);
}

TEST(Graph, Balls) {
  EXPECT_EQ(names(ball(builtin::integer_chain(), "0", 3)),
            (std::set<VertexId>{"-3", "-2", "-1", "0", "1", "2", "3"}));
  EXPECT_EQ(ball(builtin::complete(2), "0", 5).num_vertices(), 2u);
  EXPECT_EQ(names(ball(builtin::directed_integer_chain(), "0", 2)),
            (std::set<VertexId>{"-2", "-1", "0", "1", "2"}));
  const BaseGraph z3 = ball(builtin::integer_chain(), "0", 3);
  EXPECT_EQ(z3.edges().size(), 6u);
}

TEST(Graph, BallsAreNested) {
  const BaseGraph g = builtin::paw();
  for (int r = 0; r < 3; ++r) {
    const auto inner = names(ball(g, "w", r));
    const auto outer = names(ball(g, "w", r + 1));
    EXPECT_TRUE(std::includes(outer.begin(), outer.end(), inner.begin(), inner.end()));
  }
}

TEST(Graph, NoLoopsInBuiltins) {
  for (const BaseGraph& g : {builtin::paw(), builtin::complete(5), builtin::path(4),
                             builtin::calibrated_chain(3, 1.2)}) {
    for (const auto& e : g.edges()) EXPECT_NE(e.tail, e.head);
  }
}

TEST(Graph, CalibratedIntensity) {
  EXPECT_NEAR(builtin::calibrated_intensity(3, 2.0), std::cbrt(6.0) / 2.0, 1e-14);
  const BaseGraph p = builtin::calibrated_chain(3, 0.7);
  EXPECT_DOUBLE_EQ(p.delta_out(), 0.7);
}

TEST(Graph, OracleVertices) {
  const BaseGraph z = builtin::integer_chain();
  EXPECT_TRUE(z.has_vertex("-17"));
  EXPECT_FALSE(z.has_vertex("x"));
  EXPECT_TRUE(reachable(z, "0", "5", 10));
  EXPECT_FALSE(reachable(builtin::directed_integer_chain(), "5", "0", 100));
}
