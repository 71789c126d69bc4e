#include <gtest/gtest.h>

#include "napt/graph_engine.hpp"
#include "support.hpp"

using namespace napt;
using napt::testing::q;

namespace {

GraphPoint mid() { return GraphPoint::in_edge(0, q(1, 2)); }

}  // namespace

TEST(GraphCore, ValidateG1) {
  EXPECT_TRUE(validate_graph(*napt::testing::g1()).empty());
  MetricGraph heavy({"a", "b"}, {{"e", 0, 1, q(1)}}, {q(1), q(2)}, q(2));
  EXPECT_EQ(validate_graph(heavy), std::vector<std::string>{"reference mass ≠ V"});
  MetricGraph apart({"a", "b"}, {}, {q(1), q(1)});
  EXPECT_EQ(validate_graph(apart), std::vector<std::string>{"graph not connected"});
}

TEST(GraphCore, SubdivideThirds) {
  auto g = napt::testing::g1();
  auto s = subdivide(g, {GraphPoint::in_edge(0, q(1, 3)), GraphPoint::in_edge(0, q(2, 3))});
  ASSERT_EQ(s.target->edge_count(), 3u);
  for (const auto& e : s.target->edges()) EXPECT_EQ(e.length, q(1, 3));
  EXPECT_EQ(s.target->reference_mass(2), q(0));
  auto m = subdivide(g, {mid()});
  EXPECT_EQ(m.target->vertex_count(), 3u);
  EXPECT_EQ(pushforward_measure(GraphMeasure::dirac(GraphPoint::at_vertex(2)), m), GraphMeasure::dirac(mid()));
  EXPECT_THROW(subdivide(g, {GraphPoint::in_edge(0, q(3, 2))}), std::domain_error);
}

TEST(GraphCore, MeasureAlgebra) {
  auto a = GraphMeasure::dirac(GraphPoint::at_vertex(0));
  EXPECT_TRUE((a - a).atoms().empty());
  auto m = GraphMeasure::dirac(mid()).scaled(q(2)) - a;
  EXPECT_EQ(m.total_mass(), q(1));
  EXPECT_FALSE(m.is_probability());
}

TEST(GraphEngine, EvalAndFsMax) {
  auto g = napt::testing::g1();
  EXPECT_EQ(napt::testing::tilt(g).eval(mid()), q(1, 2));
  EXPECT_EQ(napt::testing::vshape(g).eval(GraphPoint::in_edge(0, q(1, 4))), q(-1, 4));
  FSExpression e{{{PLMetric::constant(g, q(0)), q(0)}, {napt::testing::tilt(g), q(-1, 2)}}};
  auto u = fs_max(e);
  ASSERT_EQ(u.breakpoints(0).size(), 1u);
  EXPECT_EQ(u.breakpoints(0)[0].offset, q(1, 2));
}

TEST(GraphEngine, LaplacianAndMa) {
  auto g = napt::testing::g1();
  auto v = napt::testing::vshape(g);
  GraphMeasure expected;
  expected.add_atom(GraphPoint::at_vertex(0), q(-1));
  expected.add_atom(GraphPoint::at_vertex(1), q(-1));
  expected.add_atom(mid(), q(2));
  EXPECT_EQ(laplacian(v), expected);
  EXPECT_EQ(ma(v), GraphMeasure::dirac(mid()));
  EXPECT_EQ(ma(napt::testing::tilt(g)), GraphMeasure::dirac(GraphPoint::at_vertex(0)));
  auto report = is_psh(napt::testing::tent(g));
  EXPECT_FALSE(report.psh);
  EXPECT_EQ(report.violations, std::vector<GraphPoint>{mid()});
  EXPECT_THROW(ma(napt::testing::tent(g)), NotPshError);
}

TEST(GraphEngine, SolveExamples) {
  auto g = napt::testing::g1();
  EXPECT_EQ(solve(GraphMeasure::dirac(mid()), g), napt::testing::vshape(g));
  EXPECT_EQ(solve(g->reference_measure().scaled(q(1, 2)), g), PLMetric::constant(g, q(0)));
  EXPECT_EQ(solve(GraphMeasure::dirac(GraphPoint::at_vertex(0)), g), PLMetric(g, {q(-1), q(0)}));
  EXPECT_THROW(solve(GraphMeasure::dirac(mid()).scaled(q(2)), g), std::domain_error);
}

TEST(GraphEngine, EnvelopeExamples) {
  auto g = napt::testing::g1();
  auto tent = napt::testing::tent(g);
  auto grid = uniform_grid(tent, 4);
  EXPECT_EQ(envelope(tent, grid), PLMetric::constant(g, q(0)));
  EXPECT_EQ(envelope(tent.shifted(q(3)), grid), PLMetric::constant(g, q(3)));
  auto v = napt::testing::vshape(g);
  EXPECT_EQ(envelope(v, uniform_grid(v, 3)), v);
  EXPECT_EQ(orthogonality_defect(tent, grid), q(0));
}

TEST(GraphEngine, ReferenceDefectG1) {
  // Psh u with sup 0 on G1: worst case is the tilt normalized, u(a) = -1,
  // giving sup - (u(a)+u(b))/2 = 1/2.
  EXPECT_EQ(reference_defect(*napt::testing::g1()), q(1, 2));
}
