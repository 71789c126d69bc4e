#include <gtest/gtest.h>

#include <random>

#include "napt/energy.hpp"
#include "napt/engines.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace napt;
using napt::testing::q;

namespace {

GraphPoint mid() { return napt::testing::g1()->point(0, q(1, 2)); }

// Triangle with a doubled edge; reference masses sum to the degree 3.
std::shared_ptr<const MetricGraph> theta() {
  return std::make_shared<const MetricGraph>(
      std::vector<std::string>{"x", "y", "z"},
      std::vector<Edge>{{"xy", 0, 1, q(1)}, {"yz", 1, 2, q(1, 2)}, {"zx", 2, 0, q(2)}, {"xy2", 0, 1, q(3, 2)}},
      std::vector<Rational>{q(1), q(3, 2), q(1, 2)});
}

Rational draw(std::mt19937_64& rng, int lo, int hi, int den) {
  return Rational(static_cast<long>(lo + static_cast<int>(rng() % static_cast<unsigned>(hi - lo + 1))), den);
}

PLMetric random_pl(std::shared_ptr<const MetricGraph> g, std::mt19937_64& rng) {
  std::vector<Rational> vals;
  for (std::size_t v = 0; v < g->vertex_count(); ++v) vals.push_back(draw(rng, -6, 6, 4));
  std::vector<std::vector<Breakpoint>> bps(g->edge_count());
  for (std::size_t e = 0; e < g->edge_count(); ++e)
    if (rng() % 2) bps[e].push_back({g->edge(e).length / Rational(2), draw(rng, -6, 6, 4)});
  return PLMetric(g, vals, bps);
}

std::shared_ptr<const LatticePolytope> square2() {
  return std::make_shared<const LatticePolytope>(
      std::vector<TPoint>{{q(0), q(0)}, {q(2), q(0)}, {q(2), q(2)}, {q(0), q(2)}});
}

TropicalMetric random_tropical(std::shared_ptr<const LatticePolytope> p, std::mt19937_64& rng) {
  std::vector<Piece> pieces;
  for (const auto& v : p->vertices()) pieces.push_back({v, draw(rng, -4, 4, 4)});
  const std::size_t extra = 1 + rng() % 4;
  for (std::size_t i = 0; i < extra; ++i) {
    TPoint a;
    for (std::size_t k = 0; k < p->dimension(); ++k) a.push_back(draw(rng, 0, 4, 2));
    pieces.push_back({a, draw(rng, -4, 8, 4)});
  }
  return TropicalMetric(p, pieces);
}

}  // namespace

TEST(Energy, SegmentValues) {
  auto g = napt::testing::g1();
  GraphEngine eng(g);
  PLMetric v = napt::testing::vshape(g);
  EXPECT_EQ(energy_E(eng, v), q(-1, 4));
  EXPECT_EQ(functional_I(eng, v), q(1, 2));
  EXPECT_EQ(functional_J(eng, v), q(1, 4));
  EXPECT_EQ(measure_energy(eng, GraphMeasure::dirac(mid())), q(1, 4));
  EXPECT_EQ(energy_E(eng, eng.reference()), q(0));
  EXPECT_EQ(energy_E(eng, v.shifted(q(3))), q(-1, 4) + q(3));
}

TEST(Energy, GraphMatchesQuadraticForm) {
  std::mt19937_64 rng(7);
  for (auto g : {napt::testing::g1(), theta()}) {
    GraphEngine eng(g);
    for (int trial = 0; trial < 40; ++trial) {
      PLMetric phi = random_pl(g, rng), psi = random_pl(g, rng);
      auto want = oracle::quadratic_form_energies(phi, psi);
      EXPECT_EQ(energy_E(eng, phi, psi), want.E);
      EXPECT_EQ(functional_I(eng, phi, psi), want.I);
      EXPECT_EQ(functional_J(eng, phi, psi), want.J);
      PLMetric chi = random_pl(g, rng);
      EXPECT_EQ(cocycle_defect(eng, phi, psi, chi), q(0));
    }
  }
}

TEST(Energy, ToricMatchesLegendreTransform) {
  std::mt19937_64 rng(11);
  auto interval = std::make_shared<const LatticePolytope>(std::vector<TPoint>{{q(-1)}, {q(2)}});
  for (auto p : {interval, square2()}) {
    ToricEngine eng(p);
    for (int trial = 0; trial < 25; ++trial) {
      TropicalMetric u = random_tropical(p, rng);
      const Rational e = oracle::legendre_energy(u.pieces(), p->volume());
      EXPECT_EQ(energy_E(eng, u), e);
      // MA(h_P) is the Dirac mass at the origin.
      EXPECT_EQ(functional_J(eng, u), u.eval(TPoint(p->dimension())) - e);
      TropicalMetric v = random_tropical(p, rng);
      EXPECT_EQ(energy_E(eng, u, v), e - oracle::legendre_energy(v.pieces(), p->volume()));
    }
  }
}

TEST(Energy, ToricMeasureEnergyOfPointMass) {
  auto p = square2();
  ToricEngine eng(p);
  // The solution for a Dirac mass at w is w -> h_P(w - w0) up to a constant.
  TPoint w0{q(1), q(-1)};
  Rational e = measure_energy(eng, ToricMeasure::dirac(w0));
  std::vector<Piece> pieces;
  for (const auto& v : p->vertices()) pieces.push_back({v, -tdot(v, w0)});
  TropicalMetric sol(p, pieces);
  EXPECT_EQ(e, functional_I(eng, sol) - functional_J(eng, sol));
}
