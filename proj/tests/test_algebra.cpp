#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "napt/energy.hpp"
#include "napt/engines.hpp"
#include "napt/model_algebra.hpp"
#include "support.hpp"

using namespace napt;
using napt::testing::q;

namespace {

std::shared_ptr<const MetricGraph> g1_quarters() {
  auto g = napt::testing::g1();
  return subdivide(g, {g->point(0, q(1, 4)), g->point(0, q(1, 2)), g->point(0, q(3, 4))}).target;
}

Rational draw(std::mt19937_64& rng, int lo, int hi, int den) {
  return Rational(static_cast<long>(lo + static_cast<int>(rng() % static_cast<unsigned>(hi - lo + 1))), den);
}

// Random symmetric table algebra with V = 2 in dimension n.
RestrictionAlgebra random_algebra(std::size_t n, std::mt19937_64& rng) {
  RestrictionAlgebra alg(n, q(2), {{"p", q(1)}, {"r", q(2)}, {"s", q(1, 2)}});
  for (std::size_t j = 0; j < 3; ++j) {
    std::vector<std::size_t> key(n, 0);
    // Enumerate sorted keys over {0..3}^n.
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t lo) {
      if (pos == n) {
        alg.set_entry(j, key, draw(rng, -3, 3, 2));
        return;
      }
      for (std::size_t a = lo; a <= 3; ++a) {
        key[pos] = a;
        rec(pos + 1, a);
      }
    };
    rec(0, 0);
  }
  return alg;
}

ModelMetric random_model(std::mt19937_64& rng) {
  return {{draw(rng, -3, 3, 1), draw(rng, -3, 3, 2), draw(rng, -3, 3, 3)}, draw(rng, -2, 2, 1)};
}

}  // namespace

TEST(Algebra, Validation) {
  RestrictionAlgebra trivial(2, q(3), {{"x", q(1)}});
  trivial.set_entry(0, {0, 0}, q(3));
  auto r = a_validate(trivial);
  EXPECT_TRUE(r.geometric());
  EXPECT_EQ(a_pairing(trivial), linalg::Matrix(1, linalg::Vector{q(0)}));
  EXPECT_EQ(a_ma(trivial.zero(), trivial), AlgebraMeasure::dirac(0));

  RestrictionAlgebra heavy(1, q(2), {{"a", q(1)}, {"b", q(1)}});
  heavy.set_entry(0, {0}, q(1));
  heavy.set_entry(1, {0}, q(2));
  EXPECT_FALSE(a_validate(heavy).diagnostics.empty());

  RestrictionAlgebra sym(2, q(1), {{"a", q(1)}});
  sym.set_entry(0, {1, 0}, q(1));
  EXPECT_NO_THROW(sym.set_entry(0, {0, 1}, q(1)));
  EXPECT_THROW(sym.set_entry(0, {0, 1}, q(2)), InvariantError);
}

TEST(Algebra, NonPsdIsFlagged) {
  // Positive curvature pairing: the sign of the Laplacian reversed.
  RestrictionAlgebra alg(1, q(2), {{"a", q(1)}, {"b", q(1)}});
  alg.set_entry(0, {0}, q(1));
  alg.set_entry(1, {0}, q(1));
  alg.set_entry(0, {1}, q(1));
  alg.set_entry(0, {2}, q(-1));
  alg.set_entry(1, {1}, q(-1));
  alg.set_entry(1, {2}, q(1));
  auto r = a_validate(alg);
  EXPECT_TRUE(r.diagnostics.empty());
  EXPECT_FALSE(r.positive_semidefinite);
  EXPECT_FALSE(r.geometric());
}

TEST(Algebra, SymmetricAndMultilinear) {
  std::mt19937_64 rng(3);
  for (std::size_t n : {2u, 3u}) {
    auto alg = random_algebra(n, rng);
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<ModelMetric> ms;
      for (std::size_t s = 0; s < n; ++s) ms.push_back(random_model(rng));
      auto base = a_ma_mixed(ms, alg);
      auto swapped = ms;
      std::swap(swapped.front(), swapped.back());
      EXPECT_EQ(a_ma_mixed(swapped, alg), base);
      // Affine in the first slot: masses of L + (t m + (1-t) m') mix linearly.
      ModelMetric other = random_model(rng);
      Rational t = draw(rng, -4, 4, 3);
      std::vector<ModelMetric> pair{ms[0], other};
      std::vector<Rational> cs{t, Rational(1) - t};
      auto mixed = ms;
      mixed[0] = a_combine(pair, cs);
      auto with_other = ms;
      with_other[0] = other;
      EXPECT_EQ(a_ma_mixed(mixed, alg), base.scaled(t) + a_ma_mixed(with_other, alg).scaled(Rational(1) - t));
    }
  }
}

TEST(Algebra, GraphExportIsGeometric) {
  auto g = g1_quarters();
  auto alg = export_graph_algebra(*g);
  auto r = a_validate(alg);
  EXPECT_TRUE(r.diagnostics.empty());
  EXPECT_TRUE(r.symmetric_pairing);
  EXPECT_TRUE(r.degree_zero);
  EXPECT_TRUE(r.positive_semidefinite);
  EXPECT_EQ(a_reference_defect(alg), reference_defect(*g));

  // V-shape exported: all mass at the midpoint component.
  auto mid = *g->vertex_index("e@1/2");
  PLMetric v(g, {q(0), q(0), q(-1, 4), q(-1, 2), q(-1, 4)});
  auto mu = a_ma(model_metric_from_pl(v), alg);
  EXPECT_EQ(mu, AlgebraMeasure::dirac(mid));
  EXPECT_EQ(a_integrate(model_metric_from_pl(v), a_ma(alg.zero(), alg), alg), q(0));
  EXPECT_THROW(model_metric_from_pl(napt::testing::vshape(napt::testing::g1())), std::domain_error);
}

TEST(Algebra, AgreesWithGraphEngine) {
  std::mt19937_64 rng(5);
  auto g = g1_quarters();
  GraphEngine ge(g);
  AlgebraEngine ae(std::make_shared<const RestrictionAlgebra>(export_graph_algebra(*g)));
  auto random_vertex_metric = [&] {
    std::vector<Rational> vals;
    for (std::size_t v = 0; v < g->vertex_count(); ++v) vals.push_back(draw(rng, -8, 8, 4));
    return PLMetric(g, vals);
  };
  for (int trial = 0; trial < 30; ++trial) {
    PLMetric a = random_vertex_metric(), b = random_vertex_metric();
    ModelMetric ma_ = model_metric_from_pl(a), mb = model_metric_from_pl(b);
    auto native = ma_signed(a);
    auto exported = a_ma(ma_, ae.algebra());
    for (std::size_t v = 0; v < g->vertex_count(); ++v)
      EXPECT_EQ(exported.mass_at(v), native.mass_at(GraphPoint::at_vertex(v)));
    EXPECT_EQ(energy_E(ae, ma_, mb), energy_E(ge, a, b));
    EXPECT_EQ(functional_I(ae, ma_, mb), functional_I(ge, a, b));
    EXPECT_EQ(functional_J(ae, ma_, mb), functional_J(ge, a, b));
    EXPECT_EQ(ae.sup(ma_), ge.sup(a));
  }
}
