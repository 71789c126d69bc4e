#include <gtest/gtest.h>

#include "napt/estimates.hpp"
#include "support.hpp"

using namespace napt;
using napt::testing::q;

namespace {

std::shared_ptr<const MetricGraph> theta() {
  return std::make_shared<const MetricGraph>(
      std::vector<std::string>{"x", "y", "z"},
      std::vector<Edge>{{"xy", 0, 1, q(1)}, {"yz", 1, 2, q(1, 2)}, {"zx", 2, 0, q(2)}, {"xy2", 0, 1, q(3, 2)}},
      std::vector<Rational>{q(1), q(3, 2), q(1, 2)});
}

std::shared_ptr<const LatticePolytope> unit_square() {
  return std::make_shared<const LatticePolytope>(
      std::vector<TPoint>{{q(0), q(0)}, {q(1), q(0)}, {q(1), q(1)}, {q(0), q(1)}});
}

void expect_all_pass(const EstimateReport& r) {
  for (const auto& rec : r.records)
    EXPECT_TRUE(rec.pass) << rec.name << " sample " << rec.sample << " lhs " << rec.lhs.str() << " rhs " << rec.rhs;
}

}  // namespace

TEST(Constants, SmallDimensions) {
  auto c1 = appendix_constants(1);
  EXPECT_EQ(c1.c_np, std::vector<Rational>{q(1)});
  EXPECT_EQ(c1.c_mixed_form, q(8));
  EXPECT_EQ(c1.c_quasi_triangle, q(32));
  EXPECT_EQ(c1.c_i_by_j, q(64));
  EXPECT_EQ(c1.c_mixed_form_j, q(8));
  EXPECT_EQ(c1.c_mixed_variation, q(8));
  EXPECT_EQ(c1.c_reference, q(8));
  EXPECT_EQ(c1.c_ma_lipschitz, q(3));
  // c_energy_continuity = 16 sqrt 2 rounded up.
  EXPECT_GE(c1.c_energy_continuity * c1.c_energy_continuity, q(512));

  auto c2 = appendix_constants(2);
  ASSERT_EQ(c2.c_np.size(), 2u);
  EXPECT_EQ(c2.c_np[0], q(1));
  EXPECT_GE((c2.c_np[1] - q(1)) * (c2.c_np[1] - q(1)), q(48));
  EXPECT_LE(c2.c_np[1], q(697, 80));
  EXPECT_EQ(c2.c_mixed_form, q(8));
  // C' = 8 sqrt(3) * 8 and C_quasi_triangle = C'^2 >= 192 * 64.
  EXPECT_GE(c2.c_quasi_triangle, q(12288));
  for (unsigned n = 1; n <= 4; ++n) EXPECT_EQ(appendix_constants(n).c_np.front(), q(1));
}

TEST(Constants, ExactComparator) {
  Bound b{q(1), 1, {{q(4), 1}}};
  EXPECT_TRUE(b.holds(q(2)));
  EXPECT_FALSE(b.holds(q(2) + Rational(1, 1000000000)));
  EXPECT_TRUE(b.holds(q(-5)));
  Bound neg{q(1), 0, {{q(-1), 1}}};
  EXPECT_FALSE(neg.holds(q(-2)));
  Bound zero_power{q(3), 2, {{q(0), 0}}};
  EXPECT_TRUE(zero_power.holds(q(3)));
}

TEST(Estimates, SegmentEqualityCase) {
  auto g = napt::testing::g1();
  GraphEngine eng(g);
  EstimateSample<PLMetric> smp;
  smp.metrics.assign(6, eng.reference());
  smp.metrics[0] = napt::testing::vshape(g);
  smp.s = q(0);
  auto r = check_estimates(eng, {smp});
  expect_all_pass(r);
  bool seen = false;
  for (const auto& rec : r.records)
    if (rec.name == "i_minus_j.upper") {
      EXPECT_EQ(rec.lhs, q(1, 4));
      EXPECT_EQ(rec.margin, 0.0);
      seen = true;
    }
  EXPECT_TRUE(seen);
}

TEST(Estimates, GraphBattery) {
  GraphEngine eng(theta());
  auto samples = draw_samples(eng, 40, 7);
  auto r = check_estimates(eng, samples);
  EXPECT_TRUE(r.notes.empty());
  EXPECT_EQ(r.summary().size(), 18u);
  expect_all_pass(r);
  auto ids = check_identities(eng, samples);
  expect_all_pass(ids);
}

TEST(Estimates, ToricBattery) {
  ToricEngine eng(unit_square());
  auto samples = draw_samples(eng, 8, 3);
  auto r = check_estimates(eng, samples);
  expect_all_pass(r);
  expect_all_pass(check_identities(eng, samples));

  // h_P against shifts of itself: all functionals vanish.
  EstimateSample<TropicalMetric> flat;
  for (int i = 0; i < 6; ++i) flat.metrics.push_back(eng.reference().shifted(q(i, 2)));
  flat.s = q(1, 2);
  expect_all_pass(check_estimates(eng, {flat}));
}

TEST(Estimates, AlgebraBatteryOnExportedData) {
  auto g = subdivide(theta(), {theta()->point(0, q(1, 2))}).target;
  AlgebraEngine eng(std::make_shared<const RestrictionAlgebra>(export_graph_algebra(*g)));
  auto samples = draw_samples(eng, 20, 1);
  expect_all_pass(check_estimates(eng, samples));
  expect_all_pass(check_identities(eng, samples));
}

TEST(Estimates, ReportOrderIsStable) {
  GraphEngine eng(napt::testing::g1());
  auto samples = draw_samples(eng, 6, 9);
  auto a = check_estimates(eng, samples, {Rational(0), 1});
  auto b = check_estimates(eng, samples, {Rational(0), 4});
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    EXPECT_EQ(a.records[i].name, b.records[i].name);
    EXPECT_EQ(a.records[i].sample, b.records[i].sample);
    EXPECT_EQ(a.records[i].lhs, b.records[i].lhs);
  }
  EXPECT_TRUE(check_estimates(eng, {}).records.empty());
}
