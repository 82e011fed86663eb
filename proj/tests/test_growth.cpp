#include <cmath>

#include <gtest/gtest.h>

#include "qfast/constructions.hpp"
#include "qfast/efun.hpp"
#include "qfast/errors.hpp"
#include "qfast/growth.hpp"

using namespace qfast;

TEST(Phi, Examples) {
  FunctionGrowth g(EntireFunction::exp());
  EXPECT_NEAR(g.phi_at(1.0).to_double(), std::exp(1.0), 1e-15);
  EXPECT_NEAR(g.phi_at(0.0).to_double(), 1.0, 1e-15);
  Example62Model m = build_example62(0.25, 0.75);
  EXPECT_EQ(m.phi_at(64.0).to_double(), 1024.0);
  EXPECT_EQ(m.phi_at(0.0).to_double(), 0.0);
}

TEST(Phi, LambdaShiftsByLog) {
  FunctionGrowth g(EntireFunction::exp(2.0));
  EXPECT_NEAR(g.phi_at(1.5).to_double(), std::log(2.0) + std::exp(1.5), 1e-13);
}

TEST(Phi, SampledSeriesRefusesTowerMagnitudes) {
  TruncatedSeries s;
  s.coeffs = {1.0, 1.0, 0.5};
  s.tail = TailKind::factorial;
  s.tail_a = 1.0;
  FunctionGrowth g(EntireFunction::series("short", s));
  EXPECT_THROW(g.phi(TowerReal::normalize(2, 10.0)), EvaluatorRefusal);
}

TEST(IterateMap, PhiOrbitOfExp) {
  FunctionGrowth g(EntireFunction::exp());
  OrbitSequence o = iterate_map(g, MapKind::phi, 1.0, TowerReal::from_double(1.0), 3);
  ASSERT_EQ(o.values.size(), 4u);
  EXPECT_DOUBLE_EQ(o.values[0].to_double(), 1.0);
  EXPECT_NEAR(o.values[1].to_double(), 2.71828, 1e-5);
  EXPECT_NEAR(o.values[2].to_double(), 15.1543, 1e-4);
  EXPECT_NEAR(o.values[3].to_double() / 3.814279e6, 1.0, 1e-6);
}

TEST(IterateMap, PsiOrbitOfExp) {
  FunctionGrowth g(EntireFunction::exp());
  OrbitSequence o = iterate_map(g, MapKind::psi_eps, 0.5, TowerReal::from_double(1.0), 2);
  ASSERT_EQ(o.values.size(), 3u);
  EXPECT_NEAR(o.values[1].to_double(), 1.35914, 1e-5);
  EXPECT_NEAR(o.values[2].to_double(), 0.5 * std::exp(0.5 * std::exp(1.0)), 1e-14);
  EXPECT_NEAR(o.values[2].to_double(), 1.9464, 1e-4);
}

TEST(IterateMap, ZeroStepsKeepsStart) {
  PowerModel g(2.0);
  OrbitSequence o = iterate_map(g, MapKind::phi, 1.0, TowerReal::from_double(3.0), 0);
  ASSERT_EQ(o.values.size(), 1u);
  EXPECT_EQ(o.values[0].to_double(), 3.0);
}

TEST(IterateMap, TruncatesWhenEvaluatorRefuses) {
  Example62Model m = build_example62(0.25, 0.75, 8);
  OrbitSequence o = iterate_map(m, MapKind::phi, 1.0, TowerReal::from_double(2.0), 20);
  EXPECT_TRUE(o.truncated);
  EXPECT_LT(o.values.size(), 21u);
  EXPECT_FALSE(o.note.empty());
}

TEST(IterateMap, ScalingIdentity) {
  FunctionGrowth g(EntireFunction::exp());
  for (double t = -2.0; t < 6.0; t += 0.5) {
    TowerReal x = TowerReal::from_double(t);
    EXPECT_EQ(apply_map(g, MapKind::psi_eps, 0.3, x), scale(g.phi(x), 0.3));
    EXPECT_EQ(apply_map(g, MapKind::eps_shift, 0.3, x), shift(g.phi(x), std::log(0.3)));
  }
}

TEST(IterateMap, ThresholdOrdering) {
  FunctionGrowth g(EntireFunction::exp());
  const double t_r = threshold_R(g);
  for (double eps : {0.1, 0.5, 0.9}) {
    auto p = iterate_map(g, MapKind::phi, 1.0, TowerReal::from_double(t_r), 6);
    auto s = iterate_map(g, MapKind::psi_eps, eps, TowerReal::from_double(t_r), 6);
    auto q = iterate_map(g, MapKind::eps_shift, eps, TowerReal::from_double(t_r), 6);
    for (std::size_t n = 0; n < s.values.size() && n < p.values.size(); ++n) {
      EXPECT_LE(s.values[n], p.values[n]);
    }
    for (std::size_t n = 0; n < q.values.size() && n < p.values.size(); ++n) {
      EXPECT_LE(q.values[n], p.values[n]);
    }
  }
}

TEST(ThresholdR, Exp) {
  FunctionGrowth g(EntireFunction::exp());
  double t = threshold_R(g);
  EXPECT_LE(t, 0.1);
  EXPECT_GT(g.phi_at(t).to_double(), t);
}

TEST(ThresholdR, Example62) {
  Example62Model m = build_example62(0.25, 0.75);
  double t = threshold_R(m);
  EXPECT_GT(m.phi_at(t).to_double(), t);
  for (double s : {1.0, 2.0, 8.0, 100.0}) EXPECT_GT(m.phi_at(s).to_double(), s);
}

TEST(ThresholdR, RejectsNonExpandingModel) {
  PiecewiseLinearModel half("half",
                            {TowerReal::from_double(0.0), TowerReal::from_double(1e7)},
                            {TowerReal::from_double(0.0), TowerReal::from_double(5e6)});
  EXPECT_THROW(threshold_R(half), PreconditionError);
}

TEST(PiecewiseLinear, ExactAtKnotsAndRefusedBeyond) {
  Example62Model m = build_example62(0.25, 0.75);
  const auto& t = m.sequence();
  for (std::size_t n = 0; n + 1 < t.size(); ++n) EXPECT_EQ(m.phi(t[n]), t[n + 1]);
  EXPECT_THROW(m.phi(scale(t.back(), 2.0)), EvaluatorRefusal);
  EXPECT_NEAR(m.phi_at(512.0).to_double(), 15837.866666666667, 1e-9);
  // Linear extension below t_0 = 1 with the slope 2 of [0, 1].
  EXPECT_NEAR(m.phi_at(-1.0).to_double(), -2.0, 1e-15);
}

TEST(OrderEstimates, Exp) {
  std::vector<double> grid;
  for (int i = 0; i < 64; ++i) grid.push_back(10.0 * std::pow(1000.0, i / 63.0));
  OrderEstimate e = order_estimates(EntireFunction::exp(), grid);
  EXPECT_NEAR(e.rho_hat, 1.0, 0.05);
  EXPECT_NEAR(e.lambda_hat, 1.0, 0.05);
}

TEST(OrderEstimates, LacunaryIsOrderZero) {
  std::vector<double> grid;
  for (int i = 0; i < 128; ++i) grid.push_back(10.0 * std::pow(1e24, i / 127.0));
  OrderEstimate e = order_estimates(EntireFunction::lacunary5(), grid);
  EXPECT_LE(e.rho_hat, 0.2);
  EXPECT_GE(e.lambda_hat, 0.0);
}

TEST(OrderEstimates, SkipsSmallModuli) {
  std::vector<double> grid{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 2.0, 4.0};
  OrderEstimate e = order_estimates(EntireFunction::exp(), grid);
  EXPECT_EQ(e.skipped, 4u);
  EXPECT_EQ(e.used, 2u);
  EXPECT_THROW(order_estimates(EntireFunction::exp(), {1.0, 2.0}), PreconditionError);
}

TEST(ThresholdR, ScaledThresholdLetsPsiEscape) {
  FunctionGrowth g(EntireFunction::exp());
  double t = threshold_R_eps(g, 0.1);
  EXPECT_GT(t, threshold_R(g));
  EXPECT_TRUE(psi_expands_at(g, 0.1, t));
  EXPECT_FALSE(psi_expands_at(g, 0.1, threshold_R(g)));
  EXPECT_GT(0.1 * std::exp(t), t);
}
