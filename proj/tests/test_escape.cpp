#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "qfast/efun.hpp"
#include "qfast/errors.hpp"
#include "qfast/escape.hpp"
#include "qfast/growth.hpp"

using namespace qfast;

namespace {

const std::vector<double> kEps{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};

double modulus(const OrbitRecord& r, std::size_t n) { return r.moduli.at(n)->to_double(); }

}  // namespace

TEST(ComputeOrbit, ExpFromZero) {
  auto f = EntireFunction::exp();
  OrbitRecord r = compute_orbit(f, {0.0, 0.0}, 6);
  ASSERT_EQ(r.moduli.size(), 7u);
  EXPECT_FALSE(r.moduli[0].has_value() && modulus(r, 0) != 0.0);
  EXPECT_DOUBLE_EQ(modulus(r, 1), 1.0);
  EXPECT_NEAR(modulus(r, 2), std::exp(1.0), 1e-15);
  EXPECT_NEAR(modulus(r, 3), 15.154262241479262, 1e-12);
  EXPECT_FALSE(r.truncated);
  // The orbit leaves double range and continues on the positive axis.
  EXPECT_LT(r.tower_from, r.moduli.size());
  EXPECT_GE(r.moduli.back()->height(), 3u);
}

TEST(ComputeOrbit, ExpFromMinusOne) {
  OrbitRecord r = compute_orbit(EntireFunction::exp(), {-1.0, 0.0}, 2);
  EXPECT_NEAR(modulus(r, 1), std::exp(-1.0), 1e-15);
  EXPECT_NEAR(modulus(r, 2), 1.4446678610097661, 1e-14);
}

TEST(ComputeOrbit, ZeroSteps) {
  OrbitRecord r = compute_orbit(EntireFunction::exp(), {3.0, 4.0}, 0);
  ASSERT_EQ(r.moduli.size(), 1u);
  EXPECT_DOUBLE_EQ(modulus(r, 0), 5.0);
}

TEST(ComputeOrbit, ComplexOverflowTruncates) {
  // exp(z) at z = 800 + 1i leaves range off the positive axis.
  OrbitRecord r = compute_orbit(EntireFunction::exp(), {800.0, 1.0}, 4);
  EXPECT_TRUE(r.truncated);
  EXPECT_NE(r.note.find("range-truncated"), std::string::npos);
}

TEST(ComputeOrbit, LacunaryZeroIsMarked) {
  OrbitRecord r = compute_orbit(EntireFunction::lacunary5(), {5.0, 0.0}, 3);
  ASSERT_GE(r.moduli.size(), 2u);
  EXPECT_FALSE(r.moduli[1].has_value());
}

TEST(TowerOrbit, MatchesPhiOrbit) {
  auto f = EntireFunction::exp();
  FunctionGrowth g(f);
  const double t0 = 1.7;
  OrbitRecord r = compute_tower_orbit(f, TowerReal::from_log(t0), 8);
  OrbitSequence p = iterate_map(g, MapKind::phi, 1.0, TowerReal::from_double(t0), 8);
  ASSERT_EQ(r.moduli.size(), p.values.size());
  for (std::size_t n = 0; n < p.values.size(); ++n) {
    EXPECT_NE(compare_resolved(apply_log(*r.moduli[n]), p.values[n]), Resolved::less) << n;
    EXPECT_NE(compare_resolved(apply_log(*r.moduli[n]), p.values[n]), Resolved::greater) << n;
  }
}

TEST(Classify, AboveThresholdOrbitIsFastWithLagZero) {
  auto f = EntireFunction::exp();
  FunctionGrowth g(f);
  const double t_r = threshold_R(g);
  OrbitRecord r = compute_tower_orbit(f, TowerReal::from_log(t_r + 1.0), 10);
  Classification c = classify(r, g, t_r, {0.5}, 3);
  const Certificate* a = c.find(ThresholdKind::fast);
  ASSERT_NE(a, nullptr);
  ASSERT_TRUE(a->lag.has_value());
  EXPECT_EQ(*a->lag, 0u);
  EXPECT_TRUE(c.escaping_proxy);
}

TEST(Classify, BoundedOrbitHasNoCertificates) {
  auto f = EntireFunction::exp(0.1);
  FunctionGrowth g(f);
  const double t_r = threshold_R(g);
  OrbitRecord r = compute_orbit(f, {0.0, 0.0}, 40);
  EXPECT_NEAR(modulus(r, 40), 0.11183255915896297, 1e-12);
  Classification c = classify(r, g, t_r, {0.5}, 5);
  for (const auto& cert : c.certificates) EXPECT_FALSE(cert.lag.has_value());
  EXPECT_FALSE(c.escaping_proxy);
}

TEST(Classify, RequiresExpandingThreshold) {
  auto f = EntireFunction::exp(0.1);
  FunctionGrowth g(f);
  OrbitRecord r = compute_orbit(f, {0.0, 0.0}, 4);
  // phi(-1) = log 0.1 + e^{-1} < -1.
  EXPECT_THROW(classify(r, g, -1.0, {0.5}, 2), PreconditionError);
}

TEST(Classify, InclusionChainOnRandomTowerOrbits) {
  auto f = EntireFunction::exp();
  FunctionGrowth g(f);
  const double t_r = threshold_R(g);
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> start(t_r - 3.0, t_r + 6.0);
  std::uniform_int_distribution<int> horizon(4, 14);
  std::size_t with_fast = 0;
  for (int i = 0; i < 100; ++i) {
    OrbitRecord r = compute_tower_orbit(f, TowerReal::from_log(start(rng)), horizon(rng));
    Classification c = classify(r, g, t_r, kEps, 6);
    const Certificate* a = c.find(ThresholdKind::fast);
    ASSERT_NE(a, nullptr);
    if (!a->lag) continue;
    ++with_fast;
    for (double eps : kEps) {
      const Certificate* q = c.find(ThresholdKind::quite_fast, eps);
      ASSERT_NE(q, nullptr);
      ASSERT_TRUE(q->lag.has_value()) << "orbit " << i << " eps " << eps;
      EXPECT_LE(*q->lag, *a->lag);
      const Certificate* em = c.find(ThresholdKind::eps_max, eps);
      ASSERT_NE(em, nullptr);
      ASSERT_TRUE(em->lag.has_value());
      EXPECT_LE(*em->lag, *a->lag);
    }
  }
  EXPECT_GT(with_fast, 20u);
}

TEST(Classify, ThresholdKindNames) {
  EXPECT_EQ(to_string(ThresholdKind::fast), "A");
  EXPECT_EQ(to_string(ThresholdKind::quite_fast), "Q_eps");
  EXPECT_EQ(to_string(ThresholdKind::eps_max), "eps_M");
}
