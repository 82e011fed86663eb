#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "qfast/constructions.hpp"
#include "qfast/efun.hpp"
#include "qfast/errors.hpp"
#include "qfast/growth.hpp"
#include "qfast/regularity.hpp"

using namespace qfast;

namespace {

const std::vector<double> kEps{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};

Grid grid(double lo, double hi, std::size_t n, bool log_spaced = false, const char* c = "t") {
  return Grid{lo, hi, n, log_spaced, c};
}

bool holds(const RegularityVerdict& v) { return v.status == VerdictStatus::holds_on_grid; }
bool violated(const RegularityVerdict& v) { return v.status == VerdictStatus::violated; }

// Every violation witness must be a resolved violation.
void expect_witnesses_confirm(const RegularityVerdict& v) {
  ASSERT_FALSE(v.witnesses.empty());
  EXPECT_EQ(compare_resolved(v.witnesses.front().lhs, v.witnesses.front().rhs), Resolved::less);
}

}  // namespace

TEST(Grid, PointsAndValidation) {
  auto p = grid(1.0, 100.0, 3, true).points();
  ASSERT_EQ(p.size(), 3u);
  EXPECT_DOUBLE_EQ(p[0], 1.0);
  EXPECT_NEAR(p[1], 10.0, 1e-12);
  EXPECT_DOUBLE_EQ(p[2], 100.0);
  EXPECT_THROW(grid(2.0, 1.0, 4).validate(), PreconditionError);
  EXPECT_THROW(grid(-1.0, 1.0, 4, true).validate(), PreconditionError);
}

TEST(Convexity, DetectsConcaveModel) {
  PowerModel sqrt_model(0.5);
  auto v = check_convexity(sqrt_model, grid(1.0, 10.0, 64));
  EXPECT_TRUE(violated(v));
  expect_witnesses_confirm(v);
}

TEST(LogRegularDerivative, Exp) {
  FunctionGrowth g(EntireFunction::exp());
  auto v = check_log_regular_derivative(g, grid(2.0, 20.0, 128), 0.9);
  EXPECT_TRUE(holds(v));
  EXPECT_GE(v.results.at("c_witness"), 1.0 - 1e-6);
}

TEST(LogRegularDerivative, LinearFails) {
  PowerModel lin(1.0);
  auto v = check_log_regular_derivative(lin, grid(1.0, 50.0, 64), 0.01);
  EXPECT_TRUE(violated(v));
  EXPECT_NEAR(v.results.at("c_witness"), 0.0, 1e-6);
}

TEST(LogRegularDerivative, SquareWitnessIsOne) {
  PowerModel sq(2.0);
  auto v = check_log_regular_derivative(sq, grid(1.0, 100.0, 256), 0.5);
  EXPECT_TRUE(holds(v));
  EXPECT_NEAR(v.results.at("c_witness"), 1.0, 1e-6);
}

TEST(LogRegularDerivative, Example61DipsOnChords) {
  Example61Model m = build_example61();
  double top = m.chord_top(1).to_double();
  double bottom = m.chord_bottom(1).to_double();
  auto v = check_log_regular_derivative(m, grid(bottom, top, 256), 0.5);
  EXPECT_TRUE(violated(v));
  EXPECT_LT(v.results.at("c_witness"), 0.5);
}

TEST(Hadamard, SquareHoldsWithEquality) {
  PowerModel sq(2.0);
  EXPECT_TRUE(holds(check_log_regular_hadamard(sq, 2.0, 2.0, grid(0.5, 50.0, 64))));
  EXPECT_TRUE(holds(check_log_regular_hadamard(sq, 3.0, 3.0, grid(0.5, 50.0, 64))));
  EXPECT_TRUE(violated(check_log_regular_hadamard(sq, 2.0, 2.1, grid(0.5, 50.0, 64))));
}

TEST(Hadamard, ExpRegionBeginsAtLog4) {
  FunctionGrowth g(EntireFunction::exp());
  EXPECT_TRUE(holds(check_log_regular_hadamard(g, 2.0, 2.0, grid(std::log(4.0) + 1e-6, 10.0, 64))));
  auto v = check_log_regular_hadamard(g, 2.0, 2.0, grid(0.1, 1.3, 32));
  EXPECT_TRUE(violated(v));
  expect_witnesses_confirm(v);
}

TEST(Hadamard, Example61ViolatedAtChordFraction) {
  Example61Model m = build_example61();
  // Phi(T_1) / Phi(T_1 / 2) = 2.239 < k d = 2.4.
  double t = m.chord_top(1).to_double() / 2.0;
  auto v = check_log_regular_hadamard(m, 2.0, 1.2, grid(t, t, 1));
  EXPECT_TRUE(violated(v));
  expect_witnesses_confirm(v);
}

TEST(Constants, Formulas) {
  EXPECT_EQ(constants_c_from_kd(2.0, 2.0), 0.5);
  EXPECT_DOUBLE_EQ(constants_d_from_c(4.0, 0.5), 2.0);
  EXPECT_GT(constants_c_from_kd(2.0, 1.0 + 1e-9), 0.0);
  EXPECT_LT(constants_c_from_kd(2.0, 1.0 + 1e-9), 1e-8);
}

TEST(EpsRegularity, ExpConsistent) {
  FunctionGrowth g(EntireFunction::exp());
  auto v = check_eps_regularity(g, 0.5, 1.0, 5, 12);
  EXPECT_EQ(v.status, VerdictStatus::consistent_to_horizon);
}

TEST(EpsRegularity, Example62SmallEpsFailsEveryLag) {
  Example62Model m = build_example62(0.25, 0.75);
  auto v = check_eps_regularity(m, 0.25, 8.0, 5, 40);
  EXPECT_EQ(v.status, VerdictStatus::violation_all_lags);
  expect_witnesses_confirm(v);
  for (int l = 0; l <= 5; ++l) {
    double n = v.results.at("first_failure_lag_" + std::to_string(l));
    EXPECT_GE(n, 0.0);
    EXPECT_LE(n, 40.0);
  }
}

TEST(EpsRegularity, Example62LargeEpsConsistentFromWindow) {
  Example62Model m = build_example62(0.25, 0.75);
  auto v = check_eps_regularity(m, 0.75, 512.0, 5, 8);
  EXPECT_EQ(v.status, VerdictStatus::consistent_to_horizon);
}

TEST(EpsRegularity, ConsistentLagRechecksDefinition) {
  FunctionGrowth g(EntireFunction::exp());
  const double t_r = 1.0;
  auto v = check_eps_regularity(g, 0.5, t_r, 5, 10);
  ASSERT_EQ(v.status, VerdictStatus::consistent_to_horizon);
  auto lag = static_cast<std::size_t>(v.results.at("certified_lag"));
  auto p = iterate_map(g, MapKind::phi, 1.0, TowerReal::from_double(t_r), 10);
  auto s = iterate_map(g, MapKind::psi_eps, 0.5, TowerReal::from_double(t_r), 10 + lag);
  for (std::size_t n = 0; n + lag < s.values.size() && n < p.values.size(); ++n) {
    EXPECT_NE(compare_resolved(s.values[n + lag], p.values[n]), Resolved::less) << n;
  }
}

TEST(EpsRegularity, RejectsNonExpandingStart) {
  PowerModel half(0.5);
  EXPECT_THROW(check_eps_regularity(half, 0.5, 4.0, 3, 5), PreconditionError);
}

TEST(WeakRegularity, ExpAllConsistent) {
  FunctionGrowth g(EntireFunction::exp());
  double t_r = 0.0;
  for (double e : kEps) t_r = std::max(t_r, threshold_R_eps(g, e));
  auto v = check_weak_regularity(g, kEps, t_r, 5, 8, 2);
  EXPECT_EQ(v.status, VerdictStatus::consistent_to_horizon);
  EXPECT_EQ(v.parts.size(), kEps.size());
}

TEST(EpsRegularity, NonExpandingStartIsInconclusive) {
  // From t_R near 0 the 0.1 e^t orbit settles at a fixed point, so every lag
  // fails without refuting eps-regularity.
  FunctionGrowth g(EntireFunction::exp());
  auto v = check_eps_regularity(g, 0.1, threshold_R(g), 6, 8);
  EXPECT_EQ(v.status, VerdictStatus::inconclusive);
  EXPECT_EQ(v.results.at("psi_expanding"), 0.0);
  // Just above the fixed point the psi orbit needs five steps to pass e^{t_R},
  // so the first certified lag is 4.
  auto w = check_eps_regularity(g, 0.1, threshold_R_eps(g, 0.1), 6, 8);
  EXPECT_EQ(w.status, VerdictStatus::consistent_to_horizon);
  EXPECT_EQ(w.results.at("certified_lag"), 4.0);
}

TEST(WeakRegularity, Example62Mixed) {
  Example62Model m = build_example62(0.25, 0.75);
  auto v = check_weak_regularity(m, {0.25, 0.75}, 8.0, 5, 40);
  ASSERT_EQ(v.parts.size(), 2u);
  EXPECT_EQ(v.parts[0].status, VerdictStatus::violation_all_lags);
  EXPECT_NE(v.parts[1].status, VerdictStatus::violation_all_lags);
  EXPECT_EQ(v.status, VerdictStatus::violation_all_lags);
}

TEST(WeakRegularity, SingleEpsReduces) {
  FunctionGrowth g(EntireFunction::exp());
  auto a = check_weak_regularity(g, {0.5}, 1.0, 5, 12);
  auto b = check_eps_regularity(g, 0.5, 1.0, 5, 12);
  EXPECT_EQ(a.status, b.status);
}

TEST(PsiRegularity, ExpFromLog4) {
  FunctionGrowth g(EntireFunction::exp());
  EXPECT_TRUE(holds(check_psi_regularity(g, 2.0, 2.0, grid(std::log(4.0) + 1e-6, 8.0, 64))));
  EXPECT_TRUE(violated(check_psi_regularity(g, 2.0, 2.0, grid(0.1, 1.3, 16))));
}

TEST(PsiRegularity, LinearFails) {
  PowerModel lin(1.0);
  EXPECT_TRUE(violated(check_psi_regularity(lin, 2.0, 1.5, grid(1.0, 10.0, 16))));
}

TEST(PsiRegularity, DerivativeWitnessGivesExponent) {
  FunctionGrowth g(EntireFunction::exp());
  Grid tail = grid(2.0, 8.0, 64);
  double c = check_log_regular_derivative(g, tail, 0.0).results.at("c_witness");
  for (double m : {1.5, 2.0, 3.0}) {
    EXPECT_TRUE(holds(check_psi_regularity(g, std::pow(m, 1.0 / c), m, tail))) << m;
  }
}

TEST(WeakSequence, Exp) {
  FunctionGrowth g(EntireFunction::exp());
  // phi(2 P(n)) >= 4 P(n+1) reads e^{P(n)} >= 4.
  EXPECT_EQ(check_weak_sequence(g, 2.0, 2.0, 2.0, 5).status, VerdictStatus::consistent_to_horizon);
  EXPECT_TRUE(violated(check_weak_sequence(g, 2.0, 2.0, 1.0, 5)));
}

TEST(TowerLowerBound, Example61Tail) {
  Example61Model m = build_example61();
  auto v = check_tower_lower_bound(m, 1, 0.25, grid(20.0, 1e4, 64, true), 1);
  EXPECT_TRUE(holds(v));
  PowerModel lin(1.0);
  EXPECT_TRUE(violated(check_tower_lower_bound(lin, 1, 0.5, grid(2.0, 50.0, 32))));
}

TEST(MinMod, ExpThresholdAtSixteen) {
  auto f = EntireFunction::exp();
  EXPECT_NEAR(minmod_constant(), 4.0 * std::log(4.0), 1e-15);
  EXPECT_TRUE(holds(check_minmod_criterion(f, grid(16.0, 1000.0, 64, false, "r"))));
  auto v = check_minmod_criterion(f, grid(10.0, 10.0, 1, false, "r"));
  EXPECT_TRUE(violated(v));
  expect_witnesses_confirm(v);
  // Recomputing the witness at twice the resolution keeps it violated.
  auto fine = check_minmod_criterion(f, grid(9.9, 10.1, 3, false, "r"));
  EXPECT_TRUE(violated(fine));
}

TEST(MinMod, ZeroOnCirclePasses) {
  auto f = EntireFunction::lacunary5();
  EXPECT_TRUE(holds(check_minmod_criterion(f, grid(5.0, 5.0, 1, false, "r"))));
  EXPECT_TRUE(holds(check_minmod_criterion(f, grid(25.0, 25.0, 1, false, "r"))));
}

TEST(Beurling, ExpReference) {
  BeurlingReport b = beurling_check(EntireFunction::exp(), 10.0, 20.0, 1.0);
  EXPECT_NEAR(beurling_constant(), std::numbers::pi / (4 * std::sqrt(2.0)), 1e-15);
  EXPECT_NEAR(b.lhs, 20.0, 1e-9);
  EXPECT_NEAR(b.rhs, 7.854, 0.01);
  EXPECT_NEAR(b.log_measure, std::log(2.0), 1e-9);
  EXPECT_TRUE(b.confirmed);
}

TEST(Beurling, TrivialWhenMuAboveMOfR1) {
  BeurlingReport b = beurling_check(EntireFunction::exp(), 2.0, 5.0, std::exp(3.0));
  EXPECT_TRUE(b.trivial);
  EXPECT_TRUE(b.confirmed);
  EXPECT_LE(b.rhs, 0.0);
}

TEST(Beurling, LacunarySpanningZero) {
  BeurlingReport b = beurling_check(EntireFunction::lacunary5(), 20.0, 30.0, 0.5);
  EXPECT_GT(b.log_measure, 0.0);
  EXPECT_GE(b.components, 1u);
  EXPECT_TRUE(b.confirmed);
}

TEST(Beurling, RandomAdmissibleConfigurations) {
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<EntireFunction> fs{EntireFunction::exp(), EntireFunction::lacunary5(),
                                 EntireFunction::exp(0.5)};
  for (int i = 0; i < 50; ++i) {
    const EntireFunction& f = fs[i % fs.size()];
    double r1 = 0.5 + 40.0 * u(rng);
    double r2 = r1 * (1.1 + 4.0 * u(rng));
    double log_m1 = f.max_modulus(r1).log_value;
    // 0 < mu < M(r1), log-uniform below M(r1).
    double log_mu = log_m1 - 0.01 - (std::abs(log_m1) + 10.0) * u(rng);
    BeurlingReport b = beurling_check(f, r1, r2, std::exp(log_mu));
    EXPECT_TRUE(b.confirmed) << f.name() << " r1=" << r1 << " r2=" << r2 << " log mu=" << log_mu;
    EXPECT_FALSE(b.trivial);
  }
}

TEST(Beurling, RejectsMuAboveMOfR2) {
  EXPECT_THROW(beurling_check(EntireFunction::exp(), 1.0, 2.0, 100.0), PreconditionError);
}

TEST(Fr, ThresholdAndExpPoint) {
  EXPECT_NEAR(fr_threshold(2.0, 0.2, 0.8), 3.374, 1e-3);
  auto f = EntireFunction::exp();
  EXPECT_NEAR(fr_log_measure(f, 10.0, 2.0, 0.2), std::log(10.0), 1e-9);
  auto v = check_Fr_criterion(f, 2.0, 0.2, 0.8, grid(10.0, 10.0, 1, false, "r"));
  EXPECT_TRUE(violated(v));
}

TEST(Cascade, Constants) {
  CascadeConstants c = cascade_constants(1e6, 2.0);
  EXPECT_NEAR(c.a, 1.0 - std::sqrt(2.0) / std::numbers::pi, 1e-12);
  EXPECT_NEAR(c.a, 0.5498, 1e-4);
  EXPECT_NEAR(c.delta, 0.2007, 1e-4);
  EXPECT_NEAR(c.lambda, 25.04, 0.01);
  EXPECT_EQ(c.n, 4);
  EXPECT_THROW(cascade_constants(100.0, 2.0), PreconditionError);
}

TEST(Cascade, ExpSatisfiesConclusion) {
  CascadeCheck chk = cascade_check(EntireFunction::exp(), 1e6, 2.0);
  EXPECT_TRUE(chk.holds);
  EXPECT_GT(chk.lhs, chk.rhs);
}

TEST(Doubling, Stats) {
  std::vector<double> r;
  for (int i = 0; i < 64; ++i) r.push_back(2.0 * std::pow(500.0, i / 63.0));
  DoublingStats e = doubling_stats(EntireFunction::exp(), r);
  EXPECT_NEAR(e.inf_ratio, 2.0, 1e-12);
  EXPECT_NEAR(e.sup_ratio, 2.0, 1e-12);
  std::vector<double> r2;
  for (int i = 0; i < 128; ++i) r2.push_back(10.0 * std::pow(1e5, i / 127.0));
  DoublingStats l = doubling_stats(EntireFunction::lacunary5(), r2);
  EXPECT_LT(l.sup_ratio, 1.2);
  EXPECT_GE(l.inf_ratio, 1.0);
}
