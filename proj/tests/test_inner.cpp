#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "delegation/inner.hpp"
#include "delegation/reference_cases.hpp"

using namespace delegation;

namespace {

const Scenario& ex1() {
  static const Scenario s = reference_ex1().scenario;
  return s;
}

const Scenario& ex2() {
  static const Scenario s = reference_ex2().scenario;
  return s;
}

}  // namespace

TEST(Inner, PoolingRowManagesAtPrior) {
  const InnerSolution sol = solve_inner(ex1().with_k_v(0.90), 0.5);
  EXPECT_NEAR(sol.q_star, 0.5, 1e-12);
  EXPECT_TRUE(sol.management_active);
  EXPECT_EQ(sol.regime, InnerRegime::ConflictMgmt);
  EXPECT_NEAR(sol.phi, 0.448, 1e-12);
}

TEST(Inner, ProhibitiveCostStopsManagement) {
  const InnerSolution sol = solve_inner(ex1().with_k_v(4.05), 0.5);
  EXPECT_DOUBLE_EQ(sol.q_star, 0.0);
  EXPECT_FALSE(sol.management_active);
  EXPECT_EQ(sol.regime, InnerRegime::ConflictNoMgmt);
  EXPECT_NEAR(sol.phi, 0.30, 1e-12);
  const Scenario huge = ex1().with_k_v(1e6);
  for (double p : {0.3, 0.45, 0.6, 0.69}) EXPECT_NEAR(solve_inner(huge, p).phi, 0.2 + 0.2 * p, 1e-12);
}

TEST(Inner, SmoothRuleMatchesPublishedIntensity) {
  const InnerSolution sol = solve_inner(ex2().with_k_v(0.40), 0.4115);
  EXPECT_NEAR(sol.q_star, 0.1543, 5e-4);
  EXPECT_NEAR(sol.q_star, 0.3 * 0.4115 / 0.8, 1e-12);
  const InnerSolution free = solve_inner(ex2().with_k_v(0.0), 0.5);
  EXPECT_DOUBLE_EQ(free.q_star, 1.0);
}

TEST(Inner, OutsideConflictRegion) {
  const InnerSolution lo = solve_inner(ex1(), 0.0);
  EXPECT_DOUBLE_EQ(lo.q_star, 0.0);
  EXPECT_NEAR(lo.phi, 0.2, 1e-15);
  EXPECT_EQ(lo.regime, InnerRegime::BelowConflict);
  const InnerSolution hi = solve_inner(ex1(), 0.9);
  EXPECT_NEAR(hi.phi, 0.5 + 0.4 * 0.9, 1e-15);
  EXPECT_EQ(hi.regime, InnerRegime::AboveConflict);
  EXPECT_THROW(solve_inner(ex1(), -0.01), std::domain_error);
}

TEST(Inner, FreeManagementReachesActG) {
  const Scenario s = ex1().with_k_v(0.0);
  EXPECT_NEAR(solve_inner(s, 0.5).phi, 0.70, 1e-12);
  const std::vector<double> grid{0.5};
  EXPECT_NEAR(phi_curve(s, grid).front(), 0.70, 1e-12);
}

TEST(Inner, UpperContactValue) {
  const double p = 0.5886;
  const double d = 0.3 + 0.2 * p;
  const double q = (0.44 - d) / 0.08;
  const double expected = 0.2 + 0.2 * p + (d - 2.0 * (0.03 + q * q));
  const InnerSolution sol = solve_inner(ex1(), p);
  EXPECT_NEAR(sol.q_star, 0.2785, 1e-4);
  EXPECT_NEAR(sol.phi, expected, 1e-12);
}

TEST(Inner, BreakEvenCost) {
  EXPECT_NEAR(break_even_cost(ex1(), 0.5), 0.40 / 0.28, 1e-12);
  EXPECT_NEAR(break_even_cost(ex2(), 0.5), 0.60, 1e-12);
  EXPECT_THROW(break_even_cost(ex1(), 0.3), std::domain_error);
  EXPECT_THROW(break_even_cost(ex1(), 0.7), std::domain_error);
  // Quadratic cost: grows without bound toward pi_H.
  double prev = 0.0;
  for (double p : {0.6, 0.69, 0.699, 0.6999}) {
    const double k = break_even_cost(ex2(), p);
    EXPECT_GT(k, prev);
    prev = k;
  }
  EXPECT_GT(prev, 1e4);
}

TEST(Inner, BreakEvenNondecreasingOnGrid) {
  for (const Scenario* s : {&ex1(), &ex2()}) {
    double prev = -1.0;
    for (int i = 1; i < 400; ++i) {
      const double p = 0.3 + 0.4 * i / 400.0;
      const double k = break_even_cost(*s, p);
      EXPECT_GE(k, prev) << p;
      prev = k;
    }
  }
}

TEST(Inner, CutoffPosterior) {
  const auto p = cutoff_posterior(ex1(), 0.40 / 0.28);
  ASSERT_TRUE(p.has_value());
  EXPECT_NEAR(*p, 0.5, 1e-8);
  EXPECT_FALSE(cutoff_posterior(ex1(), 15.0).has_value());
  for (double k : {0.1, 1.0, 10.0, 1e3}) {
    const auto q = cutoff_posterior(ex2(), k);
    ASSERT_TRUE(q.has_value());
    EXPECT_LT(*q, ex2().pi_high());
  }
  // Cheap management already pays above pi_L.
  const auto cheap = cutoff_posterior(ex1(), 0.1);
  ASSERT_TRUE(cheap.has_value());
  EXPECT_DOUBLE_EQ(*cheap, ex1().pi_low());
}

TEST(Inner, CutoffPosteriorMonotone) {
  double prev = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const double k = 14.6 * i / 100.0;
    const auto p = cutoff_posterior(ex1(), k);
    ASSERT_TRUE(p.has_value()) << k;
    EXPECT_GE(*p, prev - 1e-12);
    prev = *p;
  }
}

TEST(Inner, CutoffInvertsBreakEven) {
  for (double p : {0.35, 0.5, 0.65}) {
    const double k = break_even_cost(ex1(), p);
    const auto back = cutoff_posterior(ex1(), k);
    ASSERT_TRUE(back.has_value());
    EXPECT_NEAR(*back, p, 1e-8);
  }
}
