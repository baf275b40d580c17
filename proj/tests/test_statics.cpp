#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "delegation/envelope.hpp"
#include "delegation/reference_cases.hpp"
#include "delegation/statics.hpp"

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

Scenario coarse(const Scenario& s) { return s.with_grid(GridSettings{2001, false}); }

Scenario upper_prior(double k_p) {
  const ActPair acts(0.4, 0.2, 0.9, 0.5);
  const TastePair t = TastePair::from_cutoffs(acts, 0.3, 0.7);
  return {acts, t, ManagementCost::fixed_plus_quadratic(0.03, 2.0), InformationCost(2, k_p), 0.85,
          InnerMode::BangBang, GridSettings{2001, false}};
}

}  // namespace

TEST(Statics, SweepMatchesSolvePoint) {
  const std::vector<double> ks{2.0};
  const auto rows = sweep_kv(ex1(), ks);
  ASSERT_EQ(rows.size(), 1u);
  const SolveRow one = solve_point(ex1().with_k_v(2.0));
  EXPECT_DOUBLE_EQ(rows[0].value, one.value);
  EXPECT_DOUBLE_EQ(rows[0].policy.p_plus, one.policy.p_plus);
  EXPECT_THROW(sweep_kv(ex1(), std::vector<double>{}), std::invalid_argument);
  EXPECT_THROW(sweep_kv(ex1(), std::vector<double>{-1.0}), std::invalid_argument);
}

TEST(Statics, OnThreshold) {
  const KvOnResult on = find_k_v_on(ex1(), KvRange{0.0, 14.0});
  ASSERT_TRUE(on.value.has_value());
  EXPECT_NEAR(*on.value, 0.9223, 0.02);
  EXPECT_FALSE(on.informative_at_start);
  EXPECT_FALSE(find_k_v_on(ex1(), KvRange{0.0, 0.5}).value.has_value());
}

TEST(Statics, OffThreshold) {
  const auto off = find_k_v_off(ex1(), 0.9223, 14.0);
  ASSERT_TRUE(off.has_value());
  EXPECT_NEAR(*off, 4.0304, 0.02);
  const KvOnResult on2 = find_k_v_on(ex2(), KvRange{0.0, 1.0});
  ASSERT_TRUE(on2.value.has_value());
  EXPECT_FALSE(find_k_v_off(ex2(), *on2.value, 1.0).has_value());
}

TEST(Statics, NoManagementThreshold) {
  EXPECT_NEAR(find_k_v_nm(ex1()), 0.44 / 0.03, 1e-9);
  EXPECT_TRUE(std::isinf(find_k_v_nm(ex2())));
  EXPECT_NEAR(break_even_supremum_numeric(ex1(), 100001), 0.44 / 0.03, 1e-3);
  EXPECT_TRUE(std::isinf(break_even_supremum_numeric(ex2(), 100001)) ||
              break_even_supremum_numeric(ex2(), 100001) > 1e6);
}

TEST(Statics, ReportFlagsInformativeStart) {
  // Prior below pi_L: with cheap information, splitting up to pi_L pays even
  // when management is free.
  const ActPair acts(0.4, 0.2, 0.9, 0.5);
  const Scenario s(acts, TastePair::from_cutoffs(acts, 0.3, 0.7), ManagementCost::fixed_plus_quadratic(0.03, 2.0),
                   InformationCost(2, 0.5), 0.2, InnerMode::BangBang, GridSettings{2001, false});
  const ThresholdReport r = threshold_report(s, KvRange{0.0, 1.0});
  ASSERT_TRUE(r.k_v_on.has_value());
  EXPECT_DOUBLE_EQ(*r.k_v_on, 0.0);
  EXPECT_FALSE(r.warnings.empty());
}

TEST(Statics, GapBelowOnThresholdIsPooling) {
  const ThresholdReport r = threshold_report(coarse(ex1()));
  ASSERT_TRUE(r.k_v_on.has_value());
  for (const GapSample& g : r.gap_samples) {
    if (g.k_v < *r.k_v_on) EXPECT_FALSE(g.informative) << g.k_v;
  }
  EXPECT_DOUBLE_EQ(r.range.hi, 0.44 / 0.03);
}

TEST(Statics, DefaultRange) {
  EXPECT_DOUBLE_EQ(default_threshold_range(ex2()).hi, 1.0);
  EXPECT_NEAR(default_threshold_range(ex1()).hi, 0.44 / 0.03, 1e-12);
}

TEST(Statics, ChainBasics) {
  const Scenario s = coarse(ex1());
  const ChainSpec chain;
  EXPECT_NEAR(chain_value(s, chain, 0.0), net_payoff_g(s, 0.5), 1e-12);
  EXPECT_THROW(chain_value(s, chain, 1.5), std::domain_error);
  // lambda with p_plus = 0.5886 and p_minus = 0.4114
  const double lambda = 0.0886 / 0.5;
  EXPECT_NEAR(chain.p_minus(0.5, lambda), 0.4114, 1e-12);
  EXPECT_LE(chain_value(s, chain, lambda), evaluate_at_prior(s).cav_at_prior + 1e-12);
  EXPECT_THROW(validate_chain(ChainSpec{0.5, 0.5, 1.0, 11}, 0.5), std::invalid_argument);
  EXPECT_THROW(validate_chain(ChainSpec{0.0, 1.0, 1.5, 11}, 0.5), std::invalid_argument);
  EXPECT_THROW(validate_chain(ChainSpec{0.0, 1.0, 1.0, 1}, 0.5), std::invalid_argument);
}

TEST(Statics, ChainArgmax) {
  const Scenario s = coarse(ex1());
  const auto arg = chain_argmax(s, ChainSpec{}, 11.0, 2.0);
  ASSERT_FALSE(arg.empty());
  EXPECT_GT(arg.front(), 0.0);
  EXPECT_LT(arg.back(), 1.0);
  // Expensive information pins the chain at pooling.
  const auto pooled = chain_argmax(s, ChainSpec{}, 1e4, 2.0);
  ASSERT_EQ(pooled.size(), 1u);
  EXPECT_DOUBLE_EQ(pooled.front(), 0.0);
}

TEST(Statics, ChainFlatTopReturnsAllMaxima) {
  // k_P = 0 and a chain inside [pi_H, 1], where phi is affine: every lambda ties.
  const ChainSpec chain{0.7, 1.0, 1.0, 21};
  EXPECT_EQ(chain_argmax(upper_prior(0.0), chain).size(), 21u);
}

TEST(Statics, ChainValueNonincreasingForConcaveIntegrand) {
  // Free management makes phi = u(g) on [pi_L, 1].
  const Scenario s = coarse(ex1()).with_k_v(0.0);
  const ChainSpec chain{0.3, 1.0, 1.0, 51};
  double prev = INFINITY;
  for (std::size_t i = 0; i < chain.grid_size; ++i) {
    const double v = chain_value(s, chain, chain.lambda_at(i), 5.0);
    EXPECT_LE(v, prev + 1e-12);
    prev = v;
  }
}

TEST(Statics, DecreasingDifferences) {
  const Scenario s = coarse(ex1());
  const ChainSpec chain;
  const auto pairs = sample_lambda_pairs(chain, 1000, 7);
  const DdReport r = check_dd_in_kp(s, chain, 11.0, 22.0, pairs);
  EXPECT_TRUE(r.passed);
  EXPECT_EQ(r.checked, 1000u);
  const std::vector<LambdaPair> same{{0.3, 0.3}};
  EXPECT_TRUE(check_dd_in_kp(s, chain, 11.0, 22.0, same).passed);
  EXPECT_TRUE(check_dd_in_kp(s, chain, 11.0, 11.0, pairs).passed);
  EXPECT_THROW(check_dd_in_kp(s, chain, 22.0, 11.0, pairs), std::invalid_argument);
  const std::vector<LambdaPair> bad{{0.6, 0.3}};
  EXPECT_THROW(check_dd_in_kp(s, chain, 11.0, 22.0, bad), std::invalid_argument);
}

TEST(Statics, LambdaPairsAreOrderedAndDeterministic) {
  const auto a = sample_lambda_pairs(ChainSpec{}, 50, 3);
  const auto b = sample_lambda_pairs(ChainSpec{}, 50, 3);
  ASSERT_EQ(a.size(), 50u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_LE(a[i].lo, a[i].hi);
    EXPECT_DOUBLE_EQ(a[i].lo, b[i].lo);
  }
}

TEST(Statics, StrongSetOrder) {
  const Scenario s = coarse(ex1());
  EXPECT_TRUE(check_sso_in_kp(s, ChainSpec{}, 11.0, 22.0).passed);
  const SsoReport eq = check_sso_in_kp(s, ChainSpec{}, 11.0, 11.0);
  EXPECT_TRUE(eq.passed);
  EXPECT_DOUBLE_EQ(eq.low_cost_min, eq.high_cost_min);
  EXPECT_THROW(check_sso_in_kp(s, ChainSpec{}, 22.0, 11.0), std::invalid_argument);
}

TEST(Statics, ComplementarityDiagnosis) {
  const Scenario s = coarse(ex1());
  const ChainDiagnosis same = diagnose_complementarity(s, ChainSpec{}, 2.0, 2.0);
  EXPECT_TRUE(same.degenerate);
  EXPECT_EQ(same.classification, Complementarity::Complements);
  for (const DPoint& d : same.curve) EXPECT_DOUBLE_EQ(d.d, 0.0);

  const ChainDiagnosis diag = diagnose_complementarity(s, ChainSpec{}, 1.0, 3.0);
  EXPECT_EQ(diag.curve.size(), ChainSpec{}.grid_size);
  EXPECT_FALSE(diag.degenerate);
  EXPECT_THROW(diagnose_complementarity(s, ChainSpec{}, 3.0, 1.0), std::invalid_argument);
}

TEST(Statics, ChainOutsideConflictHasZeroD) {
  const ChainDiagnosis d = diagnose_complementarity(upper_prior(11.0), ChainSpec{0.7, 1.0, 1.0, 51}, 1.0, 3.0);
  for (const DPoint& pt : d.curve) EXPECT_DOUBLE_EQ(pt.d, 0.0);
  EXPECT_TRUE(d.degenerate);
}
