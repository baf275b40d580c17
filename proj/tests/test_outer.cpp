#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <gtest/gtest.h>

#include "delegation/outer.hpp"
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

// Persuasion value without management: best split of p0 over a uniform grid.
double unmanaged_persuasion(const Scenario& s, int n) {
  auto g = [&](double p) {
    const double base = s.acts().u_f()(p);
    const double gain = p >= s.pi_high() ? s.acts().gain()(p) : 0.0;
    return base + gain - s.k_p() * s.kappa(p);
  };
  const double p0 = s.prior();
  double best = g(p0);
  for (int i = 0; i <= n; ++i) {
    const double lo = i / static_cast<double>(n);
    if (lo > p0) break;
    for (int j = n; j >= 0; --j) {
      const double hi = j / static_cast<double>(n);
      if (hi < p0) break;
      if (hi == lo) continue;
      const double a = (hi - p0) / (hi - lo);
      best = std::max(best, a * g(lo) + (1.0 - a) * g(hi));
    }
  }
  return best;
}

}  // namespace

TEST(Outer, BinaryEntropy) {
  EXPECT_DOUBLE_EQ(binary_entropy(0.5), 1.0);
  EXPECT_DOUBLE_EQ(binary_entropy(0.0), 0.0);
  EXPECT_DOUBLE_EQ(binary_entropy(1.0), 0.0);
  const double h = -0.3 * std::log2(0.3) - 0.7 * std::log2(0.7);
  EXPECT_NEAR(binary_entropy(0.3), h, 1e-15);
  EXPECT_NEAR(binary_entropy(0.3), 0.8812908992306927, 1e-15);
}

TEST(Outer, MutualInformation) {
  const SignalPolicy row = SignalPolicy::two_point(0.4529, 0.5886, 0.5);
  EXPECT_NEAR(row.alpha, 0.6529, 0.001);
  EXPECT_NEAR(mutual_information(row, 0.5), 0.0121, 0.0005);
  EXPECT_DOUBLE_EQ(mutual_information(SignalPolicy::pooling(0.5), 0.5), 0.0);
  EXPECT_NEAR(mutual_information(SignalPolicy::two_point(0.0, 1.0, 0.5), 0.5), 1.0, 1e-15);
}

TEST(Outer, SignalPolicyIsBayesPlausible) {
  const SignalPolicy p = SignalPolicy::two_point(0.2, 0.9, 0.4);
  EXPECT_NEAR(p.mean(), 0.4, 1e-15);
  EXPECT_NEAR(p.dispersion(), 0.7, 1e-15);
  EXPECT_THROW(SignalPolicy::two_point(0.5, 0.4, 0.45), std::invalid_argument);
  EXPECT_THROW(SignalPolicy::two_point(0.5, 0.6, 0.4), std::invalid_argument);
  EXPECT_THROW(SignalPolicy::two_point(0.4, 0.4, 0.4), std::invalid_argument);
}

TEST(Outer, SolveRowHighOnly) {
  const SolveRow r = solve_point(ex1().with_k_v(3.50));
  EXPECT_EQ(r.regime_info, InfoRegime::Informative);
  EXPECT_EQ(r.regime_mgmt, MgmtRegime::HighOnly);
  EXPECT_NEAR(r.policy.p_minus, 0.4905, 0.005);
  EXPECT_NEAR(r.policy.p_plus, 0.6329, 0.005);
  EXPECT_NEAR(r.policy.alpha, 0.9333, 0.01);
  EXPECT_NEAR(r.disp, 0.1424, 0.005);
  EXPECT_NEAR(r.info_bits, 0.0037, 0.002);
  EXPECT_NEAR(r.q_minus, 0.0, 0.005);
  EXPECT_NEAR(r.q_plus, 0.1677, 0.005);
  EXPECT_NEAR(r.policy.mean(), 0.5, 1e-12);
}

TEST(Outer, SolveRowPooling) {
  const SolveRow r = solve_point(ex1().with_k_v(4.05));
  EXPECT_EQ(r.regime_info, InfoRegime::Pooling);
  EXPECT_EQ(r.regime_mgmt, MgmtRegime::NoneUsed);
  EXPECT_DOUBLE_EQ(r.q_minus, 0.0);
  EXPECT_DOUBLE_EQ(r.info_bits, 0.0);
  const SolveRow both = solve_point(ex1().with_k_v(0.90));
  EXPECT_EQ(both.regime_mgmt, MgmtRegime::Both);
}

TEST(Outer, SolveRowSmoothDoublePeak) {
  const SolveRow r = solve_point(ex2().with_k_v(0.80));
  EXPECT_NEAR(r.policy.p_minus, 0.4065, 0.005);
  EXPECT_NEAR(r.policy.p_plus, 0.7000, 0.005);
  EXPECT_NEAR(r.policy.alpha, 0.6814, 0.01);
  EXPECT_NEAR(r.q_minus, 0.0762, 0.005);
  EXPECT_NEAR(r.q_plus, 0.0, 0.005);
  EXPECT_EQ(r.regime_mgmt, MgmtRegime::LowOnly);
}

TEST(Outer, ReversedTimingWithProhibitiveCost) {
  const Scenario s = ex1().with_k_v(1e6).with_grid(GridSettings{2001, false});
  const ReversedTiming rev = reversed_timing_value(s, 101);
  EXPECT_DOUBLE_EQ(rev.q, 0.0);
  EXPECT_NEAR(rev.value, unmanaged_persuasion(s, 2000), 1e-9);
  EXPECT_THROW(reversed_timing_value(s, 1), std::invalid_argument);
}

TEST(Outer, BaselineTimingDominates) {
  const TimingReport r2 = timing_report(ex1().with_k_v(2.0));
  EXPECT_GE(r2.difference, -1e-9);
  EXPECT_NEAR(r2.u_baseline, solve_point(ex1().with_k_v(2.0)).value, 1e-12);
  const TimingReport r35 = timing_report(ex1().with_k_v(3.5));
  EXPECT_GT(r35.difference, 1e-4);
  const TimingReport free = timing_report(ex1().with_k_v(0.0));
  EXPECT_NEAR(free.difference, 0.0, 1e-9);
}

TEST(Outer, EqualityWhenPoolingWithoutManagement) {
  const TimingReport r = timing_report(ex1().with_k_v(4.05));
  EXPECT_NEAR(r.difference, 0.0, 1e-9);
}

TEST(Outer, RegimeNames) {
  EXPECT_EQ(std::string(to_string(MgmtRegime::HighOnly)), "high_only");
  EXPECT_EQ(std::string(to_string(InfoRegime::Informative)), "informative");
  EXPECT_EQ(std::string(to_string(PolicyKind::TwoPoint)), "two_point");
}
