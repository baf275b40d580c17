#include "delegation/outer.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <fmt/format.h>

#include "delegation/inner.hpp"

namespace delegation {

SignalPolicy SignalPolicy::pooling(double prior) { return {PolicyKind::Pooling, prior, prior, 1.0}; }

SignalPolicy SignalPolicy::two_point(double p_minus, double p_plus, double prior) {
  if (!(0.0 <= p_minus && p_minus <= prior && prior <= p_plus && p_plus <= 1.0 && p_minus < p_plus)) {
    throw std::invalid_argument(
        fmt::format("two-point policy needs 0 <= p- <= p0 <= p+ <= 1, p- < p+ (got {}, {}, {})", p_minus, prior,
                    p_plus));
  }
  return {PolicyKind::TwoPoint, p_minus, p_plus, (p_plus - prior) / (p_plus - p_minus)};
}

double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double mutual_information(const SignalPolicy& policy, double prior) {
  if (policy.kind == PolicyKind::Pooling) return 0.0;
  const double a = policy.alpha;
  return binary_entropy(prior) - (a * binary_entropy(policy.p_minus) + (1.0 - a) * binary_entropy(policy.p_plus));
}

namespace {

bool in_conflict(const InnerSolution& sol) {
  return sol.regime == InnerRegime::ConflictMgmt || sol.regime == InnerRegime::ConflictNoMgmt;
}

MgmtRegime classify(const InnerSolution& low, const InnerSolution& high) {
  const bool low_used = in_conflict(low) && low.management_active;
  const bool high_used = in_conflict(high) && high.management_active;
  if (low_used && high_used) return MgmtRegime::Both;
  if (high_used) return MgmtRegime::HighOnly;
  if (low_used) return MgmtRegime::LowOnly;
  if (in_conflict(low) || in_conflict(high)) return MgmtRegime::NoneUsed;
  return MgmtRegime::OutsideConflict;
}

}  // namespace

SolveRow solve_point(const Scenario& s) {
  const EnvelopeResult env = evaluate_at_prior(s);
  SolveRow row;
  row.k_v = s.k_v();
  row.k_p = s.k_p();
  row.value = env.cav_at_prior;
  row.gap = env.gap;
  if (env.pooling) {
    row.policy = SignalPolicy::pooling(s.prior());
    row.regime_info = InfoRegime::Pooling;
  } else {
    row.policy = SignalPolicy::two_point(env.p_minus, env.p_plus, s.prior());
    row.regime_info = InfoRegime::Informative;
  }
  row.disp = row.policy.dispersion();
  row.info_bits = mutual_information(row.policy, s.prior());

  const InnerSolution low = solve_inner(s, row.policy.p_minus);
  const InnerSolution high = solve_inner(s, row.policy.p_plus);
  row.q_minus = low.q_star;
  row.q_plus = high.q_star;
  row.regime_mgmt = classify(low, high);
  return row;
}

ReversedTiming reversed_timing_value(const Scenario& s, std::size_t q_grid_size) {
  if (q_grid_size < 2) throw std::invalid_argument("reversed timing needs at least two q grid points");
  const PosteriorGrid grid = build_grid(s, s.k_v());
  const double prior = s.prior();

  std::vector<double> kappa_cost(grid.points.size());
  for (std::size_t i = 0; i < grid.points.size(); ++i) kappa_cost[i] = s.k_p() * s.kappa(grid.points[i]);

  ReversedTiming best{-std::numeric_limits<double>::infinity(), 0.0};
  std::vector<Sample> samples(grid.points.size());
  for (std::size_t k = 0; k < q_grid_size; ++k) {
    const double q = static_cast<double>(k) / static_cast<double>(q_grid_size - 1);
    for (std::size_t i = 0; i < grid.points.size(); ++i) {
      const double p = grid.points[i];
      samples[i] = {p, agent_payoff_b(s, p, q) - kappa_cost[i]};
    }
    const double value = concavify(samples).value_at(prior) - s.mgmt()(q);
    if (value > best.value) best = {value, q};
  }
  return best;
}

TimingReport timing_report(const Scenario& s, std::size_t q_grid_size) {
  constexpr double kFloor = 1e-9;
  const SolveRow row = solve_point(s);
  const ReversedTiming rev = reversed_timing_value(s, q_grid_size);
  TimingReport out{row.value, rev.value, rev.q, row.value - rev.value};
  if (out.difference < -kFloor) {
    throw std::logic_error(fmt::format("reversed timing value {} exceeds baseline {} by {}", rev.value, row.value,
                                       -out.difference));
  }
  return out;
}

const char* to_string(PolicyKind kind) { return kind == PolicyKind::Pooling ? "pooling" : "two_point"; }

const char* to_string(InfoRegime regime) { return regime == InfoRegime::Pooling ? "pooling" : "informative"; }

const char* to_string(MgmtRegime regime) {
  switch (regime) {
    case MgmtRegime::Both: return "both";
    case MgmtRegime::HighOnly: return "high_only";
    case MgmtRegime::LowOnly: return "low_only";
    case MgmtRegime::NoneUsed: return "none_used";
    case MgmtRegime::OutsideConflict: return "outside_conflict";
  }
  return "unknown";
}

}  // namespace delegation
