#include "delegation/statics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <fmt/format.h>

#include "delegation/envelope.hpp"
#include "delegation/inner.hpp"

namespace delegation {

namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();
constexpr double kDdTolerance = 1e-10;
constexpr double kArgmaxTolerance = 1e-10;
constexpr double kMonotoneTolerance = 1e-10;

bool informative_at(const Scenario& s, double k_v) { return !evaluate_at_prior(s, k_v).pooling; }

double scan_point(KvRange range, std::size_t i, std::size_t n) {
  if (n == 1) return range.lo;
  return range.lo + (range.hi - range.lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

// Bisection on a boolean predicate with pred(lo) != pred(hi); returns the midpoint of the final bracket.
template <typename Pred>
double bisect_switch(double lo, double hi, double tol, Pred&& at_hi_side) {
  for (int i = 0; i < 200 && hi - lo > tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (at_hi_side(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::vector<SolveRow> sweep_kv(const Scenario& s, std::span<const double> k_values) {
  if (k_values.empty()) throw std::invalid_argument("k_V list is empty");
  std::vector<SolveRow> rows;
  rows.reserve(k_values.size());
  for (double k : k_values) {
    if (!(k >= 0.0)) throw std::invalid_argument(fmt::format("k_V = {} must be nonnegative", k));
    rows.push_back(solve_point(s.with_k_v(k)));
  }
  return rows;
}

std::vector<GapSample> scan_gap(const Scenario& s, KvRange range, std::size_t points) {
  std::vector<GapSample> out;
  out.reserve(points);
  for (std::size_t i = 0; i < points; ++i) {
    const double k = scan_point(range, i, points);
    const EnvelopeResult env = evaluate_at_prior(s, k);
    out.push_back({k, env.gap, !env.pooling});
  }
  return out;
}

KvOnResult find_k_v_on(const Scenario& s, KvRange range, double tol, std::size_t coarse_points) {
  if (!(range.lo >= 0.0 && range.hi >= range.lo)) throw std::invalid_argument("invalid k_V search range");
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  coarse_points = std::max<std::size_t>(coarse_points, 2);

  if (informative_at(s, range.lo)) return {range.lo, true};
  double prev = range.lo;
  for (std::size_t i = 1; i < coarse_points; ++i) {
    const double k = scan_point(range, i, coarse_points);
    if (informative_at(s, k)) {
      return {bisect_switch(prev, k, tol, [&](double m) { return informative_at(s, m); }), false};
    }
    prev = k;
  }
  return {};
}

std::optional<double> find_k_v_off(const Scenario& s, double k_v_on, double range_hi, double tol,
                                   std::size_t coarse_points) {
  if (!(range_hi > k_v_on)) return std::nullopt;
  coarse_points = std::max<std::size_t>(coarse_points, 2);
  const KvRange range{k_v_on, range_hi};

  std::vector<bool> informative(coarse_points);
  for (std::size_t i = 0; i < coarse_points; ++i) informative[i] = informative_at(s, scan_point(range, i, coarse_points));

  const auto last = std::find(informative.rbegin(), informative.rend(), true);
  if (last == informative.rend()) return std::nullopt;
  const auto idx = static_cast<std::size_t>(informative.rend() - last) - 1;
  if (idx + 1 == coarse_points) return std::nullopt;
  return bisect_switch(scan_point(range, idx, coarse_points), scan_point(range, idx + 1, coarse_points), tol,
                       [&](double m) { return !informative_at(s, m); });
}

double find_k_v_nm(const Scenario& s) {
  const ManagementCost& m = s.mgmt();
  if (m.kind() == ManagementCostKind::FixedPlusQuadratic && m.epsilon() > 0.0) {
    // q_min -> 0 as p -> pi_H, so C(q_min) -> eps while Delta_u stays increasing.
    return s.acts().gain()(s.pi_high()) / m.epsilon();
  }
  return kInfinity;
}

double break_even_supremum_numeric(const Scenario& s, std::size_t points) {
  if (points < 2) throw std::invalid_argument("need at least two samples");
  const double lo = s.pi_low();
  const double hi = s.pi_high();
  const double h = (hi - lo) / static_cast<double>(points + 1);
  double sup = 0.0;
  for (std::size_t i = 1; i <= points; ++i) {
    const double p = lo + h * static_cast<double>(i);
    if (!(p > lo && p < hi)) continue;
    sup = std::max(sup, break_even_cost(s, p));
  }
  return sup;
}

KvRange default_threshold_range(const Scenario& s) {
  const double nm = find_k_v_nm(s);
  return {0.0, std::isfinite(nm) ? nm : 1.0};
}

ThresholdReport threshold_report(const Scenario& s, std::optional<KvRange> range, ScanSettings settings) {
  ThresholdReport report;
  report.range = range.value_or(default_threshold_range(s));
  report.k_v_nm = find_k_v_nm(s);
  report.gap_samples = scan_gap(s, report.range, settings.coarse_points);

  const KvOnResult on = find_k_v_on(s, report.range, settings.tol, settings.coarse_points);
  report.k_v_on = on.value;
  if (on.informative_at_start) {
    report.warnings.push_back(
        fmt::format("pooling is not optimal at k_V = {}; information-on threshold is the range start",
                    report.range.lo));
  }
  if (report.k_v_on) {
    report.k_v_off = find_k_v_off(s, *report.k_v_on, report.range.hi, settings.tol, settings.coarse_points);
  } else {
    report.warnings.emplace_back("no informative k_V found in range; off threshold undefined");
  }
  if (s.inner_mode() == InnerMode::SmoothLinear) {
    report.warnings.emplace_back("smooth inner mode: management rule is not the bang-bang optimum");
  }
  return report;
}

double ChainSpec::lambda_at(std::size_t i) const {
  return lambda_max * static_cast<double>(i) / static_cast<double>(grid_size - 1);
}

double ChainSpec::lambda_step() const { return lambda_max / static_cast<double>(grid_size - 1); }

void validate_chain(const ChainSpec& chain, double prior) {
  if (!(chain.a >= 0.0 && chain.a < prior)) {
    throw std::invalid_argument(fmt::format("chain endpoint a = {} must lie in [0, p0 = {})", chain.a, prior));
  }
  if (!(chain.b > prior && chain.b <= 1.0)) {
    throw std::invalid_argument(fmt::format("chain endpoint b = {} must lie in (p0 = {}, 1]", chain.b, prior));
  }
  if (!(chain.lambda_max >= 0.0 && chain.lambda_max <= 1.0)) {
    throw std::invalid_argument(fmt::format("lambda_max = {} must lie in [0,1]", chain.lambda_max));
  }
  if (chain.grid_size < 2) throw std::invalid_argument("lambda grid needs at least two points");
}

double chain_value(const Scenario& s, const ChainSpec& chain, double lambda, std::optional<double> k_p,
                   std::optional<double> k_v) {
  validate_chain(chain, s.prior());
  if (!(lambda >= 0.0 && lambda <= chain.lambda_max)) {
    throw std::domain_error(fmt::format("lambda = {} outside [0, {}]", lambda, chain.lambda_max));
  }
  const Scenario sc = k_v ? s.with_k_v(*k_v) : s;
  const double kp = k_p.value_or(s.k_p());
  const double p0 = s.prior();
  const double lo = chain.p_minus(p0, lambda);
  const double hi = chain.p_plus(p0, lambda);
  const double alpha = chain.weight_low(p0);
  const double v_lo = solve_inner(sc, lo).phi - kp * sc.kappa(lo);
  const double v_hi = solve_inner(sc, hi).phi - kp * sc.kappa(hi);
  return alpha * v_lo + (1.0 - alpha) * v_hi;
}

std::vector<double> chain_argmax(const Scenario& s, const ChainSpec& chain, std::optional<double> k_p,
                                 std::optional<double> k_v) {
  validate_chain(chain, s.prior());
  std::vector<double> values(chain.grid_size);
  for (std::size_t i = 0; i < chain.grid_size; ++i) values[i] = chain_value(s, chain, chain.lambda_at(i), k_p, k_v);
  const double best = *std::max_element(values.begin(), values.end());
  const double cut = best - kArgmaxTolerance * (1.0 + std::abs(best));
  std::vector<double> out;
  for (std::size_t i = 0; i < chain.grid_size; ++i) {
    if (values[i] >= cut) out.push_back(chain.lambda_at(i));
  }
  return out;
}

std::vector<LambdaPair> sample_lambda_pairs(const ChainSpec& chain, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, chain.lambda_max);
  std::vector<LambdaPair> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double x = u(rng);
    const double y = u(rng);
    out.push_back({std::min(x, y), std::max(x, y)});
  }
  return out;
}

DdReport check_dd_in_kp(const Scenario& s, const ChainSpec& chain, double k_p_low, double k_p_high,
                        std::span<const LambdaPair> pairs) {
  if (k_p_high < k_p_low) throw std::invalid_argument("check_dd_in_kp needs k_P <= k_P'");
  DdReport report;
  for (const LambdaPair& pr : pairs) {
    if (pr.hi < pr.lo) throw std::invalid_argument("lambda pair must satisfy lo <= hi");
    const double diff_high = chain_value(s, chain, pr.hi, k_p_high) - chain_value(s, chain, pr.lo, k_p_high);
    const double diff_low = chain_value(s, chain, pr.hi, k_p_low) - chain_value(s, chain, pr.lo, k_p_low);
    ++report.checked;
    if (diff_high > diff_low + kDdTolerance) {
      report.passed = false;
      report.violations.push_back({pr, diff_high, diff_low});
    }
  }
  return report;
}

SsoReport check_sso_in_kp(const Scenario& s, const ChainSpec& chain, double k_p_low, double k_p_high) {
  if (k_p_high < k_p_low) throw std::invalid_argument("check_sso_in_kp needs k_P <= k_P'");
  const std::vector<double> low = chain_argmax(s, chain, k_p_low);
  const std::vector<double> high = chain_argmax(s, chain, k_p_high);
  SsoReport r;
  r.low_cost_min = low.front();
  r.low_cost_max = low.back();
  r.high_cost_min = high.front();
  r.high_cost_max = high.back();
  const double slack = chain.lambda_step() + 1e-12;
  r.passed = r.low_cost_min >= r.high_cost_min - slack && r.low_cost_max >= r.high_cost_max - slack;
  return r;
}

ChainDiagnosis diagnose_complementarity(const Scenario& s, const ChainSpec& chain, double k_v_low, double k_v_high) {
  if (k_v_high < k_v_low) throw std::invalid_argument("diagnose_complementarity needs k_V_low <= k_V_high");
  validate_chain(chain, s.prior());
  const Scenario cheap = s.with_k_v(k_v_low);
  const Scenario dear = s.with_k_v(k_v_high);
  const double p0 = s.prior();
  const double alpha = chain.weight_low(p0);

  ChainDiagnosis out;
  out.k_v_low = k_v_low;
  out.k_v_high = k_v_high;
  out.curve.reserve(chain.grid_size);
  for (std::size_t i = 0; i < chain.grid_size; ++i) {
    const double lambda = chain.lambda_at(i);
    const double lo = chain.p_minus(p0, lambda);
    const double hi = chain.p_plus(p0, lambda);
    const double d_lo = solve_inner(cheap, lo).phi - solve_inner(dear, lo).phi;
    const double d_hi = solve_inner(cheap, hi).phi - solve_inner(dear, hi).phi;
    out.curve.push_back({lambda, lo, hi, alpha * d_lo + (1.0 - alpha) * d_hi});
  }

  bool rises = false;
  bool falls = false;
  for (std::size_t i = 1; i < out.curve.size(); ++i) {
    const double step = out.curve[i].d - out.curve[i - 1].d;
    if (step > kMonotoneTolerance) rises = true;
    if (step < -kMonotoneTolerance) falls = true;
  }
  if (rises && falls) {
    out.classification = Complementarity::Mixed;
  } else if (falls) {
    out.classification = Complementarity::Substitutes;
  } else {
    out.classification = Complementarity::Complements;
    out.degenerate = !rises;
  }
  return out;
}

const char* to_string(Complementarity c) {
  switch (c) {
    case Complementarity::Complements: return "complements";
    case Complementarity::Substitutes: return "substitutes";
    case Complementarity::Mixed: return "mixed";
  }
  return "unknown";
}

}  // namespace delegation
