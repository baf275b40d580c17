#include "delegation/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <fmt/format.h>

#include "delegation/envelope.hpp"
#include "delegation/inner.hpp"

namespace delegation {

namespace {

constexpr double kInnerTolerance = 1e-9;
constexpr double kAttainTolerance = 1e-6;

// Largest |slope| of the sampled function over the cells touching index i.
double local_slope(const std::vector<double>& x, const std::vector<double>& y, std::size_t i) {
  double slope = 0.0;
  const std::size_t lo = i == 0 ? 0 : i - 1;
  const std::size_t hi = std::min(i + 1, x.size() - 1);
  for (std::size_t k = lo; k < hi; ++k) {
    const double h = x[k + 1] - x[k];
    if (h > 0.0) slope = std::max(slope, std::abs(y[k + 1] - y[k]) / h);
  }
  return slope;
}

}  // namespace

OracleVerdict brute_force_two_point(const Scenario& s, std::size_t resolution) {
  if (resolution < 101) throw std::invalid_argument("two-point oracle needs at least 101 grid points");
  const double p0 = s.prior();
  const double nodes[] = {p0};
  const std::vector<double> x = grid_with_nodes(resolution, nodes).points;
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) g[i] = net_payoff_g(s, x[i]);

  const auto prior_idx = static_cast<std::size_t>(std::lower_bound(x.begin(), x.end(), p0) - x.begin());
  double best = g[prior_idx];
  std::size_t best_lo = prior_idx;
  std::size_t best_hi = prior_idx;
  for (std::size_t i = 0; i < prior_idx; ++i) {
    for (std::size_t j = prior_idx + 1; j < x.size(); ++j) {
      const double alpha = (x[j] - p0) / (x[j] - x[i]);
      const double v = alpha * g[i] + (1.0 - alpha) * g[j];
      if (v > best) {
        best = v;
        best_lo = i;
        best_hi = j;
      }
    }
  }

  OracleVerdict out;
  out.oracle_value = best;
  out.witness.p_minus = x[best_lo];
  out.witness.p_plus = x[best_hi];
  out.witness.alpha = best_lo == best_hi ? 1.0 : (x[best_hi] - p0) / (x[best_hi] - x[best_lo]);
  const double cell = 1.0 / static_cast<double>(resolution - 1);
  out.tolerance = cell * std::max(local_slope(x, g, best_lo), local_slope(x, g, best_hi)) +
                  1e-12 * (1.0 + std::abs(best));
  out.solver_value = evaluate_at_prior(s).cav_at_prior;
  out.abs_gap = std::abs(out.solver_value - out.oracle_value);
  out.pass = out.solver_value >= out.oracle_value - out.tolerance;
  return out;
}

OracleVerdict brute_force_inner(const Scenario& s, double p, std::size_t resolution) {
  if (resolution < 101) throw std::invalid_argument("inner oracle needs at least 101 q grid points");
  double best = -std::numeric_limits<double>::infinity();
  double best_q = 0.0;
  for (std::size_t k = 0; k < resolution; ++k) {
    const double q = static_cast<double>(k) / static_cast<double>(resolution - 1);
    const double v = posterior_payoff_psi(s, p, q);
    if (v > best) {
      best = v;
      best_q = q;
    }
  }
  const InnerSolution sol = solve_inner(s, p);
  OracleVerdict out;
  out.oracle_value = best;
  out.solver_value = sol.phi;
  out.abs_gap = std::abs(sol.phi - best);
  out.tolerance = kInnerTolerance;
  out.witness.p_minus = p;
  out.witness.p_plus = p;
  out.witness.q = best_q;
  out.pass = sol.phi >= best - kInnerTolerance;
  out.attained = std::abs(posterior_payoff_psi(s, p, sol.q_star) - sol.phi) <= kAttainTolerance;
  return out;
}

OracleVerdict brute_force_chain(const Scenario& s, const ChainSpec& chain) {
  validate_chain(chain, s.prior());
  ChainSpec fine = chain;
  fine.grid_size = (chain.grid_size - 1) * 10 + 1;

  std::vector<double> lam(fine.grid_size);
  std::vector<double> val(fine.grid_size);
  for (std::size_t i = 0; i < fine.grid_size; ++i) {
    lam[i] = fine.lambda_at(i);
    val[i] = chain_value(s, fine, lam[i]);
  }
  const auto it = std::max_element(val.begin(), val.end());
  const auto best_idx = static_cast<std::size_t>(it - val.begin());

  // Steepest fine-grid slope within one coarse cell of the oracle's maximiser.
  const std::size_t lo = best_idx >= 10 ? best_idx - 10 : 0;
  const std::size_t hi = std::min(best_idx + 10, fine.grid_size - 1);
  double slope = 0.0;
  for (std::size_t k = lo; k < hi; ++k) {
    const double h = lam[k + 1] - lam[k];
    if (h > 0.0) slope = std::max(slope, std::abs(val[k + 1] - val[k]) / h);
  }

  double solver_best = -std::numeric_limits<double>::infinity();
  for (double l : chain_argmax(s, chain)) solver_best = std::max(solver_best, chain_value(s, chain, l));

  OracleVerdict out;
  out.oracle_value = *it;
  out.solver_value = solver_best;
  out.abs_gap = std::abs(solver_best - *it);
  out.tolerance = slope * chain.lambda_step() + 1e-12 * (1.0 + std::abs(*it));
  const double p0 = s.prior();
  out.witness.lambda = lam[best_idx];
  out.witness.p_minus = chain.p_minus(p0, lam[best_idx]);
  out.witness.p_plus = chain.p_plus(p0, lam[best_idx]);
  out.witness.alpha = chain.weight_low(p0);
  out.pass = solver_best >= *it - out.tolerance;
  return out;
}

Scenario random_scenario(std::mt19937_64& rng, const RandomScenarioSettings& settings) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto uniform = [&](double a, double b) { return a + (b - a) * u(rng); };

  for (;;) {
    const double f_low = uniform(0.0, 0.5);
    const double f_high = std::min(1.0, f_low + uniform(0.0, 0.4));
    const double g_low = std::min(1.0, f_low + uniform(0.0, 0.3));
    const double g_high = std::min(1.0, g_low + (f_high - f_low) + uniform(0.05, 0.5));
    const double pi_low = uniform(0.1, 0.5);
    const double pi_high = std::min(0.95, pi_low + uniform(0.1, 0.45));
    const double prior = uniform(0.2, 0.8);
    try {
      const ActPair acts(f_high, f_low, g_high, g_low);
      const TastePair tastes = TastePair::from_cutoffs(acts, pi_low, pi_high);
      const double k_v = uniform(0.0, settings.k_v_max);
      const ManagementCost mgmt = u(rng) < 0.5 ? ManagementCost::quadratic(k_v)
                                               : ManagementCost::fixed_plus_quadratic(uniform(0.0, 0.1), k_v);
      const InformationCost info(u(rng) < 0.5 ? 2 : 4, uniform(0.0, settings.k_p_max));
      GridSettings grid;
      grid.points = settings.grid_points;
      return Scenario(acts, tastes, mgmt, info, prior, InnerMode::BangBang, grid);
    } catch (const std::invalid_argument&) {
      // Rejected draw (degenerate acts or negative taste cost); redraw.
    }
  }
}

}  // namespace delegation
