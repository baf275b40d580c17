#pragma once

#include <cstddef>
#include <random>

#include "delegation/model.hpp"
#include "delegation/statics.hpp"

namespace delegation {

/// Best policy found by an exhaustive scan.
struct OracleWitness {
  double p_minus = 0.0;
  double p_plus = 0.0;
  double alpha = 1.0;
  double q = 0.0;
  double lambda = 0.0;
};

struct OracleVerdict {
  double oracle_value = 0.0;
  double solver_value = 0.0;
  double abs_gap = 0.0;
  /// Allowance for one oracle grid cell.
  double tolerance = 0.0;
  OracleWitness witness;
  /// solver_value >= oracle_value - tolerance
  bool pass = false;
  /// Only meaningful for brute_force_inner: the solver's q* reproduces its phi.
  bool attained = true;
};

/// Exhaustive scan over all pairs p- <= p0 <= p+ of a uniform
/// `resolution`-point grid (plus p0) and pooling, compared against
/// evaluate_at_prior. Throws std::invalid_argument for resolution < 101.
OracleVerdict brute_force_two_point(const Scenario& s, std::size_t resolution = 2001);

/// Max of Psi(p, .) over a uniform q grid against solve_inner(p).phi, with a
/// fixed 1e-9 tolerance. `attained` checks |Psi(p, q*) - phi| <= 1e-6, which
/// holds for BangBang mode only. Throws std::invalid_argument for resolution < 101.
OracleVerdict brute_force_inner(const Scenario& s, double p, std::size_t resolution = 10001);

/// Rescan of the chain at 10x the chain grid resolution against the best
/// value over chain_argmax.
OracleVerdict brute_force_chain(const Scenario& s, const ChainSpec& chain);

struct RandomScenarioSettings {
  std::size_t grid_points = 10001;
  double k_v_max = 5.0;
  double k_p_max = 20.0;
};

/// Draws a valid BangBang scenario.
Scenario random_scenario(std::mt19937_64& rng, const RandomScenarioSettings& settings = {});

}  // namespace delegation
