#pragma once

#include <optional>
#include <span>
#include <vector>

#include "delegation/model.hpp"

namespace delegation {

enum class InnerRegime { BelowConflict, ConflictNoMgmt, ConflictMgmt, AboveConflict };

/// Optimal management at a single posterior.
struct InnerSolution {
  double q_star = 0.0;
  double phi = 0.0;
  bool management_active = false;
  InnerRegime regime = InnerRegime::BelowConflict;
};

/// Posterior-by-posterior management problem at belief p with the scenario's k_V.
///
/// BangBang: outside [pi_L, pi_H) nothing is managed. Inside, q* = q_min(p)
/// when Delta_u(p) > k_V C(q_min(p)) and q* = 0 otherwise (indifference goes
/// to no management), so phi(p) = u(f).p + max{0, Delta_u(p) - k_V C(q_min(p))}.
///
/// SmoothLinear: on the open interval (pi_L, pi_H), q* = min{1, Delta_u/(2 k_V)}
/// and phi = u(f).p + q* Delta_u - k_V q*^2; k_V = 0 gives q* = 1. Elsewhere
/// as BangBang.
///
/// Throws std::domain_error for p outside [0,1].
InnerSolution solve_inner(const Scenario& s, double p);

/// solve_inner(s, p).phi for every p in grid.
std::vector<double> phi_curve(const Scenario& s, std::span<const double> grid);

/// Delta_u(p) / C(q_min(p)) on the open conflict region; +infinity when
/// C(q_min(p)) = 0. Throws std::domain_error outside (pi_L, pi_H).
double break_even_cost(const Scenario& s, double p);

/// Lowest belief at which flipping is still worth paying for at cost scale k_v.
/// Returns pi_L when management pays right above pi_L and nullopt when it
/// never pays.
std::optional<double> cutoff_posterior(const Scenario& s, double k_v);

}  // namespace delegation
