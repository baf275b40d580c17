#include "delegation/inner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

namespace delegation {

namespace {

constexpr double kEndpointInset = 1e-12;
constexpr int kMaxBisections = 200;

InnerSolution bang_bang(const Scenario& s, double p) {
  const auto& acts = s.acts();
  const double base = acts.u_f()(p);
  if (p < s.pi_low()) return {0.0, base, false, InnerRegime::BelowConflict};
  if (p >= s.pi_high()) return {0.0, acts.u_g()(p), false, InnerRegime::AboveConflict};

  const double qm = q_min(s, p);
  // Rounding right below pi_H can already clip q_min to zero: v_H picks g.
  if (qm <= 0.0) return {0.0, base + acts.gain()(p), false, InnerRegime::ConflictNoMgmt};
  const double net = acts.gain()(p) - s.mgmt()(qm);
  if (net > 0.0) return {qm, base + net, true, InnerRegime::ConflictMgmt};
  return {0.0, base, false, InnerRegime::ConflictNoMgmt};
}

InnerSolution smooth_linear(const Scenario& s, double p) {
  if (!(p > s.pi_low() && p < s.pi_high())) return bang_bang(s, p);
  const double gain = s.acts().gain()(p);
  const double k = s.k_v();
  const double q = k > 0.0 ? std::clamp(gain / (2.0 * k), 0.0, 1.0) : 1.0;
  const double phi = s.acts().u_f()(p) + q * gain - k * q * q;
  const bool active = q > 0.0;
  return {q, phi, active, active ? InnerRegime::ConflictMgmt : InnerRegime::ConflictNoMgmt};
}

}  // namespace

InnerSolution solve_inner(const Scenario& s, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error(fmt::format("belief {} outside [0,1]", p));
  return s.inner_mode() == InnerMode::BangBang ? bang_bang(s, p) : smooth_linear(s, p);
}

std::vector<double> phi_curve(const Scenario& s, std::span<const double> grid) {
  std::vector<double> out;
  out.reserve(grid.size());
  for (double p : grid) out.push_back(solve_inner(s, p).phi);
  return out;
}

double break_even_cost(const Scenario& s, double p) {
  if (!(p > s.pi_low() && p < s.pi_high())) {
    throw std::domain_error(
        fmt::format("break-even cost needs p in ({}, {}), got {}", s.pi_low(), s.pi_high(), p));
  }
  const double c = s.mgmt().shape(q_min(s, p));
  if (c <= 0.0) return std::numeric_limits<double>::infinity();
  return s.acts().gain()(p) / c;
}

std::optional<double> cutoff_posterior(const Scenario& s, double k_v) {
  if (!(k_v >= 0.0)) throw std::domain_error(fmt::format("k_V = {} must be nonnegative", k_v));
  double lo = s.pi_low() + kEndpointInset;
  double hi = s.pi_high() - kEndpointInset;
  if (k_v <= break_even_cost(s, lo)) return s.pi_low();
  if (k_v > break_even_cost(s, hi)) return std::nullopt;

  // Invariant: k_v > kbar(lo), k_v <= kbar(hi); kbar is increasing.
  for (int i = 0; i < kMaxBisections && hi - lo >= s.tolerances().root_tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (k_v <= break_even_cost(s, mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace delegation
