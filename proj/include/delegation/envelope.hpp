#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "delegation/model.hpp"

namespace delegation {

struct Sample {
  double belief = 0.0;
  double value = 0.0;
};

/// Sorted belief grid on [0,1] with the nodes that were forced into it.
struct PosteriorGrid {
  std::vector<double> points;
  std::vector<double> forced_nodes;
};

/// Upper concave envelope of a sampled function, stored by its vertices.
class ConcaveHull {
 public:
  ConcaveHull() = default;
  explicit ConcaveHull(std::vector<Sample> vertices) : vertices_(std::move(vertices)) {}

  [[nodiscard]] const std::vector<Sample>& vertices() const { return vertices_; }
  /// Linear interpolation between vertices. Throws std::domain_error outside the hull's span.
  [[nodiscard]] double value_at(double p) const;
  /// Index i such that vertices[i].belief <= p <= vertices[i+1].belief, or the
  /// vertex index itself when p is a vertex (second = first in that case).
  [[nodiscard]] std::pair<std::size_t, std::size_t> bracket(double p) const;

 private:
  std::vector<Sample> vertices_;
};

struct EnvelopeResult {
  ConcaveHull hull;
  double cav_at_prior = 0.0;
  double g_at_prior = 0.0;
  double p_minus = 0.0;
  double p_plus = 0.0;
  /// cav g(p0) - g(p0)
  double gap = 0.0;
  bool pooling = true;
  std::size_t sample_count = 0;
};

/// g(p) = phi(p) - k_P kappa(p) under the scenario's k_V and k_P.
double net_payoff_g(const Scenario& s, double p);

/// Uniform grid of `points` beliefs merged with `nodes`; duplicates within
/// 1e-12 collapse onto the node. Throws std::invalid_argument for fewer than
/// GridSettings::kMinPoints points.
PosteriorGrid grid_with_nodes(std::size_t points, std::span<const double> nodes);

/// Solver grid for the scenario at cost scale k_v: forced nodes 0, 1, p0,
/// pi_L, pi_H, pi_H - step and the cutoff posterior when defined.
PosteriorGrid build_grid(const Scenario& s, double k_v);

/// Monotone-chain upper hull. Samples must be strictly increasing in belief
/// (std::invalid_argument otherwise) and number at least two.
ConcaveHull concavify(std::span<const Sample> samples);

/// Concavifies g on the solver grid and reads off the value at the prior,
/// the supporting chord's contact pair and the gap. With refinement on, one
/// round of step/10 sampling is added in a window of 10 steps around each
/// contact point before re-hulling.
EnvelopeResult evaluate_at_prior(const Scenario& s, std::optional<double> k_v = std::nullopt);

/// Absolute pooling tolerance gap_tol * max(1, |g(p0)|).
double pooling_tolerance(const Scenario& s, double g_at_prior);

}  // namespace delegation
