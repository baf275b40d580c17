#include "delegation/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "delegation/inner.hpp"

namespace delegation {

namespace {

constexpr double kDedupResolution = 1e-12;
constexpr int kRefineFactor = 10;
constexpr int kRefineHalfWidth = 5;  // in coarse steps

struct Tagged {
  double belief;
  bool forced;
};

// Sorted, deduplicated; keeps the forced belief when a uniform point collides with it.
std::vector<Tagged> merge_nodes(std::vector<Tagged> pts) {
  std::sort(pts.begin(), pts.end(), [](const Tagged& a, const Tagged& b) { return a.belief < b.belief; });
  std::vector<Tagged> out;
  out.reserve(pts.size());
  for (const Tagged& t : pts) {
    if (!out.empty() && t.belief - out.back().belief <= kDedupResolution) {
      if (t.forced && !out.back().forced) out.back() = t;
      continue;
    }
    out.push_back(t);
  }
  return out;
}

// Merges new samples into a sorted sample list, dropping near-duplicates of existing beliefs.
std::vector<Sample> merge_samples(const std::vector<Sample>& base, std::vector<Sample> extra) {
  std::sort(extra.begin(), extra.end(), [](const Sample& a, const Sample& b) { return a.belief < b.belief; });
  std::vector<Sample> out;
  out.reserve(base.size() + extra.size());
  std::size_t i = 0;
  std::size_t j = 0;
  auto push = [&out](const Sample& s, bool is_base) {
    if (!out.empty() && s.belief - out.back().belief <= kDedupResolution) {
      if (is_base) out.back() = s;
      return;
    }
    out.push_back(s);
  };
  while (i < base.size() || j < extra.size()) {
    if (j >= extra.size() || (i < base.size() && base[i].belief <= extra[j].belief)) {
      push(base[i++], true);
    } else {
      push(extra[j++], false);
    }
  }
  return out;
}

struct Located {
  ConcaveHull hull;
  double cav = 0.0;
  double p_minus = 0.0;
  double p_plus = 0.0;
};

Located locate(std::span<const Sample> samples, double prior) {
  Located out{concavify(samples)};
  const auto [i, j] = out.hull.bracket(prior);
  const auto& v = out.hull.vertices();
  out.p_minus = v[i].belief;
  out.p_plus = v[j].belief;
  out.cav = out.hull.value_at(prior);
  return out;
}

}  // namespace

double ConcaveHull::value_at(double p) const {
  const auto [i, j] = bracket(p);
  const Sample& a = vertices_[i];
  const Sample& b = vertices_[j];
  if (i == j) return a.value;
  const double t = (p - a.belief) / (b.belief - a.belief);
  return a.value + t * (b.value - a.value);
}

std::pair<std::size_t, std::size_t> ConcaveHull::bracket(double p) const {
  if (vertices_.empty() || p < vertices_.front().belief || p > vertices_.back().belief) {
    throw std::domain_error(fmt::format("belief {} outside hull span", p));
  }
  const auto it = std::lower_bound(vertices_.begin(), vertices_.end(), p,
                                   [](const Sample& s, double x) { return s.belief < x; });
  const auto j = static_cast<std::size_t>(it - vertices_.begin());
  if (it->belief == p) return {j, j};
  return {j - 1, j};
}

double net_payoff_g(const Scenario& s, double p) { return solve_inner(s, p).phi - s.k_p() * s.kappa(p); }

PosteriorGrid grid_with_nodes(std::size_t points, std::span<const double> nodes) {
  if (points < GridSettings::kMinPoints) {
    throw std::invalid_argument(
        fmt::format("grid needs at least {} points (got {})", GridSettings::kMinPoints, points));
  }
  std::vector<Tagged> pts;
  pts.reserve(points + nodes.size());
  const double denom = static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) pts.push_back({static_cast<double>(i) / denom, false});

  PosteriorGrid grid;
  for (double n : nodes) {
    if (n < 0.0 || n > 1.0) continue;
    pts.push_back({n, true});
    grid.forced_nodes.push_back(n);
  }
  std::sort(grid.forced_nodes.begin(), grid.forced_nodes.end());
  grid.forced_nodes.erase(std::unique(grid.forced_nodes.begin(), grid.forced_nodes.end()), grid.forced_nodes.end());

  for (const Tagged& t : merge_nodes(std::move(pts))) grid.points.push_back(t.belief);
  return grid;
}

PosteriorGrid build_grid(const Scenario& s, double k_v) {
  const double step = 1.0 / static_cast<double>(s.grid().points - 1);
  std::vector<double> nodes{0.0, 1.0, s.prior(), s.pi_low(), s.pi_high(), s.pi_high() - step};
  if (const auto cutoff = cutoff_posterior(s, k_v)) nodes.push_back(*cutoff);
  return grid_with_nodes(s.grid().points, nodes);
}

ConcaveHull concavify(std::span<const Sample> samples) {
  if (samples.size() < 2) throw std::invalid_argument("concavify needs at least two samples");
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (!(samples[i].belief > samples[i - 1].belief)) {
      throw std::invalid_argument(fmt::format("samples must be strictly increasing in belief (index {})", i));
    }
  }
  std::vector<Sample> hull;
  hull.reserve(samples.size());
  for (const Sample& c : samples) {
    // Drop the last vertex while it lies on or below the chord to c.
    while (hull.size() >= 2) {
      const Sample& a = hull[hull.size() - 2];
      const Sample& b = hull.back();
      const double cross = (b.belief - a.belief) * (c.value - a.value) - (b.value - a.value) * (c.belief - a.belief);
      if (cross < 0.0) break;
      hull.pop_back();
    }
    hull.push_back(c);
  }
  return ConcaveHull(std::move(hull));
}

double pooling_tolerance(const Scenario& s, double g_at_prior) {
  return s.tolerances().gap_tol * std::max(1.0, std::abs(g_at_prior));
}

EnvelopeResult evaluate_at_prior(const Scenario& scenario, std::optional<double> k_v) {
  const Scenario s = k_v ? scenario.with_k_v(*k_v) : scenario;
  const PosteriorGrid grid = build_grid(s, s.k_v());
  const double prior = s.prior();

  std::vector<Sample> samples;
  samples.reserve(grid.points.size());
  for (double p : grid.points) samples.push_back({p, net_payoff_g(s, p)});

  const double g0 = net_payoff_g(s, prior);
  const double tol = pooling_tolerance(s, g0);
  Located loc = locate(samples, prior);

  if (s.grid().refine && loc.cav - g0 > tol) {
    const double step = 1.0 / static_cast<double>(s.grid().points - 1);
    const double fine = step / kRefineFactor;
    std::vector<Sample> extra;
    for (double centre : {loc.p_minus, loc.p_plus}) {
      for (int k = -kRefineHalfWidth * kRefineFactor; k <= kRefineHalfWidth * kRefineFactor; ++k) {
        const double p = centre + k * fine;
        if (p < 0.0 || p > 1.0) continue;
        extra.push_back({p, net_payoff_g(s, p)});
      }
    }
    samples = merge_samples(samples, std::move(extra));
    loc = locate(samples, prior);
  }

  EnvelopeResult out;
  out.g_at_prior = g0;
  out.cav_at_prior = loc.cav;
  out.gap = loc.cav - g0;
  out.pooling = out.gap <= tol;
  out.p_minus = out.pooling ? prior : loc.p_minus;
  out.p_plus = out.pooling ? prior : loc.p_plus;
  out.hull = std::move(loc.hull);
  out.sample_count = samples.size();
  return out;
}

}  // namespace delegation
