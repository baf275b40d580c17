#include "delegation/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace delegation {

namespace {

// Slack on the agent's indifference comparison, in utility units. Ties and
// near-ties from rounding in pi(q) round-trips resolve toward g.
constexpr double kTieSlack = 1e-12;

bool in_unit(double x) { return x >= 0.0 && x <= 1.0; }

void require_unit(double x, const char* what) {
  if (!in_unit(x)) throw std::domain_error(fmt::format("{} = {} outside [0,1]", what, x));
}

}  // namespace

ActPair::ActPair(double pr_f_high, double pr_f_low, double pr_g_high, double pr_g_low)
    : pr_f_high_(pr_f_high), pr_f_low_(pr_f_low), pr_g_high_(pr_g_high), pr_g_low_(pr_g_low) {
  for (double x : {pr_f_high, pr_f_low, pr_g_high, pr_g_low}) {
    if (!in_unit(x)) throw std::invalid_argument(fmt::format("success probability {} outside [0,1]", x));
  }
  u_f_ = {pr_f_low, pr_f_high - pr_f_low};
  u_g_ = {pr_g_low, pr_g_high - pr_g_low};
  gain_ = {u_g_.intercept - u_f_.intercept, u_g_.slope - u_f_.slope};
  if (!(gain_.slope > 0.0)) {
    throw std::invalid_argument(fmt::format("gain slope {} must be strictly positive", gain_.slope));
  }
}

TastePair::TastePair(double c_low, double c_high) : c_low_(c_low), c_high_(c_high) {
  if (!(c_low >= 0.0 && c_low < c_high) || !std::isfinite(c_high)) {
    throw std::invalid_argument(fmt::format("taste costs must satisfy 0 <= c_L < c_H (got {}, {})", c_low, c_high));
  }
}

TastePair TastePair::from_cutoffs(const ActPair& acts, double pi_low, double pi_high) {
  if (!(pi_low > 0.0 && pi_low < pi_high && pi_high < 1.0)) {
    throw std::invalid_argument(
        fmt::format("cutoffs must satisfy 0 < pi_L < pi_H < 1 (got {}, {})", pi_low, pi_high));
  }
  TastePair t(acts.gain()(pi_low), acts.gain()(pi_high));
  t.cutoffs_ = std::pair{pi_low, pi_high};
  return t;
}

ManagementCost::ManagementCost(ManagementCostKind kind, double epsilon, double scale)
    : kind_(kind), epsilon_(epsilon), scale_(scale) {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument(fmt::format("fixed cost epsilon = {} must be >= 0", epsilon));
  }
  if (!(scale >= 0.0) || !std::isfinite(scale)) {
    throw std::invalid_argument(fmt::format("k_V = {} must be a finite nonnegative number", scale));
  }
}

ManagementCost ManagementCost::quadratic(double scale) { return {ManagementCostKind::Quadratic, 0.0, scale}; }

ManagementCost ManagementCost::fixed_plus_quadratic(double epsilon, double scale) {
  return {ManagementCostKind::FixedPlusQuadratic, epsilon, scale};
}

double ManagementCost::shape(double q) const {
  if (q <= 0.0) return 0.0;
  const double quad = q * q;
  return kind_ == ManagementCostKind::FixedPlusQuadratic ? epsilon_ + quad : quad;
}

ManagementCost ManagementCost::with_scale(double scale) const { return {kind_, epsilon_, scale}; }

InformationCost::InformationCost(int exponent, double scale) : exponent_(exponent), scale_(scale) {
  if (exponent != 2 && exponent != 4) {
    throw std::invalid_argument(fmt::format("information cost exponent must be 2 or 4 (got {})", exponent));
  }
  if (!(scale >= 0.0) || !std::isfinite(scale)) {
    throw std::invalid_argument(fmt::format("k_P = {} must be a finite nonnegative number", scale));
  }
}

double InformationCost::kappa(double p, double center) const {
  const double d = p - center;
  const double d2 = d * d;
  return exponent_ == 2 ? d2 : d2 * d2;
}

InformationCost InformationCost::with_scale(double scale) const { return {exponent_, scale}; }

Scenario::Scenario(ActPair acts, TastePair tastes, ManagementCost mgmt, InformationCost info, double prior,
                   InnerMode inner_mode, GridSettings grid, Tolerances tolerances, std::uint64_t seed)
    : acts_(acts),
      tastes_(tastes),
      mgmt_(mgmt),
      info_(info),
      prior_(prior),
      inner_mode_(inner_mode),
      grid_(grid),
      tolerances_(tolerances),
      seed_(seed) {
  if (!(prior > 0.0 && prior < 1.0)) {
    throw std::invalid_argument(fmt::format("prior = {} must lie in (0,1)", prior));
  }
  if (const auto& given = tastes_.given_cutoffs()) {
    pi_low_ = given->first;
    pi_high_ = given->second;
  } else {
    const Affine& gain = acts_.gain();
    pi_low_ = (tastes_.c_low() - gain.intercept) / gain.slope;
    pi_high_ = (tastes_.c_high() - gain.intercept) / gain.slope;
  }
  if (!(pi_low_ > 0.0 && pi_low_ < pi_high_ && pi_high_ < 1.0)) {
    throw std::invalid_argument(
        fmt::format("derived cutoffs must satisfy 0 < pi_L < pi_H < 1 (got {}, {})", pi_low_, pi_high_));
  }
  if (grid_.points < GridSettings::kMinPoints) {
    throw std::invalid_argument(
        fmt::format("grid needs at least {} points (got {})", GridSettings::kMinPoints, grid_.points));
  }
  if (!(tolerances_.gap_tol > 0.0) || !(tolerances_.root_tol > 0.0)) {
    throw std::invalid_argument("tolerances must be strictly positive");
  }
}

Scenario Scenario::with_k_v(double k_v) const {
  Scenario copy = *this;
  copy.mgmt_ = mgmt_.with_scale(k_v);
  return copy;
}

Scenario Scenario::with_k_p(double k_p) const {
  Scenario copy = *this;
  copy.info_ = info_.with_scale(k_p);
  return copy;
}

Scenario Scenario::with_inner_mode(InnerMode mode) const {
  Scenario copy = *this;
  copy.inner_mode_ = mode;
  return copy;
}

Scenario Scenario::with_grid(GridSettings grid) const {
  if (grid.points < GridSettings::kMinPoints) {
    throw std::invalid_argument(
        fmt::format("grid needs at least {} points (got {})", GridSettings::kMinPoints, grid.points));
  }
  Scenario copy = *this;
  copy.grid_ = grid;
  return copy;
}

Scenario Scenario::with_seed(std::uint64_t seed) const {
  Scenario copy = *this;
  copy.seed_ = seed;
  return copy;
}

double delta_u(const Scenario& s, double p) {
  require_unit(p, "belief");
  return s.acts().gain()(p);
}

double pi_of_q(const Scenario& s, double q) {
  require_unit(q, "management intensity");
  if (q == 0.0) return s.pi_high();
  if (q == 1.0) return s.pi_low();
  const TastePair& t = s.tastes();
  const Affine& gain = s.acts().gain();
  const double cost = q * t.c_low() + (1.0 - q) * t.c_high();
  return std::clamp((cost - gain.intercept) / gain.slope, s.pi_low(), s.pi_high());
}

double q_min(const Scenario& s, double p) {
  const TastePair& t = s.tastes();
  const double raw = (t.c_high() - s.acts().gain()(p)) / (t.c_high() - t.c_low());
  return std::clamp(raw, 0.0, 1.0);
}

bool flip_feasible(const Scenario& s, double p) {
  require_unit(p, "belief");
  return p >= s.pi_low();
}

bool agent_chooses_g(const Scenario& s, double p, double q) {
  require_unit(p, "belief");
  require_unit(q, "management intensity");
  if (p >= s.pi_high()) return true;
  if (p < s.pi_low()) return false;
  const TastePair& t = s.tastes();
  const double private_cost = q * t.c_low() + (1.0 - q) * t.c_high();
  return s.acts().gain()(p) >= private_cost - kTieSlack;
}

double agent_payoff_b(const Scenario& s, double p, double q) {
  const double base = s.acts().u_f()(p);
  return agent_chooses_g(s, p, q) ? base + s.acts().gain()(p) : base;
}

double posterior_payoff_psi(const Scenario& s, double p, double q) { return agent_payoff_b(s, p, q) - s.mgmt()(q); }

std::vector<AssumptionCheck> validate_scenario(const Scenario& s) {
  std::vector<AssumptionCheck> out;
  const auto& gain = s.acts().gain();
  out.push_back({"gain_increasing", gain.slope > 0.0, fmt::format("Delta_u slope {}", gain.slope)});

  // Sampled shape checks for C and kappa on a 1/200 lattice.
  constexpr int kSamples = 200;
  const auto& mgmt = s.mgmt();
  bool c_ok = mgmt.shape(0.0) == 0.0;
  for (int i = 1; i <= kSamples && c_ok; ++i) {
    const double q = static_cast<double>(i) / kSamples;
    const double prev = mgmt.shape(static_cast<double>(i - 1) / kSamples);
    if (mgmt.shape(q) < prev) c_ok = false;
    if (i >= 2 && i < kSamples) {
      const double next = mgmt.shape(static_cast<double>(i + 1) / kSamples);
      if (next - 2.0 * mgmt.shape(q) + prev < -1e-12) c_ok = false;
    }
  }
  out.push_back({"management_cost_shape", c_ok, "C(0)=0, nondecreasing on [0,1], convex on (0,1]"});

  bool kappa_ok = true;
  for (int i = 1; i < kSamples; ++i) {
    const double h = 1.0 / kSamples;
    const double p = i * h;
    if (s.kappa(p + h) - 2.0 * s.kappa(p) + s.kappa(p - h) < -1e-12) kappa_ok = false;
  }
  out.push_back({"information_cost_convex", kappa_ok && s.kappa(s.prior()) == 0.0, "kappa convex, kappa(p0)=0"});

  out.push_back({"cutoffs_ordered", s.pi_low() > 0.0 && s.pi_low() < s.pi_high() && s.pi_high() < 1.0,
                 fmt::format("pi_L={} pi_H={}", s.pi_low(), s.pi_high())});
  out.push_back({"prior_interior", s.prior() > 0.0 && s.prior() < 1.0, fmt::format("p0={}", s.prior())});
  out.push_back({"bounded_management_cost", std::isfinite(mgmt.shape(1.0)),
                 fmt::format("sup C = C(1) = {}", mgmt.shape(1.0))});

  const bool bounded = mgmt.kind() == ManagementCostKind::FixedPlusQuadratic && mgmt.epsilon() > 0.0;
  const std::string bound_detail =
      bounded ? fmt::format("sup break-even cost = Delta_u(pi_H)/eps = {}", gain(s.pi_high()) / mgmt.epsilon())
              : std::string("C(q_min(p)) -> 0 as p -> pi_H, break-even cost unbounded");
  out.push_back({"bounded_break_even", bounded, bound_detail});
  return out;
}

}  // namespace delegation
