#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace delegation {

/// Affine function of the belief p = P(H).
struct Affine {
  double intercept = 0.0;
  double slope = 0.0;

  [[nodiscard]] constexpr double operator()(double p) const { return intercept + slope * p; }
};

/// The two acts f (status quo) and g (intervention), given by success
/// probabilities Pr(x | act, state). Stored once in affine form:
/// u(a).p = Pr(x | a, L) + (Pr(x | a, H) - Pr(x | a, L)) p.
class ActPair {
 public:
  /// Throws std::invalid_argument unless every probability lies in [0,1] and
  /// the gain u(g).p - u(f).p is strictly increasing in p.
  ActPair(double pr_f_high, double pr_f_low, double pr_g_high, double pr_g_low);

  [[nodiscard]] double pr_f_high() const { return pr_f_high_; }
  [[nodiscard]] double pr_f_low() const { return pr_f_low_; }
  [[nodiscard]] double pr_g_high() const { return pr_g_high_; }
  [[nodiscard]] double pr_g_low() const { return pr_g_low_; }

  [[nodiscard]] const Affine& u_f() const { return u_f_; }
  [[nodiscard]] const Affine& u_g() const { return u_g_; }
  /// Delta_u(p) = u(g).p - u(f).p
  [[nodiscard]] const Affine& gain() const { return gain_; }

 private:
  double pr_f_high_;
  double pr_f_low_;
  double pr_g_high_;
  double pr_g_low_;
  Affine u_f_;
  Affine u_g_;
  Affine gain_;
};

/// Private costs of act g under the benchmark tastes v_L and v_H.
class TastePair {
 public:
  /// Requires 0 <= c_low < c_high.
  TastePair(double c_low, double c_high);

  /// Builds the pair from the cutoff beliefs via c = Delta_u(pi).
  /// Requires 0 < pi_low < pi_high < 1 and Delta_u(pi_low) >= 0.
  static TastePair from_cutoffs(const ActPair& acts, double pi_low, double pi_high);

  [[nodiscard]] double c_low() const { return c_low_; }
  [[nodiscard]] double c_high() const { return c_high_; }
  /// Cutoffs the pair was built from, if any. Used to keep endpoints exact.
  [[nodiscard]] const std::optional<std::pair<double, double>>& given_cutoffs() const { return cutoffs_; }

 private:
  double c_low_;
  double c_high_;
  std::optional<std::pair<double, double>> cutoffs_;
};

enum class ManagementCostKind { Quadratic, FixedPlusQuadratic };

/// c_V(q) = k_V C(q) with C(q) = q^2, or C(0) = 0 and C(q) = eps + q^2 for q > 0.
class ManagementCost {
 public:
  static ManagementCost quadratic(double scale);
  static ManagementCost fixed_plus_quadratic(double epsilon, double scale);

  [[nodiscard]] ManagementCostKind kind() const { return kind_; }
  [[nodiscard]] double epsilon() const { return epsilon_; }
  /// k_V
  [[nodiscard]] double scale() const { return scale_; }
  /// C(q), the unscaled shape.
  [[nodiscard]] double shape(double q) const;
  [[nodiscard]] double operator()(double q) const { return scale_ * shape(q); }

  [[nodiscard]] ManagementCost with_scale(double scale) const;

 private:
  ManagementCost(ManagementCostKind kind, double epsilon, double scale);

  ManagementCostKind kind_;
  double epsilon_;
  double scale_;
};

/// c_P(tau) = k_P * integral of kappa d tau with kappa(p) = (p - center)^n, n in {2, 4}.
class InformationCost {
 public:
  InformationCost(int exponent, double scale);

  [[nodiscard]] int exponent() const { return exponent_; }
  /// k_P
  [[nodiscard]] double scale() const { return scale_; }
  [[nodiscard]] double kappa(double p, double center) const;

  [[nodiscard]] InformationCost with_scale(double scale) const;

 private:
  int exponent_;
  double scale_;
};

enum class InnerMode {
  BangBang,
  /// Smooth objective q*Delta_u - k_V q^2 inside the conflict region. Only
  /// meant for reproducing the quadratic double-peak reference case.
  SmoothLinear,
};

struct GridSettings {
  static constexpr std::size_t kMinPoints = 101;

  std::size_t points = 10001;
  bool refine = true;
};

struct Tolerances {
  /// Relative pooling tolerance; the absolute one is gap_tol * max(1, |g(p0)|).
  double gap_tol = 1e-8;
  double root_tol = 1e-10;
};

/// A full problem instance. Immutable; the with_* helpers return modified copies.
class Scenario {
 public:
  Scenario(ActPair acts, TastePair tastes, ManagementCost mgmt, InformationCost info, double prior,
           InnerMode inner_mode = InnerMode::BangBang, GridSettings grid = {}, Tolerances tolerances = {},
           std::uint64_t seed = 0);

  [[nodiscard]] const ActPair& acts() const { return acts_; }
  [[nodiscard]] const TastePair& tastes() const { return tastes_; }
  [[nodiscard]] const ManagementCost& mgmt() const { return mgmt_; }
  [[nodiscard]] const InformationCost& info() const { return info_; }
  [[nodiscard]] double prior() const { return prior_; }
  [[nodiscard]] InnerMode inner_mode() const { return inner_mode_; }
  [[nodiscard]] const GridSettings& grid() const { return grid_; }
  [[nodiscard]] const Tolerances& tolerances() const { return tolerances_; }
  [[nodiscard]] std::uint64_t seed() const { return seed_; }

  [[nodiscard]] double k_v() const { return mgmt_.scale(); }
  [[nodiscard]] double k_p() const { return info_.scale(); }
  [[nodiscard]] double pi_low() const { return pi_low_; }
  [[nodiscard]] double pi_high() const { return pi_high_; }

  [[nodiscard]] double kappa(double p) const { return info_.kappa(p, prior_); }

  [[nodiscard]] Scenario with_k_v(double k_v) const;
  [[nodiscard]] Scenario with_k_p(double k_p) const;
  [[nodiscard]] Scenario with_inner_mode(InnerMode mode) const;
  [[nodiscard]] Scenario with_grid(GridSettings grid) const;
  [[nodiscard]] Scenario with_seed(std::uint64_t seed) const;

 private:
  ActPair acts_;
  TastePair tastes_;
  ManagementCost mgmt_;
  InformationCost info_;
  double prior_;
  InnerMode inner_mode_;
  GridSettings grid_;
  Tolerances tolerances_;
  std::uint64_t seed_;
  double pi_low_;
  double pi_high_;
};

// Throws std::domain_error for p outside [0,1].
double delta_u(const Scenario& s, double p);

/// Cutoff belief of the managed taste v_q; pi(0) = pi_H, pi(1) = pi_L.
/// Throws std::domain_error for q outside [0,1].
double pi_of_q(const Scenario& s, double q);

/// (c_H - Delta_u(p)) / (c_H - c_L), clipped to [0,1].
double q_min(const Scenario& s, double p);

/// True iff some q in [0,1] induces g, i.e. p >= pi_L.
bool flip_feasible(const Scenario& s, double p);

/// Agent with taste v_q picks g at belief p. Ties go to g.
bool agent_chooses_g(const Scenario& s, double p, double q);

/// Psi(p,q) = u(f).p + 1{p >= pi(q)} Delta_u(p) - k_V C(q)
double posterior_payoff_psi(const Scenario& s, double p, double q);

/// B(p,q) = u(f).p + 1{p >= pi(q)} Delta_u(p), the payoff before management cost.
double agent_payoff_b(const Scenario& s, double p, double q);

struct AssumptionCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Standing-assumption report. Construction-level invariants are already
/// enforced by the type constructors; this reports the rest, including
/// whether the break-even cost is bounded.
std::vector<AssumptionCheck> validate_scenario(const Scenario& s);

}  // namespace delegation
