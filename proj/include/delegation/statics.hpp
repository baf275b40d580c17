#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "delegation/model.hpp"
#include "delegation/outer.hpp"

namespace delegation {

std::vector<SolveRow> sweep_kv(const Scenario& s, std::span<const double> k_values);

// ---------------------------------------------------------------------------
// Thresholds in k_V

struct KvRange {
  double lo = 0.0;
  double hi = 1.0;
};

struct GapSample {
  double k_v = 0.0;
  double gap = 0.0;
  bool informative = false;
};

/// Gap at `points` evenly spaced k_V values across the range.
std::vector<GapSample> scan_gap(const Scenario& s, KvRange range, std::size_t points);

struct KvOnResult {
  std::optional<double> value;
  /// Pooling already fails at the range start; value is range.lo.
  bool informative_at_start = false;
};

/// First k_V at which the optimum turns informative: coarse scan, then
/// bisection on the pooling indicator to width tol.
KvOnResult find_k_v_on(const Scenario& s, KvRange range, double tol = 1e-6, std::size_t coarse_points = 200);

/// First k_V above k_v_on after which pooling holds for the rest of the
/// range. nullopt when informativeness lasts to range.hi or never shows up on
/// the coarse scan.
std::optional<double> find_k_v_off(const Scenario& s, double k_v_on, double range_hi, double tol = 1e-6,
                                   std::size_t coarse_points = 200);

/// sup of the break-even cost over the conflict region; +infinity when unbounded.
/// Analytic for the built-in cost kinds.
double find_k_v_nm(const Scenario& s);

/// Grid supremum of the break-even cost on [pi_L + h, pi_H - h] with
/// `points` samples; +infinity once C(q_min) underflows to zero. Independent
/// of the analytic rule above.
double break_even_supremum_numeric(const Scenario& s, std::size_t points);

struct ThresholdReport {
  KvRange range;
  std::optional<double> k_v_on;
  std::optional<double> k_v_off;
  /// +infinity encodes an unbounded threshold.
  double k_v_nm = 0.0;
  std::vector<GapSample> gap_samples;
  std::vector<std::string> warnings;
};

/// [0, k_V^NM] when finite, [0, 1] otherwise.
KvRange default_threshold_range(const Scenario& s);

struct ScanSettings {
  std::size_t coarse_points = 200;
  double tol = 1e-6;
};

ThresholdReport threshold_report(const Scenario& s, std::optional<KvRange> range = std::nullopt,
                                 ScanSettings settings = {});

// ---------------------------------------------------------------------------
// Two-posterior chain tau(lambda) = alpha delta_{p0 - lambda (p0 - a)} + (1 - alpha) delta_{p0 + lambda (b - p0)}

struct ChainSpec {
  double a = 0.0;
  double b = 1.0;
  double lambda_max = 1.0;
  std::size_t grid_size = 2001;

  /// alpha = (b - p0)/(b - a), fixed along the chain.
  [[nodiscard]] double weight_low(double prior) const { return (b - prior) / (b - a); }
  [[nodiscard]] double p_minus(double prior, double lambda) const { return prior - lambda * (prior - a); }
  [[nodiscard]] double p_plus(double prior, double lambda) const { return prior + lambda * (b - prior); }
  [[nodiscard]] double lambda_at(std::size_t i) const;
  [[nodiscard]] double lambda_step() const;
};

/// Throws std::invalid_argument unless 0 <= a < p0 < b <= 1, lambda_max in
/// [0,1] and grid_size >= 2.
void validate_chain(const ChainSpec& chain, double prior);

/// U(tau(lambda)) = int phi d tau - k_P int kappa d tau, evaluated exactly at
/// the two support points. Throws std::domain_error for lambda outside [0, lambda_max].
double chain_value(const Scenario& s, const ChainSpec& chain, double lambda,
                   std::optional<double> k_p = std::nullopt, std::optional<double> k_v = std::nullopt);

/// Every grid lambda within 1e-10 (1 + |max|) of the best chain value.
std::vector<double> chain_argmax(const Scenario& s, const ChainSpec& chain, std::optional<double> k_p = std::nullopt,
                                 std::optional<double> k_v = std::nullopt);

struct LambdaPair {
  double lo = 0.0;
  double hi = 0.0;
};

/// Uniform pairs lo <= hi on [0, lambda_max].
std::vector<LambdaPair> sample_lambda_pairs(const ChainSpec& chain, std::size_t count, std::uint64_t seed);

struct DdViolation {
  LambdaPair pair;
  double diff_high_cost = 0.0;
  double diff_low_cost = 0.0;
};

struct DdReport {
  bool passed = true;
  std::size_t checked = 0;
  std::vector<DdViolation> violations;
};

/// Decreasing differences in (lambda, k_P):
/// U(hi, k_P') - U(lo, k_P') <= U(hi, k_P) - U(lo, k_P) + 1e-10.
/// Throws std::invalid_argument when k_p_high < k_p_low or a pair has hi < lo.
DdReport check_dd_in_kp(const Scenario& s, const ChainSpec& chain, double k_p_low, double k_p_high,
                        std::span<const LambdaPair> pairs);

struct SsoReport {
  bool passed = true;
  double low_cost_min = 0.0;
  double low_cost_max = 0.0;
  double high_cost_min = 0.0;
  double high_cost_max = 0.0;
};

/// Argmax at the cheaper k_P dominates the one at the dearer k_P endpoint-wise,
/// within one lambda step. Throws std::invalid_argument when k_p_high < k_p_low.
SsoReport check_sso_in_kp(const Scenario& s, const ChainSpec& chain, double k_p_low, double k_p_high);

enum class Complementarity { Complements, Substitutes, Mixed };

struct DPoint {
  double lambda = 0.0;
  double p_minus = 0.0;
  double p_plus = 0.0;
  double d = 0.0;
};

/// Classification is local to the tested (k_v_low, k_v_high) pair.
struct ChainDiagnosis {
  double k_v_low = 0.0;
  double k_v_high = 0.0;
  std::vector<DPoint> curve;
  Complementarity classification = Complementarity::Complements;
  /// D is flat along the whole chain.
  bool degenerate = false;
};

/// D(lambda) = int (phi_{k_v_low} - phi_{k_v_high}) d tau(lambda) on the chain
/// grid. Nondecreasing D means complements, nonincreasing substitutes, both
/// strict rises and falls beyond 1e-10 mean mixed. Throws
/// std::invalid_argument when k_v_low > k_v_high.
ChainDiagnosis diagnose_complementarity(const Scenario& s, const ChainSpec& chain, double k_v_low, double k_v_high);

const char* to_string(Complementarity c);

}  // namespace delegation
