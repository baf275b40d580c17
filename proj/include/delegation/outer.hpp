#pragma once

#include <cstddef>

#include "delegation/envelope.hpp"
#include "delegation/model.hpp"

namespace delegation {

enum class PolicyKind { Pooling, TwoPoint };

/// tau = alpha delta_{p_minus} + (1 - alpha) delta_{p_plus}. Pooling is
/// stored as p_minus = p_plus = p0, alpha = 1.
struct SignalPolicy {
  PolicyKind kind = PolicyKind::Pooling;
  double p_minus = 0.0;
  double p_plus = 0.0;
  double alpha = 1.0;

  static SignalPolicy pooling(double prior);
  /// alpha = (p_plus - p0)/(p_plus - p_minus). Throws std::invalid_argument
  /// unless 0 <= p_minus <= p0 <= p_plus <= 1 with p_minus < p_plus.
  static SignalPolicy two_point(double p_minus, double p_plus, double prior);

  [[nodiscard]] double mean() const { return alpha * p_minus + (1.0 - alpha) * p_plus; }
  [[nodiscard]] double dispersion() const { return p_plus - p_minus; }
};

enum class InfoRegime { Pooling, Informative };

/// Where management is used at the realized posteriors. LowOnly only occurs
/// in SmoothLinear mode; bang-bang management is monotone in p.
enum class MgmtRegime { Both, HighOnly, LowOnly, NoneUsed, OutsideConflict };

struct SolveRow {
  double k_v = 0.0;
  double k_p = 0.0;
  SignalPolicy policy;
  double disp = 0.0;
  double info_bits = 0.0;
  double q_minus = 0.0;
  double q_plus = 0.0;
  InfoRegime regime_info = InfoRegime::Pooling;
  MgmtRegime regime_mgmt = MgmtRegime::OutsideConflict;
  /// cav g(p0)
  double value = 0.0;
  double gap = 0.0;
};

/// Entropy in bits, 0 log 0 = 0.
double binary_entropy(double p);

/// H(p0) - (alpha H(p_minus) + (1 - alpha) H(p_plus)); exactly 0 for pooling.
double mutual_information(const SignalPolicy& policy, double prior);

SolveRow solve_point(const Scenario& s);

struct ReversedTiming {
  double value = 0.0;
  double q = 0.0;
};

/// Management fixed ex ante: max over a uniform q grid of
/// cav[B(., q) - k_P kappa](p0) - k_V C(q). Uses the baseline solver grid so
/// both timings are compared on identical posterior samples. Ties go to the
/// smallest q. Throws std::invalid_argument for q_grid_size < 2.
ReversedTiming reversed_timing_value(const Scenario& s, std::size_t q_grid_size = 1001);

struct TimingReport {
  double u_baseline = 0.0;
  double u_reversed = 0.0;
  double q_reversed = 0.0;
  double difference = 0.0;
};

/// Throws std::logic_error if the reversed timing beats the baseline by more than 1e-9.
TimingReport timing_report(const Scenario& s, std::size_t q_grid_size = 1001);

const char* to_string(PolicyKind kind);
const char* to_string(InfoRegime regime);
const char* to_string(MgmtRegime regime);

}  // namespace delegation
