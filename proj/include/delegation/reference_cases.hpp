#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "delegation/model.hpp"
#include "delegation/outer.hpp"

namespace delegation {

/// One published table row: k_V, p-, p+, alpha, Disp, I (bits), q*(p-), q*(p+).
struct ReferenceRow {
  double k_v;
  double p_minus;
  double p_plus;
  double alpha;
  double disp;
  double info_bits;
  double q_minus;
  double q_plus;
};

/// Acceptance bands for comparing a computed row with a published one.
struct RowTolerance {
  double posterior = 0.005;
  double alpha = 0.01;
  double disp = 0.005;
  double info_bits = 0.002;
  double q = 0.005;
};

struct ReferenceCase {
  std::string id;
  std::string title;
  Scenario scenario;
  std::vector<ReferenceRow> rows;
  /// Published thresholds; nullopt when the case gives none.
  std::optional<double> k_v_on;
  std::optional<double> k_v_off;
  /// +infinity for unbounded.
  double k_v_nm;
  /// Threshold scan range used for the reproduction.
  double scan_hi;
};

/// Single-peak case: fixed-plus-quadratic management (eps = 0.03), k_P = 11,
/// kappa = (p - 0.5)^2, cutoffs 0.3 / 0.7. Bang-bang inner rule.
ReferenceCase reference_ex1();

/// Double-peak case: quadratic management, k_P = 80, kappa = (p - 0.5)^4,
/// cutoffs 0.3 / 0.7 (so c_L = 0.09, c_H = 0.21). Smooth inner rule.
ReferenceCase reference_ex2();

/// "ex1" or "ex2"; nullopt otherwise.
std::optional<ReferenceCase> reference_case(std::string_view id);

struct CellCheck {
  std::string column;
  double expected;
  double computed;
  double tolerance;
  bool pass;
};

/// Per-cell comparison of a computed row with a reference row.
std::vector<CellCheck> compare_row(const ReferenceRow& expected, const SolveRow& computed, const RowTolerance& tol = {});

struct ReproductionCheck {
  std::string name;
  std::string expected;
  std::string computed;
  bool pass;
};

struct ReproductionReport {
  std::string id;
  std::vector<SolveRow> rows;
  std::vector<std::vector<CellCheck>> cells;
  std::vector<ReproductionCheck> checks;
  std::vector<std::string> notes;
  bool all_pass = true;
};

/// Recomputes the reference table and thresholds for `rc` and compares them
/// with the published values under the acceptance bands (thresholds +-0.02,
/// k_V^NM +-0.001, upper contact 0.7 +-0.005 where the table shows it).
ReproductionReport reproduce(const ReferenceCase& rc, const RowTolerance& tol = {});

}  // namespace delegation
