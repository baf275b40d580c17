#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "delegation/model.hpp"
#include "delegation/oracle.hpp"
#include "delegation/outer.hpp"
#include "delegation/statics.hpp"

namespace delegation {

inline constexpr std::string_view kToolVersion = "1.0.0";
inline constexpr std::string_view kResultHeader =
    "k_V,p_minus,p_plus,alpha,disp,info_bits,q_minus,q_plus,regime_info,regime_mgmt,value";
inline constexpr std::string_view kDCurveHeader = "lambda,p_minus,p_plus,D";

/// Invalid scenario document. The message names the offending key.
class ScenarioError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses a scenario document. Unknown keys are rejected; optional keys
/// default as documented in the README; every model invariant is
/// re-validated. Throws ScenarioError.
Scenario scenario_from_json(const nlohmann::json& doc);

nlohmann::json scenario_to_json(const Scenario& s);

/// Reads and parses a scenario file. Throws IoError or ScenarioError.
Scenario load_scenario(const std::filesystem::path& path);

/// FNV-1a over the canonical serialized scenario.
std::uint64_t scenario_hash(const Scenario& s);

/// Comma-separated table with kResultHeader and 4-decimal cells.
std::string result_table_csv(std::span<const SolveRow> rows);
/// Fixed-width version for terminals.
std::string result_table_text(std::span<const SolveRow> rows);

std::string d_curve_csv(const ChainDiagnosis& diag);

nlohmann::json to_json(const SolveRow& row);
nlohmann::json to_json(const ThresholdReport& report);
nlohmann::json to_json(const ChainDiagnosis& diag, const ChainSpec& chain);
nlohmann::json to_json(const TimingReport& report);
nlohmann::json to_json(const OracleVerdict& verdict);

/// Writes via a sibling temporary file and rename; the target is either
/// untouched or complete. Throws IoError.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace delegation
