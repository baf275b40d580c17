#include "delegation/scenario_io.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <system_error>

#include <fmt/format.h>

namespace delegation {

using nlohmann::json;

namespace {

std::string join_path(std::string_view parent, std::string_view key) {
  return parent.empty() ? std::string(key) : fmt::format("{}.{}", parent, key);
}

const json& require_object(const json& doc, std::string_view path) {
  if (!doc.is_object()) throw ScenarioError(fmt::format("'{}' must be an object", path.empty() ? "<root>" : path));
  return doc;
}

void reject_unknown(const json& obj, std::string_view path, std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, _] : obj.items()) {
    bool known = false;
    for (std::string_view a : allowed) known = known || key == a;
    if (!known) throw ScenarioError(fmt::format("unknown key '{}'", join_path(path, key)));
  }
}

const json& member(const json& obj, std::string_view path, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ScenarioError(fmt::format("missing key '{}'", join_path(path, key)));
  return *it;
}

double number(const json& obj, std::string_view path, const char* key) {
  const json& v = member(obj, path, key);
  if (!v.is_number()) throw ScenarioError(fmt::format("'{}' must be a number", join_path(path, key)));
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ScenarioError(fmt::format("'{}' must be finite", join_path(path, key)));
  return x;
}

double number_or(const json& obj, std::string_view path, const char* key, double fallback) {
  return obj.contains(key) ? number(obj, path, key) : fallback;
}

// Wraps constructor failures so the diagnostic names the section.
template <typename F>
auto build(std::string_view section, F&& f) {
  try {
    return f();
  } catch (const ScenarioError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(fmt::format("'{}': {}", section, e.what()));
  }
}

std::string fmt4(double x) { return fmt::format("{:.4f}", x); }

}  // namespace

Scenario scenario_from_json(const json& doc) {
  require_object(doc, "");
  reject_unknown(doc, "", {"acts", "tastes", "mgmt", "info", "prior", "inner_mode", "grid", "tolerances", "seed"});

  const json& acts_doc = require_object(member(doc, "", "acts"), "acts");
  reject_unknown(acts_doc, "acts", {"pr_f_H", "pr_f_L", "pr_g_H", "pr_g_L"});
  const ActPair acts = build("acts", [&] {
    return ActPair(number(acts_doc, "acts", "pr_f_H"), number(acts_doc, "acts", "pr_f_L"),
                   number(acts_doc, "acts", "pr_g_H"), number(acts_doc, "acts", "pr_g_L"));
  });

  const json& tastes_doc = require_object(member(doc, "", "tastes"), "tastes");
  reject_unknown(tastes_doc, "tastes", {"c_L", "c_H", "pi_L", "pi_H"});
  const bool by_cost = tastes_doc.contains("c_L") || tastes_doc.contains("c_H");
  const bool by_cutoff = tastes_doc.contains("pi_L") || tastes_doc.contains("pi_H");
  if (by_cost == by_cutoff) throw ScenarioError("'tastes' needs exactly one of {c_L, c_H} or {pi_L, pi_H}");
  const TastePair tastes = build("tastes", [&] {
    return by_cost ? TastePair(number(tastes_doc, "tastes", "c_L"), number(tastes_doc, "tastes", "c_H"))
                   : TastePair::from_cutoffs(acts, number(tastes_doc, "tastes", "pi_L"),
                                             number(tastes_doc, "tastes", "pi_H"));
  });

  const json& mgmt_doc = require_object(member(doc, "", "mgmt"), "mgmt");
  reject_unknown(mgmt_doc, "mgmt", {"kind", "epsilon", "k_V"});
  const json& kind = member(mgmt_doc, "mgmt", "kind");
  if (!kind.is_string()) throw ScenarioError("'mgmt.kind' must be a string");
  const double k_v = number(mgmt_doc, "mgmt", "k_V");
  const ManagementCost mgmt = build("mgmt", [&] {
    const auto name = kind.get<std::string>();
    if (name == "quadratic") {
      if (mgmt_doc.contains("epsilon")) throw ScenarioError("'mgmt.epsilon' only applies to fixed_plus_quadratic");
      return ManagementCost::quadratic(k_v);
    }
    if (name == "fixed_plus_quadratic") {
      return ManagementCost::fixed_plus_quadratic(number(mgmt_doc, "mgmt", "epsilon"), k_v);
    }
    throw ScenarioError(fmt::format("'mgmt.kind' must be quadratic or fixed_plus_quadratic (got '{}')", name));
  });

  const json& info_doc = require_object(member(doc, "", "info"), "info");
  reject_unknown(info_doc, "info", {"exponent", "k_P"});
  int exponent = 2;
  if (info_doc.contains("exponent")) {
    const json& e = info_doc.at("exponent");
    if (!e.is_number_integer()) throw ScenarioError("'info.exponent' must be an integer");
    exponent = e.get<int>();
  }
  const double k_p = number(info_doc, "info", "k_P");
  const InformationCost info = build("info", [&] { return InformationCost(exponent, k_p); });

  const double prior = number(doc, "", "prior");
  if (!(prior > 0.0 && prior < 1.0)) throw ScenarioError(fmt::format("'prior' = {} must lie in (0,1)", prior));

  InnerMode mode = InnerMode::BangBang;
  if (doc.contains("inner_mode")) {
    const json& m = doc.at("inner_mode");
    if (!m.is_string()) throw ScenarioError("'inner_mode' must be a string");
    const auto name = m.get<std::string>();
    if (name == "smooth") {
      mode = InnerMode::SmoothLinear;
    } else if (name != "bangbang") {
      throw ScenarioError(fmt::format("'inner_mode' must be bangbang or smooth (got '{}')", name));
    }
  }

  GridSettings grid;
  if (doc.contains("grid")) {
    const json& g = require_object(doc.at("grid"), "grid");
    reject_unknown(g, "grid", {"points", "refine"});
    if (g.contains("points")) {
      if (!g.at("points").is_number_unsigned()) throw ScenarioError("'grid.points' must be a positive integer");
      grid.points = g.at("points").get<std::size_t>();
    }
    if (g.contains("refine")) {
      if (!g.at("refine").is_boolean()) throw ScenarioError("'grid.refine' must be a boolean");
      grid.refine = g.at("refine").get<bool>();
    }
  }

  Tolerances tol;
  if (doc.contains("tolerances")) {
    const json& t = require_object(doc.at("tolerances"), "tolerances");
    reject_unknown(t, "tolerances", {"gap_tol", "root_tol"});
    tol.gap_tol = number_or(t, "tolerances", "gap_tol", tol.gap_tol);
    tol.root_tol = number_or(t, "tolerances", "root_tol", tol.root_tol);
  }

  std::uint64_t seed = 0;
  if (doc.contains("seed")) {
    if (!doc.at("seed").is_number_unsigned()) throw ScenarioError("'seed' must be a nonnegative integer");
    seed = doc.at("seed").get<std::uint64_t>();
  }

  return build("scenario", [&] { return Scenario(acts, tastes, mgmt, info, prior, mode, grid, tol, seed); });
}

json scenario_to_json(const Scenario& s) {
  json doc;
  const ActPair& a = s.acts();
  doc["acts"] = {{"pr_f_H", a.pr_f_high()}, {"pr_f_L", a.pr_f_low()}, {"pr_g_H", a.pr_g_high()}, {"pr_g_L", a.pr_g_low()}};
  if (const auto& cut = s.tastes().given_cutoffs()) {
    doc["tastes"] = {{"pi_L", cut->first}, {"pi_H", cut->second}};
  } else {
    doc["tastes"] = {{"c_L", s.tastes().c_low()}, {"c_H", s.tastes().c_high()}};
  }
  const ManagementCost& m = s.mgmt();
  if (m.kind() == ManagementCostKind::Quadratic) {
    doc["mgmt"] = {{"kind", "quadratic"}, {"k_V", m.scale()}};
  } else {
    doc["mgmt"] = {{"kind", "fixed_plus_quadratic"}, {"epsilon", m.epsilon()}, {"k_V", m.scale()}};
  }
  doc["info"] = {{"exponent", s.info().exponent()}, {"k_P", s.info().scale()}};
  doc["prior"] = s.prior();
  doc["inner_mode"] = s.inner_mode() == InnerMode::BangBang ? "bangbang" : "smooth";
  doc["grid"] = {{"points", s.grid().points}, {"refine", s.grid().refine}};
  doc["tolerances"] = {{"gap_tol", s.tolerances().gap_tol}, {"root_tol", s.tolerances().root_tol}};
  doc["seed"] = s.seed();
  return doc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot read scenario file '{}'", path.string()));
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ScenarioError(fmt::format("'{}' is not valid JSON: {}", path.string(), e.what()));
  }
  return scenario_from_json(doc);
}

std::uint64_t scenario_hash(const Scenario& s) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : scenario_to_json(s).dump()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string result_table_csv(std::span<const SolveRow> rows) {
  std::string out(kResultHeader);
  out += '\n';
  for (const SolveRow& r : rows) {
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{}\n", fmt4(r.k_v), fmt4(r.policy.p_minus), fmt4(r.policy.p_plus),
                       fmt4(r.policy.alpha), fmt4(r.disp), fmt4(r.info_bits), fmt4(r.q_minus), fmt4(r.q_plus),
                       to_string(r.regime_info), to_string(r.regime_mgmt), fmt4(r.value));
  }
  return out;
}

std::string result_table_text(std::span<const SolveRow> rows) {
  std::string out = fmt::format("{:>8} {:>8} {:>8} {:>8} {:>8} {:>9} {:>8} {:>8}  {:<12} {:<16} {:>9}\n", "k_V",
                                "p_minus", "p_plus", "alpha", "disp", "info_bits", "q_minus", "q_plus", "regime_info",
                                "regime_mgmt", "value");
  for (const SolveRow& r : rows) {
    out += fmt::format("{:>8.4f} {:>8.4f} {:>8.4f} {:>8.4f} {:>8.4f} {:>9.4f} {:>8.4f} {:>8.4f}  {:<12} {:<16} {:>9.4f}\n",
                       r.k_v, r.policy.p_minus, r.policy.p_plus, r.policy.alpha, r.disp, r.info_bits, r.q_minus,
                       r.q_plus, to_string(r.regime_info), to_string(r.regime_mgmt), r.value);
  }
  return out;
}

std::string d_curve_csv(const ChainDiagnosis& diag) {
  std::string out(kDCurveHeader);
  out += '\n';
  for (const DPoint& p : diag.curve) out += fmt::format("{},{},{},{}\n", p.lambda, p.p_minus, p.p_plus, p.d);
  return out;
}

json to_json(const SolveRow& r) {
  return {{"k_V", r.k_v},
          {"k_P", r.k_p},
          {"policy", to_string(r.policy.kind)},
          {"p_minus", r.policy.p_minus},
          {"p_plus", r.policy.p_plus},
          {"alpha", r.policy.alpha},
          {"disp", r.disp},
          {"info_bits", r.info_bits},
          {"q_minus", r.q_minus},
          {"q_plus", r.q_plus},
          {"regime_info", to_string(r.regime_info)},
          {"regime_mgmt", to_string(r.regime_mgmt)},
          {"value", r.value},
          {"gap", r.gap}};
}

namespace {

json optional_number(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

json extended_number(double x) { return std::isfinite(x) ? json(x) : json("unbounded"); }

}  // namespace

json to_json(const ThresholdReport& r) {
  json samples = json::array();
  for (const GapSample& g : r.gap_samples) samples.push_back({{"k_V", g.k_v}, {"gap", g.gap}, {"informative", g.informative}});
  return {{"range", {r.range.lo, r.range.hi}},
          {"k_V_on", optional_number(r.k_v_on)},
          {"k_V_off", optional_number(r.k_v_off)},
          {"k_V_nm", extended_number(r.k_v_nm)},
          {"gap_samples", samples},
          {"warnings", r.warnings}};
}

json to_json(const ChainDiagnosis& d, const ChainSpec& chain) {
  return {{"k_V_low", d.k_v_low},
          {"k_V_high", d.k_v_high},
          {"classification", to_string(d.classification)},
          {"degenerate", d.degenerate},
          {"local_to_pair", true},
          {"chain", {{"a", chain.a}, {"b", chain.b}, {"lambda_max", chain.lambda_max}, {"n", chain.grid_size}}},
          {"D_first", d.curve.empty() ? 0.0 : d.curve.front().d},
          {"D_last", d.curve.empty() ? 0.0 : d.curve.back().d}};
}

json to_json(const TimingReport& r) {
  return {{"U_bas", r.u_baseline}, {"U_rev", r.u_reversed}, {"q_rev", r.q_reversed}, {"difference", r.difference}};
}

json to_json(const OracleVerdict& v) {
  return {{"oracle_value", v.oracle_value},
          {"solver_value", v.solver_value},
          {"abs_gap", v.abs_gap},
          {"tolerance", v.tolerance},
          {"witness",
           {{"p_minus", v.witness.p_minus},
            {"p_plus", v.witness.p_plus},
            {"alpha", v.witness.alpha},
            {"q", v.witness.q},
            {"lambda", v.witness.lambda}}},
          {"pass", v.pass},
          {"attained", v.attained}};
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  namespace fs = std::filesystem;
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IoError(fmt::format("write to '{}' failed", tmp.string()));
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError(fmt::format("cannot move output into '{}'", path.string()));
  }
}

}  // namespace delegation
