#include "delegation/cli.hpp"

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "delegation/envelope.hpp"
#include "delegation/inner.hpp"
#include "delegation/oracle.hpp"
#include "delegation/outer.hpp"
#include "delegation/reference_cases.hpp"
#include "delegation/scenario_io.hpp"
#include "delegation/statics.hpp"

namespace delegation {

namespace {

using nlohmann::json;

struct Options {
  std::string scenario_path;
  std::string example;
  std::string inner_mode;
  std::size_t grid_points = 0;
  std::optional<std::uint64_t> seed;
  bool json = false;
  std::optional<double> k_v;
  std::string kv_list;
  std::string out;
  std::string range;
  std::string chain;
  std::size_t q_points = 1001;
  std::size_t resolution = 2001;
  std::string id;
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) parts.push_back(item);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

double parse_number(const std::string& text, const char* what) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument(fmt::format("{}: '{}' is not a number", what, text));
  }
  if (used != text.size() || !std::isfinite(x)) {
    throw std::invalid_argument(fmt::format("{}: '{}' is not a finite number", what, text));
  }
  return x;
}

// "0.1,0.2,0.5" or "start:stop:step"
std::vector<double> parse_kv_values(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("--kv: empty list");
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw std::invalid_argument("--kv: range must be start:stop:step");
    const double start = parse_number(parts[0], "--kv");
    const double stop = parse_number(parts[1], "--kv");
    const double step = parse_number(parts[2], "--kv");
    if (!(step > 0.0) || stop < start) throw std::invalid_argument("--kv: need step > 0 and stop >= start");
    const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9));
    for (std::size_t i = 0; i <= n; ++i) out.push_back(start + static_cast<double>(i) * step);
    return out;
  }
  for (const std::string& part : split(text, ',')) out.push_back(parse_number(part, "--kv"));
  return out;
}

KvRange parse_range(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 2) throw std::invalid_argument("--range must be lo:hi");
  KvRange r{parse_number(parts[0], "--range"), parse_number(parts[1], "--range")};
  if (!(r.lo >= 0.0 && r.lo < r.hi)) throw std::invalid_argument("--range needs 0 <= lo < hi");
  return r;
}

ChainSpec parse_chain(const std::string& text) {
  ChainSpec chain;
  if (text.empty()) return chain;
  const auto parts = split(text, ',');
  if (parts.size() != 4) throw std::invalid_argument("--chain must be a,b,lambda_max,n");
  chain.a = parse_number(parts[0], "--chain");
  chain.b = parse_number(parts[1], "--chain");
  chain.lambda_max = parse_number(parts[2], "--chain");
  const double n = parse_number(parts[3], "--chain");
  if (n < 2.0 || n != std::floor(n)) throw std::invalid_argument("--chain: n must be an integer >= 2");
  chain.grid_size = static_cast<std::size_t>(n);
  return chain;
}

Scenario load(const Options& o) {
  if (!o.example.empty() && !o.scenario_path.empty()) {
    throw std::invalid_argument("use either --scenario or --example, not both");
  }
  std::optional<Scenario> s;
  if (!o.example.empty()) {
    auto rc = reference_case(o.example);
    if (!rc) throw std::invalid_argument(fmt::format("unknown example '{}'", o.example));
    s = rc->scenario;
  } else if (!o.scenario_path.empty()) {
    s = load_scenario(o.scenario_path);
  } else {
    throw std::invalid_argument("a scenario is required (--scenario <file> or --example ex1|ex2)");
  }
  if (o.inner_mode == "bangbang") s = s->with_inner_mode(InnerMode::BangBang);
  if (o.inner_mode == "smooth") s = s->with_inner_mode(InnerMode::SmoothLinear);
  if (o.grid_points != 0) s = s->with_grid(GridSettings{o.grid_points, s->grid().refine});
  if (o.seed) s = s->with_seed(*o.seed);
  if (o.k_v) s = s->with_k_v(*o.k_v);
  return *s;
}

std::string hex(std::uint64_t x) { return fmt::format("{:016x}", x); }

std::string show(const std::optional<double>& x) { return x ? fmt::format("{:.6f}", *x) : std::string("none"); }

constexpr const char* kSmoothNote = "smooth inner rule in use; results are for reference reproduction only";

void warn_smooth(const Scenario& s, std::ostream& err) {
  if (s.inner_mode() == InnerMode::SmoothLinear) err << "note: " << kSmoothNote << '\n';
}

int cmd_solve(const Options& o, std::ostream& out, std::ostream& err) {
  const Scenario s = load(o);
  warn_smooth(s, err);
  const SolveRow row = solve_point(s);
  if (o.json) {
    json doc = to_json(row);
    doc["scenario_hash"] = hex(scenario_hash(s));
    if (s.inner_mode() == InnerMode::SmoothLinear) doc["warning"] = kSmoothNote;
    out << doc.dump(2) << '\n';
  } else {
    const std::vector<SolveRow> rows{row};
    out << result_table_text(rows);
  }
  return kExitOk;
}

int cmd_sweep(const Options& o, std::ostream& out, std::ostream& err) {
  const Scenario s = load(o);
  warn_smooth(s, err);
  const std::vector<double> ks = parse_kv_values(o.kv_list);
  const std::vector<SolveRow> rows = sweep_kv(s, ks);
  if (o.out.empty()) {
    out << (o.json ? [&] {
      json arr = json::array();
      for (const SolveRow& r : rows) arr.push_back(to_json(r));
      return arr.dump(2) + "\n";
    }()
                   : result_table_csv(rows));
    return kExitOk;
  }
  write_file_atomic(o.out, result_table_csv(rows));
  json meta = {
      {"scenario_hash", hex(scenario_hash(s))},
      {"seed", s.seed()},
      {"grid", {{"points", s.grid().points}, {"refine", s.grid().refine}}},
      {"tool_version", std::string(kToolVersion)},
      {"rows", rows.size()},
      {"k_V", ks},
      {"inner_mode", s.inner_mode() == InnerMode::SmoothLinear ? "smooth" : "bangbang"},
      {"warnings", json::array()},
  };
  if (s.inner_mode() == InnerMode::SmoothLinear) meta["warnings"].push_back(kSmoothNote);
  write_file_atomic(o.out + ".meta.json", meta.dump(2) + "\n");
  out << fmt::format("wrote {} rows to {}\n", rows.size(), o.out);
  return kExitOk;
}

int cmd_thresholds(const Options& o, std::ostream& out, std::ostream& err) {
  const Scenario s = load(o);
  warn_smooth(s, err);
  std::optional<KvRange> range;
  if (!o.range.empty()) range = parse_range(o.range);
  const ThresholdReport rep = threshold_report(s, range);
  const json doc = to_json(rep);
  if (!o.out.empty()) write_file_atomic(o.out, doc.dump(2) + "\n");
  if (o.json) {
    out << doc.dump(2) << '\n';
  } else {
    out << fmt::format("range    [{}, {}]\n", rep.range.lo, rep.range.hi);
    out << fmt::format("k_V_on   {}\n", show(rep.k_v_on));
    out << fmt::format("k_V_off  {}\n", show(rep.k_v_off));
    out << fmt::format("k_V_nm   {}\n", std::isfinite(rep.k_v_nm) ? fmt::format("{:.6f}", rep.k_v_nm) : "unbounded");
    for (const std::string& w : rep.warnings) out << "warning: " << w << '\n';
  }
  return kExitOk;
}

int cmd_diagnose(const Options& o, std::ostream& out, std::ostream& err) {
  const Scenario s = load(o);
  warn_smooth(s, err);
  const auto parts = split(o.kv_list, ',');
  if (parts.size() != 2) throw std::invalid_argument("--kv must be low,high");
  const double lo = parse_number(parts[0], "--kv");
  const double hi = parse_number(parts[1], "--kv");
  if (!(lo < hi)) throw std::invalid_argument("--kv needs low < high");
  const ChainSpec chain = parse_chain(o.chain);
  validate_chain(chain, s.prior());
  const ChainDiagnosis diag = diagnose_complementarity(s, chain, lo, hi);
  if (!o.out.empty()) write_file_atomic(o.out, d_curve_csv(diag));
  out << to_json(diag, chain).dump(2) << '\n';
  return kExitOk;
}

int cmd_timing(const Options& o, std::ostream& out, std::ostream& err) {
  const Scenario s = load(o);
  warn_smooth(s, err);
  if (o.q_points < 2) throw std::invalid_argument("--q-points must be >= 2");
  const TimingReport rep = timing_report(s, o.q_points);
  if (o.json) {
    out << to_json(rep).dump(2) << '\n';
  } else {
    out << fmt::format("U_baseline  {:.8f}\nU_reversed  {:.8f}\nq_reversed  {:.6f}\ndifference  {:.3e}\n",
                       rep.u_baseline, rep.u_reversed, rep.q_reversed, rep.difference);
  }
  return kExitOk;
}

int cmd_oracle(const Options& o, std::ostream& out, std::ostream& err) {
  const Scenario s = load(o);
  warn_smooth(s, err);
  constexpr int kInnerProbes = 101;
  const OracleVerdict two = brute_force_two_point(s, o.resolution);
  std::size_t inner_fail = 0;
  std::size_t not_attained = 0;
  for (int i = 0; i < kInnerProbes; ++i) {
    const OracleVerdict v = brute_force_inner(s, static_cast<double>(i) / (kInnerProbes - 1));
    if (!v.pass) ++inner_fail;
    if (!v.attained) ++not_attained;
  }
  const ChainSpec chain = parse_chain(o.chain);
  validate_chain(chain, s.prior());
  const OracleVerdict ch = brute_force_chain(s, chain);
  const bool pass = two.pass && inner_fail == 0 && ch.pass;
  json doc = {
      {"two_point", to_json(two)},
      {"inner", {{"probes", kInnerProbes}, {"failures", inner_fail}, {"not_attained", not_attained}}},
      {"chain", to_json(ch)},
      {"pass", pass},
  };
  if (o.json) {
    out << doc.dump(2) << '\n';
  } else {
    out << fmt::format("two_point  {}  solver {:.8f} oracle {:.8f} tol {:.2e}\n", two.pass ? "PASS" : "FAIL",
                       two.solver_value, two.oracle_value, two.tolerance);
    out << fmt::format("inner      {}  {} probes, {} failures, {} not attained\n", inner_fail == 0 ? "PASS" : "FAIL",
                       kInnerProbes, inner_fail, not_attained);
    out << fmt::format("chain      {}  solver {:.8f} oracle {:.8f} tol {:.2e}\n", ch.pass ? "PASS" : "FAIL",
                       ch.solver_value, ch.oracle_value, ch.tolerance);
  }
  return pass ? kExitOk : kExitMismatch;
}

int cmd_reproduce(const Options& o, std::ostream& out, std::ostream& err) {
  auto rc = reference_case(o.id);
  if (!rc) throw std::invalid_argument(fmt::format("unknown reference case '{}' (expected ex1 or ex2)", o.id));
  if (o.inner_mode == "bangbang") rc->scenario = rc->scenario.with_inner_mode(InnerMode::BangBang);
  if (o.inner_mode == "smooth") rc->scenario = rc->scenario.with_inner_mode(InnerMode::SmoothLinear);
  if (o.grid_points != 0) rc->scenario = rc->scenario.with_grid(GridSettings{o.grid_points, rc->scenario.grid().refine});
  warn_smooth(rc->scenario, err);
  const ReproductionReport rep = reproduce(*rc);
  if (o.json) {
    json doc = {{"id", rep.id}, {"pass", rep.all_pass}};
    json rows = json::array();
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
      json cells = json::array();
      for (const CellCheck& c : rep.cells[i]) {
        cells.push_back({{"column", c.column},
                         {"expected", c.expected},
                         {"computed", c.computed},
                         {"tolerance", c.tolerance},
                         {"pass", c.pass}});
      }
      rows.push_back({{"k_V", rep.rows[i].k_v}, {"cells", cells}});
    }
    doc["rows"] = rows;
    json checks = json::array();
    for (const ReproductionCheck& c : rep.checks) {
      checks.push_back({{"name", c.name}, {"expected", c.expected}, {"computed", c.computed}, {"pass", c.pass}});
    }
    doc["checks"] = checks;
    doc["notes"] = rep.notes;
    out << doc.dump(2) << '\n';
  } else {
    out << fmt::format("{}: {}\n", rc->id, rc->title);
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
      out << fmt::format("k_V = {:.2f}\n", rep.rows[i].k_v);
      for (const CellCheck& c : rep.cells[i]) {
        out << fmt::format("  {:<10} expected {:>8.4f} computed {:>8.4f}  {}\n", c.column, c.expected, c.computed,
                           c.pass ? "ok" : "MISMATCH");
      }
    }
    for (const ReproductionCheck& c : rep.checks) {
      out << fmt::format("{:<32} expected {:>10} computed {:>10}  {}\n", c.name, c.expected, c.computed,
                         c.pass ? "ok" : "MISMATCH");
    }
    for (const std::string& n : rep.notes) out << "note: " << n << '\n';
    out << (rep.all_pass ? "reproduction: PASS\n" : "reproduction: FAIL\n");
  }
  return rep.all_pass ? kExitOk : kExitMismatch;
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--scenario", o.scenario_path, "Scenario JSON file");
  sub->add_option("--example", o.example, "Built-in scenario (ex1 or ex2)")->check(CLI::IsMember({"ex1", "ex2"}));
  sub->add_option("--inner-mode", o.inner_mode, "Inner rule override")->check(CLI::IsMember({"bangbang", "smooth"}));
  sub->add_option("--grid-points", o.grid_points, "Posterior grid size");
  sub->add_option("--seed", o.seed, "Seed recorded in outputs and used by randomized checks");
  sub->add_flag("--json", o.json, "Machine-readable output");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Delegation with managed preferences and designed information"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);
  Options o;

  auto* solve = app.add_subcommand("solve", "Solve one scenario");
  add_common(solve, o);
  solve->add_option("--kv", o.k_v, "Override k_V");

  auto* sweep = app.add_subcommand("sweep", "Solve over a list of k_V values");
  add_common(sweep, o);
  sweep->add_option("--kv", o.kv_list, "Comma list or start:stop:step")->required();
  sweep->add_option("--out", o.out, "CSV output path (also writes <path>.meta.json)");

  auto* thresholds = app.add_subcommand("thresholds", "Locate k_V thresholds");
  add_common(thresholds, o);
  thresholds->add_option("--range", o.range, "Scan range lo:hi");
  thresholds->add_option("--out", o.out, "JSON output path");

  auto* diagnose = app.add_subcommand("diagnose", "Complementarity of management and information");
  add_common(diagnose, o);
  diagnose->add_option("--kv", o.kv_list, "low,high management costs")->required();
  diagnose->add_option("--chain", o.chain, "a,b,lambda_max,n");
  diagnose->add_option("--out", o.out, "D-curve CSV output path");

  auto* timing = app.add_subcommand("timing", "Compare baseline and reversed timing");
  add_common(timing, o);
  timing->add_option("--kv", o.k_v, "Override k_V");
  timing->add_option("--q-points", o.q_points, "Grid size for the ex-ante management level");

  auto* oracle = app.add_subcommand("oracle-check", "Compare the solver with exhaustive scans");
  add_common(oracle, o);
  oracle->add_option("--kv", o.k_v, "Override k_V");
  oracle->add_option("--resolution", o.resolution, "Two-point oracle grid size");
  oracle->add_option("--chain", o.chain, "a,b,lambda_max,n");

  auto* repro = app.add_subcommand("reproduce", "Recompute a reference case and compare");
  repro->add_option("id", o.id, "ex1 or ex2")->required();
  repro->add_option("--inner-mode", o.inner_mode, "Inner rule override")->check(CLI::IsMember({"bangbang", "smooth"}));
  repro->add_option("--grid-points", o.grid_points, "Posterior grid size");
  repro->add_flag("--json", o.json, "Machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (solve->parsed()) return cmd_solve(o, out, err);
    if (sweep->parsed()) return cmd_sweep(o, out, err);
    if (thresholds->parsed()) return cmd_thresholds(o, out, err);
    if (diagnose->parsed()) return cmd_diagnose(o, out, err);
    if (timing->parsed()) return cmd_timing(o, out, err);
    if (oracle->parsed()) return cmd_oracle(o, out, err);
    if (repro->parsed()) return cmd_reproduce(o, out, err);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitMismatch;
  }
  return kExitValidation;
}

}  // namespace delegation
