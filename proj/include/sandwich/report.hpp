#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "sandwich/bump_lab.hpp"
#include "sandwich/decider.hpp"
#include "sandwich/errors.hpp"

namespace sandwich::report {

inline constexpr const char* kSchema = "sandwich-report/1";
inline constexpr const char* kCsvSchema = "sandwich-scan-csv/1";
const char* tool_version();

struct Citation {
  std::string tag, name, statement;
  friend bool operator==(const Citation&, const Citation&) = default;
};

/// One self-describing document per invocation.
struct Report {
  std::string schema = kSchema;
  std::string version = tool_version();
  std::string command;
  nlohmann::json query = nlohmann::json::object();
  std::uint64_t seed = 1;
  std::string quadrature_profile = "default";
  lab::QuadratureConfig quadrature;
  nlohmann::json result = nlohmann::json::object();
  std::vector<Citation> citations;
  int exit_code = 0;

  nlohmann::json to_json() const;
  static Report from_json(const nlohmann::json& j);
  /// Sorted keys, two-space indent, trailing newline.
  std::string dump() const;
  static Report parse(const std::string& text);

  friend bool operator==(const Report& a, const Report& b);
};

/// Seed and quadrature profile shared by all commands of one run.
struct RunContext {
  std::uint64_t seed = 1;
  std::string quadrature_profile = "default";

  /// Profile from SANDWICH_QUADRATURE when set.
  static RunContext from_env();
  lab::QuadratureConfig quadrature() const;
};

/// 0 Feasible, 10 Infeasible, 11 Borderline, 12 Undetermined.
int exit_code(VerdictStatus s);
/// 64 parse/usage, 65 validation and preconditions, 70 numerical failures.
int exit_code(ErrorCode c);

nlohmann::json to_json(const Verdict& v);
nlohmann::json to_json(const ObstructionRecipe& r);

struct DecideArgs {
  std::string from, to, domain;  // empty: seq for sequence families, else cube:1
};

struct ScanArgs {
  std::string from, to, domain;  // empty: seq for sequence families, else cube:1
  std::vector<std::string> deltas;
  /// Explicit recipe flags; used instead of the verdict when `construction`
  /// is set.
  std::string construction, mode, predicted;
  std::map<std::string, std::string> params;
};

struct TableArgs {
  std::string from_template, to_template, domain;
  /// Placeholder name and values; cells are the product of all value lists.
  std::vector<std::pair<std::string, std::vector<std::string>>> variables;
  std::size_t max_cells = 10000;
};

struct PackingArgs {
  std::string domain;
  std::vector<std::string> deltas;
  std::string alpha = "1";
};

struct IrkbsArgs {
  std::string series;
  int truncation = 24;
  std::string domain_radius = "inf";
  std::string measure_class = "all";
  std::string support_radius = "inf";
  std::string beta_sup = "1";
  std::string beta_support = "inf";
};

Report cmd_decide(const DecideArgs& a, const RunContext& ctx = {});
Report cmd_scan(const ScanArgs& a, const RunContext& ctx = {});
Report cmd_table(const TableArgs& a, const RunContext& ctx = {});
Report cmd_packing(const PackingArgs& a, const RunContext& ctx = {});
Report cmd_irkbs(const IrkbsArgs& a, const RunContext& ctx = {});

/// Scan points of a scan report as CSV, columns delta,n,ratio,mode.
std::string scan_csv(const Report& r);

}  // namespace sandwich::report
