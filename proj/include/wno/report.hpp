#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wno/dsl.hpp"

namespace wno {

enum ExitCode : int {
  kExitYes = 0,
  kExitNo = 1,
  kExitUsage = 2,
  kExitUnsupported = 3,
};

struct NonlocalVarInfo {
  std::string name;
  std::string density;
  int level = 1;
  std::string origin;
};

struct SkewInfo {
  std::string operator_name;
  bool ok = true;
  std::string witness;
};

struct BracketInfo {
  std::string three_vector;
  std::vector<std::string> el_du;
  std::vector<std::string> el_dp;
  bool trivial = false;
  bool independence_assumed = false;
  std::vector<CoefficientEntry> coefficients;
};

struct Report {
  std::string command;  // "check", "bracket" or "geom"
  std::vector<std::string> operators;
  std::vector<std::string> fields;
  std::vector<SkewInfo> skew;
  std::optional<BracketInfo> bracket;
  std::vector<NonlocalVarInfo> nonlocal_variables;
  std::vector<ConditionVerdict> conditions;       // geom only
  std::optional<bool> hamiltonian;                // check, and the geom cross-check
  std::vector<std::string> warnings;
  std::optional<std::string> error_kind;  // "usage", "parse", "unsupported", "singular-metric"
  std::optional<std::string> error_message;
  bool show_el = false;
  std::optional<double> timing_ms;

  std::string verdict() const;
  int exit_code() const;
};

Report run_check(const OperatorFile& file, const std::string& name);
Report run_bracket(const OperatorFile& file, const std::string& p, const std::string& q);
Report run_geom(const OperatorFile& file, const std::string& name);
Report error_report(const std::string& command, const std::string& kind, const std::string& message);

std::string render_text(const Report& r);
/// Single JSON document with sorted keys; byte-identical across runs unless
/// timing is requested.
std::string render_json(const Report& r);

}  // namespace wno
