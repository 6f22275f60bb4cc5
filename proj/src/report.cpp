#include "wno/report.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"

namespace wno {

namespace {

std::vector<NonlocalVarInfo> describe_table(const NonlocalVarTable& table, const Naming& names) {
  std::vector<NonlocalVarInfo> out;
  for (int id = 0; id < table.size(); ++id) {
    const auto& e = table.entry(id);
    out.push_back({e.name, e.density.to_string(names), e.level, e.note});
  }
  return out;
}

BracketInfo describe_bracket(const BracketOutcome& b, const Naming& names) {
  BracketInfo out;
  out.three_vector = b.three_vector.to_string(names);
  for (const auto& x : b.el.du) out.el_du.push_back(x.to_string(names));
  for (const auto& x : b.el.dp) out.el_dp.push_back(x.to_string(names));
  out.trivial = b.trivial;
  out.independence_assumed = b.independence_assumed;
  out.coefficients = b.coefficient_report;
  return out;
}

// Resolves a name to an operator; first-order blocks are built into one.
std::optional<WNOperator> lookup(const OperatorFile& file, const std::string& name) {
  if (const auto* d = file.find_operator(name)) return to_operator(file, *d);
  if (const auto* d = file.find_firstorder(name)) return build_operator(to_metric(file, *d));
  return std::nullopt;
}

template <class F>
Report guarded(const std::string& command, F&& body) {
  try {
    return body();
  } catch (const UnsupportedStructure& e) {
    return error_report(command, "unsupported", e.what());
  } catch (const SingularMetric& e) {
    return error_report(command, "singular-metric", e.what());
  }
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

}  // namespace

std::string Report::verdict() const {
  if (error_kind) return "error";
  if (command == "bracket") return bracket && bracket->trivial ? "trivial" : "nontrivial";
  if (command == "geom") {
    bool all = std::all_of(conditions.begin(), conditions.end(), [](const ConditionVerdict& c) { return c.ok; });
    return all && hamiltonian.value_or(false) ? "hamiltonian" : "not-hamiltonian";
  }
  return hamiltonian.value_or(false) ? "hamiltonian" : "not-hamiltonian";
}

int Report::exit_code() const {
  if (error_kind) return *error_kind == "unsupported" || *error_kind == "singular-metric" ? kExitUnsupported : kExitUsage;
  const std::string v = verdict();
  return v == "hamiltonian" || v == "trivial" ? kExitYes : kExitNo;
}

Report error_report(const std::string& command, const std::string& kind, const std::string& message) {
  Report r;
  r.command = command;
  r.error_kind = kind;
  r.error_message = message;
  return r;
}

Report run_check(const OperatorFile& file, const std::string& name) {
  return guarded("check", [&] {
    auto op = lookup(file, name);
    if (!op) return error_report("check", "usage", "no operator named '" + name + "'");
    Report r;
    r.command = "check";
    r.operators = {name};
    r.fields = file.fields;
    HamiltonianVerdict v = is_hamiltonian(*op, file.fields);
    const Naming names = v.table.naming(file.fields);
    r.skew.push_back({name, v.skew.skew, v.skew.witness});
    r.bracket = describe_bracket(v.bracket, names);
    r.nonlocal_variables = describe_table(v.table, names);
    r.hamiltonian = v.hamiltonian;
    if (v.bracket.independence_assumed)
      r.warnings.push_back("the verdict treats distinct nonlocal monomials as linearly independent");
    return r;
  });
}

Report run_bracket(const OperatorFile& file, const std::string& p, const std::string& q) {
  return guarded("bracket", [&] {
    auto a = lookup(file, p);
    if (!a) return error_report("bracket", "usage", "no operator named '" + p + "'");
    auto b = lookup(file, q);
    if (!b) return error_report("bracket", "usage", "no operator named '" + q + "'");
    Report r;
    r.command = "bracket";
    r.operators = {p, q};
    r.fields = file.fields;
    NonlocalVarTable table;
    const Naming plain = file.naming();
    for (const auto& [name, op] : {std::pair{p, &*a}, std::pair{q, &*b}}) {
      SkewResult s = skew_check(*op, plain);
      r.skew.push_back({name, s.skew, s.witness});
      if (!s.skew) r.warnings.push_back("operator '" + name + "' is not skew-adjoint; the bracket sees only its skew part");
    }
    WNOperator ca = canonical_tails(*a);
    WNOperator cb = p == q ? ca : canonical_tails(*b);
    BracketOutcome out = schouten_bracket(ca, cb, table, file.fields);
    const Naming names = table.naming(file.fields);
    r.bracket = describe_bracket(out, names);
    r.nonlocal_variables = describe_table(table, names);
    r.show_el = true;
    if (out.independence_assumed)
      r.warnings.push_back("the verdict treats distinct nonlocal monomials as linearly independent");
    return r;
  });
}

Report run_geom(const OperatorFile& file, const std::string& name) {
  return guarded("geom", [&] {
    const auto* d = file.find_firstorder(name);
    if (!d) return error_report("geom", "usage", "no first-order block named '" + name + "'");
    Report r;
    r.command = "geom";
    r.operators = {name};
    r.fields = file.fields;
    MetricData m = to_metric(file, *d);
    r.conditions = check_conditions(m, file.naming());
    HamiltonianVerdict v = is_hamiltonian(build_operator(m), file.fields);
    const Naming names = v.table.naming(file.fields);
    r.skew.push_back({name, v.skew.skew, v.skew.witness});
    r.bracket = describe_bracket(v.bracket, names);
    r.nonlocal_variables = describe_table(v.table, names);
    r.hamiltonian = v.hamiltonian;
    bool all = std::all_of(r.conditions.begin(), r.conditions.end(), [](const ConditionVerdict& c) { return c.ok; });
    if (all != v.hamiltonian)
      r.warnings.push_back("the geometric conditions and the bracket computation disagree");
    if (v.bracket.independence_assumed)
      r.warnings.push_back("the bracket verdict treats distinct nonlocal monomials as linearly independent");
    return r;
  });
}

std::string render_text(const Report& r) {
  std::ostringstream out;
  if (r.error_kind) {
    out << "error (" << *r.error_kind << "): " << r.error_message.value_or("") << "\n";
    return out.str();
  }
  auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : ", ") + x;
    return s;
  };
  if (r.command == "bracket") out << "bracket [" << r.operators.at(0) << ", " << r.operators.at(1) << "]";
  else if (r.command == "geom") out << "first-order operator " << r.operators.at(0);
  else out << "operator " << r.operators.at(0);
  out << " (fields: " << join(r.fields) << ")\n";

  for (const auto& s : r.skew) {
    out << "skew-adjoint";
    if (r.skew.size() > 1) out << " (" << s.operator_name << ")";
    out << ": " << yes_no(s.ok);
    if (!s.ok) out << "  [P + P* has " << s.witness << "]";
    out << "\n";
  }

  if (r.command == "geom") {
    out << "conditions:\n";
    std::size_t width = 0;
    for (const auto& c : r.conditions) width = std::max(width, c.name.size());
    for (const auto& c : r.conditions) {
      out << "  " << c.name << std::string(width - c.name.size() + 2, ' ') << (c.ok ? "ok    " : "FAILED") << "  "
          << c.statement;
      if (!c.ok) out << "  [" << c.witness << "]";
      out << "\n";
    }
  }

  if (!r.nonlocal_variables.empty()) {
    out << "nonlocal variables:\n";
    for (const auto& v : r.nonlocal_variables)
      out << "  " << v.name << " = D^-1(" << v.density << ")  [level " << v.level << ", " << v.origin << "]\n";
  }

  if (r.bracket) {
    const auto& b = *r.bracket;
    const std::string lhs =
        r.command == "bracket" ? "[" + r.operators.at(0) + "," + r.operators.at(1) + "]" : "[P,P]";
    out << lhs << " = " << b.three_vector << "\n";
    out << "Euler-Lagrange: " << (b.trivial ? "zero" : "nonzero") << "\n";
    if (r.show_el) {
      for (std::size_t i = 0; i < b.el_du.size(); ++i) out << "  du[" << i + 1 << "] = " << b.el_du[i] << "\n";
      for (std::size_t i = 0; i < b.el_dp.size(); ++i) out << "  dp[" << i + 1 << "] = " << b.el_dp[i] << "\n";
    } else {
      for (const auto& c : b.coefficients)
        out << "  " << c.slot << "  coefficient of " << c.monomial << ": " << c.coefficient << "\n";
    }
  }

  for (const auto& w : r.warnings) out << "warning: " << w << "\n";
  if (r.command == "geom") {
    bool all = std::all_of(r.conditions.begin(), r.conditions.end(), [](const ConditionVerdict& c) { return c.ok; });
    out << "CONDITIONS: " << (all ? "all satisfied" : "violated") << "\n";
    out << "HAMILTONIAN (bracket cross-check): " << yes_no(r.hamiltonian.value_or(false)) << "\n";
  } else if (r.command == "bracket") {
    out << "TRIVIAL: " << yes_no(r.bracket && r.bracket->trivial) << "\n";
  } else {
    out << "HAMILTONIAN: " << yes_no(r.hamiltonian.value_or(false)) << "\n";
  }
  if (r.timing_ms) out << "time: " << *r.timing_ms << " ms\n";
  return out.str();
}

std::string render_json(const Report& r) {
  using nlohmann::json;
  json j;
  j["schema"] = "wno-report/1";
  j["command"] = r.command;
  j["verdict"] = r.verdict();
  j["exit_code"] = r.exit_code();
  if (r.error_kind) {
    j["error"] = {{"kind", *r.error_kind}, {"message", r.error_message.value_or("")}};
    return j.dump(2) + "\n";
  }
  j["operators"] = r.operators;
  j["fields"] = r.fields;
  j["skew"] = json::array();
  for (const auto& s : r.skew) j["skew"].push_back({{"operator", s.operator_name}, {"ok", s.ok}, {"witness", s.witness}});
  j["nonlocal_variables"] = json::array();
  for (const auto& v : r.nonlocal_variables)
    j["nonlocal_variables"].push_back(
        {{"name", v.name}, {"density", v.density}, {"level", v.level}, {"origin", v.origin}});
  if (r.bracket) {
    const auto& b = *r.bracket;
    json coeffs = json::array();
    for (const auto& c : b.coefficients)
      coeffs.push_back({{"slot", c.slot}, {"monomial", c.monomial}, {"coefficient", c.coefficient}});
    j["bracket"] = {{"three_vector", b.three_vector},
                    {"el", {{"du", b.el_du}, {"dp", b.el_dp}}},
                    {"trivial", b.trivial},
                    {"independence_assumed", b.independence_assumed},
                    {"coefficients", coeffs}};
  }
  if (r.command == "geom") {
    j["conditions"] = json::array();
    for (const auto& c : r.conditions)
      j["conditions"].push_back({{"name", c.name}, {"statement", c.statement}, {"ok", c.ok}, {"witness", c.witness}});
  }
  if (r.hamiltonian) j["hamiltonian"] = *r.hamiltonian;
  j["warnings"] = r.warnings;
  if (r.timing_ms) j["timing_ms"] = *r.timing_ms;
  return j.dump(2) + "\n";
}

}  // namespace wno
