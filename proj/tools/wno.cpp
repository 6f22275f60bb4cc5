// wno: decide whether weakly nonlocal operators are Hamiltonian.
//
//   wno check   FILE NAME  [--el] [--format text|json] [--timing]
//   wno bracket FILE P Q   [--format text|json] [--timing]
//   wno geom    FILE NAME  [--format text|json] [--timing]
//
// Exit codes: 0 yes (Hamiltonian / trivial bracket), 1 no, 2 usage or parse
// error, 3 unsupported structure or singular metric.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "wno/report.hpp"

namespace {

struct Options {
  std::string file;
  std::string name;
  std::string second;
  std::string format = "text";
  bool el = false;
  bool timing = false;
};

int emit(const wno::Report& r, const Options& o) {
  if (o.format == "json") {
    std::cout << wno::render_json(r);
  } else if (r.error_kind) {
    std::cerr << "wno: " << wno::render_text(r);
  } else {
    std::cout << wno::render_text(r);
  }
  return r.exit_code();
}

int run(const std::string& command, const Options& o) {
  std::ifstream in(o.file, std::ios::binary);
  if (!in) return emit(wno::error_report(command, "usage", "cannot read '" + o.file + "'"), o);
  std::stringstream buf;
  buf << in.rdbuf();

  wno::OperatorFile file;
  try {
    file = wno::parse(buf.str());
  } catch (const wno::ParseError& e) {
    return emit(wno::error_report(command, "parse", o.file + ":" + e.what()), o);
  }

  const auto start = std::chrono::steady_clock::now();
  wno::Report r = command == "check"     ? wno::run_check(file, o.name)
                  : command == "bracket" ? wno::run_bracket(file, o.name, o.second)
                                         : wno::run_geom(file, o.name);
  if (o.timing)
    r.timing_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  if (command == "check") r.show_el = o.el;
  return emit(r, o);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hamiltonian property of weakly nonlocal operators via the variational Schouten bracket"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&o](CLI::App* sub) {
    sub->add_option("FILE", o.file, "operator file")->required();
    sub->add_option("--format", o.format, "output format")->check(CLI::IsMember({"text", "json"}));
    sub->add_flag("--timing", o.timing, "report the computation time");
  };

  auto* check = app.add_subcommand("check", "skew-adjointness and [P,P] for one operator");
  add_common(check);
  check->add_option("NAME", o.name, "operator or first-order block")->required();
  check->add_flag("--el", o.el, "print the full Euler-Lagrange tuple");

  auto* bracket = app.add_subcommand("bracket", "Schouten bracket [P,Q] of two operators");
  add_common(bracket);
  bracket->add_option("P", o.name, "first operator")->required();
  bracket->add_option("Q", o.second, "second operator")->required();

  auto* geom = app.add_subcommand("geom", "geometric conditions for a first-order block");
  add_common(geom);
  geom->add_option("NAME", o.name, "first-order block")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return wno::kExitUsage;
  }

  if (check->parsed()) return run("check", o);
  if (bracket->parsed()) return run("bracket", o);
  return run("geom", o);
}
