#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace {

using nlohmann::json;

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

std::string sample(const std::string& name) { return std::string(WNO_SAMPLES_DIR) + "/" + name; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Run wno(const std::string& args) {
  static int counter = 0;
  const auto err_path = std::filesystem::temp_directory_path() /
                        ("wno-cli-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  const std::string cmd = std::string("'") + WNO_BINARY + "' " + args + " 2>'" + err_path.string() + "'";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = read_file(err_path.string());
  std::filesystem::remove(err_path);
  return r;
}

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

// The verdict-bearing content of a text report, in the same shape as
// extracted from the JSON form.
struct Verdicts {
  std::vector<bool> skew;
  std::optional<bool> hamiltonian;
  std::optional<bool> trivial;
  std::optional<bool> el_zero;
  std::vector<std::string> coefficients;  // "slot|monomial|coefficient"
  std::vector<std::string> el;            // "du[1] = ..."
  std::map<std::string, bool> conditions;
  bool operator==(const Verdicts&) const = default;
};

Verdicts from_text(const std::string& text) {
  Verdicts v;
  bool in_conditions = false;
  for (const auto& l : lines(text)) {
    if (l.rfind("skew-adjoint", 0) == 0) v.skew.push_back(contains(l, ": yes"));
    if (l.rfind("HAMILTONIAN", 0) == 0) v.hamiltonian = contains(l, ": yes");
    if (l.rfind("TRIVIAL", 0) == 0) v.trivial = contains(l, ": yes");
    if (l.rfind("Euler-Lagrange", 0) == 0) v.el_zero = contains(l, ": zero");
    if (l.rfind("conditions:", 0) == 0) {
      in_conditions = true;
      continue;
    }
    if (in_conditions) {
      if (l.rfind("  ", 0) != 0) {
        in_conditions = false;
      } else {
        std::istringstream in(l);
        std::string name, status;
        in >> name >> status;
        v.conditions[name] = status == "ok";
        continue;
      }
    }
    if (l.rfind("  du[", 0) == 0 || l.rfind("  dp[", 0) == 0) {
      if (contains(l, " = ")) v.el.push_back(l.substr(2));
    }
    const auto at = l.find("  coefficient of ");
    if (at != std::string::npos) {
      const auto colon = l.find(": ", at);
      std::string slot = l.substr(2, at - 2);
      std::string mono = l.substr(at + 17, colon - at - 17);
      v.coefficients.push_back(slot + "|" + mono + "|" + l.substr(colon + 2));
    }
  }
  return v;
}

Verdicts from_json(const json& j, const std::string& command) {
  Verdicts v;
  for (const auto& s : j.at("skew")) v.skew.push_back(s.at("ok").get<bool>());
  if (j.contains("hamiltonian")) v.hamiltonian = j.at("hamiltonian").get<bool>();
  const json& b = j.at("bracket");
  if (command == "bracket") v.trivial = b.at("trivial").get<bool>();
  bool zero = true;
  for (const char* key : {"du", "dp"}) {
    int i = 0;
    for (const auto& e : b.at("el").at(key)) {
      zero = zero && e.get<std::string>() == "0";
      v.el.push_back(std::string(key) + "[" + std::to_string(++i) + "] = " + e.get<std::string>());
    }
  }
  v.el_zero = zero;
  for (const auto& c : b.at("coefficients"))
    v.coefficients.push_back(c.at("slot").get<std::string>() + "|" + c.at("monomial").get<std::string>() + "|" +
                             c.at("coefficient").get<std::string>());
  if (j.contains("conditions"))
    for (const auto& c : j.at("conditions")) v.conditions[c.at("name").get<std::string>()] = c.at("ok").get<bool>();
  return v;
}

const std::vector<std::pair<std::string, int>> kInvocations = {
    {"check " + sample("kn.wno") + " KN", 0},
    {"check " + sample("mkdv.wno") + " mkdv", 0},
    {"check " + sample("mkdv.wno") + " L", 1},
    {"check " + sample("scalar.wno") + " M", 1},
    {"bracket " + sample("kn.wno") + " KN KN", 0},
    {"bracket " + sample("mkdv.wno") + " mkdv mkdv", 0},
    {"bracket " + sample("mkdv.wno") + " L L", 1},
    {"bracket " + sample("mkdv.wno") + " L mkdv", 1},
    {"geom " + sample("sphere.wno") + " sphere", 0},
    {"geom " + sample("sphere.wno") + " sphere2", 1},
    {"geom " + sample("scalar.wno") + " constant", 0},
    {"geom " + sample("scalar.wno") + " linear", 0},
};

}  // namespace

TEST_CASE("check: Krichever-Novikov is Hamiltonian") {
  Run r = wno("check " + sample("kn.wno") + " KN");
  CHECK(r.code == 0);
  CHECK(contains(r.out, "HAMILTONIAN: yes"));
  CHECK(contains(r.out, "r1 = D^-1(u_x*p)"));
  CHECK(r.err.empty());
}

TEST_CASE("check: the local mKdV part is not, and the report names p p_x p_3x") {
  Run r = wno("check " + sample("mkdv.wno") + " L");
  CHECK(r.code == 1);
  CHECK(contains(r.out, "HAMILTONIAN: no"));
  CHECK(contains(r.out, "[P,P] = 16/3*u*p*p_x*p_3x"));
  CHECK(contains(r.out, "du[1]  coefficient of p*p_x*p_3x: 16/3"));

  Run el = wno("check " + sample("mkdv.wno") + " L --el");
  CHECK(el.code == 1);
  CHECK(contains(el.out, "du[1] = 16/3*p*p_x*p_3x"));
  // δ/δp of (16/3) u p p_x p_3x, expanded by hand.
  CHECK(contains(el.out, "dp[1] = -16/3*u_3x*p*p_x - 16*u_2x*p*p_2x - 32/3*u_x*p*p_3x - 16*u_x*p_x*p_2x"));
}

TEST_CASE("check: the full mKdV operator is Hamiltonian") {
  Run r = wno("check " + sample("mkdv.wno") + " mkdv");
  CHECK(r.code == 0);
  CHECK(contains(r.out, "Euler-Lagrange: zero"));
}

TEST_CASE("bracket: worked outcomes") {
  Run ll = wno("bracket " + sample("mkdv.wno") + " L L");
  CHECK(ll.code == 1);
  CHECK(contains(ll.out, "[L,L] = 16/3*u*p*p_x*p_3x"));
  Run full = wno("bracket " + sample("mkdv.wno") + " mkdv mkdv --format json");
  CHECK(full.code == 0);
  json j = json::parse(full.out);
  CHECK(j["bracket"]["el"]["du"] == json::array({"0"}));
  CHECK(j["bracket"]["el"]["dp"] == json::array({"0"}));
  Run kn = wno("bracket " + sample("kn.wno") + " KN KN");
  CHECK(kn.code == 0);
  CHECK(contains(kn.out, "[KN,KN] = 0"));
}

TEST_CASE("geom: conditions and cross-check agree") {
  Run ok = wno("geom " + sample("sphere.wno") + " sphere");
  CHECK(ok.code == 0);
  CHECK(contains(ok.out, "CONDITIONS: all satisfied"));
  CHECK(contains(ok.out, "HAMILTONIAN (bracket cross-check): yes"));

  Run bad = wno("geom " + sample("sphere.wno") + " sphere2");
  CHECK(bad.code == 1);
  CHECK(contains(bad.out, "CONDITIONS: violated"));
  CHECK(contains(bad.out, "HAMILTONIAN (bracket cross-check): no"));
  CHECK(contains(bad.out, "gauss                 FAILED"));

  Run singular = wno("geom " + sample("singular.wno") + " flatline");
  CHECK(singular.code == 3);
  CHECK(contains(singular.err, "singular-metric"));
}

TEST_CASE("errors: parse, usage and missing names exit 2") {
  Run broken = wno("check " + sample("broken.wno") + " A");
  CHECK(broken.code == 2);
  CHECK(contains(broken.err, "5:11: index-range error"));
  CHECK(broken.out.empty());

  Run json_err = wno("check " + sample("broken.wno") + " A --format json");
  CHECK(json_err.code == 2);
  json j = json::parse(json_err.out);
  CHECK(j["verdict"] == "error");
  CHECK(j["error"]["kind"] == "parse");
  CHECK(j["exit_code"] == 2);

  CHECK(wno("check " + sample("does-not-exist.wno") + " A").code == 2);
  CHECK(wno("check " + sample("kn.wno") + " NOPE").code == 2);
  CHECK(wno("geom " + sample("kn.wno") + " KN").code == 2);
  CHECK(wno("frobnicate").code == 2);
  CHECK(wno("check " + sample("kn.wno") + " KN --format yaml").code == 2);
}

TEST_CASE("exit codes follow the report, text and JSON carry the same verdicts") {
  for (const auto& [args, code] : kInvocations) {
    INFO(args);
    Run text = wno(args);
    Run js = wno(args + " --format json");
    CHECK(text.code == code);
    CHECK(js.code == code);
    json j = json::parse(js.out);
    CHECK(j["exit_code"] == code);
    CHECK(j["schema"] == "wno-report/1");
    const std::string command = args.substr(0, args.find(' '));
    // The JSON form always carries both the coefficient table and the full
    // tuple; the text form shows whichever detail applies to the command.
    Verdicts t = from_text(text.out), m = from_json(j, command);
    if (t.coefficients.empty()) m.coefficients.clear();
    if (t.el.empty()) m.el.clear();
    CHECK(t == m);
    if (command == "check") {
      Verdicts full = from_text(wno(args + " --el").out);
      CHECK(full.el == from_json(j, command).el);
      CHECK(full.hamiltonian == t.hamiltonian);
    }
  }
}

TEST_CASE("JSON output is byte-stable and matches the stored reports") {
  const std::vector<std::pair<std::string, std::string>> golden = {
      {"check " + sample("kn.wno") + " KN", "kn-check.json"},
      {"check " + sample("mkdv.wno") + " L", "mkdv-L-check.json"},
      {"geom " + sample("sphere.wno") + " sphere2", "sphere2-geom.json"},
  };
  for (const auto& [args, file] : golden) {
    INFO(args);
    Run a = wno(args + " --format json");
    Run b = wno(args + " --format json");
    CHECK(a.out == b.out);
    CHECK(a.out == read_file(sample("expected/" + file)));
  }
  Run timed = wno("check " + sample("kn.wno") + " KN --format json --timing");
  CHECK(json::parse(timed.out).contains("timing_ms"));
  CHECK_FALSE(json::parse(wno("check " + sample("kn.wno") + " KN --format json").out).contains("timing_ms"));
}
