#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "support.hpp"

#include <fstream>
#include <sstream>

#include "wno/dsl.hpp"

using namespace wt;

namespace {

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(WNO_SAMPLES_DIR) + "/" + name);
  REQUIRE(in);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

ParseError parse_error(const std::string& src) {
  try {
    parse(src);
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("expected a parse error for: " << src);
  throw;
}

RationalExpr R(long a, long b = 1) { return RationalExpr(Rational(a, b)); }

// Random trimmed entry; coefficients reach third-order jets so that every
// suffix spelling gets printed.
DiffEntry random_entry(Gen& g, int fields) {
  DiffEntry d(g.uniform(1, 4));
  for (auto& c : d)
    if (!g.chance(3)) c = g.coefficient(fields, 3);
  d.back() = g.coefficient(fields, 3);
  return d;
}

RationalExpr order_zero(Gen& g, int fields) { return g.coefficient(fields, 0); }

OperatorFile random_file(Gen& g) {
  static const std::vector<std::vector<std::string>> pools = {{"u"}, {"u1", "u2"}, {"a", "b", "c"}, {"v"}};
  OperatorFile f;
  f.fields = pools[g.uniform(0, static_cast<int>(pools.size()) - 1)];
  const int n = f.n();
  const int ops = g.uniform(0, 3);
  for (int k = 0; k < ops; ++k) {
    OperatorDecl d;
    d.name = "P" + std::to_string(k);
    const int locals = g.uniform(0, 3);
    for (int e = 0; e < locals; ++e) d.local.push_back({g.uniform(0, n - 1), g.uniform(0, n - 1), random_entry(g, n)});
    const int tails = g.uniform(0, 2);
    for (int e = 0; e < tails; ++e)
      d.nonlocal.push_back({g.uniform(0, n - 1), g.uniform(0, n - 1), g.rational(), g.coefficient(n, 3),
                            g.coefficient(n, 3)});
    f.operators.push_back(std::move(d));
  }
  const int metrics = g.uniform(0, 2);
  for (int k = 0; k < metrics; ++k) {
    FirstOrderDecl d;
    d.name = "g" + std::to_string(k);
    const int gs = g.uniform(1, 3), ws = g.uniform(0, 3);
    for (int e = 0; e < gs; ++e) d.g.push_back({g.uniform(0, n - 1), g.uniform(0, n - 1), order_zero(g, n)});
    for (int e = 0; e < ws; ++e) d.w.push_back({g.uniform(0, n - 1), g.uniform(0, n - 1), order_zero(g, n)});
    f.firstorders.push_back(std::move(d));
  }
  return f;
}

}  // namespace

TEST_CASE("the Krichever-Novikov declaration is u_x D^-1 u_x") {
  OperatorFile f = parse("fields u; operator KN { nonlocal[1,1]: 1*[u_x|u_x]; }");
  REQUIRE(f.fields == std::vector<std::string>{"u"});
  const OperatorDecl* d = f.find_operator("KN");
  REQUIRE(d);
  WNOperator expect(1);
  expect.tails.push_back({1, {u(1)}, {u(1)}});
  CHECK(equivalent(to_operator(f, *d), expect));
  CHECK(to_operator(f, *d).local[0][0].empty());
  CHECK(f.find_operator("missing") == nullptr);
  CHECK(f.find_firstorder("KN") == nullptr);
}

TEST_CASE("the modified KdV declaration") {
  OperatorFile f = parse(
      "fields u;\n"
      "operator mkdv2 { local[1,1]: D^3 + (2/3)*u^2*D + (2/3)*u*u_x; nonlocal[1,1]: -(2/3)*[u_x|u_x]; }");
  WNOperator p = to_operator(f, *f.find_operator("mkdv2"));
  WNOperator expect(1);
  expect.at(0, 0, 3) = R(1);
  expect.at(0, 0, 1) = R(2, 3) * u() * u();
  expect.at(0, 0, 0) = R(2, 3) * u() * u(1);
  expect.tails.push_back({Rational(-2, 3), {u(1)}, {u(1)}});
  CHECK(equivalent(p, expect));
  CHECK(p.tails.at(0).e == Rational(-2, 3));
}

TEST_CASE("derivative spellings and multi-component fields") {
  OperatorFile f = parse(
      "fields u1, u2;  # two components\n"
      "operator A {\n"
      "  local[1,2]: u1_xx*D^2 + u2_2x*D - u1_3x + u2_x/(1 + u1);\n"
      "  local[2,1]: D^0;\n"
      "}\n");
  WNOperator p = to_operator(f, *f.find_operator("A"));
  CHECK(p.at(0, 1, 2) == u(2, 0));
  CHECK(p.at(0, 1, 1) == u(2, 1));
  CHECK(p.at(0, 1, 0) == -u(3, 0) + u(1, 1) / (R(1) + u(0, 0)));
  CHECK(p.at(1, 0, 0) == R(1));
  // Repeated entries for the same position add up.
  OperatorFile twice = parse("fields u; operator A { local[1,1]: D; local[1,1]: u*D; }");
  CHECK(to_operator(twice, twice.operators[0]).at(0, 0, 1) == R(1) + u());
}

TEST_CASE("first-order blocks become metric data") {
  OperatorFile f = parse(slurp("sphere.wno"));
  REQUIRE(f.firstorders.size() == 2);
  MetricData m = to_metric(f, *f.find_firstorder("sphere"));
  RationalExpr c = R(1) + (u(0, 0) * u(0, 0) + u(0, 1) * u(0, 1)) / R(4);
  CHECK(m.g_upper[0][0] == c * c);
  CHECK(m.g_upper[1][1] == c * c);
  CHECK(m.g_upper[0][1].is_zero());
  CHECK(m.W[0][0] == R(1));
  CHECK(to_metric(f, *f.find_firstorder("sphere2")).W[1][1] == R(2));
}

TEST_CASE("diagnostics are distinct and positioned") {
  ParseError range = parse_error("fields u;\noperator A {\n  local[1,2]: D;\n}");
  CHECK(range.kind() == ParseErrorKind::IndexRange);
  CHECK(range.line() == 3);
  CHECK(range.column() == 11);
  CHECK(std::string(range.what()).find("3:11: index-range error") == 0);

  ParseError field = parse_error("fields u;\noperator A { local[1,1]: v*D; }");
  CHECK(field.kind() == ParseErrorKind::UndeclaredField);
  CHECK(field.line() == 2);
  CHECK(field.column() == 26);
  CHECK(std::string(field.what()).find("undeclared-field error") != std::string::npos);

  ParseError syntax = parse_error("fields u;\noperator A { local[1,1]: D }");
  CHECK(syntax.kind() == ParseErrorKind::Syntax);
  CHECK(syntax.line() == 2);
  CHECK(syntax.column() == 28);
  CHECK(std::string(syntax.what()).find("syntax error") != std::string::npos);

  CHECK(std::string(range.what()) != std::string(field.what()));
  CHECK(to_string(ParseErrorKind::Semantic) == "semantic");
}

TEST_CASE("floating-point literals are rejected") {
  for (const char* src : {"fields u; operator A { local[1,1]: 0.5*D; }",
                          "fields u; operator A { nonlocal[1,1]: 1.0*[u_x|u_x]; }",
                          "fields u; firstorder g { g[1,1]: 1e3; }"}) {
    ParseError e = parse_error(src);
    CHECK(e.kind() == ParseErrorKind::Syntax);
  }
  CHECK_NOTHROW(parse("fields u; operator A { local[1,1]: (1/2)*D; }"));
}

TEST_CASE("semantic errors") {
  const char* sources[] = {
      "fields D;",
      "fields u_1;",
      "fields u, u;",
      "fields u; operator A { } operator A { }",
      "fields u; operator A { local[1,1]: 1/D; }",
      "fields u; operator A { local[1,1]: D^-1; }",
      "fields u; operator A { nonlocal[1,1]: [D|u_x]; }",
      "fields u; firstorder g { g[1,1]: u_x; }",
      "fields u; firstorder g { w[1,1]: u; }",
      "fields u; operator A { local[1,1]: 1/(u - u); }",
      "fields u; operator A { nonlocal[1,1]: 1/0*[u|u]; }",
  };
  for (const char* src : sources) {
    INFO(src);
    CHECK_THROWS_AS(parse(src), ParseError);
  }
  CHECK(parse_error("fields D;").kind() == ParseErrorKind::Semantic);
  CHECK(parse_error("fields u; operator A { } operator A { }").kind() == ParseErrorKind::Semantic);
  CHECK(parse_error("fields u; firstorder g { w[1,1]: 1; g[1,1]: 1; }").kind() == ParseErrorKind::Syntax);
  CHECK(parse_error("fields u; operator A { local[1,1]: u_y; }").kind() == ParseErrorKind::Syntax);
}

TEST_CASE("printing and reparsing the samples is the identity") {
  for (const char* name : {"kn.wno", "mkdv.wno", "sphere.wno"}) {
    INFO(name);
    OperatorFile f = parse(slurp(name));
    std::string text = print(f);
    CHECK(parse(text) == f);
    CHECK(print(parse(text)) == text);
  }
}

TEST_CASE("property: print/parse round trip on random files") {
  Gen g(81);
  for (int t = 0; t < 150; ++t) {
    OperatorFile f = random_file(g);
    std::string text = print(f);
    INFO(text);
    OperatorFile back = parse(text);
    CHECK(back == f);
    for (std::size_t k = 0; k < f.operators.size(); ++k)
      CHECK(equivalent(to_operator(back, back.operators[k]), to_operator(f, f.operators[k])));
  }
}
