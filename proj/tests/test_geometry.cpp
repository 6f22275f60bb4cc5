#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "support.hpp"

#include "wno/geometry.hpp"

using namespace wt;

namespace {

RationalExpr R(long a, long b = 1) { return RationalExpr(Rational(a, b)); }
RationalExpr f(int field) { return u(0, field); }
RationalExpr d(const RationalExpr& x, int k) { return x.partial(JetVar{k, 0}); }

MetricData flat(int n) {
  MetricData m = MetricData::zero(n);
  for (int i = 0; i < n; ++i) m.g_upper[i][i] = 1;
  return m;
}

// g^{ij} = (1 + |u|^2/4)^2 δ^{ij}: the unit sphere in stereographic coordinates.
MetricData sphere(const RationalExpr& w) {
  MetricData m = MetricData::zero(2);
  RationalExpr c = R(1) + (f(0) * f(0) + f(1) * f(1)) / R(4);
  m.g_upper[0][0] = m.g_upper[1][1] = c * c;
  m.W[0][0] = m.W[1][1] = w;
  return m;
}

// Gaussian curvature of g_ij = λ δ_ij in two dimensions: K = -Δ(log λ)/(2λ).
RationalExpr conformal_curvature(const RationalExpr& lambda) {
  RationalExpr lap;
  for (int k = 0; k < 2; ++k) lap += d(d(lambda, k) / lambda, k);
  return -lap / (R(2) * lambda);
}

std::vector<std::string> failing(const MetricData& m) {
  std::vector<std::string> out;
  for (const auto& c : check_conditions(m))
    if (!c.ok) out.push_back(c.name);
  return out;
}

bool all_ok(const MetricData& m) { return failing(m).empty(); }

bool hamiltonian(const MetricData& m) { return is_hamiltonian(build_operator(m)).hamiltonian; }

RationalExpr field_poly(Gen& g, int fields) {
  Polynomial p;
  const int terms = g.uniform(1, 3);
  for (int t = 0; t < terms; ++t) {
    Polynomial m(g.rational());
    const int vars = g.uniform(0, 2);
    for (int v = 0; v < vars; ++v) m = m * Polynomial::variable({g.uniform(0, fields - 1), 0});
    p += m;
  }
  return RationalExpr(p);
}

// Random symmetric metric that is invertible as a rational matrix. Dense
// three-component metrics are slow to differentiate, so those stay diagonal.
MetricData random_metric(Gen& g, int n) {
  for (;;) {
    MetricData m = MetricData::zero(n);
    for (int i = 0; i < n; ++i) {
      m.g_upper[i][i] = R(1) + field_poly(g, n);
      for (int j = i + 1; j < n && n < 3; ++j)
        if (g.chance(2)) m.g_upper[i][j] = m.g_upper[j][i] = field_poly(g, n);
    }
    try {
      derive_geometry(m);
      return m;
    } catch (const SingularMetric&) {
    }
  }
}

}  // namespace

TEST_CASE("constant metrics are flat") {
  MetricData m = MetricData::zero(2);
  m.g_upper = {{R(2), R(1)}, {R(1), R(3)}};
  DerivedGeometry geo = derive_geometry(m);
  CHECK(geo.g_lower == Matrix{{R(3, 5), R(-1, 5)}, {R(-1, 5), R(2, 5)}});
  for (const auto& a : geo.gamma_lc)
    for (const auto& b : a)
      for (const auto& c : b) CHECK(c.is_zero());
  for (const auto& a : geo.riemann)
    for (const auto& b : a)
      for (const auto& c : b)
        for (const auto& e : c) CHECK(e.is_zero());
  CHECK(all_ok(m));
}

TEST_CASE("one component: Γ = -g'/(2g) and no curvature") {
  MetricData m = MetricData::zero(1);
  RationalExpr g = R(1) + f(0) * f(0);
  m.g_upper[0][0] = g;
  DerivedGeometry geo = derive_geometry(m);
  CHECK(geo.g_lower[0][0] == R(1) / g);
  CHECK(geo.gamma_lc[0][0][0] == -d(g, 0) / (R(2) * g));
  CHECK(geo.gamma_upper[0][0][0] == d(g, 0) / R(2));
  CHECK(geo.riemann[0][0][0][0].is_zero());
}

TEST_CASE("build_operator: g = u gives u D + u_x/2") {
  MetricData m = MetricData::zero(1);
  m.g_upper[0][0] = f(0);
  WNOperator p = build_operator(m);
  WNOperator expect(1);
  expect.at(0, 0, 1) = u();
  expect.at(0, 0, 0) = u(1) / R(2);
  CHECK(equivalent(p, expect));
  CHECK(skew_check(p).skew);

  m.W[0][0] = R(3);
  WNOperator withtail = build_operator(m);
  expect.tails.push_back({1, {R(3) * u(1)}, {R(3) * u(1)}});
  CHECK(equivalent(withtail, expect));
}

TEST_CASE("sphere curvature matches the conformal formula") {
  MetricData m = sphere(R(1));
  DerivedGeometry geo = derive_geometry(m);
  RationalExpr lambda = R(1) / m.g_upper[0][0];
  RationalExpr k = conformal_curvature(lambda);
  CHECK(k == R(1));
  CHECK(geo.riemann[0][1][0][1] == k);
  CHECK(geo.riemann[0][1][1][0] == -k);
  CHECK(geo.riemann[1][0][1][0] == k);
  CHECK(geo.riemann[0][0][0][1].is_zero());
}

TEST_CASE("property: conformal metrics in two dimensions") {
  Gen g(71);
  for (int n = 0; n < 20; ++n) {
    MetricData m = MetricData::zero(2);
    RationalExpr c = R(1) + field_poly(g, 2) * field_poly(g, 2);
    if (c.is_zero()) continue;
    m.g_upper[0][0] = m.g_upper[1][1] = c;
    DerivedGeometry geo = derive_geometry(m);
    CHECK(geo.riemann[0][1][0][1] == conformal_curvature(R(1) / c));
  }
}

TEST_CASE("property: Levi-Civita identities on random metrics") {
  Gen g(72);
  for (int t = 0; t < 15; ++t) {
    const int n = g.uniform(2, 3);
    MetricData m = random_metric(g, n);
    DerivedGeometry geo = derive_geometry(m);
    auto names = failing(m);
    CHECK(std::find(names.begin(), names.end(), "metric-symmetric") == names.end());
    CHECK(std::find(names.begin(), names.end(), "metric-compatible") == names.end());
    CHECK(std::find(names.begin(), names.end(), "connection-symmetric") == names.end());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          CHECK(geo.gamma_lc[i][j][k] == geo.gamma_lc[i][k][j]);
          for (int h = 0; h < n; ++h) {
            CHECK(geo.riemann[i][j][k][h] == -geo.riemann[i][j][h][k]);
            CHECK(geo.riemann[i][j][k][h] == -geo.riemann[j][i][k][h]);
          }
        }
    // First Bianchi identity on R^i_{jkh} = g_{js} R^{is}_{kh}.
    auto lowered = [&](int i, int j, int k, int h) {
      RationalExpr s;
      for (int a = 0; a < n; ++a) s += geo.g_lower[j][a] * geo.riemann[i][a][k][h];
      return s;
    };
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int h = 0; h < n; ++h)
            CHECK((lowered(i, j, k, h) + lowered(i, k, h, j) + lowered(i, h, j, k)).is_zero());
  }
}

TEST_CASE("singular and malformed metrics are rejected") {
  MetricData m = MetricData::zero(2);
  m.g_upper = {{R(1), R(1)}, {R(1), R(1)}};
  CHECK_THROWS_AS(derive_geometry(m), SingularMetric);
  MetricData bad = flat(1);
  bad.g_upper[0][0] = u(1);
  CHECK_THROWS_AS(derive_geometry(bad), std::invalid_argument);
}

TEST_CASE("conditions hold and the operator is Hamiltonian") {
  MetricData a = MetricData::zero(1);
  a.g_upper[0][0] = R(1);
  a.W[0][0] = f(0);
  MetricData b = MetricData::zero(1);
  b.g_upper[0][0] = f(0);
  b.W[0][0] = f(0);
  MetricData c = flat(2);
  c.W[0][0] = R(1);
  for (const MetricData& m : {a, b, sphere(R(1)), sphere(R(-1)), c}) {
    CHECK(all_ok(m));
    CHECK(hamiltonian(m));
  }
}

TEST_CASE("property: the one-component family is always Hamiltonian") {
  // In one component every condition is automatic.
  Gen g(73);
  for (int t = 0; t < 12; ++t) {
    MetricData m = MetricData::zero(1);
    m.g_upper[0][0] = R(1) + field_poly(g, 1);
    if (m.g_upper[0][0].is_zero()) continue;
    m.W[0][0] = field_poly(g, 1);
    CHECK(all_ok(m));
    CHECK(hamiltonian(m));
  }
}

TEST_CASE("a single broken condition is named and the bracket agrees") {
  using Names = std::vector<std::string>;
  MetricData gauss = sphere(R(2));
  CHECK(failing(gauss) == Names{"gauss"});
  CHECK_FALSE(hamiltonian(gauss));

  MetricData flat_identity = flat(2);
  flat_identity.W[0][0] = flat_identity.W[1][1] = R(1);
  CHECK(failing(flat_identity) == Names{"gauss"});
  CHECK_FALSE(hamiltonian(flat_identity));

  MetricData gw = flat(2);
  gw.W[0][1] = R(1);
  CHECK(failing(gw) == Names{"gW-symmetric"});
  CHECK_FALSE(hamiltonian(gw));

  MetricData codazzi = flat(2);
  codazzi.W[0][0] = f(1);
  CHECK(failing(codazzi) == Names{"codazzi"});
  CHECK_FALSE(hamiltonian(codazzi));

  MetricData nonsym = flat(2);
  nonsym.g_upper[0][1] = R(1);
  CHECK(failing(nonsym) == Names{"metric-symmetric"});
  CHECK_FALSE(skew_check(build_operator(nonsym)).skew);
  CHECK_FALSE(hamiltonian(nonsym));

  MetricData two = sphere(R(1));
  two.W[0][1] = f(0);
  CHECK(failing(two) == Names{"gW-symmetric", "codazzi"});
  CHECK_FALSE(hamiltonian(two));
}

TEST_CASE("condition witnesses use field names") {
  MetricData gw = flat(2);
  gw.W[0][1] = f(0);
  Naming names;
  names.fields = {"a", "b"};
  auto verdicts = check_conditions(gw, names);
  REQUIRE(verdicts.size() == 6);
  CHECK(verdicts[3].name == "gW-symmetric");
  CHECK_FALSE(verdicts[3].ok);
  CHECK(verdicts[3].witness.find('a') != std::string::npos);
}
