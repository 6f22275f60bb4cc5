#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "support.hpp"

using namespace wt;

namespace {

// Σ_σ (-1)^σ ∂^σ(∂a/∂v_σ) written out directly, one power of ∂ at a time
// (no Horner nesting), for cross-checking var_deriv.
SuperPoly direct_var_deriv(const SuperPoly& a, int field, VarKind kind) {
  SuperPoly out;
  const int top = kind == VarKind::Even ? a.max_even_order(field) : a.max_odd_order(field);
  for (int s = 0; s <= top; ++s) {
    SuperPoly x = kind == VarKind::Even ? a.partial(JetVar{field, s}) : a.partial(OddFactor::jet(field, s));
    for (int k = 0; k < s; ++k) x = total_x(x);
    out += s % 2 == 0 ? x : -x;
  }
  return out;
}

}  // namespace

TEST_CASE("total derivative: worked values") {
  CHECK(total_x(U()) == U(1));
  CHECK(total_x(P() * P(1)) == P() * P(2));
  NonlocalVarTable table;
  int r = table.register_density(U(1) * P());
  CHECK(total_x(table.variable(r), table) == U(1) * P());
  CHECK_THROWS_AS(total_x(table.variable(r)), NonlocalError);
}

TEST_CASE("variational derivative: worked values") {
  CHECK(var_deriv(C(1, 2) * U(1) * U(1), 0, VarKind::Even) == -U(2));
  // L = p_3x p + (2/3) u^2 p_x p
  SuperPoly L = P(3) * P() + C(2, 3) * U() * U() * P(1) * P();
  CHECK(var_deriv(L, 0, VarKind::Odd) == C(-2) * P(3) - C(4, 3) * U() * U() * P(1) - C(4, 3) * U() * U(1) * P());
  NonlocalVarTable table;
  int r = table.register_density(U(1) * P());
  CHECK_THROWS_AS(var_deriv(P() * table.variable(r), 0, VarKind::Even), NonlocalError);
}

TEST_CASE("Euler-Lagrange tuple of u p p_x p_3x") {
  SuperPoly tl = U() * P() * P(1) * P(3);
  ELResult el = euler_lagrange(tl, 1);
  CHECK(el.du[0] == P() * P(1) * P(3));
  CHECK(el.dp[0] == C(-3) * U(2) * P() * P(2) - C(2) * U(1) * P() * P(3) - U(3) * P() * P(1) -
                        C(3) * U(1) * P(1) * P(2));
  CHECK(euler_lagrange(SuperPoly(), 2).is_zero());
}

TEST_CASE("linearization and adjoint: worked values") {
  LinearizationOp lx = linearize(U(1), 1);
  CHECK(lx.even_rows[0].coefficients() == std::vector<SuperPoly>{SuperPoly(), SuperPoly(1)});
  LinearizationOp lsq = linearize(U() * U(), 1);
  CHECK(lsq.even_rows[0].coefficients() == std::vector<SuperPoly>{C(2) * U()});

  DiffOp dx({SuperPoly(), SuperPoly(1)}, 0);
  CHECK(dx.adjoint() == DiffOp({SuperPoly(), SuperPoly(-1)}, 0));
  DiffOp f({U() * U(1)}, 0);
  CHECK(f.adjoint() == f);
  for (int k = 0; k <= 5; ++k) {
    std::vector<SuperPoly> c(k + 1);
    c[k] = 1;
    std::vector<SuperPoly> expect = c;
    expect[k] = k % 2 == 0 ? 1 : -1;
    CHECK(DiffOp(c, 0).adjoint() == DiffOp(expect, 0));
  }
}

TEST_CASE("property: total_x is an even derivation") {
  Gen g(7);
  for (int t = 0; t < 100; ++t) {
    SuperPoly a = g.local(2, g.uniform(0, 2), 4, 2);
    SuperPoly b = g.local(2, g.uniform(0, 2), 4, 2);
    CHECK(total_x(a * b) == total_x(a) * b + a * total_x(b));
  }
}

TEST_CASE("property: variational derivatives annihilate total derivatives") {
  Gen g(8);
  for (int t = 0; t < 100; ++t) {
    SuperPoly f = g.local(2, g.uniform(0, 3), 4);
    ELResult el = euler_lagrange(total_x(f), 2);
    CHECK(el.is_zero());
  }
}

TEST_CASE("property: var_deriv matches the unnested sum") {
  Gen g(9);
  for (int t = 0; t < 100; ++t) {
    SuperPoly f = g.local(2, g.uniform(0, 3), 4);
    for (int i = 0; i < 2; ++i) {
      CHECK(var_deriv(f, i, VarKind::Even) == direct_var_deriv(f, i, VarKind::Even));
      CHECK(var_deriv(f, i, VarKind::Odd) == direct_var_deriv(f, i, VarKind::Odd));
    }
  }
}

TEST_CASE("property: adjoint of the linearization at 1 is the Euler-Lagrange tuple") {
  Gen g(10);
  for (int t = 0; t < 100; ++t) {
    SuperPoly n = g.local(2, g.uniform(0, 2), 4);
    CHECK(apply_to_one(adjoint(linearize(n, 2))) == euler_lagrange(n, 2));
  }
}

TEST_CASE("property: the adjoint is an involution") {
  Gen g(12);
  for (int t = 0; t < 100; ++t) {
    std::vector<SuperPoly> c;
    const int order = g.uniform(0, 4);
    for (int k = 0; k <= order; ++k) c.push_back(g.local(1, 0, 2, 2));
    DiffOp d(c, 0);
    CHECK(d.adjoint().adjoint() == d);
  }
}
