#pragma once

// Seeded random generators and small helpers shared by the test binaries.

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "wno/schouten.hpp"

namespace wt {

using namespace wno;

inline RationalExpr u(int k = 0, int field = 0) { return RationalExpr::variable({field, k}); }
inline SuperPoly U(int k = 0, int field = 0) { return SuperPoly::even(field, k); }
inline SuperPoly P(int k = 0, int field = 0) { return SuperPoly::odd(field, k); }
inline SuperPoly C(long num, long den = 1) { return SuperPoly(Rational(num, den)); }

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool chance(int one_in) { return uniform(1, one_in) == 1; }

  Rational rational() {
    Rational q(uniform(-5, 5), uniform(1, 3));
    q.canonicalize();
    return q == 0 ? Rational(1) : q;
  }

  Polynomial polynomial(int fields, int max_order, int max_terms) {
    Polynomial out;
    const int terms = uniform(1, max_terms);
    for (int t = 0; t < terms; ++t) {
      Polynomial m(rational());
      const int vars = uniform(0, 2);
      for (int v = 0; v < vars; ++v) m = m * Polynomial::variable({uniform(0, fields - 1), uniform(0, max_order)});
      out += m;
    }
    return out;
  }

  /// Mostly polynomial; now and then divided by a simple positive-degree factor.
  RationalExpr coefficient(int fields, int max_order, bool allow_denominator = true) {
    RationalExpr c(polynomial(fields, max_order, 2));
    if (c.is_zero()) c = RationalExpr(rational());
    if (allow_denominator && chance(6)) {
      Polynomial den = Polynomial(1) + Polynomial::variable({uniform(0, fields - 1), 0});
      c /= RationalExpr(den);
    }
    return c;
  }

  /// Random product of `degree` odd jet generators in random order.
  SuperPoly odd_word(int fields, int degree, int max_order) {
    SuperPoly out(1);
    for (int d = 0; d < degree; ++d) out = out * SuperPoly::odd(uniform(0, fields - 1), uniform(0, max_order));
    return out;
  }

  /// Homogeneous local superfunction of the given degree. May be zero when
  /// the random words collapse by nilpotency.
  SuperPoly local(int fields, int degree, int max_order, int max_terms = 3, bool allow_denominator = true) {
    SuperPoly out;
    const int terms = uniform(1, max_terms);
    for (int t = 0; t < terms; ++t)
      out += odd_word(fields, degree, max_order) * coefficient(fields, max_order, allow_denominator);
    return out;
  }

  /// Like local(), but retried until nonzero.
  SuperPoly nonzero_local(int fields, int degree, int max_order, int max_terms = 3, bool allow_denominator = true) {
    for (;;) {
      SuperPoly s = local(fields, degree, max_order, max_terms, allow_denominator);
      if (!s.is_zero()) return s;
    }
  }

  DiffEntry diff_entry(int fields, int max_order) {
    DiffEntry d(uniform(0, max_order) + 1);
    for (auto& c : d)
      if (!chance(3)) c = coefficient(fields, 1, false);
    return d;
  }

  WNOperator op(int fields, int max_order, int max_tails) {
    WNOperator p(fields);
    for (int i = 0; i < fields; ++i)
      for (int j = 0; j < fields; ++j) p.local[i][j] = diff_entry(fields, max_order);
    const int tails = uniform(0, max_tails);
    for (int t = 0; t < tails; ++t) {
      Tail tail{rational(), std::vector<RationalExpr>(fields), std::vector<RationalExpr>(fields)};
      for (int i = 0; i < fields; ++i) {
        if (!chance(3)) tail.w[i] = coefficient(fields, 1, false);
        if (!chance(3)) tail.z[i] = coefficient(fields, 1, false);
      }
      p.tails.push_back(tail);
    }
    p.trim();
    return p;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace wt
