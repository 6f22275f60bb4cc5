#pragma once

#include <string>

#include "wno/polynomial.hpp"

namespace wno {

/// Element of the fraction field Q(u^i_σ), kept in lowest terms with a monic
/// denominator, so equal values have equal representations.
class RationalExpr {
 public:
  RationalExpr() : den_(1) {}
  RationalExpr(const Rational& c) : num_(c), den_(1) {}  // NOLINT
  RationalExpr(long c) : RationalExpr(Rational(c)) {}    // NOLINT
  RationalExpr(int c) : RationalExpr(Rational(c)) {}     // NOLINT
  RationalExpr(Polynomial p) : num_(std::move(p)), den_(1) {}  // NOLINT
  RationalExpr(const Polynomial& num, const Polynomial& den);

  static RationalExpr variable(JetVar v) { return RationalExpr(Polynomial::variable(v)); }

  const Polynomial& numerator() const { return num_; }
  const Polynomial& denominator() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  bool is_polynomial() const { return den_.is_constant(); }
  Rational constant_value() const;

  RationalExpr& operator+=(const RationalExpr& o);
  RationalExpr& operator-=(const RationalExpr& o);
  RationalExpr& operator*=(const RationalExpr& o);
  RationalExpr& operator/=(const RationalExpr& o);
  friend RationalExpr operator+(RationalExpr a, const RationalExpr& b) { return a += b; }
  friend RationalExpr operator-(RationalExpr a, const RationalExpr& b) { return a -= b; }
  friend RationalExpr operator*(RationalExpr a, const RationalExpr& b) { return a *= b; }
  friend RationalExpr operator/(RationalExpr a, const RationalExpr& b) { return a /= b; }
  RationalExpr operator-() const;
  RationalExpr pow(int k) const;

  RationalExpr partial(JetVar v) const;
  RationalExpr total_x() const;

  int max_order(int field) const;
  bool depends_on(JetVar v) const;
  bool only_order_zero() const { return num_.only_order_zero() && den_.only_order_zero(); }
  std::set<JetVar> variables() const;

  std::string to_string(const Naming& names) const;

  friend bool operator==(const RationalExpr&, const RationalExpr&) = default;

 private:
  void reduce();
  RationalExpr quotient_rule(const Polynomial& dn, const Polynomial& dd) const;

  Polynomial num_;
  Polynomial den_;
};

}  // namespace wno
