#include "wno/rational_expr.hpp"

#include <stdexcept>

namespace wno {

RationalExpr::RationalExpr(const Polynomial& num, const Polynomial& den) : num_(num), den_(den) {
  if (den_.is_zero()) throw std::domain_error("rational expression with zero denominator");
  reduce();
}

void RationalExpr::reduce() {
  if (num_.is_zero()) {
    den_ = Polynomial(1);
    return;
  }
  if (den_.is_constant()) {
    Rational d = den_.constant_value();
    if (d != 1) {
      num_ *= Rational(1) / d;
      den_ = Polynomial(1);
    }
    return;
  }
  Polynomial g = gcd(num_, den_);
  if (!g.is_constant()) {
    num_ = *num_.divide_exact(g);
    den_ = *den_.divide_exact(g);
  }
  Rational lc = den_.leading_coefficient();
  if (lc != 1) {
    num_ *= Rational(1) / lc;
    den_ *= Rational(1) / lc;
  }
}

Rational RationalExpr::constant_value() const {
  if (!is_constant()) throw std::logic_error("rational expression is not constant");
  return num_.constant_value() / den_.constant_value();
}

RationalExpr& RationalExpr::operator+=(const RationalExpr& o) {
  if (o.num_.is_zero()) return *this;
  if (den_ == o.den_) {
    num_ += o.num_;
    if (!den_.is_constant()) reduce();
    else if (num_.is_zero()) den_ = Polynomial(1);
    return *this;
  }
  Polynomial g = gcd(den_, o.den_);
  Polynomial a = *o.den_.divide_exact(g);
  Polynomial b = *den_.divide_exact(g);
  num_ = num_ * a + o.num_ * b;
  den_ = den_ * a;
  reduce();
  return *this;
}

RationalExpr& RationalExpr::operator-=(const RationalExpr& o) { return *this += -o; }

RationalExpr& RationalExpr::operator*=(const RationalExpr& o) {
  if (num_.is_zero()) return *this;
  if (o.num_.is_zero()) {
    *this = RationalExpr();
    return *this;
  }
  if (den_.is_constant() && o.den_.is_constant()) {
    num_ = num_ * o.num_;
    return *this;
  }
  Polynomial g1 = gcd(num_, o.den_);
  Polynomial g2 = gcd(o.num_, den_);
  Polynomial n1 = g1.is_constant() ? num_ : *num_.divide_exact(g1);
  Polynomial d2 = g1.is_constant() ? o.den_ : *o.den_.divide_exact(g1);
  Polynomial n2 = g2.is_constant() ? o.num_ : *o.num_.divide_exact(g2);
  Polynomial d1 = g2.is_constant() ? den_ : *den_.divide_exact(g2);
  num_ = n1 * n2;
  den_ = d1 * d2;
  reduce();
  return *this;
}

RationalExpr& RationalExpr::operator/=(const RationalExpr& o) {
  if (o.num_.is_zero()) throw std::domain_error("division by zero rational expression");
  RationalExpr inv;
  inv.num_ = o.den_;
  inv.den_ = o.num_;
  inv.reduce();
  return *this *= inv;
}

RationalExpr RationalExpr::operator-() const {
  RationalExpr out = *this;
  out.num_ = -out.num_;
  return out;
}

RationalExpr RationalExpr::pow(int k) const {
  if (k < 0) return RationalExpr(1) / pow(-k);
  RationalExpr out;
  out.num_ = num_.pow(static_cast<unsigned>(k));
  out.den_ = den_.pow(static_cast<unsigned>(k));
  return out;
}

// (n/d)' = (n'·(d/g) - n·(d'/g)) / (d·(d/g)) with g = gcd(d, d'); dividing by
// g first avoids squaring the denominator and then cancelling it again.
RationalExpr RationalExpr::quotient_rule(const Polynomial& dn, const Polynomial& dd) const {
  if (dd.is_zero()) return RationalExpr(dn, den_);
  Polynomial g = gcd(den_, dd);
  Polynomial d1 = *den_.divide_exact(g);
  Polynomial dd1 = *dd.divide_exact(g);
  return RationalExpr(dn * d1 - num_ * dd1, den_ * d1);
}

RationalExpr RationalExpr::partial(JetVar v) const {
  if (den_.is_constant()) return RationalExpr(num_.partial(v));
  return quotient_rule(num_.partial(v), den_.partial(v));
}

RationalExpr RationalExpr::total_x() const {
  if (den_.is_constant()) return RationalExpr(num_.total_x());
  return quotient_rule(num_.total_x(), den_.total_x());
}

int RationalExpr::max_order(int field) const {
  return std::max(num_.max_order(field), den_.max_order(field));
}

bool RationalExpr::depends_on(JetVar v) const {
  return num_.degree_in(v) > 0 || den_.degree_in(v) > 0;
}

std::set<JetVar> RationalExpr::variables() const {
  auto vars = num_.variables();
  auto dv = den_.variables();
  vars.insert(dv.begin(), dv.end());
  return vars;
}

std::string RationalExpr::to_string(const Naming& names) const {
  if (den_.is_constant()) return num_.to_string(names);
  std::string n = num_.to_string(names);
  if (num_.size() > 1) n = "(" + n + ")";
  return n + "/(" + den_.to_string(names) + ")";
}

}  // namespace wno
