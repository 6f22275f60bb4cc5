#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace wno {

using Rational = mpq_class;

std::string to_string(const Rational& q);

/// Even jet coordinate u^i_σ: field index (0-based) and number of x-derivatives.
struct JetVar {
  int field = 0;
  int order = 0;

  friend auto operator<=>(const JetVar&, const JetVar&) = default;
  friend bool operator==(const JetVar&, const JetVar&) = default;
};

/// Names used when rendering jet variables, odd factors and nonlocal symbols.
struct Naming {
  std::vector<std::string> fields;
  std::vector<std::string> nonlocals;

  std::string field(int i) const;
  std::string even(JetVar v) const;
  std::string odd(int field, int order) const;
  std::string nonlocal(int id) const;
};

std::string derivative_suffix(int order);

/// Power product of jet variables, kept sorted with the largest variable first
/// so that lexicographic comparison of the factor list is the lex term order.
class Monomial {
 public:
  using Factor = std::pair<JetVar, int>;

  Monomial() = default;
  explicit Monomial(JetVar v, int exponent = 1);

  const std::vector<Factor>& factors() const { return factors_; }
  bool is_one() const { return factors_.empty(); }
  int degree_in(JetVar v) const;
  int total_degree() const;

  Monomial operator*(const Monomial& other) const;
  std::optional<Monomial> divide(const Monomial& other) const;
  Monomial with_exponent(JetVar v, int exponent) const;
  Monomial gcd(const Monomial& other) const;

  std::string to_string(const Naming& names) const;

  friend bool operator==(const Monomial&, const Monomial&) = default;
  friend bool operator<(const Monomial& a, const Monomial& b);

 private:
  std::vector<Factor> factors_;
};

/// Multivariate polynomial over Q in even jet variables.
class Polynomial {
 public:
  using Terms = std::map<Monomial, Rational>;

  Polynomial() = default;
  Polynomial(const Rational& c);  // NOLINT: constants embed implicitly
  Polynomial(long c) : Polynomial(Rational(c)) {}  // NOLINT
  Polynomial(int c) : Polynomial(Rational(c)) {}   // NOLINT

  static Polynomial variable(JetVar v);
  static Polynomial term(const Monomial& m, const Rational& c);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Rational constant_value() const;
  std::size_t size() const { return terms_.size(); }

  const Monomial& leading_monomial() const { return terms_.rbegin()->first; }
  const Rational& leading_coefficient() const { return terms_.rbegin()->second; }

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const Rational& c);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
  Polynomial operator-() const;
  void add_term(const Monomial& m, const Rational& c);

  Polynomial pow(unsigned k) const;
  Polynomial partial(JetVar v) const;
  Polynomial total_x() const;

  int degree_in(JetVar v) const;
  std::set<JetVar> variables() const;
  std::optional<JetVar> max_variable() const;
  int max_order(int field) const;  // -1 if the field does not occur
  bool only_order_zero() const;

  /// Coefficients of this polynomial viewed as a univariate polynomial in v.
  std::map<int, Polynomial> coefficients_in(JetVar v) const;
  /// Exact quotient, or nullopt when `divisor` does not divide this polynomial.
  std::optional<Polynomial> divide_exact(const Polynomial& divisor) const;
  /// Scaled so that the leading coefficient is 1 (zero stays zero).
  Polynomial monic() const;
  /// Antiderivative with respect to v, term by term.
  Polynomial integrate(JetVar v) const;

  std::string to_string(const Naming& names) const;

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  Terms terms_;
};

/// Monic greatest common divisor (1 when coprime, the other argument when one is zero).
Polynomial gcd(const Polynomial& a, const Polynomial& b);

}  // namespace wno
