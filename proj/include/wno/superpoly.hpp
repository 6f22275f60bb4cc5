#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "wno/rational_expr.hpp"

namespace wno {

/// A graded generator: either a jet of an odd variable p_{i,σ}, or a nonlocal
/// symbol r_α. A nonlocal symbol carries the odd degree of its defining
/// density; its parity is that degree mod 2.
struct OddFactor {
  enum class Kind : unsigned char { Jet = 0, Nonlocal = 1 };

  Kind kind = Kind::Jet;
  int index = 0;  // field for Jet, table id for Nonlocal
  int order = 0;  // x-derivatives, Jet only
  int degree = 1;

  static OddFactor jet(int field, int order) { return {Kind::Jet, field, order, 1}; }
  static OddFactor nonlocal(int id, int degree) { return {Kind::Nonlocal, id, 0, degree}; }

  bool is_jet() const { return kind == Kind::Jet; }
  bool is_nonlocal() const { return kind == Kind::Nonlocal; }
  bool odd() const { return degree % 2 != 0; }

  friend bool operator==(const OddFactor& a, const OddFactor& b) {
    return a.kind == b.kind && a.index == b.index && a.order == b.order;
  }
  friend bool operator<(const OddFactor& a, const OddFactor& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    if (a.index != b.index) return a.index < b.index;
    return a.order < b.order;
  }
};

/// Ordered product of graded generators. In canonical form it is sorted,
/// jets before nonlocals, and never repeats an odd generator.
using OddWord = std::vector<OddFactor>;

int word_degree(const OddWord& w);
bool word_odd(const OddWord& w);

/// Sorts `w` in place. Returns the Koszul sign of the permutation, or 0 when
/// an odd generator repeats (the word vanishes).
int canonicalize(OddWord& w);

class NonlocalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct RawTerm {
  RationalExpr coefficient;
  OddWord factors;
};

/// Superfunction: finite sum of rational-function coefficients times odd words.
class SuperPoly {
 public:
  using Terms = std::map<OddWord, RationalExpr>;

  SuperPoly() = default;
  SuperPoly(const RationalExpr& c);  // NOLINT: degree-0 embedding
  SuperPoly(const Rational& c) : SuperPoly(RationalExpr(c)) {}  // NOLINT
  SuperPoly(int c) : SuperPoly(RationalExpr(c)) {}              // NOLINT

  static SuperPoly normalize(const std::vector<RawTerm>& raw);
  static SuperPoly generator(const OddFactor& f);
  static SuperPoly odd(int field, int order = 0) { return generator(OddFactor::jet(field, order)); }
  static SuperPoly even(int field, int order = 0) { return SuperPoly(RationalExpr::variable({field, order})); }
  static SuperPoly term(const RationalExpr& c, OddWord w);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  SuperPoly& operator+=(const SuperPoly& o);
  SuperPoly& operator-=(const SuperPoly& o);
  SuperPoly& operator*=(const RationalExpr& c);
  friend SuperPoly operator+(SuperPoly a, const SuperPoly& b) { return a += b; }
  friend SuperPoly operator-(SuperPoly a, const SuperPoly& b) { return a -= b; }
  friend SuperPoly operator*(const SuperPoly& a, const SuperPoly& b);
  friend SuperPoly operator*(SuperPoly a, const RationalExpr& c) { return a *= c; }
  friend SuperPoly operator*(const RationalExpr& c, SuperPoly a) { return a *= c; }
  SuperPoly operator-() const;
  void add_term(const OddWord& canonical_word, const RationalExpr& c);

  /// Partial derivative by an even jet variable.
  SuperPoly partial(JetVar v) const;
  /// Left derivative by an odd jet generator. Nonlocal generators are rejected.
  SuperPoly partial(const OddFactor& f) const;

  /// -1 for the zero superfunction; otherwise the degree when homogeneous.
  int degree() const;
  bool homogeneous() const;
  std::map<int, SuperPoly> by_degree() const;

  bool is_local() const;
  std::set<int> nonlocal_ids() const;
  int max_even_order(int field) const;
  int max_odd_order(int field) const;
  int max_field() const;

  std::string to_string(const Naming& names) const;

  friend bool operator==(const SuperPoly&, const SuperPoly&) = default;

 private:
  Terms terms_;
};

inline SuperPoly mul(const SuperPoly& a, const SuperPoly& b) { return a * b; }
inline SuperPoly add(const SuperPoly& a, const SuperPoly& b) { return a + b; }
inline SuperPoly neg(const SuperPoly& a) { return -a; }
inline bool is_zero(const SuperPoly& a) { return a.is_zero(); }

std::string word_to_string(const OddWord& w, const Naming& names);

}  // namespace wno
