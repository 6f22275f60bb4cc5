#include "wno/polynomial.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <stdexcept>

namespace wno {

std::string to_string(const Rational& q) { return q.get_str(); }

std::string derivative_suffix(int order) {
  if (order == 0) return {};
  if (order == 1) return "_x";
  return "_" + std::to_string(order) + "x";
}

std::string Naming::field(int i) const {
  if (i >= 0 && static_cast<std::size_t>(i) < fields.size()) return fields[i];
  return "u" + std::to_string(i + 1);
}

std::string Naming::even(JetVar v) const { return field(v.field) + derivative_suffix(v.order); }

std::string Naming::odd(int f, int order) const {
  std::string base = (fields.size() <= 1 && f == 0) ? std::string("p") : "p" + std::to_string(f + 1);
  return base + derivative_suffix(order);
}

std::string Naming::nonlocal(int id) const {
  if (id >= 0 && static_cast<std::size_t>(id) < nonlocals.size()) return nonlocals[id];
  return "r" + std::to_string(id + 1);
}

// ---------------------------------------------------------------------------
// Monomial

Monomial::Monomial(JetVar v, int exponent) {
  if (exponent < 0) throw std::invalid_argument("negative exponent in monomial");
  if (exponent > 0) factors_.emplace_back(v, exponent);
}

int Monomial::degree_in(JetVar v) const {
  for (const auto& [var, e] : factors_)
    if (var == v) return e;
  return 0;
}

int Monomial::total_degree() const {
  int d = 0;
  for (const auto& f : factors_) d += f.second;
  return d;
}

Monomial Monomial::operator*(const Monomial& other) const {
  Monomial out;
  out.factors_.reserve(factors_.size() + other.factors_.size());
  auto a = factors_.begin();
  auto b = other.factors_.begin();
  while (a != factors_.end() || b != other.factors_.end()) {
    if (b == other.factors_.end() || (a != factors_.end() && a->first > b->first)) {
      out.factors_.push_back(*a++);
    } else if (a == factors_.end() || b->first > a->first) {
      out.factors_.push_back(*b++);
    } else {
      out.factors_.emplace_back(a->first, a->second + b->second);
      ++a;
      ++b;
    }
  }
  return out;
}

std::optional<Monomial> Monomial::divide(const Monomial& other) const {
  Monomial out;
  auto a = factors_.begin();
  for (const auto& [var, e] : other.factors_) {
    while (a != factors_.end() && a->first > var) out.factors_.push_back(*a++);
    if (a == factors_.end() || a->first != var || a->second < e) return std::nullopt;
    if (a->second > e) out.factors_.emplace_back(var, a->second - e);
    ++a;
  }
  while (a != factors_.end()) out.factors_.push_back(*a++);
  return out;
}

Monomial Monomial::with_exponent(JetVar v, int exponent) const {
  Monomial out;
  bool placed = false;
  for (const auto& f : factors_) {
    if (!placed && f.first <= v) {
      if (exponent > 0) out.factors_.emplace_back(v, exponent);
      placed = true;
      if (f.first == v) continue;
    }
    out.factors_.push_back(f);
  }
  if (!placed && exponent > 0) out.factors_.emplace_back(v, exponent);
  return out;
}

Monomial Monomial::gcd(const Monomial& other) const {
  Monomial out;
  for (const auto& [var, e] : factors_) {
    int d = std::min(e, other.degree_in(var));
    if (d > 0) out.factors_.emplace_back(var, d);
  }
  return out;
}

std::string Monomial::to_string(const Naming& names) const {
  std::string s;
  for (auto it = factors_.rbegin(); it != factors_.rend(); ++it) {
    if (!s.empty()) s += "*";
    s += names.even(it->first);
    if (it->second != 1) s += "^" + std::to_string(it->second);
  }
  return s;
}

bool operator<(const Monomial& a, const Monomial& b) {
  const auto& fa = a.factors_;
  const auto& fb = b.factors_;
  for (std::size_t i = 0;; ++i) {
    if (i == fa.size()) return i != fb.size();
    if (i == fb.size()) return false;
    if (fa[i].first != fb[i].first) return fa[i].first < fb[i].first;
    if (fa[i].second != fb[i].second) return fa[i].second < fb[i].second;
  }
}

// ---------------------------------------------------------------------------
// Polynomial

Polynomial::Polynomial(const Rational& c) {
  if (c != 0) terms_.emplace(Monomial{}, c);
}

Polynomial Polynomial::variable(JetVar v) { return term(Monomial(v), Rational(1)); }

Polynomial Polynomial::term(const Monomial& m, const Rational& c) {
  Polynomial p;
  if (c != 0) p.terms_.emplace(m, c);
  return p;
}

bool Polynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
}

Rational Polynomial::constant_value() const {
  if (terms_.empty()) return 0;
  auto it = terms_.find(Monomial{});
  return it == terms_.end() ? Rational(0) : it->second;
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
  } else {
    for (auto& t : terms_) t.second *= c;
  }
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial out;
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) out.add_term(ma * mb, ca * cb);
  return out;
}

Polynomial Polynomial::operator-() const {
  Polynomial out = *this;
  for (auto& t : out.terms_) t.second = -t.second;
  return out;
}

Polynomial Polynomial::pow(unsigned k) const {
  Polynomial result(1);
  Polynomial base = *this;
  while (k > 0) {
    if (k & 1u) result = result * base;
    k >>= 1u;
    if (k > 0) base = base * base;
  }
  return result;
}

Polynomial Polynomial::partial(JetVar v) const {
  Polynomial out;
  for (const auto& [m, c] : terms_) {
    int e = m.degree_in(v);
    if (e == 0) continue;
    out.add_term(m.with_exponent(v, e - 1), c * e);
  }
  return out;
}

Polynomial Polynomial::total_x() const {
  Polynomial out;
  for (const auto& [m, c] : terms_) {
    for (const auto& [v, e] : m.factors()) {
      JetVar next{v.field, v.order + 1};
      Monomial lowered = m.with_exponent(v, e - 1);
      out.add_term(lowered.with_exponent(next, lowered.degree_in(next) + 1), c * e);
    }
  }
  return out;
}

int Polynomial::degree_in(JetVar v) const {
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.degree_in(v));
  return d;
}

std::set<JetVar> Polynomial::variables() const {
  std::set<JetVar> vars;
  for (const auto& [m, c] : terms_)
    for (const auto& f : m.factors()) vars.insert(f.first);
  return vars;
}

std::optional<JetVar> Polynomial::max_variable() const {
  std::optional<JetVar> best;
  for (const auto& [m, c] : terms_)
    if (!m.is_one() && (!best || m.factors().front().first > *best)) best = m.factors().front().first;
  return best;
}

int Polynomial::max_order(int field) const {
  int best = -1;
  for (const auto& [m, c] : terms_)
    for (const auto& f : m.factors())
      if (f.first.field == field) best = std::max(best, f.first.order);
  return best;
}

bool Polynomial::only_order_zero() const {
  for (const auto& [m, c] : terms_)
    for (const auto& f : m.factors())
      if (f.first.order != 0) return false;
  return true;
}

std::map<int, Polynomial> Polynomial::coefficients_in(JetVar v) const {
  std::map<int, Polynomial> out;
  for (const auto& [m, c] : terms_) {
    int e = m.degree_in(v);
    out[e].add_term(e == 0 ? m : m.with_exponent(v, 0), c);
  }
  return out;
}

std::optional<Polynomial> Polynomial::divide_exact(const Polynomial& divisor) const {
  if (divisor.is_zero()) throw std::domain_error("polynomial division by zero");
  if (divisor.is_constant()) return *this * (Rational(1) / divisor.constant_value());
  Polynomial rem = *this;
  Polynomial quot;
  const Monomial& lm = divisor.leading_monomial();
  const Rational& lc = divisor.leading_coefficient();
  while (!rem.is_zero()) {
    auto t = rem.leading_monomial().divide(lm);
    if (!t) return std::nullopt;
    Rational c = rem.leading_coefficient() / lc;
    Polynomial step = Polynomial::term(*t, c);
    quot += step;
    rem -= step * divisor;
  }
  return quot;
}

Polynomial Polynomial::monic() const {
  if (is_zero()) return *this;
  return *this * (Rational(1) / leading_coefficient());
}

Polynomial Polynomial::integrate(JetVar v) const {
  Polynomial out;
  for (const auto& [m, c] : terms_) {
    int e = m.degree_in(v);
    out.add_term(m.with_exponent(v, e + 1), c / (e + 1));
  }
  return out;
}

std::string Polynomial::to_string(const Naming& names) const {
  if (terms_.empty()) return "0";
  std::string s;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [m, c] = *it;
    Rational mag = abs(c);
    bool negative = c < 0;
    if (first) {
      if (negative) s += "-";
    } else {
      s += negative ? " - " : " + ";
    }
    first = false;
    if (m.is_one()) {
      s += wno::to_string(mag);
    } else {
      if (mag != 1) s += wno::to_string(mag) + "*";
      s += m.to_string(names);
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// gcd: recursive primitive polynomial remainder sequences over Q

namespace {

Polynomial content_in(const Polynomial& p, JetVar v);

Polynomial leading_in(const Polynomial& p, JetVar v) { return p.coefficients_in(v).rbegin()->second; }

// lc(b)^(deg a - deg b + 1) · a mod b, as polynomials in v.
Polynomial pseudo_remainder(Polynomial a, const Polynomial& b, JetVar v) {
  const int db = b.degree_in(v);
  const Polynomial lcb = leading_in(b, v);
  int e = a.degree_in(v) - db + 1;
  while (!a.is_zero()) {
    int da = a.degree_in(v);
    if (da < db) break;
    Polynomial shift = leading_in(a, v) * Polynomial::term(Monomial(v, da - db), Rational(1));
    a = lcb * a - shift * b;
    --e;
  }
  if (e > 0) a = a * lcb.pow(static_cast<unsigned>(e));
  return a;
}

Polynomial primitive_in(const Polynomial& p, JetVar v) {
  Polynomial c = content_in(p, v);
  if (c.is_constant()) return p;
  return *p.divide_exact(c);
}

// gcd of the given polynomials, smallest first so intermediate gcds stay small.
Polynomial gcd_of_all(std::vector<Polynomial> parts) {
  std::sort(parts.begin(), parts.end(), [](const Polynomial& x, const Polynomial& y) { return x.size() < y.size(); });
  Polynomial g;
  for (const auto& c : parts) {
    g = gcd(g, c);
    if (g.is_constant() && !g.is_zero()) return Polynomial(1);
  }
  return g;
}

Polynomial content_in(const Polynomial& p, JetVar v) {
  std::vector<Polynomial> parts;
  for (const auto& [e, c] : p.coefficients_in(v)) parts.push_back(c);
  return gcd_of_all(std::move(parts));
}

// Subresultant remainder sequence of two primitive polynomials in v; the
// scaling by g·h^δ keeps coefficients small without content computations.
Polynomial prs_gcd(Polynomial a, Polynomial b, JetVar v) {
  if (a.degree_in(v) < b.degree_in(v)) std::swap(a, b);
  Polynomial g(1), h(1);
  while (true) {
    const int delta = a.degree_in(v) - b.degree_in(v);
    Polynomial r = pseudo_remainder(a, b, v);
    if (r.is_zero()) return b;
    if (r.degree_in(v) == 0) return Polynomial(1);
    Polynomial divisor = g * h.pow(static_cast<unsigned>(delta));
    a = std::move(b);
    b = *r.divide_exact(divisor);
    g = leading_in(a, v);
    if (delta == 1) h = g;
    else if (delta > 1) h = *g.pow(static_cast<unsigned>(delta)).divide_exact(h.pow(static_cast<unsigned>(delta - 1)));
  }
}

// Modular images, used only to prove that a variable cannot occur in a gcd.
// If the leading coefficients of a and b in v survive the evaluation, the
// image of gcd(a, b) divides the gcd of the images and keeps its degree in v;
// so a constant image gcd rules v out. Unlucky points only cost speed.
constexpr std::uint64_t kPrime = 2147483647ULL;
using ModPoly = std::vector<std::uint64_t>;

std::uint64_t powmod(std::uint64_t a, std::uint64_t e) {
  std::uint64_t r = 1;
  for (a %= kPrime; e > 0; e >>= 1, a = a * a % kPrime)
    if (e & 1) r = r * a % kPrime;
  return r;
}

std::uint64_t invmod(std::uint64_t a) { return powmod(a, kPrime - 2); }

std::optional<std::uint64_t> reduce_mod(const Rational& q) {
  const std::uint64_t d = mpz_fdiv_ui(q.get_den_mpz_t(), kPrime);
  if (d == 0) return std::nullopt;
  return mpz_fdiv_ui(q.get_num_mpz_t(), kPrime) * invmod(d) % kPrime;
}

std::optional<ModPoly> image(const Polynomial& p, JetVar v, const std::map<JetVar, std::uint64_t>& point) {
  ModPoly out(std::max(p.degree_in(v), 0) + 1, 0);
  for (const auto& [m, c] : p.terms()) {
    auto value = reduce_mod(c);
    if (!value) return std::nullopt;
    int e = 0;
    for (const auto& [var, k] : m.factors()) {
      if (var == v) e = k;
      else *value = *value * powmod(point.at(var), static_cast<std::uint64_t>(k)) % kPrime;
    }
    out[e] = (out[e] + *value) % kPrime;
  }
  return out;
}

void trim_mod(ModPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

int mod_gcd_degree(ModPoly a, ModPoly b) {
  trim_mod(a);
  trim_mod(b);
  while (!b.empty()) {
    const std::uint64_t inv = invmod(b.back());
    while (a.size() >= b.size()) {
      const std::size_t shift = a.size() - b.size();
      const std::uint64_t f = a.back() * inv % kPrime;
      for (std::size_t k = 0; k < b.size(); ++k) a[shift + k] = (a[shift + k] + kPrime - f * b[k] % kPrime) % kPrime;
      trim_mod(a);
    }
    std::swap(a, b);
  }
  return static_cast<int>(a.size()) - 1;
}

// Shared variables of a and b that provably do not occur in gcd(a, b).
std::set<JetVar> gcd_free_variables(const Polynomial& a, const Polynomial& b, const std::set<JetVar>& shared) {
  thread_local std::mt19937_64 rng(0x5eed);
  std::set<JetVar> all = a.variables();
  for (JetVar v : b.variables()) all.insert(v);
  std::map<JetVar, std::uint64_t> point;
  for (JetVar v : all) point[v] = std::uniform_int_distribution<std::uint64_t>(1, kPrime - 1)(rng);
  std::set<JetVar> out;
  for (JetVar v : shared) {
    auto ia = image(a, v, point);
    auto ib = image(b, v, point);
    if (!ia || !ib || ia->back() == 0 || ib->back() == 0) continue;
    if (mod_gcd_degree(*ia, *ib) == 0) out.insert(v);
  }
  return out;
}

// gcd(a, b) when it is known not to involve v: the gcd of all coefficients in v.
Polynomial gcd_of_coefficients(const Polynomial& a, const Polynomial& b, JetVar v) {
  std::vector<Polynomial> parts;
  for (const auto& [e, c] : a.coefficients_in(v)) parts.push_back(c);
  for (const auto& [e, c] : b.coefficients_in(v)) parts.push_back(c);
  return gcd_of_all(std::move(parts));
}

// Heuristic gcd over Z: evaluate one variable at a large integer ξ, recurse,
// and read the gcd back from its ξ-adic digits. A reconstruction is only
// accepted once it divides both inputs.
constexpr int kHeuristicTries = 6;
constexpr unsigned long kHeuristicMaxBits = 200000;

Rational reciprocal(const mpz_class& z) {
  Rational q(mpz_class(1), z);
  q.canonicalize();
  return q;
}

mpz_class integer_content(const Polynomial& p) {
  mpz_class g = 0;
  for (const auto& [m, c] : p.terms()) g = ::gcd(g, mpz_class(c.get_num()));
  return g;
}

mpz_class height(const Polynomial& p) {
  mpz_class h = 0;
  for (const auto& [m, c] : p.terms()) h = std::max(h, mpz_class(abs(c.get_num())));
  return h;
}

// p scaled by a positive rational to a primitive integer polynomial.
Polynomial integer_primitive(const Polynomial& p) {
  mpz_class den = 1;
  for (const auto& [m, c] : p.terms()) den = lcm(den, mpz_class(c.get_den()));
  Polynomial out = p * Rational(den);
  mpz_class content = integer_content(out);
  return content == 1 ? out : out * reciprocal(content);
}

Polynomial evaluate_at(const Polynomial& p, JetVar v, const mpz_class& xi) {
  Polynomial out;
  for (const auto& [m, c] : p.terms()) {
    mpz_class power;
    mpz_pow_ui(power.get_mpz_t(), xi.get_mpz_t(), static_cast<unsigned long>(m.degree_in(v)));
    out.add_term(m.with_exponent(v, 0), c * Rational(power));
  }
  return out;
}

mpz_class symmetric_mod(const mpz_class& a, const mpz_class& m) {
  mpz_class r = a % m;
  if (r < 0) r += m;
  if (2 * r > m) r -= m;
  return r;
}

Polynomial from_digits(Polynomial gamma, const mpz_class& xi, JetVar v) {
  Polynomial out;
  for (int e = 0; !gamma.is_zero(); ++e) {
    Polynomial digit;
    for (const auto& [m, c] : gamma.terms()) {
      mpz_class r = symmetric_mod(mpz_class(c.get_num()), xi);
      if (r != 0) digit.add_term(m, Rational(r));
    }
    for (const auto& [m, c] : digit.terms()) out.add_term(m.with_exponent(v, e), c);
    gamma = (gamma - digit) * reciprocal(xi);
  }
  return out;
}

// Inputs have integer coefficients.
std::optional<Polynomial> heuristic_gcd(const Polynomial& f, const Polynomial& g) {
  const mpz_class cf = integer_content(f), cg = integer_content(g);
  const mpz_class c = ::gcd(cf, cg);
  if (f.is_constant() || g.is_constant()) return Polynomial(Rational(c));
  const Polynomial F = f * reciprocal(cf), G = g * reciprocal(cg);
  JetVar x = *F.max_variable();
  if (auto xg = G.max_variable(); *xg > x) x = *xg;
  const mpz_class fn = height(F), gn = height(G);
  const mpz_class bound = 2 * std::min(fn, gn) + 29;
  mpz_class xi = std::min(bound, mpz_class(99 * sqrt(bound)));
  const mpz_class lf = abs(mpz_class(F.leading_coefficient().get_num()));
  const mpz_class lg = abs(mpz_class(G.leading_coefficient().get_num()));
  xi = std::max(xi, mpz_class(2 * std::min(mpz_class(fn / lf), mpz_class(gn / lg)) + 2));
  const int degree = std::max(F.degree_in(x), G.degree_in(x));
  for (int attempt = 0; attempt < kHeuristicTries; ++attempt) {
    if (mpz_sizeinbase(xi.get_mpz_t(), 2) * static_cast<unsigned long>(std::max(degree, 1)) > kHeuristicMaxBits)
      return std::nullopt;
    Polynomial ff = evaluate_at(F, x, xi), gg = evaluate_at(G, x, xi);
    if (!ff.is_zero() && !gg.is_zero()) {
      if (auto h = heuristic_gcd(ff, gg)) {
        Polynomial candidate = integer_primitive(from_digits(*h, xi, x));
        if (!candidate.is_zero() && F.divide_exact(candidate) && G.divide_exact(candidate))
          return candidate * Rational(c);
      }
    }
    xi = xi * 73794 * sqrt(sqrt(xi)) / 27011;
  }
  return std::nullopt;
}

Polynomial monomial_gcd(const Monomial& m, const Polynomial& p) {
  Monomial g = m;
  for (const auto& [mp, c] : p.terms()) {
    g = g.gcd(mp);
    if (g.is_one()) break;
  }
  return Polynomial::term(g, Rational(1));
}

}  // namespace

Polynomial gcd(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero()) return b.monic();
  if (b.is_zero()) return a.monic();
  if (a.is_constant() || b.is_constant()) return Polynomial(1);
  if (a == b) return a.monic();
  if (a.size() == 1) return monomial_gcd(a.terms().begin()->first, b);
  if (b.size() == 1) return monomial_gcd(b.terms().begin()->first, a);

  std::set<JetVar> shared;
  for (JetVar x : a.variables())
    if (b.degree_in(x) > 0) shared.insert(x);
  if (shared.empty()) return Polynomial(1);
  // Variables of only one side cannot occur in the gcd.
  for (const Polynomial* p : {&a, &b})
    for (JetVar x : p->variables())
      if (!shared.count(x)) return gcd_of_coefficients(a, b, x);
  std::set<JetVar> ruled_out = gcd_free_variables(a, b, shared);
  if (ruled_out.size() == shared.size()) return Polynomial(1);
  if (!ruled_out.empty()) return gcd_of_coefficients(a, b, *ruled_out.rbegin());

  // Main variable: the one of least degree keeps the remainder sequence short.
  JetVar v = *shared.begin();
  int best = -1;
  for (JetVar x : shared) {
    const int deg = std::max(a.degree_in(x), b.degree_in(x));
    if (best < 0 || deg < best) {
      best = deg;
      v = x;
    }
  }
  if (b.size() <= a.size()) {
    if (a.divide_exact(b)) return b.monic();
  } else if (b.divide_exact(a)) {
    return a.monic();
  }

  if (auto h = heuristic_gcd(integer_primitive(a), integer_primitive(b)); h && !h->is_constant()) {
    // h divides both; whatever it misses is the gcd of the cofactors.
    return (*h * gcd(*a.divide_exact(*h), *b.divide_exact(*h))).monic();
  }

  Polynomial ca = content_in(a, v);
  Polynomial cb = content_in(b, v);
  Polynomial pa = ca.is_constant() ? a : *a.divide_exact(ca);
  Polynomial pb = cb.is_constant() ? b : *b.divide_exact(cb);
  Polynomial c = gcd(ca, cb);
  Polynomial g = prs_gcd(pa, pb, v);
  if (!g.is_constant()) g = primitive_in(g, v);
  return (c * g).monic();
}

}  // namespace wno
