#include "wno/schouten.hpp"

#include <map>

namespace wno {

namespace {

Rational binomial(int n, int k) {
  Rational b = 1;
  for (int j = 1; j <= k; ++j) b = b * Rational(n - k + j) / Rational(j);
  return b;
}

void trim(DiffEntry& d) {
  while (!d.empty() && d.back().is_zero()) d.pop_back();
}

Polynomial lcm(const Polynomial& a, const Polynomial& b) {
  if (a.is_constant()) return b;
  if (b.is_constant()) return a;
  return (a * b).divide_exact(gcd(a, b)).value().monic();
}

using TensorKey = std::pair<int, Monomial>;

/// Tails written in coordinates: every w and z component over one common
/// denominator, numerators expanded in monomials. The tensor Σ e·w⊗z is then a
/// plain matrix over Q.
struct TailTensor {
  int n = 0;
  Polynomial den{1};
  std::vector<TensorKey> keys;
  std::vector<std::vector<Rational>> t;

  std::map<TensorKey, Rational> coords(const std::vector<RationalExpr>& v) const {
    std::map<TensorKey, Rational> out;
    for (int i = 0; i < static_cast<int>(v.size()); ++i) {
      if (v[i].is_zero()) continue;
      Polynomial scaled = v[i].numerator() * den.divide_exact(v[i].denominator()).value();
      for (const auto& [m, c] : scaled.terms()) out[{i, m}] += c;
    }
    return out;
  }

  std::vector<RationalExpr> vector_of(const std::vector<Rational>& coords) const {
    std::vector<Polynomial> nums(n);
    for (std::size_t a = 0; a < keys.size(); ++a)
      if (coords[a] != 0) nums[keys[a].first].add_term(keys[a].second, coords[a]);
    std::vector<RationalExpr> out;
    for (auto& p : nums) out.emplace_back(p, den);
    return out;
  }
};

TailTensor tail_tensor(const std::vector<Tail>& tails, int n) {
  TailTensor out;
  out.n = n;
  for (const auto& t : tails) {
    for (const auto& x : t.w)
      if (!x.is_zero()) out.den = lcm(out.den, x.denominator());
    for (const auto& x : t.z)
      if (!x.is_zero()) out.den = lcm(out.den, x.denominator());
  }
  std::vector<std::pair<std::map<TensorKey, Rational>, std::map<TensorKey, Rational>>> coords;
  std::map<TensorKey, std::size_t> index;
  for (const auto& t : tails) {
    coords.emplace_back(out.coords(t.w), out.coords(t.z));
    for (const auto& [k, c] : coords.back().first) index.emplace(k, 0);
    for (const auto& [k, c] : coords.back().second) index.emplace(k, 0);
  }
  for (auto& [k, pos] : index) {
    pos = out.keys.size();
    out.keys.push_back(k);
  }
  const std::size_t d = out.keys.size();
  out.t.assign(d, std::vector<Rational>(d, Rational(0)));
  for (std::size_t a = 0; a < tails.size(); ++a)
    for (const auto& [kw, cw] : coords[a].first)
      for (const auto& [kz, cz] : coords[a].second) out.t[index[kw]][index[kz]] += tails[a].e * cw * cz;
  return out;
}

SuperPoly odd_vector(const std::vector<RationalExpr>& v) {
  SuperPoly out;
  for (int i = 0; i < static_cast<int>(v.size()); ++i)
    if (!v[i].is_zero()) out += SuperPoly::odd(i) * v[i];
  return out;
}

std::string slot_name(const char* kind, int i) { return std::string(kind) + "[" + std::to_string(i + 1) + "]"; }

}  // namespace

WNOperator::WNOperator(int fields) : n(fields), local(fields, std::vector<DiffEntry>(fields)) {}

RationalExpr& WNOperator::at(int i, int j, int k) {
  auto& e = local.at(i).at(j);
  if (static_cast<int>(e.size()) <= k) e.resize(k + 1);
  return e[k];
}

RationalExpr WNOperator::coefficient(int i, int j, int k) const {
  const auto& e = local.at(i).at(j);
  return k < static_cast<int>(e.size()) ? e[k] : RationalExpr();
}

int WNOperator::order() const {
  int best = -1;
  for (const auto& row : local)
    for (const auto& e : row)
      for (int k = static_cast<int>(e.size()) - 1; k > best; --k)
        if (!e[k].is_zero()) {
          best = k;
          break;
        }
  return best;
}

void WNOperator::trim() {
  for (auto& row : local)
    for (auto& e : row) wno::trim(e);
  std::erase_if(tails, [](const Tail& t) {
    auto zero = [](const std::vector<RationalExpr>& v) {
      return std::all_of(v.begin(), v.end(), [](const RationalExpr& x) { return x.is_zero(); });
    };
    return t.e == 0 || zero(t.w) || zero(t.z);
  });
}

WNOperator operator+(const WNOperator& a, const WNOperator& b) {
  if (a.n != b.n) throw std::invalid_argument("operators act on different numbers of fields");
  WNOperator out = a;
  for (int i = 0; i < a.n; ++i)
    for (int j = 0; j < a.n; ++j)
      for (int k = 0; k < static_cast<int>(b.local[i][j].size()); ++k) out.at(i, j, k) += b.local[i][j][k];
  out.tails.insert(out.tails.end(), b.tails.begin(), b.tails.end());
  out.trim();
  return out;
}

WNOperator operator*(const Rational& c, const WNOperator& a) {
  WNOperator out = a;
  for (auto& row : out.local)
    for (auto& e : row)
      for (auto& x : e) x *= RationalExpr(c);
  for (auto& t : out.tails) t.e *= c;
  out.trim();
  return out;
}

DiffEntry adjoint(const DiffEntry& d) {
  DiffEntry out(d.size());
  for (int k = 0; k < static_cast<int>(d.size()); ++k) {
    if (d[k].is_zero()) continue;
    std::vector<RationalExpr> derivs{d[k]};
    for (int i = 1; i <= k; ++i) derivs.push_back(derivs.back().total_x());
    const int sign = k % 2 == 0 ? 1 : -1;
    for (int m = 0; m <= k; ++m) out[m] += derivs[k - m] * RationalExpr(binomial(k, m) * sign);
  }
  trim(out);
  return out;
}

WNOperator adjoint(const WNOperator& p) {
  WNOperator out(p.n);
  for (int i = 0; i < p.n; ++i)
    for (int j = 0; j < p.n; ++j) out.local[i][j] = adjoint(p.local[j][i]);
  for (const auto& t : p.tails) out.tails.push_back({-t.e, t.z, t.w});
  return out;
}

WNOperator skew_part(const WNOperator& p) { return Rational(1, 2) * (p + Rational(-1) * adjoint(p)); }

bool equivalent(const WNOperator& a, const WNOperator& b) {
  if (a.n != b.n) return false;
  for (int i = 0; i < a.n; ++i)
    for (int j = 0; j < a.n; ++j) {
      DiffEntry x = a.local[i][j], y = b.local[i][j];
      trim(x);
      trim(y);
      if (x != y) return false;
    }
  std::vector<Tail> diff = a.tails;
  for (const auto& t : b.tails) diff.push_back({-t.e, t.w, t.z});
  auto tensor = tail_tensor(diff, a.n);
  for (const auto& row : tensor.t)
    for (const auto& x : row)
      if (x != 0) return false;
  return true;
}

WNOperator canonical_tails(const WNOperator& p) {
  WNOperator out = p;
  out.tails.clear();
  auto tensor = tail_tensor(p.tails, p.n);
  const std::size_t d = tensor.keys.size();
  std::vector<std::vector<Rational>> s(d, std::vector<Rational>(d));
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) s[a][b] = (tensor.t[a][b] + tensor.t[b][a]) / 2;

  for (;;) {
    // Pick x with xᵀSx ≠ 0: a nonzero diagonal entry, or e_a + e_b when the
    // diagonal vanishes but S_ab does not.
    std::vector<Rational> x(d, Rational(0));
    bool found = false;
    for (std::size_t k = 0; k < d && !found; ++k)
      if (s[k][k] != 0) {
        x[k] = 1;
        found = true;
      }
    for (std::size_t a = 0; a < d && !found; ++a)
      for (std::size_t b = a + 1; b < d && !found; ++b)
        if (s[a][b] != 0) {
          x[a] = 1;
          x[b] = 1;
          found = true;
        }
    if (!found) break;
    std::vector<Rational> v(d, Rational(0));
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b) v[a] += s[a][b] * x[b];
    Rational q = 0;
    for (std::size_t a = 0; a < d; ++a) q += x[a] * v[a];
    Rational dk = 1 / q;
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b) s[a][b] -= dk * v[a] * v[b];
    Rational lead = 0;
    for (const auto& c : v)
      if (c != 0) {
        lead = c;
        break;
      }
    for (auto& c : v) c /= lead;
    dk *= lead * lead;
    auto vec = tensor.vector_of(v);
    out.tails.push_back({dk, vec, vec});
  }
  return out;
}

SuperPoly to_superfunction(const WNOperator& p, NonlocalVarTable& table) {
  SuperPoly out;
  for (int i = 0; i < p.n; ++i)
    for (int j = 0; j < p.n; ++j)
      for (int k = 0; k < static_cast<int>(p.local[i][j].size()); ++k) {
        const RationalExpr& c = p.local[i][j][k];
        if (!c.is_zero()) out += (SuperPoly::odd(i) * SuperPoly::odd(j, k)) * c;
      }
  for (const auto& t : p.tails) {
    SuperPoly w = odd_vector(t.w);
    SuperPoly z = odd_vector(t.z);
    if (t.e == 0 || w.is_zero() || z.is_zero()) continue;
    SuperPoly r;
    if (auto hit = table.find_scaled(z)) r = table.variable(hit->first) * RationalExpr(hit->second);
    else r = table.variable(table.register_density(z, "r", "tail"));
    out += (w * r) * RationalExpr(t.e);
  }
  return out;
}

WNOperator from_superfunction(const SuperPoly& s, int fields, const NonlocalVarTable& table) {
  WNOperator r(fields);
  std::map<int, std::vector<RationalExpr>> tail_w;
  for (const auto& [w, c] : s.terms()) {
    if (w.size() != 2 || word_degree(w) != 2)
      throw std::invalid_argument("from_superfunction expects a superfunction of degree 2");
    if (!w[0].is_jet())
      throw UnsupportedStructure("degree-2 term with two nonlocal factors is not a weakly nonlocal operator");
    // c·p_{i,a}·X ≡ (-1)^a p_i ∂^a(c·X) modulo total derivatives
    const int i = w[0].index;
    const int a = w[0].order;
    SuperPoly x = total_x(SuperPoly::term(c, {w[1]}), a, table);
    if (a % 2 != 0) x = -x;
    for (const auto& [w2, c2] : x.terms()) {
      const OddFactor& f = w2.at(0);
      if (f.is_jet()) {
        r.at(i, f.index, f.order) += c2;
      } else {
        auto& vec = tail_w[f.index];
        vec.resize(fields);
        vec[i] += c2;
      }
    }
  }
  for (auto& [id, wv] : tail_w) {
    std::vector<RationalExpr> zv(fields);
    for (const auto& [w, c] : table.density(id).terms()) {
      if (w.size() != 1 || !w[0].is_jet() || w[0].order != 0)
        throw UnsupportedStructure("nonlocal variable density is not of the form z^j p_j");
      zv.at(w[0].index) += c;
    }
    r.tails.push_back({1, wv, zv});
  }
  r.trim();
  return skew_part(r);
}

std::string diff_to_string(const DiffEntry& d, const Naming& names) {
  std::string s;
  for (int k = 0; k < static_cast<int>(d.size()); ++k) {
    if (d[k].is_zero()) continue;
    std::string c = d[k].to_string(names);
    std::string d_pow = k == 0 ? "" : k == 1 ? "D" : "D^" + std::to_string(k);
    std::string term;
    if (k == 0) {
      term = c;
    } else if (c == "1") {
      term = d_pow;
    } else if (c == "-1") {
      term = "-" + d_pow;
    } else {
      bool simple = d[k].is_polynomial() && d[k].numerator().size() == 1;
      term = (simple ? c : "(" + c + ")") + "*" + d_pow;
    }
    if (s.empty()) s = term;
    else if (term.front() == '-') s += " - " + term.substr(1);
    else s += " + " + term;
  }
  return s.empty() ? "0" : s;
}

SkewResult skew_check(const WNOperator& p, const Naming& names) {
  SkewResult out;
  WNOperator sum = p + adjoint(p);
  for (int i = 0; i < p.n && out.skew; ++i)
    for (int j = 0; j < p.n && out.skew; ++j) {
      DiffEntry e = sum.local[i][j];
      trim(e);
      if (!e.empty()) {
        out.skew = false;
        out.witness = "local[" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "]: " + diff_to_string(e, names);
      }
    }
  if (out.skew) {
    auto tensor = tail_tensor(p.tails, p.n);
    for (std::size_t a = 0; a < tensor.keys.size() && out.skew; ++a)
      for (std::size_t b = 0; b < tensor.keys.size() && out.skew; ++b)
        if (tensor.t[a][b] != tensor.t[b][a]) {
          out.skew = false;
          out.witness = "nonlocal: the tails are not skew-adjoint (sum of e*w(x)z is not symmetric)";
        }
  }
  return out;
}

std::vector<CoefficientEntry> coefficient_report(const ELResult& el, const Naming& names) {
  std::vector<CoefficientEntry> out;
  auto add = [&](const char* kind, int i, const SuperPoly& x) {
    for (const auto& [w, c] : x.terms())
      out.push_back({slot_name(kind, i), w.empty() ? "1" : word_to_string(w, names), c.to_string(names)});
  };
  for (int i = 0; i < el.fields(); ++i) add("du", i, el.du[i]);
  for (int i = 0; i < el.fields(); ++i) add("dp", i, el.dp[i]);
  return out;
}

BracketOutcome schouten_bracket(const SuperPoly& p, const SuperPoly& q, int fields, NonlocalVarTable& table,
                                const std::vector<std::string>& field_names) {
  BracketOutcome out;
  ELResult ep = el_nonlocal(p, fields, table);
  ELResult eq = p == q ? ep : el_nonlocal(q, fields, table);
  for (int i = 0; i < fields; ++i) out.three_vector += ep.du[i] * eq.dp[i] + ep.dp[i] * eq.du[i];
  out.el = el_nonlocal(out.three_vector, fields, table);
  out.trivial = out.el.is_zero();
  out.independence_assumed = out.el.has_nonlocal();
  out.coefficient_report = coefficient_report(out.el, table.naming(field_names));
  return out;
}

BracketOutcome schouten_bracket(const WNOperator& p, const WNOperator& q, NonlocalVarTable& table,
                                const std::vector<std::string>& field_names) {
  if (p.n != q.n) throw std::invalid_argument("operators act on different numbers of fields");
  SuperPoly sp = to_superfunction(p, table);
  SuperPoly sq = to_superfunction(q, table);
  return schouten_bracket(sp, sq, p.n, table, field_names);
}

HamiltonianVerdict is_hamiltonian(const WNOperator& p, const std::vector<std::string>& field_names) {
  HamiltonianVerdict out;
  out.skew = skew_check(p, out.table.naming(field_names));
  WNOperator c = canonical_tails(p);
  out.bracket = schouten_bracket(c, c, out.table, field_names);
  out.hamiltonian = out.skew.skew && out.bracket.trivial;
  return out;
}

}  // namespace wno
