#include "wno/nonlocal.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace wno {

namespace {

constexpr int kMaxIntegrationSteps = 4096;

int top_order(const SuperPoly& a, int fields, int& field, VarKind& kind) {
  int best = -1;
  for (int i = 0; i < fields; ++i) {
    int odd = a.max_odd_order(i);
    if (odd > best) {
      best = odd;
      field = i;
      kind = VarKind::Odd;
    }
    int even = a.max_even_order(i);
    if (even > best) {
      best = even;
      field = i;
      kind = VarKind::Even;
    }
  }
  return best;
}

bool max_order_below(const SuperPoly& a, int fields, int bound) {
  for (int i = 0; i < fields; ++i)
    if (a.max_odd_order(i) >= bound || a.max_even_order(i) >= bound) return false;
  return true;
}

// Univariate polynomials in one jet variable v over the field of rational
// expressions in the remaining variables; index = power of v.
using UPoly = std::vector<RationalExpr>;

UPoly in_powers(const Polynomial& p, JetVar v) {
  UPoly out(std::max(p.degree_in(v), 0) + 1);
  for (const auto& [e, c] : p.coefficients_in(v)) out[e] = RationalExpr(c);
  return out;
}

void trim(UPoly& a) {
  while (!a.empty() && a.back().is_zero()) a.pop_back();
}

RationalExpr from_powers(const UPoly& a, JetVar v) {
  RationalExpr out;
  RationalExpr x = RationalExpr::variable(v);
  for (std::size_t k = a.size(); k-- > 0;) out = out * x + a[k];
  return out;
}

// Solves the square system m·x = rhs over the rational expressions; nullopt if singular.
std::optional<UPoly> solve(std::vector<UPoly> m, UPoly rhs) {
  const std::size_t n = rhs.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && m[pivot][col].is_zero()) ++pivot;
    if (pivot == n) return std::nullopt;
    std::swap(m[pivot], m[col]);
    std::swap(rhs[pivot], rhs[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || m[r][col].is_zero()) continue;
      RationalExpr f = m[r][col] / m[col][col];
      for (std::size_t k = col; k < n; ++k) m[r][k] -= f * m[col][k];
      rhs[r] -= f * rhs[col];
    }
  }
  UPoly x(n);
  for (std::size_t k = 0; k < n; ++k) x[k] = rhs[k] / m[k][k];
  return x;
}

// Rational antiderivative of f in v (Horowitz-Ostrogradsky); nullopt when
// the integral has a logarithmic part.
std::optional<RationalExpr> integrate_rational(const RationalExpr& f, JetVar v) {
  const Polynomial& num = f.numerator();
  const Polynomial& den = f.denominator();
  if (den.degree_in(v) <= 0) return RationalExpr(num.integrate(v), den);

  // num = q·den + rem
  UPoly rem = in_powers(num, v), dp = in_powers(den, v);
  trim(rem);
  UPoly q(rem.size() >= dp.size() ? rem.size() - dp.size() + 1 : 0);
  while (rem.size() >= dp.size()) {
    const std::size_t shift = rem.size() - dp.size();
    RationalExpr c = rem.back() / dp.back();
    q[shift] = c;
    for (std::size_t k = 0; k < dp.size(); ++k) rem[shift + k] -= c * dp[k];
    trim(rem);
  }
  RationalExpr result;
  RationalExpr x = RationalExpr::variable(v);
  for (std::size_t k = 0; k < q.size(); ++k)
    result += q[k] * x.pow(static_cast<int>(k) + 1) / RationalExpr(Rational(static_cast<long>(k) + 1));
  if (rem.empty()) return result;

  // rem/den = (b/d1)' + c/d2 with d1 = gcd(den, den'), d2 = den/d1.
  const Polynomial d1 = gcd(den, den.partial(v));
  const int m = d1.degree_in(v);
  if (m <= 0) return std::nullopt;
  const Polynomial d2 = *den.divide_exact(d1);
  const Polynomial h = *(d1.partial(v) * d2).divide_exact(d1);
  const int n2 = d2.degree_in(v);
  const int size = m + n2;
  std::vector<Polynomial> columns;
  const Polynomial xv = Polynomial::variable(v);
  for (int k = 0; k < m; ++k) {
    Polynomial xk = xv.pow(static_cast<unsigned>(k));
    Polynomial dxk = k == 0 ? Polynomial() : xv.pow(static_cast<unsigned>(k - 1)) * Polynomial(k);
    columns.push_back(dxk * d2 - xk * h);
  }
  for (int k = 0; k < n2; ++k) columns.push_back(xv.pow(static_cast<unsigned>(k)) * d1);
  std::vector<UPoly> matrix(size, UPoly(size));
  for (int col = 0; col < size; ++col) {
    UPoly c = in_powers(columns[col], v);
    for (int row = 0; row < size && row < static_cast<int>(c.size()); ++row) matrix[row][col] = c[row];
  }
  rem.resize(size);
  auto sol = solve(std::move(matrix), std::move(rem));
  if (!sol) return std::nullopt;
  for (int k = m; k < size; ++k)
    if (!(*sol)[k].is_zero()) return std::nullopt;
  sol->resize(m);
  result += from_powers(*sol, v) / RationalExpr(d1);
  if (result.partial(v) != f) return std::nullopt;
  return result;
}

std::optional<SuperPoly> integrate_even(const SuperPoly& c, JetVar v) {
  SuperPoly out;
  for (const auto& [w, coeff] : c.terms()) {
    auto integral = integrate_rational(coeff, v);
    if (!integral) return std::nullopt;
    out.add_term(w, *integral);
  }
  return out;
}

SuperPoly suffix_poly(const std::vector<int>& suffix, const NonlocalVarTable& table) {
  SuperPoly out(1);
  for (int id : suffix) out = out * table.variable(id);
  return out;
}

}  // namespace

IntegrationResult integrate_density(const SuperPoly& y, int fields, const NonlocalVarTable& table) {
  IntegrationResult res;
  if (y.is_zero()) {
    res.ok = true;
    return res;
  }
  if (!y.is_local()) {
    res.residual = y;
    res.reason = "density contains nonlocal variables";
    return res;
  }
  const int n = std::max(fields, y.max_field() + 1);
  for (int i = 0; i < n; ++i) {
    if (!var_deriv(y, i, VarKind::Even).is_zero() || !var_deriv(y, i, VarKind::Odd).is_zero()) {
      res.residual = y;
      res.reason = "not a total derivative: variational derivative by field " + std::to_string(i + 1) +
                   " is nonzero";
      return res;
    }
  }

  SuperPoly eta;
  SuperPoly rem = y;
  for (int step = 0; step < kMaxIntegrationSteps && !rem.is_zero(); ++step) {
    int field = 0;
    VarKind kind = VarKind::Odd;
    const int top = top_order(rem, n, field, kind);
    if (top <= 0) {
      res.residual = rem;
      res.reason = "remainder has no x-derivatives";
      return res;
    }
    SuperPoly piece;
    if (kind == VarKind::Odd) {
      SuperPoly c = rem.partial(OddFactor::jet(field, top));
      if (!max_order_below(c, n, top) || c.max_odd_order(field) == top - 1 ||
          !c.partial(OddFactor::jet(field, top - 1)).is_zero()) {
        res.residual = rem;
        res.reason = "leading odd coefficient is not integrable";
        return res;
      }
      piece = SuperPoly::odd(field, top - 1) * c;
    } else {
      JetVar v{field, top};
      SuperPoly c = rem.partial(v);
      auto integrated = max_order_below(c, n, top) ? integrate_even(c, JetVar{field, top - 1}) : std::nullopt;
      if (!integrated) {
        res.residual = rem;
        res.reason = "leading even coefficient is not integrable in rational functions";
        return res;
      }
      piece = *integrated;
    }
    eta += piece;
    rem -= total_x(piece, table);
  }
  if (!rem.is_zero() || total_x(eta, table) != y) {
    res.residual = rem;
    res.reason = "construction did not terminate";
    return res;
  }
  res.ok = true;
  res.antiderivative = std::move(eta);
  return res;
}

SuperPoly antiderivative(const SuperPoly& h, int fields, NonlocalVarTable& table, const std::string& prefix) {
  if (h.is_zero()) return {};
  if (auto hit = table.find_scaled(h)) return table.variable(hit->first) * RationalExpr(hit->second);

  SuperPoly result;
  SuperPoly rem = h;
  std::set<std::vector<int>> stuck;
  bool progress = true;
  while (progress) {
    progress = false;
    auto groups = classify(rem);
    std::stable_sort(groups.begin(), groups.end(), [&](const TailTerm& a, const TailTerm& b) {
      if (a.suffix.size() != b.suffix.size()) return a.suffix.size() > b.suffix.size();
      return a.suffix > b.suffix;
    });
    for (const auto& g : groups) {
      if (g.suffix.empty() || stuck.count(g.suffix)) continue;
      auto integ = integrate_density(g.prefactor, fields, table);
      if (!integ.ok) {
        stuck.insert(g.suffix);
        continue;
      }
      SuperPoly piece = integ.antiderivative * suffix_poly(g.suffix, table);
      result += piece;
      rem -= total_x(piece, table);
      progress = true;
      break;
    }
  }

  SuperPoly local;
  SuperPoly nonlocal;
  for (const auto& [w, c] : rem.terms()) {
    bool is_local = std::none_of(w.begin(), w.end(), [](const OddFactor& f) { return f.is_nonlocal(); });
    (is_local ? local : nonlocal).add_term(w, c);
  }
  if (!local.is_zero()) {
    auto integ = integrate_density(local, fields, table);
    if (integ.ok) {
      result += integ.antiderivative;
      local = SuperPoly();
    }
  }
  SuperPoly leftover = local + nonlocal;
  if (!leftover.is_zero()) {
    if (auto hit = table.find_scaled(leftover)) {
      result += table.variable(hit->first) * RationalExpr(hit->second);
    } else {
      int id = table.register_density(leftover, prefix, "formal antiderivative");
      result += table.variable(id);
    }
  }
  if (total_x(result, table) != h) throw std::logic_error("antiderivative failed back-substitution");
  return result;
}

std::string to_string(TailKind k) {
  switch (k) {
    case TailKind::Local: return "local";
    case TailKind::N: return "N";
    case TailKind::T1: return "T1";
    case TailKind::T2: return "T2";
    case TailKind::General: return "general";
    case TailKind::Unsupported: return "unsupported";
  }
  return "?";
}

std::vector<TailTerm> classify(const SuperPoly& a) {
  std::map<std::vector<int>, SuperPoly> groups;
  for (const auto& [w, c] : a.terms()) {
    auto split = std::find_if(w.begin(), w.end(), [](const OddFactor& f) { return f.is_nonlocal(); });
    std::vector<int> suffix;
    for (auto it = split; it != w.end(); ++it) suffix.push_back(it->index);
    groups[suffix].add_term(OddWord(w.begin(), split), c);
  }
  std::vector<TailTerm> out;
  for (auto& [suffix, pre] : groups) {
    TailTerm t{pre, suffix, TailKind::Local};
    const int d = pre.homogeneous() ? pre.degree() : -2;
    if (suffix.size() >= 3) t.kind = TailKind::Unsupported;
    else if (suffix.size() == 2) t.kind = d == 1 ? TailKind::T2 : TailKind::General;
    else if (suffix.size() == 1) t.kind = d == 1 ? TailKind::N : d == 2 ? TailKind::T1 : TailKind::General;
    out.push_back(std::move(t));
  }
  return out;
}

SuperPoly assemble(const TailTerm& t, const NonlocalVarTable& table) {
  return t.prefactor * suffix_poly(t.suffix, table);
}

SuperPoly assemble(const std::vector<TailTerm>& terms, const NonlocalVarTable& table) {
  SuperPoly out;
  for (const auto& t : terms) out += assemble(t, table);
  return out;
}

DepthReduction reduce_depth(const TailTerm& term, int fields, NonlocalVarTable& table) {
  DepthReduction out;
  if (term.prefactor.is_zero()) {
    out.reduced = true;
    return out;
  }
  if (term.suffix.empty()) {
    out.terms.push_back(term);
    return out;
  }
  auto integ = integrate_density(term.prefactor, fields, table);
  if (!integ.ok) {
    out.terms.push_back(term);
    out.formal = table.register_density(assemble(term, table), "y", "formal antiderivative");
    return out;
  }
  SuperPoly s = suffix_poly(term.suffix, table);
  out.terms = classify(-(integ.antiderivative * total_x(s, table)));
  out.reduced = true;
  return out;
}

SuperPoly right_derivative(const SuperPoly& f, int id) {
  SuperPoly out;
  for (const auto& [w, c] : f.terms()) {
    auto it = std::find_if(w.begin(), w.end(),
                           [id](const OddFactor& g) { return g.is_nonlocal() && g.index == id; });
    if (it == w.end()) continue;
    if (it->odd()) {
      int after = 0;
      for (auto jt = it + 1; jt != w.end(); ++jt) after += jt->degree;
      OddWord rest(w.begin(), it);
      rest.insert(rest.end(), it + 1, w.end());
      out.add_term(rest, after % 2 == 0 ? c : -c);
    } else {
      long mult = std::count(w.begin(), w.end(), *it);
      OddWord rest(w.begin(), it);
      rest.insert(rest.end(), it + 1, w.end());
      out.add_term(rest, c * RationalExpr(mult));
    }
  }
  return out;
}

ELResult weighted_el(const SuperPoly& f, const SuperPoly& weight, int fields, NonlocalVarTable& table) {
  ELResult out(fields);
  if (f.is_zero() || weight.is_zero()) return out;
  for (const auto& [deg, part] : f.by_degree()) {
    for (int i = 0; i < fields; ++i) {
      out.du[i] += weighted_var_deriv(part, weight, i, VarKind::Even, table);
      out.dp[i] += weighted_var_deriv(part, weight, i, VarKind::Odd, table);
    }
    for (int id : part.nonlocal_ids()) {
      SuperPoly g = right_derivative(part, id);
      if (g.is_zero()) continue;
      const int r_deg = table.entry(id).degree;
      const int g_deg = deg - r_deg;
      SuperPoly h = antiderivative(g * weight, fields, table);
      ELResult inner = weighted_el(table.density(id), h, fields, table);
      out += inner * RationalExpr((r_deg * g_deg) % 2 == 0 ? -1 : 1);
    }
  }
  return out;
}

ELResult el_nonlocal(const SuperPoly& t, int fields, NonlocalVarTable& table) {
  for (const auto& term : classify(t)) {
    if (term.kind == TailKind::Unsupported) {
      Naming names = table.naming({});
      throw UnsupportedStructure("unsupported nonlocal structure (more than two nonlocal factors): " +
                                 assemble(term, table).to_string(names));
    }
    for (int id : term.suffix) (void)table.entry(id);
  }
  return weighted_el(t, SuperPoly(1), fields, table);
}

}  // namespace wno
