#include "wno/jetcalc.hpp"

namespace wno {

namespace {

const NonlocalVarTable& empty_table() {
  static const NonlocalVarTable table;
  return table;
}

SuperPoly word_poly(const OddWord& w) { return SuperPoly::term(RationalExpr(1), w); }

}  // namespace

SuperPoly total_x(const SuperPoly& a, const NonlocalVarTable& table) {
  SuperPoly out;
  for (const auto& [w, c] : a.terms()) {
    out.add_term(w, c.total_x());
    for (std::size_t k = 0; k < w.size(); ++k) {
      if (w[k].is_jet()) {
        OddWord raised = w;
        raised[k].order += 1;
        int s = canonicalize(raised);
        if (s != 0) out.add_term(raised, s > 0 ? c : -c);
      } else {
        const SuperPoly& z = table.density(w[k].index);
        OddWord prefix(w.begin(), w.begin() + static_cast<long>(k));
        OddWord suffix(w.begin() + static_cast<long>(k) + 1, w.end());
        out += c * (word_poly(prefix) * z * word_poly(suffix));
      }
    }
  }
  return out;
}

SuperPoly total_x(const SuperPoly& a) {
  if (!a.is_local()) throw NonlocalError("total_x of a nonlocal superfunction needs its variable table");
  return total_x(a, empty_table());
}

SuperPoly total_x(const SuperPoly& a, int times, const NonlocalVarTable& table) {
  SuperPoly out = a;
  for (int i = 0; i < times; ++i) out = total_x(out, table);
  return out;
}

SuperPoly weighted_var_deriv(const SuperPoly& a, const SuperPoly& weight, int field, VarKind kind,
                             const NonlocalVarTable& table) {
  const int top = kind == VarKind::Even ? a.max_even_order(field) : a.max_odd_order(field);
  // Horner: X_0 - ∂(X_1 - ∂(X_2 - ...))
  SuperPoly acc;
  for (int sigma = top; sigma >= 0; --sigma) {
    SuperPoly x = kind == VarKind::Even ? a.partial(JetVar{field, sigma})
                                        : a.partial(OddFactor::jet(field, sigma));
    if (!x.is_zero()) x = x * weight;
    acc = x - total_x(acc, table);
  }
  return acc;
}

SuperPoly var_deriv(const SuperPoly& a, int field, VarKind kind) {
  if (!a.is_local())
    throw NonlocalError("var_deriv takes local superfunctions; use el_nonlocal for nonlocal input");
  return weighted_var_deriv(a, SuperPoly(1), field, kind, empty_table());
}

bool ELResult::is_zero() const {
  for (const auto& x : du)
    if (!x.is_zero()) return false;
  for (const auto& x : dp)
    if (!x.is_zero()) return false;
  return true;
}

bool ELResult::has_nonlocal() const {
  for (const auto& x : du)
    if (!x.is_local()) return true;
  for (const auto& x : dp)
    if (!x.is_local()) return true;
  return false;
}

ELResult& ELResult::operator+=(const ELResult& o) {
  if (du.size() < o.du.size()) {
    du.resize(o.du.size());
    dp.resize(o.dp.size());
  }
  for (std::size_t i = 0; i < o.du.size(); ++i) {
    du[i] += o.du[i];
    dp[i] += o.dp[i];
  }
  return *this;
}

ELResult& ELResult::operator-=(const ELResult& o) {
  if (du.size() < o.du.size()) {
    du.resize(o.du.size());
    dp.resize(o.dp.size());
  }
  for (std::size_t i = 0; i < o.du.size(); ++i) {
    du[i] -= o.du[i];
    dp[i] -= o.dp[i];
  }
  return *this;
}

ELResult& ELResult::operator*=(const RationalExpr& c) {
  for (auto& x : du) x *= c;
  for (auto& x : dp) x *= c;
  return *this;
}

ELResult euler_lagrange(const SuperPoly& a, int fields) {
  ELResult out(fields);
  for (int i = 0; i < fields; ++i) {
    out.du[i] = var_deriv(a, i, VarKind::Even);
    out.dp[i] = var_deriv(a, i, VarKind::Odd);
  }
  return out;
}

// ---------------------------------------------------------------------------

DiffOp::DiffOp(std::vector<SuperPoly> coefficients, int parity)
    : coeffs_(std::move(coefficients)), parity_(parity % 2) {
  trim();
}

void DiffOp::trim() {
  while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

const SuperPoly& DiffOp::coefficient(int k) const {
  static const SuperPoly zero;
  if (k < 0 || k >= static_cast<int>(coeffs_.size())) return zero;
  return coeffs_[k];
}

SuperPoly DiffOp::apply(const SuperPoly& f) const {
  SuperPoly out;
  SuperPoly deriv = f;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    if (k > 0) deriv = total_x(deriv);
    if (!coeffs_[k].is_zero()) out += coeffs_[k] * deriv;
  }
  return out;
}

DiffOp DiffOp::adjoint() const {
  std::vector<SuperPoly> out(coeffs_.size());
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    if (coeffs_[k].is_zero()) continue;
    const int sign = k % 2 == 0 ? 1 : -1;
    // (-1)^k ∂^k ∘ c = (-1)^k Σ_j C(k,j) ∂^{k-j}(c) ∂^j
    std::vector<SuperPoly> derivs{coeffs_[k]};
    for (std::size_t i = 1; i <= k; ++i) derivs.push_back(total_x(derivs.back()));
    Rational binom = 1;
    for (std::size_t j = 0; j <= k; ++j) {
      if (j > 0) binom = binom * Rational(static_cast<long>(k - j + 1)) / Rational(static_cast<long>(j));
      out[j] += derivs[k - j] * RationalExpr(binom * sign);
    }
  }
  return DiffOp(std::move(out), parity_);
}

LinearizationOp linearize(const SuperPoly& a, int fields) {
  if (!a.is_local()) throw NonlocalError("linearize takes local superfunctions");
  if (!a.homogeneous()) throw std::invalid_argument("linearize takes homogeneous superfunctions");
  LinearizationOp op;
  op.degree = a.is_zero() ? 0 : a.degree();
  const RationalExpr odd_sign((op.degree + 1) % 2 == 0 ? 1 : -1);
  for (int i = 0; i < fields; ++i) {
    std::vector<SuperPoly> even;
    for (int s = 0; s <= a.max_even_order(i); ++s) even.push_back(a.partial(JetVar{i, s}));
    std::vector<SuperPoly> odd;
    for (int s = 0; s <= a.max_odd_order(i); ++s) odd.push_back(a.partial(OddFactor::jet(i, s)) * odd_sign);
    op.even_rows.emplace_back(std::move(even), op.degree);
    op.odd_rows.emplace_back(std::move(odd), op.degree + 1);
  }
  return op;
}

LinearizationOp adjoint(const LinearizationOp& op) {
  LinearizationOp out;
  out.degree = op.degree;
  for (const auto& row : op.even_rows) out.even_rows.push_back(row.adjoint());
  for (const auto& row : op.odd_rows) {
    DiffOp adj = row.adjoint();
    if (row.parity() == 1) {
      std::vector<SuperPoly> c = adj.coefficients();
      for (auto& x : c) x = -x;
      adj = DiffOp(std::move(c), adj.parity());
    }
    out.odd_rows.push_back(std::move(adj));
  }
  return out;
}

ELResult apply_to_one(const LinearizationOp& op) {
  ELResult out(static_cast<int>(op.even_rows.size()));
  for (std::size_t i = 0; i < op.even_rows.size(); ++i) {
    out.du[i] = op.even_rows[i].coefficient(0);
    out.dp[i] = op.odd_rows[i].coefficient(0);
  }
  return out;
}

}  // namespace wno
