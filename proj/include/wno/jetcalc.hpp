#pragma once

#include <vector>

#include "wno/nonlocal_table.hpp"
#include "wno/superpoly.hpp"

namespace wno {

/// Total x-derivative. Raises jet orders and replaces each nonlocal r by its
/// defining density in place. It is an even derivation.
SuperPoly total_x(const SuperPoly& a, const NonlocalVarTable& table);
/// Local-only overload; throws NonlocalError on nonlocal input.
SuperPoly total_x(const SuperPoly& a);
SuperPoly total_x(const SuperPoly& a, int times, const NonlocalVarTable& table);

enum class VarKind { Even, Odd };

/// Σ_σ (-1)^σ ∂_σ( ∂a/∂v_σ · weight ), with v = u^field or p_field.
/// Nonlocal generators of `a` are held fixed; `weight` is never differentiated
/// by v but is carried through the total derivatives.
SuperPoly weighted_var_deriv(const SuperPoly& a, const SuperPoly& weight, int field, VarKind kind,
                             const NonlocalVarTable& table);

/// Variational derivative of a local superfunction.
SuperPoly var_deriv(const SuperPoly& a, int field, VarKind kind);

/// Euler–Lagrange tuple (δ/δu^i, δ/δp_i), one entry per field.
struct ELResult {
  std::vector<SuperPoly> du;
  std::vector<SuperPoly> dp;

  ELResult() = default;
  explicit ELResult(int fields) : du(fields), dp(fields) {}

  int fields() const { return static_cast<int>(du.size()); }
  bool is_zero() const;
  bool has_nonlocal() const;

  ELResult& operator+=(const ELResult& o);
  ELResult& operator-=(const ELResult& o);
  ELResult& operator*=(const RationalExpr& c);
  friend ELResult operator+(ELResult a, const ELResult& b) { return a += b; }
  friend ELResult operator-(ELResult a, const ELResult& b) { return a -= b; }
  friend ELResult operator*(ELResult a, const RationalExpr& c) { return a *= c; }
  friend bool operator==(const ELResult&, const ELResult&) = default;
};

ELResult euler_lagrange(const SuperPoly& a, int fields);

/// Scalar differential operator Σ_k c_k ∂^k with superfunction coefficients.
/// `parity` is the parity of the operator (of its coefficients).
class DiffOp {
 public:
  DiffOp() = default;
  DiffOp(std::vector<SuperPoly> coefficients, int parity);

  const std::vector<SuperPoly>& coefficients() const { return coeffs_; }
  int parity() const { return parity_; }
  int order() const { return static_cast<int>(coeffs_.size()) - 1; }
  const SuperPoly& coefficient(int k) const;

  SuperPoly apply(const SuperPoly& f) const;
  /// Formal adjoint Σ_k (-1)^k ∂^k ∘ c_k, expanded by Leibniz.
  DiffOp adjoint() const;

  friend bool operator==(const DiffOp&, const DiffOp&) = default;

 private:
  void trim();

  std::vector<SuperPoly> coeffs_;
  int parity_ = 0;
};

/// Fréchet derivative of a homogeneous local superfunction a:
/// even slot i is Σ ∂a/∂u^i_σ ∂_σ, odd slot i is (-1)^{|a|+1} Σ ∂a/∂p_{i,σ} ∂_σ.
struct LinearizationOp {
  int degree = 0;
  std::vector<DiffOp> even_rows;
  std::vector<DiffOp> odd_rows;

  friend bool operator==(const LinearizationOp&, const LinearizationOp&) = default;
};

LinearizationOp linearize(const SuperPoly& a, int fields);

/// Graded adjoint: each slot's formal adjoint times (-1)^{|Δ||arg|}, where
/// |arg| is 0 on even slots and 1 on odd slots. This is the pairing that puts
/// the argument on the left, under which ℓ*_a(1) is the Euler–Lagrange tuple.
LinearizationOp adjoint(const LinearizationOp& op);

/// Evaluates every slot of `op` on the constant 1.
ELResult apply_to_one(const LinearizationOp& op);

}  // namespace wno
