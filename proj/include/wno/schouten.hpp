#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wno/nonlocal.hpp"

namespace wno {

/// Σ_k c_k ∂ₓ^k, indexed by k.
using DiffEntry = std::vector<RationalExpr>;

/// e · w ∂ₓ⁻¹ z, i.e. (Pψ)^i ∋ e w^i ∂ₓ⁻¹(z^j ψ_j).
struct Tail {
  Rational e = 1;
  std::vector<RationalExpr> w;
  std::vector<RationalExpr> z;

  friend bool operator==(const Tail&, const Tail&) = default;
};

/// Weakly nonlocal operator: an n×n matrix of differential operators plus
/// finitely many tails.
struct WNOperator {
  int n = 1;
  std::vector<std::vector<DiffEntry>> local;
  std::vector<Tail> tails;

  WNOperator() : WNOperator(1) {}
  explicit WNOperator(int fields);

  /// Coefficient of ∂ₓ^k in entry (i, j); grows the entry as needed.
  RationalExpr& at(int i, int j, int k);
  RationalExpr coefficient(int i, int j, int k) const;
  int order() const;
  /// Drops trailing zero coefficients.
  void trim();

  friend bool operator==(const WNOperator&, const WNOperator&) = default;
};

WNOperator operator+(const WNOperator& a, const WNOperator& b);
WNOperator operator*(const Rational& c, const WNOperator& a);

/// Formal adjoint of a scalar differential operator: Σ(-1)^k ∂^k ∘ c_k.
DiffEntry adjoint(const DiffEntry& d);
/// (P*)^{ij} = (P^{ji})†; tails e·w∂⁻¹z become -e·z∂⁻¹w.
WNOperator adjoint(const WNOperator& p);
/// (P - P*)/2.
WNOperator skew_part(const WNOperator& p);

/// Equality as operators: local parts coefficient-wise, tails as the tensor
/// Σ e·w⊗z over Q (so splitting or rescaling tails does not matter).
bool equivalent(const WNOperator& a, const WNOperator& b);

/// Rewrites the skew part of the tails as Σ d_k v_k ∂⁻¹ v_k with Q-linearly
/// independent v_k (a symmetric LDLᵀ decomposition of the tail tensor). Each
/// v_k then needs a single nonlocal variable.
WNOperator canonical_tails(const WNOperator& p);

/// p_i P^{ijσ} p_{j,σ} + Σ e (w^i p_i) r with r registered for z^j p_j.
SuperPoly to_superfunction(const WNOperator& p, NonlocalVarTable& table);

/// Reads a degree-2 superfunction back as an operator: integrates by parts to
/// p_i R^{ij}(p_j) and returns the skew part of R. Nonlocal factors must have
/// densities of the form z^j p_j. Throws UnsupportedStructure otherwise.
WNOperator from_superfunction(const SuperPoly& s, int fields, const NonlocalVarTable& table);

struct SkewResult {
  bool skew = true;
  std::string witness;  // first nonzero entry of P + P*, empty when skew
};

SkewResult skew_check(const WNOperator& p, const Naming& names = {});

/// "c0 + c1*D + c3*D^3" in the operator file syntax.
std::string diff_to_string(const DiffEntry& d, const Naming& names);

struct CoefficientEntry {
  std::string slot;  // "du[1]", "dp[2]", ...
  std::string monomial;
  std::string coefficient;
};

struct BracketOutcome {
  SuperPoly three_vector;
  ELResult el;
  bool trivial = false;
  bool independence_assumed = false;
  std::vector<CoefficientEntry> coefficient_report;
};

/// Bracket of two bivectors: [P,Q] = δP/δu^i·δQ/δp_i + δP/δp_i·δQ/δu^i, with
/// nonlocal-aware variational derivatives. Trivial iff its EL tuple vanishes.
BracketOutcome schouten_bracket(const SuperPoly& p, const SuperPoly& q, int fields, NonlocalVarTable& table,
                                const std::vector<std::string>& field_names = {});
BracketOutcome schouten_bracket(const WNOperator& p, const WNOperator& q, NonlocalVarTable& table,
                                const std::vector<std::string>& field_names = {});

std::vector<CoefficientEntry> coefficient_report(const ELResult& el, const Naming& names);

struct HamiltonianVerdict {
  bool hamiltonian = false;
  SkewResult skew;
  BracketOutcome bracket;
  NonlocalVarTable table;
};

HamiltonianVerdict is_hamiltonian(const WNOperator& p, const std::vector<std::string>& field_names = {});

}  // namespace wno
