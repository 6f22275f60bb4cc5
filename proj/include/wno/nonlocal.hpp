#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wno/jetcalc.hpp"
#include "wno/nonlocal_table.hpp"

namespace wno {

class UnsupportedStructure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct IntegrationResult {
  bool ok = false;
  SuperPoly antiderivative;
  SuperPoly residual;  // the part that could not be integrated
  std::string reason;
};

/// Finds η with total_x(η) == y for a local density y. Exactness is tested
/// first (all variational derivatives vanish); η is then built by repeatedly
/// absorbing the highest-order jet generator into a total derivative, and
/// checked by back-substitution.
IntegrationResult integrate_density(const SuperPoly& y, int fields, const NonlocalVarTable& table);

/// ∂ₓ⁻¹ h for a homogeneous h that may contain nonlocal generators. Local
/// pieces and nonlocal pieces with exact prefactors are integrated
/// explicitly (A·S = ∂(a·S) - a·∂S); whatever remains becomes a formal
/// variable registered with name prefix `prefix`.
SuperPoly antiderivative(const SuperPoly& h, int fields, NonlocalVarTable& table,
                         const std::string& prefix = "y");

enum class TailKind {
  Local,        // no nonlocal factor
  N,            // W·r, W of degree 1
  T1,           // Y1·r, Y1 of degree 2
  T2,           // Y2·r·s, Y2 of degree 1
  General,      // one or two nonlocal factors with another prefactor degree
  Unsupported,  // three or more nonlocal factors
};

std::string to_string(TailKind k);

/// Local prefactor times a canonical nonlocal suffix.
struct TailTerm {
  SuperPoly prefactor;
  std::vector<int> suffix;
  TailKind kind = TailKind::Local;
};

std::vector<TailTerm> classify(const SuperPoly& a);
SuperPoly assemble(const TailTerm& t, const NonlocalVarTable& table);
SuperPoly assemble(const std::vector<TailTerm>& terms, const NonlocalVarTable& table);

struct DepthReduction {
  std::vector<TailTerm> terms;
  bool reduced = false;
  std::optional<int> formal;  // registered when the prefactor does not integrate
};

/// Rewrites A·S modulo a total derivative as -a·∂S when A = ∂a, which lowers
/// the number of nonlocal factors by one.
DepthReduction reduce_depth(const TailTerm& term, int fields, NonlocalVarTable& table);

/// ∫ δF · weight for a superfunction F that may contain nonlocal generators.
/// Jet variations give Σ(-1)^σ ∂_σ(∂F/∂v_σ · weight); each nonlocal r in F with
/// F = G·r + ... contributes -(-1)^{|r||G|} ℓ*_{Z_r, ∂⁻¹(G·weight)}(1).
ELResult weighted_el(const SuperPoly& f, const SuperPoly& weight, int fields, NonlocalVarTable& table);

/// Euler–Lagrange tuple of a superfunction with at most two nonlocal factors
/// per term. Throws UnsupportedStructure otherwise.
ELResult el_nonlocal(const SuperPoly& t, int fields, NonlocalVarTable& table);

/// F = G·r + (terms without r): returns G, moving r to the right with its sign.
SuperPoly right_derivative(const SuperPoly& f, int id);

}  // namespace wno
