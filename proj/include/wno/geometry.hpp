#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "wno/schouten.hpp"

namespace wno {

using Matrix = std::vector<std::vector<RationalExpr>>;
using Tensor3 = std::vector<std::vector<std::vector<RationalExpr>>>;
using Tensor4 = std::vector<Tensor3>;

class SingularMetric : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Data of a first-order operator g^{ij}∂ + Γ^{ij}_k u^k_x + w ∂⁻¹ w with
/// w^i = W^i_k u^k_x. Entries are rational functions of the fields u^k only.
struct MetricData {
  int n = 1;
  Matrix g_upper;  // g^{ij}
  Matrix W;        // W^i_k

  static MetricData zero(int n);
};

struct DerivedGeometry {
  int n = 0;
  Matrix g_lower;       // g_{ij}
  Tensor3 gamma_lc;     // Γ^i_{jk}
  Tensor3 gamma_upper;  // Γ^{ij}_k = -g^{is} Γ^j_{sk}
  Tensor4 riemann;      // R^{ij}_{kh}
  Tensor3 nabla_w;      // ∇_i W^j_k
};

/// Levi-Civita connection, curvature and ∇W of the metric. The curvature is
/// R^i_{jkl} = ∂_kΓ^i_{lj} - ∂_lΓ^i_{kj} + Γ^i_{km}Γ^m_{lj} - Γ^i_{lm}Γ^m_{kj},
/// raised to R^{ij}_{kh} = g^{js} R^i_{skh}; with it the unit sphere has
/// R^{ij}_{kh} = δ^i_k δ^j_h - δ^j_k δ^i_h.
DerivedGeometry derive_geometry(const MetricData& m);

struct ConditionVerdict {
  std::string name;
  std::string statement;
  bool ok = true;
  std::string witness;
};

/// The six conditions, in order: metric symmetry, compatibility of Γ^{ij}_k
/// with g, symmetry of g^{is}Γ^{jk}_s, symmetry of g^{is}W^j_s, symmetry of
/// ∇_iW^j_k in (i,k), and the Gauss equation R^{ij}_{kh} = W^i_kW^j_h - W^j_kW^i_h.
std::vector<ConditionVerdict> check_conditions(const MetricData& m, const Naming& names = {});

WNOperator build_operator(const MetricData& m);

}  // namespace wno
