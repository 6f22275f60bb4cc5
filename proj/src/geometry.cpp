#include "wno/geometry.hpp"

namespace wno {

namespace {

RationalExpr d(const RationalExpr& f, int k) { return f.partial(JetVar{k, 0}); }

Tensor3 tensor3(int n) { return Tensor3(n, Matrix(n, std::vector<RationalExpr>(n))); }

void validate(const MetricData& m) {
  auto check = [&](const Matrix& a, const char* what) {
    if (static_cast<int>(a.size()) != m.n) throw std::invalid_argument(std::string(what) + " has the wrong size");
    for (const auto& row : a) {
      if (static_cast<int>(row.size()) != m.n) throw std::invalid_argument(std::string(what) + " has the wrong size");
      for (const auto& x : row)
        if (!x.only_order_zero())
          throw std::invalid_argument(std::string(what) + " entries may depend on the fields only, not on derivatives");
    }
  };
  check(m.g_upper, "metric");
  check(m.W, "W");
}

Matrix inverse(const Matrix& a) {
  const int n = static_cast<int>(a.size());
  Matrix left = a;
  Matrix right(n, std::vector<RationalExpr>(n));
  for (int i = 0; i < n; ++i) right[i][i] = 1;
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int r = col; r < n; ++r)
      if (!left[r][col].is_zero()) {
        pivot = r;
        break;
      }
    if (pivot < 0) throw SingularMetric("the metric g^{ij} is not invertible");
    std::swap(left[col], left[pivot]);
    std::swap(right[col], right[pivot]);
    RationalExpr inv = RationalExpr(1) / left[col][col];
    for (int j = 0; j < n; ++j) {
      left[col][j] *= inv;
      right[col][j] *= inv;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col || left[r][col].is_zero()) continue;
      RationalExpr f = left[r][col];
      for (int j = 0; j < n; ++j) {
        left[r][j] -= f * left[col][j];
        right[r][j] -= f * right[col][j];
      }
    }
  }
  return right;
}

std::string idx(std::initializer_list<int> is) {
  std::string s;
  for (int i : is) s += (s.empty() ? "" : ",") + std::to_string(i + 1);
  return "[" + s + "]";
}

}  // namespace

MetricData MetricData::zero(int n) {
  MetricData m;
  m.n = n;
  m.g_upper.assign(n, std::vector<RationalExpr>(n));
  m.W.assign(n, std::vector<RationalExpr>(n));
  return m;
}

DerivedGeometry derive_geometry(const MetricData& m) {
  validate(m);
  const int n = m.n;
  const Matrix& gu = m.g_upper;
  DerivedGeometry out;
  out.n = n;
  out.g_lower = inverse(gu);
  const Matrix& gl = out.g_lower;

  out.gamma_lc = tensor3(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        RationalExpr s;
        for (int l = 0; l < n; ++l) {
          if (gu[i][l].is_zero()) continue;
          s += gu[i][l] * (d(gl[l][k], j) + d(gl[l][j], k) - d(gl[j][k], l));
        }
        out.gamma_lc[i][j][k] = s * RationalExpr(Rational(1, 2));
      }
  const Tensor3& G = out.gamma_lc;

  out.gamma_upper = tensor3(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        RationalExpr s;
        for (int l = 0; l < n; ++l) s -= gu[i][l] * G[j][l][k];
        out.gamma_upper[i][j][k] = s;
      }

  // R^i_{jkl}
  Tensor4 r(n, tensor3(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          RationalExpr s = d(G[i][l][j], k) - d(G[i][k][j], l);
          for (int q = 0; q < n; ++q) s += G[i][k][q] * G[q][l][j] - G[i][l][q] * G[q][k][j];
          r[i][j][k][l] = s;
        }
  out.riemann.assign(n, tensor3(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int h = 0; h < n; ++h) {
          RationalExpr s;
          for (int q = 0; q < n; ++q) s += gu[j][q] * r[i][q][k][h];
          out.riemann[i][j][k][h] = s;
        }

  out.nabla_w = tensor3(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        RationalExpr s = d(m.W[j][k], i);
        for (int q = 0; q < n; ++q) s += G[j][i][q] * m.W[q][k] - G[q][i][k] * m.W[j][q];
        out.nabla_w[i][j][k] = s;
      }
  return out;
}

std::vector<ConditionVerdict> check_conditions(const MetricData& m, const Naming& names) {
  const DerivedGeometry geo = derive_geometry(m);
  const int n = m.n;
  const Matrix& gu = m.g_upper;
  const Matrix& W = m.W;
  std::vector<ConditionVerdict> out;
  auto compare = [&](ConditionVerdict& v, const std::string& where, const RationalExpr& lhs, const RationalExpr& rhs) {
    if (!v.ok || lhs == rhs) return;
    v.ok = false;
    v.witness = where + ": " + lhs.to_string(names) + " != " + rhs.to_string(names);
  };

  ConditionVerdict sym{"metric-symmetric", "g^ij = g^ji", true, {}};
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) compare(sym, "g" + idx({i, j}), gu[i][j], gu[j][i]);
  out.push_back(sym);

  ConditionVerdict compat{"metric-compatible", "d_k g^ij = G^ij_k + G^ji_k", true, {}};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        compare(compat, idx({i, j, k}), d(gu[i][j], k), geo.gamma_upper[i][j][k] + geo.gamma_upper[j][i][k]);
  out.push_back(compat);

  ConditionVerdict gsym{"connection-symmetric", "g^is G^jk_s = g^js G^ik_s", true, {}};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        RationalExpr a, b;
        for (int s = 0; s < n; ++s) {
          a += gu[i][s] * geo.gamma_upper[j][k][s];
          b += gu[j][s] * geo.gamma_upper[i][k][s];
        }
        compare(gsym, idx({i, j, k}), a, b);
      }
  out.push_back(gsym);

  ConditionVerdict gw{"gW-symmetric", "g^is W^j_s = g^js W^i_s", true, {}};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      RationalExpr a, b;
      for (int s = 0; s < n; ++s) {
        a += gu[i][s] * W[j][s];
        b += gu[j][s] * W[i][s];
      }
      compare(gw, idx({i, j}), a, b);
    }
  out.push_back(gw);

  ConditionVerdict codazzi{"codazzi", "nabla_i W^j_k = nabla_k W^j_i", true, {}};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) compare(codazzi, idx({i, j, k}), geo.nabla_w[i][j][k], geo.nabla_w[k][j][i]);
  out.push_back(codazzi);

  ConditionVerdict gauss{"gauss", "R^ij_kh = W^i_k W^j_h - W^j_k W^i_h", true, {}};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int h = 0; h < n; ++h)
          compare(gauss, idx({i, j, k, h}), geo.riemann[i][j][k][h], W[i][k] * W[j][h] - W[j][k] * W[i][h]);
  out.push_back(gauss);
  return out;
}

WNOperator build_operator(const MetricData& m) {
  const DerivedGeometry geo = derive_geometry(m);
  const int n = m.n;
  WNOperator p(n);
  std::vector<RationalExpr> w(n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) w[i] += m.W[i][k] * RationalExpr::variable({k, 1});
    for (int j = 0; j < n; ++j) {
      if (!m.g_upper[i][j].is_zero()) p.at(i, j, 1) = m.g_upper[i][j];
      RationalExpr c;
      for (int k = 0; k < n; ++k) c += geo.gamma_upper[i][j][k] * RationalExpr::variable({k, 1});
      if (!c.is_zero()) p.at(i, j, 0) = c;
    }
  }
  p.tails.push_back({1, w, w});
  p.trim();
  return p;
}

}  // namespace wno
