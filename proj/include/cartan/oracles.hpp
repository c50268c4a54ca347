#pragma once

// Independent reference routes used by the verification suites. Everything here
// deliberately avoids the implementation paths it is used to check: jets are
// treated as genuine polynomial maps evaluated in the Taylor ring, and group
// actions are expanded directly from their defining fractional-linear formulas.

#include "cartan/jets.hpp"
#include "cartan/rng.hpp"

namespace cartan::oracles {

/// P(y)^a = u^a_b y^b + ½ u^a_{bc} y^b y^c + (1/6) u^a_{bcd} y^b y^c y^d,
/// evaluated exactly on truncated Taylor arguments (possibly off-center).
inline std::vector<TaylorValue> jet_poly_eval(const Jet3<double>& f,
                                              const std::vector<TaylorValue>& y) {
  int n = f.dim();
  TaylorValue zero = y[0] - y[0];
  std::vector<TaylorValue> out(n, zero);
  for (int a = 0; a < n; ++a) {
    TaylorValue acc = zero;
    for (int b = 0; b < n; ++b) {
      acc += y[b] * f.j1(a, b);
      for (int c = 0; c < n; ++c) {
        acc += y[b] * y[c] * (0.5 * f.j2(a, b, c));
        for (int d = 0; d < n; ++d) acc += y[b] * y[c] * y[d] * (f.j3(a, b, c, d) / 6.0);
      }
    }
    out[a] = acc;
  }
  return out;
}

/// Extracts the 3-jet (raw derivatives at 0) of a Taylor-valued map.
inline Jet3<double> jet_from_taylor(const std::vector<TaylorValue>& v) {
  int n = static_cast<int>(v.size());
  Jet3<double> j = identity_jet3(n, 0.0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      std::vector<int> al(n, 0);
      al[b] = 1;
      j.j1(a, b) = v[a].partial(al);
      for (int c = 0; c < n; ++c) {
        std::vector<int> al2(n, 0);
        al2[b] += 1;
        al2[c] += 1;
        j.j2(a, b, c) = v[a].partial(al2);
        for (int d = 0; d < n; ++d) {
          std::vector<int> al3(n, 0);
          al3[b] += 1;
          al3[c] += 1;
          al3[d] += 1;
          j.j3(a, b, c, d) = v[a].partial(al3);
        }
      }
    }
  return j;
}

inline std::vector<TaylorValue> taylor_variables(int n, int order) {
  std::vector<TaylorValue> y;
  for (int i = 0; i < n; ++i) y.push_back(TaylorValue::variable(n, order, i, 0.0));
  return y;
}

/// Composition oracle: expand f∘g as polynomial maps, truncate at degree 3.
inline Jet3<double> compose_oracle(const Jet3<double>& f, const Jet3<double>& g) {
  auto y = taylor_variables(f.dim(), 3);
  return jet_from_taylor(jet_poly_eval(f, jet_poly_eval(g, y)));
}

/// Random invertible general 3-jet near the identity.
inline Jet3<double> random_jet3(Rng& rng, int n, double amp = 0.45) {
  Jet3<double> j = identity_jet3(n, 0.0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) j.j1(a, b) += rng.uniform(-amp, amp) / n;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = b; c < n; ++c) {
        double v = rng.uniform(-amp, amp);
        j.j2(a, b, c) = v;
        j.j2(a, c, b) = v;
      }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = b; c < n; ++c)
        for (int d = c; d < n; ++d) {
          double v = rng.uniform(-amp, amp);
          int idx[3] = {b, c, d};
          int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
          for (auto& p : perms) j.j3(a, idx[p[0]], idx[p[1]], idx[p[2]]) = v;
        }
  return j;
}

/// Random conformal data (h^a_b = z⁻¹S with S an η-isometry, plus a covector).
struct ConformalParams {
  Mat<double> h1;
  Vec<double> hb;
  Mat<double> S;
  double z;
};
inline ConformalParams random_conformal(Rng& rng, const Mat<double>& eta, double amp = 0.5) {
  int n = eta.rows();
  ConformalParams p{Mat<double>(n, n), rng.vec(n, -amp, amp), rng.isometry(eta),
                    rng.uniform(0.7, 1.5)};
  p.h1 = p.S.scaled(1.0 / p.z);
  return p;
}

/// Random conformal algebra element: grades ±1 free, grade 0 in co(η).
inline JetAlgebra<double> random_conformal_algebra(Rng& rng, const Mat<double>& eta) {
  int n = eta.rows();
  JetAlgebra<double> a = zero_algebra(n, 0.0);
  a.a_m1 = rng.vec(n, -0.8, 0.8);
  a.a_p1 = rng.vec(n, -0.8, 0.8);
  double lambda = rng.uniform(-0.5, 0.5);
  for (int i = 0; i < n; ++i) {
    a.a0(i, i) = lambda;
    for (int j = i + 1; j < n; ++j) {
      double v = rng.uniform(-0.5, 0.5);
      a.a0(i, j) = v;
      a.a0(j, i) = -v * eta(i, i) * eta(j, j);
    }
  }
  return a;
}

/// The conformal point action of (S, z, r) as exact Taylor data at 0:
/// x'^a = (S^a_b x^b + S^a_b r^b x²/2) / (z(1 + r_b x^b + r² x²/4)), squares with η.
inline std::vector<TaylorValue> mobius_action_taylor(const Mat<double>& S, double z,
                                                     const Vec<double>& r,
                                                     const Mat<double>& eta, int order) {
  int n = S.rows();
  auto y = taylor_variables(n, order);
  TaylorValue zero = y[0] - y[0];
  TaylorValue x2 = zero;
  for (int a = 0; a < n; ++a) x2 += y[a] * y[a] * eta(a, a);
  double r2 = 0.0;
  for (int a = 0; a < n; ++a) r2 += r[a] * r[a] * eta(a, a);
  TaylorValue den = (x2 * (r2 / 4.0) + 1.0);
  for (int b = 0; b < n; ++b) den += y[b] * r[b];
  den = den * z;
  std::vector<TaylorValue> out(n, zero);
  for (int a = 0; a < n; ++a) {
    TaylorValue num = zero;
    for (int b = 0; b < n; ++b) {
      num += y[b] * S(a, b);
      num += x2 * (0.5 * S(a, b) * eta(b, b) * r[b]);
    }
    out[a] = num / den;
  }
  return out;
}

/// The projective point action y ↦ S y / (b·y + d) as exact Taylor data at 0.
inline std::vector<TaylorValue> psl_action_taylor(const Mat<double>& S, const Vec<double>& b,
                                                  double d, int order) {
  int n = S.rows();
  auto y = taylor_variables(n, order);
  TaylorValue zero = y[0] - y[0];
  TaylorValue den = zero + d;
  for (int i = 0; i < n; ++i) den += y[i] * b[i];
  std::vector<TaylorValue> out(n, zero);
  for (int a = 0; a < n; ++a) {
    TaylorValue num = zero;
    for (int j = 0; j < n; ++j) num += y[j] * S(a, j);
    out[a] = num / den;
  }
  return out;
}

}  // namespace cartan::oracles
