#pragma once

// Jet groups of based local diffeomorphisms at order 2 and 3, their conformal and
// projective subgroups, the graded algebra, the adjoint representation, and the
// Maurer–Cartan form. Everything is templated over the coefficient ring so the
// same code runs on plain numbers and on truncated Taylor data (gauge fields).

#include "cartan/linalg.hpp"

namespace cartan {

enum class JetFlavor { general, conformal, projective };

/// 2-jet at 0: h^a_b (invertible) and h^a_{bc} (symmetric in bc), raw derivatives.
template <typename T>
struct Jet2 {
  Mat<T> j1;
  Ten3<T> j2;
  JetFlavor tag = JetFlavor::general;
  int dim() const { return j1.rows(); }
  T zero() const { return j1.zero_like(); }
};

/// 3-jet at 0; adds h^a_{bcd} (symmetric in bcd).
template <typename T>
struct Jet3 {
  Mat<T> j1;
  Ten3<T> j2;
  Ten4<T> j3;
  JetFlavor tag = JetFlavor::general;
  int dim() const { return j1.rows(); }
  T zero() const { return j1.zero_like(); }
  Jet2<T> truncate2() const { return {j1, j2, tag}; }
};

/// Graded algebra element (A^k, A^k_ℓ, A_ℓ) in grades (−1, 0, +1). All three
/// grades are always carried, zero-filled, so the adjoint has one code path.
template <typename T>
struct JetAlgebra {
  Vec<T> a_m1;
  Mat<T> a0;
  Vec<T> a_p1;
  int dim() const { return a0.rows(); }

  JetAlgebra operator+(const JetAlgebra& o) const {
    JetAlgebra r = *this;
    for (size_t i = 0; i < a_m1.size(); ++i) r.a_m1[i] += o.a_m1[i];
    r.a0 = r.a0 + o.a0;
    for (size_t i = 0; i < a_p1.size(); ++i) r.a_p1[i] += o.a_p1[i];
    return r;
  }
  JetAlgebra operator-(const JetAlgebra& o) const {
    JetAlgebra r = *this;
    for (size_t i = 0; i < a_m1.size(); ++i) r.a_m1[i] -= o.a_m1[i];
    r.a0 = r.a0 - o.a0;
    for (size_t i = 0; i < a_p1.size(); ++i) r.a_p1[i] -= o.a_p1[i];
    return r;
  }
  template <typename S>
  JetAlgebra scaled(const S& s) const {
    JetAlgebra r = *this;
    for (auto& x : r.a_m1) x = x * s;
    r.a0 = r.a0.scaled(s);
    for (auto& x : r.a_p1) x = x * s;
    return r;
  }
};

template <typename T>
JetAlgebra<T> zero_algebra(int n, const T& zero) {
  return {Vec<T>(n, zero), Mat<T>(n, n, zero), Vec<T>(n, zero)};
}

template <typename T>
double max_abs(const JetAlgebra<T>& a) {
  return std::max({max_abs(a.a_m1), max_abs(a.a0), max_abs(a.a_p1)});
}

/// The derived second-order coefficients of an algebra element:
/// conformal  A^k_{ℓm} = η^{kr}A_r η_{ℓm} − δ^k_ℓ A_m − δ^k_m A_ℓ,
/// projective A^k_{ℓm} = −δ^k_ℓ A_m − δ^k_m A_ℓ.
template <typename T>
Ten3<T> algebra_second_order(const JetAlgebra<T>& a, JetFlavor flavor,
                             const Mat<double>& eta) {
  int n = a.dim();
  T zero = a.a0.zero_like();
  Ten3<T> out(n, n, n, zero);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l)
      for (int m = 0; m < n; ++m) {
        T acc = zero;
        if (flavor == JetFlavor::conformal)
          acc += a.a_p1[k] * (eta(k, k) * eta(l, m));  // η diagonal
        if (k == l) acc -= a.a_p1[m];
        if (k == m) acc -= a.a_p1[l];
        out(k, l, m) = acc;
      }
  return out;
}

template <typename T>
Jet2<T> identity_jet2(int n, const T& zero) {
  T one = zero + 1.0;
  return {Mat<T>::identity(n, one, zero), Ten3<T>(n, n, n, zero), JetFlavor::general};
}

template <typename T>
Jet3<T> identity_jet3(int n, const T& zero) {
  T one = zero + 1.0;
  return {Mat<T>::identity(n, one, zero), Ten3<T>(n, n, n, zero), Ten4<T>(n, n, n, n, zero),
          JetFlavor::general};
}

namespace detail {
inline JetFlavor merge_tags(JetFlavor a, JetFlavor b) {
  return a == b ? a : JetFlavor::general;
}
}  // namespace detail

/// f ∘ g at order 2: first order u^a_b s^b_c; second order
/// u^a_b s^b_{cd} + u^a_{be} s^b_c s^e_d (symmetric by construction).
template <typename T>
Jet2<T> compose(const Jet2<T>& f, const Jet2<T>& g) {
  int n = f.dim();
  T zero = f.zero();
  Jet2<T> r{Mat<T>(n, n, zero), Ten3<T>(n, n, n, zero), detail::merge_tags(f.tag, g.tag)};
  r.j1 = f.j1 * g.j1;
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < n; ++c)
      for (int d = c; d < n; ++d) {
        T acc = zero;
        for (int b = 0; b < n; ++b) {
          acc += f.j1(a, b) * g.j2(b, c, d);
          for (int e = 0; e < n; ++e) acc += f.j2(a, b, e) * g.j1(b, c) * g.j1(e, d);
        }
        r.j2(a, c, d) = acc;
        if (d != c) r.j2(a, d, c) = acc;
      }
  return r;
}

/// f ∘ g at order 3 (Faà di Bruno).
template <typename T>
Jet3<T> compose(const Jet3<T>& f, const Jet3<T>& g) {
  int n = f.dim();
  T zero = f.zero();
  Jet2<T> two = compose(f.truncate2(), g.truncate2());
  Jet3<T> r{two.j1, two.j2, Ten4<T>(n, n, n, n, zero), detail::merge_tags(f.tag, g.tag)};
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < n; ++c)
      for (int d = c; d < n; ++d)
        for (int e = d; e < n; ++e) {
          T acc = zero;
          for (int b = 0; b < n; ++b) {
            acc += f.j1(a, b) * g.j3(b, c, d, e);
            for (int ff = 0; ff < n; ++ff) {
              acc += f.j2(a, b, ff) * (g.j2(b, c, d) * g.j1(ff, e) +
                                       g.j2(b, c, e) * g.j1(ff, d) +
                                       g.j2(b, d, e) * g.j1(ff, c));
              for (int gg = 0; gg < n; ++gg)
                acc += f.j3(a, b, ff, gg) * g.j1(b, c) * g.j1(ff, d) * g.j1(gg, e);
            }
          }
          // fill all permutations of (c,d,e)
          int idx[3] = {c, d, e};
          int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
          for (auto& p : perms) r.j3(a, idx[p[0]], idx[p[1]], idx[p[2]]) = acc;
        }
  return r;
}

/// Group inverse at order 2, solving f ∘ f⁻¹ = id order by order.
template <typename T>
Jet2<T> invert(const Jet2<T>& f) {
  int n = f.dim();
  T zero = f.zero();
  Jet2<T> r{inverse(f.j1), Ten3<T>(n, n, n, zero), f.tag};
  for (int k = 0; k < n; ++k)
    for (int c = 0; c < n; ++c)
      for (int d = c; d < n; ++d) {
        T acc = zero;
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            for (int e = 0; e < n; ++e)
              acc -= r.j1(k, a) * f.j2(a, b, e) * r.j1(b, c) * r.j1(e, d);
        r.j2(k, c, d) = acc;
        if (d != c) r.j2(k, d, c) = acc;
      }
  return r;
}

/// Group inverse at order 3.
template <typename T>
Jet3<T> invert(const Jet3<T>& f) {
  int n = f.dim();
  T zero = f.zero();
  Jet2<T> two = invert(f.truncate2());
  Jet3<T> r{two.j1, two.j2, Ten4<T>(n, n, n, n, zero), f.tag};
  for (int k = 0; k < n; ++k)
    for (int c = 0; c < n; ++c)
      for (int d = c; d < n; ++d)
        for (int e = d; e < n; ++e) {
          T acc = zero;
          for (int a = 0; a < n; ++a) {
            T inner = zero;
            for (int b = 0; b < n; ++b)
              for (int ff = 0; ff < n; ++ff) {
                inner += f.j2(a, b, ff) * (r.j2(b, c, d) * r.j1(ff, e) +
                                           r.j2(b, c, e) * r.j1(ff, d) +
                                           r.j2(b, d, e) * r.j1(ff, c));
                for (int gg = 0; gg < n; ++gg)
                  inner += f.j3(a, b, ff, gg) * r.j1(b, c) * r.j1(ff, d) * r.j1(gg, e);
              }
            acc -= r.j1(k, a) * inner;
          }
          int idx[3] = {c, d, e};
          int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
          for (auto& p : perms) r.j3(k, idx[p[0]], idx[p[1]], idx[p[2]]) = acc;
        }
  return r;
}

inline double value_of(double x) { return x; }
inline double value_of(const TaylorValue& x) { return x.value(); }

/// η-conformality defect of the center values: how far η_{ab} h^a_c h^b_d is from λ η_{cd}.
template <typename T>
double conformality_defect(const Mat<T>& h1, const Mat<double>& eta) {
  int n = h1.rows();
  Mat<double> hv(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) hv(i, j) = value_of(h1(i, j));
  Mat<double> q = hv.transposed() * eta * hv;
  double lambda = q(1, 1) * eta(1, 1);  // a spatial diagonal entry carries λ η_{11}
  double worst = 0.0;
  for (int c = 0; c < n; ++c)
    for (int d = 0; d < n; ++d) worst = std::max(worst, std::abs(q(c, d) - lambda * eta(c, d)));
  return worst / std::max(1.0, std::abs(lambda));
}

/// Second-order prolongation from (h^a_b, h_b):
/// conformal  h^a_{bc} = η^{de}η_{bc} h_d h^a_e − h^a_b h_c − h^a_c h_b,
/// projective h^a_{bc} = −h^a_b h_c − h^a_c h_b.
template <typename T>
Jet2<T> prolong2(const Mat<T>& h1, const Vec<T>& hb, JetFlavor flavor,
                 const Mat<double>& eta) {
  int n = h1.rows();
  T zero = h1.zero_like();
  if (flavor == JetFlavor::conformal && conformality_defect(h1, eta) > 1e-8)
    throw ShapeError("prolong: first-order part is not eta-conformal");
  Jet2<T> r{h1, Ten3<T>(n, n, n, zero), flavor};
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        T acc = -(h1(a, b) * hb[c]) - h1(a, c) * hb[b];
        if (flavor == JetFlavor::conformal) {
          T lift = zero;  // η^{de} h_d h^a_e
          for (int d = 0; d < n; ++d) lift += hb[d] * h1(a, d) * eta(d, d);
          acc += lift * eta(b, c);
        }
        r.j2(a, b, c) = acc;
      }
  return r;
}

/// Third-order prolongation: cyclic sums over (i,j,m) of
/// conformal  2 h^k_i h_j h_m − h^k_r η^{rs}h_s η_{ij} h_m − ½ η^{rs}h_r h_s η_{ij} h^k_m,
/// projective 2 h^k_i h_j h_m.
template <typename T>
Jet3<T> prolong3(const Mat<T>& h1, const Vec<T>& hb, JetFlavor flavor,
                 const Mat<double>& eta) {
  int n = h1.rows();
  T zero = h1.zero_like();
  Jet2<T> two = prolong2(h1, hb, flavor, eta);
  Jet3<T> r{two.j1, two.j2, Ten4<T>(n, n, n, n, zero), flavor};
  Vec<T> lift(n, zero);  // h^k_r η^{rs} h_s
  T h2 = zero;           // η^{rs} h_r h_s
  for (int k = 0; k < n; ++k)
    for (int s = 0; s < n; ++s) lift[k] += h1(k, s) * hb[s] * eta(s, s);
  for (int s = 0; s < n; ++s) h2 += hb[s] * hb[s] * eta(s, s);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        for (int m = j; m < n; ++m) {
          T acc = zero;
          int cyc[3][3] = {{i, j, m}, {j, m, i}, {m, i, j}};
          for (auto& c : cyc) {
            acc += h1(k, c[0]) * hb[c[1]] * hb[c[2]] * 2.0;
            if (flavor == JetFlavor::conformal) {
              acc -= lift[k] * hb[c[2]] * eta(c[0], c[1]);
              acc -= h2 * h1(k, c[2]) * (0.5 * eta(c[0], c[1]));
            }
          }
          int idx[3] = {i, j, m};
          int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
          for (auto& p : perms) r.j3(k, idx[p[0]], idx[p[1]], idx[p[2]]) = acc;
        }
  return r;
}

/// Recovers the covector parameter of a prolonged jet:
/// h_b = −(1/n) h^a_{bc} h̄^c_a (conformal), −(1/(n+1))·(same) (projective).
/// The contraction runs over the inverse first-order part.
template <typename T>
Vec<T> recover_hb(const Jet2<T>& h, JetFlavor flavor) {
  int n = h.dim();
  T zero = h.zero();
  Mat<T> hbar = inverse(h.j1);
  double k = flavor == JetFlavor::projective ? -1.0 / (n + 1) : -1.0 / n;
  Vec<T> out(n, zero);
  for (int b = 0; b < n; ++b) {
    T acc = zero;
    for (int a = 0; a < n; ++a)
      for (int c = 0; c < n; ++c) acc += h.j2(a, b, c) * hbar(c, a);
    out[b] = acc * k;
  }
  return out;
}

/// Frame coordinates of a point of the second-order frame bundle over a chart.
template <typename T>
struct FrameCoords {
  Mat<T> e1;   // e^μ_a
  Ten3<T> e2;  // e^μ_{ab}, symmetric in (ab)
};

/// Reduced coordinates (e^μ_a, e_a) of a conformal or projective 2-frame.
template <typename T>
struct ReducedFrame {
  Mat<T> e1;
  Vec<T> e_lower;
  JetFlavor flavor = JetFlavor::conformal;
};

/// e^μ_{ab} from the reduced coordinates (same shape as the jet prolongation).
template <typename T>
Ten3<T> expand_frame_second_order(const ReducedFrame<T>& f, const Mat<double>& eta) {
  int n = f.e1.rows();
  T zero = f.e1.zero_like();
  Ten3<T> out(n, n, n, zero);
  Vec<T> lift(n, zero);  // η^{cd} e^μ_c e_d per μ
  for (int mu = 0; mu < n; ++mu)
    for (int c = 0; c < n; ++c) lift[mu] += f.e1(mu, c) * f.e_lower[c] * eta(c, c);
  for (int mu = 0; mu < n; ++mu)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        T acc = -(f.e1(mu, a) * f.e_lower[b]) - f.e1(mu, b) * f.e_lower[a];
        if (f.flavor == JetFlavor::conformal) acc += lift[mu] * eta(a, b);
        out(mu, a, b) = acc;
      }
  return out;
}

/// e_a = −(1/n) e^μ_{ab} θ^b_μ (conformal) or −(1/(n+1)) e^μ_{ab} θ^b_μ (projective).
template <typename T>
Vec<T> reduce_frame_second_order(const FrameCoords<T>& f, JetFlavor flavor) {
  int n = f.e1.rows();
  T zero = f.e1.zero_like();
  Mat<T> theta = inverse(f.e1);
  double k = flavor == JetFlavor::projective ? -1.0 / (n + 1) : -1.0 / n;
  Vec<T> out(n, zero);
  for (int a = 0; a < n; ++a) {
    T acc = zero;
    for (int mu = 0; mu < n; ++mu)
      for (int b = 0; b < n; ++b) acc += f.e2(mu, a, b) * theta(b, mu);
    out[a] = acc * k;
  }
  return out;
}

/// Right action of a 2-jet on frame coordinates:
/// (e^μ_a, e^μ_{ab}) · (s^a_b, s^a_{bc}) = (e^μ_c s^c_a, e^μ_c s^c_{ab} + e^μ_{cd} s^c_a s^d_b).
template <typename T>
FrameCoords<T> jet_right_action(const FrameCoords<T>& p, const Jet2<T>& s) {
  int n = p.e1.rows();
  T zero = p.e1.zero_like();
  FrameCoords<T> r{p.e1 * s.j1, Ten3<T>(n, n, n, zero)};
  for (int mu = 0; mu < n; ++mu)
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) {
        T acc = zero;
        for (int c = 0; c < n; ++c) {
          acc += p.e1(mu, c) * s.j2(c, a, b);
          for (int d = 0; d < n; ++d) acc += p.e2(mu, c, d) * s.j1(c, a) * s.j1(d, b);
        }
        r.e2(mu, a, b) = acc;
        if (b != a) r.e2(mu, b, a) = acc;
      }
  return r;
}

/// Reduced form of the right action: (e·h, h_b + e_c h^c_b).
template <typename T>
ReducedFrame<T> jet_right_action(const ReducedFrame<T>& p, const Mat<T>& h1,
                                 const Vec<T>& hb) {
  int n = p.e1.rows();
  T zero = p.e1.zero_like();
  ReducedFrame<T> r{p.e1 * h1, Vec<T>(n, zero), p.flavor};
  for (int b = 0; b < n; ++b) {
    T acc = hb[b];
    for (int c = 0; c < n; ++c) acc += p.e_lower[c] * h1(c, b);
    r.e_lower[b] = acc;
  }
  return r;
}

/// Adjoint action of a conformal 3-jet on the graded algebra:
///   B^k   = h^k_ℓ A^ℓ
///   B^k_ℓ = h^k_r A^r_s h̄^s_ℓ + h^k_{rs} A^r h̄^s_ℓ
///   B_m   = (A_t + h_r A^r_t − h_r A^r h_t + ½ η^{ij}h_i h_j η_{rt}A^r) h̄^t_m
template <typename T>
JetAlgebra<T> adjoint(const Jet3<T>& h, const JetAlgebra<T>& a, const Mat<double>& eta) {
  if (h.tag != JetFlavor::conformal)
    throw ShapeError("adjoint: jet must carry the conformal prolongation");
  int n = h.dim();
  T zero = h.zero();
  Mat<T> hbar = inverse(h.j1);
  Vec<T> hb = recover_hb(h.truncate2(), JetFlavor::conformal);

  JetAlgebra<T> b = zero_algebra(n, zero);
  for (int k = 0; k < n; ++k) {
    T acc = zero;
    for (int l = 0; l < n; ++l) acc += h.j1(k, l) * a.a_m1[l];
    b.a_m1[k] = acc;
  }
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      T acc = zero;
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) {
          acc += h.j1(k, r) * a.a0(r, s) * hbar(s, l);
          acc += h.j2(k, r, s) * a.a_m1[r] * hbar(s, l);
        }
      b.a0(k, l) = acc;
    }
  T h2 = zero;  // η^{ij} h_i h_j
  for (int i = 0; i < n; ++i) h2 += hb[i] * hb[i] * eta(i, i);
  for (int m = 0; m < n; ++m) {
    T acc = zero;
    for (int t = 0; t < n; ++t) {
      T inner = a.a_p1[t];
      for (int r = 0; r < n; ++r) {
        inner += hb[r] * a.a0(r, t);
        inner -= hb[r] * a.a_m1[r] * hb[t];
      }
      inner += h2 * a.a_m1[t] * (0.5 * eta(t, t));  // η_{rt} A^r, diagonal η
      acc += inner * hbar(t, m);
    }
    b.a_p1[m] = acc;
  }
  return b;
}

/// Maurer–Cartan form in the reduced parametrization: given the element (h^a_b, h_b)
/// and a coefficient-wise tangent (dh^a_b, dh_b), returns the algebra element
/// (grade 0: h̄^k_r dh^r_ℓ, grade +1: dh_m − h_s h̄^s_r dh^r_m).
template <typename T>
JetAlgebra<T> maurer_cartan(const Mat<T>& h1, const Vec<T>& hb, const Mat<T>& dh1,
                            const Vec<T>& dhb) {
  int n = h1.rows();
  T zero = h1.zero_like();
  Mat<T> hbar = inverse(h1);
  JetAlgebra<T> out = zero_algebra(n, zero);
  out.a0 = hbar * dh1;
  for (int m = 0; m < n; ++m) {
    T acc = dhb[m];
    for (int s = 0; s < n; ++s) acc -= hb[s] * out.a0(s, m);
    out.a_p1[m] = acc;
  }
  return out;
}

}  // namespace cartan
