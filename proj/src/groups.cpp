#include "cartan/groups.hpp"

#include <cmath>

namespace cartan {

namespace {
double isometry_defect(const Mat<double>& s, const Mat<double>& eta) {
  return residual(s.transposed() * eta * s, eta);
}
}  // namespace

Mat<double> mobius_sigma(const Mat<double>& eta) {
  int n = eta.rows();
  Mat<double> sigma(n + 2, n + 2, 0.0);
  sigma(0, n + 1) = -1.0;
  sigma(n + 1, 0) = -1.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) sigma(1 + a, 1 + b) = eta(a, b);
  return sigma;
}

Mat<double> mobius_matrix(const MobiusFactors& f, const Mat<double>& eta) {
  if (f.z == 0.0) throw ShapeError("mobius factors: z must be nonzero");
  if (isometry_defect(f.S, eta) > 1e-10)
    throw ShapeError("mobius factors: S is not an eta-isometry");
  Mat<double> t = mobius_t_factor(f.t, eta, 0.0);
  Mat<double> z = mobius_co_factor(f.S, f.z, 0.0);
  Mat<double> k = mobius_k_factor(f.r, eta, 0.0);
  return t * z * k;
}

Mat<double> hc_matrix(const HCFactors& f, const Mat<double>& eta) {
  return mobius_matrix({f.S, f.z, Vec<double>(f.S.rows(), 0.0), f.r}, eta);
}

double sigma_preservation_defect(const Mat<double>& m, const Mat<double>& eta) {
  Mat<double> sigma = mobius_sigma(eta);
  return residual(m.transposed() * sigma * m, sigma);
}

MobiusFactors refactor_mobius(const Mat<double>& m, const Mat<double>& eta) {
  int n = m.rows() - 2;
  MobiusFactors f{Mat<double>(n, n), m(0, 0), Vec<double>(n, 0.0), Vec<double>(n, 0.0)};
  if (std::abs(f.z) < 1e-12)
    throw DomainError("mobius refactorization: pivot vanishes (non-decomposable element)");
  for (int b = 0; b < n; ++b) {
    f.r[b] = m(0, 1 + b) / f.z;
    f.t[b] = m(1 + b, 0) / f.z;
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) f.S(a, b) = m(1 + a, 1 + b) - f.z * f.t[a] * f.r[b];
  (void)eta;
  return f;
}

HCFactors hc_law_closed(const HCFactors& ap, const HCFactors& a) {
  int n = a.S.rows();
  HCFactors r{ap.S * a.S, ap.z * a.z, Vec<double>(n, 0.0)};
  for (int b = 0; b < n; ++b) {
    double acc = a.r[b];
    for (int c = 0; c < n; ++c) acc += ap.r[c] * a.S(c, b) / a.z;
    r.r[b] = acc;
  }
  return r;
}

MobiusFactors mobius_law_closed(const MobiusFactors& ap, const MobiusFactors& a,
                                const Mat<double>& eta) {
  int n = a.S.rows();
  double rt = 0.0, rp2 = 0.0, t2 = 0.0;
  for (int c = 0; c < n; ++c) {
    rt += ap.r[c] * a.t[c];
    rp2 += ap.r[c] * ap.r[c] * eta(c, c);
    t2 += a.t[c] * a.t[c] * eta(c, c);
  }
  double delta = 1.0 + rt + 0.25 * rp2 * t2;
  double z2 = ap.z * a.z * delta;
  if (std::abs(z2) < 1e-12)
    throw DomainError("mobius group law: product pivot vanishes (non-decomposable)");

  MobiusFactors out{Mat<double>(n, n), z2, Vec<double>(n, 0.0), Vec<double>(n, 0.0)};
  // t'' = t' + S'(t + ½ t² r'♯) / (z'Δ)
  for (int i = 0; i < n; ++i) {
    double acc = ap.t[i];
    for (int c = 0; c < n; ++c)
      acc += ap.S(i, c) * (a.t[c] + 0.5 * t2 * eta(c, c) * ap.r[c]) / (ap.z * delta);
    out.t[i] = acc;
  }
  // r'' = r + (r' + ½ r'² t♭) S / (zΔ)
  for (int b = 0; b < n; ++b) {
    double acc = a.r[b];
    for (int c = 0; c < n; ++c)
      acc += (ap.r[c] + 0.5 * rp2 * eta(c, c) * a.t[c]) * a.S(c, b) / (a.z * delta);
    out.r[b] = acc;
  }
  // the S factor is fixed by extraction from the product matrix
  Mat<double> prod = mobius_matrix(ap, eta) * mobius_matrix(a, eta);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.S(i, j) = prod(1 + i, 1 + j) - z2 * out.t[i] * out.r[j];
  return out;
}

Vec<double> mobius_action(const HCFactors& h, const Vec<double>& x, const Mat<double>& eta) {
  int n = static_cast<int>(x.size());
  double x2 = 0.0, r2 = 0.0, rx = 0.0;
  for (int a = 0; a < n; ++a) {
    x2 += x[a] * x[a] * eta(a, a);
    r2 += h.r[a] * h.r[a] * eta(a, a);
    rx += h.r[a] * x[a];
  }
  double den = h.z * (1.0 + rx + 0.25 * r2 * x2);
  if (std::abs(den) < 1e-12)
    throw DomainError("mobius action: point at conformal infinity");
  Vec<double> out(n, 0.0);
  for (int a = 0; a < n; ++a) {
    double num = 0.0;
    for (int b = 0; b < n; ++b) num += h.S(a, b) * (x[b] + 0.5 * x2 * eta(b, b) * h.r[b]);
    out[a] = num / den;
  }
  return out;
}

Jet2<double> conf_jet_of(const HCFactors& h, const Mat<double>& eta) {
  int n = h.S.rows();
  Jet2<double> j{h.S.scaled(1.0 / h.z), Ten3<double>(n, n, n, 0.0), JetFlavor::conformal};
  Vec<double> lifted(n, 0.0);  // S^a_d η^{de} r_e
  for (int a = 0; a < n; ++a)
    for (int d = 0; d < n; ++d) lifted[a] += h.S(a, d) * eta(d, d) * h.r[d];
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        j.j2(a, b, c) =
            (lifted[a] * eta(b, c) - h.r[b] * h.S(a, c) - h.r[c] * h.S(a, b)) / h.z;
  return j;
}

Jet3<double> conf_jet3_of(const HCFactors& h, const Mat<double>& eta) {
  return prolong3(h.S.scaled(1.0 / h.z), h.r, JetFlavor::conformal, eta);
}

Mat<double> psl_matrix(const PSLFactors& f) {
  int n = f.S.rows();
  Mat<double> m(n + 1, n + 1, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = f.S(i, j);
  for (int i = 0; i < n; ++i) {
    m(i, n) = f.c[i];
    m(n, i) = f.b[i];
  }
  m(n, n) = f.d;
  double det = determinant(m);
  if (std::abs(det) < 1e-12) throw ShapeError("psl factors: singular matrix");
  double lambda;
  if ((n + 1) % 2 == 1) {
    lambda = (det > 0 ? 1.0 : -1.0) * std::pow(std::abs(det), -1.0 / (n + 1));
  } else {
    if (det < 0) throw ShapeError("psl factors: negative determinant has no det=1 representative");
    lambda = std::pow(det, -1.0 / (n + 1));
  }
  m = m.scaled(lambda);
  // canonical representative of the center quotient when -I is central
  if (n % 2 == 1) {
    double pivot = m(n, n);
    if (pivot == 0.0) {
      for (int i = 0; i < n; ++i)
        if (m(i, i) != 0.0) {
          pivot = m(i, i);
          break;
        }
    }
    if (pivot < 0.0) m = m.scaled(-1.0);
  }
  return m;
}

PSLFactors refactor_psl(const Mat<double>& m) {
  int n = m.rows() - 1;
  PSLFactors f{Mat<double>(n, n), Vec<double>(n, 0.0), Vec<double>(n, 0.0), m(n, n)};
  for (int i = 0; i < n; ++i) {
    f.c[i] = m(i, n);
    f.b[i] = m(n, i);
    for (int j = 0; j < n; ++j) f.S(i, j) = m(i, j);
  }
  return f;
}

Vec<double> psl_action(const PSLFactors& a, const Vec<double>& y) {
  int n = static_cast<int>(y.size());
  double den = a.d;
  for (int b = 0; b < n; ++b) den += a.b[b] * y[b];
  if (std::abs(den) < 1e-12) throw DomainError("projective action: point on the singular hyperplane");
  Vec<double> out(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double num = a.c[i];
    for (int j = 0; j < n; ++j) num += a.S(i, j) * y[j];
    out[i] = num / den;
  }
  return out;
}

Jet2<double> proj_jet_of(const PSLFactors& h) {
  int n = h.S.rows();
  if (max_abs(h.c) > 1e-14)
    throw ShapeError("proj_jet_of: element must stabilize the origin (c = 0)");
  if (h.d == 0.0) throw ShapeError("proj_jet_of: d must be nonzero");
  Jet2<double> j{h.S.scaled(1.0 / h.d), Ten3<double>(n, n, n, 0.0), JetFlavor::projective};
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        j.j2(a, b, c) = -(h.b[b] * h.S(a, c) + h.b[c] * h.S(a, b)) / (h.d * h.d);
  return j;
}

Jet3<double> proj_jet3_of(const PSLFactors& h) {
  int n = h.S.rows();
  Mat<double> eta = Mat<double>::identity(n, 1.0, 0.0);  // unused by the projective branch
  Vec<double> hb(n, 0.0);
  for (int i = 0; i < n; ++i) hb[i] = h.b[i] / h.d;
  return prolong3(h.S.scaled(1.0 / h.d), hb, JetFlavor::projective, eta);
}

std::array<Mat<double>, 3> graded_split(const Mat<double>& m, Flavor flavor) {
  int size = m.rows();
  Mat<double> lo(size, size, 0.0), mid(size, size, 0.0), hi(size, size, 0.0);
  if (flavor == Flavor::conformal) {
    int n = size - 2;
    for (int a = 0; a < n; ++a) {
      lo(1 + a, 0) = m(1 + a, 0);
      lo(n + 1, 1 + a) = m(n + 1, 1 + a);
      hi(0, 1 + a) = m(0, 1 + a);
      hi(1 + a, n + 1) = m(1 + a, n + 1);
    }
    mid(0, 0) = m(0, 0);
    mid(n + 1, n + 1) = m(n + 1, n + 1);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) mid(1 + i, 1 + j) = m(1 + i, 1 + j);
  } else {
    int n = size - 1;
    for (int i = 0; i < n; ++i) {
      lo(i, n) = m(i, n);
      hi(n, i) = m(n, i);
    }
    mid(n, n) = m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) mid(i, j) = m(i, j);
  }
  return {lo, mid, hi};
}

double conformal_algebra_shape_defect(const Mat<double>& m, const Mat<double>& eta) {
  Mat<double> sigma = mobius_sigma(eta);
  Mat<double> cond = m.transposed() * sigma + sigma * m;
  double scale = std::max(1.0, max_abs(m));
  int n = m.rows() - 2;
  double corners = std::max(std::abs(m(0, m.rows() - 1)), std::abs(m(m.rows() - 1, 0)));
  double tr = 0.0;
  for (int i = 0; i < n; ++i) tr += m(1 + i, 1 + i);
  return std::max({max_abs(cond) / scale, corners / scale, std::abs(tr) / scale});
}

double projective_algebra_shape_defect(const Mat<double>& m) {
  double tr = 0.0;
  for (int i = 0; i < m.rows(); ++i) tr += m(i, i);
  return std::abs(tr) / std::max(1.0, max_abs(m));
}

JetAlgebra<double> hc_adjoint_inverse_components(const HCFactors& h, const JetAlgebra<double>& w,
                                                 const Mat<double>& eta) {
  int n = h.S.rows();
  Mat<double> sbar = inverse(h.S);
  JetAlgebra<double> out = zero_algebra(n, 0.0);
  // grade −1: z S̄ ω
  for (int a = 0; a < n; ++a) {
    double acc = 0.0;
    for (int c = 0; c < n; ++c) acc += sbar(a, c) * w.a_m1[c];
    out.a_m1[a] = h.z * acc;
  }
  Vec<double> sw(n, 0.0);  // (S̄ ω)^a
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < n; ++c) sw[a] += sbar(a, c) * w.a_m1[c];
  double rsw = 0.0;  // r_c (S̄ ω)^c
  for (int c = 0; c < n; ++c) rsw += h.r[c] * sw[c];
  double r2 = 0.0;
  for (int c = 0; c < n; ++c) r2 += h.r[c] * h.r[c] * eta(c, c);

  // grade 0: S̄ ω⁰ S + z r_b (S̄ω)^a − z η^{ac}r_c ω^d η_{de} S^e_b + z δ^a_b (r S̄ ω)
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      double acc = 0.0;
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) acc += sbar(a, c) * w.a0(c, d) * h.S(d, b);
      acc += h.z * h.r[b] * sw[a];
      double wes = 0.0;  // ω^d η_{de} S^e_b
      for (int d = 0; d < n; ++d) wes += w.a_m1[d] * eta(d, d) * h.S(d, b);
      acc -= h.z * eta(a, a) * h.r[a] * wes;
      if (a == b) acc += h.z * rsw;
      out.a0(a, b) = acc;
    }

  // grade +1: −r S̄ ω⁰ S + z⁻¹ ω₊ S − z (r S̄ ω) r_b + ½ z r² ω^a η_{ac} S^c_b
  // (the z on the third term is required for consistency with the conjugation)
  for (int b = 0; b < n; ++b) {
    double acc = 0.0;
    for (int c = 0; c < n; ++c)
      for (int d = 0; d < n; ++d)
        for (int e = 0; e < n; ++e) acc -= h.r[c] * sbar(c, d) * w.a0(d, e) * h.S(e, b);
    for (int d = 0; d < n; ++d) acc += w.a_p1[d] * h.S(d, b) / h.z;
    acc -= h.z * rsw * h.r[b];
    double wes = 0.0;
    for (int a = 0; a < n; ++a) wes += w.a_m1[a] * eta(a, a) * h.S(a, b);
    acc += 0.5 * h.z * r2 * wes;
    out.a_p1[b] = acc;
  }
  return out;
}

}  // namespace cartan
