#include "cartan/metric.hpp"

#include <cmath>

namespace cartan {

Mat<double> flat_eta(int n, Signature sig) {
  Mat<double> eta = Mat<double>::identity(n, 1.0, 0.0);
  if (sig == Signature::lorentzian) eta(0, 0) = -1.0;
  return eta;
}

ExprMetric::ExprMetric(int dim, Signature sig, Mat<ScalarField> table)
    : MetricBase(dim, sig), table_(std::move(table)) {
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      if (!table_(i, j).valid() && table_(j, i).valid()) table_(i, j) = table_(j, i);
      if (!table_(i, j).valid()) table_(i, j) = ScalarField::constant(0.0, dim);
    }
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j)
      if (!expr_equal(table_(i, j).ast(), table_(j, i).ast()))
        throw ShapeError("metric: g_" + std::to_string(i) + std::to_string(j) +
                         " differs from its transpose entry");
}

Mat<TaylorValue> ExprMetric::components(const Point& x, int order) const {
  int n = dimension();
  Mat<TaylorValue> g(n, n, TaylorValue::zero(n, order));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      g(i, j) = table_(i, j).eval(x, order);
      if (j != i) g(j, i) = g(i, j);
    }
  return g;
}

Mat<TaylorValue> UnimodularRescale::components(const Point& x, int order) const {
  Mat<TaylorValue> g = base_->components(x, order);
  TaylorValue det = determinant(g);
  TaylorValue absdet = signature() == Signature::lorentzian ? -det : det;
  if (absdet.value() <= 0.0) throw SingularError("unimodular rescale: |det g| not positive");
  TaylorValue omega2 = pow(absdet, -1.0 / dimension());
  for (auto& entry : g.data()) entry = entry * omega2;
  return g;
}

MetricData eval_metric(const MetricBase& metric, const Point& x, int order) {
  MetricData m;
  m.n = metric.dimension();
  m.sig = metric.signature();
  m.g = metric.components(x, order);
  m.zero = TaylorValue::zero(m.n, order);
  try {
    m.ginv = inverse(m.g);
    m.det = determinant(m.g);
  } catch (const SingularError&) {
    throw SingularError("metric is singular at the evaluation point");
  }
  return m;
}

Ten3<TaylorValue> christoffel(const MetricData& m) {
  int n = m.n;
  Ten3<TaylorValue> dg(n, n, n, m.zero);  // ∂_λ g_{μν} in slot (λ, μ, ν)
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        dg(l, i, j) = m.g(i, j).derivative(l);
        if (j != i) dg(l, j, i) = dg(l, i, j);
      }
  TaylorValue zero1 = m.zero.truncated(m.zero.order() - 1);
  Ten3<TaylorValue> gamma(n, n, n, zero1);
  for (int r = 0; r < n; ++r)
    for (int mu = 0; mu < n; ++mu)
      for (int nu = mu; nu < n; ++nu) {
        TaylorValue acc = zero1;
        for (int l = 0; l < n; ++l)
          acc += m.ginv(r, l) * (dg(mu, l, nu) + dg(nu, l, mu) - dg(l, mu, nu));
        gamma(r, mu, nu) = acc * 0.5;
        if (nu != mu) gamma(r, nu, mu) = gamma(r, mu, nu);
      }
  return gamma;
}

CurvatureTensors riemann_ricci(const MetricData& m) {
  int n = m.n;
  Ten3<TaylorValue> gamma = christoffel(m);
  TaylorValue zero2 = m.zero.truncated(m.zero.order() - 2);
  CurvatureTensors out;
  out.riemann = Ten4<TaylorValue>(n, n, n, n, zero2);
  out.ricci = Mat<TaylorValue>(n, n, zero2);
  for (int r = 0; r < n; ++r)
    for (int s = 0; s < n; ++s)
      for (int mu = 0; mu < n; ++mu)
        for (int nu = 0; nu < n; ++nu) {
          TaylorValue acc =
              gamma(r, nu, s).derivative(mu) - gamma(r, mu, s).derivative(nu);
          for (int l = 0; l < n; ++l)
            acc += gamma(r, mu, l) * gamma(l, nu, s) - gamma(r, nu, l) * gamma(l, mu, s);
          out.riemann(r, s, mu, nu) = acc;
        }
  for (int s = 0; s < n; ++s)
    for (int nu = 0; nu < n; ++nu) {
      TaylorValue acc = zero2;
      for (int r = 0; r < n; ++r) acc += out.riemann(r, s, r, nu);
      out.ricci(s, nu) = acc;
    }
  out.scalar = zero2;
  for (int s = 0; s < n; ++s)
    for (int nu = 0; nu < n; ++nu) out.scalar += m.ginv(s, nu) * out.ricci(s, nu);
  return out;
}

Mat<TaylorValue> schouten(const MetricData& m, Flavor flavor) {
  int n = m.n;
  if (n < 3) throw ShapeError("schouten: requires dimension >= 3");
  CurvatureTensors c = riemann_ricci(m);
  Mat<TaylorValue> p(n, n, m.zero.truncated(m.zero.order() - 2));
  if (flavor == Flavor::projective) {
    // −Ric/(n−1): the normalization under which the assembled projective
    // connection has vanishing curvature trace, mirroring the conformal sign.
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) p(i, j) = c.ricci(i, j) * (-1.0 / (n - 1));
    return p;
  }
  double k = -1.0 / (n - 2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      p(i, j) = (c.ricci(i, j) - m.g(i, j) * c.scalar * (0.5 / (n - 1))) * k;
  return p;
}

Vec<TaylorValue> upsilon(const MetricData& m, Flavor flavor) {
  int n = m.n;
  Ten3<TaylorValue> gamma = christoffel(m);
  double k = flavor == Flavor::conformal ? -1.0 / n : -1.0 / (n + 1);
  Vec<TaylorValue> u(n, m.zero.truncated(m.zero.order() - 1));
  for (int mu = 0; mu < n; ++mu) {
    TaylorValue tr = m.zero.truncated(m.zero.order() - 1);
    for (int l = 0; l < n; ++l) tr += gamma(l, l, mu);
    u[mu] = tr * k;
  }
  return u;
}

PiCoefficients pi_coefficients(const MetricData& m, Flavor flavor) {
  int n = m.n;
  if (n < 3) throw ShapeError("pi_coefficients: requires dimension >= 3");
  Ten3<TaylorValue> gamma = christoffel(m);
  Vec<TaylorValue> ups = upsilon(m, flavor);
  Mat<TaylorValue> p = schouten(m, flavor);

  PiCoefficients out;
  TaylorValue zero1 = m.zero.truncated(m.zero.order() - 1);
  TaylorValue zero2 = m.zero.truncated(m.zero.order() - 2);
  out.pi1 = Ten3<TaylorValue>(n, n, n, zero1);
  Vec<TaylorValue> ups_up(n, zero1);  // g^{ρλ}Υ_λ
  for (int r = 0; r < n; ++r) {
    TaylorValue acc = zero1;
    for (int l = 0; l < n; ++l) acc += m.ginv(r, l) * ups[l];
    ups_up[r] = acc;
  }
  for (int r = 0; r < n; ++r)
    for (int mu = 0; mu < n; ++mu)
      for (int nu = 0; nu < n; ++nu) {
        TaylorValue acc = gamma(r, mu, nu);
        if (r == mu) acc += ups[nu];
        if (r == nu) acc += ups[mu];
        if (flavor == Flavor::conformal) acc -= ups_up[r] * m.g(mu, nu);
        out.pi1(r, mu, nu) = acc;
      }

  // ∇_μ Υ_ν = ∂_μ Υ_ν − Γ^λ_{μν} Υ_λ
  out.pi2 = Mat<TaylorValue>(n, n, zero2);
  TaylorValue ups2 = zero1;  // g^{λρ}Υ_λ Υ_ρ
  for (int l = 0; l < n; ++l) ups2 += ups_up[l] * ups[l];
  for (int mu = 0; mu < n; ++mu)
    for (int nu = 0; nu < n; ++nu) {
      TaylorValue nabla = ups[nu].derivative(mu);
      for (int l = 0; l < n; ++l) nabla -= gamma(l, mu, nu) * ups[l];
      TaylorValue acc = p(mu, nu) + nabla - ups[mu] * ups[nu];
      if (flavor == Flavor::conformal) acc += m.g(mu, nu) * ups2 * 0.5;
      out.pi2(mu, nu) = acc;
    }
  return out;
}

BaseGeometry base_geometry(const MetricBase& metric, const Point& x, Flavor flavor,
                           int order) {
  BaseGeometry b;
  b.metric = eval_metric(metric, x, order);
  b.gamma = christoffel(b.metric);
  b.schouten = schouten(b.metric, flavor);
  b.upsilon = upsilon(b.metric, flavor);
  b.pi = pi_coefficients(b.metric, flavor);
  return b;
}

CoFrame orthonormal_coframe(const MetricData& m) {
  int n = m.n;
  Mat<double> eta = flat_eta(n, m.sig);
  TaylorValue zero = m.zero;
  TaylorValue one = zero + 1.0;

  // Gram-Schmidt on the coordinate basis over the Taylor ring, column a = e_a.
  Mat<TaylorValue> e(n, n, zero);
  for (int a = 0; a < n; ++a) {
    Vec<TaylorValue> v(n, zero);
    v[a] = one;
    for (int b = 0; b < n; ++b) {
      if (b >= a) break;
      // v -= η_bb · g(v, e_b) · e_b
      TaylorValue inner = zero;
      for (int mu = 0; mu < n; ++mu)
        for (int nu = 0; nu < n; ++nu) inner += m.g(mu, nu) * v[mu] * e(nu, b);
      for (int mu = 0; mu < n; ++mu) v[mu] -= e(mu, b) * inner * eta(b, b);
    }
    TaylorValue q = zero;
    for (int mu = 0; mu < n; ++mu)
      for (int nu = 0; nu < n; ++nu) q += m.g(mu, nu) * v[mu] * v[nu];
    if (q.value() * eta(a, a) <= 0.0)
      throw ShapeError("orthonormal co-frame: pivot sign contradicts declared signature");
    TaylorValue norm = sqrt(q * eta(a, a));
    for (int mu = 0; mu < n; ++mu) e(mu, a) = v[mu] / norm;
  }
  CoFrame out;
  out.frame = e;
  out.theta = inverse(e);
  return out;
}

}  // namespace cartan
