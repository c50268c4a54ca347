#include "cartan/fields.hpp"

namespace cartan {

TaylorValue random_taylor(Rng& rng, int vars, int order, double amplitude) {
  const auto& layout = TaylorLayout::get(vars, order);
  TaylorValue out = TaylorValue::zero(vars, order);
  // write through coefficient access: rebuild from monomial contributions
  // (coefficients damped by degree to keep fields tame on the unit box)
  std::vector<double> c(layout.size);
  for (int r = 0; r < layout.size; ++r)
    c[r] = rng.uniform(-amplitude, amplitude) / (1 << layout.degree[r]);
  // assemble as a sum of monomial TaylorValues is wasteful; poke data directly
  // via arithmetic: constant + sum over variables of nested products
  // Simpler: use the layout to construct coefficients through variable products.
  // Degree <= 3 keeps this cheap.
  Vec<TaylorValue> vars_tv;
  for (int i = 0; i < vars; ++i) vars_tv.push_back(TaylorValue::variable(vars, order, i, 0.0));
  for (int r = 0; r < layout.size; ++r) {
    TaylorValue mono = TaylorValue::constant(vars, order, c[r]);
    for (int i = 0; i < vars; ++i)
      for (int p = 0; p < layout.exps[r][i]; ++p) mono = mono * vars_tv[i];
    out += mono;
  }
  return out;
}

SectionJet random_section(Rng& rng, int n, int order, Flavor flavor, double amplitude) {
  TaylorValue zero = TaylorValue::zero(n, order);
  SectionJet sec{Mat<TaylorValue>(n, n, zero), Vec<TaylorValue>(n, zero), flavor};
  for (int mu = 0; mu < n; ++mu)
    for (int a = 0; a < n; ++a) {
      TaylorValue entry = random_taylor(rng, n, order, amplitude / n);
      if (mu == a) entry = entry + 1.0;
      sec.e(mu, a) = entry;
    }
  for (int a = 0; a < n; ++a) sec.e_lower[a] = random_taylor(rng, n, order, amplitude);
  return sec;
}

Vec<TaylorValue> random_covector_field(Rng& rng, int n, int order, double amplitude) {
  Vec<TaylorValue> r;
  for (int i = 0; i < n; ++i) r.push_back(random_taylor(rng, n, order, amplitude));
  return r;
}

Mat<TaylorValue> random_isometry_field(Rng& rng, const Mat<double>& eta, int order,
                                       double amplitude) {
  int n = eta.rows();
  TaylorValue zero = TaylorValue::zero(n, order);
  Mat<TaylorValue> gen(n, n, zero);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      TaylorValue f = random_taylor(rng, n, order, amplitude);
      gen(i, j) = f;
      gen(j, i) = -f * (eta(i, i) * eta(j, j));
    }
  return expm(gen);
}

Mat<TaylorValue> random_gl_field(Rng& rng, int n, int order, double amplitude) {
  TaylorValue zero = TaylorValue::zero(n, order);
  Mat<TaylorValue> m(n, n, zero);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      m(i, j) = random_taylor(rng, n, order, amplitude / n);
      if (i == j) m(i, j) = m(i, j) + 1.0;
    }
  // normalize to unit determinant: the determinant direction is the residual
  // dilation, which the dressing is not meant to absorb
  TaylorValue scale = pow(determinant(m), -1.0 / n);
  return m.scaled(scale);
}

TaylorValue random_scale_field(Rng& rng, int n, int order, double amplitude) {
  return exp(random_taylor(rng, n, order, amplitude));
}

GaugeField random_gauge_field(Rng& rng, GaugeField::Kind kind, int n, const Mat<double>& eta,
                              int order) {
  GaugeField g;
  g.kind = kind;
  switch (kind) {
    case GaugeField::Kind::special_conformal:
    case GaugeField::Kind::projective_covector:
      g.r = random_covector_field(rng, n, order);
      break;
    case GaugeField::Kind::lorentz:
      g.s = random_isometry_field(rng, eta, order);
      break;
    case GaugeField::Kind::projective_gl:
      g.s = random_gl_field(rng, n, order);
      break;
    case GaugeField::Kind::weyl:
      g.z = random_scale_field(rng, n, order);
      break;
  }
  return g;
}

Jet3<TaylorValue> random_conformal_jet_field(Rng& rng, const Mat<double>& eta, int order) {
  int n = eta.rows();
  Mat<TaylorValue> s = random_isometry_field(rng, eta, order);
  TaylorValue z = random_scale_field(rng, n, order);
  Vec<TaylorValue> r = random_covector_field(rng, n, order);
  Mat<TaylorValue> h1 = s.scaled(1.0 / z);
  return prolong3(h1, r, JetFlavor::conformal, eta);
}

}  // namespace cartan
