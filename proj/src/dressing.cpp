#include "cartan/dressing.hpp"

#include <cmath>

namespace cartan {

namespace {

/// ẽ_a = e_a + Υ_μ e^μ_a
Vec<TaylorValue> e_tilde(const BaseGeometry& base, const SectionJet& sec) {
  int n = sec.dim();
  TaylorValue zero = sec.e.zero_like();
  Vec<TaylorValue> out(n, zero);
  for (int a = 0; a < n; ++a) {
    TaylorValue acc = sec.e_lower[a];
    for (int mu = 0; mu < n; ++mu) acc += base.upsilon[mu] * sec.e(mu, a);
    out[a] = acc;
  }
  return out;
}

Mat<TaylorValue> mat_deriv(const Mat<TaylorValue>& m, int dir) {
  Mat<TaylorValue> d(m.rows(), m.cols(), m(0, 0).derivative(dir));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) d(i, j) = m(i, j).derivative(dir);
  return d;
}

}  // namespace

DressingFields build_dressings(const BaseGeometry& base, const SectionJet& sec,
                               const Mat<double>& eta) {
  int n = sec.dim();
  TaylorValue zero = sec.e.zero_like();
  TaylorValue one = zero + 1.0;
  Vec<TaylorValue> et = e_tilde(base, sec);
  Mat<TaylorValue> theta = sec.theta();
  DressingFields out;
  if (sec.flavor == Flavor::conformal) {
    Vec<TaylorValue> minus_et(n, zero);
    for (int a = 0; a < n; ++a) minus_et[a] = -et[a];
    out.u1 = mobius_k_factor(minus_et, eta, zero);
    out.u0 = Mat<TaylorValue>::identity(n + 2, one, zero);
    for (int a = 0; a < n; ++a)
      for (int mu = 0; mu < n; ++mu) out.u0(1 + a, 1 + mu) = theta(a, mu);
  } else {
    out.u1 = Mat<TaylorValue>::identity(n + 1, one, zero);
    for (int a = 0; a < n; ++a) out.u1(n, a) = -et[a];
    out.u0 = Mat<TaylorValue>::identity(n + 1, one, zero);
    for (int a = 0; a < n; ++a)
      for (int mu = 0; mu < n; ++mu) out.u0(a, mu) = theta(a, mu);
  }
  return out;
}

DressedPipeline run_dressing(const BaseGeometry& base, const SectionJet& sec,
                             const Mat<double>& eta) {
  DressedPipeline pipe;
  pipe.raw = normal_connection_matrix(base, sec, eta);
  pipe.u = build_dressings(base, sec, eta);
  pipe.stage1 = dress(pipe.raw, pipe.u.u1);
  pipe.dressed = dress(pipe.stage1, pipe.u.u0);
  return pipe;
}

MatrixConnection expected_dressed(const BaseGeometry& base, Flavor flavor) {
  int n = base.metric.n;
  TaylorValue zero = base.metric.zero;
  MatrixConnection out;
  if (flavor == Flavor::conformal) {
    out.comp.assign(n, Mat<TaylorValue>(n + 2, n + 2, zero));
    // schouten with an index raised: P^μ_λ = g^{μν} P_{νλ}
    Mat<TaylorValue> p_up(n, n, zero);
    for (int mu = 0; mu < n; ++mu)
      for (int l = 0; l < n; ++l) {
        TaylorValue acc = zero;
        for (int nu = 0; nu < n; ++nu) acc += base.metric.ginv(mu, nu) * base.schouten(nu, l);
        p_up(mu, l) = acc;
      }
    for (int l = 0; l < n; ++l) {
      Mat<TaylorValue>& m = out.comp[l];
      for (int nu = 0; nu < n; ++nu) {
        m(0, 1 + nu) = base.schouten(nu, l);
        m(n + 1, 1 + nu) = base.metric.g(nu, l);
        m(1 + nu, 0) = TaylorValue::constant(n, zero.order(), nu == l ? 1.0 : 0.0);
        m(1 + nu, n + 1) = p_up(nu, l);
        for (int mu = 0; mu < n; ++mu) m(1 + mu, 1 + nu) = base.gamma(mu, nu, l);
      }
    }
  } else {
    out.comp.assign(n, Mat<TaylorValue>(n + 1, n + 1, zero));
    for (int l = 0; l < n; ++l) {
      Mat<TaylorValue>& m = out.comp[l];
      for (int nu = 0; nu < n; ++nu) {
        m(nu, n) = TaylorValue::constant(n, zero.order(), nu == l ? 1.0 : 0.0);
        m(n, nu) = base.schouten(nu, l);
        for (int mu = 0; mu < n; ++mu) m(mu, nu) = base.gamma(mu, nu, l);
      }
    }
  }
  return out;
}

double verify_stage1(const DressedPipeline& pipe, const BaseGeometry& base,
                     const SectionJet& sec) {
  int n = sec.dim();
  Mat<TaylorValue> theta = sec.theta();
  bool conf = sec.flavor == Flavor::conformal;
  double worst = 0.0;
  for (int l = 0; l < n; ++l) {
    Mat<TaylorValue> de = mat_deriv(sec.e, l);
    const Mat<TaylorValue>& m = pipe.stage1.comp[l];
    for (int a = 0; a < n; ++a) {
      // middle block: θ^a_μ de^μ_b + θ^a_μ Γ^μ_{νλ} e^ν_b
      for (int b = 0; b < n; ++b) {
        double expect = 0.0;
        for (int mu = 0; mu < n; ++mu) {
          expect += theta(a, mu).value() * de(mu, b).value();
          for (int nu = 0; nu < n; ++nu)
            expect +=
                theta(a, mu).value() * base.gamma(mu, nu, l).value() * sec.e(nu, b).value();
        }
        double got = conf ? m(1 + a, 1 + b).value() : m(a, b).value();
        worst = std::max(worst, std::abs(got - expect));
      }
      // θ-column
      double th = theta(a, l).value();
      worst = std::max(worst, std::abs((conf ? m(1 + a, 0).value() : m(a, n).value()) - th));
      // covector row: e^μ_b P_{μλ}
      double pb = 0.0;
      for (int mu = 0; mu < n; ++mu) pb += sec.e(mu, a).value() * base.schouten(mu, l).value();
      worst = std::max(worst, std::abs((conf ? m(0, 1 + a).value() : m(n, a).value()) - pb));
    }
    // scalar blocks vanish
    if (conf) {
      worst = std::max(worst, std::abs(m(0, 0).value()));
      worst = std::max(worst, std::abs(m(n + 1, n + 1).value()));
    } else {
      worst = std::max(worst, std::abs(m(n, n).value()));
    }
  }
  return worst;
}

double verify_invariance(const BaseGeometry& base, const SectionJet& sec,
                         const GaugeField& gauge, const Mat<double>& eta) {
  DressedPipeline original = run_dressing(base, sec, eta);
  SectionJet moved = gauge.apply_to_section(sec);
  DressedPipeline transformed = run_dressing(base, moved, eta);
  return connection_residual(transformed.dressed, original.dressed);
}

ResidualTransform ResidualTransform::from_scale(const TaylorValue& z) {
  ResidualTransform rt;
  rt.z = z;
  int n = z.vars();
  for (int mu = 0; mu < n; ++mu) rt.zeta.push_back(z.derivative(mu) / z.truncated(z.order() - 1));
  return rt;
}

Mat<TaylorValue> weyl_z_matrix(const ResidualTransform& rt, int n, Flavor flavor) {
  TaylorValue zero = rt.z - rt.z;
  TaylorValue one = zero + 1.0;
  if (flavor == Flavor::conformal) {
    Mat<TaylorValue> m = Mat<TaylorValue>::identity(n + 2, one, zero);
    m(0, 0) = rt.z;
    m(n + 1, n + 1) = 1.0 / rt.z;
    return m;
  }
  Mat<TaylorValue> m = Mat<TaylorValue>::identity(n + 1, one, zero);
  m(n, n) = rt.z;
  return m;
}

Mat<TaylorValue> weyl_c_matrix(const ResidualTransform& rt, const BaseGeometry& base,
                               Flavor flavor) {
  int n = base.metric.n;
  TaylorValue zero = rt.z - rt.z;
  TaylorValue one = zero + 1.0;
  if (flavor == Flavor::projective) {
    Mat<TaylorValue> m = Mat<TaylorValue>::identity(n + 1, one, zero);
    for (int nu = 0; nu < n; ++nu) m(n, nu) = rt.zeta[nu];
    return m.scaled(rt.z);
  }
  // conformal: [[z, zζ_ν, ½z⁻¹ζ²], [0, zδ, z⁻¹ζ^♯], [0, 0, z⁻¹]] with ζ raised by g
  Vec<TaylorValue> zeta_up(n, zero);
  TaylorValue zeta2 = zero;
  for (int mu = 0; mu < n; ++mu) {
    TaylorValue acc = zero;
    for (int nu = 0; nu < n; ++nu) acc += base.metric.ginv(mu, nu) * rt.zeta[nu];
    zeta_up[mu] = acc;
    zeta2 += acc * rt.zeta[mu];
  }
  Mat<TaylorValue> m(n + 2, n + 2, zero);
  TaylorValue zinv = 1.0 / rt.z;
  m(0, 0) = rt.z;
  m(n + 1, n + 1) = zinv;
  for (int nu = 0; nu < n; ++nu) {
    m(0, 1 + nu) = rt.z * rt.zeta[nu];
    m(1 + nu, 1 + nu) = rt.z;
    m(1 + nu, n + 1) = zinv * zeta_up[nu];
  }
  m(0, n + 1) = zinv * zeta2 * 0.5;
  return m;
}

ResidualWeylResult residual_weyl(const MatrixConnection& dressed, const ResidualTransform& rt,
                                 const BaseGeometry& base, Flavor flavor) {
  if (std::abs(rt.z.value()) < 1e-12)
    throw DomainError("residual weyl: scale factor vanishes at the evaluation point");
  Mat<TaylorValue> c = weyl_c_matrix(rt, base, flavor);
  ResidualWeylResult out;
  out.transformed = transform_connection(dressed, c);
  int n = base.metric.n;
  TaylorValue zero = base.metric.zero;
  if (flavor == Flavor::projective) {
    out.gamma_z = Ten3<TaylorValue>(n, n, n, zero);
    out.schouten_z = Mat<TaylorValue>(n, n, zero);
    for (int l = 0; l < n; ++l)
      for (int nu = 0; nu < n; ++nu) {
        out.schouten_z(nu, l) = out.transformed.comp[l](n, nu);
        for (int mu = 0; mu < n; ++mu) out.gamma_z(mu, nu, l) = out.transformed.comp[l](mu, nu);
      }
  }
  return out;
}

namespace {

/// The Weyl-transformed dressing data read off the transformed connection
/// blocks: θ^Z = zθ and ẽ^Z = z⁻¹(ẽ − ζ_μ e^μ); the ζ shift is the
/// Maurer–Cartan contribution of the dilation direction.
DressingFields weyl_transformed_dressings(const BaseGeometry& base, const SectionJet& sec,
                                          const ResidualTransform& rt, const Mat<double>& eta) {
  int n = sec.dim();
  TaylorValue zero = sec.e.zero_like();
  TaylorValue one = zero + 1.0;
  TaylorValue zinv = 1.0 / rt.z;
  Vec<TaylorValue> et(n, zero);
  for (int a = 0; a < n; ++a) {
    TaylorValue acc = sec.e_lower[a];
    for (int mu = 0; mu < n; ++mu) acc += (base.upsilon[mu] - rt.zeta[mu]) * sec.e(mu, a);
    et[a] = acc * zinv;  // ẽ^Z
  }
  Mat<TaylorValue> theta_z = sec.theta().scaled(rt.z);
  DressingFields out;
  if (sec.flavor == Flavor::conformal) {
    Vec<TaylorValue> minus_et(n, zero);
    for (int a = 0; a < n; ++a) minus_et[a] = -et[a];
    out.u1 = mobius_k_factor(minus_et, eta, zero);
    out.u0 = Mat<TaylorValue>::identity(n + 2, one, zero);
    for (int a = 0; a < n; ++a)
      for (int mu = 0; mu < n; ++mu) out.u0(1 + a, 1 + mu) = theta_z(a, mu);
  } else {
    out.u1 = Mat<TaylorValue>::identity(n + 1, one, zero);
    for (int a = 0; a < n; ++a) out.u1(n, a) = -et[a];
    out.u0 = Mat<TaylorValue>::identity(n + 1, one, zero);
    for (int a = 0; a < n; ++a)
      for (int mu = 0; mu < n; ++mu) out.u0(a, mu) = theta_z(a, mu);
  }
  return out;
}

}  // namespace

double weyl_factorization_defect(const BaseGeometry& base, const SectionJet& sec,
                                 const ResidualTransform& rt, const Mat<double>& eta) {
  Mat<TaylorValue> u_moved = weyl_transformed_dressings(base, sec, rt, eta).combined();
  Mat<TaylorValue> expected = inverse(weyl_z_matrix(rt, sec.dim(), sec.flavor)) *
                              build_dressings(base, sec, eta).combined() *
                              weyl_c_matrix(rt, base, sec.flavor);
  double worst = 0.0;
  for (int i = 0; i < u_moved.rows(); ++i)
    for (int j = 0; j < u_moved.cols(); ++j)
      worst = std::max(worst, std::abs(u_moved(i, j).value() - expected(i, j).value()));
  return worst;
}

TractorField tractor_dress(const TractorField& phi, const DressingFields& u) {
  if (phi.stage != TractorStage::raw)
    throw ShapeError("tractor dressing: stages must be applied in order raw -> 1 -> 0");
  Mat<TaylorValue> inv1 = inverse(u.u1);
  Mat<TaylorValue> inv0 = inverse(u.u0);
  TaylorValue zero = phi.comp[0] - phi.comp[0];
  Vec<TaylorValue> stage1(phi.comp.size(), zero);
  for (int i = 0; i < phi.size(); ++i)
    for (int j = 0; j < phi.size(); ++j) stage1[i] += inv1(i, j) * phi.comp[j];
  TractorField out{phi.flavor, Vec<TaylorValue>(phi.comp.size(), zero), TractorStage::stage0};
  for (int i = 0; i < phi.size(); ++i)
    for (int j = 0; j < phi.size(); ++j) out.comp[i] += inv0(i, j) * stage1[j];
  return out;
}

std::vector<Vec<TaylorValue>> tractor_derivative(const MatrixConnection& dressed,
                                                 const TractorField& phi0) {
  if (phi0.stage != TractorStage::stage0)
    throw ShapeError("tractor derivative: field must be fully dressed (stage 0)");
  int n = dressed.base_dim();
  int size = phi0.size();
  TaylorValue zero0 = phi0.comp[0] - phi0.comp[0];
  std::vector<Vec<TaylorValue>> out(n, Vec<TaylorValue>(size, zero0));
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < size; ++i) {
      TaylorValue acc = phi0.comp[i].derivative(l);
      for (int j = 0; j < size; ++j) acc += dressed.comp[l](i, j) * phi0.comp[j];
      out[l][i] = acc;
    }
  return out;
}

TractorField tractor_weyl(const TractorField& phi0, const Mat<TaylorValue>& c_matrix) {
  if (phi0.stage != TractorStage::stage0)
    throw ShapeError("tractor dilation: field must be fully dressed (stage 0)");
  TractorField out{phi0.flavor,
                   Vec<TaylorValue>(phi0.comp.size(), phi0.comp[0] - phi0.comp[0]),
                   TractorStage::stage0};
  Mat<TaylorValue> inv = inverse(c_matrix);
  for (int i = 0; i < phi0.size(); ++i)
    for (int j = 0; j < phi0.size(); ++j) out.comp[i] += inv(i, j) * phi0.comp[j];
  return out;
}

}  // namespace cartan
