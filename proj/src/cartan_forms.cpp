#include "cartan/cartan_forms.hpp"

#include <cmath>

namespace cartan {

namespace {

Mat<TaylorValue> mat_derivative(const Mat<TaylorValue>& m, int dir) {
  Mat<TaylorValue> d(m.rows(), m.cols(), m(0, 0).derivative(dir));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) d(i, j) = m(i, j).derivative(dir);
  return d;
}

Mat<double> values(const Mat<TaylorValue>& m) {
  Mat<double> v(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) v(i, j) = m(i, j).value();
  return v;
}

ReducedFrame<TaylorValue> reduced(const SectionJet& sec) {
  return {sec.e, sec.e_lower, jet_flavor(sec.flavor)};
}

}  // namespace

SectionJet orthonormal_section(const MetricData& m, Flavor flavor) {
  return orthonormal_section(m, flavor, Vec<TaylorValue>(m.n, m.zero));
}

SectionJet orthonormal_section(const MetricData& m, Flavor flavor, Vec<TaylorValue> e_lower) {
  CoFrame cf = orthonormal_coframe(m);
  return {cf.frame, std::move(e_lower), flavor};
}

double connection_residual(const GradedConnection& a, const GradedConnection& b) {
  double worst = 0.0;
  for (int l = 0; l < a.base_dim(); ++l) {
    auto d = a.comp[l] - b.comp[l];
    double scale = std::max({1.0, max_abs(a.comp[l]), max_abs(b.comp[l])});
    worst = std::max(worst, max_abs(d) / scale);
  }
  return worst;
}

double connection_residual(const MatrixConnection& a, const MatrixConnection& b) {
  double worst = 0.0;
  for (int l = 0; l < a.base_dim(); ++l)
    worst = std::max(worst, residual(values(a.comp[l]), values(b.comp[l])));
  return worst;
}

CanonicalForm canonical_form(const SectionJet& sec, const Mat<double>& eta) {
  int n = sec.dim();
  TaylorValue zero = sec.e.zero_like();
  CanonicalForm out{sec.theta(), Ten3<TaylorValue>(n, n, n, zero)};
  Ten3<TaylorValue> e2 = expand_frame_second_order(reduced(sec), eta);
  for (int l = 0; l < n; ++l) {
    Mat<TaylorValue> de = mat_derivative(sec.e, l);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        TaylorValue acc = zero;
        for (int mu = 0; mu < n; ++mu) {
          TaylorValue inner = de(mu, b);
          for (int c = 0; c < n; ++c) inner -= e2(mu, b, c) * out.theta(c, l);
          acc += out.theta(a, mu) * inner;
        }
        out.theta_ab(a, b, l) = acc;
      }
  }
  return out;
}

double canonical_form_identity_defect(const SectionJet& sec, const Mat<double>& eta) {
  int n = sec.dim();
  CanonicalForm cf = canonical_form(sec, eta);
  double worst = 0.0;
  for (int a = 0; a < n; ++a)
    for (int l = 0; l < n; ++l)
      for (int r = l + 1; r < n; ++r) {
        double dtheta = cf.theta(a, r).derivative(l).value() -
                        cf.theta(a, l).derivative(r).value();
        double wedge = 0.0;
        for (int b = 0; b < n; ++b)
          wedge += cf.theta_ab(a, b, l).value() * cf.theta(b, r).value() -
                   cf.theta_ab(a, b, r).value() * cf.theta(b, l).value();
        worst = std::max(worst, std::abs(dtheta + wedge));
      }
  return worst;
}

GradedConnection normal_connection_graded(const BaseGeometry& base, const SectionJet& sec,
                                          const Mat<double>& eta) {
  int n = sec.dim();
  TaylorValue zero = sec.e.zero_like();
  CanonicalForm cf = canonical_form(sec, eta);
  const auto& pi1 = base.pi.pi1;
  const auto& pi2 = base.pi.pi2;

  GradedConnection out{sec.flavor, {}};
  out.comp.assign(n, zero_algebra(n, zero));

  // e_c θ^c_λ and η^{cd} e_c e_d
  Vec<TaylorValue> etheta(n, zero);
  for (int l = 0; l < n; ++l) {
    TaylorValue acc = zero;
    for (int c = 0; c < n; ++c) acc += sec.e_lower[c] * cf.theta(c, l);
    etheta[l] = acc;
  }
  TaylorValue e2norm = zero;
  for (int c = 0; c < n; ++c) e2norm += sec.e_lower[c] * sec.e_lower[c] * eta(c, c);

  for (int l = 0; l < n; ++l) {
    auto& slot = out.comp[l];
    for (int a = 0; a < n; ++a) slot.a_m1[a] = cf.theta(a, l);
    // ω̃^a_b = θ^a_b + θ^a_μ Π^μ_{νλ} e^ν_b
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        TaylorValue acc = cf.theta_ab(a, b, l);
        for (int mu = 0; mu < n; ++mu)
          for (int nu = 0; nu < n; ++nu)
            acc += cf.theta(a, mu) * pi1(mu, nu, l) * sec.e(nu, b);
        slot.a0(a, b) = acc;
      }
    // ω̃_b = de_b − e_c ω̃^c_b + (e_cθ^c) e_b + e^μ_b Π_{μλ} [− ½ η^{cd}e_ce_d η_{be}θ^e]
    for (int b = 0; b < n; ++b) {
      TaylorValue acc = sec.e_lower[b].derivative(l);
      for (int c = 0; c < n; ++c) acc -= sec.e_lower[c] * slot.a0(c, b);
      acc += etheta[l] * sec.e_lower[b];
      for (int mu = 0; mu < n; ++mu) acc += sec.e(mu, b) * pi2(mu, l);
      if (sec.flavor == Flavor::conformal)
        acc -= e2norm * cf.theta(b, l) * (0.5 * eta(b, b));
      slot.a_p1[b] = acc;
    }
  }
  return out;
}

MatrixConnection normal_connection_matrix(const BaseGeometry& base, const SectionJet& sec,
                                          const Mat<double>& eta) {
  int n = sec.dim();
  TaylorValue zero = sec.e.zero_like();
  Mat<TaylorValue> theta = sec.theta();
  const auto& pi1 = base.pi.pi1;
  const auto& pi2 = base.pi.pi2;
  bool conf = sec.flavor == Flavor::conformal;

  // trace part T = (1/n or 1/(n+1)) (θ^a_μ de^μ_a + Π^μ_{μλ} dx^λ)
  double trace_weight = conf ? 1.0 / n : 1.0 / (n + 1);
  Vec<TaylorValue> tpart(n, zero);
  for (int l = 0; l < n; ++l) {
    Mat<TaylorValue> de = mat_derivative(sec.e, l);
    TaylorValue acc = zero;
    for (int a = 0; a < n; ++a)
      for (int mu = 0; mu < n; ++mu) acc += theta(a, mu) * de(mu, a);
    for (int mu = 0; mu < n; ++mu) acc += pi1(mu, mu, l);
    tpart[l] = acc * trace_weight;
  }

  Vec<TaylorValue> etheta(n, zero);
  TaylorValue e2norm = zero;
  for (int l = 0; l < n; ++l) {
    TaylorValue acc = zero;
    for (int c = 0; c < n; ++c) acc += sec.e_lower[c] * theta(c, l);
    etheta[l] = acc;
  }
  for (int c = 0; c < n; ++c) e2norm += sec.e_lower[c] * sec.e_lower[c] * eta(c, c);

  int size = conf ? n + 2 : n + 1;
  MatrixConnection out;
  out.comp.assign(n, Mat<TaylorValue>(size, size, zero));

  for (int l = 0; l < n; ++l) {
    Mat<TaylorValue> de = mat_derivative(sec.e, l);
    // shared building blocks
    Mat<TaylorValue> thetade(n, n, zero);  // θ^a_μ ∂_λ e^μ_b
    Mat<TaylorValue> thetapie(n, n, zero); // θ^a_μ Π^μ_{νλ} e^ν_b
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        TaylorValue acc1 = zero, acc2 = zero;
        for (int mu = 0; mu < n; ++mu) {
          acc1 += theta(a, mu) * de(mu, b);
          for (int nu = 0; nu < n; ++nu) acc2 += theta(a, mu) * pi1(mu, nu, l) * sec.e(nu, b);
        }
        thetade(a, b) = acc1;
        thetapie(a, b) = acc2;
      }

    TaylorValue w00 = -tpart[l];
    for (int a = 0; a < n; ++a) w00 -= sec.e_lower[a] * theta(a, l);

    Vec<TaylorValue> wa0(n, zero), w0b(n, zero);
    Mat<TaylorValue> wab(n, n, zero);
    for (int a = 0; a < n; ++a) wa0[a] = theta(a, l);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        TaylorValue acc = thetade(a, b) + thetapie(a, b);
        acc += sec.e_lower[b] * theta(a, l);
        if (conf) acc -= sec.e_lower[a] * theta(b, l) * (eta(a, a) * eta(b, b));
        if (a == b) acc -= tpart[l];
        wab(a, b) = acc;
      }
    for (int b = 0; b < n; ++b) {
      TaylorValue acc = sec.e_lower[b].derivative(l);
      for (int c = 0; c < n; ++c) acc -= sec.e_lower[c] * (thetade(c, b) + thetapie(c, b));
      acc -= etheta[l] * sec.e_lower[b];
      if (conf) acc += e2norm * theta(b, l) * (0.5 * eta(b, b));
      for (int mu = 0; mu < n; ++mu) acc += sec.e(mu, b) * pi2(mu, l);
      w0b[b] = acc;
    }

    Mat<TaylorValue>& m = out.comp[l];
    if (conf) {
      m(0, 0) = w00;
      m(n + 1, n + 1) = -w00;
      for (int b = 0; b < n; ++b) {
        m(0, 1 + b) = w0b[b];
        m(1 + b, n + 1) = w0b[b] * eta(b, b);
        m(1 + b, 0) = wa0[b];
        m(n + 1, 1 + b) = wa0[b] * eta(b, b);
      }
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) m(1 + a, 1 + b) = wab(a, b);
    } else {
      m(n, n) = w00;
      for (int b = 0; b < n; ++b) {
        m(b, n) = wa0[b];
        m(n, b) = w0b[b];
      }
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) m(a, b) = wab(a, b);
    }
  }
  return out;
}

MatrixConnection matrix_from_graded(const GradedConnection& g, const Mat<double>& eta) {
  MatrixConnection out;
  for (const auto& slot : g.comp)
    out.comp.push_back(g.flavor == Flavor::conformal ? conformal_algebra_matrix(slot, eta)
                                                     : projective_algebra_matrix(slot));
  return out;
}

GradedConnection graded_from_matrix(const MatrixConnection& m, Flavor flavor) {
  GradedConnection out{flavor, {}};
  for (const auto& slot : m.comp)
    out.comp.push_back(flavor == Flavor::conformal ? conformal_algebra_from_matrix(slot)
                                                   : projective_algebra_from_matrix(slot));
  return out;
}

MatrixConnection poincare_connection(const MetricData& m, const SectionJet& sec) {
  int n = m.n;
  Mat<double> eta = flat_eta(n, m.sig);
  Mat<TaylorValue> theta = sec.theta();
  // the section must be orthonormal for g
  {
    double worst = 0.0;
    for (int mu = 0; mu < n; ++mu)
      for (int nu = 0; nu < n; ++nu) {
        double acc = 0.0;
        for (int a = 0; a < n; ++a)
          acc += eta(a, a) * theta(a, mu).value() * theta(a, nu).value();
        worst = std::max(worst, std::abs(acc - m.g(mu, nu).value()));
      }
    if (worst > 1e-8)
      throw ShapeError("poincare connection: section is not orthonormal for the metric");
  }
  TaylorValue zero = sec.e.zero_like();

  // anholonomy C^a_{bc} = e^μ_b e^ν_c (∂_μ θ^a_ν − ∂_ν θ^a_μ), lowered with η
  Ten3<TaylorValue> c_low(n, n, n, zero);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        TaylorValue acc = zero;
        for (int mu = 0; mu < n; ++mu)
          for (int nu = 0; nu < n; ++nu)
            acc += sec.e(mu, b) * sec.e(nu, c) *
                   (theta(a, nu).derivative(mu) - theta(a, mu).derivative(nu));
        c_low(a, b, c) = acc * eta(a, a);
      }
  // torsion-free metric spin connection: A_{ab|c} = ½(C_{abc} + C_{bca} − C_{cab})
  Ten3<TaylorValue> a_frame(n, n, n, zero);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        a_frame(a, b, c) =
            (c_low(a, b, c) + c_low(b, c, a) - c_low(c, a, b)) * 0.5;

  MatrixConnection out;
  out.comp.assign(n, Mat<TaylorValue>(n + 1, n + 1, zero));
  for (int l = 0; l < n; ++l) {
    Mat<TaylorValue>& slot = out.comp[l];
    for (int a = 0; a < n; ++a) {
      slot(a, n) = theta(a, l);
      for (int b = 0; b < n; ++b) {
        TaylorValue acc = zero;
        for (int c = 0; c < n; ++c) acc += a_frame(a, b, c) * theta(c, l) * eta(a, a);
        slot(a, b) = acc;
      }
    }
  }
  return out;
}

CurvatureValue curvature(const MatrixConnection& conn) {
  int n = conn.base_dim();
  CurvatureValue out;
  out.base_dim = n;
  int size = conn.size();
  out.comp.assign(n * n, Mat<TaylorValue>(size, size, conn.comp[0](0, 0) * 0.0));
  // computed for λ < ρ only; the mirror slot is the negation, so antisymmetry
  // holds bit-exactly
  for (int l = 0; l < n; ++l)
    for (int r = l + 1; r < n; ++r) {
      Mat<TaylorValue> f = mat_derivative(conn.comp[r], l) - mat_derivative(conn.comp[l], r) +
                           conn.comp[l] * conn.comp[r] - conn.comp[r] * conn.comp[l];
      out.comp[r * n + l] = -f;
      out.comp[l * n + r] = std::move(f);
    }
  return out;
}

MatrixConnection transform_connection(const MatrixConnection& conn,
                                      const Mat<TaylorValue>& gamma) {
  Mat<TaylorValue> inv = inverse(gamma);
  MatrixConnection out;
  out.comp.reserve(conn.base_dim());
  for (int l = 0; l < conn.base_dim(); ++l)
    out.comp.push_back(inv * conn.comp[l] * gamma + inv * mat_derivative(gamma, l));
  return out;
}

namespace {

NormalityReport normality_of(const BaseGeometry& base, const SectionJet& sec,
                             const Mat<double>& eta) {
  int n = sec.dim();
  GradedConnection g = normal_connection_graded(base, sec, eta);
  MatrixConnection m = matrix_from_graded(g, eta);
  CurvatureValue f = curvature(m);
  Mat<double> e_vals = values(sec.e);

  NormalityReport rep;
  // graded curvature components; torsion is the grade −1 block
  std::vector<JetAlgebra<double>> omega;
  omega.reserve(n * n);
  for (int l = 0; l < n; ++l)
    for (int r = 0; r < n; ++r) {
      Mat<double> fv = values(f.at(l, r));
      JetAlgebra<double> slot = sec.flavor == Flavor::conformal
                                    ? conformal_algebra_from_matrix(fv)
                                    : projective_algebra_from_matrix(fv);
      omega.push_back(std::move(slot));
    }
  for (const auto& slot : omega) rep.torsion_norm = std::max(rep.torsion_norm, max_abs(slot.a_m1));

  // K^a_{bcd} = Ω^a_{b,λρ} e^λ_c e^ρ_d; report the sup of the trace K^a_{bad}
  for (int b = 0; b < n; ++b)
    for (int d = 0; d < n; ++d) {
      double tr = 0.0;
      for (int a = 0; a < n; ++a) {
        double k = 0.0;
        for (int l = 0; l < n; ++l)
          for (int r = 0; r < n; ++r)
            k += omega[l * n + r].a0(a, b) * e_vals(l, a) * e_vals(r, d);
        tr += k;
      }
      rep.ricci_trace_norm = std::max(rep.ricci_trace_norm, std::abs(tr));
    }
  return rep;
}

}  // namespace

NormalityReport check_normality(const BaseGeometry& base, const SectionJet& sec,
                                const Mat<double>& eta) {
  return normality_of(base, sec, eta);
}

NormalityReport check_normality_perturbed(const BaseGeometry& base, const SectionJet& sec,
                                          const Mat<double>& eta, double delta) {
  BaseGeometry tweaked = base;
  for (int i = 0; i < tweaked.pi.pi2.rows(); ++i)
    tweaked.pi.pi2(i, i) = tweaked.pi.pi2(i, i) + delta;
  return normality_of(tweaked, sec, eta);
}

PiExtraction extract_pi(const GradedConnection& conn, const SectionJet& sec,
                        const Mat<double>& eta) {
  int n = sec.dim();
  TaylorValue zero = sec.e.zero_like();
  CanonicalForm cf = canonical_form(sec, eta);
  PiExtraction out{Ten3<TaylorValue>(n, n, n, zero), Mat<TaylorValue>(n, n, zero)};

  Vec<TaylorValue> etheta(n, zero);
  TaylorValue e2norm = zero;
  for (int l = 0; l < n; ++l) {
    TaylorValue acc = zero;
    for (int c = 0; c < n; ++c) acc += sec.e_lower[c] * cf.theta(c, l);
    etheta[l] = acc;
  }
  for (int c = 0; c < n; ++c) e2norm += sec.e_lower[c] * sec.e_lower[c] * eta(c, c);

  for (int l = 0; l < n; ++l) {
    const auto& slot = conn.comp[l];
    // Π^μ_{νλ} = e^μ_a (ω̃^a_b − θ^a_b) θ^b_ν
    for (int mu = 0; mu < n; ++mu)
      for (int nu = 0; nu < n; ++nu) {
        TaylorValue acc = zero;
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            acc += sec.e(mu, a) * (slot.a0(a, b) - cf.theta_ab(a, b, l)) * cf.theta(b, nu);
        out.pi1(mu, nu, l) = acc;
      }
    // Π_{μλ} = θ^b_μ (ω̃_b − de_b + e_cω̃^c_b − (e_cθ^c)e_b [+ ½ e² η_b θ^b])
    for (int mu = 0; mu < n; ++mu) {
      TaylorValue acc = zero;
      for (int b = 0; b < n; ++b) {
        TaylorValue rb = slot.a_p1[b] - sec.e_lower[b].derivative(l);
        for (int c = 0; c < n; ++c) rb += sec.e_lower[c] * slot.a0(c, b);
        rb -= etheta[l] * sec.e_lower[b];
        if (sec.flavor == Flavor::conformal)
          rb += e2norm * cf.theta(b, l) * (0.5 * eta(b, b));
        acc += cf.theta(b, mu) * rb;
      }
      out.pi2(mu, l) = acc;
    }
  }
  return out;
}

SectionJet translate_section(const SectionJet& sec, const Mat<double>& h1,
                             const Vec<double>& hb) {
  int n = sec.dim();
  TaylorValue zero = sec.e.zero_like();
  Mat<TaylorValue> h1t(n, n, zero);
  Vec<TaylorValue> hbt(n, zero);
  for (int i = 0; i < n; ++i) {
    hbt[i] = zero + hb[i];
    for (int j = 0; j < n; ++j) h1t(i, j) = zero + h1(i, j);
  }
  ReducedFrame<TaylorValue> moved = jet_right_action(reduced(sec), h1t, hbt);
  return {moved.e1, moved.e_lower, sec.flavor};
}

double check_equivariance(const BaseGeometry& base, const SectionJet& sec,
                          const Mat<double>& h1, const Vec<double>& hb,
                          const Mat<double>& h_matrix, const Mat<double>& eta) {
  SectionJet moved = translate_section(sec, h1, hb);
  MatrixConnection at_moved = matrix_from_graded(normal_connection_graded(base, moved, eta), eta);
  MatrixConnection at_sec = matrix_from_graded(normal_connection_graded(base, sec, eta), eta);
  Mat<double> hinv = inverse(h_matrix);
  double worst = 0.0;
  for (int l = 0; l < at_sec.base_dim(); ++l) {
    Mat<double> expected = hinv * values(at_sec.comp[l]) * h_matrix;
    worst = std::max(worst, residual(values(at_moved.comp[l]), expected));
  }
  return worst;
}

GradedConnection reconstruct_local_connection(const GradedConnection& sigma_pullback,
                                              const Jet3<TaylorValue>& h,
                                              const Mat<double>& eta) {
  int n = h.dim();
  Jet3<TaylorValue> hbar = invert(h);
  Vec<TaylorValue> hb = recover_hb(h.truncate2(), JetFlavor::conformal);
  GradedConnection out{sigma_pullback.flavor, {}};
  out.comp.reserve(n);
  for (int l = 0; l < n; ++l) {
    JetAlgebra<TaylorValue> ad = adjoint(hbar, sigma_pullback.comp[l], eta);
    Mat<TaylorValue> dh1(n, n, h.zero().derivative(l));
    Vec<TaylorValue> dhb(n, h.zero().derivative(l));
    for (int i = 0; i < n; ++i) {
      dhb[i] = hb[i].derivative(l);
      for (int j = 0; j < n; ++j) dh1(i, j) = h.j1(i, j).derivative(l);
    }
    JetAlgebra<TaylorValue> mc = maurer_cartan(h.j1, hb, dh1, dhb);
    out.comp.push_back(ad + mc);
  }
  return out;
}

Mat<TaylorValue> GaugeField::matrix(const Mat<double>& eta) const {
  switch (kind) {
    case Kind::special_conformal: {
      TaylorValue zero = r[0] - r[0];
      return mobius_k_factor(r, eta, zero);
    }
    case Kind::lorentz: {
      TaylorValue zero = s.zero_like();
      return mobius_co_factor(s, zero + 1.0, zero);
    }
    case Kind::weyl: {
      TaylorValue zero = z - z;
      int n = eta.rows();
      Mat<TaylorValue> id(n, n, zero);
      for (int i = 0; i < n; ++i) id(i, i) = zero + 1.0;
      return mobius_co_factor(id, z, zero);
    }
    case Kind::projective_covector: {
      TaylorValue zero = r[0] - r[0];
      int n = static_cast<int>(r.size());
      Mat<TaylorValue> m = Mat<TaylorValue>::identity(n + 1, zero + 1.0, zero);
      for (int b = 0; b < n; ++b) m(n, b) = r[b];
      return m;
    }
    case Kind::projective_gl: {
      TaylorValue zero = s.zero_like();
      int n = s.rows();
      Mat<TaylorValue> m = Mat<TaylorValue>::identity(n + 1, zero + 1.0, zero);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = s(i, j);
      return m;
    }
  }
  throw Error("gauge field: unreachable");
}

SectionJet GaugeField::apply_to_section(const SectionJet& sec) const {
  SectionJet out = sec;
  int n = sec.dim();
  switch (kind) {
    case Kind::special_conformal:
    case Kind::projective_covector:
      for (int b = 0; b < n; ++b) out.e_lower[b] += r[b];
      return out;
    case Kind::lorentz:
    case Kind::projective_gl: {
      out.e = sec.e * s;
      TaylorValue zero = sec.e.zero_like();
      for (int b = 0; b < n; ++b) {
        TaylorValue acc = zero;
        for (int c = 0; c < n; ++c) acc += sec.e_lower[c] * s(c, b);
        out.e_lower[b] = acc;
      }
      return out;
    }
    case Kind::weyl: {
      TaylorValue zinv = 1.0 / z;
      out.e = sec.e.scaled(zinv);
      for (int b = 0; b < n; ++b) out.e_lower[b] = sec.e_lower[b] * zinv;
      return out;
    }
  }
  throw Error("gauge field: unreachable");
}

}  // namespace cartan
