#include "cartan/checks.hpp"

#include <cmath>

#include "cartan/corpus.hpp"
#include "cartan/dressing.hpp"
#include "cartan/fields.hpp"
#include "cartan/oracles.hpp"
#include "cartan/util.hpp"

namespace cartan {

namespace {

double jet_residual(const Jet3<double>& a, const Jet3<double>& b) {
  return std::max({residual(a.j1, b.j1), residual(a.j2, b.j2), residual(a.j3, b.j3)});
}

MobiusFactors random_mobius(Rng& rng, const Mat<double>& eta) {
  int n = eta.rows();
  return {rng.isometry(eta), rng.uniform(0.7, 1.6), rng.vec(n, -0.6, 0.6),
          rng.vec(n, -0.6, 0.6)};
}

HCFactors random_hc(Rng& rng, const Mat<double>& eta) {
  int n = eta.rows();
  return {rng.isometry(eta), rng.uniform(0.7, 1.6), rng.vec(n, -0.6, 0.6)};
}

PSLFactors random_hp(Rng& rng, int n) {
  return {rng.gl(n), rng.vec(n, -0.6, 0.6), Vec<double>(n, 0.0), rng.uniform(0.7, 1.6)};
}

/// Flow oracle for the adjoint (central difference of conjugation by the flow).
JetAlgebra<double> adjoint_flow_oracle(const Jet3<double>& h, const JetAlgebra<double>& a,
                                       const Mat<double>& eta, double step = 1e-5) {
  int n = h.dim();
  auto hbar = invert(h);
  Ten3<double> a2 = algebra_second_order(a, JetFlavor::conformal, eta);
  auto field_jet = [&](double t) {
    Jet3<double> ft = identity_jet3(n, 0.0);
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) {
        ft.j1(k, l) += t * a.a0(k, l);
        for (int m = 0; m < n; ++m) ft.j2(k, l, m) += t * a2(k, l, m);
      }
    auto y = oracles::taylor_variables(n, 3);
    auto inner = oracles::jet_poly_eval(hbar, y);
    auto mid = oracles::jet_poly_eval(ft, inner);
    for (int k = 0; k < n; ++k) mid[k] = mid[k] + t * a.a_m1[k];
    return oracles::jet_poly_eval(h, mid);
  };
  auto plus = field_jet(step), minus = field_jet(-step);
  JetAlgebra<double> b = zero_algebra(n, 0.0);
  Ten3<double> b2(n, n, n, 0.0);
  for (int k = 0; k < n; ++k) {
    std::vector<int> al(n, 0);
    b.a_m1[k] = (plus[k].coeff(al) - minus[k].coeff(al)) / (2 * step);
    for (int l = 0; l < n; ++l) {
      std::vector<int> a1(n, 0);
      a1[l] = 1;
      b.a0(k, l) = (plus[k].partial(a1) - minus[k].partial(a1)) / (2 * step);
      for (int m = 0; m < n; ++m) {
        std::vector<int> a2i(n, 0);
        a2i[l] += 1;
        a2i[m] += 1;
        b2(k, l, m) = (plus[k].partial(a2i) - minus[k].partial(a2i)) / (2 * step);
      }
    }
  }
  for (int m = 0; m < n; ++m) {
    double tr = 0.0;
    for (int r = 0; r < n; ++r) tr += b2(r, r, m);
    b.a_p1[m] = -tr / n;
  }
  return b;
}

double algebra_residual(const JetAlgebra<double>& a, const JetAlgebra<double>& b) {
  double scale = std::max({1.0, max_abs(a), max_abs(b)});
  return max_abs(a - b) / scale;
}

}  // namespace

std::vector<CheckRecord> group_checks(int n, int samples, std::uint64_t seed) {
  std::vector<CheckRecord> out;
  Rng rng(seed);
  Mat<double> eta = flat_eta(n, Signature::lorentzian);

  // jet composition and inversion against the polynomial oracle
  {
    double worst = 0.0, worst_assoc = 0.0, worst_inv = 0.0;
    for (int rep = 0; rep < samples; ++rep) {
      auto f = oracles::random_jet3(rng, n);
      auto g = oracles::random_jet3(rng, n);
      worst = std::max(worst, jet_residual(compose(f, g), oracles::compose_oracle(f, g)));
      auto h = oracles::random_jet3(rng, n);
      worst_assoc = std::max(
          worst_assoc, jet_residual(compose(compose(f, g), h), compose(f, compose(g, h))));
      worst_inv =
          std::max(worst_inv, jet_residual(compose(f, invert(f)), identity_jet3(n, 0.0)));
    }
    out.push_back(make_check("jet composition vs polynomial oracle", samples, worst, 1e-12));
    out.push_back(make_check("jet composition associativity", samples, worst_assoc, 1e-11));
    out.push_back(make_check("jet inversion round trip", samples, worst_inv, 1e-11));
  }

  // closed-form group laws against matrix refactorization
  {
    double worst_h = 0.0, worst_full = 0.0, worst_rebuild = 0.0;
    int used = 0;
    for (int rep = 0; rep < samples; ++rep) {
      HCFactors a = random_hc(rng, eta), b = random_hc(rng, eta);
      HCFactors closed = hc_law_closed(a, b);
      MobiusFactors ref = refactor_mobius(hc_matrix(a, eta) * hc_matrix(b, eta), eta);
      worst_h = std::max({worst_h, residual(closed.S, ref.S), scaled_residual(closed.z, ref.z),
                          residual(closed.r, ref.r)});

      MobiusFactors fa = random_mobius(rng, eta), fb = random_mobius(rng, eta);
      try {
        MobiusFactors closed_full = mobius_law_closed(fa, fb, eta);
        Mat<double> prod = mobius_matrix(fa, eta) * mobius_matrix(fb, eta);
        MobiusFactors ref_full = refactor_mobius(prod, eta);
        worst_full = std::max({worst_full, residual(closed_full.S, ref_full.S),
                               scaled_residual(closed_full.z, ref_full.z),
                               residual(closed_full.t, ref_full.t),
                               residual(closed_full.r, ref_full.r)});
        worst_rebuild = std::max(worst_rebuild, residual(mobius_matrix(closed_full, eta), prod));
        ++used;
      } catch (const DomainError&) {
        // non-decomposable draw
      }
    }
    out.push_back(
        make_check("homogeneous closed law vs refactorization", samples, worst_h, 1e-11));
    out.push_back(make_check("full group closed law vs refactorization", used, worst_full, 1e-11));
    out.push_back(make_check("closed law rebuilds the product matrix", used, worst_rebuild, 1e-10));
  }

  // jet homomorphisms against the action oracles
  {
    double worst_oracle = 0.0, worst_hom = 0.0, worst_proj = 0.0, worst_proj_hom = 0.0;
    int count = std::max(1, samples / 2);
    for (int rep = 0; rep < count; ++rep) {
      HCFactors a = random_hc(rng, eta), b = random_hc(rng, eta);
      auto oracle =
          oracles::jet_from_taylor(oracles::mobius_action_taylor(a.S, a.z, a.r, eta, 3));
      auto jet = conf_jet_of(a, eta);
      worst_oracle = std::max({worst_oracle, residual(jet.j1, oracle.j1),
                               residual(jet.j2, oracle.j2)});
      auto lhs = conf_jet_of(hc_law_closed(a, b), eta);
      auto rhs = compose(conf_jet_of(a, eta), conf_jet_of(b, eta));
      worst_hom = std::max({worst_hom, residual(lhs.j1, rhs.j1), residual(lhs.j2, rhs.j2)});

      PSLFactors pa = random_hp(rng, n), pb = random_hp(rng, n);
      auto poracle = oracles::jet_from_taylor(oracles::psl_action_taylor(pa.S, pa.b, pa.d, 3));
      auto pjet = proj_jet_of(pa);
      worst_proj = std::max({worst_proj, residual(pjet.j1, poracle.j1),
                             residual(pjet.j2, poracle.j2),
                             residual(proj_jet3_of(pa).j3, poracle.j3)});
      PSLFactors prod = refactor_psl(psl_matrix(pa) * psl_matrix(pb));
      auto plhs = proj_jet_of(prod);
      auto prhs = compose(proj_jet_of(pa), proj_jet_of(pb));
      worst_proj_hom =
          std::max({worst_proj_hom, residual(plhs.j1, prhs.j1), residual(plhs.j2, prhs.j2)});
    }
    out.push_back(make_check("conformal jets match the action oracle", count, worst_oracle, 1e-10));
    out.push_back(make_check("conformal jet map is a homomorphism", count, worst_hom, 1e-10));
    out.push_back(make_check("projective jets match the action oracle", count, worst_proj, 1e-10));
    out.push_back(
        make_check("projective jet map is a homomorphism", count, worst_proj_hom, 1e-10));
  }

  // adjoint representation: closed form vs flow and matrix conjugation
  {
    double worst_flow = 0.0, worst_matrix = 0.0, worst_rep = 0.0, worst_mc = 0.0;
    int count = std::max(1, samples / 4);
    for (int rep = 0; rep < count; ++rep) {
      auto p = oracles::random_conformal(rng, eta);
      auto h3 = prolong3(p.h1, p.hb, JetFlavor::conformal, eta);
      auto a = oracles::random_conformal_algebra(rng, eta);
      auto closed = adjoint(h3, a, eta);
      worst_flow = std::max(worst_flow, algebra_residual(closed, adjoint_flow_oracle(h3, a, eta)));

      HCFactors h{p.S, p.z, p.hb};
      Mat<double> hm = hc_matrix(h, eta);
      auto via_matrix =
          conformal_algebra_from_matrix(hm * conformal_algebra_matrix(a, eta) * inverse(hm));
      worst_matrix = std::max(worst_matrix, algebra_residual(closed, via_matrix));

      auto q = oracles::random_conformal(rng, eta);
      auto g3 = prolong3(q.h1, q.hb, JetFlavor::conformal, eta);
      auto hg = compose(h3, g3);
      hg.tag = JetFlavor::conformal;
      worst_rep = std::max(worst_rep,
                           algebra_residual(adjoint(hg, a, eta), adjoint(h3, adjoint(g3, a, eta), eta)));

      // Maurer-Cartan against the finite-difference path oracle
      auto xi = oracles::random_conformal_algebra(rng, eta).a0;
      Vec<double> dhb = rng.vec(n, -0.6, 0.6);
      Mat<double> dh1 = xi * p.h1;
      auto mc = maurer_cartan(p.h1, p.hb, dh1, dhb);
      double t = 1e-5;
      auto path = [&](double tt) {
        Mat<double> h1t = expm(xi.scaled(tt)) * p.h1;
        Vec<double> hbt = p.hb;
        for (int i = 0; i < n; ++i) hbt[i] += tt * dhb[i];
        return prolong2(h1t, hbt, JetFlavor::conformal, eta);
      };
      auto h2 = prolong2(p.h1, p.hb, JetFlavor::conformal, eta);
      auto plus = compose(invert(h2), path(t));
      auto minus = compose(invert(h2), path(-t));
      Vec<double> pp = recover_hb(plus, JetFlavor::conformal);
      Vec<double> pm = recover_hb(minus, JetFlavor::conformal);
      double local = 0.0;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j)
          local = std::max(local, std::abs((plus.j1(i, j) - minus.j1(i, j)) / (2 * t) -
                                           mc.a0(i, j)));
        local = std::max(local, std::abs((pp[i] - pm[i]) / (2 * t) - mc.a_p1[i]));
      }
      worst_mc = std::max(worst_mc, local);
    }
    out.push_back(make_check("adjoint closed form vs conjugation flow", count, worst_flow, 1e-5));
    out.push_back(
        make_check("adjoint closed form vs matrix conjugation", count, worst_matrix, 1e-10));
    out.push_back(make_check("adjoint is a representation", count, worst_rep, 1e-9));
    out.push_back(make_check("maurer-cartan vs path composition", count, worst_mc, 1e-6));
  }

  return out;
}

namespace {

struct MetricContext {
  const MetricSpec& spec;
  Mat<double> eta;
  std::vector<Point> points;
};

/// Worst dressed-pipeline invariance defect over gauge draws at fixed points.
double invariance_sweep(const MetricContext& ctx, Flavor flavor, GaugeField::Kind kind,
                        int fields, Rng& rng) {
  int n = ctx.spec.dimension;
  // pre-draw the gauge fields so the RNG stream is scheduling-independent
  std::vector<GaugeField> draws;
  for (int i = 0; i < fields; ++i)
    draws.push_back(random_gauge_field(rng, kind, n, ctx.eta, 3));
  std::vector<double> worst(ctx.points.size(), 0.0);
  parallel_for(static_cast<int>(ctx.points.size()), [&](int pi) {
    BaseGeometry base = base_geometry(*ctx.spec.metric, ctx.points[pi], flavor);
    SectionJet sec = ctx.spec.section(base.metric, flavor, ctx.points[pi]);
    MatrixConnection reference = run_dressing(base, sec, ctx.eta).dressed;
    for (const auto& g : draws) {
      MatrixConnection moved = run_dressing(base, g.apply_to_section(sec), ctx.eta).dressed;
      worst[pi] = std::max(worst[pi], connection_residual(moved, reference));
    }
  });
  double w = 0.0;
  for (double v : worst) w = std::max(w, v);
  return w;
}

}  // namespace

std::vector<CheckRecord> metric_checks(const MetricSpec& spec, int points, int gauge_samples,
                                       std::uint64_t seed, double tol_override) {
  std::vector<CheckRecord> out;
  Rng rng(seed);
  int n = spec.dimension;
  MetricContext ctx{spec, flat_eta(n, spec.signature), spec.sample_points(points)};

  auto add = [&](std::string name, int samples, double residual, double tol) {
    out.push_back(make_check(std::move(name), samples,
                             residual, tol_override > 0 ? tol_override : tol));
  };

  // first structure identity, both flavors, spec section + random sections
  {
    double worst = 0.0;
    for (const Point& x : ctx.points) {
      MetricData m = eval_metric(*spec.metric, x);
      for (Flavor flavor : {Flavor::conformal, Flavor::projective}) {
        SectionJet sec = spec.section(m, flavor, x);
        worst = std::max(worst, canonical_form_identity_defect(sec, ctx.eta));
        SectionJet rnd = random_section(rng, n, 3, flavor);
        worst = std::max(worst, canonical_form_identity_defect(rnd, ctx.eta));
      }
    }
    add("first structure identity", 4 * points, worst, 1e-10);
  }

  // normality and the detector probe
  {
    double torsion = 0.0, ktrace = 0.0, response = 1e300;
    for (const Point& x : ctx.points) {
      for (Flavor flavor : {Flavor::conformal, Flavor::projective}) {
        BaseGeometry base = base_geometry(*spec.metric, x, flavor);
        SectionJet sec = spec.section(base.metric, flavor, x);
        NormalityReport rep = check_normality(base, sec, ctx.eta);
        torsion = std::max(torsion, rep.torsion_norm);
        ktrace = std::max(ktrace, rep.ricci_trace_norm);
        NormalityReport probe = check_normality_perturbed(base, sec, ctx.eta, 0.1);
        response = std::min(response, probe.ricci_trace_norm);
      }
    }
    add("torsion of the normal connections", 2 * points, torsion, 1e-8);
    add("curvature trace of the normal connections", 2 * points, ktrace, 1e-8);
    out.push_back(make_detector("normality detector responds to a perturbation", 2 * points,
                                response, 1e-3));
  }

  // representation consistency
  {
    double worst = 0.0;
    for (const Point& x : ctx.points) {
      for (Flavor flavor : {Flavor::conformal, Flavor::projective}) {
        BaseGeometry base = base_geometry(*spec.metric, x, flavor);
        SectionJet sec = spec.section(base.metric, flavor, x);
        for (int a = 0; a < n; ++a) sec.e_lower[a] += random_taylor(rng, n, 3, 0.4);
        MatrixConnection direct = normal_connection_matrix(base, sec, ctx.eta);
        MatrixConnection hom =
            matrix_from_graded(normal_connection_graded(base, sec, ctx.eta), ctx.eta);
        worst = std::max(worst, connection_residual(direct, hom));
      }
    }
    add("matrix and graded representations agree", 2 * points, worst, 1e-11);
  }

  // equivariance under constant subgroup elements and base dependence
  {
    double worst_eq = 0.0, worst_pi = 0.0;
    for (const Point& x : ctx.points) {
      for (Flavor flavor : {Flavor::conformal, Flavor::projective}) {
        BaseGeometry base = base_geometry(*spec.metric, x, flavor);
        SectionJet sec = spec.section(base.metric, flavor, x);
        for (int a = 0; a < n; ++a) sec.e_lower[a] += random_taylor(rng, n, 3, 0.3);
        for (int rep = 0; rep < 3; ++rep) {
          Mat<double> h1;
          Vec<double> hb = rng.vec(n, -0.5, 0.5);
          Mat<double> hmat;
          if (flavor == Flavor::conformal) {
            HCFactors h{rng.isometry(ctx.eta), rng.uniform(0.7, 1.5), hb};
            h1 = h.S.scaled(1.0 / h.z);
            hmat = hc_matrix(h, ctx.eta);
          } else {
            PSLFactors h{rng.gl(n), hb, Vec<double>(n, 0.0), rng.uniform(0.8, 1.3)};
            h1 = h.S.scaled(1.0 / h.d);
            for (int i = 0; i < n; ++i) hb[i] = h.b[i] / h.d;
            hmat = psl_matrix(h);
          }
          worst_eq = std::max(worst_eq,
                              check_equivariance(base, sec, h1, hb, hmat, ctx.eta));
          SectionJet moved = translate_section(sec, h1, hb);
          PiExtraction pe =
              extract_pi(normal_connection_graded(base, moved, ctx.eta), moved, ctx.eta);
          worst_pi = std::max({worst_pi, residual(pe.pi1, base.pi.pi1),
                               residual(pe.pi2, base.pi.pi2)});
        }
      }
    }
    add("equivariance under constant frame translations", 6 * points, worst_eq, 1e-9);
    add("base coefficients invariant on the fiber", 6 * points, worst_pi, 1e-10);
  }

  // dressing pipeline
  {
    double content = 0.0, stage1 = 0.0, e_indep = 0.0;
    for (const Point& x : ctx.points) {
      for (Flavor flavor : {Flavor::conformal, Flavor::projective}) {
        BaseGeometry base = base_geometry(*spec.metric, x, flavor);
        SectionJet plain = spec.section(base.metric, flavor, x);
        SectionJet decorated = plain;
        for (int a = 0; a < n; ++a) decorated.e_lower[a] += random_taylor(rng, n, 3, 0.4);
        DressedPipeline pipe = run_dressing(base, decorated, ctx.eta);
        content = std::max(content,
                           connection_residual(pipe.dressed, expected_dressed(base, flavor)));
        stage1 = std::max(stage1, verify_stage1(pipe, base, decorated));
        e_indep = std::max(e_indep, connection_residual(
                                        pipe.dressed, run_dressing(base, plain, ctx.eta).dressed));
      }
    }
    add("dressed connection carries the base tensors", 2 * points, content, 1e-10);
    add("stage-1 connection blocks", 2 * points, stage1, 1e-9);
    add("dressed connection ignores the covector slot", 2 * points, e_indep, 1e-9);
  }

  // gauge invariance of the dressed connection
  {
    MetricContext small{spec, ctx.eta, ctx.points};
    double worst = 0.0;
    worst = std::max(worst, invariance_sweep(small, Flavor::conformal,
                                             GaugeField::Kind::special_conformal,
                                             gauge_samples, rng));
    worst = std::max(worst, invariance_sweep(small, Flavor::conformal,
                                             GaugeField::Kind::lorentz, gauge_samples, rng));
    worst = std::max(worst, invariance_sweep(small, Flavor::projective,
                                             GaugeField::Kind::projective_covector,
                                             gauge_samples, rng));
    worst = std::max(worst, invariance_sweep(small, Flavor::projective,
                                             GaugeField::Kind::projective_gl,
                                             gauge_samples, rng));
    add("dressed connection gauge invariance", 4 * gauge_samples * points, worst, 1e-9);
  }

  // flat-model pipeline reproduces the Levi-Civita coefficients
  {
    double worst = 0.0;
    for (const Point& x : ctx.points) {
      MetricData m = eval_metric(*spec.metric, x);
      Ten3<TaylorValue> gamma = christoffel(m);
      SectionJet sec = orthonormal_section(m, Flavor::conformal);
      MatrixConnection conn = poincare_connection(m, sec);
      TaylorValue zero = sec.e.zero_like();
      Mat<TaylorValue> u(n + 1, n + 1, zero);
      Mat<TaylorValue> theta = sec.theta();
      for (int a = 0; a < n; ++a)
        for (int mu = 0; mu < n; ++mu) u(a, mu) = theta(a, mu);
      u(n, n) = zero + 1.0;
      MatrixConnection dressed = dress(conn, u);
      for (int l = 0; l < n; ++l)
        for (int mu = 0; mu < n; ++mu) {
          worst = std::max(worst,
                           std::abs(dressed.comp[l](mu, n).value() - (mu == l ? 1.0 : 0.0)));
          for (int nu = 0; nu < n; ++nu)
            worst = std::max(worst, std::abs(dressed.comp[l](mu, nu).value() -
                                             gamma(mu, nu, l).value()));
        }
    }
    add("flat-model dressing yields the Levi-Civita coefficients", points, worst, 1e-10);
  }

  // residual Weyl laws and tractor checks
  {
    double law = 0.0, factor = 0.0, tractor_law = 0.0, deriv = 0.0, covariance = 0.0;
    Point x = ctx.points[0];
    std::vector<TaylorValue> scales;
    scales.push_back(exp(TaylorValue::variable(n, 3, 0, x[0])));
    scales.push_back(TaylorValue::variable(n, 3, 1, x[1]) * 0.2 + 1.0);
    for (const auto& z : scales) {
      ResidualTransform rt = ResidualTransform::from_scale(z);
      // projective block laws
      {
        BaseGeometry base = base_geometry(*spec.metric, x, Flavor::projective);
        SectionJet sec = spec.section(base.metric, Flavor::projective, x);
        DressedPipeline pipe = run_dressing(base, sec, ctx.eta);
        ResidualWeylResult res = residual_weyl(pipe.dressed, rt, base, Flavor::projective);
        for (int l = 0; l < n; ++l)
          for (int nu = 0; nu < n; ++nu) {
            for (int mu = 0; mu < n; ++mu) {
              double expect = base.gamma(mu, nu, l).value() +
                              (mu == l ? rt.zeta[nu].value() : 0.0) +
                              (mu == nu ? rt.zeta[l].value() : 0.0);
              law = std::max(law, std::abs(res.gamma_z(mu, nu, l).value() - expect));
            }
            double nabla = rt.zeta[nu].derivative(l).value();
            for (int r = 0; r < n; ++r)
              nabla -= base.gamma(r, l, nu).value() * rt.zeta[r].value();
            double expect = base.schouten(nu, l).value() + nabla -
                            rt.zeta[l].value() * rt.zeta[nu].value();
            law = std::max(law, std::abs(res.schouten_z(nu, l).value() - expect));
          }
      }
      for (Flavor flavor : {Flavor::conformal, Flavor::projective}) {
        BaseGeometry base = base_geometry(*spec.metric, x, flavor);
        SectionJet sec = spec.section(base.metric, flavor, x);
        factor = std::max(factor, weyl_factorization_defect(base, sec, rt, ctx.eta));

        // tractor transformation law against the closed component forms
        int size = flavor == Flavor::conformal ? n + 2 : n + 1;
        TractorField phi0{flavor, {}, TractorStage::stage0};
        for (int i = 0; i < size; ++i) phi0.comp.push_back(random_taylor(rng, n, 3, 0.6));
        TractorField got = tractor_weyl(phi0, weyl_c_matrix(rt, base, flavor));
        double zv = z.value();
        if (flavor == Flavor::projective) {
          double contraction = 0.0;
          for (int nu = 0; nu < n; ++nu)
            contraction += phi0.comp[nu].value() * rt.zeta[nu].value();
          for (int mu = 0; mu < n; ++mu)
            tractor_law = std::max(tractor_law, std::abs(got.comp[mu].value() -
                                                         phi0.comp[mu].value() / zv));
          tractor_law = std::max(tractor_law,
                                 std::abs(got.comp[n].value() -
                                          (phi0.comp[n].value() - contraction) / zv));
        } else {
          double rho = phi0.comp[0].value(), sig = phi0.comp[n + 1].value();
          double zeta_l = 0.0, zeta2 = 0.0;
          Vec<double> zeta_up(n, 0.0);
          for (int mu = 0; mu < n; ++mu) {
            zeta_l += rt.zeta[mu].value() * phi0.comp[1 + mu].value();
            for (int nu = 0; nu < n; ++nu)
              zeta_up[mu] += base.metric.ginv(mu, nu).value() * rt.zeta[nu].value();
          }
          for (int mu = 0; mu < n; ++mu) zeta2 += zeta_up[mu] * rt.zeta[mu].value();
          tractor_law = std::max(tractor_law,
                                 std::abs(got.comp[0].value() -
                                          (rho - zeta_l + 0.5 * sig * zeta2) / zv));
          for (int mu = 0; mu < n; ++mu)
            tractor_law = std::max(tractor_law,
                                   std::abs(got.comp[1 + mu].value() -
                                            (phi0.comp[1 + mu].value() - zeta_up[mu] * sig) / zv));
          tractor_law = std::max(tractor_law, std::abs(got.comp[n + 1].value() - zv * sig));
        }

        // covariant derivative components and Weyl covariance
        MatrixConnection dressed = run_dressing(base, sec, ctx.eta).dressed;
        auto d = tractor_derivative(dressed, phi0);
        if (flavor == Flavor::projective) {
          for (int l = 0; l < n; ++l) {
            for (int mu = 0; mu < n; ++mu) {
              double expect = phi0.comp[mu].derivative(l).value() +
                              (mu == l ? phi0.comp[n].value() : 0.0);
              for (int r = 0; r < n; ++r)
                expect += base.gamma(mu, r, l).value() * phi0.comp[r].value();
              deriv = std::max(deriv, std::abs(d[l][mu].value() - expect));
            }
            double expect = phi0.comp[n].derivative(l).value();
            for (int r = 0; r < n; ++r)
              expect += base.schouten(r, l).value() * phi0.comp[r].value();
            deriv = std::max(deriv, std::abs(d[l][n].value() - expect));
          }
        } else {
          for (int l = 0; l < n; ++l) {
            double expect0 = phi0.comp[0].derivative(l).value();
            for (int r = 0; r < n; ++r)
              expect0 += base.schouten(r, l).value() * phi0.comp[1 + r].value();
            deriv = std::max(deriv, std::abs(d[l][0].value() - expect0));
            for (int mu = 0; mu < n; ++mu) {
              double expect = phi0.comp[1 + mu].derivative(l).value() +
                              (mu == l ? phi0.comp[0].value() : 0.0);
              for (int r = 0; r < n; ++r) {
                expect += base.gamma(mu, r, l).value() * phi0.comp[1 + r].value();
                expect += base.metric.ginv(mu, r).value() * base.schouten(r, l).value() *
                          phi0.comp[n + 1].value();
              }
              deriv = std::max(deriv, std::abs(d[l][1 + mu].value() - expect));
            }
            double expectn = phi0.comp[n + 1].derivative(l).value();
            for (int r = 0; r < n; ++r)
              expectn += base.metric.g(r, l).value() * phi0.comp[1 + r].value();
            deriv = std::max(deriv, std::abs(d[l][n + 1].value() - expectn));
          }
        }
        Mat<TaylorValue> c = weyl_c_matrix(rt, base, flavor);
        ResidualWeylResult res = residual_weyl(dressed, rt, base, flavor);
        auto lhs = tractor_derivative(res.transformed, got);
        auto d0 = tractor_derivative(dressed, phi0);
        Mat<TaylorValue> cinv = inverse(c);
        for (int l = 0; l < n; ++l)
          for (int i = 0; i < size; ++i) {
            TaylorValue acc = phi0.comp[0] - phi0.comp[0];
            for (int j = 0; j < size; ++j) acc += cinv(i, j) * d0[l][j];
            covariance = std::max(covariance, std::abs(lhs[l][i].value() - acc.value()));
          }
      }
    }
    add("residual dilation block laws", 2, law, 1e-9);
    add("dressing factorization under dilations", 4, factor, 1e-11);
    add("tractor dilation law", 4, tractor_law, 1e-12);
    add("tractor derivative components", 4, deriv, 1e-11);
    add("tractor derivative dilation covariance", 4, covariance, 1e-9);
  }

  return out;
}

RunReport run_verify(const MetricSpec& spec, std::uint64_t seed, int points, int gauge_samples,
                     double tol_override) {
  RunReport report;
  report.command = "verify";
  report.arguments["spec"] = spec.name;
  report.arguments["seed"] = seed;
  report.arguments["points"] = points;
  report.arguments["gauge_samples"] = gauge_samples;
  if (tol_override > 0) report.arguments["tol"] = tol_override;
  report.checks = metric_checks(spec, points, gauge_samples, seed, tol_override);
  return report;
}

namespace {

MetricSpec spec_from_corpus(const CorpusEntry& entry) {
  MetricSpec spec;
  spec.name = entry.name;
  spec.dimension = entry.metric->dimension();
  spec.signature = entry.metric->signature();
  spec.base_point = entry.base_point;
  spec.sample_halfwidth = entry.sample_halfwidth;
  spec.metric = entry.metric;
  return spec;
}

}  // namespace

std::vector<CriterionResult> acceptance_suite(std::uint64_t seed) {
  std::vector<CriterionResult> out;

  // 1: jet composition against the polynomial oracle
  {
    CriterionResult c{1, "jet composition matches the polynomial oracle", {}};
    for (int n : {3, 4}) {
      Rng rng(seed + n);
      double worst2 = 0.0, worst3 = 0.0, assoc = 0.0;
      for (int rep = 0; rep < 200; ++rep) {
        auto f = oracles::random_jet3(rng, n);
        auto g = oracles::random_jet3(rng, n);
        auto oracle = oracles::compose_oracle(f, g);
        auto got = compose(f, g);
        worst2 = std::max({worst2, residual(got.j1, oracle.j1), residual(got.j2, oracle.j2)});
        worst3 = std::max(worst3, residual(got.j3, oracle.j3));
        auto h = oracles::random_jet3(rng, n);
        assoc = std::max(assoc,
                         jet_residual(compose(compose(f, g), h), compose(f, compose(g, h))));
      }
      std::string dim = "n=" + std::to_string(n);
      c.records.push_back(make_check("order-2 composition (" + dim + ")", 200, worst2, 1e-12));
      c.records.push_back(make_check("order-3 composition (" + dim + ")", 200, worst3, 1e-12));
      c.records.push_back(make_check("associativity (" + dim + ")", 200, assoc, 1e-11));
    }
    out.push_back(std::move(c));
  }

  // 2: closed-form group laws vs matrix refactorization
  {
    CriterionResult c{2, "closed-form group laws match matrix refactorization", {}};
    Rng rng(seed + 11);
    Mat<double> eta = flat_eta(4, Signature::lorentzian);
    double worst_h = 0.0, worst_full = 0.0;
    int used = 0;
    for (int rep = 0; rep < 200; ++rep) {
      HCFactors a = random_hc(rng, eta), b = random_hc(rng, eta);
      HCFactors closed = hc_law_closed(a, b);
      MobiusFactors ref = refactor_mobius(hc_matrix(a, eta) * hc_matrix(b, eta), eta);
      worst_h = std::max({worst_h, residual(closed.S, ref.S),
                          scaled_residual(closed.z, ref.z), residual(closed.r, ref.r)});
      MobiusFactors fa = random_mobius(rng, eta), fb = random_mobius(rng, eta);
      try {
        MobiusFactors closed_full = mobius_law_closed(fa, fb, eta);
        MobiusFactors ref_full =
            refactor_mobius(mobius_matrix(fa, eta) * mobius_matrix(fb, eta), eta);
        worst_full = std::max({worst_full, scaled_residual(closed_full.z, ref_full.z),
                               residual(closed_full.t, ref_full.t),
                               residual(closed_full.r, ref_full.r)});
        ++used;
      } catch (const DomainError&) {
      }
    }
    c.records.push_back(make_check("homogeneous subgroup law", 200, worst_h, 1e-11));
    c.records.push_back(make_check("full group scalar/vector factors", used, worst_full, 1e-11));
    out.push_back(std::move(c));
  }

  // 3: homomorphism fidelity
  {
    CriterionResult c{3, "jet homomorphisms match the action oracles", {}};
    Rng rng(seed + 23);
    Mat<double> eta = flat_eta(4, Signature::lorentzian);
    double conf_oracle = 0.0, conf_hom = 0.0, proj_oracle = 0.0, proj_hom = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
      HCFactors a = random_hc(rng, eta), b = random_hc(rng, eta);
      auto oracle =
          oracles::jet_from_taylor(oracles::mobius_action_taylor(a.S, a.z, a.r, eta, 2));
      auto jet = conf_jet_of(a, eta);
      conf_oracle = std::max({conf_oracle, residual(jet.j1, oracle.j1),
                              residual(jet.j2, oracle.j2)});
      auto lhs = conf_jet_of(hc_law_closed(a, b), eta);
      auto rhs = compose(conf_jet_of(a, eta), conf_jet_of(b, eta));
      conf_hom = std::max({conf_hom, residual(lhs.j1, rhs.j1), residual(lhs.j2, rhs.j2)});

      PSLFactors pa = random_hp(rng, 4), pb = random_hp(rng, 4);
      auto poracle = oracles::jet_from_taylor(oracles::psl_action_taylor(pa.S, pa.b, pa.d, 2));
      auto pjet = proj_jet_of(pa);
      proj_oracle = std::max({proj_oracle, residual(pjet.j1, poracle.j1),
                              residual(pjet.j2, poracle.j2)});
      PSLFactors prod = refactor_psl(psl_matrix(pa) * psl_matrix(pb));
      auto plhs = proj_jet_of(prod);
      auto prhs = compose(proj_jet_of(pa), proj_jet_of(pb));
      proj_hom = std::max({proj_hom, residual(plhs.j1, prhs.j1), residual(plhs.j2, prhs.j2)});
    }
    c.records.push_back(make_check("conformal jets vs action 2-jets", 100, conf_oracle, 1e-10));
    c.records.push_back(make_check("conformal homomorphism", 100, conf_hom, 1e-10));
    c.records.push_back(make_check("projective jets vs action 2-jets", 100, proj_oracle, 1e-10));
    c.records.push_back(make_check("projective homomorphism", 100, proj_hom, 1e-10));
    out.push_back(std::move(c));
  }

  // 4: canonical form identity
  {
    CriterionResult c{4, "first structure identity for random sections", {}};
    Rng rng(seed + 31);
    for (Flavor flavor : {Flavor::conformal, Flavor::projective}) {
      double worst = 0.0;
      for (int n : {3, 4}) {
        Mat<double> eta = flat_eta(n, Signature::lorentzian);
        for (int rep = 0; rep < 10; ++rep) {
          SectionJet sec = random_section(rng, n, 3, flavor);
          worst = std::max(worst, canonical_form_identity_defect(sec, eta));
        }
      }
      c.records.push_back(make_check(flavor == Flavor::conformal ? "conformal sections"
                                                                 : "projective sections",
                                     20, worst, 1e-10));
    }
    out.push_back(std::move(c));
  }

  // 5: normality across the corpus plus the detector probe
  {
    CriterionResult c{5, "normal connections have vanishing torsion and trace", {}};
    double torsion = 0.0, ktrace = 0.0, response = 1e300;
    for (const auto& entry : standard_corpus()) {
      int n = entry.metric->dimension();
      Mat<double> eta = flat_eta(n, entry.metric->signature());
      for (const Point& x : sample_cloud(entry, 10)) {
        for (Flavor flavor : {Flavor::conformal, Flavor::projective}) {
          BaseGeometry base = base_geometry(*entry.metric, x, flavor);
          SectionJet sec = orthonormal_section(base.metric, flavor);
          NormalityReport rep = check_normality(base, sec, eta);
          torsion = std::max(torsion, rep.torsion_norm);
          ktrace = std::max(ktrace, rep.ricci_trace_norm);
        }
      }
      Point x0 = sample_cloud(entry, 1)[0];
      for (Flavor flavor : {Flavor::conformal, Flavor::projective}) {
        BaseGeometry base = base_geometry(*entry.metric, x0, flavor);
        SectionJet sec = orthonormal_section(base.metric, flavor);
        response = std::min(
            response, check_normality_perturbed(base, sec, eta, 0.1).ricci_trace_norm);
      }
    }
    int samples = static_cast<int>(standard_corpus().size()) * 20;
    c.records.push_back(make_check("torsion norm", samples, torsion, 1e-8));
    c.records.push_back(make_check("curvature trace norm", samples, ktrace, 1e-8));
    c.records.push_back(make_detector("perturbation probe response", 14, response, 1e-3));
    out.push_back(std::move(c));
  }

  // 6: representation consistency
  {
    CriterionResult c{6, "matrix and graded-jet representations agree", {}};
    Rng rng(seed + 41);
    double worst = 0.0;
    int samples = 0;
    for (const auto& entry : standard_corpus()) {
      int n = entry.metric->dimension();
      Mat<double> eta = flat_eta(n, entry.metric->signature());
      for (const Point& x : sample_cloud(entry, 3)) {
        for (Flavor flavor : {Flavor::conformal, Flavor::projective}) {
          BaseGeometry base = base_geometry(*entry.metric, x, flavor);
          SectionJet sec = orthonormal_section(base.metric, flavor,
                                               random_covector_field(rng, n, 3));
          MatrixConnection direct = normal_connection_matrix(base, sec, eta);
          MatrixConnection hom =
              matrix_from_graded(normal_connection_graded(base, sec, eta), eta);
          worst = std::max(worst, connection_residual(direct, hom));
          ++samples;
        }
      }
    }
    c.records.push_back(make_check("termwise matrix assembly vs homomorphism", samples, worst,
                                   1e-11));
    out.push_back(std::move(c));
  }

  // 7: base coefficients are functions of the base only
  {
    CriterionResult c{7, "fiber translations leave the base coefficients fixed", {}};
    Rng rng(seed + 53);
    for (Flavor flavor : {Flavor::conformal, Flavor::projective}) {
      double worst = 0.0;
      const char* names[3] = {"conf_flat", "sphere3", "perturb4"};
      for (int rep = 0; rep < 50; ++rep) {
        const auto& entry = corpus_entry(names[rep % 3]);
        int n = entry.metric->dimension();
        Mat<double> eta = flat_eta(n, entry.metric->signature());
        Point x = sample_cloud(entry, (rep % 5) + 1).back();
        BaseGeometry base = base_geometry(*entry.metric, x, flavor);
        SectionJet sec = orthonormal_section(base.metric, flavor,
                                             random_covector_field(rng, n, 3));
        Mat<double> h1;
        Vec<double> hb = rng.vec(n, -0.5, 0.5);
        if (flavor == Flavor::conformal)
          h1 = rng.isometry(eta).scaled(1.0 / rng.uniform(0.7, 1.5));
        else
          h1 = rng.gl(n).scaled(1.0 / rng.uniform(0.8, 1.3));
        SectionJet moved = translate_section(sec, h1, hb);
        PiExtraction pe = extract_pi(normal_connection_graded(base, moved, eta), moved, eta);
        worst = std::max({worst, residual(pe.pi1, base.pi.pi1),
                          residual(pe.pi2, base.pi.pi2)});
      }
      c.records.push_back(make_check(flavor == Flavor::conformal ? "conformal translations"
                                                                 : "projective translations",
                                     50, worst, 1e-10));
    }
    out.push_back(std::move(c));
  }

  // 8: adjoint closed forms
  {
    CriterionResult c{8, "adjoint closed forms match flow and matrix conjugation", {}};
    Rng rng(seed + 61);
    double flow = 0.0, matrix = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
      int n = rep % 2 == 0 ? 3 : 4;
      Mat<double> eta = flat_eta(n, Signature::lorentzian);
      auto p = oracles::random_conformal(rng, eta);
      auto h3 = prolong3(p.h1, p.hb, JetFlavor::conformal, eta);
      auto a = oracles::random_conformal_algebra(rng, eta);
      auto closed = adjoint(h3, a, eta);
      flow = std::max(flow, algebra_residual(closed, adjoint_flow_oracle(h3, a, eta)));
      HCFactors h{p.S, p.z, p.hb};
      Mat<double> hm = hc_matrix(h, eta);
      auto via_matrix =
          conformal_algebra_from_matrix(hm * conformal_algebra_matrix(a, eta) * inverse(hm));
      matrix = std::max(matrix, algebra_residual(closed, via_matrix));
    }
    c.records.push_back(make_check("conjugation-flow derivative", 100, flow, 1e-5));
    c.records.push_back(make_check("matrix adjoint transported through the homomorphism", 100,
                                   matrix, 1e-10));
    out.push_back(std::move(c));
  }

  // 9: reconstruction from the trivializing section
  {
    CriterionResult c{9, "local reconstruction reproduces the assembled connection", {}};
    double worst = 0.0;
    int samples = 0;
    for (const auto& entry : standard_corpus()) {
      if (!entry.conformally_flat_chart) continue;
      int n = entry.metric->dimension();
      Mat<double> eta = flat_eta(n, entry.metric->signature());
      for (const Point& x : sample_cloud(entry, 3)) {
        BaseGeometry base = base_geometry(*entry.metric, x, Flavor::conformal);
        TaylorValue zero = base.metric.zero;
        SectionJet sigma{Mat<TaylorValue>(n, n, zero), Vec<TaylorValue>(n, zero),
                         Flavor::conformal};
        for (int i = 0; i < n; ++i) sigma.e(i, i) = zero + 1.0;
        for (int a = 0; a < n; ++a) sigma.e_lower[a] = -base.upsilon[a];
        SectionJet sec = orthonormal_section(base.metric, Flavor::conformal);
        Mat<TaylorValue> h1 = sec.e;
        Vec<TaylorValue> hb(n, zero);
        for (int b = 0; b < n; ++b) {
          TaylorValue acc = sec.e_lower[b];
          for (int cc = 0; cc < n; ++cc) acc -= sigma.e_lower[cc] * h1(cc, b);
          hb[b] = acc;
        }
        Jet3<TaylorValue> h = prolong3(h1, hb, JetFlavor::conformal, eta);
        GradedConnection rec = reconstruct_local_connection(
            normal_connection_graded(base, sigma, eta), h, eta);
        GradedConnection direct = normal_connection_graded(base, sec, eta);
        worst = std::max(worst, connection_residual(rec, direct));
        ++samples;
      }
    }
    c.records.push_back(
        make_check("chart-identity trivialization, conformally flat charts", samples, worst,
                   1e-9));
    out.push_back(std::move(c));
  }

  // 10: dressing invariance and the flat-model cross-check
  {
    CriterionResult c{10, "dressed connections are gauge invariant", {}};
    Rng rng(seed + 71);
    struct Stage {
      Flavor flavor;
      GaugeField::Kind kind;
      const char* label;
    };
    Stage stages[4] = {
        {Flavor::conformal, GaugeField::Kind::special_conformal, "conformal stage 1"},
        {Flavor::conformal, GaugeField::Kind::lorentz, "conformal stage 0"},
        {Flavor::projective, GaugeField::Kind::projective_covector, "projective stage 1"},
        {Flavor::projective, GaugeField::Kind::projective_gl, "projective stage 0"},
    };
    for (const Stage& st : stages) {
      double worst = 0.0;
      for (const char* name : {"conf_flat", "sphere3"}) {
        const auto& entry = corpus_entry(name);
        MetricSpec spec = spec_from_corpus(entry);
        MetricContext ctx{spec, flat_eta(spec.dimension, spec.signature),
                          spec.sample_points(10)};
        worst = std::max(worst, invariance_sweep(ctx, st.flavor, st.kind, 10, rng));
      }
      c.records.push_back(make_check(st.label, 200, worst, 1e-9));
    }
    // flat-model pipeline against the Levi-Civita coefficients
    double worst = 0.0;
    for (const auto& entry : standard_corpus()) {
      int n = entry.metric->dimension();
      for (const Point& x : sample_cloud(entry, 3)) {
        MetricData m = eval_metric(*entry.metric, x);
        Ten3<TaylorValue> gamma = christoffel(m);
        SectionJet sec = orthonormal_section(m, Flavor::conformal);
        MatrixConnection conn = poincare_connection(m, sec);
        TaylorValue zero = sec.e.zero_like();
        Mat<TaylorValue> u(n + 1, n + 1, zero);
        Mat<TaylorValue> theta = sec.theta();
        for (int a = 0; a < n; ++a)
          for (int mu = 0; mu < n; ++mu) u(a, mu) = theta(a, mu);
        u(n, n) = zero + 1.0;
        MatrixConnection dressed = dress(conn, u);
        for (int l = 0; l < n; ++l)
          for (int mu = 0; mu < n; ++mu)
            for (int nu = 0; nu < n; ++nu)
              worst = std::max(worst, std::abs(dressed.comp[l](mu, nu).value() -
                                               gamma(mu, nu, l).value()));
      }
    }
    c.records.push_back(make_check("flat-model dressing vs Levi-Civita", 21, worst, 1e-10));
    out.push_back(std::move(c));
  }

  // 11: dressed content
  {
    CriterionResult c{11, "dressed connections carry the base tensors", {}};
    Rng rng(seed + 83);
    double conf = 0.0, proj = 0.0;
    int samples = 0;
    for (const auto& entry : standard_corpus()) {
      int n = entry.metric->dimension();
      Mat<double> eta = flat_eta(n, entry.metric->signature());
      for (const Point& x : sample_cloud(entry, 3)) {
        for (Flavor flavor : {Flavor::conformal, Flavor::projective}) {
          BaseGeometry base = base_geometry(*entry.metric, x, flavor);
          SectionJet sec = orthonormal_section(base.metric, flavor,
                                               random_covector_field(rng, n, 3));
          double d = connection_residual(run_dressing(base, sec, eta).dressed,
                                         expected_dressed(base, flavor));
          (flavor == Flavor::conformal ? conf : proj) = std::max(
              flavor == Flavor::conformal ? conf : proj, d);
        }
        ++samples;
      }
    }
    c.records.push_back(make_check("conformal blocks (δ, Γ, P, g)", samples, conf, 1e-10));
    c.records.push_back(make_check("projective blocks (Γ, δ, P)", samples, proj, 1e-10));
    out.push_back(std::move(c));
  }

  // 12: residual dilation laws and tractors
  {
    CriterionResult c{12, "residual dilation and tractor laws", {}};
    MetricSpec spec = spec_from_corpus(corpus_entry("conf_flat"));
    auto records = metric_checks(spec, 2, 0, seed + 91);
    for (auto& r : records) {
      if (r.name == "residual dilation block laws" || r.name == "tractor dilation law" ||
          r.name == "tractor derivative components" ||
          r.name == "dressing factorization under dilations" ||
          r.name == "tractor derivative dilation covariance")
        c.records.push_back(r);
    }
    MetricSpec spec2 = spec_from_corpus(corpus_entry("perturb4"));
    auto records2 = metric_checks(spec2, 2, 0, seed + 92);
    for (auto& r : records2) {
      if (r.name == "residual dilation block laws")
        c.records.push_back(make_check("residual dilation block laws (generic metric)",
                                       r.samples, r.max_residual, r.tolerance));
    }
    out.push_back(std::move(c));
  }

  // 13: determinism of the verify report
  {
    CriterionResult c{13, "verify reports are byte-identical for a fixed seed", {}};
    MetricSpec spec = spec_from_corpus(corpus_entry("flat4"));
    std::string a = run_verify(spec, 42, 3, 2).to_json().dump(2);
    std::string b = run_verify(spec, 42, 3, 2).to_json().dump(2);
    c.records.push_back(make_check("byte-identical JSON", 2, a == b ? 0.0 : 1.0, 0.5));
    out.push_back(std::move(c));
  }

  return out;
}

}  // namespace cartan
