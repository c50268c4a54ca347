#include <doctest.h>

#include <cmath>

#include "cartan/corpus.hpp"
#include "cartan/dressing.hpp"
#include "cartan/fields.hpp"
#include "tests/oracles.hpp"

using namespace cartan;

TEST_SUITE_BEGIN("dressing");

namespace {

SectionJet identity_section(int n, int order, Flavor flavor) {
  TaylorValue zero = TaylorValue::zero(n, order);
  SectionJet sec{Mat<TaylorValue>(n, n, zero), Vec<TaylorValue>(n, zero), flavor};
  for (int i = 0; i < n; ++i) sec.e(i, i) = zero + 1.0;
  return sec;
}

double mat_value_residual(const Mat<TaylorValue>& a, const Mat<TaylorValue>& b) {
  double worst = 0.0, scale = 1.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) {
      scale = std::max({scale, std::abs(a(i, j).value()), std::abs(b(i, j).value())});
      worst = std::max(worst, std::abs(a(i, j).value() - b(i, j).value()));
    }
  return worst / scale;
}

}  // namespace

TEST_CASE("dressing fields on flat space") {
  const auto& entry = corpus_entry("flat4");
  Mat<double> eta = flat_eta(4, Signature::lorentzian);

  SUBCASE("identity section gives identity dressings") {
    for (Flavor flavor : {Flavor::conformal, Flavor::projective}) {
      BaseGeometry base = base_geometry(*entry.metric, {0, 0, 0, 0}, flavor);
      SectionJet sec = identity_section(4, 3, flavor);
      DressingFields u = build_dressings(base, sec, eta);
      int size = flavor == Flavor::conformal ? 6 : 5;
      Mat<TaylorValue> id =
          Mat<TaylorValue>::identity(size, sec.e.zero_like() + 1.0, sec.e.zero_like());
      CHECK(mat_value_residual(u.u1, id) < 1e-14);
      CHECK(mat_value_residual(u.u0, id) < 1e-14);
    }
  }

  SUBCASE("constant covector lands in the stage-1 corner") {
    Rng rng(1);
    Vec<double> c = rng.vec(4, -0.6, 0.6);
    BaseGeometry base = base_geometry(*entry.metric, {0, 0, 0, 0}, Flavor::projective);
    SectionJet sec = identity_section(4, 3, Flavor::projective);
    for (int a = 0; a < 4; ++a) sec.e_lower[a] = sec.e_lower[a] + c[a];
    DressingFields u = build_dressings(base, sec, eta);
    for (int a = 0; a < 4; ++a) CHECK(u.u1(4, a).value() == doctest::Approx(-c[a]));
  }
}

TEST_CASE("dressing field equivariances") {
  Rng rng(2);
  for (const char* name : {"conf_flat", "sphere3"}) {
    const auto& entry = corpus_entry(name);
    int n = entry.metric->dimension();
    Mat<double> eta = flat_eta(n, entry.metric->signature());
    Point x = sample_cloud(entry, 2)[0];
    for (Flavor flavor : {Flavor::conformal, Flavor::projective}) {
      BaseGeometry base = base_geometry(*entry.metric, x, flavor);
      SectionJet sec = orthonormal_section(base.metric, flavor,
                                           random_covector_field(rng, n, 3));
      DressingFields u = build_dressings(base, sec, eta);

      // stage-1 gauge: u1 recomputed from the γ₁-shifted section equals γ₁⁻¹u1
      GaugeField g1 = random_gauge_field(rng,
                                         flavor == Flavor::conformal
                                             ? GaugeField::Kind::special_conformal
                                             : GaugeField::Kind::projective_covector,
                                         n, eta, 3);
      DressingFields u_shift = build_dressings(base, g1.apply_to_section(sec), eta);
      Mat<TaylorValue> expect1 = inverse(g1.matrix(eta)) * u.u1;
      CHECK(mat_value_residual(u_shift.u1, expect1) < 1e-10);
      // ... and leaves u0 alone
      CHECK(mat_value_residual(u_shift.u0, u.u0) < 1e-12);

      // stage-0 gauge: u1 conjugates, u0 picks up the left factor
      GaugeField g0 = random_gauge_field(rng,
                                         flavor == Flavor::conformal
                                             ? GaugeField::Kind::lorentz
                                             : GaugeField::Kind::projective_gl,
                                         n, eta, 3);
      DressingFields u_rot = build_dressings(base, g0.apply_to_section(sec), eta);
      Mat<TaylorValue> g0m = g0.matrix(eta);
      Mat<TaylorValue> g0inv = inverse(g0m);
      CHECK(mat_value_residual(u_rot.u1, g0inv * u.u1 * g0m) < 1e-10);
      CHECK(mat_value_residual(u_rot.u0, g0inv * u.u0) < 1e-10);
    }
  }
}

TEST_CASE("staged dressing equals the combined dressing") {
  Rng rng(3);
  const auto& entry = corpus_entry("perturb4");
  Mat<double> eta = flat_eta(4, Signature::lorentzian);
  Point x = sample_cloud(entry, 2)[1];
  for (Flavor flavor : {Flavor::conformal, Flavor::projective}) {
    BaseGeometry base = base_geometry(*entry.metric, x, flavor);
    SectionJet sec = orthonormal_section(base.metric, flavor,
                                         random_covector_field(rng, 4, 3));
    DressedPipeline pipe = run_dressing(base, sec, eta);
    MatrixConnection combined = dress(pipe.raw, pipe.u.combined());
    CHECK(connection_residual(combined, pipe.dressed) < 1e-11);
  }
}

TEST_CASE("dress shares the gauge-transformation code path") {
  // same inputs through both names must be bit-identical
  Rng rng(4);
  const auto& entry = corpus_entry("conf_flat");
  Mat<double> eta = flat_eta(4, Signature::lorentzian);
  BaseGeometry base = base_geometry(*entry.metric, {0.1, 0, -0.1, 0.2}, Flavor::conformal);
  SectionJet sec = orthonormal_section(base.metric, Flavor::conformal);
  MatrixConnection conn = normal_connection_matrix(base, sec, eta);
  GaugeField g = random_gauge_field(rng, GaugeField::Kind::special_conformal, 4, eta, 3);
  Mat<TaylorValue> gamma = g.matrix(eta);
  MatrixConnection a = dress(conn, gamma);
  MatrixConnection b = transform_connection(conn, gamma);
  for (int l = 0; l < 4; ++l)
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) {
        auto ca = a.comp[l](i, j).coefficients();
        auto cb = b.comp[l](i, j).coefficients();
        REQUIRE(ca.size() == cb.size());
        for (size_t k = 0; k < ca.size(); ++k) CHECK(ca[k] == cb[k]);
      }
}

TEST_CASE("dressed content matches the base tensors") {
  Rng rng(5);
  for (const auto& entry : standard_corpus()) {
    int n = entry.metric->dimension();
    Mat<double> eta = flat_eta(n, entry.metric->signature());
    Point x = sample_cloud(entry, 2)[0];
    for (Flavor flavor : {Flavor::conformal, Flavor::projective}) {
      BaseGeometry base = base_geometry(*entry.metric, x, flavor);
      SectionJet sec = orthonormal_section(base.metric, flavor,
                                           random_covector_field(rng, n, 3));
      DressedPipeline pipe = run_dressing(base, sec, eta);
      CHECK(connection_residual(pipe.dressed, expected_dressed(base, flavor)) < 1e-10);
    }
  }
}

TEST_CASE("stage-1 content") {
  Rng rng(6);
  for (const char* name : {"flat4", "conf_flat", "sphere3"}) {
    const auto& entry = corpus_entry(name);
    int n = entry.metric->dimension();
    Mat<double> eta = flat_eta(n, entry.metric->signature());
    Point x = sample_cloud(entry, 2)[1];
    for (Flavor flavor : {Flavor::conformal, Flavor::projective}) {
      BaseGeometry base = base_geometry(*entry.metric, x, flavor);
      SectionJet sec = orthonormal_section(base.metric, flavor,
                                           random_covector_field(rng, n, 3));
      DressedPipeline pipe = run_dressing(base, sec, eta);
      CHECK(verify_stage1(pipe, base, sec) < 1e-9);
    }
  }
}

TEST_CASE("full-pipeline gauge invariance") {
  Rng rng(7);
  for (const char* name : {"conf_flat", "sphere3", "perturb4"}) {
    const auto& entry = corpus_entry(name);
    int n = entry.metric->dimension();
    Mat<double> eta = flat_eta(n, entry.metric->signature());
    Point x = sample_cloud(entry, 2)[0];
    for (Flavor flavor : {Flavor::conformal, Flavor::projective}) {
      BaseGeometry base = base_geometry(*entry.metric, x, flavor);
      SectionJet sec = orthonormal_section(base.metric, flavor,
                                           random_covector_field(rng, n, 3));
      auto stage1_kind = flavor == Flavor::conformal ? GaugeField::Kind::special_conformal
                                                     : GaugeField::Kind::projective_covector;
      auto stage0_kind = flavor == Flavor::conformal ? GaugeField::Kind::lorentz
                                                     : GaugeField::Kind::projective_gl;
      for (int rep = 0; rep < 4; ++rep) {
        GaugeField g1 = random_gauge_field(rng, stage1_kind, n, eta, 3);
        CHECK(verify_invariance(base, sec, g1, eta) < 1e-9);
        GaugeField g0 = random_gauge_field(rng, stage0_kind, n, eta, 3);
        CHECK(verify_invariance(base, sec, g0, eta) < 1e-9);
      }
    }
  }
}

TEST_CASE("dressed connection is independent of the covector slot") {
  Rng rng(8);
  const auto& entry = corpus_entry("conf_sin");
  Mat<double> eta = flat_eta(4, Signature::lorentzian);
  Point x = sample_cloud(entry, 2)[1];
  for (Flavor flavor : {Flavor::conformal, Flavor::projective}) {
    BaseGeometry base = base_geometry(*entry.metric, x, flavor);
    SectionJet plain = orthonormal_section(base.metric, flavor);
    SectionJet decorated = orthonormal_section(base.metric, flavor,
                                               random_covector_field(rng, 4, 3));
    MatrixConnection a = run_dressing(base, plain, eta).dressed;
    MatrixConnection b = run_dressing(base, decorated, eta).dressed;
    CHECK(connection_residual(a, b) < 1e-9);
  }
}

TEST_CASE("residual weyl transformation") {
  Rng rng(9);

  SUBCASE("unit scale is the identity") {
    const auto& entry = corpus_entry("conf_flat");
    Mat<double> eta = flat_eta(4, Signature::lorentzian);
    BaseGeometry base = base_geometry(*entry.metric, {0.1, 0.2, 0, 0}, Flavor::projective);
    SectionJet sec = orthonormal_section(base.metric, Flavor::projective);
    DressedPipeline pipe = run_dressing(base, sec, eta);
    ResidualTransform rt = ResidualTransform::from_scale(TaylorValue::constant(4, 3, 1.0));
    ResidualWeylResult res = residual_weyl(pipe.dressed, rt, base, Flavor::projective);
    CHECK(connection_residual(res.transformed, pipe.dressed) < 1e-13);
  }

  SUBCASE("projective transformation laws for the blocks") {
    for (const char* name : {"flat4", "conf_flat", "perturb4"}) {
      const auto& entry = corpus_entry(name);
      int n = entry.metric->dimension();
      Mat<double> eta = flat_eta(n, entry.metric->signature());
      Point x = sample_cloud(entry, 2)[0];
      BaseGeometry base = base_geometry(*entry.metric, x, Flavor::projective);
      SectionJet sec = orthonormal_section(base.metric, Flavor::projective);
      DressedPipeline pipe = run_dressing(base, sec, eta);
      // z = exp(x0) and z = 1 + 0.2 x1 as Taylor data at x
      std::vector<TaylorValue> scales;
      scales.push_back(exp(TaylorValue::variable(n, 3, 0, x[0])));
      scales.push_back(TaylorValue::variable(n, 3, 1, x[1]) * 0.2 + 1.0);
      for (const auto& z : scales) {
        ResidualTransform rt = ResidualTransform::from_scale(z);
        ResidualWeylResult res = residual_weyl(pipe.dressed, rt, base, Flavor::projective);
        double worst = 0.0;
        for (int l = 0; l < n; ++l)
          for (int nu = 0; nu < n; ++nu) {
            // Γ^Z = Γ + δ^μ_λ ζ_ν + δ^μ_ν ζ_λ
            for (int mu = 0; mu < n; ++mu) {
              double expect = base.gamma(mu, nu, l).value() +
                              (mu == l ? rt.zeta[nu].value() : 0.0) +
                              (mu == nu ? rt.zeta[l].value() : 0.0);
              worst = std::max(worst, std::abs(res.gamma_z(mu, nu, l).value() - expect));
            }
            // P^Z = P + ∇_λζ_ν − ζ_λζ_ν
            double nabla = rt.zeta[nu].derivative(l).value();
            for (int r = 0; r < n; ++r)
              nabla -= base.gamma(r, l, nu).value() * rt.zeta[r].value();
            double expect = base.schouten(nu, l).value() + nabla -
                            rt.zeta[l].value() * rt.zeta[nu].value();
            worst = std::max(worst, std::abs(res.schouten_z(nu, l).value() - expect));
          }
        CHECK(worst < 1e-9);
      }
    }
  }

  SUBCASE("dressing factorization under the residual direction") {
    for (const char* name : {"conf_flat", "sphere3"}) {
      const auto& entry = corpus_entry(name);
      int n = entry.metric->dimension();
      Mat<double> eta = flat_eta(n, entry.metric->signature());
      Point x = sample_cloud(entry, 2)[1];
      for (Flavor flavor : {Flavor::conformal, Flavor::projective}) {
        BaseGeometry base = base_geometry(*entry.metric, x, flavor);
        SectionJet sec = orthonormal_section(base.metric, flavor);
        TaylorValue z = random_scale_field(rng, n, 3);
        ResidualTransform rt = ResidualTransform::from_scale(z);
        CHECK(weyl_factorization_defect(base, sec, rt, eta) < 1e-11);
      }
    }
  }

  SUBCASE("one-step dressing of the dilation-transformed connection") {
    // dressing Z⁻¹ϖZ + Z⁻¹dZ with the transformed dressing field reproduces
    // C⁻¹ϖ₀C + C⁻¹dC
    const auto& entry = corpus_entry("conf_flat");
    int n = 4;
    Mat<double> eta = flat_eta(n, Signature::lorentzian);
    Point x = sample_cloud(entry, 2)[0];
    for (Flavor flavor : {Flavor::conformal, Flavor::projective}) {
      BaseGeometry base = base_geometry(*entry.metric, x, flavor);
      SectionJet sec = orthonormal_section(base.metric, flavor);
      TaylorValue z = random_scale_field(rng, n, 3);
      ResidualTransform rt = ResidualTransform::from_scale(z);
      DressedPipeline pipe = run_dressing(base, sec, eta);

      MatrixConnection raw_z = transform_connection(pipe.raw, weyl_z_matrix(rt, n, flavor));
      // u^Z = Z⁻¹ u C(z), pinned separately by the factorization test
      Mat<TaylorValue> u_z = inverse(weyl_z_matrix(rt, n, flavor)) * pipe.u.combined() *
                             weyl_c_matrix(rt, base, flavor);
      MatrixConnection lhs = dress(raw_z, u_z);
      ResidualWeylResult res = residual_weyl(pipe.dressed, rt, base, flavor);
      CHECK(connection_residual(lhs, res.transformed) < 1e-9);
    }
  }
}

TEST_CASE("tractor dressing and transformation") {
  Rng rng(10);
  const auto& entry = corpus_entry("conf_flat");
  int n = 4;
  Mat<double> eta = flat_eta(n, Signature::lorentzian);
  Point x = sample_cloud(entry, 2)[1];

  SUBCASE("identity dressings leave tractors alone") {
    BaseGeometry base = base_geometry(*corpus_entry("flat4").metric, {0, 0, 0, 0},
                                      Flavor::projective);
    SectionJet sec = identity_section(n, 3, Flavor::projective);
    DressingFields u = build_dressings(base, sec, eta);
    TractorField phi{Flavor::projective, random_covector_field(rng, n, 3), TractorStage::raw};
    phi.comp.push_back(random_taylor(rng, n, 3, 0.5));
    TractorField phi0 = tractor_dress(phi, u);
    for (int i = 0; i <= n; ++i)
      CHECK(std::abs(phi0.comp[i].value() - phi.comp[i].value()) < 1e-13);
  }

  SUBCASE("projective dressing formula") {
    // φ₀ = (e^μ_a l^a, σ + ẽ_a l^a)
    BaseGeometry base = base_geometry(*entry.metric, x, Flavor::projective);
    SectionJet sec = orthonormal_section(base.metric, Flavor::projective,
                                         random_covector_field(rng, n, 3));
    DressingFields u = build_dressings(base, sec, eta);
    TractorField phi{Flavor::projective, {}, TractorStage::raw};
    for (int i = 0; i <= n; ++i) phi.comp.push_back(random_taylor(rng, n, 3, 0.6));
    TractorField phi0 = tractor_dress(phi, u);
    CHECK(phi0.stage == TractorStage::stage0);
    CHECK_THROWS_AS(tractor_dress(phi0, u), ShapeError);  // stage mismatch
    // ẽ_a
    Vec<double> et(n, 0.0);
    for (int a = 0; a < n; ++a) {
      et[a] = sec.e_lower[a].value();
      for (int mu = 0; mu < n; ++mu) et[a] += base.upsilon[mu].value() * sec.e(mu, a).value();
    }
    for (int mu = 0; mu < n; ++mu) {
      double expect = 0.0;
      for (int a = 0; a < n; ++a) expect += sec.e(mu, a).value() * phi.comp[a].value();
      CHECK(std::abs(phi0.comp[mu].value() - expect) < 1e-11);
    }
    double sigma0 = phi.comp[n].value();
    for (int a = 0; a < n; ++a) sigma0 += et[a] * phi.comp[a].value();
    CHECK(std::abs(phi0.comp[n].value() - sigma0) < 1e-11);

    // staged and combined dressing agree
    Mat<TaylorValue> inv1 = inverse(u.u1);
    Mat<TaylorValue> inv0 = inverse(u.u0);
    Vec<TaylorValue> staged(phi.comp.size(), phi.comp[0] - phi.comp[0]);
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j <= n; ++j) staged[i] += inv1(i, j) * phi.comp[j];
    Vec<TaylorValue> staged0(phi.comp.size(), phi.comp[0] - phi.comp[0]);
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j <= n; ++j) staged0[i] += inv0(i, j) * staged[j];
    for (int i = 0; i <= n; ++i)
      CHECK(std::abs(staged0[i].value() - phi0.comp[i].value()) < 1e-12);
  }

  SUBCASE("covariant derivative components (projective)") {
    for (const char* name : {"flat4", "conf_flat", "sphere3"}) {
      const auto& centry = corpus_entry(name);
      int nn = centry.metric->dimension();
      Mat<double> etan = flat_eta(nn, centry.metric->signature());
      Point xx = sample_cloud(centry, 2)[0];
      BaseGeometry base = base_geometry(*centry.metric, xx, Flavor::projective);
      SectionJet sec = orthonormal_section(base.metric, Flavor::projective);
      MatrixConnection dressed = run_dressing(base, sec, etan).dressed;
      TractorField phi0{Flavor::projective, {}, TractorStage::stage0};
      for (int i = 0; i <= nn; ++i) phi0.comp.push_back(random_taylor(rng, nn, 3, 0.6));
      auto d = tractor_derivative(dressed, phi0);
      double worst = 0.0;
      for (int l = 0; l < nn; ++l) {
        for (int mu = 0; mu < nn; ++mu) {
          // ∇_ν l^μ + σ δ^μ_ν
          double expect = phi0.comp[mu].derivative(l).value() +
                          (mu == l ? phi0.comp[nn].value() : 0.0);
          for (int r = 0; r < nn; ++r)
            expect += base.gamma(mu, r, l).value() * phi0.comp[r].value();
          worst = std::max(worst, std::abs(d[l][mu].value() - expect));
        }
        // ∇_ν σ + P_{νλ} l^λ
        double expect = phi0.comp[nn].derivative(l).value();
        for (int r = 0; r < nn; ++r)
          expect += base.schouten(r, l).value() * phi0.comp[r].value();
        worst = std::max(worst, std::abs(d[l][nn].value() - expect));
      }
      CHECK(worst < 1e-11);
    }
  }

  SUBCASE("constant tractor on flat space") {
    BaseGeometry base = base_geometry(*corpus_entry("flat4").metric, {0, 0, 0, 0},
                                      Flavor::projective);
    SectionJet sec = identity_section(n, 3, Flavor::projective);
    MatrixConnection dressed = run_dressing(base, sec, eta).dressed;
    TractorField phi0{Flavor::projective, Vec<TaylorValue>(n + 1, TaylorValue::zero(n, 3)),
                      TractorStage::stage0};
    Rng rng2(11);
    Vec<double> l = rng2.vec(n, -0.8, 0.8);
    for (int i = 0; i < n; ++i) phi0.comp[i] = phi0.comp[i] + l[i];
    double sigma = rng2.uniform(-0.5, 0.5);
    phi0.comp[n] = phi0.comp[n] + sigma;
    auto d = tractor_derivative(dressed, phi0);
    for (int lam = 0; lam < n; ++lam) {
      for (int mu = 0; mu < n; ++mu)
        CHECK(d[lam][mu].value() == doctest::Approx(mu == lam ? sigma : 0.0));
      CHECK(std::abs(d[lam][n].value()) < 1e-14);
    }
  }

  SUBCASE("weyl action on tractors") {
    for (Flavor flavor : {Flavor::projective, Flavor::conformal}) {
      BaseGeometry base = base_geometry(*entry.metric, x, flavor);
      SectionJet sec = orthonormal_section(base.metric, flavor);
      int size = flavor == Flavor::conformal ? n + 2 : n + 1;
      TractorField phi0{flavor, {}, TractorStage::stage0};
      for (int i = 0; i < size; ++i) phi0.comp.push_back(random_taylor(rng, n, 3, 0.6));

      // constant scale: closed forms
      ResidualTransform rtc = ResidualTransform::from_scale(TaylorValue::constant(n, 3, 1.7));
      TractorField moved = tractor_weyl(phi0, weyl_c_matrix(rtc, base, flavor));
      if (flavor == Flavor::projective) {
        for (int i = 0; i < n; ++i)
          CHECK(std::abs(moved.comp[i].value() - phi0.comp[i].value() / 1.7) < 1e-12);
        CHECK(std::abs(moved.comp[n].value() - phi0.comp[n].value() / 1.7) < 1e-12);
      }

      // smooth scale: closed-form component laws
      TaylorValue z = exp(TaylorValue::variable(n, 3, 0, x[0]) * 0.8);
      ResidualTransform rt = ResidualTransform::from_scale(z);
      TractorField got = tractor_weyl(phi0, weyl_c_matrix(rt, base, flavor));
      double zv = z.value();
      if (flavor == Flavor::projective) {
        double contraction = 0.0;
        for (int nu = 0; nu < n; ++nu)
          contraction += phi0.comp[nu].value() * rt.zeta[nu].value();
        for (int mu = 0; mu < n; ++mu)
          CHECK(std::abs(got.comp[mu].value() - phi0.comp[mu].value() / zv) < 1e-12);
        CHECK(std::abs(got.comp[n].value() - (phi0.comp[n].value() - contraction) / zv) < 1e-12);
      } else {
        // (z⁻¹(ρ − ζ_μ l^μ + ½σζ²), z⁻¹(l^μ − g^{μν}ζ_ν σ), zσ)
        double rho = phi0.comp[0].value(), sig = phi0.comp[n + 1].value();
        double zeta_l = 0.0, zeta2 = 0.0;
        Vec<double> zeta_up(n, 0.0);
        for (int mu = 0; mu < n; ++mu) {
          zeta_l += rt.zeta[mu].value() * phi0.comp[1 + mu].value();
          for (int nu = 0; nu < n; ++nu)
            zeta_up[mu] += base.metric.ginv(mu, nu).value() * rt.zeta[nu].value();
        }
        for (int mu = 0; mu < n; ++mu) zeta2 += zeta_up[mu] * rt.zeta[mu].value();
        CHECK(std::abs(got.comp[0].value() - (rho - zeta_l + 0.5 * sig * zeta2) / zv) < 1e-11);
        for (int mu = 0; mu < n; ++mu)
          CHECK(std::abs(got.comp[1 + mu].value() -
                         (phi0.comp[1 + mu].value() - zeta_up[mu] * sig) / zv) < 1e-11);
        CHECK(std::abs(got.comp[n + 1].value() - zv * sig) < 1e-11);
      }

      // covariance of the derivative: D₀^Z φ₀^Z = C⁻¹ (D₀ φ₀)
      MatrixConnection dressed = run_dressing(base, sec, eta).dressed;
      Mat<TaylorValue> c = weyl_c_matrix(rt, base, flavor);
      ResidualWeylResult res = residual_weyl(dressed, rt, base, flavor);
      auto lhs = tractor_derivative(res.transformed, got);
      auto d0 = tractor_derivative(dressed, phi0);
      Mat<TaylorValue> cinv = inverse(c);
      double worst = 0.0;
      for (int l = 0; l < n; ++l) {
        for (int i = 0; i < size; ++i) {
          TaylorValue acc = phi0.comp[0] - phi0.comp[0];
          for (int j = 0; j < size; ++j) acc += cinv(i, j) * d0[l][j];
          worst = std::max(worst, std::abs(lhs[l][i].value() - acc.value()));
        }
      }
      CHECK(worst < 1e-9);
    }
  }
}

TEST_SUITE_END();
