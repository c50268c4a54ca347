#include <doctest.h>

#include <cmath>

#include "cartan/jets.hpp"
#include "tests/oracles.hpp"

using namespace cartan;

TEST_SUITE_BEGIN("jets");

namespace {

double jet_residual(const Jet3<double>& a, const Jet3<double>& b) {
  return std::max({residual(a.j1, b.j1), residual(a.j2, b.j2), residual(a.j3, b.j3)});
}
double jet_residual(const Jet2<double>& a, const Jet2<double>& b) {
  return std::max(residual(a.j1, b.j1), residual(a.j2, b.j2));
}

Jet3<double> conformal_jet(Rng& rng, const Mat<double>& eta) {
  auto p = oracles::random_conformal(rng, eta);
  return prolong3(p.h1, p.hb, JetFlavor::conformal, eta);
}

}  // namespace

TEST_CASE("identity laws") {
  Rng rng(1);
  auto g = oracles::random_jet3(rng, 3);
  auto id = identity_jet3(3, 0.0);
  CHECK(jet_residual(compose(id, g), g) < 1e-15);
  CHECK(jet_residual(compose(g, id), g) < 1e-15);
}

TEST_CASE("composition matches the polynomial oracle") {
  Rng rng(2);
  for (int n : {3, 4}) {
    for (int rep = 0; rep < 25; ++rep) {
      auto f = oracles::random_jet3(rng, n);
      auto g = oracles::random_jet3(rng, n);
      CHECK(jet_residual(compose(f, g), oracles::compose_oracle(f, g)) < 1e-12);
    }
  }
}

TEST_CASE("associativity") {
  Rng rng(3);
  for (int rep = 0; rep < 25; ++rep) {
    auto a = oracles::random_jet3(rng, 3);
    auto b = oracles::random_jet3(rng, 3);
    auto c = oracles::random_jet3(rng, 3);
    CHECK(jet_residual(compose(compose(a, b), c), compose(a, compose(b, c))) < 1e-11);
  }
}

TEST_CASE("inversion round trips") {
  Rng rng(4);
  auto id = identity_jet3(3, 0.0);
  CHECK(jet_residual(invert(id), id) < 1e-15);
  for (int rep = 0; rep < 25; ++rep) {
    auto h = oracles::random_jet3(rng, 3);
    auto hb = invert(h);
    CHECK(jet_residual(compose(h, hb), id) < 1e-11);
    CHECK(jet_residual(compose(hb, h), id) < 1e-11);
  }
}

TEST_CASE("conformal prolongation: direct substitution at h = id") {
  int n = 3;
  Mat<double> eta = flat_eta(n, Signature::lorentzian);
  Mat<double> h1 = Mat<double>::identity(n, 1.0, 0.0);
  Vec<double> r = {0.3, -0.7, 0.2};
  auto j = prolong2(h1, r, JetFlavor::conformal, eta);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        double expect = eta(a, a) * r[a] * eta(b, c) - (a == b ? r[c] : 0.0) -
                        (a == c ? r[b] : 0.0);
        CHECK(j.j2(a, b, c) == doctest::Approx(expect).epsilon(1e-14));
      }
  // identity params give the identity jet
  auto idj = prolong3(h1, Vec<double>(n, 0.0), JetFlavor::conformal, eta);
  CHECK(max_abs(idj.j2) == 0.0);
  CHECK(max_abs(idj.j3) == 0.0);
}

TEST_CASE("prolongation rejects a non-conformal first order") {
  int n = 3;
  Mat<double> eta = flat_eta(n, Signature::lorentzian);
  Mat<double> h1 = Mat<double>::identity(n, 1.0, 0.0);
  h1(1, 2) = 0.4;  // shear, not in CO(eta)
  CHECK_THROWS_AS(prolong2(h1, Vec<double>(n, 0.0), JetFlavor::conformal, eta), ShapeError);
}

TEST_CASE("parameter recovery round trips") {
  Rng rng(5);
  Mat<double> eta = flat_eta(4, Signature::lorentzian);
  for (int rep = 0; rep < 20; ++rep) {
    auto p = oracles::random_conformal(rng, eta);
    auto j = prolong2(p.h1, p.hb, JetFlavor::conformal, eta);
    Vec<double> back = recover_hb(j, JetFlavor::conformal);
    for (int i = 0; i < 4; ++i) CHECK(std::abs(back[i] - p.hb[i]) < 1e-13);

    // projective flavor
    Mat<double> s = rng.gl(4);
    auto jp = prolong2(s, p.hb, JetFlavor::projective, eta);
    Vec<double> backp = recover_hb(jp, JetFlavor::projective);
    for (int i = 0; i < 4; ++i) CHECK(std::abs(backp[i] - p.hb[i]) < 1e-13);
  }
}

TEST_CASE("prolonged jets are the jets of the group action") {
  // 2nd and 3rd order coefficients of the point action must equal the prolongation
  Rng rng(6);
  for (int n : {3, 4}) {
    Mat<double> eta = flat_eta(n, Signature::lorentzian);
    for (int rep = 0; rep < 10; ++rep) {
      auto p = oracles::random_conformal(rng, eta);
      auto action = oracles::mobius_action_taylor(p.S, p.z, p.hb, eta, 3);
      Jet3<double> from_action = oracles::jet_from_taylor(action);
      Jet3<double> from_prolong = prolong3(p.h1, p.hb, JetFlavor::conformal, eta);
      CHECK(jet_residual(from_action, from_prolong) < 1e-11);
    }
  }
}

TEST_CASE("conformal inverse identities") {
  Rng rng(7);
  Mat<double> eta = flat_eta(3, Signature::lorentzian);
  for (int rep = 0; rep < 20; ++rep) {
    auto h3 = conformal_jet(rng, eta);
    auto hbar = invert(h3);
    Vec<double> hb = recover_hb(h3.truncate2(), JetFlavor::conformal);
    Vec<double> hbarb = recover_hb(hbar.truncate2(), JetFlavor::conformal);
    // inverse parameter: h̄_j = −h_r h̄^r_j
    for (int j = 0; j < 3; ++j) {
      double expect = 0.0;
      for (int r = 0; r < 3; ++r) expect -= hb[r] * hbar.j1(r, j);
      CHECK(std::abs(hbarb[j] - expect) < 1e-12);
    }
    // and the inverse of a conformal jet still satisfies the prolongation relations
    auto rebuilt = prolong3(hbar.j1, hbarb, JetFlavor::conformal, eta);
    CHECK(jet_residual(hbar, rebuilt) < 1e-10);
  }
}

TEST_CASE("subgroup closure under composition") {
  Rng rng(8);
  for (int n : {3, 4}) {
    Mat<double> eta = flat_eta(n, Signature::lorentzian);
    for (int rep = 0; rep < 15; ++rep) {
      SUBCASE("") {}
      auto a = conformal_jet(rng, eta);
      auto b = conformal_jet(rng, eta);
      auto ab = compose(a, b);
      Vec<double> hb = recover_hb(ab.truncate2(), JetFlavor::conformal);
      auto rebuilt = prolong3(ab.j1, hb, JetFlavor::conformal, eta);
      CHECK(jet_residual(ab, rebuilt) < 1e-10);

      // reduced-parameter group law: (h'∘h)_b = h_b + h'_c h^c_b
      Vec<double> pa = recover_hb(a.truncate2(), JetFlavor::conformal);
      Vec<double> pb = recover_hb(b.truncate2(), JetFlavor::conformal);
      for (int i = 0; i < n; ++i) {
        double expect = pb[i];
        for (int c = 0; c < n; ++c) expect += pa[c] * b.j1(c, i);
        CHECK(std::abs(hb[i] - expect) < 1e-11);
      }

      // projective closure at order 2
      Mat<double> s1 = rng.gl(n), s2 = rng.gl(n);
      Vec<double> r1 = rng.vec(n, -0.5, 0.5), r2 = rng.vec(n, -0.5, 0.5);
      auto q1 = prolong2(s1, r1, JetFlavor::projective, eta);
      auto q2 = prolong2(s2, r2, JetFlavor::projective, eta);
      auto q = compose(q1, q2);
      auto qre = prolong2(q.j1, recover_hb(q, JetFlavor::projective), JetFlavor::projective, eta);
      CHECK(jet_residual(q, qre) < 1e-10);
    }
  }
}

TEST_CASE("right action on frame coordinates") {
  Rng rng(9);
  int n = 3;
  Mat<double> eta = flat_eta(n, Signature::lorentzian);

  SUBCASE("identity jet fixes the frame") {
    FrameCoords<double> p{rng.gl(n), Ten3<double>(n, n, n, 0.0)};
    for (int mu = 0; mu < n; ++mu)
      for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) {
          double v = rng.uniform(-0.5, 0.5);
          p.e2(mu, a, b) = v;
          p.e2(mu, b, a) = v;
        }
    auto q = jet_right_action(p, identity_jet2(n, 0.0));
    CHECK(residual(q.e1, p.e1) < 1e-15);
    CHECK(residual(q.e2, p.e2) < 1e-15);
  }

  SUBCASE("action composition law") {
    for (int rep = 0; rep < 15; ++rep) {
      FrameCoords<double> p{rng.gl(n), Ten3<double>(n, n, n, 0.0)};
      for (int mu = 0; mu < n; ++mu)
        for (int a = 0; a < n; ++a)
          for (int b = a; b < n; ++b) {
            double v = rng.uniform(-0.5, 0.5);
            p.e2(mu, a, b) = v;
            p.e2(mu, b, a) = v;
          }
      auto a = oracles::random_jet3(rng, n).truncate2();
      auto b = oracles::random_jet3(rng, n).truncate2();
      auto lhs = jet_right_action(jet_right_action(p, a), b);
      auto rhs = jet_right_action(p, compose(a, b));
      CHECK(residual(lhs.e1, rhs.e1) < 1e-12);
      CHECK(residual(lhs.e2, rhs.e2) < 1e-12);
    }
  }

  SUBCASE("reduced action agrees with the full action") {
    for (int rep = 0; rep < 10; ++rep) {
      ReducedFrame<double> p{rng.gl(n), rng.vec(n, -0.5, 0.5), JetFlavor::conformal};
      auto cp = oracles::random_conformal(rng, eta);
      auto jet = prolong2(cp.h1, cp.hb, JetFlavor::conformal, eta);

      ReducedFrame<double> direct = jet_right_action(p, jet.j1, cp.hb);
      FrameCoords<double> full{p.e1, expand_frame_second_order(p, eta)};
      FrameCoords<double> moved = jet_right_action(full, jet);
      Vec<double> reduced = reduce_frame_second_order(moved, JetFlavor::conformal);
      CHECK(residual(direct.e1, moved.e1) < 1e-12);
      for (int i = 0; i < n; ++i) CHECK(std::abs(direct.e_lower[i] - reduced[i]) < 1e-11);
    }
  }
}

namespace {

/// Flow oracle for the adjoint: B = d/dt j₃(h ∘ f_t ∘ h⁻¹)|₀ by central differences,
/// with f_t = id + t·Ã as an exact cubic polynomial map.
JetAlgebra<double> adjoint_flow_oracle(const Jet3<double>& h, const JetAlgebra<double>& a,
                                       const Mat<double>& eta, double step = 1e-5) {
  int n = h.dim();
  auto hbar = invert(h);
  Ten3<double> a2 = algebra_second_order(a, JetFlavor::conformal, eta);
  auto field_jet = [&](double t) {
    Jet3<double> ft = identity_jet3(n, 0.0);
    for (int k = 0; k < n; ++k) {
      for (int l = 0; l < n; ++l) {
        ft.j1(k, l) += t * a.a0(k, l);
        for (int m = 0; m < n; ++m) ft.j2(k, l, m) += t * a2(k, l, m);
      }
    }
    // translation part: evaluate maps with a constant displacement t·A^k
    auto y = oracles::taylor_variables(n, 3);
    for (int k = 0; k < n; ++k) y[k] = y[k] + 0.0;  // keep centers at 0
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
  // grade +1 from the quadratic part: A_m = −(1/n) A^r_{rm}
  for (int m = 0; m < n; ++m) {
    double tr = 0.0;
    for (int r = 0; r < n; ++r) tr += b2(r, r, m);
    b.a_p1[m] = -tr / n;
  }
  return b;
}


}  // namespace

TEST_CASE("adjoint: identity jet acts trivially") {
  Rng rng(10);
  Mat<double> eta = flat_eta(3, Signature::lorentzian);
  auto a = oracles::random_conformal_algebra(rng, eta);
  auto id = identity_jet3(3, 0.0);
  id.tag = JetFlavor::conformal;
  auto b = adjoint(id, a, eta);
  CHECK(max_abs(b - a) < 1e-14);
}

TEST_CASE("adjoint matches the conjugation-flow oracle") {
  Rng rng(11);
  for (int n : {3, 4}) {
    Mat<double> eta = flat_eta(n, Signature::lorentzian);
    for (int rep = 0; rep < 10; ++rep) {
      auto h = conformal_jet(rng, eta);
      auto a = oracles::random_conformal_algebra(rng, eta);
      auto closed = adjoint(h, a, eta);
      auto flow = adjoint_flow_oracle(h, a, eta);
      double scale = std::max({1.0, max_abs(closed), max_abs(flow)});
      CHECK(max_abs(closed - flow) / scale < 1e-5);
    }
  }
}

TEST_CASE("adjoint of a pure translation includes the quadratic covector term") {
  Rng rng(12);
  Mat<double> eta = flat_eta(3, Signature::lorentzian);
  auto h = conformal_jet(rng, eta);
  auto a = zero_algebra(3, 0.0);
  a.a_m1 = rng.vec(3, -0.8, 0.8);
  auto closed = adjoint(h, a, eta);
  auto flow = adjoint_flow_oracle(h, a, eta);
  double scale = std::max({1.0, max_abs(closed), max_abs(flow)});
  CHECK(max_abs(closed - flow) / scale < 1e-5);
  CHECK(max_abs(closed.a_p1) > 1e-4);  // the ½ η^{ij}h_i h_j term is alive
}

TEST_CASE("adjoint is a representation") {
  Rng rng(13);
  Mat<double> eta = flat_eta(3, Signature::lorentzian);
  for (int rep = 0; rep < 15; ++rep) {
    auto h = conformal_jet(rng, eta);
    auto g = conformal_jet(rng, eta);
    auto a = oracles::random_conformal_algebra(rng, eta);
    auto hg = compose(h, g);
    hg.tag = JetFlavor::conformal;
    auto lhs = adjoint(hg, a, eta);
    auto rhs = adjoint(h, adjoint(g, a, eta), eta);
    double scale = std::max({1.0, max_abs(lhs), max_abs(rhs)});
    CHECK(max_abs(lhs - rhs) / scale < 1e-9);
  }
}

TEST_CASE("adjoint preserves the conformal algebra shape") {
  Rng rng(14);
  Mat<double> eta = flat_eta(4, Signature::lorentzian);
  auto h = conformal_jet(rng, eta);
  auto a = oracles::random_conformal_algebra(rng, eta);
  auto b = adjoint(h, a, eta);
  // grade-0 output stays in co(eta): eta-symmetrized part is a multiple of eta
  int n = 4;
  double lambda = 0.0;
  for (int i = 0; i < n; ++i) lambda += b.a0(i, i) / n;
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double sym = eta(i, i) * b.a0(i, j) + eta(j, j) * b.a0(j, i);
      worst = std::max(worst, std::abs(sym - 2.0 * lambda * eta(i, i) * (i == j ? 1.0 : 0.0)));
    }
  CHECK(worst < 1e-12);
}

TEST_CASE("maurer-cartan form") {
  Rng rng(15);
  int n = 3;
  Mat<double> eta = flat_eta(n, Signature::lorentzian);

  SUBCASE("left translation by the identity is trivial") {
    Mat<double> id = Mat<double>::identity(n, 1.0, 0.0);
    Mat<double> dh1 = rng.mat(n, n, -0.5, 0.5);
    Vec<double> dhb = rng.vec(n, -0.5, 0.5);
    auto mc = maurer_cartan(id, Vec<double>(n, 0.0), dh1, dhb);
    CHECK(residual(mc.a0, dh1) < 1e-15);
    for (int i = 0; i < n; ++i) CHECK(std::abs(mc.a_p1[i] - dhb[i]) < 1e-15);
  }

  SUBCASE("zero tangent maps to zero") {
    auto p = oracles::random_conformal(rng, eta);
    auto mc = maurer_cartan(p.h1, p.hb, Mat<double>(n, n, 0.0), Vec<double>(n, 0.0));
    CHECK(max_abs(mc) < 1e-15);
  }

  SUBCASE("matches the path-composition oracle") {
    for (int rep = 0; rep < 12; ++rep) {
      auto p = oracles::random_conformal(rng, eta);
      // conformal path through h: h1(t) = exp(t ξ)·h1 with ξ in co(eta)
      auto xi = oracles::random_conformal_algebra(rng, eta).a0;
      Vec<double> dhb = rng.vec(n, -0.6, 0.6);
      Mat<double> dh1 = xi * p.h1;
      auto mc = maurer_cartan(p.h1, p.hb, dh1, dhb);

      double t = 1e-5;
      auto at = [&](double tt) {
        Mat<double> h1t = expm(xi.scaled(tt)) * p.h1;
        Vec<double> hbt = p.hb;
        for (int i = 0; i < n; ++i) hbt[i] += tt * dhb[i];
        return prolong2(h1t, hbt, JetFlavor::conformal, eta);
      };
      auto h = prolong2(p.h1, p.hb, JetFlavor::conformal, eta);
      auto plus = compose(invert(h), at(t));
      auto minus = compose(invert(h), at(-t));
      Mat<double> g0(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g0(i, j) = (plus.j1(i, j) - minus.j1(i, j)) / (2 * t);
      Vec<double> pp = recover_hb(plus, JetFlavor::conformal);
      Vec<double> pm = recover_hb(minus, JetFlavor::conformal);
      double worst = residual(g0, mc.a0);
      for (int i = 0; i < n; ++i)
        worst = std::max(worst, std::abs((pp[i] - pm[i]) / (2 * t) - mc.a_p1[i]));
      CHECK(worst < 1e-6);
    }
  }
}

TEST_CASE("algebra second order and its trace inverse") {
  Rng rng(16);
  Mat<double> eta = flat_eta(4, Signature::lorentzian);
  auto a = oracles::random_conformal_algebra(rng, eta);
  auto a2 = algebra_second_order(a, JetFlavor::conformal, eta);
  int n = 4;
  for (int m = 0; m < n; ++m) {
    double tr = 0.0;
    for (int r = 0; r < n; ++r) tr += a2(r, r, m);
    CHECK(std::abs(-tr / n - a.a_p1[m]) < 1e-14);
  }
}

TEST_SUITE_END();
