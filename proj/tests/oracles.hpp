#pragma once

// Test-only oracles. Everything here is independent of the library's evaluation
// paths: a symbolic differentiator used to cross-check Taylor coefficients, a
// random AST generator, and small finite-difference helpers.

#include <memory>

#include "cartan/expr.hpp"
#include "cartan/metric.hpp"
#include "cartan/oracles.hpp"
#include "cartan/rng.hpp"

namespace cartan::oracles {

inline ExprPtr num(double v) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Number;
  e->number = v;
  return e;
}

inline ExprPtr coord(int i) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Coord;
  e->coord = i;
  return e;
}

inline ExprPtr node(Expr::Kind k, ExprPtr a, ExprPtr b = nullptr) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->a = std::move(a);
  e->b = std::move(b);
  return e;
}

inline ExprPtr call(Expr::Func f, ExprPtr a) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Call;
  e->func = f;
  e->a = std::move(a);
  return e;
}

inline ExprPtr powi(ExprPtr a, double p) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Pow;
  e->a = std::move(a);
  e->number = p;
  return e;
}

/// Random expression tree. Leans on smooth functions and small coefficients so
/// that a random point in (0,1)^n usually stays inside every domain.
inline ExprPtr random_ast(Rng& rng, int dim, int depth) {
  if (depth == 0 || rng.uniform() < 0.25) {
    if (rng.uniform() < 0.5) return coord(static_cast<int>(rng.uniform(0, dim)) % dim);
    return num(std::round(rng.uniform(-2.0, 2.0) * 8.0) / 8.0);
  }
  double pick = rng.uniform();
  if (pick < 0.22) return node(Expr::Kind::Add, random_ast(rng, dim, depth - 1), random_ast(rng, dim, depth - 1));
  if (pick < 0.40) return node(Expr::Kind::Sub, random_ast(rng, dim, depth - 1), random_ast(rng, dim, depth - 1));
  if (pick < 0.62) return node(Expr::Kind::Mul, random_ast(rng, dim, depth - 1), random_ast(rng, dim, depth - 1));
  if (pick < 0.68)
    return node(Expr::Kind::Div, random_ast(rng, dim, depth - 1),
                node(Expr::Kind::Add, powi(random_ast(rng, dim, depth - 1), 2.0), num(1.0)));
  if (pick < 0.74) return node(Expr::Kind::Neg, random_ast(rng, dim, depth - 1));
  if (pick < 0.80) return powi(random_ast(rng, dim, depth - 1), static_cast<double>(1 + static_cast<int>(rng.uniform(0, 3)) % 3));
  double fpick = rng.uniform();
  Expr::Func f = fpick < 0.25   ? Expr::Func::Sin
                 : fpick < 0.5  ? Expr::Func::Cos
                 : fpick < 0.75 ? Expr::Func::Exp
                                : Expr::Func::Sinh;
  // scale the argument down to keep exp/sinh well-conditioned
  return call(f, node(Expr::Kind::Mul, num(0.5), random_ast(rng, dim, depth - 1)));
}

/// Symbolic derivative ∂/∂x_i with no simplification. Independent oracle for the
/// Taylor evaluation path.
inline ExprPtr symbolic_derivative(const ExprPtr& e, int i) {
  using K = Expr::Kind;
  switch (e->kind) {
    case K::Number: return num(0.0);
    case K::Coord: return num(e->coord == i ? 1.0 : 0.0);
    case K::Add: return node(K::Add, symbolic_derivative(e->a, i), symbolic_derivative(e->b, i));
    case K::Sub: return node(K::Sub, symbolic_derivative(e->a, i), symbolic_derivative(e->b, i));
    case K::Mul:
      return node(K::Add, node(K::Mul, symbolic_derivative(e->a, i), e->b),
                  node(K::Mul, e->a, symbolic_derivative(e->b, i)));
    case K::Div:
      // (a/b)' = a'/b - a b'/b^2
      return node(K::Sub, node(K::Div, symbolic_derivative(e->a, i), e->b),
                  node(K::Div, node(K::Mul, e->a, symbolic_derivative(e->b, i)),
                       node(K::Mul, e->b, e->b)));
    case K::Neg: return node(K::Neg, symbolic_derivative(e->a, i));
    case K::Pow:
      // (a^p)' = p a^(p-1) a'
      return node(K::Mul, num(e->number),
                  node(K::Mul, powi(e->a, e->number - 1.0), symbolic_derivative(e->a, i)));
    case K::Call: {
      ExprPtr da = symbolic_derivative(e->a, i);
      ExprPtr outer;
      switch (e->func) {
        case Expr::Func::Sin: outer = call(Expr::Func::Cos, e->a); break;
        case Expr::Func::Cos: outer = node(K::Neg, call(Expr::Func::Sin, e->a)); break;
        case Expr::Func::Tan: {
          auto t = call(Expr::Func::Tan, e->a);
          outer = node(K::Add, num(1.0), node(K::Mul, t, t));
          break;
        }
        case Expr::Func::Exp: outer = call(Expr::Func::Exp, e->a); break;
        case Expr::Func::Log: outer = node(K::Div, num(1.0), e->a); break;
        case Expr::Func::Sqrt:
          outer = node(K::Div, num(0.5), call(Expr::Func::Sqrt, e->a));
          break;
        case Expr::Func::Sinh: outer = call(Expr::Func::Cosh, e->a); break;
        case Expr::Func::Cosh: outer = call(Expr::Func::Sinh, e->a); break;
      }
      return node(K::Mul, outer, da);
    }
  }
  return num(0.0);
}

/// Finite-difference Levi-Civita coefficients: the defining formula with all
/// derivatives of g taken by central differences of plain point values.
inline Ten3<double> christoffel_fd(const MetricBase& metric, const Point& x,
                                   double h = 1e-5) {
  int n = metric.dimension();
  auto gval = [&](const Point& p) {
    Mat<TaylorValue> gt = metric.components(p, 0);
    Mat<double> g(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g(i, j) = gt(i, j).value();
    return g;
  };
  Mat<double> g0 = gval(x);
  Mat<double> ginv = inverse(g0);
  Ten3<double> dg(n, n, n, 0.0);
  for (int l = 0; l < n; ++l) {
    Point xp = x, xm = x;
    xp[l] += h;
    xm[l] -= h;
    Mat<double> gp = gval(xp), gm = gval(xm);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) dg(l, i, j) = (gp(i, j) - gm(i, j)) / (2 * h);
  }
  Ten3<double> gamma(n, n, n, 0.0);
  for (int r = 0; r < n; ++r)
    for (int mu = 0; mu < n; ++mu)
      for (int nu = 0; nu < n; ++nu) {
        double acc = 0.0;
        for (int l = 0; l < n; ++l)
          acc += ginv(r, l) * (dg(mu, l, nu) + dg(nu, l, mu) - dg(l, mu, nu));
        gamma(r, mu, nu) = 0.5 * acc;
      }
  return gamma;
}

/// Ricci by the defining curvature formula with the ∂Γ term taken by central
/// differences (Γ at shifted points evaluated exactly).
inline Mat<double> ricci_fd(const MetricBase& metric, const Point& x, double h = 1e-5) {
  int n = metric.dimension();
  auto gamma_at = [&](const Point& p) {
    MetricData m = eval_metric(metric, p, 1);
    Ten3<TaylorValue> g = christoffel(m);
    Ten3<double> out(n, n, n, 0.0);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) out(a, b, c) = g(a, b, c).value();
    return out;
  };
  Ten3<double> g0 = gamma_at(x);
  Ten4<double> dgam(n, n, n, n, 0.0);  // ∂_λ Γ^ρ_{μν} in (λ, ρ, μ, ν)
  for (int l = 0; l < n; ++l) {
    Point xp = x, xm = x;
    xp[l] += h;
    xm[l] -= h;
    Ten3<double> gp = gamma_at(xp), gm = gamma_at(xm);
    for (int r = 0; r < n; ++r)
      for (int mu = 0; mu < n; ++mu)
        for (int nu = 0; nu < n; ++nu)
          dgam(l, r, mu, nu) = (gp(r, mu, nu) - gm(r, mu, nu)) / (2 * h);
  }
  Mat<double> ric(n, n, 0.0);
  for (int s = 0; s < n; ++s)
    for (int nu = 0; nu < n; ++nu) {
      double acc = 0.0;
      for (int r = 0; r < n; ++r) {
        acc += dgam(r, r, nu, s) - dgam(nu, r, r, s);
        for (int l = 0; l < n; ++l)
          acc += g0(r, r, l) * g0(l, nu, s) - g0(r, nu, l) * g0(l, r, s);
      }
      ric(s, nu) = acc;
    }
  return ric;
}

}  // namespace cartan::oracles
