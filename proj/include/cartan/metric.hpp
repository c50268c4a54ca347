#pragma once

#include <memory>

#include "cartan/expr.hpp"
#include "cartan/linalg.hpp"

namespace cartan {

enum class Signature { riemannian, lorentzian };
enum class Flavor { conformal, projective };

/// Flat frame metric: identity, or diag(-1, 1, ..., 1) with the timelike slot first.
Mat<double> flat_eta(int n, Signature sig);

/// A pseudo-Riemannian metric evaluable as truncated Taylor data at a chart point.
class MetricBase {
 public:
  MetricBase(int dim, Signature sig) : dim_(dim), sig_(sig) {}
  virtual ~MetricBase() = default;
  int dimension() const { return dim_; }
  Signature signature() const { return sig_; }
  /// g_{μν} at x with Taylor data up to `order`.
  virtual Mat<TaylorValue> components(const Point& x, int order) const = 0;

 private:
  int dim_;
  Signature sig_;
};

/// Metric given by a symmetric table of coordinate expressions.
class ExprMetric : public MetricBase {
 public:
  ExprMetric(int dim, Signature sig, Mat<ScalarField> table);
  Mat<TaylorValue> components(const Point& x, int order) const override;
  const Mat<ScalarField>& table() const { return table_; }

 private:
  Mat<ScalarField> table_;
};

/// The unimodular representative Ω²g with Ω = |det g|^{-1/2n}; its determinant is
/// ±1 everywhere, so its Levi-Civita coefficients are traceless.
class UnimodularRescale : public MetricBase {
 public:
  explicit UnimodularRescale(std::shared_ptr<const MetricBase> base)
      : MetricBase(base->dimension(), base->signature()), base_(std::move(base)) {}
  Mat<TaylorValue> components(const Point& x, int order) const override;

 private:
  std::shared_ptr<const MetricBase> base_;
};

/// Metric data evaluated at one point: g, its inverse, and the determinant, all
/// as Taylor data. Everything downstream in this module is a pure function of this.
struct MetricData {
  int n = 0;
  Signature sig = Signature::riemannian;
  Mat<TaylorValue> g, ginv;
  TaylorValue det;
  TaylorValue zero;  // zero of the ambient Taylor ring (right vars/order)
};

/// Evaluates and inverts g at x. Throws SingularError when g is not invertible.
MetricData eval_metric(const MetricBase& metric, const Point& x, int order = 3);

/// Levi-Civita coefficients Γ^ρ_{μν} = ½ g^{ρλ}(∂_μ g_{λν} + ∂_ν g_{λμ} − ∂_λ g_{μν}).
Ten3<TaylorValue> christoffel(const MetricData& m);

struct CurvatureTensors {
  Ten4<TaylorValue> riemann;  // R^ρ_{σμν}
  Mat<TaylorValue> ricci;     // Ric_{σν} = R^ρ_{σρν}
  TaylorValue scalar;         // R = g^{σν} Ric_{σν}
};
CurvatureTensors riemann_ricci(const MetricData& m);

/// Trace adjustment of Ricci: conformal flavor −1/(n−2)·(Ric − R/(2(n−1)) g),
/// projective flavor −Ric/(n−1). Both normalizations are the ones under which
/// the assembled normal connections have vanishing curvature trace.
Mat<TaylorValue> schouten(const MetricData& m, Flavor flavor);

/// Υ_μ = −Γ^λ_{λμ}/n (conformal) or −Γ^λ_{λμ}/(n+1) (projective); the logarithmic
/// derivative of the scale that makes the Γ-trace vanish.
Vec<TaylorValue> upsilon(const MetricData& m, Flavor flavor);

struct PiCoefficients {
  Ten3<TaylorValue> pi1;  // Π^ρ_{μν}, traceless
  Mat<TaylorValue> pi2;   // Π_{μν}
};
/// The traceless connection coefficients and their second-order companions.
PiCoefficients pi_coefficients(const MetricData& m, Flavor flavor);

/// Convenience bundle for the connection assembly.
struct BaseGeometry {
  MetricData metric;
  Ten3<TaylorValue> gamma;
  Mat<TaylorValue> schouten;
  Vec<TaylorValue> upsilon;
  PiCoefficients pi;
};
BaseGeometry base_geometry(const MetricBase& metric, const Point& x, Flavor flavor,
                           int order = 3);

/// Orthonormal co-frame: θ^a_μ with η_{ab}θ^a_μθ^b_ν = g_{μν}, built by
/// Gram-Schmidt on the coordinate basis, timelike direction first. Smooth in x
/// (all Taylor coefficients carried). Throws ShapeError on a pivot whose sign
/// contradicts the declared signature.
struct CoFrame {
  Mat<TaylorValue> theta;  // θ^a_μ (row a, column μ)
  Mat<TaylorValue> frame;  // e^μ_a (row μ, column a), inverse of theta
};
CoFrame orthonormal_coframe(const MetricData& m);

}  // namespace cartan
