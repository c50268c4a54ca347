#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "cartan/util.hpp"

namespace cartan {

/// Hard cap on chart dimension (the geometry runs at n = 3..5; 8 leaves headroom).
inline constexpr int kMaxVars = 8;
/// Hard cap on truncation order. Order 3 covers two derivatives of the metric
/// plus one exterior derivative of the assembled connection.
inline constexpr int kMaxOrder = 3;

/// Dense layout of all multi-indices |α| ≤ order in `vars` variables, graded-lex
/// ordered, with precomputed product and derivative tables. Cached per (vars, order).
class TaylorLayout {
 public:
  static const TaylorLayout& get(int vars, int order);

  int vars = 0;
  int order = 0;
  int size = 0;  // number of multi-indices = C(vars+order, order)

  std::vector<std::array<std::uint8_t, kMaxVars>> exps;  // exps[rank] = α
  std::vector<int> degree;                               // |α| per rank

  /// Rank of a multi-index, or -1 if |α| > order.
  int rank_of(std::span<const int> alpha) const;

  struct ProdTerm {
    int a, b, dst;
  };
  /// All ordered coefficient pairs with deg(a)+deg(b) ≤ order; dst = rank of α_a+α_b.
  std::vector<ProdTerm> prod;

  struct DerivTerm {
    int src, dst;
    double factor;  // α_i of src (coefficients store ∂^α f/α!)
  };
  std::vector<std::vector<DerivTerm>> deriv;  // per variable

  /// ranks of pure powers of w ordered by total degree, used by series composition
  std::vector<int> rank_by_degree_start;  // start offset of each degree block

 private:
  TaylorLayout(int vars, int order);
  std::vector<int> lookup_;  // dense (order+1)^vars table α -> rank
  int lookup_index(std::span<const int> alpha) const;
};

/// Truncated multivariate Taylor expansion around a point. Coefficients are stored
/// as monomial coefficients ∂^α f/α!, so truncated multiplication is a convolution.
/// Immutable value semantics; arithmetic between operands truncates to the smaller order.
class TaylorValue {
 public:
  TaylorValue() = default;

  static TaylorValue constant(int vars, int order, double v);
  static TaylorValue variable(int vars, int order, int index, double base_value);
  static TaylorValue zero(int vars, int order) { return constant(vars, order, 0.0); }

  bool valid() const { return layout_ != nullptr; }
  int vars() const { return layout_->vars; }
  int order() const { return layout_->order; }

  /// Value of the expansion at its center (the order-0 coefficient).
  double value() const { return c_[0]; }
  /// Monomial coefficient ∂^α f/α! (0 when |α| > order).
  double coeff(std::span<const int> alpha) const;
  /// Raw partial derivative ∂^α f = coeff · α!.
  double partial(std::span<const int> alpha) const;

  std::span<const double> coefficients() const { return c_; }

  /// ∂_i as a new expansion of order-1 lower.
  TaylorValue derivative(int i) const;
  /// Truncation to a lower order.
  TaylorValue truncated(int order) const;

  TaylorValue operator-() const;
  TaylorValue& operator+=(const TaylorValue& o);
  TaylorValue& operator-=(const TaylorValue& o);
  friend TaylorValue operator+(TaylorValue a, const TaylorValue& b) { return a += b; }
  friend TaylorValue operator-(TaylorValue a, const TaylorValue& b) { return a -= b; }
  friend TaylorValue operator*(const TaylorValue& a, const TaylorValue& b);
  friend TaylorValue operator/(const TaylorValue& a, const TaylorValue& b);

  friend TaylorValue operator+(TaylorValue a, double s);
  friend TaylorValue operator+(double s, TaylorValue a) { return std::move(a) + s; }
  friend TaylorValue operator-(TaylorValue a, double s) { return std::move(a) + (-s); }
  friend TaylorValue operator-(double s, const TaylorValue& a) { return (-a) + s; }
  friend TaylorValue operator*(TaylorValue a, double s);
  friend TaylorValue operator*(double s, TaylorValue a) { return std::move(a) * s; }
  friend TaylorValue operator/(TaylorValue a, double s) { return std::move(a) * (1.0 / s); }
  friend TaylorValue operator/(double s, const TaylorValue& a);

  friend TaylorValue exp(const TaylorValue& u);
  friend TaylorValue log(const TaylorValue& u);
  friend TaylorValue sqrt(const TaylorValue& u);
  friend TaylorValue sin(const TaylorValue& u);
  friend TaylorValue cos(const TaylorValue& u);
  friend TaylorValue tan(const TaylorValue& u);
  friend TaylorValue sinh(const TaylorValue& u);
  friend TaylorValue cosh(const TaylorValue& u);
  /// u^p. Integer p uses repeated multiplication (valid for any base);
  /// fractional p requires a positive base.
  friend TaylorValue pow(const TaylorValue& u, double p);

  double max_abs_coeff() const;

 private:
  TaylorValue(const TaylorLayout* layout) : layout_(layout), c_(layout->size, 0.0) {}
  /// Σ_j g[j]·(u − u(0))^j, the univariate chain rule at the truncation order.
  static TaylorValue compose_series(const TaylorValue& u, std::span<const double> g);

  const TaylorLayout* layout_ = nullptr;
  std::vector<double> c_;
};

/// |a - b| scaled by max(1, |a|, |b|): the residual measure used by all checks.
inline double scaled_residual(double a, double b) {
  double m = 1.0;
  double fa = a < 0 ? -a : a, fb = b < 0 ? -b : b;
  if (fa > m) m = fa;
  if (fb > m) m = fb;
  double d = a - b;
  return (d < 0 ? -d : d) / m;
}

}  // namespace cartan
