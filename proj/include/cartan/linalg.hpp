#pragma once

#include <cmath>
#include <initializer_list>
#include <vector>

#include "cartan/taylor.hpp"
#include "cartan/util.hpp"

namespace cartan {

/// Pivot magnitude: |x| for doubles, |value at center| for Taylor data.
inline double pivot_magnitude(double x) { return std::abs(x); }
inline double pivot_magnitude(const TaylorValue& x) { return std::abs(x.value()); }

/// Small dense row-major matrix over double or TaylorValue. Everything in this
/// project is at most (n+2)x(n+2) with n <= 5, so no effort is spent on blocking.
template <typename T>
class Mat {
 public:
  Mat() = default;
  Mat(int rows, int cols, const T& fill = T{}) : rows_(rows), cols_(cols), d_(rows * cols, fill) {}

  static Mat identity(int n, const T& one, const T& zero) {
    Mat m(n, n, zero);
    for (int i = 0; i < n; ++i) m(i, i) = one;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  T& operator()(int i, int j) { return d_[i * cols_ + j]; }
  const T& operator()(int i, int j) const { return d_[i * cols_ + j]; }

  Mat operator+(const Mat& o) const {
    Mat r = *this;
    for (size_t i = 0; i < d_.size(); ++i) r.d_[i] += o.d_[i];
    return r;
  }
  Mat operator-(const Mat& o) const {
    Mat r = *this;
    for (size_t i = 0; i < d_.size(); ++i) r.d_[i] -= o.d_[i];
    return r;
  }
  Mat operator-() const {
    Mat r = *this;
    for (auto& x : r.d_) x = -x;
    return r;
  }
  Mat operator*(const Mat& o) const {
    Mat r(rows_, o.cols_, zero_like());
    for (int i = 0; i < rows_; ++i)
      for (int k = 0; k < cols_; ++k) {
        const T& aik = (*this)(i, k);
        for (int j = 0; j < o.cols_; ++j) r(i, j) += aik * o(k, j);
      }
    return r;
  }
  template <typename S>
  Mat scaled(const S& s) const {
    Mat r = *this;
    for (auto& x : r.d_) x = x * s;
    return r;
  }
  Mat transposed() const {
    Mat r(cols_, rows_, zero_like());
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
  }

  const std::vector<T>& data() const { return d_; }
  std::vector<T>& data() { return d_; }

  T zero_like() const { return d_.empty() ? T{} : d_[0] - d_[0]; }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<T> d_;
};

template <typename T>
using Vec = std::vector<T>;

/// Rank-3 array, laid out a-major.
template <typename T>
class Ten3 {
 public:
  Ten3() = default;
  Ten3(int n0, int n1, int n2, const T& fill = T{})
      : n0_(n0), n1_(n1), n2_(n2), d_(n0 * n1 * n2, fill) {}
  T& operator()(int i, int j, int k) { return d_[(i * n1_ + j) * n2_ + k]; }
  const T& operator()(int i, int j, int k) const { return d_[(i * n1_ + j) * n2_ + k]; }
  int dim0() const { return n0_; }
  int dim1() const { return n1_; }
  int dim2() const { return n2_; }
  const std::vector<T>& data() const { return d_; }
  std::vector<T>& data() { return d_; }

 private:
  int n0_ = 0, n1_ = 0, n2_ = 0;
  std::vector<T> d_;
};

/// Rank-4 array.
template <typename T>
class Ten4 {
 public:
  Ten4() = default;
  Ten4(int n0, int n1, int n2, int n3, const T& fill = T{})
      : n0_(n0), n1_(n1), n2_(n2), n3_(n3), d_(n0 * n1 * n2 * n3, fill) {}
  T& operator()(int i, int j, int k, int l) { return d_[((i * n1_ + j) * n2_ + k) * n3_ + l]; }
  const T& operator()(int i, int j, int k, int l) const {
    return d_[((i * n1_ + j) * n2_ + k) * n3_ + l];
  }
  int dim0() const { return n0_; }
  int dim1() const { return n1_; }
  int dim2() const { return n2_; }
  int dim3() const { return n3_; }
  const std::vector<T>& data() const { return d_; }
  std::vector<T>& data() { return d_; }

 private:
  int n0_ = 0, n1_ = 0, n2_ = 0, n3_ = 0;
  std::vector<T> d_;
};

/// LU decomposition with partial pivoting on center-value magnitude.
/// Works over any commutative ring with division by units (double, TaylorValue).
template <typename T>
struct LU {
  Mat<T> lu;
  std::vector<int> perm;
  int sign = 1;

  explicit LU(Mat<T> m) : lu(std::move(m)) {
    int n = lu.rows();
    if (n != lu.cols()) throw ShapeError("lu: matrix not square");
    perm.resize(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    for (int c = 0; c < n; ++c) {
      int p = c;
      double best = pivot_magnitude(lu(c, c));
      for (int r = c + 1; r < n; ++r) {
        double m2 = pivot_magnitude(lu(r, c));
        if (m2 > best) {
          best = m2;
          p = r;
        }
      }
      if (best < 1e-300) throw SingularError("lu: singular matrix");
      if (p != c) {
        for (int j = 0; j < n; ++j) std::swap(lu(c, j), lu(p, j));
        std::swap(perm[c], perm[p]);
        sign = -sign;
      }
      for (int r = c + 1; r < n; ++r) {
        T f = lu(r, c) / lu(c, c);
        lu(r, c) = f;
        for (int j = c + 1; j < n; ++j) lu(r, j) -= f * lu(c, j);
      }
    }
  }

  Vec<T> solve(const Vec<T>& b) const {
    int n = lu.rows();
    Vec<T> x(n);
    for (int i = 0; i < n; ++i) x[i] = b[perm[i]];
    for (int i = 1; i < n; ++i)
      for (int j = 0; j < i; ++j) x[i] -= lu(i, j) * x[j];
    for (int i = n - 1; i >= 0; --i) {
      for (int j = i + 1; j < n; ++j) x[i] -= lu(i, j) * x[j];
      x[i] = x[i] / lu(i, i);
    }
    return x;
  }

  T det() const {
    int n = lu.rows();
    T d = lu(0, 0);
    for (int i = 1; i < n; ++i) d = d * lu(i, i);
    return sign > 0 ? d : -d;
  }
};

template <typename T>
Mat<T> inverse(const Mat<T>& m) {
  int n = m.rows();
  LU<T> lu(m);
  Mat<T> inv(n, n, m.zero_like());
  T zero = m.zero_like();
  Vec<T> e(n, zero);
  for (int c = 0; c < n; ++c) {
    for (int i = 0; i < n; ++i) e[i] = zero;
    e[c] = zero + 1.0;
    Vec<T> x = lu.solve(e);
    for (int i = 0; i < n; ++i) inv(i, c) = x[i];
  }
  return inv;
}

template <typename T>
T determinant(const Mat<T>& m) {
  return LU<T>(m).det();
}

/// Matrix exponential by scaling-and-squaring with a plain series.
/// Entries stay O(1) in this project, so 14 series terms reach machine precision.
template <typename T>
Mat<T> expm(const Mat<T>& m) {
  int n = m.rows();
  double norm = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) norm = std::max(norm, pivot_magnitude(m(i, j)));
  int squarings = 0;
  double scale = 1.0;
  while (norm * scale > 0.5 && squarings < 30) {
    scale *= 0.5;
    ++squarings;
  }
  T zero = m.zero_like();
  T one = zero + 1.0;
  Mat<T> x = m.scaled(scale);
  Mat<T> out = Mat<T>::identity(n, one, zero);
  Mat<T> term = Mat<T>::identity(n, one, zero);
  for (int k = 1; k <= 14; ++k) {
    term = term * x;
    term = term.scaled(1.0 / k);
    out = out + term;
  }
  for (int s = 0; s < squarings; ++s) out = out * out;
  return out;
}

// --- residual helpers used throughout the checks ---

inline double max_abs(double x) { return std::abs(x); }
inline double max_abs(const TaylorValue& x) { return std::abs(x.value()); }

template <typename T>
double max_abs(const Mat<T>& m) {
  double r = 0.0;
  for (const auto& x : m.data()) r = std::max(r, max_abs(x));
  return r;
}
template <typename T>
double max_abs(const Vec<T>& v) {
  double r = 0.0;
  for (const auto& x : v) r = std::max(r, max_abs(x));
  return r;
}
template <typename T>
double max_abs(const Ten3<T>& t) {
  double r = 0.0;
  for (const auto& x : t.data()) r = std::max(r, max_abs(x));
  return r;
}
template <typename T>
double max_abs(const Ten4<T>& t) {
  double r = 0.0;
  for (const auto& x : t.data()) r = std::max(r, max_abs(x));
  return r;
}

/// max_ij |a-b| / max(1, |a|, |b|), on center values.
template <typename C>
double residual(const C& a, const C& b) {
  double scale = std::max(1.0, std::max(max_abs(a), max_abs(b)));
  C d = a;
  // element-wise difference via data()
  for (size_t i = 0; i < d.data().size(); ++i) d.data()[i] -= b.data()[i];
  return max_abs(d) / scale;
}

inline double residual(double a, double b) { return scaled_residual(a, b); }
inline double residual(const TaylorValue& a, const TaylorValue& b) {
  return scaled_residual(a.value(), b.value());
}

template <typename T>
double residual(const Vec<T>& a, const Vec<T>& b) {
  double scale = std::max(1.0, std::max(max_abs(a), max_abs(b)));
  double r = 0.0;
  for (size_t i = 0; i < a.size(); ++i) r = std::max(r, max_abs(a[i] - b[i]));
  return r / scale;
}

}  // namespace cartan
