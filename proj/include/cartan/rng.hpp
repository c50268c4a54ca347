#pragma once

#include <cstdint>
#include <random>

#include "cartan/linalg.hpp"

namespace cartan {

/// Deterministic random source. Uniforms are mapped by hand from the raw engine
/// output so reports are byte-identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return (engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Box-Muller; deterministic given the engine stream.
  double normal() {
    double u1 = uniform(), u2 = uniform();
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  Vec<double> vec(int n, double lo, double hi) {
    Vec<double> v(n);
    for (auto& x : v) x = uniform(lo, hi);
    return v;
  }

  Mat<double> mat(int rows, int cols, double lo, double hi) {
    Mat<double> m(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) m(i, j) = uniform(lo, hi);
    return m;
  }

  /// Random element of the identity component of the isometry group of eta,
  /// as exp of a random eta-antisymmetric generator.
  Mat<double> isometry(const Mat<double>& eta, double amplitude = 0.6) {
    int n = eta.rows();
    Mat<double> a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        double v = uniform(-amplitude, amplitude);
        // eta-antisymmetric: A^a_b with eta_{ac}A^c_b + eta_{bc}A^c_a = 0
        a(i, j) = v;
        a(j, i) = -v * eta(j, j) * eta(i, i);
      }
    return expm(a);
  }

  /// Random GL(n) element near the identity (always invertible at this amplitude).
  Mat<double> gl(int n, double amplitude = 0.5) {
    Mat<double> m = Mat<double>::identity(n, 1.0, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) += uniform(-amplitude, amplitude) / n;
    return m;
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace cartan
