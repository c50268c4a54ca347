#pragma once

// Matrix representations: the Möbius group (size n+2) with its homogeneous
// subgroup, the projective group PSL(n+1) with its homogeneous subgroup, their
// graded Lie algebras, and the homomorphisms into the jet groups.

#include "cartan/jets.hpp"
#include "cartan/linalg.hpp"
#include "cartan/metric.hpp"

namespace cartan {

// --- factored parametrizations -----------------------------------------------

struct MobiusFactors {
  Mat<double> S;  // in O(n-1,1) (or O(n) for riemannian eta)
  double z = 1.0;
  Vec<double> t;  // translations
  Vec<double> r;  // special conformal parameters (covector)
};

struct HCFactors {
  Mat<double> S;
  double z = 1.0;
  Vec<double> r;
};

struct PSLFactors {
  Mat<double> S;  // GL(n) block
  Vec<double> b;  // bottom row
  Vec<double> c;  // translation column
  double d = 1.0;
};

// --- block builders (templated so gauge/dressing fields reuse them) ----------

/// K-factor of the Möbius group: upper-triangular with ½ r² in the corner.
/// With the ½ the subgroup is abelian, K(r)K(r') = K(r+r').
template <typename T>
Mat<T> mobius_k_factor(const Vec<T>& r, const Mat<double>& eta, const T& zero) {
  int n = static_cast<int>(r.size());
  T one = zero + 1.0;
  Mat<T> m = Mat<T>::identity(n + 2, one, zero);
  T r2 = zero;
  for (int a = 0; a < n; ++a) r2 += r[a] * r[a] * eta(a, a);
  for (int b = 0; b < n; ++b) {
    m(0, 1 + b) = r[b];
    m(1 + b, n + 1) = r[b] * eta(b, b);  // r^b = η^{bd} r_d
  }
  m(0, n + 1) = r2 * 0.5;
  return m;
}

/// Weyl/rotation factor diag(z, S, z⁻¹).
template <typename T>
Mat<T> mobius_co_factor(const Mat<T>& S, const T& z, const T& zero) {
  int n = S.rows();
  Mat<T> m = Mat<T>::identity(n + 2, zero + 1.0, zero);
  m(0, 0) = z;
  m(n + 1, n + 1) = zero + (1.0 / z);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) m(1 + a, 1 + b) = S(a, b);
  return m;
}

/// Translation factor, lower triangular with ½ t².
template <typename T>
Mat<T> mobius_t_factor(const Vec<T>& t, const Mat<double>& eta, const T& zero) {
  int n = static_cast<int>(t.size());
  Mat<T> m = Mat<T>::identity(n + 2, zero + 1.0, zero);
  T t2 = zero;
  for (int a = 0; a < n; ++a) t2 += t[a] * t[a] * eta(a, a);
  for (int a = 0; a < n; ++a) {
    m(1 + a, 0) = t[a];
    m(n + 1, 1 + a) = t[a] * eta(a, a);  // t_a
  }
  m(n + 1, 0) = t2 * 0.5;
  return m;
}

// --- Möbius group -------------------------------------------------------------

/// The invariant bilinear form: block anti-diagonal (−1, η, −1).
Mat<double> mobius_sigma(const Mat<double>& eta);

/// T·Z·K product. Validates S ∈ O(η) (1e−10) and z ≠ 0.
Mat<double> mobius_matrix(const MobiusFactors& f, const Mat<double>& eta);
Mat<double> hc_matrix(const HCFactors& f, const Mat<double>& eta);

double sigma_preservation_defect(const Mat<double>& m, const Mat<double>& eta);

/// Factor extraction: z from the (0,0) pivot, r from the top row, t from the
/// left column, S from the middle block. Throws DomainError when the pivot
/// vanishes (the product leaves the decomposable cell).
MobiusFactors refactor_mobius(const Mat<double>& m, const Mat<double>& eta);

/// Closed-form subgroup law (S'S, z'z, r + z⁻¹ r'S).
HCFactors hc_law_closed(const HCFactors& ap, const HCFactors& a);

/// Closed-form group law for the full Möbius group, a'∘a. Scalar and vector
/// factors in closed form (pivot Δ = 1 + r'·t + ¼ r'²t²); the S factor is fixed
/// by extraction from the product matrix.
MobiusFactors mobius_law_closed(const MobiusFactors& ap, const MobiusFactors& a,
                                const Mat<double>& eta);

/// Projective action of the homogeneous subgroup on the chart, x ↦ h·x.
Vec<double> mobius_action(const HCFactors& h, const Vec<double>& x, const Mat<double>& eta);

/// 2-jet of the action at 0: h^a_b = z⁻¹S^a_b and
/// h^a_{bc} = z⁻¹(S^a_d η^{de} r_e η_{bc} − r_b S^a_c − r_c S^a_b).
Jet2<double> conf_jet_of(const HCFactors& h, const Mat<double>& eta);
/// Conformal 3-jet (third order filled by the cyclic prolongation).
Jet3<double> conf_jet3_of(const HCFactors& h, const Mat<double>& eta);

// --- projective group ----------------------------------------------------------

/// Matrix normalized to det = 1 with the canonical center representative
/// (d > 0 when possible, else first nonzero diagonal entry positive).
Mat<double> psl_matrix(const PSLFactors& f);
PSLFactors refactor_psl(const Mat<double>& m);

/// Fractional-linear action y ↦ (Sy + c)/(b·y + d).
Vec<double> psl_action(const PSLFactors& a, const Vec<double>& y);

/// 2-jet of the action for c = 0: h^a_b = d⁻¹S^a_b, h^a_{bc} = −d⁻²(b_b S^a_c + b_c S^a_b).
Jet2<double> proj_jet_of(const PSLFactors& h);
Jet3<double> proj_jet3_of(const PSLFactors& h);

// --- graded algebras and the homomorphisms -------------------------------------

/// Conformal algebra matrix from graded data (A^k, A^k_ℓ in co(η), A_ℓ):
/// [[α⁰₀, A_b, 0], [A^a, α^a_b, η^{ac}A_c], [0, η_{cb}A^c, −α⁰₀]] with
/// α⁰₀ = −tr(A⁰)/n and α^a_b = A^a_b + α⁰₀δ.
template <typename T>
Mat<T> conformal_algebra_matrix(const JetAlgebra<T>& a, const Mat<double>& eta) {
  int n = a.dim();
  T zero = a.a0.zero_like();
  T a00 = zero;
  for (int i = 0; i < n; ++i) a00 -= a.a0(i, i);
  a00 = a00 * (1.0 / n);
  Mat<T> m(n + 2, n + 2, zero);
  m(0, 0) = a00;
  m(n + 1, n + 1) = -a00;
  for (int b = 0; b < n; ++b) {
    m(0, 1 + b) = a.a_p1[b];
    m(1 + b, n + 1) = a.a_p1[b] * eta(b, b);
    m(1 + b, 0) = a.a_m1[b];
    m(n + 1, 1 + b) = a.a_m1[b] * eta(b, b);
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(1 + i, 1 + j) = a.a0(i, j) + (i == j ? a00 : zero);
  return m;
}

/// Inverse of conformal_algebra_matrix: ᾶ^a_b = α^a_b − α⁰₀δ, ᾶ_b = α⁰_b, ᾶ^a = α^a_0.
template <typename T>
JetAlgebra<T> conformal_algebra_from_matrix(const Mat<T>& m) {
  int n = m.rows() - 2;
  T zero = m.zero_like();
  JetAlgebra<T> a = zero_algebra(n, zero);
  for (int b = 0; b < n; ++b) {
    a.a_p1[b] = m(0, 1 + b);
    a.a_m1[b] = m(1 + b, 0);
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a.a0(i, j) = m(1 + i, 1 + j) - (i == j ? m(0, 0) : zero);
  return a;
}

/// Projective algebra matrix [[α^a_b, A^a],[A_b, α⁰₀]], α⁰₀ = −tr(A⁰)/(n+1),
/// α^a_b = A^a_b + α⁰₀δ (traceless overall).
template <typename T>
Mat<T> projective_algebra_matrix(const JetAlgebra<T>& a) {
  int n = a.dim();
  T zero = a.a0.zero_like();
  T a00 = zero;
  for (int i = 0; i < n; ++i) a00 -= a.a0(i, i);
  a00 = a00 * (1.0 / (n + 1));
  Mat<T> m(n + 1, n + 1, zero);
  m(n, n) = a00;
  for (int b = 0; b < n; ++b) {
    m(b, n) = a.a_m1[b];
    m(n, b) = a.a_p1[b];
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = a.a0(i, j) + (i == j ? a00 : zero);
  return m;
}

template <typename T>
JetAlgebra<T> projective_algebra_from_matrix(const Mat<T>& m) {
  int n = m.rows() - 1;
  T zero = m.zero_like();
  JetAlgebra<T> a = zero_algebra(n, zero);
  for (int b = 0; b < n; ++b) {
    a.a_m1[b] = m(b, n);
    a.a_p1[b] = m(n, b);
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a.a0(i, j) = m(i, j) - (i == j ? m(n, n) : zero);
  return a;
}

/// Grade split of a conformal (n+2) or projective (n+1) algebra matrix into
/// (ξ₋₁, ξ₀, ξ₊₁); the three parts sum to the input exactly.
std::array<Mat<double>, 3> graded_split(const Mat<double>& m, Flavor flavor);

/// Shape defect of a conformal algebra matrix: ‖αᵀΣ + Σα‖ plus corner entries.
double conformal_algebra_shape_defect(const Mat<double>& m, const Mat<double>& eta);
/// Shape defect of a projective algebra matrix: |tr|.
double projective_algebra_shape_defect(const Mat<double>& m);

/// Adjoint action Ad(h⁻¹) on the jet-represented connection components, i.e. the
/// component form of h⁻¹·ω·h transported through the algebra homomorphism:
///   ω̃^a   ↦ z S̄^a_c ω̃^c
///   ω̃^a_b ↦ S̄ ω̃⁰ S + z r_b S̄ω̃ − z η^{ac}r_c ω̃^d η_{de}S^e_b + z δ^a_b r S̄ ω̃
///   ω̃_b   ↦ −r S̄ ω̃⁰ S + z⁻¹ ω̃₊ S − (r S̄ ω̃) r_b + ½ z r² ω̃^a η_{ac}S^c_b
JetAlgebra<double> hc_adjoint_inverse_components(const HCFactors& h, const JetAlgebra<double>& w,
                                                 const Mat<double>& eta);

}  // namespace cartan
