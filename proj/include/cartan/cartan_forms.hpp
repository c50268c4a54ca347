#pragma once

// Local Cartan connections over a chart: the canonical form of the 2-frame
// bundle, the normal conformal and projective connections in graded-jet and
// matrix representations, the flat-model Poincaré connection, curvature by the
// structure equation, gauge transformations, and the normality / equivariance /
// base-dependence checks. All coefficients carry Taylor data, so every exterior
// derivative is exact.

#include "cartan/groups.hpp"
#include "cartan/jets.hpp"
#include "cartan/metric.hpp"

namespace cartan {

inline JetFlavor jet_flavor(Flavor f) {
  return f == Flavor::conformal ? JetFlavor::conformal : JetFlavor::projective;
}

/// A section value of the reduced 2-frame bundle at a point: e^μ_a(x) and e_a(x)
/// with Taylor data. The co-frame θ^a_μ is the matrix inverse.
struct SectionJet {
  Mat<TaylorValue> e;        // e^μ_a, row μ, column a
  Vec<TaylorValue> e_lower;  // e_a
  Flavor flavor = Flavor::conformal;
  int dim() const { return e.rows(); }
  Mat<TaylorValue> theta() const { return inverse(e); }
};

/// Orthonormal section with e_a ≡ 0 (the default section of every pipeline).
SectionJet orthonormal_section(const MetricData& m, Flavor flavor);
/// Same frame with a prescribed e_a(x).
SectionJet orthonormal_section(const MetricData& m, Flavor flavor, Vec<TaylorValue> e_lower);

/// Algebra-valued local 1-form in the graded jet representation, one algebra
/// value per base direction.
struct GradedConnection {
  Flavor flavor = Flavor::conformal;
  std::vector<JetAlgebra<TaylorValue>> comp;  // [λ]
  int base_dim() const { return static_cast<int>(comp.size()); }
};

/// Matrix-valued local 1-form, size n+2 (conformal) or n+1 (projective/Poincaré).
struct MatrixConnection {
  std::vector<Mat<TaylorValue>> comp;  // [λ]
  int base_dim() const { return static_cast<int>(comp.size()); }
  int size() const { return comp.empty() ? 0 : comp[0].rows(); }
};

double connection_residual(const GradedConnection& a, const GradedConnection& b);
double connection_residual(const MatrixConnection& a, const MatrixConnection& b);

/// Canonical form of the 2-frame bundle at a section value:
/// θ^a = θ^a_μ dx^μ and θ^a_b = θ^a_λ(de^λ_b − e^λ_{bc}θ^c), with e^λ_{bc}
/// reconstructed from (e, e_a) by the section's flavor.
struct CanonicalForm {
  Mat<TaylorValue> theta;  // θ^a_μ
  Ten3<TaylorValue> theta_ab;  // θ^a_{b,λ}
};
CanonicalForm canonical_form(const SectionJet& sec, const Mat<double>& eta);

/// Residual of dθ^a + θ^a_b ∧ θ^b = 0 at the section (largest component).
double canonical_form_identity_defect(const SectionJet& sec, const Mat<double>& eta);

/// The normal Cartan connection in the graded jet representation, assembled
/// termwise from the section data and the base coefficients Π.
GradedConnection normal_connection_graded(const BaseGeometry& base, const SectionJet& sec,
                                          const Mat<double>& eta);

/// The same connection in the matrix representation, assembled independently
/// from its own component displays (not through the homomorphism).
MatrixConnection normal_connection_matrix(const BaseGeometry& base, const SectionJet& sec,
                                          const Mat<double>& eta);

/// Transport between the two representations through the algebra homomorphism.
MatrixConnection matrix_from_graded(const GradedConnection& g, const Mat<double>& eta);
GradedConnection graded_from_matrix(const MatrixConnection& m, Flavor flavor);

/// Flat-model Poincaré connection [[A^a_b, θ^a],[0,0]] with the torsion-free
/// metric spin connection A computed from the co-frame anholonomy alone.
MatrixConnection poincare_connection(const MetricData& m, const SectionJet& sec);

/// Curvature by the structure equation: Ω_{λρ} = ∂_λϖ_ρ − ∂_ρϖ_λ + [ϖ_λ, ϖ_ρ].
struct CurvatureValue {
  std::vector<Mat<TaylorValue>> comp;  // flattened (λ,ρ) grid, row-major
  int base_dim = 0;
  const Mat<TaylorValue>& at(int l, int r) const { return comp[l * base_dim + r]; }
};
CurvatureValue curvature(const MatrixConnection& conn);

/// Matrix gauge transformation / dressing: ϖ ↦ γ⁻¹ϖγ + γ⁻¹dγ. Dressing runs through the
/// identical code path.
MatrixConnection transform_connection(const MatrixConnection& conn,
                                      const Mat<TaylorValue>& gamma);

/// Normality report: torsion sup-norm and the K^a_{bac} trace sup-norm of the
/// frame-resolved grade-0 curvature.
struct NormalityReport {
  double torsion_norm = 0.0;
  double ricci_trace_norm = 0.0;
};
NormalityReport check_normality(const BaseGeometry& base, const SectionJet& sec,
                                const Mat<double>& eta);
/// Same check with Π_{μν} shifted by +delta·δ_{μν} (the detector probe).
NormalityReport check_normality_perturbed(const BaseGeometry& base, const SectionJet& sec,
                                          const Mat<double>& eta, double delta);

/// Extraction of the base coefficients from an assembled connection at a known
/// section: inverts the canonical-form split. Returns (Π^μ_{νλ}, Π_{μν}).
struct PiExtraction {
  Ten3<TaylorValue> pi1;
  Mat<TaylorValue> pi2;
};
PiExtraction extract_pi(const GradedConnection& conn, const SectionJet& sec,
                        const Mat<double>& eta);

/// Right-translates the section by a constant subgroup element (reduced action).
SectionJet translate_section(const SectionJet& sec, const Mat<double>& h1,
                             const Vec<double>& hb);

/// Equivariance residual: the connection at the translated section against
/// Ad(h⁻¹) of the connection at the section (constant h, so no derivative term).
double check_equivariance(const BaseGeometry& base, const SectionJet& sec,
                          const Mat<double>& h1, const Vec<double>& hb,
                          const Mat<double>& h_matrix, const Mat<double>& eta);

/// Local reconstruction from a trivializing section: Ad(h⁻¹)(σ*ω̃) + h⁻¹dh per
/// base direction, with h a conformal 3-jet gauge field carrying Taylor data.
GradedConnection reconstruct_local_connection(const GradedConnection& sigma_pullback,
                                              const Jet3<TaylorValue>& h,
                                              const Mat<double>& eta);

/// Smooth gauge fields with values in the reduced subgroups.
struct GaugeField {
  enum class Kind {
    special_conformal,   // K(r(x)) ⊂ Möbius
    lorentz,             // block-diagonal S(x) ∈ O(η)
    weyl,                // diag(z, 1, .., z⁻¹) (conformal) or diag(1,..,1, z) (projective)
    projective_covector, // [[δ, 0], [r_b(x), 1]]
    projective_gl        // [[S(x), 0], [0, 1]]
  };
  Kind kind;
  Vec<TaylorValue> r;       // covector parameter fields
  Mat<TaylorValue> s;       // matrix parameter field
  TaylorValue z;            // scale parameter field

  /// Matrix value at the evaluation point (size n+2 or n+1 by kind).
  Mat<TaylorValue> matrix(const Mat<double>& eta) const;
  /// The gauge-transformed section (pointwise right action by the field value).
  SectionJet apply_to_section(const SectionJet& sec) const;
};

}  // namespace cartan
