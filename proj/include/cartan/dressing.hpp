#pragma once

// The dressing field method: stage-1 and stage-0 dressing fields built from the
// section data, the dressed (mostly gauge-invariant) connections, residual Weyl
// transformations, and tractor fields with their covariant derivative.

#include "cartan/cartan_forms.hpp"

namespace cartan {

/// Dressing fields of the two reduction stages and their product.
/// Stage 1 absorbs ẽ_a = e_a + Υ_μ e^μ_a; stage 0 absorbs the co-frame.
struct DressingFields {
  Mat<TaylorValue> u1, u0;
  Mat<TaylorValue> combined() const { return u1 * u0; }
};

DressingFields build_dressings(const BaseGeometry& base, const SectionJet& sec,
                               const Mat<double>& eta);

/// Dressing uses the same algebra as a gauge transformation; one code path.
inline MatrixConnection dress(const MatrixConnection& conn, const Mat<TaylorValue>& u) {
  return transform_connection(conn, u);
}

/// The full pipeline at one point: assembled connection, dressing fields, the
/// partially dressed ϖ₁ and the fully dressed ϖ₀.
struct DressedPipeline {
  MatrixConnection raw;
  DressingFields u;
  MatrixConnection stage1;
  MatrixConnection dressed;
};
DressedPipeline run_dressing(const BaseGeometry& base, const SectionJet& sec,
                             const Mat<double>& eta);

/// The dressed connection assembled directly from the base tensors:
/// conformal [[0, P, 0], [δ, Γ, P♯], [0, g, 0]], projective [[Γ, δ], [P, 0]].
MatrixConnection expected_dressed(const BaseGeometry& base, Flavor flavor);

/// Stage-1 content check: sup-norm defect of the ϖ₁ blocks against
/// (θ^a, θ^a_μ de^μ_b + θ^a_μ Γ^μ_{νλ} e^ν_b dx^λ, e^μ_b P_{μλ} dx^λ) with
/// vanishing scalar blocks.
double verify_stage1(const DressedPipeline& pipe, const BaseGeometry& base,
                     const SectionJet& sec);

/// Full-pipeline invariance: recomputes everything from the gauge-transformed
/// section and returns ‖ϖ₀^γ − ϖ₀‖∞ over the matrix blocks.
double verify_invariance(const BaseGeometry& base, const SectionJet& sec,
                         const GaugeField& gauge, const Mat<double>& eta);

/// Residual Weyl data: the scale field and its logarithmic derivative.
struct ResidualTransform {
  TaylorValue z;
  Vec<TaylorValue> zeta;  // ζ_μ = z⁻¹ ∂_μ z
  static ResidualTransform from_scale(const TaylorValue& z);
};

/// The matrix Z of the unreduced dilation gauge direction.
Mat<TaylorValue> weyl_z_matrix(const ResidualTransform& rt, int n, Flavor flavor);

/// The residual factor C(z): projective z·[[δ, 0], [ζ_ν, 1]]; conformal
/// [[z, zζ_ν, ½z⁻¹ζ²_g], [0, zδ, z⁻¹g^{μν}ζ_ν], [0, 0, z⁻¹]] (needs the inverse
/// metric to raise ζ).
Mat<TaylorValue> weyl_c_matrix(const ResidualTransform& rt, const BaseGeometry& base,
                               Flavor flavor);

/// Weyl-transformed dressed connection C⁻¹ϖ₀C + C⁻¹dC together with the blocks
/// extracted for the transformation laws.
struct ResidualWeylResult {
  MatrixConnection transformed;
  Ten3<TaylorValue> gamma_z;  // projective: top-left block Γ^Z
  Mat<TaylorValue> schouten_z;  // projective: bottom row P^Z (ν, λ)
};
ResidualWeylResult residual_weyl(const MatrixConnection& dressed, const ResidualTransform& rt,
                                 const BaseGeometry& base, Flavor flavor);

/// u^Z factorization defect: ‖u(Z-transformed section) − Z⁻¹ u C(z)‖.
double weyl_factorization_defect(const BaseGeometry& base, const SectionJet& sec,
                                 const ResidualTransform& rt, const Mat<double>& eta);

/// Tractor field: components (ρ, l^μ|l^a, σ) conformal or (l, σ) projective,
/// tagged by how far down the dressing pipeline it has been carried.
enum class TractorStage { raw, stage1, stage0 };

struct TractorField {
  Flavor flavor = Flavor::projective;
  Vec<TaylorValue> comp;
  TractorStage stage = TractorStage::raw;
  int size() const { return static_cast<int>(comp.size()); }
};

/// Staged dressing of a tractor: φ₁ = u₁⁻¹φ, then φ₀ = u₀⁻¹φ₁. Requires a raw
/// field; throws ShapeError on a stage mismatch.
TractorField tractor_dress(const TractorField& phi, const DressingFields& u);

/// Covariant derivative D₀φ₀ = dφ₀ + ϖ₀φ₀, one component vector per direction.
std::vector<Vec<TaylorValue>> tractor_derivative(const MatrixConnection& dressed,
                                                 const TractorField& phi0);

/// Residual Weyl action on dressed tractors: φ₀ ↦ C(z)⁻¹φ₀. Stage-0 input only.
TractorField tractor_weyl(const TractorField& phi0, const Mat<TaylorValue>& c_matrix);

}  // namespace cartan
