#pragma once

// Random smooth fields for the property suites: polynomial Taylor data, random
// sections of the reduced frame bundles, and gauge fields valued in the reduced
// subgroups. Deterministic given the Rng stream.

#include "cartan/cartan_forms.hpp"
#include "cartan/rng.hpp"

namespace cartan {

/// Taylor data of a random polynomial at the evaluation point: a random constant
/// plus degree-damped random higher coefficients.
TaylorValue random_taylor(Rng& rng, int vars, int order, double amplitude);

/// Random invertible section of the reduced bundle: e = (perturbation of δ), and
/// a random smooth e_a(x).
SectionJet random_section(Rng& rng, int n, int order, Flavor flavor, double amplitude = 0.35);

/// Random smooth covector field (for special-conformal / projective gauge stages).
Vec<TaylorValue> random_covector_field(Rng& rng, int n, int order, double amplitude = 0.4);

/// Random smooth isometry-valued field exp(Σ f_k(x) B_k) with B_k a basis of the
/// η-antisymmetric matrices.
Mat<TaylorValue> random_isometry_field(Rng& rng, const Mat<double>& eta, int order,
                                       double amplitude = 0.35);

/// Random smooth GL(n)-valued field near the identity.
Mat<TaylorValue> random_gl_field(Rng& rng, int n, int order, double amplitude = 0.3);

/// Random positive scale field (for Weyl stages).
TaylorValue random_scale_field(Rng& rng, int n, int order, double amplitude = 0.3);

/// Gauge field of the requested kind with random smooth parameters.
GaugeField random_gauge_field(Rng& rng, GaugeField::Kind kind, int n, const Mat<double>& eta,
                              int order);

/// Conformal 3-jet gauge field with random smooth (S(x), z(x), r(x)).
Jet3<TaylorValue> random_conformal_jet_field(Rng& rng, const Mat<double>& eta, int order);

}  // namespace cartan
