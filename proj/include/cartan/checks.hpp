#pragma once

// Named verification suites shared by the command-line tool and the acceptance
// runner. Every record carries its own pinned tolerance.

#include <cstdint>

#include "cartan/metric_spec.hpp"
#include "cartan/report.hpp"

namespace cartan {

/// Group-theoretic property suites (no metric involved): jet composition against
/// the polynomial oracle, group laws against matrix refactorization, the jet
/// homomorphisms against the action oracles, the adjoint representation, and the
/// Maurer-Cartan form.
std::vector<CheckRecord> group_checks(int n, int samples, std::uint64_t seed);

/// Per-metric verification: structure identities, normality, representation
/// consistency, equivariance, base dependence, the dressing pipeline, residual
/// Weyl and tractor laws, and the flat-model cross-check.
std::vector<CheckRecord> metric_checks(const MetricSpec& spec, int points, int gauge_samples,
                                       std::uint64_t seed, double tol_override = 0.0);

/// One acceptance criterion with its records.
struct CriterionResult {
  int index = 0;
  std::string title;
  std::vector<CheckRecord> records;
  bool pass() const {
    for (const auto& r : records)
      if (!r.pass()) return false;
    return true;
  }
  double worst() const {
    double w = 0.0;
    for (const auto& r : records)
      if (!r.detector) w = std::max(w, r.max_residual);
    return w;
  }
};

/// The full acceptance suite (criteria 1-13, determinism included).
std::vector<CriterionResult> acceptance_suite(std::uint64_t seed);

/// Body of the `verify` command; also used to exercise report determinism.
RunReport run_verify(const MetricSpec& spec, std::uint64_t seed, int points, int gauge_samples,
                     double tol_override = 0.0);

}  // namespace cartan
