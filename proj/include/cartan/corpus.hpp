#pragma once

#include <memory>
#include <string>
#include <vector>

#include "cartan/metric.hpp"

namespace cartan {

/// One entry of the metric corpus used by tests, the verification suites and the CLI.
struct CorpusEntry {
  std::string name;
  std::shared_ptr<const ExprMetric> metric;
  Point base_point;
  double sample_halfwidth = 0.5;
  /// In this chart −Γ^μ_{νρ} has the pure-trace shape of a conformal 2nd-order
  /// section, so the chart-identity trivializing section is admissible.
  bool conformally_flat_chart = false;
};

/// The shipped corpus: flat space in n = 3,4,5, two conformally flat metrics,
/// the round 3-sphere in a polar chart, and a fixed polynomial perturbation of η.
/// Matches the files under corpus/ one-to-one.
const std::vector<CorpusEntry>& standard_corpus();

/// Entry by name; throws Error when absent.
const CorpusEntry& corpus_entry(const std::string& name);

/// Deterministic low-discrepancy (Halton) cloud of `count` points in the box
/// of half-width `halfwidth` around `center`.
std::vector<Point> halton_cloud(const Point& center, double halfwidth, int count);

/// Cloud in the entry's sample box.
std::vector<Point> sample_cloud(const CorpusEntry& entry, int count);

}  // namespace cartan
