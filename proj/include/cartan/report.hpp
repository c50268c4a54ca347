#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "cartan/groups.hpp"
#include "cartan/linalg.hpp"

namespace cartan {

using Json = nlohmann::ordered_json;

/// One verification record. Most checks pass when the residual stays below the
/// tolerance; detector probes pass when the response exceeds it.
struct CheckRecord {
  std::string name;
  int samples = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  bool detector = false;  // passes when the response exceeds the tolerance floor
  bool pass() const { return passed; }
};

inline CheckRecord make_check(std::string name, int samples, double residual, double tol) {
  return {std::move(name), samples, residual, tol, residual < tol};
}
inline CheckRecord make_detector(std::string name, int samples, double response, double floor) {
  return {std::move(name), samples, response, floor, response > floor, true};
}

/// Machine-readable run report. The JSON form is deterministic for a fixed
/// command line and seed (wall time is reported on the console, not here).
struct RunReport {
  std::string command;
  Json arguments = Json::object();
  std::vector<CheckRecord> checks;
  Json values = Json::object();

  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass()) return false;
    return true;
  }
  Json to_json() const;
  std::string text_summary() const;
};

// JSON helpers for tensor blocks (center values).
Json json_matrix(const Mat<TaylorValue>& m);
Json json_matrix(const Mat<double>& m);
Json json_vector(const Vec<TaylorValue>& v);
Json json_ten3(const Ten3<TaylorValue>& t);

// Golden-test serialization of jets and group elements.
Json json_jet(const Jet3<double>& j);
Json json_jet(const Jet2<double>& j);
Json json_mobius(const MobiusFactors& f, const Mat<double>& eta);
Json json_psl(const PSLFactors& f);

/// Named component blocks of a matrix connection, one object per base
/// direction: conformal {w_a_0, w_0_0, w_a_b, w_0_b}, projective the same
/// block names in the (n+1)-matrix layout.
Json json_connection_blocks(const std::vector<Mat<TaylorValue>>& comp, Flavor flavor);

}  // namespace cartan
