#include "cartan/report.hpp"

#include <sstream>

namespace cartan {

Json RunReport::to_json() const {
  Json j;
  j["command"] = command;
  j["arguments"] = arguments;
  Json checks_json = Json::array();
  for (const auto& c : checks) {
    Json rec;
    rec["name"] = c.name;
    rec["samples"] = c.samples;
    rec["max_residual"] = c.max_residual;
    rec["tolerance"] = c.tolerance;
    if (c.detector) rec["detector"] = true;
    rec["pass"] = c.pass();
    checks_json.push_back(rec);
  }
  j["checks"] = checks_json;
  if (!values.empty()) j["values"] = values;
  j["pass"] = pass();
  return j;
}

std::string RunReport::text_summary() const {
  std::ostringstream out;
  for (const auto& c : checks) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-52s %5d samples  max %.3e  tol %.1e  %s\n",
                  c.name.c_str(), c.samples, c.max_residual, c.tolerance,
                  c.pass() ? "ok" : "FAIL");
    out << buf;
  }
  return out.str();
}

Json json_matrix(const Mat<TaylorValue>& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j).value());
    rows.push_back(row);
  }
  return rows;
}

Json json_matrix(const Mat<double>& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

Json json_vector(const Vec<TaylorValue>& v) {
  Json row = Json::array();
  for (const auto& x : v) row.push_back(x.value());
  return row;
}

Json json_ten3(const Ten3<TaylorValue>& t) {
  Json outer = Json::array();
  for (int i = 0; i < t.dim0(); ++i) {
    Json mid = Json::array();
    for (int j = 0; j < t.dim1(); ++j) {
      Json inner = Json::array();
      for (int k = 0; k < t.dim2(); ++k) inner.push_back(t(i, j, k).value());
      mid.push_back(inner);
    }
    outer.push_back(mid);
  }
  return outer;
}

}  // namespace cartan

namespace cartan {

namespace {
Json json_ten3_raw(const Ten3<double>& t) {
  Json outer = Json::array();
  for (int i = 0; i < t.dim0(); ++i) {
    Json mid = Json::array();
    for (int j = 0; j < t.dim1(); ++j) {
      Json inner = Json::array();
      for (int k = 0; k < t.dim2(); ++k) inner.push_back(t(i, j, k));
      mid.push_back(inner);
    }
    outer.push_back(mid);
  }
  return outer;
}
Json json_ten4_raw(const Ten4<double>& t) {
  Json o0 = Json::array();
  for (int i = 0; i < t.dim0(); ++i) {
    Json o1 = Json::array();
    for (int j = 0; j < t.dim1(); ++j) {
      Json o2 = Json::array();
      for (int k = 0; k < t.dim2(); ++k) {
        Json o3 = Json::array();
        for (int l = 0; l < t.dim3(); ++l) o3.push_back(t(i, j, k, l));
        o2.push_back(o3);
      }
      o1.push_back(o2);
    }
    o0.push_back(o1);
  }
  return o0;
}
const char* flavor_tag(JetFlavor tag) {
  switch (tag) {
    case JetFlavor::general: return "general";
    case JetFlavor::conformal: return "conformal";
    case JetFlavor::projective: return "projective";
  }
  return "general";
}
}  // namespace

Json json_jet(const Jet2<double>& j) {
  Json out;
  out["order"] = 2;
  out["tag"] = flavor_tag(j.tag);
  out["first"] = json_matrix(j.j1);
  out["second"] = json_ten3_raw(j.j2);
  return out;
}

Json json_jet(const Jet3<double>& j) {
  Json out = json_jet(j.truncate2());
  out["order"] = 3;
  out["third"] = json_ten4_raw(j.j3);
  return out;
}

Json json_mobius(const MobiusFactors& f, const Mat<double>& eta) {
  Json out;
  out["S"] = json_matrix(f.S);
  out["z"] = f.z;
  Json t = Json::array(), r = Json::array();
  for (double v : f.t) t.push_back(v);
  for (double v : f.r) r.push_back(v);
  out["t"] = t;
  out["r"] = r;
  out["matrix"] = json_matrix(mobius_matrix(f, eta));
  return out;
}

Json json_psl(const PSLFactors& f) {
  Json out;
  out["S"] = json_matrix(f.S);
  Json b = Json::array(), c = Json::array();
  for (double v : f.b) b.push_back(v);
  for (double v : f.c) c.push_back(v);
  out["b"] = b;
  out["c"] = c;
  out["d"] = f.d;
  out["matrix"] = json_matrix(psl_matrix(f));
  return out;
}

Json json_connection_blocks(const std::vector<Mat<TaylorValue>>& comp, Flavor flavor) {
  Json per_direction = Json::array();
  for (const auto& m : comp) {
    int size = m.rows();
    int n = flavor == Flavor::conformal ? size - 2 : size - 1;
    Json slot;
    Json wa0 = Json::array(), w0b = Json::array();
    Json wab = Json::array();
    if (flavor == Flavor::conformal) {
      for (int a = 0; a < n; ++a) wa0.push_back(m(1 + a, 0).value());
      slot["w_a_0"] = wa0;
      slot["w_0_0"] = m(0, 0).value();
      for (int a = 0; a < n; ++a) {
        Json row = Json::array();
        for (int b = 0; b < n; ++b) row.push_back(m(1 + a, 1 + b).value());
        wab.push_back(row);
      }
      slot["w_a_b"] = wab;
      for (int b = 0; b < n; ++b) w0b.push_back(m(0, 1 + b).value());
      slot["w_0_b"] = w0b;
    } else {
      for (int a = 0; a < n; ++a) wa0.push_back(m(a, n).value());
      slot["w_a_0"] = wa0;
      slot["w_0_0"] = m(n, n).value();
      for (int a = 0; a < n; ++a) {
        Json row = Json::array();
        for (int b = 0; b < n; ++b) row.push_back(m(a, b).value());
        wab.push_back(row);
      }
      slot["w_a_b"] = wab;
      for (int b = 0; b < n; ++b) w0b.push_back(m(n, b).value());
      slot["w_0_b"] = w0b;
    }
    per_direction.push_back(slot);
  }
  return per_direction;
}

}  // namespace cartan
