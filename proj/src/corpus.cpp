#include "cartan/corpus.hpp"

#include <cmath>

namespace cartan {

namespace {

std::shared_ptr<const ExprMetric> diag_metric(int n, Signature sig,
                                              const std::vector<std::string>& diag) {
  Mat<ScalarField> table(n, n);
  for (int i = 0; i < n; ++i) table(i, i) = ScalarField::parse(diag[i], n);
  return std::make_shared<ExprMetric>(n, sig, std::move(table));
}

std::shared_ptr<const ExprMetric> flat(int n) {
  std::vector<std::string> d(n, "1");
  d[0] = "-1";
  return diag_metric(n, Signature::lorentzian, d);
}

std::shared_ptr<const ExprMetric> conformally_flat(int n, const std::string& two_phi) {
  std::vector<std::string> d(n, "exp(" + two_phi + ")");
  d[0] = "-exp(" + two_phi + ")";
  return diag_metric(n, Signature::lorentzian, d);
}

std::shared_ptr<const ExprMetric> perturbed_flat4() {
  const int n = 4;
  Mat<ScalarField> t(n, n);
  auto set = [&](int i, int j, const std::string& s) { t(i, j) = ScalarField::parse(s, n); };
  set(0, 0, "-(1 + 0.1*(0.4*x1 + 0.3*x2*x2))");
  set(1, 1, "1 + 0.1*(0.5*x0 + 0.2*x3*x3)");
  set(2, 2, "1 + 0.1*(0.3*x0*x1 - 0.4*x3)");
  set(3, 3, "1 + 0.1*(0.2*x1*x2 + 0.5*x0*x0)");
  set(0, 1, "0.1*(0.3*x2 + 0.2*x0*x1)");
  set(0, 2, "0.1*(0.25*x3*x3 - 0.2*x1)");
  set(0, 3, "0.1*0.15*x0*x2");
  set(1, 2, "0.1*(0.35*x0 - 0.1*x3)");
  set(1, 3, "0.1*(0.2*x1*x1 - 0.3*x2)");
  set(2, 3, "0.1*(0.4*x0*x3 + 0.1*x1)");
  return std::make_shared<ExprMetric>(n, Signature::lorentzian, std::move(t));
}

std::shared_ptr<const ExprMetric> sphere3() {
  const int n = 3;
  Mat<ScalarField> t(n, n);
  t(0, 0) = ScalarField::parse("1", n);
  t(1, 1) = ScalarField::parse("sin(x0)^2", n);
  t(2, 2) = ScalarField::parse("sin(x0)^2*sin(x1)^2", n);
  return std::make_shared<ExprMetric>(n, Signature::riemannian, std::move(t));
}

}  // namespace

const std::vector<CorpusEntry>& standard_corpus() {
  static const std::vector<CorpusEntry> corpus = [] {
    std::vector<CorpusEntry> c;
    c.push_back({"flat3", flat(3), {0, 0, 0}, 0.5, true});
    c.push_back({"flat4", flat(4), {0, 0, 0, 0}, 0.5, true});
    c.push_back({"flat5", flat(5), {0, 0, 0, 0, 0}, 0.5, true});
    c.push_back({"conf_flat", conformally_flat(4, "2*x0"), {0, 0, 0, 0}, 0.4, true});
    c.push_back({"conf_sin", conformally_flat(4, "0.6*sin(x1)"), {0, 0, 0, 0}, 0.4, true});
    c.push_back({"sphere3", sphere3(), {1.0, 0.9, 0.7}, 0.15, false});
    c.push_back({"perturb4", perturbed_flat4(), {0, 0, 0, 0}, 0.4, false});
    return c;
  }();
  return corpus;
}

const CorpusEntry& corpus_entry(const std::string& name) {
  for (const auto& e : standard_corpus())
    if (e.name == name) return e;
  throw Error("unknown corpus metric '" + name + "'");
}

std::vector<Point> halton_cloud(const Point& center, double halfwidth, int count) {
  static const int primes[kMaxVars] = {2, 3, 5, 7, 11, 13, 17, 19};
  int n = static_cast<int>(center.size());
  std::vector<Point> pts;
  pts.reserve(count);
  for (int k = 1; k <= count; ++k) {
    Point p(n);
    for (int i = 0; i < n; ++i) {
      double f = 1.0, r = 0.0;
      int idx = k;
      while (idx > 0) {
        f /= primes[i];
        r += f * (idx % primes[i]);
        idx /= primes[i];
      }
      p[i] = center[i] + halfwidth * (2.0 * r - 1.0);
    }
    pts.push_back(std::move(p));
  }
  return pts;
}

std::vector<Point> sample_cloud(const CorpusEntry& entry, int count) {
  return halton_cloud(entry.base_point, entry.sample_halfwidth, count);
}

}  // namespace cartan
