#include "cartan/taylor.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace cartan {

namespace {
int binom(int n, int k) {
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return static_cast<int>(r);
}
}  // namespace

TaylorLayout::TaylorLayout(int v, int k) : vars(v), order(k) {
  if (v < 1 || v > kMaxVars) throw ShapeError("taylor: variable count out of range");
  if (k < 0 || k > kMaxOrder) throw ShapeError("taylor: order out of range");
  size = binom(v + k, k);
  exps.reserve(size);
  degree.reserve(size);

  // graded-lex enumeration
  std::array<std::uint8_t, kMaxVars> a{};
  for (int d = 0; d <= k; ++d) {
    // enumerate exponent tuples of total degree d, lexicographic
    std::vector<int> e(v, 0);
    e[v - 1] = d;
    // walk compositions of d into v parts in reverse-lex so that x0-heavy come first
    std::function<void(int, int)> rec = [&](int pos, int left) {
      if (pos == v - 1) {
        e[pos] = left;
        a.fill(0);
        for (int i = 0; i < v; ++i) a[i] = static_cast<std::uint8_t>(e[i]);
        exps.push_back(a);
        degree.push_back(d);
        return;
      }
      for (int take = left; take >= 0; --take) {
        e[pos] = take;
        rec(pos + 1, left - take);
      }
    };
    rec(0, d);
  }

  // dense lookup
  int stride = k + 1;
  int table = 1;
  for (int i = 0; i < v; ++i) table *= stride;
  lookup_.assign(table, -1);
  for (int r = 0; r < size; ++r) {
    int idx = 0;
    for (int i = v - 1; i >= 0; --i) idx = idx * stride + exps[r][i];
    lookup_[idx] = r;
  }

  // product pairs
  for (int ra = 0; ra < size; ++ra) {
    for (int rb = 0; rb < size; ++rb) {
      if (degree[ra] + degree[rb] > k) continue;
      int idx = 0;
      for (int i = v - 1; i >= 0; --i) idx = idx * stride + exps[ra][i] + exps[rb][i];
      prod.push_back({ra, rb, lookup_[idx]});
    }
  }

  // derivative maps: coefficients store ∂^α/α!, so ∂_i maps rank(α+e_i) -> rank(α)
  // with factor (α_i + 1).
  deriv.resize(v);
  for (int i = 0; i < v; ++i) {
    for (int r = 0; r < size; ++r) {
      if (exps[r][i] == 0) continue;
      std::vector<int> al(v);
      for (int j = 0; j < v; ++j) al[j] = exps[r][j];
      al[i] -= 1;
      int idx = 0;
      for (int j = v - 1; j >= 0; --j) idx = idx * stride + al[j];
      deriv[i].push_back({r, lookup_[idx], static_cast<double>(exps[r][i])});
    }
  }

  rank_by_degree_start.assign(k + 2, size);
  for (int r = size - 1; r >= 0; --r) rank_by_degree_start[degree[r]] = r;
}

int TaylorLayout::lookup_index(std::span<const int> alpha) const {
  int stride = order + 1;
  int idx = 0;
  for (int i = vars - 1; i >= 0; --i) {
    if (alpha[i] < 0 || alpha[i] > order) return -1;
    idx = idx * stride + alpha[i];
  }
  return idx;
}

int TaylorLayout::rank_of(std::span<const int> alpha) const {
  int d = 0;
  for (int i = 0; i < vars; ++i) d += alpha[i];
  if (d > order) return -1;
  int idx = lookup_index(alpha);
  return idx < 0 ? -1 : lookup_[idx];
}

const TaylorLayout& TaylorLayout::get(int vars, int order) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<TaylorLayout>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(vars, order);
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache.emplace(key, std::unique_ptr<TaylorLayout>(new TaylorLayout(vars, order))).first;
  }
  return *it->second;
}

TaylorValue TaylorValue::constant(int vars, int order, double v) {
  TaylorValue t(&TaylorLayout::get(vars, order));
  t.c_[0] = v;
  return t;
}

TaylorValue TaylorValue::variable(int vars, int order, int index, double base_value) {
  if (index < 0 || index >= vars) throw ShapeError("taylor: variable index out of range");
  TaylorValue t(&TaylorLayout::get(vars, order));
  t.c_[0] = base_value;
  if (order >= 1) {
    std::vector<int> alpha(vars, 0);
    alpha[index] = 1;
    t.c_[t.layout_->rank_of(alpha)] = 1.0;
  }
  return t;
}

double TaylorValue::coeff(std::span<const int> alpha) const {
  int r = layout_->rank_of(alpha);
  return r < 0 ? 0.0 : c_[r];
}

double TaylorValue::partial(std::span<const int> alpha) const {
  int r = layout_->rank_of(alpha);
  if (r < 0) return 0.0;
  double fact = 1.0;
  for (int i = 0; i < layout_->vars; ++i)
    for (int j = 2; j <= alpha[i]; ++j) fact *= j;
  return c_[r] * fact;
}

TaylorValue TaylorValue::derivative(int i) const {
  if (layout_->order == 0) throw ShapeError("taylor: cannot differentiate order-0 data");
  TaylorValue out(&TaylorLayout::get(layout_->vars, layout_->order - 1));
  const auto& src_layout = *layout_;
  const auto& dst_layout = *out.layout_;
  for (const auto& t : src_layout.deriv[i]) {
    // dst rank in src layout maps to the same exponent tuple in dst layout
    std::vector<int> al(src_layout.vars);
    for (int j = 0; j < src_layout.vars; ++j) al[j] = src_layout.exps[t.dst][j];
    out.c_[dst_layout.rank_of(al)] = c_[t.src] * t.factor;
  }
  return out;
}

TaylorValue TaylorValue::truncated(int order) const {
  if (order == layout_->order) return *this;
  if (order > layout_->order) throw ShapeError("taylor: cannot extend truncation order");
  TaylorValue out(&TaylorLayout::get(layout_->vars, order));
  for (int r = 0; r < out.layout_->size; ++r) {
    std::vector<int> al(layout_->vars);
    for (int j = 0; j < layout_->vars; ++j) al[j] = out.layout_->exps[r][j];
    out.c_[r] = c_[layout_->rank_of(al)];
  }
  return out;
}

namespace {
// Align two operands to a common (minimum) order.
void align(TaylorValue& a, TaylorValue& b) {
  if (a.order() > b.order()) a = a.truncated(b.order());
  if (b.order() > a.order()) b = b.truncated(a.order());
}
}  // namespace

TaylorValue TaylorValue::operator-() const {
  TaylorValue out = *this;
  for (auto& x : out.c_) x = -x;
  return out;
}

TaylorValue& TaylorValue::operator+=(const TaylorValue& o) {
  if (layout_->vars != o.layout_->vars) throw ShapeError("taylor: mixed variable counts");
  if (o.layout_->order < layout_->order) *this = truncated(o.layout_->order);
  if (o.layout_->order > layout_->order) {
    TaylorValue t = o.truncated(layout_->order);
    for (int r = 0; r < layout_->size; ++r) c_[r] += t.c_[r];
    return *this;
  }
  for (int r = 0; r < layout_->size; ++r) c_[r] += o.c_[r];
  return *this;
}

TaylorValue& TaylorValue::operator-=(const TaylorValue& o) { return *this += -o; }

TaylorValue operator*(const TaylorValue& a0, const TaylorValue& b0) {
  TaylorValue a = a0, b = b0;
  if (a.layout_->vars != b.layout_->vars) throw ShapeError("taylor: mixed variable counts");
  align(a, b);
  TaylorValue out(a.layout_);
  for (const auto& t : a.layout_->prod) out.c_[t.dst] += a.c_[t.a] * b.c_[t.b];
  return out;
}

TaylorValue operator+(TaylorValue a, double s) {
  a.c_[0] += s;
  return a;
}

TaylorValue operator*(TaylorValue a, double s) {
  for (auto& x : a.c_) x *= s;
  return a;
}

TaylorValue TaylorValue::compose_series(const TaylorValue& u, std::span<const double> g) {
  // w = u - u(0); result = g0 + g1 w + g2 w² + g3 w³ (truncated at u's order)
  TaylorValue w = u;
  w.c_[0] = 0.0;
  TaylorValue out = TaylorValue::constant(u.vars(), u.order(), g[0]);
  TaylorValue wp = w;
  for (int j = 1; j <= u.order() && j < static_cast<int>(g.size()); ++j) {
    out += wp * g[j];
    if (j < u.order()) wp = wp * w;
  }
  return out;
}

TaylorValue operator/(const TaylorValue& a, const TaylorValue& b) { return a * (1.0 / b); }

TaylorValue operator/(double s, const TaylorValue& a) {
  double u0 = a.value();
  if (u0 == 0.0) throw DomainError("taylor: division by zero");
  std::array<double, kMaxOrder + 1> g{};
  double p = 1.0 / u0;
  for (int j = 0; j <= a.order(); ++j) {
    g[j] = (j % 2 == 0 ? p : -p);
    p /= u0;
  }
  return TaylorValue::compose_series(a, {g.data(), static_cast<size_t>(a.order() + 1)}) * s;
}

TaylorValue exp(const TaylorValue& u) {
  std::array<double, kMaxOrder + 1> g{};
  double e0 = std::exp(u.value());
  double f = 1.0;
  for (int j = 0; j <= u.order(); ++j) {
    g[j] = e0 / f;
    f *= (j + 1);
  }
  return TaylorValue::compose_series(u, {g.data(), static_cast<size_t>(u.order() + 1)});
}

TaylorValue log(const TaylorValue& u) {
  double u0 = u.value();
  if (u0 <= 0.0) throw DomainError("taylor: log of non-positive value");
  std::array<double, kMaxOrder + 1> g{};
  g[0] = std::log(u0);
  double p = 1.0 / u0;
  for (int j = 1; j <= u.order(); ++j) {
    g[j] = (j % 2 == 1 ? p : -p) / j;
    p /= u0;
  }
  return TaylorValue::compose_series(u, {g.data(), static_cast<size_t>(u.order() + 1)});
}

TaylorValue pow(const TaylorValue& u, double p) {
  double ip;
  if (std::modf(p, &ip) == 0.0 && std::abs(ip) <= 16.0) {
    int k = static_cast<int>(ip);
    TaylorValue out = TaylorValue::constant(u.vars(), u.order(), 1.0);
    TaylorValue base = k >= 0 ? u : 1.0 / u;
    for (int i = std::abs(k); i > 0; --i) out = out * base;
    return out;
  }
  double u0 = u.value();
  if (u0 <= 0.0) throw DomainError("taylor: fractional power of non-positive value");
  std::array<double, kMaxOrder + 1> g{};
  double f = 1.0, c = 1.0;
  for (int j = 0; j <= u.order(); ++j) {
    g[j] = c * std::pow(u0, p - j) / f;
    c *= (p - j);
    f *= (j + 1);
  }
  return TaylorValue::compose_series(u, {g.data(), static_cast<size_t>(u.order() + 1)});
}

TaylorValue sqrt(const TaylorValue& u) {
  if (u.value() <= 0.0) throw DomainError("taylor: sqrt of non-positive value");
  return pow(u, 0.5);
}

TaylorValue sin(const TaylorValue& u) {
  double s = std::sin(u.value()), c = std::cos(u.value());
  std::array<double, kMaxOrder + 1> g = {s, c, -s / 2.0, -c / 6.0};
  return TaylorValue::compose_series(u, {g.data(), static_cast<size_t>(u.order() + 1)});
}

TaylorValue cos(const TaylorValue& u) {
  double s = std::sin(u.value()), c = std::cos(u.value());
  std::array<double, kMaxOrder + 1> g = {c, -s, -c / 2.0, s / 6.0};
  return TaylorValue::compose_series(u, {g.data(), static_cast<size_t>(u.order() + 1)});
}

TaylorValue tan(const TaylorValue& u) {
  double t0 = std::tan(u.value());
  double d1 = 1.0 + t0 * t0;           // f'
  double d2 = 2.0 * t0 * d1;           // f''
  double d3 = 2.0 * d1 * d1 + 2.0 * t0 * d2;  // f'''
  std::array<double, kMaxOrder + 1> g = {t0, d1, d2 / 2.0, d3 / 6.0};
  return TaylorValue::compose_series(u, {g.data(), static_cast<size_t>(u.order() + 1)});
}

TaylorValue sinh(const TaylorValue& u) {
  double s = std::sinh(u.value()), c = std::cosh(u.value());
  std::array<double, kMaxOrder + 1> g = {s, c, s / 2.0, c / 6.0};
  return TaylorValue::compose_series(u, {g.data(), static_cast<size_t>(u.order() + 1)});
}

TaylorValue cosh(const TaylorValue& u) {
  double s = std::sinh(u.value()), c = std::cosh(u.value());
  std::array<double, kMaxOrder + 1> g = {c, s, c / 2.0, s / 6.0};
  return TaylorValue::compose_series(u, {g.data(), static_cast<size_t>(u.order() + 1)});
}

double TaylorValue::max_abs_coeff() const {
  double m = 0.0;
  for (double x : c_) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace cartan
