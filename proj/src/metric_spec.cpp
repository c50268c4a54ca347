#include "cartan/metric_spec.hpp"

#include "cartan/corpus.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace cartan {

namespace {

struct RawValue {
  enum class Kind { number, string, number_list, string_list } kind;
  double number = 0.0;
  std::string str;
  std::vector<double> numbers;
  std::vector<std::string> strings;
  int line = 0;
};

struct RawSpec {
  // section -> key -> value; top-level keys live under ""
  std::map<std::string, std::map<std::string, RawValue>> entries;
};

[[noreturn]] void fail(const std::string& msg, int line) {
  throw ParseError("spec: " + msg + " (line " + std::to_string(line) + ")", 0);
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

RawValue parse_value(const std::string& text, int line) {
  RawValue v;
  v.line = line;
  std::string t = trim(text);
  if (t.empty()) fail("missing value", line);
  if (t.front() == '"') {
    if (t.size() < 2 || t.back() != '"') fail("unterminated string", line);
    v.kind = RawValue::Kind::string;
    v.str = t.substr(1, t.size() - 2);
    return v;
  }
  if (t.front() == '[') {
    if (t.back() != ']') fail("unterminated list", line);
    std::string inner = t.substr(1, t.size() - 2);
    std::vector<std::string> items;
    std::string cur;
    int depth = 0;
    bool instr = false;
    for (char c : inner) {
      if (c == '"') instr = !instr;
      if (!instr && c == ',' && depth == 0) {
        items.push_back(trim(cur));
        cur.clear();
        continue;
      }
      cur += c;
    }
    if (!trim(cur).empty()) items.push_back(trim(cur));
    bool all_strings = !items.empty() && items[0].size() && items[0][0] == '"';
    if (all_strings) {
      v.kind = RawValue::Kind::string_list;
      for (auto& it : items) {
        if (it.size() < 2 || it.front() != '"' || it.back() != '"')
          fail("list mixes strings and numbers", line);
        v.strings.push_back(it.substr(1, it.size() - 2));
      }
    } else {
      v.kind = RawValue::Kind::number_list;
      for (auto& it : items) {
        try {
          size_t used = 0;
          v.numbers.push_back(std::stod(it, &used));
          if (used != it.size()) fail("bad number '" + it + "'", line);
        } catch (const std::exception&) {
          fail("bad number '" + it + "'", line);
        }
      }
    }
    return v;
  }
  try {
    size_t used = 0;
    v.number = std::stod(t, &used);
    if (used != t.size()) fail("bad value '" + t + "'", line);
    v.kind = RawValue::Kind::number;
  } catch (const std::exception&) {
    fail("bad value '" + t + "'", line);
  }
  return v;
}

RawSpec parse_raw(const std::string& text) {
  RawSpec raw;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    size_t hash = t.find('#');
    // respect '#' inside quotes
    bool instr = false;
    for (size_t i = 0; i < t.size(); ++i) {
      if (t[i] == '"') instr = !instr;
      if (t[i] == '#' && !instr) {
        hash = i;
        break;
      }
      hash = std::string::npos;
    }
    if (hash != std::string::npos) t = trim(t.substr(0, hash));
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']') fail("unterminated section header", lineno);
      section = trim(t.substr(1, t.size() - 2));
      continue;
    }
    size_t eq = t.find('=');
    if (eq == std::string::npos) fail("expected key = value", lineno);
    std::string key = trim(t.substr(0, eq));
    if (key.empty()) fail("empty key", lineno);
    if (raw.entries[section].count(key)) fail("duplicate key '" + key + "'", lineno);
    raw.entries[section][key] = parse_value(t.substr(eq + 1), lineno);
  }
  return raw;
}

const RawValue* find(const RawSpec& raw, const std::string& section, const std::string& key) {
  auto sit = raw.entries.find(section);
  if (sit == raw.entries.end()) return nullptr;
  auto kit = sit->second.find(key);
  return kit == sit->second.end() ? nullptr : &kit->second;
}

}  // namespace

SectionJet MetricSpec::section(const MetricData& data, Flavor flavor, const Point& x,
                               int order) const {
  SectionJet sec = frame_override
                       ? SectionJet{Mat<TaylorValue>(dimension, dimension, data.zero),
                                    Vec<TaylorValue>(dimension, data.zero), flavor}
                       : orthonormal_section(data, flavor);
  if (frame_override) {
    for (int mu = 0; mu < dimension; ++mu)
      for (int a = 0; a < dimension; ++a) sec.e(mu, a) = (*frame_override)(mu, a).eval(x, order);
  }
  if (covector_override) {
    for (int a = 0; a < dimension; ++a) sec.e_lower[a] = (*covector_override)[a].eval(x, order);
  }
  return sec;
}

std::vector<Point> MetricSpec::sample_points(int count) const {
  return halton_cloud(base_point, sample_halfwidth, count);
}

MetricSpec parse_spec_text(const std::string& text, const std::string& display_name) {
  RawSpec raw = parse_raw(text);
  MetricSpec spec;

  const RawValue* name = find(raw, "", "name");
  spec.name = name && name->kind == RawValue::Kind::string ? name->str : display_name;

  const RawValue* dim = find(raw, "", "dimension");
  if (!dim || dim->kind != RawValue::Kind::number)
    throw ShapeError("spec '" + display_name + "': missing numeric 'dimension'");
  spec.dimension = static_cast<int>(dim->number);
  if (spec.dimension < 3)
    throw ShapeError("spec '" + display_name + "': dimension must be at least 3");
  if (spec.dimension > kMaxVars)
    throw ShapeError("spec '" + display_name + "': dimension exceeds the supported maximum");

  const RawValue* sig = find(raw, "", "signature");
  if (!sig || sig->kind != RawValue::Kind::string)
    throw ShapeError("spec '" + display_name + "': missing 'signature'");
  if (sig->str == "lorentzian") spec.signature = Signature::lorentzian;
  else if (sig->str == "riemannian") spec.signature = Signature::riemannian;
  else throw ShapeError("spec '" + display_name + "': signature must be lorentzian or riemannian");

  if (const RawValue* coords = find(raw, "", "coordinates")) {
    if (coords->kind != RawValue::Kind::string_list)
      throw ShapeError("spec '" + display_name + "': coordinates must be a string list");
    spec.coordinates = coords->strings;
  }
  spec.base_point.assign(spec.dimension, 0.0);
  if (const RawValue* bp = find(raw, "", "base_point")) {
    if (bp->kind != RawValue::Kind::number_list ||
        static_cast<int>(bp->numbers.size()) != spec.dimension)
      throw ShapeError("spec '" + display_name + "': base_point needs one entry per dimension");
    spec.base_point = bp->numbers;
  }
  if (const RawValue* hw = find(raw, "", "sample_halfwidth")) {
    if (hw->kind != RawValue::Kind::number || hw->number <= 0)
      throw ShapeError("spec '" + display_name + "': sample_halfwidth must be positive");
    spec.sample_halfwidth = hw->number;
  }

  int n = spec.dimension;
  auto mit = raw.entries.find("metric");
  if (mit == raw.entries.end())
    throw ShapeError("spec '" + display_name + "': missing [metric] table");
  Mat<ScalarField> table(n, n);
  for (const auto& [key, value] : mit->second) {
    if (key.size() != 3 || key[0] != 'g' || !std::isdigit(key[1]) || !std::isdigit(key[2]))
      fail("unknown metric key '" + key + "' (expected gIJ)", value.line);
    int i = key[1] - '0', j = key[2] - '0';
    if (i >= n || j >= n) fail("metric index out of range in '" + key + "'", value.line);
    if (value.kind != RawValue::Kind::string)
      fail("metric entry '" + key + "' must be a quoted expression", value.line);
    ScalarField f;
    try {
      f = ScalarField::parse(value.str, n);
    } catch (const ParseError& e) {
      fail("in '" + key + "': " + e.what(), value.line);
    }
    if (table(i, j).valid() || (i != j && table(j, i).valid() &&
                                !expr_equal(table(j, i).ast(), f.ast())))
      fail("asymmetric or duplicate metric entry '" + key + "'", value.line);
    table(i, j) = f;
  }
  try {
    spec.metric = std::make_shared<ExprMetric>(n, spec.signature, std::move(table));
  } catch (const ShapeError& e) {
    throw ShapeError("spec '" + display_name + "': " + e.what());
  }

  if (auto sit = raw.entries.find("section"); sit != raw.entries.end()) {
    Mat<ScalarField> frame(n, n);
    Vec<ScalarField> cov(n);
    bool any_frame = false, any_cov = false;
    for (const auto& [key, value] : sit->second) {
      if (value.kind != RawValue::Kind::string)
        fail("section entry '" + key + "' must be a quoted expression", value.line);
      ScalarField f;
      try {
        f = ScalarField::parse(value.str, n);
      } catch (const ParseError& e) {
        fail("in '" + key + "': " + e.what(), value.line);
      }
      if (key.size() == 3 && key[0] == 'e' && key[1] == '_' && std::isdigit(key[2])) {
        int a = key[2] - '0';
        if (a >= n) fail("section index out of range in '" + key + "'", value.line);
        cov[a] = f;
        any_cov = true;
      } else if (key.size() == 3 && key[0] == 'e' && std::isdigit(key[1]) &&
                 std::isdigit(key[2])) {
        int mu = key[1] - '0', a = key[2] - '0';
        if (mu >= n || a >= n) fail("section index out of range in '" + key + "'", value.line);
        frame(mu, a) = f;
        any_frame = true;
      } else {
        fail("unknown section key '" + key + "' (expected eMA or e_A)", value.line);
      }
    }
    if (any_frame) {
      for (int mu = 0; mu < n; ++mu)
        for (int a = 0; a < n; ++a)
          if (!frame(mu, a).valid()) frame(mu, a) = ScalarField::constant(0.0, n);
      spec.frame_override = std::move(frame);
    }
    if (any_cov) {
      for (int a = 0; a < n; ++a)
        if (!cov[a].valid()) cov[a] = ScalarField::constant(0.0, n);
      spec.covector_override = std::move(cov);
    }
  }

  // validations at the base point: invertibility and declared signature
  MetricData data = eval_metric(*spec.metric, spec.base_point, 1);
  try {
    orthonormal_coframe(data);
  } catch (const ShapeError&) {
    throw ShapeError("spec '" + display_name +
                     "': metric does not have the declared signature at the base point");
  }
  return spec;
}

MetricSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open spec file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  std::string name = path;
  size_t slash = name.find_last_of('/');
  if (slash != std::string::npos) name = name.substr(slash + 1);
  size_t dot = name.find_last_of('.');
  if (dot != std::string::npos) name = name.substr(0, dot);
  return parse_spec_text(buf.str(), name);
}

}  // namespace cartan
