#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace prelat::cli {

namespace {

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> table = {
      {"domain", {"kind", "lower", "upper", "vertices", "radius", "center", "sides"}},
      {"metric", {"kind", "dim", "entries", "a", "b", "w0", "c"}},
      {"cutoff", {"pairs"}},
      {"deformation", {"kind", "matrix", "shift", "a", "b"}},
      {"run",
       {"eps", "case", "mesh", "grid", "h", "workers", "seed", "gauge", "max_iterations",
        "tolerance", "smoothing", "regularization", "subdivisions", "literal"}},
  };
  return table;
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void fail_line(int line, const std::string& what) {
  throw std::runtime_error("config line " + std::to_string(line) + ": " + what);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string piece;
  std::istringstream in(text);
  while (std::getline(in, piece, sep)) parts.push_back(trim(piece));
  return parts;
}

}  // namespace

bool Config::has(const std::string& section, const std::string& key) const {
  auto s = sections.find(section);
  return s != sections.end() && s->second.count(key) > 0;
}

const std::string& Config::get(const std::string& section, const std::string& key) const {
  auto s = sections.find(section);
  if (s == sections.end()) throw std::runtime_error("config: missing section [" + section + "]");
  auto k = s->second.find(key);
  if (k == s->second.end())
    throw std::runtime_error("config: missing key '" + key + "' in section [" + section + "]");
  return k->second;
}

std::string Config::get_or(const std::string& section, const std::string& key,
                           const std::string& fallback) const {
  return has(section, key) ? get(section, key) : fallback;
}

std::string Config::canonical() const {
  std::string out;
  for (const auto& [name, keys] : sections) {
    out += "[" + name + "]\n";
    for (const auto& [key, value] : keys) out += key + "=" + value + "\n";
  }
  return out;
}

std::uint64_t Config::hash() const { return fnv1a(canonical()); }

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

Config parse_config_text(const std::string& text) {
  Config config;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = trim(raw);
    const std::size_t comment = s.find_first_of("#;");
    if (comment != std::string::npos) s = trim(s.substr(0, comment));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail_line(line, "unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      if (!known_keys().count(section)) fail_line(line, "unknown section [" + section + "]");
      config.sections[section];
      continue;
    }
    const std::size_t eq = s.find('=');
    if (eq == std::string::npos) fail_line(line, "expected key=value");
    if (section.empty()) fail_line(line, "key before any section header");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (!known_keys().at(section).count(key))
      fail_line(line, "unknown key '" + key + "' in section [" + section + "]");
    if (config.sections[section].count(key)) fail_line(line, "duplicate key '" + key + "'");
    if (value.empty()) fail_line(line, "empty value for key '" + key + "'");
    config.sections[section][key] = value;
  }
  return config;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

double to_double(const std::string& text, const std::string& context) {
  const std::string t = trim(text);
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size())
    throw std::runtime_error(context + ": not a number: '" + text + "'");
  return v;
}

int to_int(const std::string& text, const std::string& context) {
  const double v = to_double(text, context);
  if (v != std::floor(v) || std::abs(v) > 1e9)
    throw std::runtime_error(context + ": not an integer: '" + text + "'");
  return static_cast<int>(v);
}

long to_long(const std::string& text, const std::string& context) {
  return static_cast<long>(to_int(text, context));
}

std::vector<double> to_doubles(const std::string& text, const std::string& context) {
  std::vector<double> out;
  for (const std::string& piece : split(text, ','))
    out.push_back(to_double(piece, context));
  if (out.empty()) throw std::runtime_error(context + ": empty list");
  return out;
}

Domain domain_from(const Config& config) {
  const std::string kind = config.get("domain", "kind");
  if (kind == "box") {
    const auto lo = to_doubles(config.get("domain", "lower"), "[domain] lower");
    const auto hi = to_doubles(config.get("domain", "upper"), "[domain] upper");
    if (lo.size() != hi.size()) throw std::runtime_error("[domain]: lower/upper size mismatch");
    Vec l(lo.size()), u(hi.size());
    for (std::size_t i = 0; i < lo.size(); ++i) {
      l[i] = lo[i];
      u[i] = hi[i];
    }
    return Domain::box(l, u);
  }
  if (kind == "polygon") {
    std::vector<Eigen::Vector2d> verts;
    for (const std::string& pair : split(config.get("domain", "vertices"), ';')) {
      const auto xy = to_doubles(pair, "[domain] vertices");
      if (xy.size() != 2) throw std::runtime_error("[domain] vertices: expected x,y pairs");
      verts.emplace_back(xy[0], xy[1]);
    }
    return Domain::convex_polygon(std::move(verts));
  }
  if (kind == "disk") {
    const double radius = to_double(config.get_or("domain", "radius", "1"), "[domain] radius");
    const auto c = to_doubles(config.get_or("domain", "center", "0,0"), "[domain] center");
    if (c.size() != 2) throw std::runtime_error("[domain] center: expected x,y");
    const int sides = to_int(config.get_or("domain", "sides", "64"), "[domain] sides");
    return Domain::disk(radius, {c[0], c[1]}, sides);
  }
  throw std::runtime_error("[domain] kind: unknown '" + kind + "'");
}

MetricField metric_from(const Config& config) {
  const std::string kind = config.get("metric", "kind");
  if (kind == "identity") {
    return identity_metric(to_int(config.get_or("metric", "dim", "2"), "[metric] dim"));
  }
  if (kind == "diag") {
    const auto e = to_doubles(config.get("metric", "entries"), "[metric] entries");
    Vec d(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) d[i] = e[i];
    return diagonal_metric(d);
  }
  if (kind == "constant") {
    const auto e = to_doubles(config.get("metric", "entries"), "[metric] entries");
    const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(e.size()))));
    if (static_cast<std::size_t>(n) * n != e.size())
      throw std::runtime_error("[metric] entries: need a square count of values");
    Mat G0(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) G0(i, j) = e[static_cast<std::size_t>(i) * n + j];
    return constant_metric(G0);
  }
  if (kind == "example1" || kind == "curved-diagonal") {
    const double a = to_double(config.get_or("metric", "a", "0.25"), "[metric] a");
    const double b = to_double(config.get_or("metric", "b", "2"), "[metric] b");
    return flat_metric_curved_diagonal(a, b);
  }
  if (kind == "example2" || kind == "unit-shear") {
    const double w0 = to_double(config.get_or("metric", "w0", "0.9"), "[metric] w0");
    const double c = to_double(config.get_or("metric", "c", "0.3"), "[metric] c");
    return unit_diagonal_shear_metric(w0, c);
  }
  if (kind == "pullback-sine") {
    const double a = to_double(config.get_or("metric", "a", "0.1"), "[metric] a");
    const double b = to_double(config.get_or("metric", "b", "1"), "[metric] b");
    return pullback_metric(sine_shear_map(a, b));
  }
  throw std::runtime_error("[metric] kind: unknown '" + kind + "'");
}

Cutoff cutoff_from(const Config& config) {
  Cutoff psi;
  for (const std::string& pair : split(config.get("cutoff", "pairs"), ',')) {
    const auto rw = split(pair, ':');
    if (rw.size() != 2) throw std::runtime_error("[cutoff] pairs: expected radius_sq:weight");
    psi.weights.emplace_back(to_long(rw[0], "[cutoff] radius_sq"),
                             to_double(rw[1], "[cutoff] weight"));
  }
  return psi;
}

bool has_cutoff(const Config& config) { return config.has("cutoff", "pairs"); }

bool has_deformation(const Config& config) { return config.has("deformation", "kind"); }

std::function<Vec(const Vec&)> deformation_from(const Config& config, const MetricField& G,
                                                const Domain& omega) {
  const std::string kind = config.get("deformation", "kind");
  const int n = omega.dimension();
  if (kind == "identity") {
    const AnalyticMap m = identity_map(n);
    return m.value;
  }
  if (kind == "linear" || kind == "affine") {
    const auto e = to_doubles(config.get("deformation", "matrix"), "[deformation] matrix");
    if (e.size() != static_cast<std::size_t>(n) * n)
      throw std::runtime_error("[deformation] matrix: need dim^2 row-major values");
    Mat M(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) M(i, j) = e[static_cast<std::size_t>(i) * n + j];
    Vec shift = Vec::Zero(n);
    if (kind == "affine") {
      const auto s = to_doubles(config.get("deformation", "shift"), "[deformation] shift");
      if (s.size() != static_cast<std::size_t>(n))
        throw std::runtime_error("[deformation] shift: size mismatch");
      for (int i = 0; i < n; ++i) shift[i] = s[i];
    }
    const AnalyticMap m = affine_map(M, shift);
    return m.value;
  }
  if (kind == "sine-shear") {
    if (n != 2) throw std::runtime_error("[deformation] sine-shear: 2d domains only");
    const double a = to_double(config.get_or("deformation", "a", "0.1"), "[deformation] a");
    const double b = to_double(config.get_or("deformation", "b", "1"), "[deformation] b");
    const AnalyticMap m = sine_shear_map(a, b);
    return m.value;
  }
  if (kind == "center-stretch") {
    return center_stretch_map(G, omega);
  }
  throw std::runtime_error("[deformation] kind: unknown '" + kind + "'");
}

DescentOptions RunParams::descent() const {
  DescentOptions options;
  options.max_iterations = max_iterations;
  options.gradient_tolerance = tolerance;
  options.smoothing_scale = smoothing;
  options.regularization = regularization;
  options.gauge = gauge;
  options.workers = workers;
  return options;
}

RunParams run_from(const Config& config) {
  RunParams params;
  if (const char* env = std::getenv("PRELAT_WORKERS")) {
    params.workers = std::max(1, to_int(env, "PRELAT_WORKERS"));
  }
  if (config.has("run", "eps")) {
    params.eps = to_doubles(config.get("run", "eps"), "[run] eps");
    for (double e : params.eps)
      if (!(e > 0)) throw std::runtime_error("[run] eps: values must be positive");
  }
  if (config.has("run", "case")) {
    const std::string name = config.get("run", "case");
    params.has_case = true;
    if (name == "nearest-2d")
      params.tag = CaseTag::nearest2d;
    else if (name == "nearest-nd")
      params.tag = CaseTag::nearestNd;
    else if (name == "next-nearest-2d")
      params.tag = CaseTag::nextNearest2d;
    else
      throw std::runtime_error("[run] case: unknown '" + name + "'");
  }
  params.mesh = to_int(config.get_or("run", "mesh", "32"), "[run] mesh");
  params.grid = to_int(config.get_or("run", "grid", "10"), "[run] grid");
  params.h = to_double(config.get_or("run", "h", "0.001"), "[run] h");
  if (config.has("run", "workers"))
    params.workers = to_int(config.get("run", "workers"), "[run] workers");
  params.seed = to_long(config.get_or("run", "seed", "1"), "[run] seed");
  const std::string gauge = config.get_or("run", "gauge", "pin-mean");
  if (gauge == "pin-mean")
    params.gauge = Gauge::pin_mean;
  else if (gauge == "pin-first")
    params.gauge = Gauge::pin_first_node;
  else if (gauge == "none")
    params.gauge = Gauge::none;
  else
    throw std::runtime_error("[run] gauge: unknown '" + gauge + "'");
  params.max_iterations = to_int(config.get_or("run", "max_iterations", "500"), "[run] max_iterations");
  params.tolerance = to_double(config.get_or("run", "tolerance", "1e-8"), "[run] tolerance");
  params.smoothing = to_double(config.get_or("run", "smoothing", "1e-12"), "[run] smoothing");
  params.regularization =
      to_double(config.get_or("run", "regularization", "0"), "[run] regularization");
  params.subdivisions = to_int(config.get_or("run", "subdivisions", "2"), "[run] subdivisions");
  params.literal = to_int(config.get_or("run", "literal", "0"), "[run] literal") != 0;
  if (params.mesh < 1 || params.grid < 1 || params.workers < 1 || params.max_iterations < 0 ||
      params.h <= 0 || params.tolerance < 0 || params.smoothing < 0 || params.regularization < 0 ||
      params.subdivisions < 0)
    throw std::runtime_error("[run]: parameters out of range");
  return params;
}

}  // namespace prelat::cli
