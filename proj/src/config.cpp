#include "nlfv/config.hpp"

#include "nlfv/format.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace nlfv {

namespace fs = std::filesystem;

namespace {

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

[[noreturn]] void fail(const std::string& path, int line, const std::string& msg) {
  std::ostringstream os;
  os << path;
  if (line > 0) os << ":" << line;
  os << ": " << msg;
  throw ConfigError(os.str());
}

}  // namespace

IniFile IniFile::parse(const std::string& text, const std::string& path) {
  IniFile ini;
  ini.path_ = path;
  std::istringstream in(text);
  std::string raw, section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find_first_of("#;");
    std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail(path, line, "malformed section header '" + s + "'");
      section = lower(trim(s.substr(1, s.size() - 2)));
      if (section.empty()) fail(path, line, "empty section name");
      ini.data_[section];
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) fail(path, line, "expected 'key = value', got '" + s + "'");
    if (section.empty()) fail(path, line, "key outside of any [section]");
    const std::string key = lower(trim(s.substr(0, eq)));
    if (key.empty()) fail(path, line, "empty key");
    auto& sec = ini.data_[section];
    if (sec.count(key)) fail(path, line, "duplicate key " + section + "." + key);
    sec[key] = {trim(s.substr(eq + 1)), line};
    ini.order_.emplace_back(section, key);
  }
  return ini;
}

IniFile IniFile::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

bool IniFile::has(const std::string& section, const std::string& key) const {
  return find(section, key) != nullptr;
}

const IniValue* IniFile::find(const std::string& section, const std::string& key) const {
  auto s = data_.find(section);
  if (s == data_.end()) return nullptr;
  auto k = s->second.find(key);
  return k == s->second.end() ? nullptr : &k->second;
}

int IniFile::line_of(const std::string& section, const std::string& key) const {
  const IniValue* v = find(section, key);
  return v ? v->line : 0;
}

std::vector<double> parse_real_list(const std::string& s, const std::string& where) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string t = trim(item);
    if (t.empty()) continue;
    double v = 0.0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc() || res.ptr != t.data() + t.size() || !std::isfinite(v))
      throw ConfigError(where + ": '" + t + "' is not a real number");
    out.push_back(v);
  }
  return out;
}

namespace {

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s{
      {"grid", {"dimension", "x_min", "x_max", "y_min", "y_max", "n_cells", "nx", "ny", "dx",
                "dy", "boundary"}},
      {"time", {"t_end", "snapshots"}},
      {"model", {"name"}},
      {"kernel", {"kind", "eta", "radius", "mode"}},
      {"scheme", {"flux", "theta", "lambda", "lambda_x", "lambda_y", "interface", "cfl"}},
      {"initial", {"name", "file", "value", "left", "right", "x0"}},
      {"output", {"dir", "prefix", "svg", "pgm"}},
      {"splitting", {"reconvolve"}},
      {"diagnostics", {"level"}},
      {"study", {"levels", "dx0", "etas"}},
  };
  return s;
}

class Reader {
 public:
  explicit Reader(const IniFile& ini) : ini_(ini) {}

  [[noreturn]] void error(const std::string& sec, const std::string& key,
                          const std::string& msg) const {
    fail(ini_.path(), ini_.line_of(sec, key), sec + "." + key + ": " + msg);
  }

  std::optional<std::string> str(const std::string& sec, const std::string& key) const {
    const IniValue* v = ini_.find(sec, key);
    if (!v) return std::nullopt;
    if (v->value.empty()) error(sec, key, "empty value");
    return v->value;
  }

  std::optional<double> real(const std::string& sec, const std::string& key) const {
    auto s = str(sec, key);
    if (!s) return std::nullopt;
    double v = 0.0;
    const auto res = std::from_chars(s->data(), s->data() + s->size(), v);
    if (res.ec != std::errc() || res.ptr != s->data() + s->size() || !std::isfinite(v))
      error(sec, key, "expected a real number, got '" + *s + "'");
    return v;
  }

  std::optional<long> integer(const std::string& sec, const std::string& key) const {
    auto s = str(sec, key);
    if (!s) return std::nullopt;
    long v = 0;
    const auto res = std::from_chars(s->data(), s->data() + s->size(), v);
    if (res.ec != std::errc() || res.ptr != s->data() + s->size())
      error(sec, key, "expected an integer, got '" + *s + "'");
    return v;
  }

  std::optional<bool> boolean(const std::string& sec, const std::string& key) const {
    auto s = str(sec, key);
    if (!s) return std::nullopt;
    const std::string t = lower(*s);
    if (t == "true" || t == "yes" || t == "on" || t == "1") return true;
    if (t == "false" || t == "no" || t == "off" || t == "0") return false;
    error(sec, key, "expected true or false, got '" + *s + "'");
  }

  std::optional<std::vector<double>> list(const std::string& sec, const std::string& key) const {
    auto s = str(sec, key);
    if (!s) return std::nullopt;
    try {
      return parse_real_list(*s, sec + "." + key);
    } catch (const ConfigError& e) {
      fail(ini_.path(), ini_.line_of(sec, key), e.what());
    }
  }

  /// Runs a parse_* helper and rethrows its error with the location.
  template <class F>
  auto choice(const std::string& sec, const std::string& key, F&& parse) const
      -> std::optional<decltype(parse(std::string()))> {
    auto s = str(sec, key);
    if (!s) return std::nullopt;
    try {
      return parse(lower(*s));
    } catch (const ConfigError& e) {
      error(sec, key, e.what());
    }
  }

 private:
  const IniFile& ini_;
};

int cells_for(double lo, double hi, double dx, const Reader& r, const char* key) {
  if (!(dx > 0.0)) r.error("grid", key, "must be positive");
  const double n = (hi - lo) / dx;
  const long cells = std::lround(n);
  if (cells < 1 || std::abs(cells - n) > 1e-9 * n)
    r.error("grid", key, "does not divide the domain into a whole number of cells");
  return static_cast<int>(cells);
}

Vector read_values_csv(const std::string& path, const std::string& where) {
  std::ifstream in(path);
  if (!in) throw ConfigError(where + ": cannot open '" + path + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    if (std::isalpha(static_cast<unsigned char>(t.front()))) continue;  // header
    try {
      rows.push_back(parse_real_list(t, path + ":" + std::to_string(n)));
    } catch (const ConfigError& e) {
      throw ConfigError(where + ": " + e.what());
    }
  }
  Vector v(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].empty()) throw ConfigError(where + ": empty row in '" + path + "'");
    v[static_cast<Eigen::Index>(i)] = rows[i].back();
  }
  return v;
}

}  // namespace

void Config::set_dx(double dx) {
  if (!(dx > 0.0)) throw ConfigError("dx must be positive");
  auto cells = [dx](double lo, double hi) {
    const double n = (hi - lo) / dx;
    const long c = std::lround(n);
    if (c < 1 || std::abs(c - n) > 1e-9 * n)
      throw ConfigError("dx = " + format_double(dx) + " does not divide the domain");
    return static_cast<int>(c);
  };
  if (dimension == 1) {
    run1d.grid.n_cells = cells(run1d.grid.x_min, run1d.grid.x_max);
  } else {
    const double ratio = run2d.grid.dy() / run2d.grid.dx();
    run2d.grid.nx = cells(run2d.grid.x_min, run2d.grid.x_max);
    const double dy = dx * ratio;
    const double n = (run2d.grid.y_max - run2d.grid.y_min) / dy;
    run2d.grid.ny = static_cast<int>(std::lround(n));
  }
}

Config parse_config_text(const std::string& text, const std::string& path,
                         const std::string& base_dir) {
  const IniFile ini = IniFile::parse(text, path);
  for (const auto& [sec, key] : ini.keys()) {
    auto s = schema().find(sec);
    if (s == schema().end())
      fail(path, ini.line_of(sec, key), "unknown section [" + sec + "]");
    if (!s->second.count(key)) {
      std::string valid;
      for (const auto& k : s->second) valid += (valid.empty() ? "" : ", ") + k;
      fail(path, ini.line_of(sec, key),
           "unknown key " + sec + "." + key + " (valid: " + valid + ")");
    }
  }
  const Reader r(ini);
  Config c;
  c.source = path;

  const auto model_name = r.str("model", "name");
  if (!model_name) fail(path, 0, "missing required key model.name");
  Model model;
  try {
    model = builtin_model(*model_name);
  } catch (const ConfigError& e) {
    r.error("model", "name", e.what());
  }
  c.dimension = model.dimension;
  if (auto d = r.integer("grid", "dimension")) {
    if (*d != 1 && *d != 2) r.error("grid", "dimension", "must be 1 or 2");
    c.dimension = static_cast<int>(*d);
  }
  const bool two = c.dimension == 2;
  const Boundary boundary =
      r.choice("grid", "boundary", parse_boundary).value_or(Boundary::ZeroExtension);

  if (!two) {
    for (const char* k : {"y_min", "y_max", "nx", "ny", "dy"})
      if (ini.has("grid", k)) r.error("grid", k, "only valid for 2D grids");
    Grid1D& g = c.run1d.grid;
    g.boundary = boundary;
    g.x_min = r.real("grid", "x_min").value_or(g.x_min);
    g.x_max = r.real("grid", "x_max").value_or(g.x_max);
    if (!(g.x_min < g.x_max)) r.error("grid", "x_max", "must exceed x_min");
    if (auto n = r.integer("grid", "n_cells")) {
      if (ini.has("grid", "dx")) r.error("grid", "dx", "give either n_cells or dx, not both");
      if (*n < 1) r.error("grid", "n_cells", "must be positive");
      g.n_cells = static_cast<int>(*n);
    } else if (auto dx = r.real("grid", "dx")) {
      g.n_cells = cells_for(g.x_min, g.x_max, *dx, r, "dx");
    } else {
      fail(path, 0, "missing required key grid.dx (or grid.n_cells)");
    }
  } else {
    if (ini.has("grid", "n_cells")) r.error("grid", "n_cells", "use nx and ny for 2D grids");
    Grid2D& g = c.run2d.grid;
    g.boundary = boundary;
    g.x_min = r.real("grid", "x_min").value_or(g.x_min);
    g.x_max = r.real("grid", "x_max").value_or(g.x_max);
    g.y_min = r.real("grid", "y_min").value_or(g.y_min);
    g.y_max = r.real("grid", "y_max").value_or(g.y_max);
    if (!(g.x_min < g.x_max)) r.error("grid", "x_max", "must exceed x_min");
    if (!(g.y_min < g.y_max)) r.error("grid", "y_max", "must exceed y_min");
    const auto dx = r.real("grid", "dx");
    const auto dy = r.real("grid", "dy");
    if (auto nx = r.integer("grid", "nx")) {
      if (dx) r.error("grid", "dx", "give either nx/ny or dx/dy, not both");
      if (*nx < 1) r.error("grid", "nx", "must be positive");
      g.nx = static_cast<int>(*nx);
      const auto ny = r.integer("grid", "ny");
      if (ny && *ny < 1) r.error("grid", "ny", "must be positive");
      g.ny = static_cast<int>(ny.value_or(*nx));
    } else if (dx) {
      if (ini.has("grid", "ny")) r.error("grid", "ny", "give either nx/ny or dx/dy, not both");
      g.nx = cells_for(g.x_min, g.x_max, *dx, r, "dx");
      g.ny = cells_for(g.y_min, g.y_max, dy.value_or(*dx), r, dy ? "dy" : "dx");
    } else {
      fail(path, 0, "missing required key grid.dx (or grid.nx)");
    }
  }

  const double t_end = r.real("time", "t_end").value_or(0.5);
  if (!(t_end > 0.0)) r.error("time", "t_end", "must be positive");
  c.snapshots = r.list("time", "snapshots").value_or(std::vector<double>{});
  for (double t : c.snapshots)
    if (t < 0.0 || t > t_end * (1 + 1e-12))
      r.error("time", "snapshots", "every snapshot time must lie in [0, t_end]");

  // kernel
  const std::string ktype =
      lower(r.str("kernel", "kind").value_or(two ? "crowd-bump-2d" : "lwr-quadratic-1d"));
  KernelSpec kernel;
  if (ktype == "lwr-quadratic-1d") {
    if (two) r.error("kernel", "kind", "lwr-quadratic-1d is a 1D kernel");
    if (ini.has("kernel", "radius")) r.error("kernel", "radius", "not used by lwr-quadratic-1d");
    const double eta = r.real("kernel", "eta").value_or(0.0625);
    if (!(eta > 0.0)) r.error("kernel", "eta", "must be positive");
    kernel = KernelSpec::lwr_quadratic(eta);
  } else if (ktype == "crowd-bump-2d") {
    if (!two) r.error("kernel", "kind", "crowd-bump-2d is a 2D kernel");
    if (ini.has("kernel", "eta")) r.error("kernel", "eta", "not used by crowd-bump-2d");
    const double radius = r.real("kernel", "radius").value_or(0.4);
    if (!(radius > 0.0)) r.error("kernel", "radius", "must be positive");
    kernel = KernelSpec::crowd_bump(radius);
  } else {
    r.error("kernel", "kind", "unknown kernel '" + ktype +
                                  "' (valid: lwr-quadratic-1d, crowd-bump-2d)");
  }
  c.kernel_name = ktype;
  const ConvolutionMode mode =
      r.choice("kernel", "mode", parse_convolution_mode).value_or(ConvolutionMode::Auto);

  // scheme
  SchemeConfig scheme = two ? RunConfig2D::default_scheme_2d() : SchemeConfig{};
  scheme.family = r.choice("scheme", "flux", parse_flux_family).value_or(scheme.family);
  scheme.theta = r.real("scheme", "theta").value_or(scheme.theta);
  scheme.recon = r.choice("scheme", "interface", parse_interface_rule).value_or(scheme.recon);
  scheme.cfl = r.choice("scheme", "cfl", parse_cfl_enforcement).value_or(scheme.cfl);
  if (!two) {
    for (const char* k : {"lambda_x", "lambda_y"})
      if (ini.has("scheme", k)) r.error("scheme", k, "only valid in 2D (use scheme.lambda)");
    scheme.lambda = r.real("scheme", "lambda").value_or(scheme.lambda);
    scheme.lambda_y = scheme.lambda;
  } else {
    if (auto l = r.real("scheme", "lambda")) {
      if (ini.has("scheme", "lambda_x"))
        r.error("scheme", "lambda_x", "give either lambda or lambda_x/lambda_y");
      scheme.lambda = scheme.lambda_y = *l;
    }
    scheme.lambda = r.real("scheme", "lambda_x").value_or(scheme.lambda);
    scheme.lambda_y = r.real("scheme", "lambda_y").value_or(scheme.lambda_y);
  }
  try {
    scheme.validate(c.dimension);
  } catch (const ConfigError& e) {
    const char* key = ini.has("scheme", "theta") ? "theta" : "lambda";
    fail(path, ini.line_of("scheme", key), e.what());
  }

  // initial data
  const std::string iname =
      lower(r.str("initial", "name").value_or(ini.has("initial", "file") ? "file"
                                                : (two ? "annular" : "riemann-ex1")));
  c.initial_name = iname;
  std::optional<Vector> file_values;
  if (auto file = r.str("initial", "file")) {
    if (iname != "file") r.error("initial", "file", "conflicts with initial.name");
    fs::path p(*file);
    if (p.is_relative()) p = fs::path(base_dir) / p;
    const std::string where = path + ":" + std::to_string(ini.line_of("initial", "file"));
    file_values = read_values_csv(p.string(), where);
    if (file_values->size() != (two ? static_cast<Eigen::Index>(c.run2d.grid.nx) * c.run2d.grid.ny
                                    : c.run1d.grid.n_cells))
      r.error("initial", "file", "number of values does not match the grid");
  }
  auto need_none = [&](std::initializer_list<const char*> keys) {
    for (const char* k : keys)
      if (ini.has("initial", k)) r.error("initial", k, "not used by initial data '" + iname + "'");
  };

  if (!two) {
    RunConfig1D& run = c.run1d;
    run.model = model;
    run.kernel = kernel;
    run.scheme = scheme;
    run.mode = mode;
    run.t_end = t_end;
    if (iname == "file") {
      need_none({"value", "left", "right", "x0"});
      run.initial_values = file_values;
    } else if (iname == "constant") {
      need_none({"left", "right", "x0"});
      run.initial = constant_datum(r.real("initial", "value").value_or(0.0));
    } else if (iname == "riemann") {
      need_none({"value"});
      run.initial = riemann_datum(r.real("initial", "left").value_or(1.0),
                                  r.real("initial", "right").value_or(0.0),
                                  r.real("initial", "x0").value_or(0.0), run.grid.x_min,
                                  run.grid.x_max);
    } else {
      need_none({"value", "left", "right", "x0"});
      try {
        run.initial = initial_datum_1d(iname);
      } catch (const ConfigError& e) {
        r.error("initial", "name", std::string(e.what()) + ", constant, riemann, file");
      }
    }
    if (ini.has("splitting", "reconvolve"))
      r.error("splitting", "reconvolve", "only valid for 2D runs");
    run.diagnostics =
        r.choice("diagnostics", "level", parse_diagnostics_level).value_or(run.diagnostics);
  } else {
    RunConfig2D& run = c.run2d;
    run.model = model;
    run.kernel = kernel;
    run.scheme = scheme;
    run.mode = mode;
    run.t_end = t_end;
    if (iname == "file") {
      need_none({"value", "left", "right", "x0"});
      run.initial_values =
          Eigen::Map<const Array2>(file_values->data(), run.grid.nx, run.grid.ny);
    } else if (iname == "constant") {
      need_none({"left", "right", "x0"});
      run.initial = constant_datum_2d(r.real("initial", "value").value_or(0.0));
    } else {
      need_none({"value", "left", "right", "x0"});
      try {
        run.initial = initial_datum_2d(iname);
      } catch (const ConfigError& e) {
        r.error("initial", "name", std::string(e.what()) + ", constant, file");
      }
    }
    run.reconvolve = r.boolean("splitting", "reconvolve").value_or(false);
    run.diagnostics =
        r.choice("diagnostics", "level", parse_diagnostics_level).value_or(run.diagnostics);
    try {
      run.validate();
    } catch (const ConfigError& e) {
      fail(path, ini.line_of("scheme", "lambda_y"), e.what());
    }
  }

  c.output.dir = r.str("output", "dir").value_or(c.output.dir);
  c.output.prefix =
      r.str("output", "prefix").value_or(path.empty() ? "run" : fs::path(path).stem().string());
  c.output.svg = r.boolean("output", "svg").value_or(true);
  c.output.pgm = r.boolean("output", "pgm").value_or(true);

  if (auto l = r.integer("study", "levels")) {
    if (*l < 2) r.error("study", "levels", "must be at least 2");
    c.study.levels = static_cast<int>(*l);
  }
  c.study.dx0 = r.real("study", "dx0");
  if (c.study.dx0 && !(*c.study.dx0 > 0.0)) r.error("study", "dx0", "must be positive");
  if (auto e = r.list("study", "etas")) {
    if (e->empty()) r.error("study", "etas", "needs at least one value");
    for (double v : *e)
      if (!(v > 0.0)) r.error("study", "etas", "values must be positive");
    c.study.etas = *e;
  }
  return c;
}

Config parse_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  const fs::path dir = fs::path(path).parent_path();
  return parse_config_text(ss.str(), path, dir.empty() ? "." : dir.string());
}

std::string config_json(const Config& c) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["source"] = c.source;
  j["dimension"] = c.dimension;
  const SchemeConfig& s = c.dimension == 1 ? c.run1d.scheme : c.run2d.scheme;
  if (c.dimension == 1) {
    const auto& g = c.run1d.grid;
    j["grid"] = {{"x_min", g.x_min}, {"x_max", g.x_max}, {"n_cells", g.n_cells},
                 {"dx", g.dx()}, {"boundary", to_string(g.boundary)}};
    j["time"] = {{"t_end", c.run1d.t_end}, {"snapshots", c.snapshots}};
    j["model"] = {{"name", c.run1d.model.name}};
    j["kernel"] = {{"kind", c.kernel_name}, {"eta", c.run1d.kernel.eta},
                   {"mode", to_string(c.run1d.mode)}};
  } else {
    const auto& g = c.run2d.grid;
    j["grid"] = {{"x_min", g.x_min}, {"x_max", g.x_max}, {"y_min", g.y_min},
                 {"y_max", g.y_max}, {"nx", g.nx},       {"ny", g.ny},
                 {"dx", g.dx()},     {"dy", g.dy()},     {"boundary", to_string(g.boundary)}};
    j["time"] = {{"t_end", c.run2d.t_end}, {"snapshots", c.snapshots}};
    j["model"] = {{"name", c.run2d.model.name}};
    j["kernel"] = {{"kind", c.kernel_name}, {"radius", c.run2d.kernel.radius},
                   {"mode", to_string(c.run2d.mode)}};
  }
  j["scheme"] = {{"flux", to_string(s.family)}, {"theta", s.theta}};
  if (c.dimension == 1) {
    j["scheme"]["lambda"] = s.lambda;
  } else {
    j["scheme"]["lambda_x"] = s.lambda;
    j["scheme"]["lambda_y"] = s.lambda_y;
  }
  j["scheme"]["interface"] = to_string(s.recon);
  j["scheme"]["cfl"] = to_string(s.cfl);
  j["initial"] = {{"name", c.initial_name}};
  if (c.dimension == 2) j["splitting"] = {{"reconvolve", c.run2d.reconvolve}};
  j["diagnostics"] = {
      {"level", to_string(c.dimension == 1 ? c.run1d.diagnostics : c.run2d.diagnostics)}};
  j["output"] = {{"dir", c.output.dir}, {"prefix", c.output.prefix}, {"svg", c.output.svg},
                 {"pgm", c.output.pgm}};
  j["study"] = {{"levels", c.study.levels}, {"etas", c.study.etas}};
  if (c.study.dx0) j["study"]["dx0"] = *c.study.dx0;
  return j.dump(2);
}

}  // namespace nlfv
