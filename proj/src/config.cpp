#include "vrlab/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "vrlab/errors.hpp"

namespace vrlab {

std::vector<double> LambdaGrid::values() const {
  std::vector<double> out;
  if (count == 1) return {min};
  for (int i = 0; i < count; ++i) out.push_back(min + (max - min) * i / (count - 1));
  return out;
}

std::vector<double> SpectrumConfig::grid() const {
  std::vector<double> out;
  const long n = std::lround((x_max - x_min) / x_step);
  for (long i = 0; i <= n; ++i) out.push_back(x_min + static_cast<double>(i) * (x_max - x_min) / static_cast<double>(n));
  return out;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& v) {
  T out{};
  const auto* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) throw ConfigError("cannot parse '" + v + "' as a number");
  return out;
}

template <class T>
T parse_value(const std::string& v);

template <>
double parse_value<double>(const std::string& v) {
  return parse_number<double>(v);
}
template <>
int parse_value<int>(const std::string& v) {
  return parse_number<int>(v);
}
template <>
long parse_value<long>(const std::string& v) {
  // accept 1e5 style for particle counts
  const double d = parse_number<double>(v);
  if (d != std::floor(d) || std::abs(d) > 9e15) throw ConfigError("'" + v + "' is not an integer");
  return static_cast<long>(d);
}
template <>
std::uint64_t parse_value<std::uint64_t>(const std::string& v) {
  return parse_number<std::uint64_t>(v);
}
template <>
std::string parse_value<std::string>(const std::string& v) {
  if (v.empty() || v.find_first_of(" \t") != std::string::npos) throw ConfigError("expected a single word, got '" + v + "'");
  return v;
}
template <>
std::vector<int> parse_value<std::vector<int>>(const std::string& v) {
  std::vector<int> out;
  std::string item;
  std::istringstream in(v);
  while (std::getline(in, item, ',')) out.push_back(parse_number<int>(trim(item)));
  if (out.empty()) throw ConfigError("expected a comma-separated list of integers");
  return out;
}

// shortest text that parses back to the same double
std::string format_value(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}
std::string format_value(int v) { return std::to_string(v); }
std::string format_value(long v) { return std::to_string(v); }
std::string format_value(std::uint64_t v) { return std::to_string(v); }
std::string format_value(const std::string& v) { return v; }
std::string format_value(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + std::to_string(v[i]);
  return out;
}

struct Field {
  std::string section;
  std::string key;
  std::function<void(SweepConfig&, const std::string&)> set;
  std::function<std::string(const SweepConfig&)> get;
};

template <class T, class Ref>
Field make_field(std::string section, std::string key, Ref ref) {
  return Field{std::move(section), std::move(key),
               [ref](SweepConfig& c, const std::string& v) { ref(c) = parse_value<T>(v); },
               [ref](const SweepConfig& c) { return format_value(ref(const_cast<SweepConfig&>(c))); }};
}

#define VRLAB_FIELD(T, sec, key, expr) make_field<T>(sec, key, [](SweepConfig& c) -> T& { return expr; })

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      VRLAB_FIELD(std::string, "model", "kind", c.model.kind),
      VRLAB_FIELD(int, "model", "s", c.model.s),
      VRLAB_FIELD(int, "model", "w", c.model.w),
      VRLAB_FIELD(double, "model", "h", c.model.h),
      VRLAB_FIELD(int, "model", "l_max", c.model.l_max),
      VRLAB_FIELD(int, "model", "l_max_limit", c.model.l_max_limit),
      VRLAB_FIELD(double, "lambda", "min", c.lambda.min),
      VRLAB_FIELD(double, "lambda", "max", c.lambda.max),
      VRLAB_FIELD(int, "lambda", "count", c.lambda.count),
      VRLAB_FIELD(double, "integrator", "dt", c.integrator.dt),
      VRLAB_FIELD(double, "integrator", "t_max", c.integrator.t_max),
      VRLAB_FIELD(int, "integrator", "record_stride", c.integrator.record_stride),
      VRLAB_FIELD(double, "integrator", "energy_tol", c.integrator.energy_tol),
      VRLAB_FIELD(double, "integrator", "trace_tol", c.integrator.trace_tol),
      VRLAB_FIELD(double, "integrator", "herm_tol", c.integrator.herm_tol),
      VRLAB_FIELD(double, "integrator", "edge_population_tol", c.integrator.edge_population_tol),
      VRLAB_FIELD(double, "amplitude", "t1", c.amplitude.t1),
      VRLAB_FIELD(double, "amplitude", "t_max", c.amplitude.t_max),
      VRLAB_FIELD(double, "amplitude", "floor", c.amplitude.floor),
      VRLAB_FIELD(std::string, "initial", "kind", c.initial.kind),
      VRLAB_FIELD(double, "initial", "width", c.initial.width),
      VRLAB_FIELD(std::string, "run", "out", c.out_dir),
      VRLAB_FIELD(int, "run", "workers", c.workers),
      VRLAB_FIELD(std::uint64_t, "run", "seed", c.seed),
      VRLAB_FIELD(double, "spectrum", "x_min", c.spectrum.x_min),
      VRLAB_FIELD(double, "spectrum", "x_max", c.spectrum.x_max),
      VRLAB_FIELD(double, "spectrum", "x_step", c.spectrum.x_step),
      VRLAB_FIELD(double, "spectrum", "guard_band", c.spectrum.guard_band),
      VRLAB_FIELD(double, "spectrum", "resolution", c.spectrum.resolution),
      VRLAB_FIELD(long, "classical", "n", c.classical.n),
      VRLAB_FIELD(double, "classical", "theta_width", c.classical.theta_width),
      VRLAB_FIELD(double, "classical", "p_width", c.classical.p_width),
      VRLAB_FIELD(double, "classical", "lambda", c.classical.lambda),
      VRLAB_FIELD(double, "classical", "dt", c.classical.dt),
      VRLAB_FIELD(double, "classical", "t_max", c.classical.t_max),
      VRLAB_FIELD(int, "classical", "record_stride", c.classical.record_stride),
      VRLAB_FIELD(int, "classical", "n_max", c.classical.n_max),
      VRLAB_FIELD(int, "classical", "e_points", c.classical.e_points),
      VRLAB_FIELD(int, "oracle", "s", c.oracle.s),
      VRLAB_FIELD(int, "oracle", "w", c.oracle.w),
      VRLAB_FIELD(double, "oracle", "lambda", c.oracle.lambda),
      VRLAB_FIELD(std::vector<int>, "oracle", "sites", c.oracle.sites),
      VRLAB_FIELD(double, "oracle", "dt", c.oracle.dt),
      VRLAB_FIELD(double, "oracle", "t_max", c.oracle.t_max),
      VRLAB_FIELD(int, "oracle", "stride", c.oracle.stride),
  };
  return table;
}

#undef VRLAB_FIELD

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

}  // namespace

void SweepConfig::validate() const {
  require(model.kind == "w" || model.kind == "rotor", "model.kind must be 'w' or 'rotor'");
  if (model.kind == "w") {
    require(model.s >= 1 && model.s <= 2000, "model.s must lie in [1, 2000]");
    require(model.w >= 0 && model.w < model.s, "model.w must lie in [0, model.s)");
    require(model.h > 0.0, "model.h must be positive");
    require(initial.kind == "gaussian", "initial.kind must be 'gaussian' for the w-model");
  } else {
    require(model.l_max >= 1, "model.l_max must be >= 1");
    require(model.l_max_limit >= model.l_max, "model.l_max_limit must be >= model.l_max");
    require(initial.kind == "rotor", "initial.kind must be 'rotor' for the rotor model");
  }
  require(lambda.min > 0.0, "lambda.min must be positive");
  require(lambda.max > lambda.min, "lambda.max must be greater than lambda.min");
  require(lambda.count >= 1, "lambda.count must be >= 1");
  try {
    integrator.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("integrator: ") + e.what());
  }
  require(amplitude.t1 >= 0.0, "amplitude.t1 must be >= 0");
  require(amplitude.t_max > amplitude.t1, "amplitude.t_max must be greater than amplitude.t1");
  require(amplitude.t_max <= integrator.t_max, "amplitude.t_max must not exceed integrator.t_max");
  require(amplitude.floor > 0.0, "amplitude.floor must be positive");
  require(initial.width > 0.0, "initial.width must be positive");
  require(!out_dir.empty(), "run.out must not be empty");
  require(workers >= 1, "run.workers must be >= 1");
  require(spectrum.x_min >= 0.0, "spectrum.x_min must be >= 0");
  require(spectrum.x_max > spectrum.x_min, "spectrum.x_max must be greater than spectrum.x_min");
  require(spectrum.x_step > 0.0 && spectrum.x_step <= 0.01, "spectrum.x_step must lie in (0, 0.01]");
  require(spectrum.guard_band >= 0.0, "spectrum.guard_band must be >= 0");
  require(spectrum.resolution > 0.0, "spectrum.resolution must be positive");
  require(classical.n >= 1, "classical.n must be >= 1");
  require(classical.theta_width > 0.0, "classical.theta_width must be positive");
  require(classical.p_width > 0.0, "classical.p_width must be positive");
  require(classical.lambda >= 0.0, "classical.lambda must be >= 0");
  require(classical.dt > 0.0 && classical.dt <= 0.01, "classical.dt must lie in (0, 0.01]");
  require(classical.t_max >= classical.dt, "classical.t_max must be >= classical.dt");
  require(classical.record_stride >= 1, "classical.record_stride must be >= 1");
  require(classical.n_max >= 0, "classical.n_max must be >= 0");
  require(classical.e_points >= 2, "classical.e_points must be >= 2");
  require(oracle.s >= 1 && oracle.w >= 0 && oracle.w < oracle.s, "oracle.s / oracle.w out of range");
  require(oracle.lambda > 0.0, "oracle.lambda must be positive");
  require(!oracle.sites.empty(), "oracle.sites must not be empty");
  for (int n : oracle.sites) require(n >= 1, "oracle.sites entries must be >= 1");
  require(oracle.dt > 0.0 && oracle.t_max >= oracle.dt, "oracle.dt / oracle.t_max out of range");
  require(oracle.stride >= 1, "oracle.stride must be >= 1");
}

ModelSpec SweepConfig::build_model(double lam) const {
  if (model.kind == "rotor") return build_rotor_model(model.l_max, lam);
  return build_w_model(model.s, model.w, model.h, lam);
}

DensityMatrix SweepConfig::build_initial_state(const ModelSpec& spec) const {
  if (const auto* r = std::get_if<RotorParams>(&spec.tag)) return rotor_initial_state(r->l_max);
  const auto& w = std::get<WModelParams>(spec.tag);
  return gaussian_w_state(w.s, initial.width);
}

SweepConfig parse_config_text(const std::string& text) {
  SweepConfig cfg;
  std::set<std::string> sections;
  for (const auto& f : fields()) sections.insert(f.section);
  std::set<std::string> seen;

  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find_first_of("#;");
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    auto fail = [&](const std::string& what) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + what);
    };
    if (line.front() == '[') {
      if (line.back() != ']') fail("malformed section header '" + line + "'");
      section = trim(line.substr(1, line.size() - 2));
      if (!sections.count(section)) fail("unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected 'key = value', got '" + line + "'");
    if (section.empty()) fail("key outside of any section");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string full = section + "." + key;
    const Field* field = nullptr;
    for (const auto& f : fields()) {
      if (f.section == section && f.key == key) field = &f;
    }
    if (!field) fail("unknown key '" + key + "' in [" + section + "]");
    if (!seen.insert(full).second) fail("duplicate key " + full);
    try {
      field->set(cfg, value);
    } catch (const ConfigError& e) {
      fail(full + ": " + e.what());
    }
  }
  cfg.validate();
  return cfg;
}

SweepConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config_text(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::string serialize(const SweepConfig& cfg) {
  std::ostringstream out;
  std::string section;
  for (const auto& f : fields()) {
    if (f.section != section) {
      if (!section.empty()) out << '\n';
      section = f.section;
      out << '[' << section << "]\n";
    }
    out << f.key << " = " << f.get(cfg) << '\n';
  }
  return out.str();
}

}  // namespace vrlab
