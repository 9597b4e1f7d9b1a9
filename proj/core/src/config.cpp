#include "ets/config.hpp"

#include "ets/error.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace ets {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double d = 0.0;
  try {
    d = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || !std::isfinite(d)) {
    throw ConfigError("config: '" + key + "' expects a number, got '" + v + "'");
  }
  return d;
}

long long to_integer(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  long long i = 0;
  try {
    i = std::stoll(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size()) {
    throw ConfigError("config: '" + key + "' expects an integer, got '" + v + "'");
  }
  return i;
}

int to_int(const std::string& key, const std::string& v) {
  const long long i = to_integer(key, v);
  if (i < -2147483647LL || i > 2147483647LL) {
    throw ConfigError("config: '" + key + "' out of range");
  }
  return static_cast<int>(i);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "on" || v == "true" || v == "yes" || v == "1") return true;
  if (v == "off" || v == "false" || v == "no" || v == "0") return false;
  throw ConfigError("config: '" + key + "' expects on/off, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string fmt(double d) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", d);
  return buf;
}

template <typename T, typename F>
std::string join(const std::vector<T>& v, F f) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += f(v[i]);
  }
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"xi_max", [](RunConfig& c, auto& k, auto& v) { c.grid.xi_max = to_double(k, v); }},
      {"r_sigma", [](RunConfig& c, auto& k, auto& v) { c.grid.r_sigma = to_double(k, v); }},
      {"n_dvr", [](RunConfig& c, auto& k, auto& v) { c.grid.n_dvr = to_int(k, v); }},
      {"n_fe_inner", [](RunConfig& c, auto& k, auto& v) { c.grid.n_fe_inner = to_int(k, v); }},
      {"n_fe_outer", [](RunConfig& c, auto& k, auto& v) { c.grid.n_fe_outer = to_int(k, v); }},
      {"wavelength_nm", [](RunConfig& c, auto& k, auto& v) { c.wavelength_nm = to_double(k, v); }},
      {"intensity_wcm2", [](RunConfig& c, auto& k, auto& v) { c.intensity_wcm2 = to_double(k, v); }},
      {"cycles", [](RunConfig& c, auto& k, auto& v) { c.cycles = to_double(k, v); }},
      {"pulse_shape", [](RunConfig& c, auto&, auto& v) {
         try {
           c.pulse_shape = parse_pulse_shape(v);
         } catch (const Error& e) {
           throw ConfigError(std::string("config: ") + e.what());
         }
       }},
      {"gauge", [](RunConfig& c, auto&, auto& v) {
         try {
           c.gauge = parse_gauge(v);
         } catch (const Error& e) {
           throw ConfigError(std::string("config: ") + e.what());
         }
       }},
      {"scaling", [](RunConfig& c, auto& k, auto& v) { c.scaling = to_bool(k, v); }},
      {"r_inf", [](RunConfig& c, auto& k, auto& v) { c.r_inf = to_double(k, v); }},
      {"scaling_period", [](RunConfig& c, auto& k, auto& v) { c.scaling_period = to_double(k, v); }},
      {"l_max", [](RunConfig& c, auto& k, auto& v) { c.l_max = to_int(k, v); }},
      {"dt", [](RunConfig& c, auto& k, auto& v) { c.dt = to_double(k, v); }},
      {"eps", [](RunConfig& c, auto& k, auto& v) { c.eps = to_double(k, v); }},
      {"max_k", [](RunConfig& c, auto& k, auto& v) { c.max_k = to_int(k, v); }},
      {"filter", [](RunConfig& c, auto& k, auto& v) { c.filter = to_bool(k, v); }},
      {"filter_n_fe", [](RunConfig& c, auto& k, auto& v) { c.filter_n_fe = to_int(k, v); }},
      {"e_cut", [](RunConfig& c, auto& k, auto& v) { c.e_cut = to_double(k, v); }},
      {"edge_threshold", [](RunConfig& c, auto& k, auto& v) { c.edge_threshold = to_double(k, v); }},
      {"total_cycles", [](RunConfig& c, auto& k, auto& v) { c.total_cycles = to_double(k, v); }},
      {"snapshot_cycles", [](RunConfig& c, auto& k, auto& v) {
         c.snapshot_cycles.clear();
         for (const auto& s : split_list(v)) c.snapshot_cycles.push_back(to_double(k, s));
       }},
      {"hhg", [](RunConfig& c, auto& k, auto& v) { c.hhg = to_bool(k, v); }},
      {"hhg_omega_max_up", [](RunConfig& c, auto& k, auto& v) { c.hhg_omega_max_up = to_double(k, v); }},
      {"hhg_points", [](RunConfig& c, auto& k, auto& v) { c.hhg_points = to_int(k, v); }},
      {"density_r_max", [](RunConfig& c, auto& k, auto& v) { c.density_r_max = to_double(k, v); }},
      {"density_dr", [](RunConfig& c, auto& k, auto& v) { c.density_dr = to_double(k, v); }},
      {"checkpoint_cycles", [](RunConfig& c, auto& k, auto& v) { c.checkpoint_cycles = to_double(k, v); }},
      {"output_dir", [](RunConfig& c, auto&, auto& v) { c.output_dir = v; }},
      {"seed", [](RunConfig& c, auto& k, auto& v) {
         const long long s = to_integer(k, v);
         if (s < 0) throw ConfigError("config: seed must be non-negative");
         c.seed = static_cast<std::uint64_t>(s);
       }},
      {"scan_l_max", [](RunConfig& c, auto& k, auto& v) {
         c.scan_l_max.clear();
         for (const auto& s : split_list(v)) c.scan_l_max.push_back(to_int(k, s));
       }},
      {"scan_dt", [](RunConfig& c, auto& k, auto& v) {
         c.scan_dt.clear();
         for (const auto& s : split_list(v)) c.scan_dt.push_back(to_double(k, s));
       }},
      {"scan_trials", [](RunConfig& c, auto& k, auto& v) { c.scan_trials = to_int(k, v); }},
  };
  return table;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig c;
  bool have_r_sigma = false;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) {
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": unknown key '" + key + "'");
    }
    if (!seen.insert(key).second) {
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": duplicate key '" + key + "'");
    }
    it->second(c, key, value);
    if (key == "r_sigma") have_r_sigma = true;
  }
  for (const char* required : {"xi_max", "n_dvr", "n_fe_inner", "n_fe_outer", "l_max"}) {
    if (!seen.count(required)) {
      throw ConfigError(std::string("config: missing required key '") + required + "'");
    }
  }
  if (!seen.count("total_cycles")) c.total_cycles = c.cycles;
  const double derived = c.grid.n_elements() > 0
                             ? c.grid.n_fe_inner * (c.grid.xi_max / c.grid.n_elements())
                             : 0.0;
  if (have_r_sigma) {
    if (std::abs(c.grid.r_sigma - derived) > 1e-9 * std::max(1.0, c.grid.xi_max)) {
      throw ConfigError("config: r_sigma = " + fmt(c.grid.r_sigma) +
                        " is not on the element boundary n_fe_inner * delta_xi = " +
                        fmt(derived));
    }
  }
  c.grid.r_sigma = derived;
  c.validate();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void RunConfig::validate() const {
  try {
    grid.validate();
  } catch (const InvalidSpec& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  auto need = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError("config: " + msg);
  };
  need(wavelength_nm > 0.0, "wavelength_nm must be > 0");
  need(intensity_wcm2 >= 0.0, "intensity_wcm2 must be >= 0");
  need(cycles > 0.0, "cycles must be > 0");
  need(r_inf >= 0.0, "r_inf must be >= 0");
  need(!scaling_period || *scaling_period > 0.0, "scaling_period must be > 0");
  need(!scaling || r_inf == 0.0 || grid.n_fe_outer > 0,
       "scaling needs outer elements (n_fe_outer > 0)");
  need(l_max >= 0, "l_max must be >= 0");
  need(dt > 0.0, "dt must be > 0");
  need(eps > 0.0 && eps < 1.0, "eps must lie in (0, 1)");
  need(max_k >= 2, "max_k must be >= 2");
  need(total_cycles + 1e-12 >= cycles, "total_cycles must cover the pulse");
  need(!(gauge == Gauge::velocity && pulse_shape == PulseShape::field),
       "velocity gauge needs a vector-potential-defined pulse");
  if (filter) {
    need(grid.n_fe_inner > 0, "the stiffness filter needs an unscaled inner region");
    need(filter_n_fe >= 1 && filter_n_fe <= grid.n_fe_inner,
         "filter_n_fe must lie in [1, n_fe_inner]");
    need(e_cut > 0.0, "e_cut must be > 0");
    need(edge_threshold > 0.0 && edge_threshold <= 1.0, "edge_threshold must lie in (0, 1]");
  }
  for (double s : snapshot_cycles) {
    need(s >= 0.0 && s <= total_cycles + 1e-12, "snapshot_cycles must lie in [0, total_cycles]");
  }
  need(hhg_omega_max_up > 0.0 && hhg_points >= 1, "hhg grid must be non-empty");
  need(density_dr > 0.0, "density_dr must be > 0");
  need(!output_dir.empty(), "output_dir must not be empty");
  need(scan_trials >= 1, "scan_trials must be >= 1");
  for (int l : scan_l_max) need(l >= 0, "scan_l_max entries must be >= 0");
  for (double d : scan_dt) need(d > 0.0, "scan_dt entries must be > 0");
}

PulseSpec RunConfig::pulse_spec() const {
  return PulseSpec::from_lab(wavelength_nm, intensity_wcm2, cycles, pulse_shape, gauge);
}

long RunConfig::total_steps() const {
  const double cycle = 2.0 * 3.14159265358979323846 / units::wavelength_to_omega(wavelength_nm);
  return std::lround(total_cycles * cycle / dt);
}

namespace {

std::string physics_text(const RunConfig& c) {
  std::ostringstream os;
  os << "xi_max = " << fmt(c.grid.xi_max) << "\n"
     << "n_dvr = " << c.grid.n_dvr << "\n"
     << "n_fe_inner = " << c.grid.n_fe_inner << "\n"
     << "n_fe_outer = " << c.grid.n_fe_outer << "\n"
     << "wavelength_nm = " << fmt(c.wavelength_nm) << "\n"
     << "intensity_wcm2 = " << fmt(c.intensity_wcm2) << "\n"
     << "cycles = " << fmt(c.cycles) << "\n"
     << "pulse_shape = " << to_string(c.pulse_shape) << "\n"
     << "gauge = " << to_string(c.gauge) << "\n"
     << "scaling = " << (c.scaling ? "on" : "off") << "\n"
     << "r_inf = " << fmt(c.r_inf) << "\n";
  if (c.scaling_period) os << "scaling_period = " << fmt(*c.scaling_period) << "\n";
  os << "l_max = " << c.l_max << "\n"
     << "dt = " << fmt(c.dt) << "\n"
     << "eps = " << fmt(c.eps) << "\n"
     << "max_k = " << c.max_k << "\n"
     << "filter = " << (c.filter ? "on" : "off") << "\n"
     << "filter_n_fe = " << c.filter_n_fe << "\n"
     << "e_cut = " << fmt(c.e_cut) << "\n"
     << "edge_threshold = " << fmt(c.edge_threshold) << "\n";
  return os.str();
}

}  // namespace

std::string to_text(const RunConfig& c) {
  std::ostringstream os;
  os << physics_text(c);
  os << "r_sigma = " << fmt(c.grid.r_sigma) << "\n"
     << "total_cycles = " << fmt(c.total_cycles) << "\n"
     << "snapshot_cycles = " << join(c.snapshot_cycles, fmt) << "\n"
     << "hhg = " << (c.hhg ? "on" : "off") << "\n"
     << "hhg_omega_max_up = " << fmt(c.hhg_omega_max_up) << "\n"
     << "hhg_points = " << c.hhg_points << "\n"
     << "density_r_max = " << fmt(c.density_r_max) << "\n"
     << "density_dr = " << fmt(c.density_dr) << "\n"
     << "checkpoint_cycles = " << fmt(c.checkpoint_cycles) << "\n"
     << "output_dir = " << c.output_dir << "\n"
     << "seed = " << c.seed << "\n"
     << "scan_l_max = " << join(c.scan_l_max, [](int l) { return std::to_string(l); }) << "\n"
     << "scan_dt = " << join(c.scan_dt, fmt) << "\n"
     << "scan_trials = " << c.scan_trials << "\n";
  return os.str();
}

std::uint64_t fingerprint(const RunConfig& c) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : physics_text(c)) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace ets
