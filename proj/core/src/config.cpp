#include "delta/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace delta {

namespace {

std::string trim(const std::string& s) {
  auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
  std::ostringstream os;
  os << origin << ":" << line << ": " << msg;
  throw ConfigError(os.str());
}

double parse_double(const std::string& text, const std::string& where) {
  try {
    std::size_t used = 0;
    double v = std::stod(text, &used);
    if (used != text.size() || !std::isfinite(v)) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(where + ": expected a number, got '" + text + "'");
  }
}

}  // namespace

ConfigFile ConfigFile::parse(std::istream& in, const std::string& origin) {
  ConfigFile cfg;
  cfg.origin_ = origin;
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail(origin, line_no, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) fail(origin, line_no, "empty section name");
      cfg.sections_[section];
      continue;
    }

    auto eq = line.find('=');
    if (eq == std::string::npos) fail(origin, line_no, "expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(origin, line_no, "empty key");
    if (section.empty()) fail(origin, line_no, "entry before any [section] header");
    auto& sec = cfg.sections_[section];
    if (sec.count(key)) fail(origin, line_no, "duplicate key '" + key + "'");
    sec[key] = value;
  }
  return cfg;
}

ConfigFile ConfigFile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  return parse(in, path);
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
  auto it = sections_.find(section);
  return it != sections_.end() && it->second.count(key) > 0;
}

std::string ConfigFile::get_string(const std::string& section, const std::string& key,
                                   const std::string& fallback) const {
  auto it = sections_.find(section);
  if (it == sections_.end()) return fallback;
  auto kit = it->second.find(key);
  return kit == it->second.end() ? fallback : kit->second;
}

double ConfigFile::get_double(const std::string& section, const std::string& key,
                              double fallback) const {
  if (!has(section, key)) return fallback;
  return parse_double(get_string(section, key, ""), "[" + section + "] " + key);
}

int ConfigFile::get_int(const std::string& section, const std::string& key,
                        int fallback) const {
  if (!has(section, key)) return fallback;
  double v = get_double(section, key, 0.0);
  int i = static_cast<int>(std::llround(v));
  if (std::fabs(v - i) > 1e-9) {
    throw ConfigError("[" + section + "] " + key + ": expected an integer");
  }
  return i;
}

bool ConfigFile::get_bool(const std::string& section, const std::string& key,
                          bool fallback) const {
  if (!has(section, key)) return fallback;
  std::string v = get_string(section, key, "");
  std::transform(v.begin(), v.end(), v.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("[" + section + "] " + key + ": expected a boolean, got '" + v + "'");
}

std::uint64_t ConfigFile::get_u64(const std::string& section, const std::string& key,
                                  std::uint64_t fallback) const {
  if (!has(section, key)) return fallback;
  std::string text = get_string(section, key, "");
  try {
    // stoull accepts a leading minus and wraps; reject it explicitly.
    if (text.find('-') != std::string::npos) throw std::invalid_argument(text);
    std::size_t used = 0;
    unsigned long long v = std::stoull(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("[" + section + "] " + key + ": expected an unsigned integer, got '" +
                      text + "'");
  }
}

std::vector<double> ConfigFile::get_double_list(
    const std::string& section, const std::string& key,
    const std::vector<double>& fallback) const {
  if (!has(section, key)) return fallback;
  std::string text = get_string(section, key, "");
  std::vector<double> out;
  std::string item;
  std::istringstream ss(text);
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) {
      throw ConfigError("[" + section + "] " + key + ": empty list element");
    }
    out.push_back(parse_double(item, "[" + section + "] " + key));
  }
  if (out.empty()) {
    throw ConfigError("[" + section + "] " + key + ": empty list");
  }
  return out;
}

RunConfig::RunConfig()
    : geometry(default_geometry()),
      limits(),
      servo(),
      rendering(),
      grid(),
      experiment() {}

namespace {

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"geometry",
       {"base_radius", "upper_arm", "forearm", "effector_radius", "azimuth_0",
        "azimuth_1", "azimuth_2", "theta_min", "theta_max"}},
      {"servo",
       {"torque_limit", "max_rate", "quantization", "theta_min", "theta_max"}},
      {"rendering", {"stiffness", "apex_height", "cone_angle"}},
      {"workspace",
       {"x_min", "x_max", "y_min", "y_max", "z_min", "z_max", "spacing"}},
      {"experiment",
       {"radii", "height", "angular_rate", "duration", "sample_rate", "repeats",
        "ideal_servo", "noise_level", "noise_seed", "anchor_x", "anchor_y",
        "anchor_z"}},
  };
  return keys;
}

}  // namespace

RunConfig resolve_run_config(const ConfigFile& file) {
  // Reject unknown sections/keys: silent typos in a physics config are worse
  // than a hard error.
  const auto& known = known_keys();
  for (const auto& [section, entries] : file.sections()) {
    auto sec_it = known.find(section);
    if (sec_it == known.end()) {
      throw ConfigError("unknown config section [" + section + "]");
    }
    for (const auto& [key, value] : entries) {
      if (!sec_it->second.count(key)) {
        throw ConfigError("unknown key '" + key + "' in section [" + section + "]");
      }
    }
  }

  RunConfig rc;

  {
    const DeltaGeometry d = default_geometry();
    double base = file.get_double("geometry", "base_radius", d.base_radius);
    double upper = file.get_double("geometry", "upper_arm", d.upper_arm);
    double fore = file.get_double("geometry", "forearm", d.forearm);
    double eff = file.get_double("geometry", "effector_radius", d.effector_radius);
    std::array<double, 3> az{
        file.get_double("geometry", "azimuth_0", d.chain_azimuths[0]),
        file.get_double("geometry", "azimuth_1", d.chain_azimuths[1]),
        file.get_double("geometry", "azimuth_2", d.chain_azimuths[2])};
    try {
      rc.geometry = DeltaGeometry(base, upper, fore, eff, az);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("[geometry] ") + e.what());
    }
    rc.limits.min = file.get_double("geometry", "theta_min", rc.limits.min);
    rc.limits.max = file.get_double("geometry", "theta_max", rc.limits.max);
    if (!(rc.limits.min < rc.limits.max)) {
      throw ConfigError("[geometry] theta_min must be below theta_max");
    }
  }

  {
    rc.servo.torque_limit = file.get_double("servo", "torque_limit", 0.0);
    rc.servo.max_rate = file.get_double("servo", "max_rate", rc.servo.max_rate);
    rc.servo.quantization =
        file.get_double("servo", "quantization", rc.servo.quantization);
    rc.servo.limits.min = file.get_double("servo", "theta_min", rc.limits.min);
    rc.servo.limits.max = file.get_double("servo", "theta_max", rc.limits.max);
    try {
      validate_servo_config(rc.servo, /*allow_unset_torque=*/true);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("[servo] ") + e.what());
    }
  }

  {
    rc.rendering.stiffness =
        file.get_double("rendering", "stiffness", rc.rendering.stiffness);
    rc.rendering.apex_height =
        file.get_double("rendering", "apex_height", rc.rendering.apex_height);
    rc.rendering.cone_angle =
        file.get_double("rendering", "cone_angle", rc.rendering.cone_angle);
    if (!(rc.rendering.stiffness > 0.0) || !(rc.rendering.apex_height > 0.0)) {
      throw ConfigError("[rendering] stiffness and apex_height must be positive");
    }
    if (!(rc.rendering.cone_angle > 0.0) || !(rc.rendering.cone_angle < kPi / 2.0)) {
      throw ConfigError("[rendering] cone_angle must be in (0, pi/2)");
    }
  }

  {
    rc.grid.x_min = file.get_double("workspace", "x_min", rc.grid.x_min);
    rc.grid.x_max = file.get_double("workspace", "x_max", rc.grid.x_max);
    rc.grid.y_min = file.get_double("workspace", "y_min", rc.grid.y_min);
    rc.grid.y_max = file.get_double("workspace", "y_max", rc.grid.y_max);
    rc.grid.z_min = file.get_double("workspace", "z_min", rc.grid.z_min);
    rc.grid.z_max = file.get_double("workspace", "z_max", rc.grid.z_max);
    rc.grid.spacing = file.get_double("workspace", "spacing", rc.grid.spacing);
    if (!(rc.grid.spacing > 0.0) || rc.grid.x_max < rc.grid.x_min ||
        rc.grid.y_max < rc.grid.y_min || rc.grid.z_max < rc.grid.z_min) {
      throw ConfigError("[workspace] malformed grid bounds or spacing");
    }
  }

  {
    ExperimentConfig& e = rc.experiment;
    e.radii = file.get_double_list("experiment", "radii", e.radii);
    for (double r : e.radii) {
      if (!(r >= 0.0)) throw ConfigError("[experiment] radii must be non-negative");
    }
    e.height = file.get_double("experiment", "height", e.height);
    e.angular_rate = file.get_double("experiment", "angular_rate", e.angular_rate);
    e.duration = file.get_double("experiment", "duration", e.duration);
    e.sample_rate = file.get_double("experiment", "sample_rate", e.sample_rate);
    e.repeats = file.get_int("experiment", "repeats", e.repeats);
    e.ideal_servo = file.get_bool("experiment", "ideal_servo", e.ideal_servo);
    e.noise_level = file.get_double("experiment", "noise_level", e.noise_level);
    e.noise_seed = file.get_u64("experiment", "noise_seed", e.noise_seed);
    if (!(e.angular_rate > 0.0) || !(e.duration > 0.0) || !(e.sample_rate > 0.0)) {
      throw ConfigError("[experiment] rates and duration must be positive");
    }
    if (e.repeats < 1) throw ConfigError("[experiment] repeats must be >= 1");
    if (e.noise_level < 0.0) throw ConfigError("[experiment] noise_level must be >= 0");
    bool ax = file.has("experiment", "anchor_x");
    bool ay = file.has("experiment", "anchor_y");
    bool az = file.has("experiment", "anchor_z");
    if (ax || ay || az) {
      if (!(ax && ay && az)) {
        throw ConfigError("[experiment] anchor_x/anchor_y/anchor_z must be set together");
      }
      e.anchor_override = true;
      e.anchor = {file.get_double("experiment", "anchor_x", 0.0),
                  file.get_double("experiment", "anchor_y", 0.0),
                  file.get_double("experiment", "anchor_z", 0.0)};
    }
  }

  return rc;
}

RunConfig load_run_config(const std::string& path) {
  if (path.empty()) return RunConfig();
  return resolve_run_config(ConfigFile::load(path));
}

}  // namespace delta
