#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "delta/device.hpp"
#include "delta/geometry.hpp"
#include "delta/workspace.hpp"

namespace delta {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// INI-style file: [section] headers, `key = value` entries, `#` comments.
/// Unknown sections/keys are rejected by the typed loader below.
class ConfigFile {
 public:
  static ConfigFile parse(std::istream& in, const std::string& origin);
  static ConfigFile load(const std::string& path);

  bool has(const std::string& section, const std::string& key) const;
  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key,
                    double fallback) const;
  int get_int(const std::string& section, const std::string& key,
              int fallback) const;
  bool get_bool(const std::string& section, const std::string& key,
                bool fallback) const;
  std::uint64_t get_u64(const std::string& section, const std::string& key,
                        std::uint64_t fallback) const;
  std::vector<double> get_double_list(const std::string& section,
                                      const std::string& key,
                                      const std::vector<double>& fallback) const;

  const std::map<std::string, std::map<std::string, std::string>>& sections() const {
    return sections_;
  }

 private:
  std::string origin_;
  std::map<std::string, std::map<std::string, std::string>> sections_;
};

struct RenderingConfig {
  double stiffness = 72.0;                       // N/m
  double apex_height = 0.10;                     // m
  double cone_angle = 0.26179938779914946;       // rad (15 deg)
};

struct ExperimentConfig {
  std::vector<double> radii{0.005, 0.010, 0.015};  // m
  double height = -0.030;                          // m
  double angular_rate = 3.141592653589793;         // rad/s
  double duration = 4.0;                           // s
  double sample_rate = 250.0;                      // Hz
  int repeats = 3;
  bool ideal_servo = false;
  double noise_level = 0.0;
  std::uint64_t noise_seed = 0;
  bool anchor_override = false;
  Vec3 anchor;  // defaults to the circle centre when not overridden
};

/// Everything a run needs, resolved against defaults.
struct RunConfig {
  DeltaGeometry geometry;
  JointLimits limits;
  ServoConfig servo;
  RenderingConfig rendering;
  GridSpec grid;
  ExperimentConfig experiment;

  RunConfig();
};

/// Builds a RunConfig from a parsed file; validates every key and throws
/// ConfigError with the offending location on failure.
RunConfig resolve_run_config(const ConfigFile& file);

/// Loads a config file (empty path = defaults only).
RunConfig load_run_config(const std::string& path);

}  // namespace delta
