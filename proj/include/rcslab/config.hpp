#pragma once

// Flat key = value run configuration. One entry per line, '#' starts a
// comment, list values are comma separated and vector lists separate triples
// with ';'. See README.md for the key table.

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "rcslab/dynamics.hpp"
#include "rcslab/integrator.hpp"
#include "rcslab/meanfield.hpp"
#include "rcslab/params.hpp"

namespace rcs {

/// Error in a configuration file. key() names the offending key ("" for
/// syntax errors that precede any key).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& key, const std::string& message);
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

struct SlopeBand {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double s) const { return s >= lo && s <= hi; }
};

struct Scenario {
  /// "explicit" uses init.positions / init.velocities; any MeasureKind name
  /// samples a cloud with the run seed.
  std::string init_kind = "uniform_box";
  MeasureSpec measure;
  std::vector<Vec3> positions;
  std::vector<Vec3> velocities;
  InitMode init_mode = InitMode::from_v;

  double K = 0.0;
  std::vector<double> c_list;
  std::vector<std::size_t> n_list;
  SlopeBand climit_band{-4.4, -3.6};
  SlopeBand kinetic_band{-2.5, -1.6};
  double r2_min = 0.98;
  double fit_window = 0.5;
};

struct RunConfig {
  ModelParams params;
  SimConfig sim;
  Scenario scenario;
  bool dt_from_rule = true;  // dt absent from the file: default_dt(params)
};

RunConfig parse_config(const std::filesystem::path& path);
RunConfig parse_config_string(const std::string& text);

/// Canonical text form. parse_config_string(serialize_config(c)) reproduces c.
std::string serialize_config(const RunConfig& config);

/// Ensemble at t = 0 for the given model: explicit data go through
/// prepare_initial (from_w for the classical model), sampled clouds come from
/// sample_cloud with the run seed.
EnsembleState build_initial(const RunConfig& config, Model model);

}  // namespace rcs
