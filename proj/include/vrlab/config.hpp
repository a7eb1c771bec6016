// config.hpp - run configuration shared by every CLI subcommand
//
// File format: INI-style sections with `key = value` lines. `#` and `;` start
// comments. Unknown sections or keys are rejected with the line number.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vrlab/meanfield.hpp"
#include "vrlab/operators.hpp"

namespace vrlab {

struct ModelConfig {
  std::string kind = "w";  // "w" or "rotor"
  int s = 150;
  int w = 0;
  double h = 1.0;
  int l_max = 16;
  int l_max_limit = 128;  // adaptive rotor truncation stops here

  bool operator==(const ModelConfig&) const = default;
};

struct LambdaGrid {
  double min = 0.05;
  double max = 3.0;
  int count = 60;

  std::vector<double> values() const;
  bool operator==(const LambdaGrid&) const = default;
};

struct AmplitudeWindow {
  double t1 = 60.0;
  double t_max = 80.0;
  double floor = 1e-3;  // rotor persistence threshold on mean A

  bool operator==(const AmplitudeWindow&) const = default;
};

struct InitialStateConfig {
  std::string kind = "gaussian";  // "gaussian" (w-model) or "rotor"
  double width = 1.0;

  bool operator==(const InitialStateConfig&) const = default;
};

struct SpectrumConfig {
  double x_min = 0.0;
  double x_max = 5.0;
  double x_step = 0.01;
  double guard_band = 1e-9;
  double resolution = 1e-3;

  std::vector<double> grid() const;
  bool operator==(const SpectrumConfig&) const = default;
};

struct ClassicalSettings {
  long n = 100000;
  double theta_width = 0.5;
  double p_width = 0.3;
  double lambda = 1.0;
  double dt = 0.01;
  double t_max = 200.0;
  int record_stride = 10;
  int n_max = 3;
  int e_points = 64;

  bool operator==(const ClassicalSettings&) const = default;
};

struct OracleSettings {
  int s = 1;
  int w = 0;
  double lambda = 2.0;
  std::vector<int> sites = {2, 4, 6};
  double dt = 0.01;
  double t_max = 5.0;
  int stride = 1;

  bool operator==(const OracleSettings&) const = default;
};

struct SweepConfig {
  ModelConfig model;
  LambdaGrid lambda;
  IntegratorConfig integrator;
  AmplitudeWindow amplitude;
  InitialStateConfig initial;
  std::string out_dir = "out";
  int workers = 1;
  std::uint64_t seed = 0;
  SpectrumConfig spectrum;
  ClassicalSettings classical;
  OracleSettings oracle;

  /// Throws ConfigError naming the offending field.
  void validate() const;
  ModelSpec build_model(double lambda) const;
  DensityMatrix build_initial_state(const ModelSpec& spec) const;

  bool operator==(const SweepConfig&) const = default;
};

SweepConfig parse_config(const std::string& path);
SweepConfig parse_config_text(const std::string& text);
/// Every field, in a form parse_config_text accepts.
std::string serialize(const SweepConfig& cfg);

}  // namespace vrlab
