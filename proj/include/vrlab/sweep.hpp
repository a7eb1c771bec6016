// sweep.hpp - parallel lambda sweeps and the drivers behind each CLI subcommand
//
// Every driver writes into cfg.out_dir and returns a manifest. Results never
// depend on the worker count: rows are computed independently and written by
// one collector in grid order.

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vrlab/config.hpp"

namespace vrlab {

struct RunEntry {
  double lambda = 0.0;
  bool ok = false;
  std::string error;
  std::string trajectory_file;
  double wall_seconds = 0.0;
  double mu_infinity = 0.0;
  double mean_a = 0.0;
  std::string regime;
  int l_max = 0;  // rotor runs only
};

struct RunManifest {
  std::string command;
  std::string version;
  std::string config_echo;
  std::vector<RunEntry> runs;
  std::vector<std::string> files;
  double wall_seconds = 0.0;
  bool all_ok = true;
  /// rotor: every row has mean A above the floor.
  std::optional<bool> verification;
  /// rotor: lambda maximizing the finite-difference slope of mu_infinity.
  std::optional<double> steepest_lambda;

  void write_json(std::ostream& out) const;
};

RunManifest run_sweep(const SweepConfig& cfg);
RunManifest run_rotor_figure(const SweepConfig& cfg);
RunManifest run_spectrum(const SweepConfig& cfg);
RunManifest run_classical(const SweepConfig& cfg);
RunManifest run_oracle(const SweepConfig& cfg);

/// argmax over midpoints of (mu[i+1] - mu[i]) / (lambda[i+1] - lambda[i]).
double steepest_midpoint(const std::vector<double>& lambda, const std::vector<double>& mu);

}  // namespace vrlab
