#include "vrlab/sweep.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "vrlab/classical.hpp"
#include "vrlab/csv.hpp"
#include "vrlab/errors.hpp"
#include "vrlab/manybody.hpp"
#include "vrlab/meanfield.hpp"
#include "vrlab/spectrum.hpp"

namespace vrlab {

namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

RunManifest start_manifest(const std::string& command, const SweepConfig& cfg) {
  RunManifest m;
  m.command = command;
  m.version = VRLAB_VERSION;
  m.config_echo = serialize(cfg);
  return m;
}

void finish_manifest(RunManifest& m, const SweepConfig& cfg, Clock::time_point t0) {
  m.wall_seconds = seconds_since(t0);
  for (const auto& r : m.runs) m.all_ok = m.all_ok && r.ok;
  auto out = csv::open_output(fs::path(cfg.out_dir) / "manifest.json");
  m.write_json(out);
}

struct PointResult {
  RunEntry entry;
  TrajectoryRecord traj;
  AmplitudeReport amp;
};

PointResult run_point(const SweepConfig& cfg, double lambda, bool adaptive_rotor) {
  PointResult res;
  res.entry.lambda = lambda;
  const auto t0 = Clock::now();
  try {
    int l_max = cfg.model.l_max;
    for (;;) {
      SweepConfig local = cfg;
      local.model.l_max = l_max;
      const ModelSpec spec = local.build_model(lambda);
      try {
        res.traj = evolve(spec, local.build_initial_state(spec), cfg.integrator);
      } catch (const TruncationError&) {
        if (!adaptive_rotor || 2 * l_max > cfg.model.l_max_limit) throw;
        l_max *= 2;
        continue;
      }
      res.amp = amplitude_diagnostic(res.traj, cfg.amplitude.t1, cfg.amplitude.t_max, 0);
      const double x = lambda * std::abs(res.amp.mu_infinity);
      res.entry.regime = to_string(classify_regime(spec, x, true, cfg.spectrum.guard_band).label);
      if (spec.is_rotor()) res.entry.l_max = l_max;
      break;
    }
    res.entry.mu_infinity = res.amp.mu_infinity;
    res.entry.mean_a = res.amp.mean_a;
    res.entry.ok = true;
  } catch (const std::exception& e) {
    res.entry.ok = false;
    res.entry.error = e.what();
    res.traj = TrajectoryRecord{};
  }
  res.entry.wall_seconds = seconds_since(t0);
  return res;
}

std::vector<PointResult> run_grid(const SweepConfig& cfg, bool adaptive_rotor) {
  const std::vector<double> grid = cfg.lambda.values();
  std::vector<PointResult> results(grid.size());
  const long n = static_cast<long>(grid.size());
#pragma omp parallel for schedule(dynamic) num_threads(cfg.workers)
  for (long i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    results[k] = run_point(cfg, grid[k], adaptive_rotor);
  }
  return results;
}

// The single collector: writes every file in grid order.
void collect(RunManifest& m, const SweepConfig& cfg, std::vector<PointResult>& results) {
  const fs::path dir(cfg.out_dir);
  auto heat = csv::open_output(dir / "heatmap.csv");
  auto ampl = csv::open_output(dir / "amplitude.csv");
  auto regime = csv::open_output(dir / "regime.csv");
  heat << "lambda,t,mu\n" << std::setprecision(17);
  ampl << "lambda,t,A\n" << std::setprecision(17);
  regime << "lambda,mu_infinity,mean_A,predicted_regime\n" << std::setprecision(17);
  for (std::size_t i = 0; i < results.size(); ++i) {
    auto& r = results[i];
    if (r.entry.ok) {
      std::ostringstream name;
      name << "traj/lambda_" << std::setw(3) << std::setfill('0') << i << ".csv";
      auto out = csv::open_output(dir / name.str());
      write_trajectory_csv(out, r.traj);
      r.entry.trajectory_file = name.str();
      m.files.push_back(name.str());
      const auto mu = r.traj.mu_component(0);
      for (std::size_t k = 0; k < r.traj.times.size(); ++k) {
        heat << r.entry.lambda << ',' << r.traj.times[k] << ',' << mu[k] << '\n';
      }
      for (std::size_t k = 0; k < r.amp.times.size(); ++k) {
        ampl << r.entry.lambda << ',' << r.amp.times[k] << ',' << r.amp.a_of_t[k] << '\n';
      }
      regime << r.entry.lambda << ',' << r.entry.mu_infinity << ',' << r.entry.mean_a << ',' << r.entry.regime
             << '\n';
    }
    m.runs.push_back(r.entry);
  }
  for (const char* f : {"heatmap.csv", "amplitude.csv", "regime.csv"}) m.files.push_back(f);
}

}  // namespace

void RunManifest::write_json(std::ostream& out) const {
  nlohmann::json doc;
  doc["command"] = command;
  doc["version"] = version;
  doc["config"] = config_echo;
  doc["files"] = files;
  doc["wall_seconds"] = wall_seconds;
  doc["status"] = all_ok ? "ok" : "failed";
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : runs) {
    nlohmann::json row{{"lambda", r.lambda}, {"ok", r.ok}, {"wall_seconds", r.wall_seconds}};
    if (r.ok) {
      row["trajectory_file"] = r.trajectory_file;
      row["mu_infinity"] = r.mu_infinity;
      row["mean_A"] = r.mean_a;
      row["predicted_regime"] = r.regime;
      if (r.l_max > 0) row["l_max"] = r.l_max;
    } else {
      row["error"] = r.error;
    }
    rows.push_back(std::move(row));
  }
  doc["runs"] = std::move(rows);
  if (verification) doc["verification"] = *verification;
  if (steepest_lambda) doc["steepest_lambda"] = *steepest_lambda;
  out << doc.dump(2) << '\n';
}

double steepest_midpoint(const std::vector<double>& lambda, const std::vector<double>& mu) {
  if (lambda.size() != mu.size() || lambda.size() < 2) throw DiagnosticsError("steepest_midpoint needs >= 2 matched points");
  double best = -std::numeric_limits<double>::infinity();
  double at = lambda.front();
  for (std::size_t i = 0; i + 1 < lambda.size(); ++i) {
    const double slope = (mu[i + 1] - mu[i]) / (lambda[i + 1] - lambda[i]);
    if (slope > best) {
      best = slope;
      at = 0.5 * (lambda[i] + lambda[i + 1]);
    }
  }
  return at;
}

RunManifest run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  const auto t0 = Clock::now();
  RunManifest m = start_manifest("sweep", cfg);
  auto results = run_grid(cfg, false);
  collect(m, cfg, results);
  finish_manifest(m, cfg, t0);
  return m;
}

RunManifest run_rotor_figure(const SweepConfig& cfg) {
  cfg.validate();
  if (cfg.model.kind != "rotor") throw ConfigError("rotor: model.kind must be 'rotor'");
  const auto t0 = Clock::now();
  RunManifest m = start_manifest("rotor", cfg);
  auto results = run_grid(cfg, true);
  collect(m, cfg, results);

  bool persistent = true;
  std::vector<double> lam;
  std::vector<double> mu;
  for (const auto& r : m.runs) {
    persistent = persistent && r.ok && r.mean_a > cfg.amplitude.floor;
    if (r.ok) {
      lam.push_back(r.lambda);
      mu.push_back(std::abs(r.mu_infinity));
    }
  }
  m.verification = persistent;
  if (lam.size() >= 2) m.steepest_lambda = steepest_midpoint(lam, mu);
  finish_manifest(m, cfg, t0);
  return m;
}

RunManifest run_spectrum(const SweepConfig& cfg) {
  cfg.validate();
  const auto t0 = Clock::now();
  RunManifest m = start_manifest("spectrum", cfg);
  const ModelSpec spec = cfg.build_model(1.0);
  const std::vector<double> grid = cfg.spectrum.grid();
  const fs::path dir(cfg.out_dir);

  std::vector<SpectrumReport> reports(grid.size());
  std::vector<std::string> errors(grid.size());
  const long n = static_cast<long>(grid.size());
#pragma omp parallel for schedule(dynamic) num_threads(cfg.workers)
  for (long i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      reports[k] = diagonalize(spec, grid[k], cfg.spectrum.guard_band);
    } catch (const std::exception& e) {
      errors[k] = e.what();
    }
  }
  std::vector<SpectrumReport> good;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    RunEntry e;
    e.lambda = grid[k];
    e.ok = errors[k].empty();
    e.error = errors[k];
    if (e.ok) good.push_back(reports[k]);
    m.runs.push_back(e);
  }
  {
    auto out = csv::open_output(dir / "spectrum.csv");
    write_spectrum_csv(out, good);
    m.files.push_back("spectrum.csv");
  }
  try {
    const auto points = scan_critical_x(spec, grid, cfg.spectrum.guard_band, cfg.spectrum.resolution);
    auto out = csv::open_output(dir / "critical.json");
    write_critical_json(out, cfg.model.kind == "w" ? cfg.model.w : -1, points);
    m.files.push_back("critical.json");
  } catch (const std::exception& e) {
    RunEntry fail;
    fail.error = std::string("critical-x scan: ") + e.what();
    m.runs.push_back(fail);
  }
  finish_manifest(m, cfg, t0);
  return m;
}

RunManifest run_classical(const SweepConfig& cfg) {
  cfg.validate();
  const auto t0 = Clock::now();
  RunManifest m = start_manifest("classical", cfg);
  const fs::path dir(cfg.out_dir);
  const auto& c = cfg.classical;

  RunEntry e;
  e.lambda = c.lambda;
  try {
    const ParticleEnsemble ens = sample_ensemble(static_cast<std::size_t>(c.n), c.theta_width, c.p_width, cfg.seed);
    ClassicalConfig cc;
    cc.lambda = c.lambda;
    cc.dt = c.dt;
    cc.t_max = c.t_max;
    cc.record_stride = c.record_stride;
    const ClassicalTrajectory traj = evolve_classical(ens, cc);
    {
      auto out = csv::open_output(dir / "classical.csv");
      write_classical_csv(out, traj);
      m.files.push_back("classical.csv");
    }
    // plateau of mu1 over the amplitude window
    double sum = 0.0;
    int cnt = 0;
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
      if (traj.times[k] >= cfg.amplitude.t1 - 1e-12 && traj.times[k] <= cfg.amplitude.t_max + 1e-12) {
        sum += traj.mu1[k];
        ++cnt;
      }
    }
    if (cnt == 0) throw DiagnosticsError("classical run does not reach the amplitude window");
    e.mu_infinity = sum / cnt;
    const double lam_mu = c.lambda * std::abs(e.mu_infinity);
    if (lam_mu > 0.0) {
      std::vector<double> energies;
      for (int k = 0; k < c.e_points; ++k) energies.push_back(-lam_mu + 2.0 * lam_mu * (k + 0.5) / c.e_points);
      auto out = csv::open_output(dir / "bands.csv");
      write_band_csv(out, band_spectrum(lam_mu, energies, c.n_max));
      m.files.push_back("bands.csv");
    }
    e.trajectory_file = "classical.csv";
    e.ok = true;
  } catch (const std::exception& ex) {
    e.ok = false;
    e.error = ex.what();
  }
  e.wall_seconds = seconds_since(t0);
  m.runs.push_back(e);
  finish_manifest(m, cfg, t0);
  return m;
}

RunManifest run_oracle(const SweepConfig& cfg) {
  cfg.validate();
  const auto t0 = Clock::now();
  RunManifest m = start_manifest("oracle", cfg);
  const auto& o = cfg.oracle;
  const ModelSpec spec = build_w_model(o.s, o.w, cfg.model.h, o.lambda);
  const CVector local = gaussian_w_amplitudes(o.s, cfg.initial.width);

  std::vector<OracleComparison> cmp(o.sites.size());
  std::vector<RunEntry> entries(o.sites.size());
  const long n = static_cast<long>(o.sites.size());
#pragma omp parallel for schedule(dynamic) num_threads(cfg.workers)
  for (long i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const auto tk = Clock::now();
    entries[k].lambda = o.lambda;
    try {
      cmp[k] = compare_with_meanfield(spec, local, o.sites[k], o.dt, o.t_max, o.stride);
      entries[k].ok = true;
    } catch (const std::exception& e) {
      entries[k].error = e.what();
    }
    entries[k].wall_seconds = seconds_since(tk);
  }
  for (std::size_t k = 0; k < o.sites.size(); ++k) {
    if (entries[k].ok) {
      const std::string name = "oracle_N" + std::to_string(o.sites[k]) + ".csv";
      auto out = csv::open_output(fs::path(cfg.out_dir) / name);
      write_oracle_csv(out, cmp[k]);
      entries[k].trajectory_file = name;
      m.files.push_back(name);
    }
    m.runs.push_back(entries[k]);
  }
  finish_manifest(m, cfg, t0);
  return m;
}

}  // namespace vrlab
