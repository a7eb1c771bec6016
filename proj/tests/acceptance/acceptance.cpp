// Acceptance suite: one PASS/FAIL line per criterion.
//
//   vrlab_acceptance               run all nine
//   vrlab_acceptance --criterion 3 run one
//
// Exit status is 0 only when every selected criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vrlab/classical.hpp"
#include "vrlab/config.hpp"
#include "vrlab/errors.hpp"
#include "vrlab/manybody.hpp"
#include "vrlab/meanfield.hpp"
#include "vrlab/operators.hpp"
#include "vrlab/spectrum.hpp"
#include "vrlab/sweep.hpp"

using namespace vrlab;

namespace {

// tolerances and thresholds
constexpr double kXcTol = 0.05;
constexpr double kAsymptoticTol = 1e-2;
constexpr double kThermalMuMax = 0.05;
constexpr double kVrMuMin = 0.2;
constexpr double kVrAmpMax = 1e-2;
constexpr double kBoundaryMu = 0.125;  // midway between the thermal and VR thresholds
constexpr double kBoundaryLo = 1.0;
constexpr double kBoundaryHi = 1.4;
constexpr double kOscX = 1.6;
constexpr double kVrX = 1.4;
constexpr double kAmpRatio = 10.0;
constexpr double kFreqTol = 0.10;
constexpr double kRotorAmpFloor = 1e-3;
constexpr double kSteepLo = 0.45;
constexpr double kSteepHi = 0.75;
constexpr double kEnergyDrift = 1e-7;
constexpr double kDefect = 1e-8;
constexpr double kParityLeak = 1e-9;
constexpr double kOrderFactor = 12.0;
constexpr double kFreeTol = 1e-6;
constexpr double kCorrSpread = 2.0;
constexpr double kPlateauVarFrac = 0.01;
constexpr double kClassicalDrift = 1e-4;
constexpr double kOmegaRef = 0.84721;
constexpr double kOmegaTol = 1e-4;

// mean-field runs: dt is above the library default to keep the suite desk-scale
constexpr double kDt = 5e-3;
constexpr double kTMax = 100.0;
constexpr int kStride = 10;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

IntegratorConfig mf_config(double dt = kDt) {
  IntegratorConfig cfg;
  cfg.dt = dt;
  cfg.t_max = kTMax;
  cfg.record_stride = kStride;
  return cfg;
}

struct WRun {
  double lambda = 0.0;
  TrajectoryRecord traj;
  AmplitudeReport amp;
};

WRun run_w(int w, double lambda) {
  const int s = 150;
  const ModelSpec spec = build_w_model(s, w, 1.0, lambda);
  WRun r;
  r.lambda = lambda;
  r.traj = evolve(spec, gaussian_w_state(s), mf_config());
  r.amp = amplitude_diagnostic(r.traj, 60.0, 80.0);
  std::printf("  w=%d lambda=%s mu_inf=%s mean_A=%s\n", w, fmt(lambda).c_str(), fmt(r.amp.mu_infinity).c_str(),
              fmt(r.amp.mean_a).c_str());
  std::fflush(stdout);
  return r;
}

Outcome c1_critical_points() {
  SpectrumConfig sc;
  sc.x_min = 0.01;
  sc.x_max = 5.0;
  const auto grid = sc.grid();
  auto even_xc = [&](int w) {
    std::vector<double> out;
    for (const auto& cp : scan_critical_x(build_w_model(500, w, 1.0), grid, sc.guard_band, sc.resolution)) {
      if (cp.parity > 0) out.push_back(cp.x_c);
    }
    return out;
  };
  const auto w1 = even_xc(1);
  const auto w2 = even_xc(2);
  bool ok = w1.size() == 1 && std::abs(w1[0] - 1.51) <= kXcTol;
  ok = ok && w2.size() == 2 && std::abs(w2[0] - 0.71) <= kXcTol && std::abs(w2[1] - 1.81) <= kXcTol;

  const ModelSpec w0 = build_w_model(500, 0, 1.0);
  int worst_lo = 1;
  int worst_hi = 1;
  for (double x : grid) {
    const auto c = count_bound_states(w0, x, sc.guard_band);
    worst_lo = std::min(worst_lo, c.even + c.odd);
    worst_hi = std::max(worst_hi, c.even + c.odd);
  }
  ok = ok && worst_lo == 1 && worst_hi == 1;

  std::ostringstream d;
  d << "w=1 even x_c {";
  for (double x : w1) d << ' ' << fmt(x);
  d << " } w=2 even x_c {";
  for (double x : w2) d << ' ' << fmt(x);
  d << " } w=0 bound count range [" << worst_lo << ", " << worst_hi << "]";
  return {ok, d.str()};
}

Outcome c2_asymptotic_energies() {
  const auto rep = diagonalize(build_w_model(500, 1, 1.0), 50.0);
  std::vector<double> expect;
  for (int p = 1; p <= 3; ++p) expect.push_back(std::cos(std::numbers::pi * p / 4.0) - 50.0);
  std::sort(expect.begin(), expect.end());
  std::vector<double> got;
  for (const auto& b : rep.bound_states) got.push_back(b.energy);
  std::sort(got.begin(), got.end());
  double worst = got.size() == expect.size() ? 0.0 : INFINITY;
  if (got.size() == expect.size()) {
    for (std::size_t k = 0; k < got.size(); ++k) worst = std::max(worst, std::abs(got[k] - expect[k]));
  }
  const bool ok = rep.n_b_total == 3 && worst <= kAsymptoticTol;
  return {ok, "n_b_total=" + std::to_string(rep.n_b_total) + " max |E - E_asym|=" + fmt(worst)};
}

Outcome c3_w0_transition() {
  const std::vector<double> grid = {0.5, 0.8, 1.0, 1.1, 1.2, 1.4, 2.0};
  std::vector<WRun> runs;
  for (double lam : grid) runs.push_back(run_w(0, lam));
  const WRun& lo = runs.front();
  const WRun& hi = runs.back();
  const bool thermal = std::abs(lo.amp.mu_infinity) < kThermalMuMax;
  const bool vr = hi.amp.mu_infinity > kVrMuMin && hi.amp.mean_a < kVrAmpMax;

  // first upward crossing of kBoundaryMu, linearly interpolated
  double boundary = NAN;
  for (std::size_t k = 1; k < runs.size(); ++k) {
    const double a = std::abs(runs[k - 1].amp.mu_infinity);
    const double b = std::abs(runs[k].amp.mu_infinity);
    if (a < kBoundaryMu && b >= kBoundaryMu) {
      boundary = runs[k - 1].lambda + (kBoundaryMu - a) / (b - a) * (runs[k].lambda - runs[k - 1].lambda);
      break;
    }
  }
  const bool in_range = boundary >= kBoundaryLo && boundary <= kBoundaryHi;
  return {thermal && vr && in_range, "mu_inf(0.5)=" + fmt(lo.amp.mu_infinity) + " mu_inf(2.0)=" +
                                         fmt(hi.amp.mu_infinity) + " mean_A(2.0)=" + fmt(hi.amp.mean_a) +
                                         " boundary=" + fmt(boundary)};
}

Outcome c4_w1_oscillations() {
  const std::vector<double> grid = {0.8, 1.0, 1.2, 1.8, 2.2};
  double vr_max = 0.0;
  double osc_min = INFINITY;
  int n_vr = 0;
  int n_osc = 0;
  double worst_freq = 0.0;
  std::ostringstream d;
  for (double lam : grid) {
    const WRun r = run_w(1, lam);
    const double x = lam * std::abs(r.amp.mu_infinity);
    if (x < kVrX) {
      vr_max = std::max(vr_max, r.amp.mean_a);
      ++n_vr;
    } else if (x > kOscX) {
      osc_min = std::min(osc_min, r.amp.mean_a);
      ++n_osc;
      const auto even = diagonalize(build_w_model(150, 1, 1.0), x).even_energies();
      if (even.size() < 2) {
        worst_freq = INFINITY;
        continue;
      }
      const double gap = even[1] - even[0];
      const double omega = dominant_frequency(r.traj.times, r.traj.mu_component(0), 60.0, 100.0, 0.05, 3.0);
      worst_freq = std::max(worst_freq, std::abs(omega - gap) / gap);
      d << "[lambda=" << fmt(lam) << " x=" << fmt(x) << " omega=" << fmt(omega) << " gap=" << fmt(gap) << "] ";
    }
  }
  const bool ok = n_vr > 0 && n_osc > 0 && osc_min > kAmpRatio * vr_max && worst_freq <= kFreqTol;
  d << "VR points=" << n_vr << " max A=" << fmt(vr_max) << " osc points=" << n_osc << " min A=" << fmt(osc_min)
    << " worst rel freq err=" << fmt(worst_freq);
  return {ok, d.str()};
}

Outcome c5_rotor() {
  SweepConfig cfg;
  cfg.model.kind = "rotor";
  cfg.model.l_max = 20;
  cfg.initial.kind = "rotor";
  cfg.lambda.min = 0.1;
  cfg.lambda.max = 1.2;
  cfg.lambda.count = 20;
  cfg.integrator.dt = 1e-3;
  cfg.integrator.t_max = kTMax;
  cfg.integrator.record_stride = 50;
  cfg.amplitude.floor = kRotorAmpFloor;
  cfg.out_dir = (std::filesystem::temp_directory_path() / "vrlab_acceptance_rotor").string();
  const RunManifest m = run_rotor_figure(cfg);
  double min_a = INFINITY;
  double at = NAN;
  for (const auto& r : m.runs) {
    std::printf("  lambda=%s ok=%d mu_inf=%s mean_A=%s l_max=%d\n", fmt(r.lambda).c_str(), r.ok ? 1 : 0,
                fmt(r.mu_infinity).c_str(), fmt(r.mean_a).c_str(), r.l_max);
    if (r.mean_a < min_a) {
      min_a = r.mean_a;
      at = r.lambda;
    }
  }
  const double steep = m.steepest_lambda.value_or(NAN);
  const bool persistent = m.all_ok && m.verification.value_or(false);
  const bool change = steep >= kSteepLo && steep <= kSteepHi;
  return {persistent && change, "min mean_A=" + fmt(min_a) + " at lambda=" + fmt(at) +
                                    " steepest dmu/dlambda at " + fmt(steep)};
}

struct Witness {
  double energy = 0.0;
  double defect = 0.0;
  double parity = 0.0;
};

Witness witness(const TrajectoryRecord& t) {
  Witness w;
  const double scale = std::max(1.0, std::abs(t.energy.front()));
  for (std::size_t k = 0; k < t.size(); ++k) {
    w.energy = std::max(w.energy, std::abs(t.energy[k] - t.energy.front()) / scale);
    w.defect = std::max({w.defect, t.trace_err[k], t.herm_err[k]});
    w.parity = std::max(w.parity, t.parity_odd[k]);
  }
  return w;
}

Outcome c6_conservation() {
  struct Case {
    std::string name;
    ModelSpec spec;
    DensityMatrix rho0;
    double dt;
  };
  std::vector<Case> cases;
  cases.push_back({"w=0 lambda=2", build_w_model(150, 0, 1.0, 2.0), gaussian_w_state(150), kDt});
  cases.push_back({"w=1 lambda=2.2", build_w_model(150, 1, 1.0, 2.2), gaussian_w_state(150), kDt});
  cases.push_back({"rotor lambda=1.2", build_rotor_model(20, 1.2), rotor_initial_state(20), 1e-3});
  Witness worst;
  std::ostringstream d;
  for (const auto& c : cases) {
    const Witness w = witness(evolve(c.spec, c.rho0, mf_config(c.dt)));
    std::printf("  %s energy=%s defect=%s parity=%s\n", c.name.c_str(), fmt(w.energy).c_str(),
                fmt(w.defect).c_str(), fmt(w.parity).c_str());
    worst.energy = std::max(worst.energy, w.energy);
    worst.defect = std::max(worst.defect, w.defect);
    worst.parity = std::max(worst.parity, w.parity);
  }

  const ModelSpec spec = build_w_model(20, 1, 1.0, 1.8);
  const CMatrix rho0 = gaussian_w_state(20).matrix();
  auto run = [&](double dt) {
    CMatrix rho = rho0;
    const long n = std::lround(2.0 / dt);
    for (long k = 0; k < n; ++k) rho = rk4_step(spec, rho, dt);
    return rho;
  };
  const CMatrix ref = run(0.025);
  const double factor = (run(0.1) - ref).cwiseAbs().maxCoeff() / (run(0.05) - ref).cwiseAbs().maxCoeff();

  const bool ok = worst.energy < kEnergyDrift && worst.defect < kDefect && worst.parity < kParityLeak &&
                  factor >= kOrderFactor;
  return {ok, "energy drift=" + fmt(worst.energy) + " defect=" + fmt(worst.defect) + " parity leak=" +
                  fmt(worst.parity) + " order factor=" + fmt(factor)};
}

Outcome c7_free_rotor() {
  const ModelSpec spec = build_rotor_model(8, 1e-10);
  IntegratorConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_max = 10.0;
  cfg.record_stride = 100;
  const auto traj = evolve(spec, rotor_initial_state(8), cfg);
  const double err = std::abs(traj.mu.back()[0] - 6.0 / 11.0 * std::cos(0.5 * traj.times.back()));
  return {std::abs(traj.times.back() - 10.0) < 1e-9 && err < kFreeTol, "|mu(10) - (6/11)cos(5)|=" + fmt(err)};
}

Outcome c8_mean_field_limit() {
  const ModelSpec spec = build_w_model(1, 0, 1.0, 2.0);
  const CVector local = gaussian_w_amplitudes(1);
  std::vector<double> dev;
  std::vector<double> scaled;
  std::ostringstream d;
  for (int n : {2, 4, 6}) {
    const auto cmp = compare_with_meanfield(spec, local, n, 0.01, 5.0);
    dev.push_back(cmp.max_deviation(5.0));
    scaled.push_back(n * cmp.corr_norm_at(2.0));
    d << "[N=" << n << " dev=" << fmt(dev.back()) << " N*corr(2)=" << fmt(scaled.back()) << "] ";
  }
  const bool decreasing = dev[0] > dev[1] && dev[1] > dev[2];
  const auto [lo, hi] = std::minmax_element(scaled.begin(), scaled.end());
  const bool scaling = *lo > 0.0 && *hi / *lo <= kCorrSpread;
  return {decreasing && scaling, d.str()};
}

double window_mean(const ClassicalTrajectory& t, double a, double b) {
  double sum = 0.0;
  int n = 0;
  for (std::size_t k = 0; k < t.times.size(); ++k) {
    if (t.times[k] >= a && t.times[k] <= b) {
      sum += t.mu1[k];
      ++n;
    }
  }
  return sum / n;
}

double window_variance(const ClassicalTrajectory& t, double a, double b) {
  const double m = window_mean(t, a, b);
  double sum = 0.0;
  int n = 0;
  for (std::size_t k = 0; k < t.times.size(); ++k) {
    if (t.times[k] >= a && t.times[k] <= b) {
      sum += (t.mu1[k] - m) * (t.mu1[k] - m);
      ++n;
    }
  }
  return sum / n;
}

// direct quadrature of the libration period; theta = 2 asin(k sin phi) removes the turning-point singularity
double omega_quadrature(double energy, double lam_mu) {
  const double k = std::sqrt((energy + lam_mu) / (2.0 * lam_mu));
  const int n = 200000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double phi = (i + 0.5) * (0.5 * std::numbers::pi) / n;
    const double s = k * std::sin(phi);
    sum += 1.0 / std::sqrt(1.0 - s * s);
  }
  const double quarter = sum * (0.5 * std::numbers::pi) / n / std::sqrt(lam_mu);
  return 2.0 * std::numbers::pi / (4.0 * quarter);
}

Outcome c9_classical() {
  const long n = 100000;
  ClassicalConfig cfg;
  cfg.lambda = 1.0;
  cfg.dt = 0.01;
  cfg.t_max = 200.0;
  cfg.record_stride = 10;
  cfg.energy_tol = 1.0;  // measured below rather than enforced
  const auto base = evolve_classical(sample_ensemble(n, 0.5, 0.3, 1), cfg);
  const double plateau = window_mean(base, 60.0, 80.0);
  const double var_late = window_variance(base, 60.0, 80.0);
  const double var_early = window_variance(base, 0.0, 20.0);
  const double drift = base.max_relative_energy_drift();

  ClassicalConfig fine = cfg;
  fine.dt = 0.005;
  fine.t_max = 80.0;
  fine.record_stride = 20;
  const auto refined = evolve_classical(sample_ensemble(2 * n, 0.5, 0.3, 2), fine);
  const double plateau2 = window_mean(refined, 60.0, 80.0);
  const double stab_tol = 2.0 / std::sqrt(static_cast<double>(n));

  bool monotone = true;
  double prev = INFINITY;
  for (int i = 0; i < 200; ++i) {
    const double e = -1.0 + 2.0 * (i + 0.5) / 200.0;
    const double w = pendulum_frequency(e, 1.0);
    monotone = monotone && w < prev;
    prev = w;
  }
  const double w0 = pendulum_frequency(0.0, 1.0);
  const double w0_quad = omega_quadrature(0.0, 1.0);

  const bool ok = var_late < kPlateauVarFrac * var_early && std::abs(plateau - plateau2) <= stab_tol &&
                  drift < kClassicalDrift && monotone && std::abs(w0 - kOmegaRef) <= kOmegaTol &&
                  std::abs(w0_quad - kOmegaRef) <= kOmegaTol;
  return {ok, "plateau=" + fmt(plateau) + " var ratio=" + fmt(var_late / var_early) + " refined plateau=" +
                  fmt(plateau2) + " (tol " + fmt(stab_tol) + ") drift=" + fmt(drift) + " omega(0)=" + fmt(w0) +
                  " quadrature=" + fmt(w0_quad) + " monotone=" + (monotone ? "yes" : "no")};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vrlab acceptance suite"};
  int only = 0;
  app.add_option("--criterion", only, "run a single criterion (1-9)")->check(CLI::Range(1, 9));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::function<Outcome()>> criteria = {
      c1_critical_points, c2_asymptotic_energies, c3_w0_transition, c4_w1_oscillations, c5_rotor,
      c6_conservation,    c7_free_rotor,          c8_mean_field_limit, c9_classical};

  bool all = true;
  for (int i = 1; i <= 9; ++i) {
    if (only != 0 && i != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i - 1]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("C%d %s  %s  (%.1f s)\n", i, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
