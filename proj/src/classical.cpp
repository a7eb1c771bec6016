#include "vrlab/classical.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "vrlab/errors.hpp"
#include "vrlab/kernels.hpp"

namespace vrlab {

double ClassicalTrajectory::max_relative_energy_drift() const {
  if (energy.empty()) return 0.0;
  const double scale = std::max(std::abs(energy.front()), 1e-12);
  double worst = 0.0;
  for (double e : energy) worst = std::max(worst, std::abs(e - energy.front()));
  return worst / scale;
}

double wrap_angle(double theta) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double w = std::fmod(theta + std::numbers::pi, two_pi);
  if (w < 0.0) w += two_pi;
  w -= std::numbers::pi;
  // fmod rounding can land exactly on +pi
  if (w >= std::numbers::pi) w -= two_pi;
  return w;
}

ParticleEnsemble sample_ensemble(std::size_t n, double theta_width, double p_width, std::uint64_t seed) {
  if (n == 0) throw InvalidArgument("ensemble needs at least one particle");
  if (!(theta_width > 0.0) || !(p_width > 0.0)) throw InvalidArgument("ensemble widths must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> th(0.0, theta_width);
  std::normal_distribution<double> mom(0.0, p_width);
  ParticleEnsemble ens;
  ens.theta.resize(n);
  ens.p.resize(n);
  for (std::size_t i = 0; i < n; ++i) ens.theta[i] = wrap_angle(th(rng));
  for (std::size_t i = 0; i < n; ++i) ens.p[i] = mom(rng);
  return ens;
}

ClassicalTrajectory evolve_classical(const ParticleEnsemble& ens, const ClassicalConfig& cfg) {
  if (ens.size() == 0 || ens.theta.size() != ens.p.size()) throw InvalidArgument("malformed ensemble");
  if (!(cfg.dt > 0.0) || cfg.dt > 0.01) throw InvalidArgument("classical dt must lie in (0, 0.01]");
  if (!(cfg.t_max >= cfg.dt)) throw InvalidArgument("classical t_max must be >= dt");
  if (cfg.record_stride < 1) throw InvalidArgument("record_stride must be >= 1");

  std::vector<double> theta = ens.theta;
  std::vector<double> p = ens.p;
  const double inv_n = 1.0 / static_cast<double>(theta.size());
  const long n_steps = std::max<long>(1, std::lround(cfg.t_max / cfg.dt));

  std::vector<double> cos_t(theta.size()), sin_t(theta.size());
  auto sums = kernels::sample_angles(theta, cos_t, sin_t);
  double mu1 = sums.cos_sum * inv_n;
  double mu2 = sums.sin_sum * inv_n;

  ClassicalTrajectory traj;
  auto record = [&](long k) {
    const double e = kernels::kinetic_sum(p) * inv_n - 0.5 * cfg.lambda * (mu1 * mu1 + mu2 * mu2);
    traj.times.push_back(static_cast<double>(k) * cfg.dt);
    traj.mu1.push_back(mu1);
    traj.mu2.push_back(mu2);
    traj.energy.push_back(e);
    const double scale = std::max(std::abs(traj.energy.front()), 1e-12);
    if (std::abs(e - traj.energy.front()) > cfg.energy_tol * scale) {
      std::ostringstream msg;
      msg << "classical energy drift " << std::abs(e - traj.energy.front()) / scale << " (relative) at t="
          << traj.times.back() << "; reduce dt (now " << cfg.dt << ")";
      throw IntegrationFailure(msg.str());
    }
  };

  record(0);
  const double half = 0.5 * cfg.dt;
  for (long k = 1; k <= n_steps; ++k) {
    kernels::kick_cached(cos_t, sin_t, p, cfg.lambda, mu1, mu2, half);
    sums = kernels::drift_and_sample(theta, p, cfg.dt, cos_t, sin_t);
    mu1 = sums.cos_sum * inv_n;
    mu2 = sums.sin_sum * inv_n;
    kernels::kick_cached(cos_t, sin_t, p, cfg.lambda, mu1, mu2, half);
    if (k % cfg.record_stride == 0 || k == n_steps) record(k);
  }
  for (double& t : theta) t = wrap_angle(t);
  traj.final_state = ParticleEnsemble{std::move(theta), std::move(p)};
  return traj;
}

ClassicalTrajectory evolve_classical(const ParticleEnsemble& ens, double lambda, double dt, double t_max) {
  ClassicalConfig cfg;
  cfg.lambda = lambda;
  cfg.dt = dt;
  cfg.t_max = t_max;
  return evolve_classical(ens, cfg);
}

double elliptic_k(double k) {
  if (!(std::abs(k) < 1.0)) throw DivergentPeriod("K(k) diverges for |k| >= 1");
  double a = 1.0;
  double b = std::sqrt(1.0 - k * k);
  for (int it = 0; it < 64 && std::abs(a - b) > 1e-15 * a; ++it) {
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return std::numbers::pi / (2.0 * a);
}

double pendulum_frequency(double energy, double lam_mu) {
  if (!(lam_mu > 0.0)) throw InvalidArgument("pendulum_frequency needs lam_mu > 0");
  if (!(energy > -lam_mu)) throw InvalidArgument("energy lies below the bottom of the well");
  if (std::abs(energy - lam_mu) <= 1e-14 * lam_mu) throw DivergentPeriod("separatrix energy has an infinite period");
  if (energy < lam_mu) {
    // libration: k^2 = (E + a) / 2a
    const double k = std::sqrt((energy + lam_mu) / (2.0 * lam_mu));
    return 0.5 * std::numbers::pi * std::sqrt(lam_mu) / elliptic_k(k);
  }
  // rotation: one revolution, modulus k^2 = 2a / (E + a)
  const double k = std::sqrt(2.0 * lam_mu / (energy + lam_mu));
  return std::numbers::pi * std::sqrt(2.0 * (energy + lam_mu)) / (2.0 * elliptic_k(k));
}

std::vector<BandInterval> band_spectrum(double lam_mu, const std::vector<double>& e_grid, int n_max) {
  if (e_grid.empty()) throw InvalidArgument("band_spectrum needs a non-empty energy grid");
  if (n_max < 0) throw InvalidArgument("n_max must be >= 0");
  double w_lo = std::numeric_limits<double>::infinity();
  double w_hi = 0.0;
  for (double e : e_grid) {
    if (!(e > -lam_mu && e < lam_mu)) throw InvalidArgument("band_spectrum energies must lie on the libration branch");
    const double w = pendulum_frequency(e, lam_mu);
    w_lo = std::min(w_lo, w);
    w_hi = std::max(w_hi, w);
  }
  std::vector<BandInterval> out;
  for (int n = -n_max; n <= n_max; ++n) {
    BandInterval b;
    b.n = n;
    if (n > 0) {
      b.omega_min = n * w_lo;
      b.omega_max = n * w_hi;
    } else if (n < 0) {
      b.omega_min = n * w_hi;
      b.omega_max = n * w_lo;
    }
    out.push_back(b);
  }
  return out;
}

void write_classical_csv(std::ostream& out, const ClassicalTrajectory& traj) {
  out << "t,mu1,mu2,energy\n" << std::setprecision(17);
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    out << traj.times[k] << ',' << traj.mu1[k] << ',' << traj.mu2[k] << ',' << traj.energy[k] << '\n';
  }
}

void write_band_csv(std::ostream& out, const std::vector<BandInterval>& bands) {
  out << "n,omega_min,omega_max\n" << std::setprecision(17);
  for (const auto& b : bands) out << b.n << ',' << b.omega_min << ',' << b.omega_max << '\n';
}

}  // namespace vrlab
