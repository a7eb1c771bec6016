// classical.hpp - Vlasov limit of the rotor model as N-particle mean-field dynamics
//
// Each particle follows the pendulum Hamiltonian p^2/2 - lambda (mu1 cos th + mu2 sin th)
// with mu1 = <cos th>, mu2 = <sin th> over the ensemble.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace vrlab {

struct ParticleEnsemble {
  std::vector<double> theta;  // wrapped to [-pi, pi)
  std::vector<double> p;

  std::size_t size() const { return theta.size(); }
};

struct ClassicalTrajectory {
  std::vector<double> times;
  std::vector<double> mu1;
  std::vector<double> mu2;
  std::vector<double> energy;  // per particle: <p^2/2> - (lambda/2)(mu1^2 + mu2^2)
  ParticleEnsemble final_state;

  double max_relative_energy_drift() const;
};

struct ClassicalConfig {
  double lambda = 1.0;
  double dt = 0.01;
  double t_max = 100.0;
  int record_stride = 10;
  double energy_tol = 1e-4;  // relative to max(|eps(0)|, 1e-12)
};

double wrap_angle(double theta);

/// Independent Gaussians in theta (then wrapped) and p; deterministic per seed.
ParticleEnsemble sample_ensemble(std::size_t n, double theta_width, double p_width, std::uint64_t seed);

/// Velocity-Verlet (kick-drift-kick) integration of the mean-field flow.
ClassicalTrajectory evolve_classical(const ParticleEnsemble& ens, const ClassicalConfig& cfg);
ClassicalTrajectory evolve_classical(const ParticleEnsemble& ens, double lambda, double dt, double t_max);

/// Angular frequency of the pendulum H = p^2/2 - lam_mu cos(theta) at energy E.
double pendulum_frequency(double energy, double lam_mu);

/// Complete elliptic integral of the first kind K(k), via the AGM.
double elliptic_k(double k);

struct BandInterval {
  int n = 0;
  double omega_min = 0.0;
  double omega_max = 0.0;
};

/// Range of n * omega(E) over the energy grid, for |n| <= n_max.
std::vector<BandInterval> band_spectrum(double lam_mu, const std::vector<double>& e_grid, int n_max);

/// "t,mu1,mu2,energy"
void write_classical_csv(std::ostream& out, const ClassicalTrajectory& traj);
/// "n,omega_min,omega_max"
void write_band_csv(std::ostream& out, const std::vector<BandInterval>& bands);

}  // namespace vrlab
