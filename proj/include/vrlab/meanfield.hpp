// meanfield.hpp - self-consistent single-site dynamics
//
//   i d(rho)/dt = [H(mu), rho],   H(mu) = H0 - lambda mu^a H1^a,   mu^a = tr(rho H1^a)
//
// integrated with classical RK4 where mu is recomputed from every stage state.

#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vrlab/operators.hpp"

namespace vrlab {

struct IntegratorConfig {
  double dt = 1e-3;
  double t_max = 100.0;
  int record_stride = 50;
  /// |eps(t) - eps(0)| <= energy_tol * max(1, |eps(0)|)
  double energy_tol = 1e-7;
  double trace_tol = 1e-8;
  double herm_tol = 1e-8;
  /// Rotor only: population of the outermost 10% of levels.
  double edge_population_tol = 1e-6;

  void validate() const;
  bool operator==(const IntegratorConfig&) const = default;
};

struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<std::vector<double>> mu;  // mu[k][a]
  std::vector<double> energy;
  std::vector<double> trace_err;
  std::vector<double> herm_err;
  std::vector<double> purity;
  std::vector<double> parity_odd;       // max-norm of the parity-odd block
  std::vector<double> edge_population;  // rotor truncation witness (0 for the w-model)
  std::optional<DensityMatrix> final_state;

  std::size_t size() const { return times.size(); }
  /// mu^a(t) for one component as a flat series.
  std::vector<double> mu_component(std::size_t a = 0) const;
  double max_energy_drift() const;
};

struct AmplitudeReport {
  double mu_infinity = 0.0;
  std::vector<double> times;  // samples inside [t1, t_max]
  std::vector<double> a_of_t;
  double mean_a = 0.0;        // time average of A over the window
  double t1 = 0.0;
  double t_max = 0.0;
};

HermitianOperator effective_hamiltonian(const ModelSpec& spec, const std::vector<double>& mu);
std::vector<double> order_parameter(const DensityMatrix& rho, const ModelSpec& spec);
std::vector<double> order_parameter(const CMatrix& rho, const ModelSpec& spec);

/// tr(rho H0) - (lambda/2) sum_a (mu^a)^2 with mu recomputed from rho.
double energy_density(const DensityMatrix& rho, const ModelSpec& spec);
double energy_density(const CMatrix& rho, const ModelSpec& spec);

/// Called at every recorded sample with the (corrected) state and the stored mu.
using TrajectoryObserver =
    std::function<void(double t, const CMatrix& rho, const std::vector<double>& mu)>;

TrajectoryRecord evolve(const ModelSpec& spec, const DensityMatrix& rho0, const IntegratorConfig& cfg,
                        const TrajectoryObserver& observer = {});

/// Advance rho by one RK4 step without corrections or checks (used by
/// convergence tests that need the raw propagator).
CMatrix rk4_step(const ModelSpec& spec, const CMatrix& rho, double dt);

AmplitudeReport amplitude_diagnostic(const TrajectoryRecord& traj, double t1, double t_max,
                                     std::size_t component = 0);

/// Frequency (rad per unit time) maximizing |int (f - <f>) e^{-i w t} dt| over
/// the recorded samples in [t1, t2], searched on [omega_min, omega_max].
double dominant_frequency(const std::vector<double>& times, const std::vector<double>& values, double t1,
                          double t2, double omega_min, double omega_max);

/// Header "t,mu_1[,mu_2...],energy,trace_err,herm_err,purity"; 17 significant digits.
void write_trajectory_csv(std::ostream& out, const TrajectoryRecord& traj);
void write_trajectory_csv(const std::string& path, const TrajectoryRecord& traj);

}  // namespace vrlab
