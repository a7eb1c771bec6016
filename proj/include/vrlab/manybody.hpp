// manybody.hpp - exact N-site evolution for checking the mean-field reduction
//
//   H = sum_j H0(j) - (lambda / 2N) sum_a sum_{j,j'} H1^a(j) H1^a(j')
//
// Site 0 is the most significant tensor factor of the amplitude index.

#pragma once

#include <iosfwd>
#include <vector>

#include "vrlab/operators.hpp"

namespace vrlab {

inline constexpr Index kStateBudget = 200000;
inline constexpr Index kDenseBudget = 4096;

struct ManyBodyState {
  int n_sites = 0;
  Index local_dim = 0;
  CVector amplitudes;

  /// Throws InvalidArgument / BudgetExceeded / NumericalIntegrity.
  void validate() const;
};

/// |psi> (x) ... (x) |psi>, normalized.
ManyBodyState product_state(const CVector& local, int n_sites);

/// Dense H for n_sites copies of the single-site model; dim must stay <= kDenseBudget.
HermitianOperator build_full_hamiltonian(const ModelSpec& spec, int n_sites);

/// Single-site operator acting on `site` of an n_sites chain.
CMatrix lift_operator(const CMatrix& op, int site, int n_sites);

struct ExactTrajectory {
  std::vector<double> times;
  std::vector<std::vector<double>> site_mu;  // <H1^0(j)> per site
  std::vector<double> mu;                    // site average
  std::vector<double> corr_norm;             // ||rho_01 - rho_0 (x) rho_1||_F
  std::vector<double> norm_err;
  std::vector<double> energy;                // <H> / N
};

/// Reduced density matrix of one site.
CMatrix reduced_site(const ManyBodyState& state, int site);
/// Connected two-site correlator of sites 0 and 1 (Frobenius norm).
double connected_correlator_norm(const ManyBodyState& state);

/// Eigen-decomposition propagation for dim <= kDenseBudget, RK4 with step dt otherwise.
/// Samples every `stride` steps of size dt. force_rk4 skips the eigen path.
ExactTrajectory exact_evolve(const ManyBodyState& state0, const HermitianOperator& h, const ModelSpec& spec,
                             double dt, double t_max, int stride = 1, bool force_rk4 = false);

struct OracleComparison {
  int n_sites = 0;
  std::vector<double> times;
  std::vector<double> mu_exact;
  std::vector<double> mu_mf;
  std::vector<double> corr_norm;

  double max_deviation(double t_limit) const;
  /// Linear interpolation of corr_norm at time t.
  double corr_norm_at(double t) const;
};

/// Exact N-site run next to the mean-field run from the same local state.
OracleComparison compare_with_meanfield(const ModelSpec& spec, const CVector& local, int n_sites, double dt,
                                        double t_max, int stride = 1);

/// "t,mu_exact,mu_mf,corr_norm"
void write_oracle_csv(std::ostream& out, const OracleComparison& cmp);

}  // namespace vrlab
