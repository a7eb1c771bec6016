// operators.hpp - single-site operator algebra and model builders
//
// Conventions: hbar = 1, dimensionless energies. Basis vectors are ordered by
// their label (magnetic number m = -s..s for the w-model, angular momentum
// L = -l_max..l_max for the rotor), so the parity map m -> -m is the index
// reversal i -> dim - 1 - i for both models.

#pragma once

#include <complex>
#include <cstddef>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace vrlab {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Index = Eigen::Index;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPositivityTol = 1e-10;

/// Dense hermitian matrix (dim >= 2). Immutable after construction.
class HermitianOperator {
 public:
  explicit HermitianOperator(CMatrix entries, double tol = kHermitianTol);
  static HermitianOperator from_real(const Eigen::MatrixXd& entries);
  static HermitianOperator identity(Index dim);

  Index dim() const { return entries_.rows(); }
  const CMatrix& matrix() const { return entries_; }
  Complex operator()(Index i, Index j) const { return entries_(i, j); }

  /// True when every imaginary part is exactly zero.
  bool is_real() const { return real_; }
  Eigen::MatrixXd real_matrix() const { return entries_.real(); }

  /// Largest |i - j| over nonzero entries.
  Index bandwidth() const { return bandwidth_; }

  HermitianOperator operator+(const HermitianOperator& other) const;
  HermitianOperator operator-(const HermitianOperator& other) const;
  HermitianOperator scaled(double factor) const;

 private:
  CMatrix entries_;
  bool real_ = true;
  Index bandwidth_ = 0;
};

/// Single-site state: hermitian, unit trace, positive semidefinite.
class DensityMatrix {
 public:
  explicit DensityMatrix(CMatrix entries, double positivity_tol = kPositivityTol);
  static DensityMatrix pure(const CVector& psi);
  static DensityMatrix maximally_mixed(Index dim);

  Index dim() const { return entries_.rows(); }
  const CMatrix& matrix() const { return entries_; }
  double purity() const;
  Complex trace() const { return entries_.trace(); }

 private:
  CMatrix entries_;
};

struct WModelParams {
  int s = 150;
  int w = 0;
  double h = 1.0;
};

struct RotorParams {
  int l_max = 16;
};

using ModelTag = std::variant<WModelParams, RotorParams>;

/// H0, the coupling operators H1^a, lambda and the basis bookkeeping that
/// together define the single-site mean-field problem.
struct ModelSpec {
  HermitianOperator h0;
  std::vector<HermitianOperator> h1;
  double lambda = 1.0;
  std::vector<int> basis_labels;
  std::vector<Index> parity_map;
  ModelTag tag;

  Index dim() const { return h0.dim(); }
  bool is_rotor() const { return std::holds_alternative<RotorParams>(tag); }

  /// Throws InvalidModel when any invariant is broken.
  void validate() const;

  ModelSpec with_lambda(double lambda) const;
};

ModelSpec build_w_model(int s, int w, double h, double lambda = 1.0);
ModelSpec build_rotor_model(int l_max, double lambda = 1.0);

/// Pure state with |<m|psi>|^2 proportional to exp(-m^2 / (2 width^2)).
/// width = 1 is the amplitude profile exp(-m^2/4).
DensityMatrix gaussian_w_state(int s, double width = 1.0);
/// Normalized amplitudes of the same state.
CVector gaussian_w_amplitudes(int s, double width = 1.0);

/// (3|0> + |-1> + |1>)/sqrt(11) in the angular-momentum basis.
DensityMatrix rotor_initial_state(int l_max);

/// tr(rho A); throws NumericalIntegrity if the imaginary residue exceeds 1e-8.
double expectation(const DensityMatrix& rho, const HermitianOperator& a);
double expectation(const CMatrix& rho, const HermitianOperator& a);

/// Permutation matrix of the parity map.
Eigen::MatrixXd parity_matrix(const ModelSpec& spec);

/// Max-norm of the parity-odd part (rho - P rho P)/2.
double parity_odd_norm(const CMatrix& rho, const std::vector<Index>& parity_map);

}  // namespace vrlab
