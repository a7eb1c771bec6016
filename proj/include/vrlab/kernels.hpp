// kernels.hpp - hot loops shared by the integrators.
//
// Every kernel here has an OpenMP implementation used by the library and a
// plain serial reference in kernels::serial, kept for tests and for the
// benchmark target. Parallel kernels never reduce across threads in a
// thread-count dependent order, so their results are bit-identical for any
// OMP_NUM_THREADS.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "vrlab/operators.hpp"

namespace vrlab::kernels {

/// Square matrix stored by diagonals: band k holds A(i, i + offsets[k]),
/// indexed by the row i (entries outside the matrix are zero).
struct BandedOperator {
  Index dim = 0;
  std::vector<Index> offsets;
  std::vector<CVector> bands;

  static BandedOperator from_dense(const CMatrix& a);
  /// Same layout as `layout`, values taken from `a` (which must fit in it).
  static BandedOperator on_layout(const CMatrix& a, const std::vector<Index>& layout);
  CMatrix to_dense() const;
};

/// Offsets of every nonzero diagonal of any of the given matrices.
std::vector<Index> band_layout(std::span<const CMatrix* const> mats);

/// out = base + sum_a coeffs[a] * terms[a]; all operands share one layout.
void combine_bands(const BandedOperator& base, std::span<const BandedOperator> terms,
                   std::span<const double> coeffs, BandedOperator& out);

/// out = -i (H rho - rho H), the right-hand side of the von Neumann equation.
void von_neumann_rhs(const BandedOperator& h, const CMatrix& rho, CMatrix& out);

/// tr(rho A) for a banded A (complex; caller checks the imaginary part).
Complex banded_trace_product(const CMatrix& rho, const BandedOperator& a);

struct AngleSums {
  double cos_sum = 0.0;
  double sin_sum = 0.0;
};

/// Sums of cos(theta_i) and sin(theta_i), reduced in fixed-size blocks.
AngleSums angle_sums(std::span<const double> theta);

/// Velocity-Verlet half kick: p_i += half_dt * (-lambda)(mu1 sin - mu2 cos).
void kick(std::span<const double> theta, std::span<double> p, double lambda, double mu1, double mu2,
          double half_dt);
void drift(std::span<double> theta, std::span<const double> p, double dt);

/// cos/sin of every angle into the caches, returning their blocked sums.
AngleSums sample_angles(std::span<const double> theta, std::span<double> cos_out, std::span<double> sin_out);
/// drift followed by sample_angles in one pass.
AngleSums drift_and_sample(std::span<double> theta, std::span<const double> p, double dt, std::span<double> cos_out,
                           std::span<double> sin_out);
/// kick using cached cos/sin of the current angles.
void kick_cached(std::span<const double> cos_t, std::span<const double> sin_t, std::span<double> p, double lambda,
                 double mu1, double mu2, double half_dt);
double kinetic_sum(std::span<const double> p);

namespace serial {

void von_neumann_rhs(const CMatrix& h, const CMatrix& rho, CMatrix& out);
AngleSums angle_sums(std::span<const double> theta);
double kinetic_sum(std::span<const double> p);

}  // namespace serial

}  // namespace vrlab::kernels
