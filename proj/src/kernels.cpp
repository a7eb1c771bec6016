#include "vrlab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <omp.h>

#include "vrlab/errors.hpp"

namespace vrlab::kernels {

namespace {

constexpr std::size_t kReduceBlock = 4096;

// Entry range [first, last) of rows i for which (i, i + offset) is inside an n x n matrix.
inline void band_rows(Index n, Index offset, Index& first, Index& last) {
  first = std::max<Index>(0, -offset);
  last = std::min<Index>(n, n - offset);
}

}  // namespace

std::vector<Index> band_layout(std::span<const CMatrix* const> mats) {
  std::set<Index> offsets;
  for (const CMatrix* m : mats) {
    const Index n = m->rows();
    for (Index j = 0; j < n; ++j) {
      for (Index i = 0; i < n; ++i) {
        if ((*m)(i, j) != Complex{}) offsets.insert(j - i);
      }
    }
  }
  if (offsets.empty()) offsets.insert(0);
  return {offsets.begin(), offsets.end()};
}

BandedOperator BandedOperator::on_layout(const CMatrix& a, const std::vector<Index>& layout) {
  BandedOperator out;
  out.dim = a.rows();
  out.offsets = layout;
  out.bands.assign(layout.size(), CVector::Zero(out.dim));
  for (std::size_t k = 0; k < layout.size(); ++k) {
    Index first = 0, last = 0;
    band_rows(out.dim, layout[k], first, last);
    for (Index i = first; i < last; ++i) out.bands[k](i) = a(i, i + layout[k]);
  }
  // anything the layout missed would be silently dropped
  if ((out.to_dense() - a).cwiseAbs().maxCoeff() != 0.0) {
    throw DimensionMismatch("matrix does not fit the requested band layout");
  }
  return out;
}

BandedOperator BandedOperator::from_dense(const CMatrix& a) {
  const CMatrix* ptr[] = {&a};
  return on_layout(a, band_layout(ptr));
}

CMatrix BandedOperator::to_dense() const {
  CMatrix a = CMatrix::Zero(dim, dim);
  for (std::size_t k = 0; k < offsets.size(); ++k) {
    Index first = 0, last = 0;
    band_rows(dim, offsets[k], first, last);
    for (Index i = first; i < last; ++i) a(i, i + offsets[k]) = bands[k](i);
  }
  return a;
}

void combine_bands(const BandedOperator& base, std::span<const BandedOperator> terms,
                   std::span<const double> coeffs, BandedOperator& out) {
  if (terms.size() != coeffs.size()) throw DimensionMismatch("combine_bands: coefficient count");
  out.dim = base.dim;
  out.offsets = base.offsets;
  out.bands.resize(base.bands.size());
  for (std::size_t k = 0; k < base.bands.size(); ++k) {
    out.bands[k] = base.bands[k];
    for (std::size_t a = 0; a < terms.size(); ++a) {
      out.bands[k] += coeffs[a] * terms[a].bands[k];
    }
  }
}

void von_neumann_rhs(const BandedOperator& h, const CMatrix& rho, CMatrix& out) {
  const Index n = h.dim;
  out.resize(n, n);
  const std::size_t nb = h.offsets.size();
  const Complex minus_i{0.0, -1.0};

#pragma omp parallel
  {
    CVector acc(n);
#pragma omp for schedule(static)
    for (Index j = 0; j < n; ++j) {
      acc.setZero();
      for (std::size_t k = 0; k < nb; ++k) {
        const Index o = h.offsets[k];
        Index first = 0, last = 0;
        band_rows(n, o, first, last);
        const Index len = last - first;
        // (H rho)(i, j) = sum_o H(i, i+o) rho(i+o, j)
        acc.segment(first, len).array() +=
            h.bands[k].segment(first, len).array() * rho.col(j).segment(first + o, len).array();
        // (rho H)(i, j) = sum_o rho(i, j-o) H(j-o, j)
        const Index src = j - o;
        if (src >= 0 && src < n) acc -= h.bands[k](src) * rho.col(src);
      }
      out.col(j) = minus_i * acc;
    }
  }
}

Complex banded_trace_product(const CMatrix& rho, const BandedOperator& a) {
  // tr(rho A) = sum_i sum_o A(i, i+o) rho(i+o, i)
  Complex sum{};
  const Index n = a.dim;
  for (std::size_t k = 0; k < a.offsets.size(); ++k) {
    const Index o = a.offsets[k];
    Index first = 0, last = 0;
    band_rows(n, o, first, last);
    for (Index i = first; i < last; ++i) sum += a.bands[k](i) * rho(i + o, i);
  }
  return sum;
}

AngleSums angle_sums(std::span<const double> theta) {
  const std::size_t n = theta.size();
  const std::size_t nblocks = (n + kReduceBlock - 1) / kReduceBlock;
  std::vector<double> cs(nblocks), sn(nblocks);
#pragma omp parallel for schedule(static)
  for (std::size_t b = 0; b < nblocks; ++b) {
    const std::size_t lo = b * kReduceBlock;
    const std::size_t hi = std::min(n, lo + kReduceBlock);
    double c = 0.0, s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      c += std::cos(theta[i]);
      s += std::sin(theta[i]);
    }
    cs[b] = c;
    sn[b] = s;
  }
  AngleSums out;
  for (std::size_t b = 0; b < nblocks; ++b) {
    out.cos_sum += cs[b];
    out.sin_sum += sn[b];
  }
  return out;
}

void kick(std::span<const double> theta, std::span<double> p, double lambda, double mu1, double mu2,
          double half_dt) {
  const std::size_t n = theta.size();
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < n; ++i) {
    p[i] -= half_dt * lambda * (mu1 * std::sin(theta[i]) - mu2 * std::cos(theta[i]));
  }
}

void drift(std::span<double> theta, std::span<const double> p, double dt) {
  const std::size_t n = theta.size();
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < n; ++i) theta[i] += dt * p[i];
}

namespace {

template <bool Drift>
AngleSums sample_impl(std::span<double> theta, std::span<const double> p, double dt, std::span<double> cos_out,
                      std::span<double> sin_out) {
  const std::size_t n = theta.size();
  if (cos_out.size() != n || sin_out.size() != n) throw DimensionMismatch("angle caches have the wrong size");
  const std::size_t nblocks = (n + kReduceBlock - 1) / kReduceBlock;
  std::vector<double> cs(nblocks), sn(nblocks);
  double* th = theta.data();
  double* co = cos_out.data();
  double* si = sin_out.data();
  const double* pp = p.data();
#pragma omp parallel for schedule(static)
  for (std::size_t b = 0; b < nblocks; ++b) {
    const std::size_t lo = b * kReduceBlock;
    const std::size_t hi = std::min(n, lo + kReduceBlock);
    double c = 0.0, s = 0.0;
#pragma omp simd reduction(+ : c, s)
    for (std::size_t i = lo; i < hi; ++i) {
      if constexpr (Drift) th[i] += dt * pp[i];
      co[i] = std::cos(th[i]);
      si[i] = std::sin(th[i]);
      c += co[i];
      s += si[i];
    }
    cs[b] = c;
    sn[b] = s;
  }
  AngleSums out;
  for (std::size_t b = 0; b < nblocks; ++b) {
    out.cos_sum += cs[b];
    out.sin_sum += sn[b];
  }
  return out;
}

}  // namespace

AngleSums sample_angles(std::span<const double> theta, std::span<double> cos_out, std::span<double> sin_out) {
  // theta is only read when Drift is false
  std::span<double> mutable_theta(const_cast<double*>(theta.data()), theta.size());
  return sample_impl<false>(mutable_theta, {}, 0.0, cos_out, sin_out);
}

AngleSums drift_and_sample(std::span<double> theta, std::span<const double> p, double dt, std::span<double> cos_out,
                           std::span<double> sin_out) {
  if (p.size() != theta.size()) throw DimensionMismatch("drift_and_sample: size mismatch");
  return sample_impl<true>(theta, p, dt, cos_out, sin_out);
}

void kick_cached(std::span<const double> cos_t, std::span<const double> sin_t, std::span<double> p, double lambda,
                 double mu1, double mu2, double half_dt) {
  const std::size_t n = p.size();
  const double a = half_dt * lambda * mu1;
  const double b = half_dt * lambda * mu2;
  const double* co = cos_t.data();
  const double* si = sin_t.data();
  double* pp = p.data();
#pragma omp parallel for simd schedule(static)
  for (std::size_t i = 0; i < n; ++i) pp[i] -= a * si[i] - b * co[i];
}

double kinetic_sum(std::span<const double> p) {
  const std::size_t n = p.size();
  const std::size_t nblocks = (n + kReduceBlock - 1) / kReduceBlock;
  std::vector<double> part(nblocks);
#pragma omp parallel for schedule(static)
  for (std::size_t b = 0; b < nblocks; ++b) {
    const std::size_t lo = b * kReduceBlock;
    const std::size_t hi = std::min(n, lo + kReduceBlock);
    double k = 0.0;
    for (std::size_t i = lo; i < hi; ++i) k += 0.5 * p[i] * p[i];
    part[b] = k;
  }
  double total = 0.0;
  for (double v : part) total += v;
  return total;
}

namespace serial {

void von_neumann_rhs(const CMatrix& h, const CMatrix& rho, CMatrix& out) {
  const Index n = h.rows();
  out = CMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      Complex c{};
      for (Index k = 0; k < n; ++k) c += h(i, k) * rho(k, j) - rho(i, k) * h(k, j);
      out(i, j) = Complex{0.0, -1.0} * c;
    }
  }
}

AngleSums angle_sums(std::span<const double> theta) {
  AngleSums out;
  for (double t : theta) {
    out.cos_sum += std::cos(t);
    out.sin_sum += std::sin(t);
  }
  return out;
}

double kinetic_sum(std::span<const double> p) {
  double total = 0.0;
  for (double v : p) total += 0.5 * v * v;
  return total;
}

}  // namespace serial

}  // namespace vrlab::kernels
