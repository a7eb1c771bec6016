#include "vrlab/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <json.hpp>
#include <lapacke.h>

#include "vrlab/errors.hpp"

namespace vrlab {

std::string to_string(Regime r) {
  switch (r) {
    case Regime::Thermal:
      return "Thermal";
    case Regime::ViolentRelaxationCandidate:
      return "ViolentRelaxationCandidate";
    case Regime::PersistentOscillations:
      return "PersistentOscillations";
  }
  return "Unknown";
}

std::vector<double> SpectrumReport::even_energies() const {
  std::vector<double> out;
  for (const auto& b : bound_states) {
    if (b.parity > 0) out.push_back(b.energy);
  }
  return out;
}

namespace {

struct EigenPairs {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns (real case)
  CMatrix cvectors;         // columns (complex case)
  bool complex = false;
};

bool is_tridiagonal(const Eigen::MatrixXd& m) {
  const Index n = m.rows();
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      if (std::abs(i - j) > 1 && m(i, j) != 0.0) return false;
    }
  }
  return true;
}

// Eigenpairs of a real symmetric matrix. upper = +inf requests all of them,
// otherwise only the ones strictly below `upper`.
EigenPairs real_symmetric_eigen(const Eigen::MatrixXd& m, double upper) {
  const lapack_int n = static_cast<lapack_int>(m.rows());
  const bool all = !std::isfinite(upper);
  const char range = all ? 'A' : 'V';
  // Gershgorin lower bound keeps the value window well defined
  double lower = 0.0;
  for (Index i = 0; i < m.rows(); ++i) lower = std::min(lower, m(i, i) - (m.row(i).cwiseAbs().sum() - std::abs(m(i, i))));
  lower -= 1.0;
  const double vl = all ? 0.0 : lower;
  const double vu = all ? 0.0 : upper;

  EigenPairs out;
  lapack_int found = 0;
  Eigen::VectorXd w(n);
  Eigen::MatrixXd z(n, n);
  std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(n));
  lapack_int info = 0;
  if (!all && !(upper > lower)) {
    out.values.resize(0);
    out.vectors.resize(n, 0);
    return out;
  }
  if (is_tridiagonal(m)) {
    Eigen::VectorXd d = m.diagonal();
    Eigen::VectorXd e(std::max<lapack_int>(n, 1));
    for (lapack_int i = 0; i + 1 < n; ++i) e(i) = m(i + 1, i);
    info = LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', range, n, d.data(), e.data(), vl, vu, 0, 0, 0.0, &found,
                          w.data(), z.data(), n, isuppz.data());
  } else {
    Eigen::MatrixXd a = m;
    info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', range, 'L', n, a.data(), n, vl, vu, 0, 0, 0.0, &found,
                          w.data(), z.data(), n, isuppz.data());
  }
  if (info != 0) {
    std::ostringstream msg;
    msg << "LAPACK symmetric eigensolver failed (info=" << info << ")";
    throw EigenSolverFailure(msg.str());
  }
  out.values = w.head(found);
  out.vectors = z.leftCols(found);
  return out;
}

EigenPairs hermitian_eigen(const CMatrix& m, double upper) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(m);
  if (solver.info() != Eigen::Success) throw EigenSolverFailure("hermitian eigensolver failed");
  EigenPairs out;
  out.complex = true;
  Index keep = m.rows();
  if (std::isfinite(upper)) {
    keep = 0;
    while (keep < m.rows() && solver.eigenvalues()(keep) < upper) ++keep;
  }
  out.values = solver.eigenvalues().head(keep);
  out.cvectors = solver.eigenvectors().leftCols(keep);
  return out;
}

CMatrix frozen_hamiltonian(const ModelSpec& spec, double x) {
  if (!(x >= 0.0)) throw DiagnosticsError("well depth x must be >= 0");
  return spec.h0.matrix() - x * spec.h1.front().matrix();
}

double continuum_edge(const ModelSpec& spec) {
  if (const auto* w = std::get_if<WModelParams>(&spec.tag)) return -w->h;
  return std::numeric_limits<double>::infinity();
}

bool real_matrix(const CMatrix& m) { return m.imag().cwiseAbs().maxCoeff() == 0.0; }

EigenPairs eigen_below(const CMatrix& m, double upper) {
  if (real_matrix(m)) return real_symmetric_eigen(m.real(), upper);
  return hermitian_eigen(m, upper);
}

double parity_of(const EigenPairs& ep, Index k, const std::vector<Index>& pmap) {
  const Index n = static_cast<Index>(pmap.size());
  double p = 0.0;
  if (ep.complex) {
    Complex c{};
    for (Index i = 0; i < n; ++i) c += std::conj(ep.cvectors(i, k)) * ep.cvectors(pmap[static_cast<std::size_t>(i)], k);
    p = c.real();
  } else {
    for (Index i = 0; i < n; ++i) p += ep.vectors(i, k) * ep.vectors(pmap[static_cast<std::size_t>(i)], k);
  }
  return p;
}

}  // namespace

SpectrumReport diagonalize(const ModelSpec& spec, double x, double guard_band) {
  spec.validate();
  const CMatrix m = frozen_hamiltonian(spec, x);
  const EigenPairs ep = eigen_below(m, std::numeric_limits<double>::infinity());

  SpectrumReport rep;
  rep.x = x;
  rep.continuum_edge = continuum_edge(spec);
  rep.eigenvalues.assign(ep.values.data(), ep.values.data() + ep.values.size());
  const double threshold = rep.continuum_edge - guard_band;
  for (Index k = 0; k < ep.values.size(); ++k) {
    if (!(ep.values(k) < threshold)) break;
    BoundState b;
    b.energy = ep.values(k);
    b.index = static_cast<int>(k);
    b.parity_expectation = parity_of(ep, k, spec.parity_map);
    b.parity = b.parity_expectation >= 0.0 ? 1 : -1;
    b.parity_ambiguous = std::abs(b.parity_expectation) < 0.99;
    rep.any_parity_ambiguous = rep.any_parity_ambiguous || b.parity_ambiguous;
    rep.bound_states.push_back(b);
  }
  rep.n_b_total = static_cast<int>(rep.bound_states.size());
  rep.n_b_even = static_cast<int>(std::count_if(rep.bound_states.begin(), rep.bound_states.end(),
                                                [](const BoundState& b) { return b.parity > 0; }));
  return rep;
}

BoundCounts count_bound_states(const ModelSpec& spec, double x, double guard_band) {
  const CMatrix m = frozen_hamiltonian(spec, x);
  const EigenPairs ep = eigen_below(m, continuum_edge(spec) - guard_band);
  BoundCounts c;
  for (Index k = 0; k < ep.values.size(); ++k) {
    if (parity_of(ep, k, spec.parity_map) >= 0.0) {
      ++c.even;
    } else {
      ++c.odd;
    }
  }
  return c;
}

std::vector<CriticalPoint> scan_critical_x(const ModelSpec& spec, const std::vector<double>& x_grid,
                                           double guard_band, double resolution) {
  spec.validate();
  if (x_grid.size() < 2) throw DiagnosticsError("critical-x scan needs at least two grid points");
  for (std::size_t i = 1; i < x_grid.size(); ++i) {
    const double step = x_grid[i] - x_grid[i - 1];
    if (!(step > 0.0)) throw DiagnosticsError("x grid must be strictly ascending");
    if (step > 0.01 + 1e-12) throw DiagnosticsError("x grid step exceeds 0.01");
  }
  if (x_grid.front() < 0.0) throw DiagnosticsError("x grid must be non-negative");

  const auto n = static_cast<long>(x_grid.size());
  std::vector<BoundCounts> counts(x_grid.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    counts[static_cast<std::size_t>(i)] = count_bound_states(spec, x_grid[static_cast<std::size_t>(i)], guard_band);
  }

  std::vector<CriticalPoint> out;
  for (int parity : {1, -1}) {
    auto pick = [parity](const BoundCounts& c) { return parity > 0 ? c.even : c.odd; };
    for (std::size_t i = 1; i < x_grid.size(); ++i) {
      const int c_lo = pick(counts[i - 1]);
      const int c_hi = pick(counts[i]);
      if (c_hi < c_lo) {
        std::ostringstream msg;
        msg << "bound-state count (parity " << parity << ") drops from " << c_lo << " to " << c_hi << " between x="
            << x_grid[i - 1] << " and x=" << x_grid[i] << "; check the guard band";
        throw DiagnosticsError(msg.str());
      }
      double lo = x_grid[i - 1];
      for (int target = c_lo + 1; target <= c_hi; ++target) {
        double hi = x_grid[i];
        while (hi - lo > resolution) {
          const double mid = 0.5 * (lo + hi);
          if (pick(count_bound_states(spec, mid, guard_band)) >= target) {
            hi = mid;
          } else {
            lo = mid;
          }
        }
        out.push_back({0.5 * (lo + hi), parity});
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const CriticalPoint& a, const CriticalPoint& b) { return a.x_c < b.x_c; });
  return out;
}

RegimeClassification classify_count(int n_b_accessible) {
  RegimeClassification rc;
  rc.n_b_accessible = n_b_accessible;
  if (n_b_accessible <= 0) {
    rc.label = Regime::Thermal;
  } else if (n_b_accessible == 1) {
    rc.label = Regime::ViolentRelaxationCandidate;
  } else {
    rc.label = Regime::PersistentOscillations;
  }
  return rc;
}

RegimeClassification classify_regime(const ModelSpec& spec, double x, bool parity_restricted,
                                     double guard_band) {
  if (!(x >= 0.0)) throw DiagnosticsError("well depth x must be >= 0");
  // no well, no bound state in the dynamical sense (mu_inf = 0)
  if (x == 0.0) return classify_count(0);
  const BoundCounts c = count_bound_states(spec, x, guard_band);
  const int n = parity_restricted ? c.even : c.even + c.odd;
  return classify_count(n);
}

std::vector<double> superoperator_frequencies(const SpectrumReport& report) {
  std::vector<double> out;
  for (const auto& a : report.bound_states) {
    for (const auto& b : report.bound_states) out.push_back(a.energy - b.energy);
  }
  std::sort(out.begin(), out.end());
  std::vector<double> unique;
  for (double v : out) {
    if (unique.empty() || std::abs(v - unique.back()) > 1e-12) unique.push_back(v);
  }
  return unique;
}

void write_spectrum_csv(std::ostream& out, const std::vector<SpectrumReport>& reports) {
  std::size_t width = 0;
  for (const auto& r : reports) width = std::max(width, r.bound_states.size());
  out << "x,n_b_total,n_b_even";
  for (std::size_t k = 0; k < width; ++k) out << ",E_" << k;
  out << '\n' << std::setprecision(17);
  for (const auto& r : reports) {
    out << r.x << ',' << r.n_b_total << ',' << r.n_b_even;
    for (std::size_t k = 0; k < width; ++k) {
      out << ',';
      if (k < r.bound_states.size()) out << r.bound_states[k].energy;
    }
    out << '\n';
  }
}

void write_critical_json(std::ostream& out, int w, const std::vector<CriticalPoint>& points) {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& p : points) doc.push_back({{"w", w}, {"x_c", p.x_c}, {"parity", p.parity}});
  out << doc.dump(2) << '\n';
}

}  // namespace vrlab
