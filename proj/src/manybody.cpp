#include "vrlab/manybody.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "vrlab/errors.hpp"
#include "vrlab/meanfield.hpp"

namespace vrlab {

namespace {

Index checked_power(Index base, int exp) {
  Index out = 1;
  for (int i = 0; i < exp; ++i) {
    if (out > kStateBudget / base + 1) return kStateBudget + 1;
    out *= base;
  }
  return out;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  }
  return out;
}

}  // namespace

void ManyBodyState::validate() const {
  if (n_sites < 1) throw InvalidArgument("many-body state needs n_sites >= 1");
  if (local_dim < 2) throw InvalidArgument("many-body state needs local_dim >= 2");
  const Index dim = checked_power(local_dim, n_sites);
  if (dim > kStateBudget) throw BudgetExceeded("local_dim^n_sites exceeds the state budget of 2e5");
  if (amplitudes.size() != dim) throw DimensionMismatch("amplitude vector has the wrong length");
  if (std::abs(amplitudes.norm() - 1.0) > 1e-10) throw NumericalIntegrity("many-body state is not normalized");
}

ManyBodyState product_state(const CVector& local, int n_sites) {
  if (n_sites < 1) throw InvalidArgument("product_state needs n_sites >= 1");
  if (local.size() < 2) throw InvalidArgument("product_state needs local_dim >= 2");
  if (checked_power(local.size(), n_sites) > kStateBudget) throw BudgetExceeded("product state exceeds the state budget");
  const double nrm = local.norm();
  if (nrm == 0.0) throw NumericalIntegrity("product_state: zero local vector");
  const CVector u = local / nrm;
  CVector amp = u;
  for (int j = 1; j < n_sites; ++j) {
    CVector next(amp.size() * u.size());
    for (Index i = 0; i < amp.size(); ++i) next.segment(i * u.size(), u.size()) = amp(i) * u;
    amp = std::move(next);
  }
  ManyBodyState st{n_sites, u.size(), std::move(amp)};
  st.validate();
  return st;
}

CMatrix lift_operator(const CMatrix& op, int site, int n_sites) {
  if (site < 0 || site >= n_sites) throw InvalidArgument("lift_operator: site out of range");
  const Index d = op.rows();
  const Index left = checked_power(d, site);
  const Index right = checked_power(d, n_sites - 1 - site);
  if (left * d * right > kDenseBudget) throw BudgetExceeded("lifted operator exceeds the dense budget of 4096");
  return kron(kron(CMatrix::Identity(left, left), op), CMatrix::Identity(right, right));
}

HermitianOperator build_full_hamiltonian(const ModelSpec& spec, int n_sites) {
  spec.validate();
  if (n_sites < 1) throw InvalidArgument("build_full_hamiltonian needs n_sites >= 1");
  const Index dim = checked_power(spec.dim(), n_sites);
  if (dim > kDenseBudget) {
    std::ostringstream msg;
    msg << "many-body dimension " << spec.dim() << "^" << n_sites << " exceeds the dense budget of " << kDenseBudget;
    throw BudgetExceeded(msg.str());
  }
  CMatrix h = CMatrix::Zero(dim, dim);
  for (int j = 0; j < n_sites; ++j) h += lift_operator(spec.h0.matrix(), j, n_sites);
  const double pref = spec.lambda / (2.0 * n_sites);
  for (const auto& h1 : spec.h1) {
    CMatrix total = CMatrix::Zero(dim, dim);
    for (int j = 0; j < n_sites; ++j) total += lift_operator(h1.matrix(), j, n_sites);
    h.noalias() -= pref * (total * total);
  }
  // products of hermitian matrices pick up rounding asymmetry
  return HermitianOperator(0.5 * (h + h.adjoint()), 1e-9);
}

CMatrix reduced_site(const ManyBodyState& state, int site) {
  if (site < 0 || site >= state.n_sites) throw InvalidArgument("reduced_site: site out of range");
  const Index d = state.local_dim;
  const Index left = checked_power(d, site);
  const Index right = checked_power(d, state.n_sites - 1 - site);
  CMatrix rho = CMatrix::Zero(d, d);
  for (Index l = 0; l < left; ++l) {
    Eigen::Map<const CMatrix> block(state.amplitudes.data() + l * d * right, right, d);
    rho.noalias() += block.transpose() * block.conjugate();
  }
  return rho;
}

double connected_correlator_norm(const ManyBodyState& state) {
  if (state.n_sites < 2) throw InvalidArgument("connected correlator needs at least two sites");
  const Index d = state.local_dim;
  const Index pair = d * d;
  const Index rest = state.amplitudes.size() / pair;
  Eigen::Map<const CMatrix> block(state.amplitudes.data(), rest, pair);
  const CMatrix rho01 = block.transpose() * block.conjugate();
  return (rho01 - kron(reduced_site(state, 0), reduced_site(state, 1))).norm();
}

ExactTrajectory exact_evolve(const ManyBodyState& state0, const HermitianOperator& h, const ModelSpec& spec,
                             double dt, double t_max, int stride, bool force_rk4) {
  state0.validate();
  if (h.dim() != state0.amplitudes.size()) throw DimensionMismatch("exact_evolve: Hamiltonian and state differ in size");
  if (state0.local_dim != spec.dim()) throw DimensionMismatch("exact_evolve: local dim differs from model");
  if (!(dt > 0.0) || !(t_max >= dt)) throw InvalidArgument("exact_evolve needs 0 < dt <= t_max");
  if (stride < 1) throw InvalidArgument("exact_evolve needs stride >= 1");

  const long n_steps = std::lround(t_max / dt);
  const CMatrix& hm = h.matrix();
  const double inv_n = 1.0 / state0.n_sites;
  const std::vector<CMatrix> h1 = [&] {
    std::vector<CMatrix> ops;
    for (const auto& op : spec.h1) ops.push_back(op.matrix());
    return ops;
  }();

  ExactTrajectory out;
  ManyBodyState st = state0;
  auto record = [&](long k) {
    const double t = static_cast<double>(k) * dt;
    const double nerr = std::abs(st.amplitudes.norm() - 1.0);
    if (nerr > 1e-8) {
      std::ostringstream msg;
      msg << "many-body norm drift " << nerr << " at t=" << t;
      throw NumericalIntegrity(msg.str());
    }
    std::vector<double> per_site;
    double avg = 0.0;
    for (int j = 0; j < st.n_sites; ++j) {
      const CMatrix rho = reduced_site(st, j);
      const double m = (rho * h1.front()).trace().real();
      per_site.push_back(m);
      avg += m;
    }
    out.times.push_back(t);
    out.site_mu.push_back(std::move(per_site));
    out.mu.push_back(avg * inv_n);
    out.corr_norm.push_back(st.n_sites >= 2 ? connected_correlator_norm(st) : 0.0);
    out.norm_err.push_back(nerr);
    out.energy.push_back(st.amplitudes.dot(hm * st.amplitudes).real() * inv_n);
  };

  if (hm.rows() <= kDenseBudget && !force_rk4) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hm);
    if (es.info() != Eigen::Success) throw EigenSolverFailure("many-body eigensolver failed");
    const CVector c0 = es.eigenvectors().adjoint() * state0.amplitudes;
    const Eigen::VectorXd& e = es.eigenvalues();
    for (long k = 0; k <= n_steps; ++k) {
      if (k % stride != 0 && k != n_steps) continue;
      const double t = static_cast<double>(k) * dt;
      CVector c(c0.size());
      for (Index i = 0; i < c.size(); ++i) c(i) = c0(i) * std::polar(1.0, -e(i) * t);
      st.amplitudes = es.eigenvectors() * c;
      record(k);
    }
    return out;
  }

  const Complex mi(0.0, -1.0);
  record(0);
  for (long k = 1; k <= n_steps; ++k) {
    const CVector& y = st.amplitudes;
    const CVector k1 = mi * (hm * y);
    const CVector k2 = mi * (hm * (y + 0.5 * dt * k1));
    const CVector k3 = mi * (hm * (y + 0.5 * dt * k2));
    const CVector k4 = mi * (hm * (y + dt * k3));
    st.amplitudes = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (k % stride == 0 || k == n_steps) record(k);
  }
  return out;
}

double OracleComparison::max_deviation(double t_limit) const {
  double worst = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (times[k] > t_limit + 1e-12) break;
    worst = std::max(worst, std::abs(mu_exact[k] - mu_mf[k]));
  }
  return worst;
}

double OracleComparison::corr_norm_at(double t) const {
  if (times.empty() || t < times.front() || t > times.back()) throw DiagnosticsError("corr_norm_at: t outside the run");
  const auto it = std::lower_bound(times.begin(), times.end(), t);
  const auto k = static_cast<std::size_t>(it - times.begin());
  if (k == 0 || times[k] == t) return corr_norm[k];
  const double f = (t - times[k - 1]) / (times[k] - times[k - 1]);
  return (1.0 - f) * corr_norm[k - 1] + f * corr_norm[k];
}

OracleComparison compare_with_meanfield(const ModelSpec& spec, const CVector& local, int n_sites, double dt,
                                        double t_max, int stride) {
  const ManyBodyState st = product_state(local, n_sites);
  const HermitianOperator h = build_full_hamiltonian(spec, n_sites);
  const ExactTrajectory ex = exact_evolve(st, h, spec, dt, t_max, stride);

  IntegratorConfig cfg;
  cfg.dt = dt;
  cfg.t_max = t_max;
  cfg.record_stride = stride;
  const TrajectoryRecord mf = evolve(spec, DensityMatrix::pure(local), cfg);
  if (mf.size() != ex.times.size()) throw DiagnosticsError("exact and mean-field sampling grids differ");

  OracleComparison cmp;
  cmp.n_sites = n_sites;
  cmp.times = ex.times;
  cmp.mu_exact = ex.mu;
  cmp.mu_mf = mf.mu_component(0);
  cmp.corr_norm = ex.corr_norm;
  return cmp;
}

void write_oracle_csv(std::ostream& out, const OracleComparison& cmp) {
  out << "t,mu_exact,mu_mf,corr_norm\n" << std::setprecision(17);
  for (std::size_t k = 0; k < cmp.times.size(); ++k) {
    out << cmp.times[k] << ',' << cmp.mu_exact[k] << ',' << cmp.mu_mf[k] << ',' << cmp.corr_norm[k] << '\n';
  }
}

}  // namespace vrlab
