#include "vrlab/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "vrlab/errors.hpp"
#include "vrlab/kernels.hpp"

namespace vrlab {

void IntegratorConfig::validate() const {
  if (!(dt > 0.0) || dt > 0.05) throw ConfigError("integrator dt must lie in (0, 0.05]");
  if (!(t_max >= dt)) throw ConfigError("integrator t_max must be >= dt");
  if (record_stride < 1) throw ConfigError("integrator record_stride must be >= 1");
  if (!(energy_tol > 0.0) || !(trace_tol > 0.0) || !(herm_tol > 0.0) || !(edge_population_tol > 0.0)) {
    throw ConfigError("integrator tolerances must be positive");
  }
}

std::vector<double> TrajectoryRecord::mu_component(std::size_t a) const {
  std::vector<double> out;
  out.reserve(mu.size());
  for (const auto& m : mu) out.push_back(m.at(a));
  return out;
}

double TrajectoryRecord::max_energy_drift() const {
  double worst = 0.0;
  for (double e : energy) worst = std::max(worst, std::abs(e - energy.front()));
  return worst;
}

HermitianOperator effective_hamiltonian(const ModelSpec& spec, const std::vector<double>& mu) {
  if (mu.size() != spec.h1.size()) {
    throw DimensionMismatch("effective_hamiltonian: mu has the wrong number of components");
  }
  CMatrix h = spec.h0.matrix();
  for (std::size_t a = 0; a < mu.size(); ++a) h -= (spec.lambda * mu[a]) * spec.h1[a].matrix();
  return HermitianOperator(std::move(h));
}

std::vector<double> order_parameter(const CMatrix& rho, const ModelSpec& spec) {
  std::vector<double> mu;
  mu.reserve(spec.h1.size());
  for (const auto& op : spec.h1) mu.push_back(expectation(rho, op));
  return mu;
}

std::vector<double> order_parameter(const DensityMatrix& rho, const ModelSpec& spec) {
  return order_parameter(rho.matrix(), spec);
}

double energy_density(const CMatrix& rho, const ModelSpec& spec) {
  double e = expectation(rho, spec.h0);
  for (double m : order_parameter(rho, spec)) e -= 0.5 * spec.lambda * m * m;
  return e;
}

double energy_density(const DensityMatrix& rho, const ModelSpec& spec) {
  return energy_density(rho.matrix(), spec);
}

namespace {

/// Banded copies of the model operators plus scratch space for RK4.
class MeanFieldFlow {
 public:
  explicit MeanFieldFlow(const ModelSpec& spec) : spec_(spec) {
    std::vector<const CMatrix*> mats{&spec.h0.matrix()};
    for (const auto& op : spec.h1) mats.push_back(&op.matrix());
    const auto layout = kernels::band_layout(mats);
    h0_ = kernels::BandedOperator::on_layout(spec.h0.matrix(), layout);
    for (const auto& op : spec.h1) h1_.push_back(kernels::BandedOperator::on_layout(op.matrix(), layout));
    coeffs_.resize(h1_.size());
  }

  std::vector<double> mu(const CMatrix& rho) const {
    std::vector<double> out(h1_.size());
    for (std::size_t a = 0; a < h1_.size(); ++a) {
      const Complex v = kernels::banded_trace_product(rho, h1_[a]);
      if (std::abs(v.imag()) > 1e-8) throw NumericalIntegrity("order parameter acquired an imaginary part");
      out[a] = v.real();
    }
    return out;
  }

  double energy(const CMatrix& rho) const {
    double e = kernels::banded_trace_product(rho, h0_).real();
    for (double m : mu(rho)) e -= 0.5 * spec_.lambda * m * m;
    return e;
  }

  void rhs(const CMatrix& rho, CMatrix& out) {
    const auto m = mu(rho);
    for (std::size_t a = 0; a < m.size(); ++a) coeffs_[a] = -spec_.lambda * m[a];
    kernels::combine_bands(h0_, h1_, coeffs_, heff_);
    kernels::von_neumann_rhs(heff_, rho, out);
  }

  void step(CMatrix& rho, double dt) {
    rhs(rho, k1_);
    tmp_ = rho + (0.5 * dt) * k1_;
    rhs(tmp_, k2_);
    tmp_ = rho + (0.5 * dt) * k2_;
    rhs(tmp_, k3_);
    tmp_ = rho + dt * k3_;
    rhs(tmp_, k4_);
    rho += (dt / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
  }

 private:
  const ModelSpec& spec_;
  kernels::BandedOperator h0_;
  std::vector<kernels::BandedOperator> h1_;
  kernels::BandedOperator heff_;
  std::vector<double> coeffs_;
  CMatrix k1_, k2_, k3_, k4_, tmp_;
};

double edge_population(const CMatrix& rho, const ModelSpec& spec) {
  const auto* rotor = std::get_if<RotorParams>(&spec.tag);
  if (rotor == nullptr) return 0.0;
  const double cutoff = 0.9 * rotor->l_max;
  double pop = 0.0;
  for (Index i = 0; i < spec.dim(); ++i) {
    const int label = spec.basis_labels[static_cast<std::size_t>(i)];
    if (std::abs(label) > cutoff || std::abs(label) == rotor->l_max) pop += rho(i, i).real();
  }
  return pop;
}

}  // namespace

CMatrix rk4_step(const ModelSpec& spec, const CMatrix& rho, double dt) {
  MeanFieldFlow flow(spec);
  CMatrix out = rho;
  flow.step(out, dt);
  return out;
}

TrajectoryRecord evolve(const ModelSpec& spec, const DensityMatrix& rho0, const IntegratorConfig& cfg,
                        const TrajectoryObserver& observer) {
  cfg.validate();
  spec.validate();
  if (rho0.dim() != spec.dim()) throw DimensionMismatch("evolve: initial state dim differs from model");

  MeanFieldFlow flow(spec);
  CMatrix rho = rho0.matrix();
  const long n_steps = std::max<long>(1, std::lround(cfg.t_max / cfg.dt));
  const double e0 = flow.energy(rho);
  const double energy_bound = cfg.energy_tol * std::max(1.0, std::abs(e0));

  TrajectoryRecord rec;
  const auto expected = static_cast<std::size_t>(n_steps / cfg.record_stride + 2);
  rec.times.reserve(expected);
  rec.mu.reserve(expected);

  // worst pre-correction defects since the last recorded sample
  double trace_err = 0.0;
  double herm_err = 0.0;

  auto record = [&](long k) {
    const double t = static_cast<double>(k) * cfg.dt;
    auto mu = flow.mu(rho);
    const double e = flow.energy(rho);
    const double edge = edge_population(rho, spec);
    rec.times.push_back(t);
    rec.energy.push_back(e);
    rec.trace_err.push_back(trace_err);
    rec.herm_err.push_back(herm_err);
    rec.purity.push_back(rho.squaredNorm());
    rec.parity_odd.push_back(parity_odd_norm(rho, spec.parity_map));
    rec.edge_population.push_back(edge);
    if (observer) observer(t, rho, mu);
    rec.mu.push_back(std::move(mu));

    if (std::abs(e - e0) > energy_bound) {
      std::ostringstream msg;
      msg << "energy drift " << std::abs(e - e0) << " at t=" << t << " exceeds " << energy_bound
          << "; retry with a smaller dt (now " << cfg.dt << ")";
      throw IntegrationFailure(msg.str());
    }
    if (trace_err > cfg.trace_tol || herm_err > cfg.herm_tol) {
      std::ostringstream msg;
      msg << "trace/hermiticity defect (" << trace_err << ", " << herm_err << ") at t=" << t;
      throw NumericalIntegrity(msg.str());
    }
    if (edge > cfg.edge_population_tol) {
      std::ostringstream msg;
      msg << "population " << edge << " reached the truncation edge at t=" << t << "; increase l_max";
      throw TruncationError(msg.str());
    }
    trace_err = 0.0;
    herm_err = 0.0;
  };

  record(0);
  for (long k = 1; k <= n_steps; ++k) {
    flow.step(rho, cfg.dt);
    herm_err = std::max(herm_err, (rho - rho.adjoint()).cwiseAbs().maxCoeff());
    rho = 0.5 * (rho + rho.adjoint()).eval();
    const double tr = rho.trace().real();
    trace_err = std::max(trace_err, std::abs(tr - 1.0));
    rho /= tr;
    if (k % cfg.record_stride == 0 || k == n_steps) record(k);
  }
  // RK4 only preserves positivity to truncation order
  rec.final_state.emplace(rho, 1e-6);
  return rec;
}

AmplitudeReport amplitude_diagnostic(const TrajectoryRecord& traj, double t1, double t_max,
                                     std::size_t component) {
  if (!(t1 < t_max)) throw DiagnosticsError("amplitude window needs t1 < t_max");
  if (traj.times.empty()) throw DiagnosticsError("empty trajectory");
  const double eps = 1e-9 * std::max(1.0, std::abs(t_max));
  if (t1 < traj.times.front() - eps || t_max > traj.times.back() + eps) {
    throw DiagnosticsError("amplitude window lies outside the trajectory");
  }
  AmplitudeReport rep;
  rep.t1 = t1;
  rep.t_max = t_max;
  std::vector<double> mu;
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const double t = traj.times[k];
    if (t >= t1 - eps && t <= t_max + eps) {
      rep.times.push_back(t);
      mu.push_back(traj.mu[k].at(component));
    }
  }
  if (rep.times.size() < 2) throw DiagnosticsError("amplitude window holds fewer than two samples");

  auto trapezoid = [&](const std::vector<double>& f) {
    double s = 0.0;
    for (std::size_t k = 1; k < f.size(); ++k) {
      s += 0.5 * (f[k] + f[k - 1]) * (rep.times[k] - rep.times[k - 1]);
    }
    return s;
  };
  const double span = rep.times.back() - rep.times.front();
  rep.mu_infinity = trapezoid(mu) / span;
  rep.a_of_t.reserve(mu.size());
  for (double m : mu) rep.a_of_t.push_back((m - rep.mu_infinity) * (m - rep.mu_infinity));
  rep.mean_a = trapezoid(rep.a_of_t) / span;
  return rep;
}

double dominant_frequency(const std::vector<double>& times, const std::vector<double>& values, double t1,
                          double t2, double omega_min, double omega_max) {
  if (times.size() != values.size()) throw DimensionMismatch("dominant_frequency: length mismatch");
  if (!(omega_min > 0.0 && omega_max > omega_min)) throw DiagnosticsError("bad frequency range");
  std::vector<double> t, f, w;
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (times[k] >= t1 - 1e-9 && times[k] <= t2 + 1e-9) {
      t.push_back(times[k]);
      f.push_back(values[k]);
    }
  }
  if (t.size() < 4) throw DiagnosticsError("too few samples for a spectral estimate");
  // trapezoid weights
  w.assign(t.size(), 0.0);
  for (std::size_t k = 1; k < t.size(); ++k) {
    const double h = 0.5 * (t[k] - t[k - 1]);
    w[k - 1] += h;
    w[k] += h;
  }
  double mean = 0.0, span = t.back() - t.front();
  for (std::size_t k = 0; k < t.size(); ++k) mean += w[k] * f[k];
  mean /= span;
  for (double& v : f) v -= mean;

  auto power = [&](double omega) {
    double re = 0.0, im = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k) {
      re += w[k] * f[k] * std::cos(omega * t[k]);
      im -= w[k] * f[k] * std::sin(omega * t[k]);
    }
    return re * re + im * im;
  };

  constexpr int kGrid = 4000;
  std::vector<double> p(kGrid);
  const double step = (omega_max - omega_min) / (kGrid - 1);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < kGrid; ++i) p[static_cast<std::size_t>(i)] = power(omega_min + step * i);
  const auto best = static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());

  // golden-section refinement inside the neighbouring grid cells
  double a = omega_min + step * std::max(0, best - 1);
  double b = omega_min + step * std::min(kGrid - 1, best + 1);
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a), d = a + g * (b - a);
  double pc = power(c), pd = power(d);
  for (int it = 0; it < 60 && b - a > 1e-12; ++it) {
    if (pc > pd) {
      b = d;
      d = c;
      pd = pc;
      c = b - g * (b - a);
      pc = power(c);
    } else {
      a = c;
      c = d;
      pc = pd;
      d = a + g * (b - a);
      pd = power(d);
    }
  }
  return 0.5 * (a + b);
}

void write_trajectory_csv(std::ostream& out, const TrajectoryRecord& traj) {
  const std::size_t ncomp = traj.mu.empty() ? 1 : traj.mu.front().size();
  out << "t";
  for (std::size_t a = 0; a < ncomp; ++a) out << ",mu_" << (a + 1);
  out << ",energy,trace_err,herm_err,purity\n";
  out << std::setprecision(17);
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    out << traj.times[k];
    for (double m : traj.mu[k]) out << ',' << m;
    out << ',' << traj.energy[k] << ',' << traj.trace_err[k] << ',' << traj.herm_err[k] << ','
        << traj.purity[k] << '\n';
  }
}

void write_trajectory_csv(const std::string& path, const TrajectoryRecord& traj) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  write_trajectory_csv(out, traj);
}

}  // namespace vrlab
