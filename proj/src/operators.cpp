#include "vrlab/operators.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "vrlab/errors.hpp"

namespace vrlab {

namespace {

double hermiticity_defect(const CMatrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace

HermitianOperator::HermitianOperator(CMatrix entries, double tol) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) {
    throw DimensionMismatch("hermitian operator must be square");
  }
  if (entries_.rows() < 2) {
    throw InvalidModel("hermitian operator needs dim >= 2");
  }
  const double defect = hermiticity_defect(entries_);
  if (defect > tol) {
    std::ostringstream msg;
    msg << "operator is not hermitian (defect " << defect << ")";
    throw NumericalIntegrity(msg.str());
  }
  const Index n = entries_.rows();
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      const Complex v = entries_(i, j);
      if (v.imag() != 0.0) real_ = false;
      if (v != Complex{}) bandwidth_ = std::max(bandwidth_, std::abs(i - j));
    }
  }
}

HermitianOperator HermitianOperator::from_real(const Eigen::MatrixXd& entries) {
  return HermitianOperator(entries.cast<Complex>());
}

HermitianOperator HermitianOperator::identity(Index dim) {
  return HermitianOperator(CMatrix::Identity(dim, dim));
}

HermitianOperator HermitianOperator::operator+(const HermitianOperator& other) const {
  if (other.dim() != dim()) throw DimensionMismatch("operator sum: dim mismatch");
  return HermitianOperator(entries_ + other.entries_);
}

HermitianOperator HermitianOperator::operator-(const HermitianOperator& other) const {
  if (other.dim() != dim()) throw DimensionMismatch("operator difference: dim mismatch");
  return HermitianOperator(entries_ - other.entries_);
}

HermitianOperator HermitianOperator::scaled(double factor) const {
  return HermitianOperator(entries_ * factor);
}

DensityMatrix::DensityMatrix(CMatrix entries, double positivity_tol) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) {
    throw DimensionMismatch("density matrix must be square");
  }
  if (entries_.rows() < 2) throw InvalidModel("density matrix needs dim >= 2");
  if (hermiticity_defect(entries_) > kHermitianTol) {
    throw NumericalIntegrity("density matrix is not hermitian");
  }
  const Complex tr = entries_.trace();
  if (std::abs(tr - 1.0) > kTraceTol) {
    std::ostringstream msg;
    msg << "density matrix trace " << tr.real() << " differs from 1";
    throw NumericalIntegrity(msg.str());
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(entries_, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw EigenSolverFailure("density matrix spectrum");
  if (solver.eigenvalues().minCoeff() < -positivity_tol) {
    throw NumericalIntegrity("density matrix has a negative eigenvalue");
  }
  const double p = purity();
  const double n = static_cast<double>(entries_.rows());
  if (p < 1.0 / n - positivity_tol || p > 1.0 + positivity_tol) {
    throw NumericalIntegrity("density matrix purity out of range");
  }
}

DensityMatrix DensityMatrix::pure(const CVector& psi) {
  const double norm = psi.norm();
  if (norm == 0.0) throw NumericalIntegrity("cannot build a pure state from a zero vector");
  const CVector u = psi / norm;
  return DensityMatrix(u * u.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(Index dim) {
  return DensityMatrix(CMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

double DensityMatrix::purity() const {
  // tr(rho^2) = sum |rho_ij|^2 for hermitian rho
  return entries_.squaredNorm();
}

void ModelSpec::validate() const {
  if (!(lambda > 0.0)) throw InvalidModel("lambda must be > 0 (ferromagnetic coupling)");
  if (h1.empty()) throw InvalidModel("model needs at least one coupling operator");
  const Index n = dim();
  for (const auto& op : h1) {
    if (op.dim() != n) throw InvalidModel("coupling operator dim differs from H0");
  }
  if (static_cast<Index>(basis_labels.size()) != n || static_cast<Index>(parity_map.size()) != n) {
    throw InvalidModel("basis labels / parity map do not match dim");
  }
  for (Index i = 0; i < n; ++i) {
    const Index j = parity_map[static_cast<std::size_t>(i)];
    if (j < 0 || j >= n || parity_map[static_cast<std::size_t>(j)] != i) {
      throw InvalidModel("parity map is not an involution");
    }
  }
}

ModelSpec ModelSpec::with_lambda(double new_lambda) const {
  ModelSpec copy = *this;
  copy.lambda = new_lambda;
  copy.validate();
  return copy;
}

namespace {

std::vector<Index> reversal_map(Index n) {
  std::vector<Index> map(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) map[static_cast<std::size_t>(i)] = n - 1 - i;
  return map;
}

}  // namespace

ModelSpec build_w_model(int s, int w, double h, double lambda) {
  if (s <= 0) throw InvalidModel("w-model needs s > 0");
  if (s > 2000) throw InvalidModel("w-model s exceeds the dense-diagonalization budget (2000)");
  if (w < 0 || w >= s) throw InvalidModel("w-model needs 0 <= w < s");

  const Index n = 2 * s + 1;
  Eigen::MatrixXd h0 = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd h1 = Eigen::MatrixXd::Zero(n, n);
  std::vector<int> labels(static_cast<std::size_t>(n));
  const double ss1 = static_cast<double>(s) * (s + 1);
  for (Index i = 0; i < n; ++i) {
    const int m = static_cast<int>(i) - s;
    labels[static_cast<std::size_t>(i)] = m;
    // theta_H(w^2 - m^2) with theta_H(0) = 1
    h1(i, i) = (w * w - m * m >= 0) ? 1.0 : 0.0;
    if (i + 1 < n) {
      // <m+1| H0 |m> = -(h / 2s) sqrt(s(s+1) - m(m+1))
      const double t = -(h / (2.0 * s)) * std::sqrt(ss1 - static_cast<double>(m) * (m + 1));
      h0(i + 1, i) = t;
      h0(i, i + 1) = t;
    }
  }

  ModelSpec spec{HermitianOperator::from_real(h0),
                 {HermitianOperator::from_real(h1)},
                 lambda,
                 std::move(labels),
                 reversal_map(n),
                 WModelParams{s, w, h}};
  spec.validate();
  return spec;
}

ModelSpec build_rotor_model(int l_max, double lambda) {
  if (l_max < 1) throw InvalidModel("rotor needs l_max >= 1");
  const Index n = 2 * static_cast<Index>(l_max) + 1;
  Eigen::MatrixXd h0 = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd cos_theta = Eigen::MatrixXd::Zero(n, n);
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    const int l = static_cast<int>(i) - l_max;
    labels[static_cast<std::size_t>(i)] = l;
    h0(i, i) = 0.5 * l * l;
    if (i + 1 < n) {
      cos_theta(i, i + 1) = 0.5;
      cos_theta(i + 1, i) = 0.5;
    }
  }
  ModelSpec spec{HermitianOperator::from_real(h0),
                 {HermitianOperator::from_real(cos_theta)},
                 lambda,
                 std::move(labels),
                 reversal_map(n),
                 RotorParams{l_max}};
  spec.validate();
  return spec;
}

CVector gaussian_w_amplitudes(int s, double width) {
  if (!(width > 0.0)) throw InvalidModel("gaussian width must be positive");
  if (s <= 0) throw InvalidModel("w-model needs s > 0");
  const Index n = 2 * s + 1;
  CVector psi(n);
  for (Index i = 0; i < n; ++i) {
    const double m = static_cast<double>(i - s);
    psi(i) = std::exp(-m * m / (4.0 * width * width));
  }
  return psi / psi.norm();
}

DensityMatrix gaussian_w_state(int s, double width) { return DensityMatrix::pure(gaussian_w_amplitudes(s, width)); }

DensityMatrix rotor_initial_state(int l_max) {
  if (l_max < 1) throw InvalidModel("rotor needs l_max >= 1");
  const Index n = 2 * static_cast<Index>(l_max) + 1;
  CVector psi = CVector::Zero(n);
  psi(l_max) = 3.0;
  psi(l_max - 1) = 1.0;
  psi(l_max + 1) = 1.0;
  return DensityMatrix::pure(psi);
}

double expectation(const CMatrix& rho, const HermitianOperator& a) {
  if (rho.rows() != a.dim() || rho.cols() != a.dim()) {
    throw DimensionMismatch("expectation: dim mismatch");
  }
  // tr(rho A) = sum_ij rho_ij A_ji
  const Complex value = (rho.array() * a.matrix().transpose().array()).sum();
  if (std::abs(value.imag()) > 1e-8) {
    std::ostringstream msg;
    msg << "expectation has imaginary residue " << value.imag();
    throw NumericalIntegrity(msg.str());
  }
  return value.real();
}

double expectation(const DensityMatrix& rho, const HermitianOperator& a) {
  return expectation(rho.matrix(), a);
}

Eigen::MatrixXd parity_matrix(const ModelSpec& spec) {
  const Index n = spec.dim();
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (Index i = 0; i < n; ++i) p(spec.parity_map[static_cast<std::size_t>(i)], i) = 1.0;
  return p;
}

double parity_odd_norm(const CMatrix& rho, const std::vector<Index>& parity_map) {
  const Index n = rho.rows();
  double worst = 0.0;
  for (Index j = 0; j < n; ++j) {
    const Index pj = parity_map[static_cast<std::size_t>(j)];
    for (Index i = 0; i < n; ++i) {
      const Index pi = parity_map[static_cast<std::size_t>(i)];
      worst = std::max(worst, 0.5 * std::abs(rho(i, j) - rho(pi, pj)));
    }
  }
  return worst;
}

}  // namespace vrlab
