#include <cmath>

#include <Eigen/Eigenvalues>
#include <doctest.h>

#include "vrlab/errors.hpp"
#include "vrlab/operators.hpp"

using namespace vrlab;

namespace {

// index of magnetic number m in a spin-s basis
Index at(int s, int m) { return m + s; }

}  // namespace

TEST_CASE("w-model matrix elements, s=2 w=0") {
  const ModelSpec spec = build_w_model(2, 0, 1.0);
  CHECK(spec.dim() == 5);
  CHECK(spec.h0(at(2, 1), at(2, 0)).real() == doctest::Approx(-0.25 * std::sqrt(6.0)).epsilon(1e-14));
  CHECK(spec.h1[0](at(2, 0), at(2, 0)).real() == 1.0);
  CHECK(spec.h1[0](at(2, 1), at(2, 1)).real() == 0.0);
}

TEST_CASE("w-model s=1 hopping element") {
  const ModelSpec spec = build_w_model(1, 0, 1.0);
  for (Index i = 0; i < 3; ++i) CHECK(spec.h0(i, i) == Complex{});
  CHECK(spec.h0(at(1, 0), at(1, 1)).real() == doctest::Approx(-std::sqrt(2.0) / 2.0).epsilon(1e-14));
  CHECK(spec.h0(at(1, -1), at(1, 0)).real() == doctest::Approx(-std::sqrt(2.0) / 2.0).epsilon(1e-14));
}

TEST_CASE("tr H1 = 2w+1") {
  for (int s : {3, 10, 40}) {
    for (int w = 0; w < s && w < 5; ++w) {
      CHECK(build_w_model(s, w, 1.0).h1[0].matrix().trace().real() == doctest::Approx(2 * w + 1));
    }
  }
}

TEST_CASE("w-model rejects bad parameters") {
  CHECK_THROWS_AS(build_w_model(0, 0, 1.0), InvalidModel);
  CHECK_THROWS_AS(build_w_model(3, 3, 1.0), InvalidModel);
  CHECK_THROWS_AS(build_w_model(3, -1, 1.0), InvalidModel);
  CHECK_THROWS_AS(build_w_model(3, 0, 1.0, 0.0), InvalidModel);
}

TEST_CASE("rotor model, l_max=1 and l_max=3") {
  const ModelSpec r1 = build_rotor_model(1);
  CHECK(r1.dim() == 3);
  CHECK(r1.h0(0, 0).real() == 0.5);
  CHECK(r1.h0(1, 1).real() == 0.0);
  CHECK(r1.h0(2, 2).real() == 0.5);
  CHECK(r1.h1[0](0, 1).real() == 0.5);
  CHECK(r1.h1[0](1, 2).real() == 0.5);
  CHECK(r1.h1[0](0, 2).real() == 0.0);

  const ModelSpec r3 = build_rotor_model(3);
  // L=2 -> index 5, L=3 -> index 6
  CHECK(r3.h1[0](5, 6).real() == 0.5);
  CHECK(r3.basis_labels.front() == -3);
  CHECK(r3.basis_labels.back() == 3);
  CHECK_THROWS_AS(build_rotor_model(0), InvalidModel);
}

TEST_CASE("parity commutes with H0 and H1") {
  for (const ModelSpec& spec : {build_w_model(7, 2, 1.0), build_rotor_model(6), build_w_model(30, 0, 0.7)}) {
    const Eigen::MatrixXd p = parity_matrix(spec);
    const CMatrix pc = p.cast<Complex>();
    CHECK((pc * spec.h0.matrix() * pc - spec.h0.matrix()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((pc * spec.h1[0].matrix() * pc - spec.h1[0].matrix()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("x=0 spectrum fills [-h, h]") {
  for (int s : {50, 200}) {
    const ModelSpec spec = build_w_model(s, 0, 1.0);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(spec.h0.matrix());
    CHECK(std::abs(es.eigenvalues().minCoeff() + 1.0) < 2.0 / s);
    CHECK(std::abs(es.eigenvalues().maxCoeff() - 1.0) < 2.0 / s);
  }
}

TEST_CASE("gaussian state normalization and parity") {
  // independent finite sum for Z = sum_m exp(-m^2/2)
  double z = 0.0;
  for (int m = -150; m <= 150; ++m) z += std::exp(-0.5 * m * m);
  // Poisson summation: Z = sqrt(2 pi) (1 + 2 exp(-2 pi^2) + ...)
  CHECK(z == doctest::Approx(std::sqrt(2.0 * M_PI)).epsilon(1e-8));
  const DensityMatrix rho = gaussian_w_state(150);
  CHECK(rho.matrix()(150, 150).real() == doctest::Approx(1.0 / z).epsilon(1e-12));
  CHECK(rho.matrix()(150, 150).real() == doctest::Approx(0.39894).epsilon(1e-5));
  CHECK(std::abs(rho.trace() - Complex{1.0, 0.0}) < 1e-14);
  const ModelSpec spec = build_w_model(150, 0, 1.0);
  CHECK(parity_odd_norm(rho.matrix(), spec.parity_map) == 0.0);
  CHECK_THROWS_AS(gaussian_w_state(150, 0.0), InvalidModel);
}

TEST_CASE("narrow gaussian tends to |m=0>") {
  const DensityMatrix rho = gaussian_w_state(10, 0.05);
  CHECK(rho.matrix()(10, 10).real() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("rotor initial state") {
  const ModelSpec spec = build_rotor_model(5);
  const DensityMatrix rho = rotor_initial_state(5);
  // c0 = 3/sqrt(11), c(+-1) = 1/sqrt(11): <cos> = (1/2)*2*(c0 c1 + c0 c-1) = 6/11
  CHECK(expectation(rho, spec.h1[0]) == doctest::Approx(6.0 / 11.0).epsilon(1e-14));
  CHECK(rho.purity() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(parity_odd_norm(rho.matrix(), spec.parity_map) == 0.0);
}

TEST_CASE("expectation examples and linearity") {
  const int s = 12;
  const int w = 2;
  const ModelSpec spec = build_w_model(s, w, 1.0);
  const DensityMatrix mixed = DensityMatrix::maximally_mixed(spec.dim());
  CHECK(expectation(mixed, spec.h1[0]) == doctest::Approx((2.0 * w + 1) / (2.0 * s + 1)));
  CHECK(expectation(mixed, HermitianOperator::identity(spec.dim())) == doctest::Approx(1.0));

  CVector e0 = CVector::Zero(spec.dim());
  e0(s) = 1.0;
  CHECK(expectation(DensityMatrix::pure(e0), build_w_model(s, 0, 1.0).h1[0]) == 1.0);

  const DensityMatrix g = gaussian_w_state(s);
  const double a = expectation(g, spec.h0);
  const double b = expectation(g, spec.h1[0]);
  CHECK(expectation(g, spec.h0 + spec.h1[0].scaled(2.5)) == doctest::Approx(a + 2.5 * b));
  const CMatrix mix = 0.3 * g.matrix() + 0.7 * mixed.matrix();
  CHECK(expectation(mix, spec.h0) == doctest::Approx(0.3 * a + 0.7 * expectation(mixed, spec.h0)));
  CHECK_THROWS_AS(expectation(g, HermitianOperator::identity(spec.dim() + 1)), DimensionMismatch);
}

TEST_CASE("invariant checks") {
  CMatrix bad = CMatrix::Zero(3, 3);
  bad(0, 1) = 1.0;
  CHECK_THROWS(HermitianOperator(bad));
  CHECK_THROWS(HermitianOperator(CMatrix::Zero(1, 1)));
  CMatrix not_unit = CMatrix::Identity(3, 3);
  CHECK_THROWS(DensityMatrix(not_unit));
  CMatrix negative = CMatrix::Zero(2, 2);
  negative(0, 0) = 1.5;
  negative(1, 1) = -0.5;
  CHECK_THROWS(DensityMatrix(negative));
}
