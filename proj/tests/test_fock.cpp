#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ampbench/fock.hpp"

using namespace ampbench;

TEST_CASE("coherent state norm and truncation policy") {
  for (double a : {0.0, 0.7, 2.0, 4.5}) {
    int dim = recommended_dim(a);
    StateVector psi = coherent_state(Complex(a, 0.3 * a), dim);
    CHECK(psi.squared_norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(coherent_state(Complex(1.0 / 0.0, 0), 8), std::invalid_argument);
  CHECK_THROWS_AS(coherent_state(Complex(1, 0), 1), std::invalid_argument);
}

TEST_CASE("coherent state quadrature moments") {
  Complex alpha(1.3, -0.8);
  int dim = recommended_dim(std::abs(alpha));
  QuadratureMoments m = pure_moments(coherent_state(alpha, dim).amps);
  CHECK(m.weight == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m.mx == doctest::Approx(std::sqrt(2.0) * alpha.real()).epsilon(1e-12));
  CHECK(m.mp == doctest::Approx(std::sqrt(2.0) * alpha.imag()).epsilon(1e-12));
  CHECK(m.mx2 - m.mx * m.mx == doctest::Approx(0.5).epsilon(1e-11));
  CHECK(m.mp2 - m.mp * m.mp == doctest::Approx(0.5).epsilon(1e-11));
}

TEST_CASE("quadrature operators and faithful squares") {
  int dim = 12;
  Mat x = quadrature_operator(Quadrature::x, dim).entries;
  Mat p = quadrature_operator(Quadrature::p, dim).entries;
  CHECK(is_hermitian(x));
  CHECK(is_hermitian(p));
  Mat x2 = quadrature_squared_operator(Quadrature::x, dim).entries;
  Mat p2 = quadrature_squared_operator(Quadrature::p, dim).entries;
  // diagonal of x^2 (and p^2) is n + 1/2, including the top rows that a
  // naive truncated square would corrupt
  for (int n = 0; n < dim; ++n) {
    CHECK(x2(n, n).real() == doctest::Approx(n + 0.5).epsilon(1e-12));
    CHECK(p2(n, n).real() == doctest::Approx(n + 0.5).epsilon(1e-12));
  }
  // pure_moments agrees with the operator route on a dense test vector
  Vec v = Vec::Zero(dim);
  v(0) = 0.6;
  v(3) = Complex(0.5, -0.4);
  v(4) = Complex(0.0, 0.48);
  QuadratureMoments m = pure_moments(v);
  CHECK(m.mx2 == doctest::Approx((v.adjoint() * x2 * v)(0).real()).epsilon(1e-12));
  CHECK(m.mp2 == doctest::Approx((v.adjoint() * p2 * v)(0).real()).epsilon(1e-12));
  CHECK(m.mx == doctest::Approx((v.adjoint() * x * v)(0).real()).epsilon(1e-12));
}

TEST_CASE("squeeze operator") {
  int dim = 64;
  double r = 0.4;
  OperatorMatrix s = squeeze_operator(r, dim);
  CHECK(s.unitarity_defect < 1e-6);
  Vec vac = Vec::Zero(dim);
  vac(0) = 1.0;
  QuadratureMoments m = pure_moments(Vec(s.entries * vac));
  CHECK(m.weight == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(m.mx2 == doctest::Approx(0.5 * std::exp(-2.0 * r)).epsilon(1e-9));
  CHECK(m.mp2 == doctest::Approx(0.5 * std::exp(2.0 * r)).epsilon(1e-9));
  CHECK_THROWS_AS(squeeze_operator(3.0, dim), std::invalid_argument);
}

TEST_CASE("two-mode squeezed state moments") {
  double xi = 0.5;
  int dim = 48;
  StateVector psi = two_mode_squeezed_state(xi, dim);
  CHECK(psi.squared_norm() == doctest::Approx(1.0).epsilon(1e-12));
  TwoModeMoments t = two_mode_moments(psi);
  double s2 = xi * xi / (1.0 - xi * xi);       // sinh^2 r
  double sc = xi / (1.0 - xi * xi);            // sinh r cosh r
  CHECK(t.xA == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(t.xA2 == doctest::Approx(0.5 + s2).epsilon(1e-10));
  CHECK(t.pB2 == doctest::Approx(0.5 + s2).epsilon(1e-10));
  CHECK(t.xAxB == doctest::Approx(sc).epsilon(1e-10));
  CHECK(t.pApB == doctest::Approx(-sc).epsilon(1e-10));
}

TEST_CASE("partial trace of the TMSS is thermal") {
  double xi = 0.6;
  int dim = 40;
  DensityMatrix rho = density(two_mode_squeezed_state(xi, dim));
  DensityMatrix a = partial_trace(rho, Subsystem::A);
  CHECK(a.trace() == doctest::Approx(1.0).epsilon(1e-10));
  for (int n = 0; n < 6; ++n)
    CHECK(a.entries(n, n).real() ==
          doctest::Approx((1.0 - xi * xi) * std::pow(xi * xi, n)).epsilon(1e-12));
  CHECK(a.entries(0, 1) == Complex(0, 0));
}

TEST_CASE("recommended_dim keeps coherent tails negligible") {
  for (double m : {1.0, 3.0, 6.0, 10.0}) {
    int dim = recommended_dim(m);
    StateVector psi = coherent_state(Complex(m, 0), dim);
    CHECK(1.0 - psi.squared_norm() < 1e-12);
  }
}
