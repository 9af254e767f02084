#include <cmath>

#include "doctest.h"
#include "fracres/resolvent.hpp"
#include "fracres/specfun.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace fracres;
using linop::MatrixOperator;
using resolvent::Method;
using resolvent::ResolventFamily;

TEST_CASE("S_alpha examples") {
  const ResolventFamily F{MatrixOperator::diagonal({1.0, 2.0}), 1.0, Method::spectral};
  const Vector v = resolvent::s_alpha_apply(F, 1.0, Vector::Ones(2));
  CHECK(std::abs(v(0) - std::exp(-1.0)) < 1e-15);
  CHECK(std::abs(v(1) - std::exp(-2.0)) < 1e-15);
  for (double t : {0.3, 1.0, 2.5}) {
    const ResolventFamily C{MatrixOperator::scalar(9.0), 2.0, Method::spectral};
    CHECK(std::abs(resolvent::s_alpha_apply(C, t, Vector::Ones(1))(0) - std::cos(3 * t)) < 1e-12);
    const ResolventFamily H{MatrixOperator::scalar(2.0), 0.5, Method::spectral};
    CHECK(std::abs(resolvent::s_alpha_apply(H, t, Vector::Ones(1))(0) - oracle::ml_half(2 * std::sqrt(t))) < 1e-12);
  }
}

TEST_CASE("contour route") {
  const ResolventFamily F{MatrixOperator::diagonal({1.0, 2.0}), 1.0, Method::contour};
  const Matrix S = resolvent::contour_s_alpha(F, 1.0);
  CHECK(std::abs(S(0, 0) - std::exp(-1.0)) < 1e-8);
  CHECK(std::abs(S(1, 1) - std::exp(-2.0)) < 1e-8);
  CHECK(std::abs(S(0, 1)) < 1e-8);
  const ResolventFamily G{MatrixOperator::scalar(1.0), 1.5, Method::contour};
  CHECK(std::abs(resolvent::contour_s_alpha(G, 1.0)(0, 0) - oracle::mittag_leffler(1.5, 1, -1.0)) < 1e-8);
  const ResolventFamily H{MatrixOperator::scalar(1.0), 0.5, Method::contour};
  CHECK(std::abs(resolvent::contour_s_alpha(H, 4.0)(0, 0) - oracle::ml_half(2.0)) < 1e-8);
}

TEST_CASE("methods agree") {
  Matrix M(3, 3);
  M << 2, 1, 0, 0, 1.5, 0.5, 0.25, 0, 1;
  const MatrixOperator A(M);
  for (double alpha : {0.5, 0.9, 1.0, 1.6}) {
    const double t = 0.7;
    const Matrix s = resolvent::ml_family(A, alpha, 1.0, t, Method::spectral);
    const Matrix c = resolvent::ml_family(A, alpha, 1.0, t, Method::contour);
    const Matrix r = resolvent::ml_family(A, alpha, 1.0, t, Method::series);
    CAPTURE(alpha);
    CHECK((s - c).norm() < 1e-7);
    CHECK((s - r).norm() < 1e-7);
  }
}

TEST_CASE("non-diagonalizable generator") {
  Matrix J(2, 2);
  J << 1, 1, 0, 1;
  const MatrixOperator A(J);
  CHECK(resolvent::default_method(A, 0.5) != Method::spectral);
  // exp(-tJ) = e^{-t}[[1,-t],[0,1]]
  const ResolventFamily F{A, 1.0, resolvent::default_method(A, 1.0)};
  const Matrix S = resolvent::s_alpha(F, 0.8);
  CHECK(std::abs(S(0, 1) + 0.8 * std::exp(-0.8)) < 1e-8);
  CHECK(kind_of([&] { resolvent::s_alpha(ResolventFamily{A, 1.0, Method::spectral}, 0.8); }) ==
        ErrorKind::not_diagonalizable);
}

TEST_CASE("resolvent equation") {
  for (double alpha : {0.5, 1.0, 1.5, 2.0}) {
    const ResolventFamily F{MatrixOperator::diagonal({0.5, 3.0}), alpha, Method::spectral};
    const Vector x = Vector::Ones(2);
    for (double t : {0.1, 1.0, 3.0}) {
      CAPTURE(alpha);
      CAPTURE(t);
      CHECK(resolvent::resolvent_equation_residual(F, t, x) <= 1e-7 * (1 + x.norm()));
    }
    CHECK(resolvent::resolvent_equation_residual(F, 1e-8, x) < 1e-7);
  }
}

TEST_CASE("Laplace identity") {
  const ResolventFamily F{MatrixOperator::scalar(2.0), 1.0, Method::spectral};
  const auto r = resolvent::laplace_identity_residual(F, 1.0, Vector::Ones(1), 20.0);
  CHECK(r.residual <= std::exp(-3.0 * 20.0) / 3.0 * 1.2 + 1e-12);
  const ResolventFamily H{MatrixOperator::scalar(1.0), 0.5, Method::spectral};
  CHECK(resolvent::laplace_identity_residual(H, 1.0, Vector::Ones(1), 200.0).residual <= 1e-6);
  const ResolventFamily C{MatrixOperator::scalar(1.0), 2.0, Method::spectral};
  CHECK(resolvent::laplace_identity_residual(C, 2.0, Vector::Ones(1), 40.0).residual <= 1e-6);
  CHECK(kind_of([&] { resolvent::laplace_identity_residual(H, 1.0, Vector::Ones(1), 0.5); }) ==
        ErrorKind::tail_bound);
}

TEST_CASE("commutation and boundedness") {
  Matrix M(2, 2);
  M << 3, 1, 1, 2;
  const MatrixOperator A(M);
  const ResolventFamily F{A, 0.7, Method::spectral};
  const Matrix S = resolvent::s_alpha(F, 1.3);
  CHECK((S * M - M * S).norm() < 1e-12);
  for (double alpha : {0.3, 0.7, 1.0}) {
    const ResolventFamily G{A, alpha, Method::spectral};
    double sup = 0;
    for (int k = 0; k <= 200; ++k) {
      const Matrix St = resolvent::s_alpha(G, 0.5 * k);
      sup = std::max(sup, Eigen::JacobiSVD<Matrix>(St).singularValues()(0));
    }
    CHECK(sup <= 1 + 1e-9);
  }
}

TEST_CASE("expansion with remainder") {
  // S(t)x = sum_{k<n} g_{k alpha + 1}(t)(-A)^k x + (g_{n alpha} * S)(t)(-A)^n x
  const double alpha = 0.5, lam = 1.5;
  const int n = 2;
  const ResolventFamily F{MatrixOperator::scalar(lam), alpha, Method::spectral};
  for (double t : {0.2, 0.6, 1.0}) {
    double head = 0;
    for (int k = 0; k < n; ++k) head += std::pow(-lam, k) * std::pow(t, k * alpha) / std::tgamma(k * alpha + 1);
    boost::math::quadrature::tanh_sinh<double> ts;
    const double conv = ts.integrate(
        [&](double s) {
          return specfun::g_kernel(n * alpha, t - s) * resolvent::s_alpha(F, s)(0, 0).real();
        },
        0.0, t);
    const double lhs = resolvent::s_alpha(F, t)(0, 0).real();
    CHECK(std::abs(lhs - head - std::pow(-lam, n) * conv) < 1e-7);
  }
}
