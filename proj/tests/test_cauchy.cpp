#include <cmath>

#include "doctest.h"
#include "fracres/cauchy.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace fracres;
using cauchy::CauchyProblem;
using cauchy::Sign;
using linop::MatrixOperator;

namespace {

CauchyProblem scalar_problem(double a, double alpha, std::vector<Vector> x, double T, int n) {
  CauchyProblem p{MatrixOperator::scalar(a), alpha, Sign::minus, std::move(x), cauchy::uniform_grid(T, n), {}};
  return p;
}

Vector v1(double x) { return Vector::Constant(1, x); }

}  // namespace

TEST_CASE("homogeneous problem reproduces classical solutions") {
  const double rho = 2.0, w = std::sqrt(rho);
  const auto c = cauchy::solve_homogeneous(scalar_problem(rho, 2.0, {v1(1), v1(0)}, 3, 30));
  const auto s = cauchy::solve_homogeneous(scalar_problem(rho, 2.0, {v1(0), v1(1)}, 3, 30));
  for (std::size_t k = 0; k < c.size(); ++k) {
    const double t = c.grid[k];
    CHECK(std::abs(c.states[k](0) - std::cos(w * t)) < 1e-10);
    CHECK(std::abs(s.states[k](0) - std::sin(w * t) / w) < 1e-10);
  }
  Matrix M(2, 2);
  M << 1, 2, 0, 3;
  CauchyProblem p{MatrixOperator(M), 1.0, Sign::minus, {Vector::Ones(2)}, cauchy::uniform_grid(1, 10), {}};
  const auto e = cauchy::solve_homogeneous(p);
  for (std::size_t k = 0; k < e.size(); ++k) {
    const double t = e.grid[k];
    const double off = -(std::exp(-t) - std::exp(-3 * t));
    CHECK(std::abs(e.states[k](0) - (std::exp(-t) + off)) < 1e-10);
    CHECK(std::abs(e.states[k](1) - std::exp(-3 * t)) < 1e-10);
  }
}

TEST_CASE("fractional homogeneous solution matches the series") {
  for (double alpha : {0.4, 0.7, 1.3}) {
    std::vector<Vector> x{v1(1)};
    if (alpha > 1) x.push_back(v1(0.5));
    const auto u = cauchy::solve_homogeneous(scalar_problem(1.5, alpha, x, 2, 8));
    for (std::size_t k = 0; k < u.size(); ++k) {
      const double t = u.grid[k];
      double ref = oracle::mittag_leffler(alpha, 1, -1.5 * std::pow(t, alpha));
      if (alpha > 1) ref += 0.5 * t * oracle::mittag_leffler(alpha, 2, -1.5 * std::pow(t, alpha));
      CAPTURE(alpha);
      CAPTURE(t);
      CHECK(std::abs(u.states[k](0).real() - ref) < 1e-9);
    }
  }
}

TEST_CASE("Caputo residual shrinks under refinement") {
  double prev = INFINITY;
  for (int n : {50, 200, 800}) {
    const auto u = cauchy::solve_homogeneous(scalar_problem(1.0, 0.5, {v1(1)}, 1, n));
    REQUIRE(u.residual_caputo.has_value());
    CHECK(std::isnan(u.residual_caputo->front()));
    double worst = 0;
    for (std::size_t k = 0; k < u.size(); ++k)
      if (u.grid[k] >= 0.5) worst = std::max(worst, (*u.residual_caputo)[k]);
    CHECK(worst < prev);
    prev = worst;
  }
  CHECK(prev < 1e-3);
}

TEST_CASE("mild solution with constant forcing") {
  // u = t^alpha E_{alpha,alpha+1}(-a t^alpha) for u(0) = 0, f = 1
  const double a = 1.2;
  for (double alpha : {0.5, 0.8}) {
    auto p = scalar_problem(a, alpha, {v1(0)}, 2, 40);
    p.forcing = std::vector<Vector>(p.grid.size(), v1(1));
    const auto u = cauchy::solve_inhomogeneous_mild(p);
    for (std::size_t k = 0; k < u.size(); ++k) {
      const double t = u.grid[k];
      const double ref = std::pow(t, alpha) * oracle::mittag_leffler(alpha, alpha + 1, -a * std::pow(t, alpha));
      CAPTURE(alpha);
      CAPTURE(t);
      CHECK(std::abs(u.states[k](0).real() - ref) < 1e-8);
    }
  }
}

TEST_CASE("mild solution with linear forcing at alpha one") {
  // u' = -u + t, u(0) = 1:  u = t - 1 + 2 e^{-t}
  auto p = scalar_problem(1.0, 1.0, {v1(1)}, 2, 20);
  std::vector<Vector> f;
  for (double t : p.grid) f.push_back(v1(t));
  p.forcing = f;
  const auto u = cauchy::solve_inhomogeneous_mild(p);
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double t = u.grid[k];
    CHECK(std::abs(u.states[k](0).real() - (t - 1 + 2 * std::exp(-t))) < 1e-9);
  }
}

TEST_CASE("one-over-m companion problem") {
  for (int m : {2, 3}) {
    auto p = scalar_problem(1.0, 1.0 / m, {v1(1)}, 2, 200);
    const auto r = cauchy::check_one_over_m(p);
    CAPTURE(m);
    CHECK(r.max_error <= 1e-4);
    REQUIRE(r.companion.size() == r.fractional.size());
    for (std::size_t k = 0; k < r.companion.size(); k += 20) {
      const double t = r.companion.grid[k];
      const double ref = oracle::mittag_leffler(1.0 / m, 1, -std::pow(t, 1.0 / m));
      CHECK(std::abs(r.companion.states[k](0).real() - ref) < 1e-4);
      CHECK(std::abs(r.fractional.states[k](0).real() - ref) < 1e-9);
    }
  }
  CauchyProblem d{MatrixOperator::diagonal({1.0, 2.0}), 0.5, Sign::minus, {Vector::Ones(2)},
                  cauchy::uniform_grid(2, 200), {}};
  CHECK(cauchy::check_one_over_m(d).max_error <= 1e-4);
  CHECK(kind_of([] { cauchy::check_one_over_m(scalar_problem(1.0, 0.4, {v1(1)}, 1, 10)); }) ==
        ErrorKind::parameter_out_of_range);
}

TEST_CASE("inhomogeneous one-over-m residuals") {
  CauchyProblem p{MatrixOperator::scalar(-1.0), 0.5, Sign::plus, {v1(1)}, cauchy::uniform_grid(2, 2000), {}};
  std::vector<Vector> f;
  for (double t : p.grid) f.push_back(v1(std::cos(t)));
  p.forcing = f;
  const auto r = cauchy::inhomogeneous_one_over_m(p);
  CHECK(r.fractional <= 1e-3);
  CHECK(r.first_order <= 1e-3);
  CauchyProblem z{MatrixOperator::scalar(0.0), 0.5, Sign::plus, {v1(0)}, cauchy::uniform_grid(1, 200),
                  std::vector<Vector>(201, v1(0))};
  const auto r0 = cauchy::inhomogeneous_one_over_m(z);
  CHECK(r0.fractional < 1e-14);
  CHECK(r0.first_order < 1e-14);
}

TEST_CASE("discrete Dirichlet Laplacian") {
  const int N = 9;
  const Matrix L = cauchy::dirichlet_laplacian(N);
  const double h = 0.1;
  CHECK(std::abs(L(0, 0).real() - 2 / (h * h)) < 1e-9);
  CHECK(std::abs(L(0, 1).real() + 1 / (h * h)) < 1e-9);
  CHECK(L(0, 2) == cplx(0));
  CHECK((L - L.transpose()).norm() == 0);
  Vector s(N);
  for (int j = 0; j < N; ++j) s(j) = std::sin(M_PI * (j + 1) * h);
  const double mu = 4 / (h * h) * std::pow(std::sin(M_PI * h / 2), 2);
  CHECK((L * s - mu * s).norm() < 1e-9);
  CHECK(kind_of([] { cauchy::dirichlet_laplacian(0); }) == ErrorKind::parameter_out_of_range);
}

TEST_CASE("fractional diffusion routes agree") {
  const int N = 32;
  RealVector f0(N);
  for (int j = 0; j < N; ++j) {
    const double x = (j + 1.0) / (N + 1);
    f0(j) = x * (1 - x);
  }
  const auto r = cauchy::fractional_diffusion_demo(N, 0.5, 1.0, f0);
  CHECK(r.discrepancy <= 1e-3);
  CHECK(r.h == doctest::Approx(1.0 / (N + 1)));
  CHECK(r.subordinated.size() == r.stepped.size());
  CHECK(r.subordinated.grid.back() == doctest::Approx(1.0));
  const auto c = cauchy::fractional_diffusion_demo(N, 1.0, 0.1, f0, 4000);
  CHECK(c.discrepancy <= 1e-6);
}

TEST_CASE("problem validation") {
  CHECK(kind_of([] { scalar_problem(1, 2.5, {v1(1), v1(0), v1(0)}, 1, 4).validate(); }) ==
        ErrorKind::parameter_out_of_range);
  CHECK(kind_of([] { scalar_problem(1, 1.5, {v1(1)}, 1, 4).validate(); }) == ErrorKind::parameter_out_of_range);
  CHECK(kind_of([] {
          auto p = scalar_problem(1, 0.5, {v1(1)}, 1, 4);
          p.grid[2] += 0.01;
          p.validate();
        }) == ErrorKind::grid);
  CHECK(kind_of([] { cauchy::uniform_grid(-1, 4); }) == ErrorKind::grid);
}
