#include <cmath>
#include <sstream>

#include "doctest.h"
#include "fracres/linop.hpp"
#include "fracres/stochastic.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace fracres;
using linop::MatrixOperator;

namespace {

Matrix mat2(cplx a, cplx b, cplx c, cplx d) {
  Matrix M(2, 2);
  M << a, b, c, d;
  return M;
}

MatrixOperator spd(int n, std::uint64_t seed) {
  Matrix M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M(i, j) = stochastic::uniform_pair(seed, 7, i * n + j)[1] - 0.5;
  return MatrixOperator(Matrix(M.adjoint() * M + 0.5 * Matrix::Identity(n, n)));
}

}  // namespace

TEST_CASE("resolvent examples") {
  const auto R1 = linop::resolvent(MatrixOperator::diagonal({1.0, 2.0}), 0.0);
  CHECK((R1 - mat2(-1, 0, 0, -0.5)).norm() < 1e-15);
  const auto R2 = linop::resolvent(MatrixOperator(mat2(2, 1, 0, 2)), 3.0);
  CHECK((R2 - mat2(1, 1, 0, 1)).norm() < 1e-14);
  const cplx z(0, 2);
  const auto R3 = linop::resolvent(MatrixOperator::diagonal({1.0, 4.0}), z);
  CHECK((R3 - mat2(1.0 / (z - 1.0), 0, 0, 1.0 / (z - 4.0))).norm() < 1e-15);
  CHECK(kind_of([] { linop::resolvent(MatrixOperator::diagonal({1.0, 2.0}), 2.0); }) ==
        ErrorKind::eigenvalue_collision);
}

TEST_CASE("sector probe") {
  CHECK(linop::sector_probe(MatrixOperator::diagonal({1.0, 4.0})).spectral_angle == 0.0);
  const auto rep = linop::sector_probe(
      MatrixOperator::diagonal({std::polar(1.0, M_PI / 4), std::polar(2.0, -M_PI / 4)}));
  CHECK(rep.spectral_angle == doctest::Approx(M_PI / 4).epsilon(1e-14));
  CHECK(rep.verdict_angle >= rep.spectral_angle);
  // |z/(z-1)| on z = i r is r / sqrt(1 + r^2) < 1
  std::vector<double> radii;
  for (int k = 0; k <= 600; ++k) radii.push_back(std::pow(10.0, -3.0 + 0.01 * k));
  const auto one = linop::sector_probe(MatrixOperator::scalar(1.0), {M_PI / 2}, radii);
  const double dense = 1e3 / std::sqrt(1.0 + 1e6);
  CHECK(one.resolvent_sup.at(0).second == doctest::Approx(dense).epsilon(1e-12));
  CHECK(one.resolvent_sup.at(0).second <= 2.0);
  CHECK(kind_of([] { linop::sector_probe(MatrixOperator::scalar(-1.0)); }) == ErrorKind::negative_real_spectrum);
}

TEST_CASE("fractional power examples") {
  const MatrixOperator D = MatrixOperator::diagonal({1.0, 4.0});
  CHECK((linop::fractional_power(D, 0.5).entries() - mat2(1, 0, 0, 2)).norm() < 1e-10);
  const MatrixOperator J(mat2(4, 1, 0, 4));
  const Matrix root = linop::fractional_power(J, 0.5).entries();
  CHECK((root - mat2(2, 0.25, 0, 2)).norm() < 1e-10);
  CHECK((root - oracle::denman_beavers_sqrt(J.entries())).norm() < 1e-10);
}

TEST_CASE("Balakrishnan against the Hermitian eigen-oracle") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const MatrixOperator A = spd(4, seed);
    for (double b : {0.3, 0.5, 0.8, 1.5, 2.3}) {
      CAPTURE(seed);
      CAPTURE(b);
      CHECK((linop::fractional_power(A, b).entries() - oracle::spd_power(A.entries(), b)).norm() < 1e-8);
    }
  }
}

TEST_CASE("power laws") {
  const MatrixOperator A = spd(3, 11);
  for (double b : {0.3, 0.5})
    for (double c : {0.3, 0.5}) {
      const Matrix lhs = linop::fractional_power(A, b).entries() * linop::fractional_power(A, c).entries();
      CHECK((lhs - linop::fractional_power(A, b + c).entries()).norm() < 1e-8);
    }
  // spectral mapping on a non-normal diagonalizable matrix
  const MatrixOperator N(mat2(1, 3, 0, cplx(2, 1)));
  const Matrix P = linop::fractional_power(N, 0.7).entries();
  Eigen::ComplexEigenSolver<Matrix> es(P);
  std::vector<cplx> got{es.eigenvalues()(0), es.eigenvalues()(1)};
  std::vector<cplx> want{1.0, std::pow(cplx(2, 1), 0.7)};
  std::sort(got.begin(), got.end(), [](cplx a, cplx b) { return std::abs(a) < std::abs(b); });
  for (int i = 0; i < 2; ++i) CHECK(std::abs(got[i] - want[i]) < 1e-8);
}

TEST_CASE("fractional power of a singular matrix") {
  const MatrixOperator S = MatrixOperator::diagonal({0.0, 4.0});
  const Matrix P = linop::fractional_power(S, 0.5).entries();
  CHECK(std::abs(P(0, 0)) < 1e-6);
  CHECK(std::abs(P(1, 1) - 2.0) < 1e-6);
}

TEST_CASE("angle plan") {
  const auto a = linop::angle_plan(2.0, 0.0, 0.5, 1.0);
  CHECK(a.valid);
  CHECK(a.result_angle == doctest::Approx(M_PI / 2));
  for (double alpha : {0.4, 1.0, 1.7}) {
    const auto e = linop::angle_plan(alpha, 0.0, 0.5, alpha / 2);
    CHECK(e.valid);
    CHECK(e.result_angle == doctest::Approx(M_PI / 2));
  }
  for (double beta : {0.2, 0.6, 1.0}) {
    const auto p = linop::angle_plan(1.0, M_PI / 2, beta, 1.0);
    CHECK(p.valid);
    CHECK(p.result_angle == doctest::Approx(M_PI / 2));
  }
  // validity boundary beta < (2 pi - pi gamma) / (2 pi - pi alpha)
  CHECK(linop::angle_plan(1.0, 0.0, 0.99 * 1.5, 0.5).valid);
  CHECK_FALSE(linop::angle_plan(1.0, 0.0, 1.01 * 1.5, 0.5).valid);
  // monotone in beta and gamma
  double prev = 10;
  for (double beta = 0.1; beta < 1.4; beta += 0.1) {
    const auto p = linop::angle_plan(1.0, 0.0, beta, 0.5);
    CHECK(p.result_angle <= prev + 1e-15);
    prev = p.result_angle;
  }
  prev = 10;
  for (double gamma = 0.1; gamma < 1.0; gamma += 0.1) {
    const auto p = linop::angle_plan(1.0, 0.0, 0.5, gamma);
    CHECK(p.result_angle <= prev + 1e-15);
    prev = p.result_angle;
  }
  CHECK(kind_of([] { linop::angle_plan(2.5, 0.0, 0.5, 1.0); }) == ErrorKind::parameter_out_of_range);
}

TEST_CASE("matrix file format") {
  std::istringstream in("# comment\n2\n1 2-0.5i\n# another\n0 3+1e-1i\n");
  const auto A = linop::read_matrix(in);
  CHECK(A.dim() == 2);
  CHECK(A.entries()(0, 1) == cplx(2, -0.5));
  CHECK(A.entries()(1, 1) == cplx(3, 0.1));
  std::istringstream bad("2\n1 x\n0 1\n");
  CHECK(kind_of([&] { linop::read_matrix(bad); }) == ErrorKind::io);
  CHECK(kind_of([] { linop::read_matrix_file("/nonexistent/matrix.txt"); }) == ErrorKind::io);
}
