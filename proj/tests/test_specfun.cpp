#include <cmath>

#include "doctest.h"
#include "fracres/error.hpp"
#include "fracres/specfun.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace fracres;
using specfun::MLParams;

TEST_CASE("Mittag-Leffler reference values") {
  CHECK(specfun::mittag_leffler(MLParams{1, 1}, 1.0) == doctest::Approx(std::exp(1.0)).epsilon(1e-15));
  CHECK(specfun::mittag_leffler(MLParams{2, 1}, -M_PI * M_PI) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(std::abs(specfun::mittag_leffler(0.5, -1.0) - oracle::mittag_leffler(0.5, 1, -1.0)) < 1e-14);
  CHECK(specfun::mittag_leffler(0.5, -1.0) == doctest::Approx(0.4275836).epsilon(1e-7));
}

TEST_CASE("Mittag-Leffler against the extended-precision series") {
  for (double alpha : {0.3, 0.5, 0.8, 1.5, 1.9})
    for (double beta : {1.0, alpha + 0.5})
      for (double r : {0.9, 3.0, 9.5, 10.5, 20.0})
        for (double arg : {0.0, 1.6, 2.5, M_PI}) {
          if (!oracle::resolvable(oracle::ml_log_peak(alpha, r))) continue;
          const std::complex<double> z = std::polar(r, arg);
          const auto ref = oracle::mittag_leffler(alpha, beta, z);
          if (std::abs(ref) > 1e200) continue;
          const auto got = specfun::mittag_leffler(MLParams{alpha, beta}, z);
          CAPTURE(alpha);
          CAPTURE(beta);
          CAPTURE(r);
          CAPTURE(arg);
          CHECK(std::abs(got - ref) <= 1e-8 * std::max(1.0, std::abs(ref)));
        }
}

TEST_CASE("regimes agree across the asymptotic radius") {
  for (double alpha : {0.5, 0.8, 1.5})
    for (double beta : {1.0, alpha}) {
      const MLParams p{alpha, beta};
      const double R = specfun::asymptotic_radius(p);
      for (double r : {0.97 * R, 1.03 * R})
        for (double arg : {0.0, 1.0, 2.0, M_PI}) {
          const std::complex<double> z = std::polar(r, arg);
          const auto a = specfun::mittag_leffler_in(p, z, specfun::Regime::asymptotic);
          const auto b = specfun::mittag_leffler_in(p, z, specfun::Regime::laplace_inversion);
          CAPTURE(alpha);
          CAPTURE(r);
          CAPTURE(arg);
          CHECK(std::abs(a - b) <= 1e-7 * std::max(1.0, std::abs(b)));
        }
    }
}

TEST_CASE("regime selection") {
  CHECK(specfun::select_regime(MLParams{0.5, 1}, 0.5).tag == specfun::Regime::series);
  CHECK(specfun::select_regime(MLParams{0.5, 1}, -50.0).tag == specfun::Regime::asymptotic);
}

TEST_CASE("Mittag-Leffler parameter validation") {
  CHECK(kind_of([] { specfun::mittag_leffler(MLParams{0, 1}, 1.0); }) == ErrorKind::parameter_out_of_range);
  CHECK(kind_of([] { specfun::mittag_leffler(MLParams{1, -1}, 1.0); }) == ErrorKind::parameter_out_of_range);
}

TEST_CASE("Wright function") {
  CHECK(specfun::wright_psi(0.5, 0.0) == doctest::Approx(1 / std::sqrt(M_PI)).epsilon(1e-15));
  CHECK(specfun::wright_psi(0.5, 1.0) == doctest::Approx(0.4393913).epsilon(1e-7));
  for (double g : {0.3, 0.5, 0.7})
    for (double x : {0.0, 0.5, 2.0, 5.0, 10.0, 20.0, 30.0}) {
      if (!oracle::resolvable(oracle::wright_log_peak(g, x))) continue;
      const double ref = oracle::wright_psi(g, x);
      CAPTURE(g);
      CAPTURE(x);
      CHECK(std::abs(specfun::wright_psi(g, x) - ref) <= 1e-10 * std::max(1e-3, std::abs(ref)));
    }
  CHECK(kind_of([] { specfun::wright_psi(1.0, 1.0); }) == ErrorKind::parameter_out_of_range);
}

TEST_CASE("Wright transform gives Mittag-Leffler") {
  for (double g : {0.3, 0.5, 0.7})
    for (double z : {-5.0, -2.0, -1.0, 0.0}) {
      const double v = oracle::halfline([&](double t) { return specfun::wright_psi(g, t) * std::exp(z * t); });
      CAPTURE(g);
      CAPTURE(z);
      CHECK(std::abs(v - oracle::mittag_leffler(g, 1, z)) < 1e-6);
    }
}

TEST_CASE("g kernel") {
  CHECK(specfun::g_kernel(1, 7.3) == doctest::Approx(1.0));
  CHECK(specfun::g_kernel(0.5, 1) == doctest::Approx(0.5641895835).epsilon(1e-10));
  CHECK(specfun::g_kernel(2, 3) == doctest::Approx(3.0));
  CHECK(kind_of([] { specfun::g_kernel(0, 1); }) == ErrorKind::symbolic_delta);
  CHECK(kind_of([] { specfun::g_kernel(1, 0); }) == ErrorKind::domain);
}

namespace {

Trajectory sampled(int n, double T, const std::function<double(double)>& u) {
  std::vector<double> grid(n + 1), vals(n + 1);
  for (int j = 0; j <= n; ++j) {
    grid[j] = T * j / n;
    vals[j] = u(grid[j]);
  }
  return Trajectory::scalar(grid, vals);
}

double l1_error(int n, double alpha, const std::function<double(double)>& u, const std::function<double(double)>& du) {
  const auto d = specfun::caputo_l1(sampled(n, 1.0, u), alpha);
  double worst = 0;
  for (std::size_t j = 0; j < d.size(); ++j) worst = std::max(worst, std::abs(d.states[j](0).real() - du(d.grid[j])));
  return worst;
}

}  // namespace

TEST_CASE("L1 Caputo scheme") {
  auto lin = [](double t) { return t; };
  auto dlin = [](double t) { return 2 * std::sqrt(t / M_PI); };
  CHECK(l1_error(200, 0.5, lin, dlin) < 1e-12);
  CHECK(l1_error(200, 0.5, [](double) { return 3.0; }, [](double) { return 0.0; }) == 0.0);
  auto sq = [](double t) { return t * t; };
  auto dsq = [](double t) { return 2 * std::pow(t, 1.5) / std::tgamma(2.5); };
  const double e1 = l1_error(100, 0.5, sq, dsq), e2 = l1_error(200, 0.5, sq, dsq);
  CHECK(e1 / e2 > std::pow(2.0, 1.5) * 0.9);
  auto ml = [](double t) { return oracle::ml_half(std::sqrt(t)); };
  const auto d = specfun::caputo_l1(sampled(400, 1.0, ml), 0.5);
  for (std::size_t j = 40; j < d.size(); j += 40) CHECK(std::abs(d.states[j](0).real() + ml(d.grid[j])) < 5e-3);
  const auto back = specfun::caputo_l1(sampled(10, 1.0, sq), 1.0);
  CHECK(back.states[4](0).real() == doctest::Approx((0.25 - 0.16) / 0.1));
  Trajectory bad = sampled(4, 1.0, lin);
  bad.grid[2] = 0.6;
  CHECK(kind_of([&] { specfun::caputo_l1(bad, 0.5); }) == ErrorKind::grid);
}
