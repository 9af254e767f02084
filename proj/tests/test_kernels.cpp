#include <cmath>
#include <sstream>

#include "doctest.h"
#include "fracres/kernels.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace fracres;
using kernels::KernelSpec;
using kernels::Variant;

TEST_CASE("phi kernel") {
  CHECK(kernels::phi_kernel(0.5, 1, 1) == doctest::Approx(0.4393913).epsilon(1e-7));
  CHECK(std::abs(kernels::phi_kernel_integral(0.7, 1, 0.5) - kernels::phi_kernel(0.7, 1, 0.5)) < 1e-7);
  for (double g : {0.3, 0.7})
    for (double t : {0.5, 2.0})
      for (double s : {0.1, 1.0, 3.0}) {
        const double ref = std::pow(t, -g) * oracle::wright_psi(g, s * std::pow(t, -g));
        CHECK(std::abs(kernels::phi_kernel(g, t, s) - ref) < 1e-12 * std::max(1.0, ref));
        const double scaled = std::pow(t, -g) * kernels::phi_kernel(g, 1.0, s * std::pow(t, -g));
        CHECK(std::abs(kernels::phi_kernel(g, t, s) - scaled) <= 1e-12 * std::max(1.0, scaled));
      }
  CHECK(kind_of([] { kernels::phi_kernel(1.0, 1, 1); }) == ErrorKind::parameter_out_of_range);
}

TEST_CASE("p kernel") {
  CHECK(kernels::p_kernel(0.5, 1, 1) == doctest::Approx(0.2196956).epsilon(1e-7));
  const double v = oracle::halfline([](double s) { return std::exp(-s) * kernels::p_kernel(0.6, 1, s); });
  CHECK(v == doctest::Approx(std::exp(-1.0)).epsilon(1e-9));
  for (double s : {0.2, 1.0, 5.0})
    CHECK(std::abs(kernels::p_kernel_yosida(0.6, 1, s, Variant::corrected) - kernels::p_kernel(0.6, 1, s)) < 1e-8);
}

TEST_CASE("half-power kernel") {
  CHECK(kernels::half_power_kernel(1, 1, 1) == doctest::Approx(1 / (2 * M_PI)).epsilon(1e-15));
  CHECK(kernels::half_power_kernel(2, 1, 1) == doctest::Approx(1 / M_PI).epsilon(1e-15));
  for (double a : {0.5, 1.0, 2.0})
    for (double t : {0.5, 2.0})
      CHECK(oracle::halfline([&](double s) { return kernels::half_power_kernel(a, t, s); }, t) ==
            doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("unit mass and nonnegativity") {
  for (double a : {0.3, 0.5, 0.7, 0.9})
    for (double t : {0.5, 1.0, 2.0}) {
      CAPTURE(a);
      CAPTURE(t);
      CHECK(std::abs(kernels::kernel_mass(KernelSpec::phi(a), t) - 1) < 1e-6);
      CHECK(std::abs(kernels::kernel_mass(KernelSpec::p(a), t) - 1) < 1e-6);
      CHECK(std::abs(oracle::halfline([&](double s) { return kernels::p_kernel(a, t, s); }) - 1) < 1e-6);
      for (double s : {1e-3, 0.1, 0.5, 1.0, 4.0, 20.0}) {
        CHECK(kernels::phi_kernel(a, t, s) >= -1e-12);
        CHECK(kernels::p_kernel(a, t, s) >= -1e-12);
        CHECK(kernels::half_power_kernel(2 * a, t, s) >= 0);
      }
    }
}

TEST_CASE("composition kernel") {
  const KernelSpec f = KernelSpec::f(1.0, 0.5, 0.5);
  const double chained =
      oracle::halfline([](double tau) { return tau > 0 ? oracle::phi_half(1, tau) * oracle::p_half(tau, 1) : 0.0; });
  CHECK(std::abs(kernels::f_kernel(f, 1, 1) - chained) < 1e-5);
  // near zero the density behaves like s^{-1/2} / pi
  const double lap = oracle::halfline([&](double s) {
    return std::exp(-s) * (s < 1e-14 ? 1 / (M_PI * std::sqrt(s)) : kernels::f_kernel(f, 1, s));
  });
  CHECK(std::abs(lap - oracle::ml_half(1.0)) < 1e-6);
}

TEST_CASE("gamma one contour and real forms agree") {
  for (double alpha : {0.6, 1.5})
    for (double s : {0.3, 1.0, 3.0}) {
      const KernelSpec f = KernelSpec::f(alpha, 1.0, 0.5);
      CAPTURE(alpha);
      CAPTURE(s);
      CHECK(std::abs(kernels::f_kernel(f, 1, s) - kernels::f_kernel_real(alpha, 0.5, 1, s, Variant::corrected)) <
            1e-6);
    }
}

TEST_CASE("Laplace characterizations") {
  CHECK(kernels::kernel_laplace_check(KernelSpec::phi(0.5), 1, {1.0}).at(0) <= 1e-6);
  CHECK(kernels::kernel_laplace_check(KernelSpec::p(0.5), 1, {0.0}).at(0) <= 1e-8);
  CHECK(kernels::kernel_laplace_check(KernelSpec::half(1.0), 1, {1.0}).at(0) <= 1e-5);
  for (double r : kernels::kernel_laplace_check(KernelSpec::f(1.5, 1.0, 1 / 1.5), 1, {0.5, 1.0})) CHECK(r <= 1e-6);
}

TEST_CASE("real-integral variants") {
  const auto reps = kernels::validate_real_forms();
  REQUIRE(reps.size() == 3);
  for (const auto& r : reps) {
    CAPTURE(r.form);
    CHECK(r.chosen == Variant::corrected);
    CHECK(r.corrected_residual <= 1e-6);
    CHECK(r.corrected_pointwise <= 1e-6);
    CHECK(r.printed_pointwise > 1e-3);
  }
}

TEST_CASE("kernel spec validation") {
  CHECK(kind_of([] { KernelSpec::f(1.0, 0.5, 2.0).validate(); }) == ErrorKind::parameter_out_of_range);
  CHECK(kind_of([] { KernelSpec::f(0.5, 0.5, 1.0).validate(); }) == ErrorKind::parameter_out_of_range);
  CHECK(kind_of([] { KernelSpec::p(1.0).validate(); }) == ErrorKind::parameter_out_of_range);
  CHECK(kind_of([] { kernels::parse_family("q"); }) == ErrorKind::parameter_out_of_range);
}

TEST_CASE("kernel CSV") {
  std::ostringstream os;
  kernels::write_kernel_csv(os, KernelSpec::half(1.0), {1.0}, {1.0, 2.0});
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "family,alpha,beta,gamma,t,s,value");
  std::getline(in, line);
  CHECK(line.rfind("half,1,", 0) == 0);
  CHECK(line.find("0.15915494309189535") != std::string::npos);
}
