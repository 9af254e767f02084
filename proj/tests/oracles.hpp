#pragma once

// Reference values computed independently of the library: extended-precision
// series, closed forms and Boost quadrature.

#include <cmath>
#include <complex>
#include <functional>
#include <limits>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <Eigen/Dense>

namespace oracle {

template <unsigned Digits>
using mp_t = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<Digits>>;

// natural log of the largest series term; precision is picked to cover it
inline double ml_log_peak(double alpha, double r) { return std::pow(r, 1.0 / alpha); }
inline double wright_log_peak(double gamma, double x) {
  return (1 - gamma) * std::pow(std::pow(gamma, gamma) * x, 1.0 / (1 - gamma));
}
inline bool resolvable(double log_peak) { return log_peak < 400.0; }

template <class mp>
mp rgamma(const mp& x) {
  if (x <= 0 && x == floor(x)) return mp(0);
  return 1 / boost::math::tgamma(x);
}

template <class mp>
std::complex<double> ml_series(double alpha, double beta, std::complex<double> z) {
  const mp zr(z.real()), zi(z.imag());
  mp sr = 0, si = 0, pr = 1, pi_ = 0;
  const mp eps = mp(1e-30);
  int small = 0;
  for (int k = 0; k < 5000; ++k) {
    const mp w = rgamma(mp(alpha) * k + mp(beta));
    const mp tr = pr * w, ti = pi_ * w;
    sr += tr;
    si += ti;
    if (abs(tr) + abs(ti) <= eps * (abs(sr) + abs(si) + mp(1e-300))) {
      if (++small >= 3) break;
    } else {
      small = 0;
    }
    const mp nr = pr * zr - pi_ * zi;
    pi_ = pr * zi + pi_ * zr;
    pr = nr;
  }
  return {static_cast<double>(sr), static_cast<double>(si)};
}

template <class mp>
double wright_series(double gamma, double x) {
  const mp g(gamma), zz(x);
  mp sum = 0, power = 1, fact = 1;
  int small = 0;
  for (int n = 0; n < 5000; ++n) {
    if (n > 0) {
      power *= -zz;
      fact *= n;
    }
    const mp term = power / fact * rgamma(1 - g - g * n);
    sum += term;
    if (abs(term) <= mp(1e-30) * (abs(sum) + mp(1e-300)) && n > 5) {
      if (++small >= 4) break;
    } else {
      small = 0;
    }
  }
  return static_cast<double>(sum);
}

/// sum z^k / Gamma(alpha k + beta)
inline std::complex<double> mittag_leffler(double alpha, double beta, std::complex<double> z) {
  const double peak = ml_log_peak(alpha, std::abs(z)) / 2.3;
  if (peak < 15) return ml_series<mp_t<50>>(alpha, beta, z);
  if (peak < 70) return ml_series<mp_t<110>>(alpha, beta, z);
  return ml_series<mp_t<250>>(alpha, beta, z);
}

inline double mittag_leffler(double alpha, double beta, double x) {
  return mittag_leffler(alpha, beta, std::complex<double>(x, 0.0)).real();
}

/// sum (-z)^n / (n! Gamma(1 - gamma - gamma n))
inline double wright_psi(double gamma, double x) {
  const double peak = wright_log_peak(gamma, std::abs(x)) / 2.3;
  if (peak < 15) return wright_series<mp_t<50>>(gamma, x);
  if (peak < 70) return wright_series<mp_t<110>>(gamma, x);
  return wright_series<mp_t<250>>(gamma, x);
}

/// E_{1/2}(-x) = exp(x^2) erfc(x)
inline double ml_half(double x) {
  if (x < 25) return std::exp(x * x) * std::erfc(x);
  // asymptotic expansion of exp(x^2) erfc(x); remainder below 1e-12 relative here
  const double y = 1 / (2 * x * x);
  return (1 - y * (1 - 3 * y * (1 - 5 * y * (1 - 7 * y)))) / (x * std::sqrt(M_PI));
}

inline double phi_half(double t, double s) { return std::exp(-s * s / (4 * t)) / std::sqrt(M_PI * t); }
inline double p_half(double t, double s) {
  return t * std::exp(-t * t / (4 * s)) / (2 * std::sqrt(M_PI) * std::pow(s, 1.5));
}
// distribution function of the index-1/2 one-sided stable law at time t
inline double p_half_cdf(double t, double x) { return std::erfc(t / (2 * std::sqrt(x))); }

// int_0^inf f(s) ds split at `split`, the tail mapped to (0,1] by s = split / v
inline double halfline(const std::function<double(double)>& f, double split = 1.0) {
  boost::math::quadrature::tanh_sinh<double> ts(12);
  const double head = ts.integrate(
      [&](double s) {
        const double val = s > 0 ? f(s) : 0.0;
        return std::isfinite(val) ? val : 0.0;
      },
      0.0, split, 1e-13);
  const double tail = ts.integrate(
      [&](double v) {
        if (v <= 0) return 0.0;
        const double s = split / v;
        const double val = f(s) * split / (v * v);
        return std::isfinite(val) ? val : 0.0;
      },
      0.0, 1.0, 1e-13);
  return head + tail;
}

inline Eigen::MatrixXcd denman_beavers_sqrt(const Eigen::MatrixXcd& A) {
  Eigen::MatrixXcd Y = A, Z = Eigen::MatrixXcd::Identity(A.rows(), A.cols());
  for (int k = 0; k < 60; ++k) {
    const Eigen::MatrixXcd Yn = 0.5 * (Y + Z.inverse());
    Z = 0.5 * (Z + Y.inverse());
    Y = Yn;
  }
  return Y;
}

// principal power of a Hermitian positive definite matrix
inline Eigen::MatrixXcd spd_power(const Eigen::MatrixXcd& A, double b) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(A);
  const Eigen::VectorXd d = es.eigenvalues().array().pow(b);
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace oracle
