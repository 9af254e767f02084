#pragma once

#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace fracres {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double pi = std::numbers::pi;

/// Tolerances and limits shared by the improper, contour and finite-range integrators.
struct QuadratureConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  double truncation = 1e3;  ///< upper horizon used where an integral is cut off explicitly
  int max_subdiv = 2000;

  void validate() const;
};

}  // namespace fracres
