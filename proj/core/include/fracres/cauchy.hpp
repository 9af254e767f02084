#pragma once

#include <optional>
#include <vector>

#include "fracres/linop.hpp"
#include "fracres/resolvent.hpp"
#include "fracres/trajectory.hpp"
#include "fracres/types.hpp"

namespace fracres::cauchy {

/// minus: D_t^alpha u = -A u + f.  plus: D_t^alpha u = A u + f.
enum class Sign { minus, plus };

struct CauchyProblem {
  linop::MatrixOperator A;
  double alpha = 1.0;
  Sign sign = Sign::minus;
  std::vector<Vector> initial_values;        ///< x_0 .. x_{m-1}
  std::vector<double> grid;                  ///< uniform, starting at 0
  std::optional<std::vector<Vector>> forcing;  ///< f sampled on the grid

  int m() const;
  void validate() const;
  /// G with D_t^alpha u = -G u + f.
  linop::MatrixOperator generator() const;
};

/// n + 1 equally spaced points on [0, T].
std::vector<double> uniform_grid(double T, int n);

/// u(t) = sum_k t^k E_{alpha,k+1}(-t^alpha G) x_k. For alpha <= 1 the L1
/// residual |D u + G u| is attached (NaN at t = 0).
Trajectory solve_homogeneous(const CauchyProblem& p, const QuadratureConfig& cfg = {});

/// Homogeneous part plus d/dt (g_alpha * S_alpha * f), evaluated as the
/// convolution of f with t^{alpha-1} E_{alpha,alpha}(-t^alpha G) by product
/// integration exact for piecewise-linear f.
Trajectory solve_inhomogeneous_mild(const CauchyProblem& p, const QuadratureConfig& cfg = {});

struct OneOverMResult {
  Trajectory fractional;  ///< S_{1/m}(t)x on grid points >= t0
  Trajectory companion;   ///< integrated first-order companion problem on the same points
  double max_error = 0.0;
};

/// alpha = 1/m, m in {2,3,4}. The companion problem
/// v' = B^m v + sum_{k=1}^{m-1} g_{k/m}(t) B^k x with B = -G starts at t0 from
/// the series expansion of S_{1/m}(t0)x.
OneOverMResult check_one_over_m(const CauchyProblem& p, double t0 = 1e-4, const QuadratureConfig& cfg = {});

struct InhomogeneousResidual {
  double fractional = 0.0;   ///< L1 residual of D^{1/m} w = B w + g_{1-1/m} * f
  double first_order = 0.0;  ///< central-difference residual of the companion equation
};

/// w = S_{1/m}x + S_{1/m} * f, checked against both equations on grid points >= t_from.
InhomogeneousResidual inhomogeneous_one_over_m(const CauchyProblem& p, double t_from = 0.05,
                                               const QuadratureConfig& cfg = {});

/// -Delta_h on N interior points of (0,1) with zero boundary values.
Matrix dirichlet_laplacian(int N);

struct DiffusionResult {
  Trajectory subordinated;  ///< int phi_alpha(t,s) e^{s Delta_h} f0 ds
  Trajectory stepped;       ///< Richardson-extrapolated implicit L1 stepper
  double discrepancy = 0.0;  ///< relative max-norm gap at T
  double h = 0.0;
};

/// Time-fractional heat equation D_t^alpha u = Delta_h u, u(0) = f0, by two
/// independent routes. `outputs` evenly spaced times (ending at T) are reported.
DiffusionResult fractional_diffusion_demo(int N, double alpha, double T, const RealVector& f0, int steps = 2000,
                                          int outputs = 10, const QuadratureConfig& cfg = {});

}  // namespace fracres::cauchy
