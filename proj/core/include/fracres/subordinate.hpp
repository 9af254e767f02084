#pragma once

#include <vector>

#include "fracres/kernels.hpp"
#include "fracres/linop.hpp"
#include "fracres/resolvent.hpp"
#include "fracres/types.hpp"

namespace fracres::subordinate {

/// Data for the identity S_gamma^beta(t)x = int f_{alpha,gamma}^beta(t,s) S_alpha(s)x ds,
/// where S_gamma^beta is the gamma-times family generated by -A^beta.
struct SubordinationCase {
  linop::MatrixOperator A;
  double alpha = 1.0;
  double beta = 0.5;
  double gamma = 0.5;
  std::vector<double> t_grid;
  Vector x;

  void validate() const;
};

/// int_0^inf kernel(t,s) S_alpha(s)x ds. The kernel's source order must equal F.alpha.
/// alpha = 2 (cosine families) is integrated per eigencomponent with
/// half-period acceleration and needs a real nonnegative spectrum.
Vector subordinate_apply(const resolvent::ResolventFamily& F, const kernels::KernelSpec& kernel, double t,
                         const Vector& x, const QuadratureConfig& cfg = {});

/// E_gamma(-t^gamma A^beta): spectral when A is diagonalizable, otherwise the
/// Balakrishnan power followed by the contour family.
Matrix direct_side(const linop::MatrixOperator& A, double beta, double gamma, double t,
                   const QuadratureConfig& cfg = {});

/// Residual norm of the subordination identity for each t in the case's grid.
std::vector<double> verify_theorem_main(const SubordinationCase& c, const QuadratureConfig& cfg = {});

/// (1/2 pi i) int over the keyhole path of E_gamma(-mu^beta t^gamma)(mu - A)^{-1} dmu.
/// Needs 0 outside the spectrum unless beta = 1.
Matrix dunford_s_gamma_beta(const linop::MatrixOperator& A, double beta, double gamma, double t,
                            const QuadratureConfig& cfg = {});

}  // namespace fracres::subordinate
