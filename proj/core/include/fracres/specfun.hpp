#pragma once

#include "fracres/trajectory.hpp"
#include "fracres/types.hpp"

namespace fracres::specfun {

struct MLParams {
  double alpha = 1.0;
  double beta = 1.0;

  void validate() const;
};

enum class Regime { series, asymptotic, laplace_inversion };

const char* to_string(Regime r);

/// Thresholds and tolerances for the three-regime evaluator.
struct MLConfig {
  double r0 = 1.0;        ///< series is used unconditionally inside this radius
  double R = 10.0;        ///< lower bound for the asymptotic radius
  int N = 0;              ///< asymptotic terms; 0 selects ceil(10/alpha)
  double tol = 1e-12;     ///< acceptance for the series outside r0
  double tol_abs = 1e-14;
  double asym_tol = 1e-12;

  void validate() const;
  int terms(double alpha) const;
};

/// Selected regime and the thresholds that led to it.
struct EvalRegime {
  Regime tag = Regime::series;
  double r0 = 1.0;
  double R = 10.0;
  int N = 1;
};

double rgamma(double x);

/// E_{alpha,beta}(z).
cplx mittag_leffler(const MLParams& p, cplx z, const MLConfig& cfg = {});
double mittag_leffler(const MLParams& p, double x, const MLConfig& cfg = {});
inline double mittag_leffler(double alpha, double x) { return mittag_leffler(MLParams{alpha, 1.0}, x); }

/// Regime that mittag_leffler would use at z.
EvalRegime select_regime(const MLParams& p, cplx z, const MLConfig& cfg = {});

/// Evaluates in a fixed regime; used to cross-check regimes on overlaps.
cplx mittag_leffler_in(const MLParams& p, cplx z, Regime regime, const MLConfig& cfg = {});

/// Smallest radius >= cfg.R beyond which the N-term expansion meets asym_tol.
double asymptotic_radius(const MLParams& p, const MLConfig& cfg = {});

/// Psi_gamma(z) = sum_n (-z)^n / (n! Gamma(1 - gamma - gamma n)).
cplx wright_psi(double gamma, cplx z);
double wright_psi(double gamma, double x);

/// t^{beta-1} / Gamma(beta).
double g_kernel(double beta, double t);

/// L1 approximation of the Caputo derivative at t_1..t_N of a uniform grid starting at 0.
Trajectory caputo_l1(const Trajectory& samples, double alpha);

}  // namespace fracres::specfun
