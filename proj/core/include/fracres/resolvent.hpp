#pragma once

#include "fracres/linop.hpp"
#include "fracres/types.hpp"

namespace fracres::resolvent {

enum class Method { spectral, contour, series };

const char* to_string(Method m);
Method parse_method(const std::string& s);

/// S_alpha(t) = E_alpha(-t^alpha A); -A is the generator.
struct ResolventFamily {
  linop::MatrixOperator generator;
  double alpha = 1.0;
  Method method = Method::spectral;

  void validate() const;
};

/// Spectral for diagonalizable generators, contour otherwise (series when alpha = 2).
Method default_method(const linop::MatrixOperator& A, double alpha);

/// t^{beta-1} E_{alpha,beta}(-t^alpha A), whose Laplace transform is s^{alpha-beta}(s^alpha + A)^{-1}.
Matrix ml_family(const linop::MatrixOperator& A, double alpha, double beta, double t, Method method,
                 const QuadratureConfig& cfg = {});

Matrix s_alpha(const ResolventFamily& F, double t, const QuadratureConfig& cfg = {});
Vector s_alpha_apply(const ResolventFamily& F, double t, const Vector& x, const QuadratureConfig& cfg = {});

/// Hyperbolic-contour evaluation of S_alpha(t) regardless of F.method.
Matrix contour_s_alpha(const ResolventFamily& F, double t, const QuadratureConfig& cfg = {});

/// |S(t)x - x - int_0^t g_alpha(t-s) S(s)(-A)x ds|.
double resolvent_equation_residual(const ResolventFamily& F, double t, const Vector& x,
                                   const QuadratureConfig& cfg = {});

struct LaplaceCheck {
  double residual = 0.0;    ///< includes tail_bound
  double tail_bound = 0.0;  ///< bound on the part of the transform beyond T
};

/// Compares int_0^T e^{-lambda t} S(t)x dt against lambda^{alpha-1}(lambda^alpha + A)^{-1}x.
LaplaceCheck laplace_identity_residual(const ResolventFamily& F, cplx lambda, const Vector& x, double T,
                                       const QuadratureConfig& cfg = {});

}  // namespace fracres::resolvent
