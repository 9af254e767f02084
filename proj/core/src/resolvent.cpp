#include "fracres/resolvent.hpp"

#include <cmath>

#include "fracres/error.hpp"
#include "fracres/quadrature.hpp"
#include "fracres/specfun.hpp"

namespace fracres::resolvent {

using linop::MatrixOperator;

const char* to_string(Method m) {
  switch (m) {
    case Method::spectral: return "spectral";
    case Method::contour: return "contour";
    case Method::series: return "series";
  }
  return "?";
}

Method parse_method(const std::string& s) {
  if (s == "spectral") return Method::spectral;
  if (s == "contour") return Method::contour;
  if (s == "series") return Method::series;
  fail(ErrorKind::parameter_out_of_range, "unknown method '" + s + "'");
}

void ResolventFamily::validate() const {
  require(alpha > 0 && alpha <= 2, ErrorKind::parameter_out_of_range, "alpha must lie in (0,2]");
}

Method default_method(const MatrixOperator& A, double alpha) {
  if (A.diagonalizable()) return Method::spectral;
  return alpha < 2.0 ? Method::contour : Method::series;
}

namespace {

Matrix series_route(const MatrixOperator& A, double alpha, double beta, double t) {
  const double ta = std::pow(t, alpha);
  require(ta * A.norm() <= 30.0, ErrorKind::series_divergence, "t^alpha |A| exceeds 30 on the series route");
  using cld = std::complex<long double>;
  using MatL = Eigen::Matrix<cld, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index n = A.dim();
  const MatL B = (-static_cast<long double>(ta)) * A.entries().cast<cld>();
  MatL pw = MatL::Identity(n, n), sum = MatL::Zero(n, n);
  long double bound = 1.0L;
  const long double x = ta * A.norm();
  for (int k = 0; k < 4000; ++k) {
    const long double rg = specfun::rgamma(alpha * k + beta);
    sum += pw * rg;
    if (k > x / alpha + 2 && bound * std::abs(rg) < 1e-22L) break;
    pw = pw * B;
    bound *= x;
  }
  return sum.cast<cplx>() * std::pow(t, beta - 1.0);
}

Matrix contour_route(const MatrixOperator& A, double alpha, double beta, double t, const QuadratureConfig& cfg) {
  const double theta0 = linop::analytic_angle_from_sector(linop::spectral_angle(A), alpha);
  require(theta0 > 1e-3, ErrorKind::sectoriality, "contour route needs an analytic family (theta0 > 0)");
  const double delta = 0.5 * theta0;
  const double mu = 2.0 / t;
  const Eigen::Index n = A.dim();
  const Matrix I = Matrix::Identity(n, n);
  auto g = [&](double u) -> Matrix {
    const cplx w = cplx(-delta, u);  // i u - delta
    const cplx lam = mu * (1.0 + std::sin(w));
    if ((lam * t).real() < -740.0) return Matrix::Zero(n, n);
    Matrix M = A.entries();
    M.diagonal().array() += std::pow(lam, alpha);
    const cplx scal = std::exp(lam * t) * std::pow(lam, alpha - beta) * std::cos(w);
    return scal * M.partialPivLu().solve(I);
  };
  const auto r = quad::trapezoid_line(g, 0.25, cfg, 10, 40.0);
  require(r.converged, ErrorKind::quadrature_failure, "contour quadrature did not converge");
  return r.value * (mu / (2.0 * pi));
}

}  // namespace

Matrix ml_family(const MatrixOperator& A, double alpha, double beta, double t, Method method,
                 const QuadratureConfig& cfg) {
  require(alpha > 0 && alpha <= 2, ErrorKind::parameter_out_of_range, "alpha must lie in (0,2]");
  require(beta > 0, ErrorKind::parameter_out_of_range, "beta must be > 0");
  require(std::isfinite(t) && t >= 0, ErrorKind::domain, "t must be >= 0");
  const Eigen::Index n = A.dim();
  if (t == 0.0) {
    require(beta >= 1.0, ErrorKind::domain, "t^{beta-1} is singular at t = 0");
    return beta == 1.0 ? Matrix(Matrix::Identity(n, n)) : Matrix(Matrix::Zero(n, n));
  }
  switch (method) {
    case Method::spectral: {
      const double ta = std::pow(t, alpha), tb = std::pow(t, beta - 1.0);
      const specfun::MLParams p{alpha, beta};
      return A.apply_function([&](cplx a) { return tb * specfun::mittag_leffler(p, -ta * a); });
    }
    case Method::series: return series_route(A, alpha, beta, t);
    case Method::contour: return contour_route(A, alpha, beta, t, cfg);
  }
  return {};
}

Matrix s_alpha(const ResolventFamily& F, double t, const QuadratureConfig& cfg) {
  F.validate();
  return ml_family(F.generator, F.alpha, 1.0, t, F.method, cfg);
}

Vector s_alpha_apply(const ResolventFamily& F, double t, const Vector& x, const QuadratureConfig& cfg) {
  require(x.size() == F.generator.dim(), ErrorKind::parameter_out_of_range, "vector dimension mismatch");
  return s_alpha(F, t, cfg) * x;
}

Matrix contour_s_alpha(const ResolventFamily& F, double t, const QuadratureConfig& cfg) {
  F.validate();
  require(t > 0, ErrorKind::domain, "t must be > 0");
  return contour_route(F.generator, F.alpha, 1.0, t, cfg);
}

double resolvent_equation_residual(const ResolventFamily& F, double t, const Vector& x,
                                   const QuadratureConfig& cfg) {
  F.validate();
  require(t > 0, ErrorKind::domain, "t must be > 0");
  const Vector Ax = -(F.generator.entries() * x);
  // s = t - sigma puts the kernel singularity at the left end.
  auto integrand = [&](double sigma) -> Vector {
    return specfun::g_kernel(F.alpha, sigma) * s_alpha_apply(F, t - sigma, Ax, cfg);
  };
  QuadratureConfig qc = cfg;
  qc.rel_tol = std::min(cfg.rel_tol, 1e-10);
  const auto r = quad::tanh_sinh(integrand, 0.0, t, qc, 10);
  require(r.converged, ErrorKind::quadrature_failure, "resolvent-equation quadrature did not converge");
  return (s_alpha_apply(F, t, x, cfg) - x - r.value).norm();
}

LaplaceCheck laplace_identity_residual(const ResolventFamily& F, cplx lambda, const Vector& x, double T,
                                       const QuadratureConfig& cfg) {
  F.validate();
  require(lambda.real() > 0, ErrorKind::domain, "Re lambda must be > 0");
  require(T > 0, ErrorKind::domain, "T must be > 0");
  const MatrixOperator& A = F.generator;
  const Eigen::Index n = A.dim();

  double sup = 0.0;
  for (int k = 0; k <= 20; ++k) sup = std::max(sup, s_alpha(F, T * std::pow(10.0, 0.1 * k), cfg).norm());
  LaplaceCheck out;
  out.tail_bound = 1.1 * sup * x.norm() * std::exp(-lambda.real() * T) / lambda.real();
  require(out.tail_bound <= 1e-3 * std::max(1.0, x.norm()), ErrorKind::tail_bound,
          "horizon T too short for the transform tail");

  auto integrand = [&](double t) -> Vector { return std::exp(-lambda * t) * s_alpha_apply(F, t, x, cfg); };
  QuadratureConfig qc = cfg;
  qc.rel_tol = std::min(cfg.rel_tol, 1e-10);
  // Split so the transient near t = 0 is resolved apart from the decaying tail.
  const double split = std::min(T, 1.0 / lambda.real());
  const auto head = quad::tanh_sinh(integrand, 0.0, split, qc, 10);
  const auto rest = quad::gauss_kronrod(integrand, split, T, qc);
  require(head.converged && rest.converged, ErrorKind::quadrature_failure, "Laplace quadrature did not converge");

  Matrix M = A.entries();
  M.diagonal().array() += std::pow(lambda, F.alpha);
  const Vector exact = std::pow(lambda, F.alpha - 1.0) * M.partialPivLu().solve(Matrix::Identity(n, n)) * x;
  out.residual = (head.value + rest.value - exact).norm() + out.tail_bound;
  return out;
}

}  // namespace fracres::resolvent
