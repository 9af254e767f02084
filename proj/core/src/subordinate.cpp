#include "fracres/subordinate.hpp"

#include <cmath>

#include "fracres/error.hpp"
#include "fracres/quadrature.hpp"
#include "fracres/specfun.hpp"

namespace fracres::subordinate {

using kernels::KernelSpec;
using linop::MatrixOperator;
using resolvent::ResolventFamily;

void SubordinationCase::validate() const {
  const KernelSpec k = KernelSpec::f(alpha, gamma, beta);
  k.validate();
  require(x.size() == A.dim(), ErrorKind::parameter_out_of_range, "vector dimension mismatch");
  require(!t_grid.empty(), ErrorKind::grid, "empty t grid");
  for (double t : t_grid) require(std::isfinite(t) && t > 0, ErrorKind::grid, "t grid must be positive");
  const double theta = linop::spectral_angle(A);
  require(theta <= pi - 0.5 * alpha * pi + 1e-12, ErrorKind::sectoriality,
          "spectral angle exceeds pi - alpha pi/2");
}

namespace {

Vector cosine_route(const ResolventFamily& F, const std::function<double(double)>& k, double t, double scale_gamma,
                    const Vector& x, const QuadratureConfig& cfg) {
  const MatrixOperator& A = F.generator;
  require(A.diagonalizable(), ErrorKind::not_diagonalizable, "cosine-family subordination needs a diagonalizable generator");
  const Vector y = A.eigenvectors_inverse() * x;
  Vector w(y.size());
  const double scale = std::pow(t, scale_gamma);
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const cplx l = A.eigenvalues()(i);
    require(std::abs(l.imag()) <= 1e-12 * std::max(1.0, std::abs(l)) && l.real() > -1e-12 * A.norm(),
            ErrorKind::sectoriality, "cosine family needs a real nonnegative spectrum");
    w(i) = y(i) * kernels::integrate_against_source(k, 2.0, std::max(0.0, l.real()), cfg, scale);
  }
  return A.eigenvectors() * w;
}

}  // namespace

Vector subordinate_apply(const ResolventFamily& F, const KernelSpec& kernel, double t, const Vector& x,
                         const QuadratureConfig& cfg) {
  F.validate();
  kernel.validate();
  require(std::isfinite(t) && t > 0, ErrorKind::domain, "t must be > 0");
  require(x.size() == F.generator.dim(), ErrorKind::parameter_out_of_range, "vector dimension mismatch");
  const kernels::LaplacePair lp = kernels::laplace_pair(kernel);
  require(std::abs(lp.source - F.alpha) <= 1e-12, ErrorKind::parameter_out_of_range,
          "kernel source order does not match the family order");
  const QuadratureConfig qc = kernels::kernel_outer_config(kernel, cfg);
  auto k = [&](double s) { return kernels::kernel_value(kernel, t, s, cfg); };
  if (F.alpha == 2.0) return cosine_route(F, k, t, lp.gamma / 2.0, x, qc);

  const MatrixOperator& A = F.generator;
  const bool spectral = F.method == resolvent::Method::spectral && A.diagonalizable();
  const Vector y = spectral ? Vector(A.eigenvectors_inverse() * x) : Vector();
  const specfun::MLParams ml{F.alpha, 1.0};
  auto family = [&](double s) -> Vector {
    if (!spectral) return resolvent::s_alpha_apply(F, s, x, cfg);
    const double sa = std::pow(s, F.alpha);
    Vector w(y.size());
    for (Eigen::Index i = 0; i < y.size(); ++i)
      w(i) = y(i) * specfun::mittag_leffler(ml, -sa * A.eigenvalues()(i));
    return A.eigenvectors() * w;
  };
  auto integrand = [&](double s) -> Vector {
    const double kv = k(s);
    if (kv == 0.0) return Vector::Zero(x.size());
    return kv * family(s);
  };
  const auto r = quad::exp_sinh(integrand, 0.0, qc, 9);
  require(r.converged, ErrorKind::tail_bound, "subordination integral did not converge");
  return r.value;
}

Matrix direct_side(const MatrixOperator& A, double beta, double gamma, double t, const QuadratureConfig& cfg) {
  require(beta > 0 && std::isfinite(beta), ErrorKind::parameter_out_of_range, "beta must be > 0");
  require(gamma > 0 && gamma < 2, ErrorKind::parameter_out_of_range, "gamma must lie in (0,2)");
  require(std::isfinite(t) && t > 0, ErrorKind::domain, "t must be > 0");
  if (A.diagonalizable()) {
    const double tg = std::pow(t, gamma);
    const specfun::MLParams ml{gamma, 1.0};
    return A.apply_function([&](cplx l) {
      const cplx lb = l == 0.0 ? cplx(0.0) : std::pow(l, beta);
      return specfun::mittag_leffler(ml, -tg * lb);
    });
  }
  const MatrixOperator B = beta == 1.0 ? A : linop::fractional_power(A, beta, cfg);
  return resolvent::ml_family(B, gamma, 1.0, t, resolvent::Method::contour, cfg);
}

std::vector<double> verify_theorem_main(const SubordinationCase& c, const QuadratureConfig& cfg) {
  c.validate();
  const ResolventFamily F{c.A, c.alpha, resolvent::default_method(c.A, c.alpha)};
  const KernelSpec k = KernelSpec::f(c.alpha, c.gamma, c.beta);
  std::vector<double> out;
  out.reserve(c.t_grid.size());
  for (double t : c.t_grid) {
    const Vector lhs = subordinate_apply(F, k, t, c.x, cfg);
    const Vector rhs = direct_side(c.A, c.beta, c.gamma, t, cfg) * c.x;
    out.push_back((lhs - rhs).norm());
  }
  return out;
}

Matrix dunford_s_gamma_beta(const MatrixOperator& A, double beta, double gamma, double t, const QuadratureConfig& cfg) {
  require(beta > 0 && std::isfinite(beta), ErrorKind::parameter_out_of_range, "beta must be > 0");
  require(gamma > 0 && gamma < 2, ErrorKind::parameter_out_of_range, "gamma must lie in (0,2)");
  require(std::isfinite(t) && t > 0, ErrorKind::domain, "t must be > 0");
  // With beta = 1 the integrand is entire, so a singular A is shifted off zero.
  double shift = 0.0;
  if (A.singular()) {
    require(beta == 1.0, ErrorKind::domain, "0 lies in the spectrum; only beta = 1 is supported there");
    shift = 1.0;
  }
  Matrix As = A.entries();
  As.diagonal().array() += shift;
  const MatrixOperator B(As);

  const double theta = linop::spectral_angle(B);
  const double hi = std::min(pi, (pi - 0.5 * gamma * pi) / beta);
  require(theta < hi, ErrorKind::sectoriality, "spectral angle leaves no admissible contour angle");
  const double omega = 0.5 * (theta + hi);
  const double d = 0.5 * B.spectral_gap();
  for (Eigen::Index i = 0; i < B.dim(); ++i) {
    const cplx l = B.eigenvalues()(i);
    const double gap = omega - std::abs(std::arg(l));
    const double to_ray = gap >= 0.5 * pi ? std::abs(l) : std::abs(l) * std::sin(gap);
    require(to_ray > 1e-8 * B.norm(), ErrorKind::contour_too_close, "contour ray passes too close to the spectrum");
  }
  const double tg = std::pow(t, gamma);
  // Beyond R the algebraic tail |E_gamma| ~ 1/(t^gamma r^beta) contributes below 1e-15.
  const double R = std::min(1e250, std::max(1e3 * B.norm(), std::pow(1e15 / tg, 1.0 / beta)));
  const specfun::MLParams ml{gamma, 1.0};
  auto f = [&](cplx mu) {
    const cplx m = mu - shift;
    const cplx mb = m == 0.0 ? cplx(0.0) : std::pow(m, beta);
    return specfun::mittag_leffler(ml, -tg * mb);
  };
  return linop::keyhole_integral(B, f, omega, d, R, cfg);
}

}  // namespace fracres::subordinate
