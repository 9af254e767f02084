#include "fracres/linop.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "fracres/error.hpp"
#include "fracres/quadrature.hpp"

namespace fracres::linop {

MatrixOperator::MatrixOperator(Matrix entries) : entries_(std::move(entries)) {
  require(entries_.rows() > 0 && entries_.rows() == entries_.cols(), ErrorKind::parameter_out_of_range,
          "operator must be a nonempty square matrix");
  require(entries_.allFinite(), ErrorKind::domain, "operator entries must be finite");
  const Eigen::Index n = dim();
  norm_ = n == 1 ? std::abs(entries_(0, 0)) : Eigen::BDCSVD<Matrix>(entries_).singularValues()(0);
  const double fro = std::max(entries_.norm(), std::numeric_limits<double>::min());

  if ((entries_ - entries_.adjoint()).norm() <= 1e-14 * fro) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(entries_);
    eigenvalues_ = es.eigenvalues().cast<cplx>();
    V_ = es.eigenvectors();
    Vinv_ = V_.adjoint();
    diagonalizable_ = true;
    return;
  }
  Eigen::ComplexEigenSolver<Matrix> es(entries_);
  require(es.info() == Eigen::Success, ErrorKind::not_diagonalizable, "eigendecomposition failed");
  eigenvalues_ = es.eigenvalues();
  V_ = es.eigenvectors();
  Eigen::FullPivLU<Matrix> lu(V_);
  if (!lu.isInvertible()) return;
  Vinv_ = lu.inverse();
  const double cond = V_.norm() * Vinv_.norm();
  const double recon = (V_ * eigenvalues_.asDiagonal() * Vinv_ - entries_).norm() / fro;
  diagonalizable_ = cond <= 1e10 && recon <= 1e-10;
}

MatrixOperator MatrixOperator::scalar(cplx a) { return MatrixOperator(Matrix::Constant(1, 1, a)); }

MatrixOperator MatrixOperator::diagonal(const std::vector<cplx>& d) {
  Vector v(static_cast<Eigen::Index>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) v(static_cast<Eigen::Index>(i)) = d[i];
  return MatrixOperator(Matrix(v.asDiagonal()));
}

double MatrixOperator::spectral_gap() const { return eigenvalues_.cwiseAbs().minCoeff(); }

bool MatrixOperator::singular() const {
  return spectral_gap() <= 1e-12 * std::max(norm_, std::numeric_limits<double>::min());
}

Matrix MatrixOperator::apply_function(const std::function<cplx(cplx)>& f) const {
  require(diagonalizable_, ErrorKind::not_diagonalizable, "spectral route needs a diagonalizable operator");
  Vector fd(dim());
  for (Eigen::Index i = 0; i < dim(); ++i) fd(i) = f(eigenvalues_(i));
  return V_ * fd.asDiagonal() * Vinv_;
}

Matrix resolvent(const MatrixOperator& A, cplx lambda) {
  const double margin = 1e-12 * A.norm();
  for (Eigen::Index i = 0; i < A.dim(); ++i)
    require(std::abs(lambda - A.eigenvalues()(i)) > margin, ErrorKind::eigenvalue_collision,
            "lambda lies on the spectrum");
  Matrix M = -A.entries();
  M.diagonal().array() += lambda;
  return M.fullPivLu().inverse();
}

double spectral_angle(const MatrixOperator& A) {
  const double tiny = 1e-12 * std::max(A.norm(), std::numeric_limits<double>::min());
  double angle = 0.0;
  for (Eigen::Index i = 0; i < A.dim(); ++i) {
    const cplx l = A.eigenvalues()(i);
    if (std::abs(l) <= tiny) continue;
    const double a = std::abs(std::arg(l));
    require(a < pi - 1e-12, ErrorKind::negative_real_spectrum, "spectrum meets the negative real axis");
    angle = std::max(angle, a);
  }
  return angle;
}

SectorReport sector_probe(const MatrixOperator& A, std::vector<double> probe_angles, std::vector<double> radii) {
  SectorReport rep;
  rep.spectral_angle = spectral_angle(A);
  rep.verdict_angle = rep.spectral_angle;
  if (probe_angles.empty())
    for (double f : {0.25, 0.5, 0.75}) probe_angles.push_back(rep.spectral_angle + f * (pi - rep.spectral_angle));
  if (radii.empty())
    for (int k = 0; k <= 60; ++k) radii.push_back(std::pow(10.0, -3.0 + 0.1 * k));
  for (double w : probe_angles) {
    require(w > rep.spectral_angle && w < pi, ErrorKind::parameter_out_of_range,
            "probe angles must lie strictly between the spectral angle and pi");
    double sup = 0.0;
    for (double r : radii) {
      require(r > 0, ErrorKind::parameter_out_of_range, "probe radii must be > 0");
      for (int sgn = -1; sgn <= 1; sgn += 2) {
        const cplx z = std::polar(r, sgn * w);
        const Matrix M = z * resolvent(A, z);
        const double nrm =
            M.rows() == 1 ? std::abs(M(0, 0)) : Eigen::JacobiSVD<Matrix>(M).singularValues()(0);
        sup = std::max(sup, nrm);
      }
    }
    rep.resolvent_sup.emplace_back(w, sup);
  }
  return rep;
}

Matrix keyhole_integral(const MatrixOperator& A, const std::function<cplx(cplx)>& f, double zeta, double d,
                        double R, const QuadratureConfig& cfg) {
  const Eigen::Index n = A.dim();
  auto res = [&](cplx l) -> Matrix {
    Matrix M = -A.entries();
    M.diagonal().array() += l;
    return M.partialPivLu().solve(Matrix::Identity(n, n));
  };
  const cplx eu = std::polar(1.0, zeta), el = std::conj(eu);
  auto rays = [&](double v) -> Matrix {
    const double r = d * std::exp(v);
    const cplx lu = r * eu, ll = r * el;
    return r * (f(ll) * el * res(ll) - f(lu) * eu * res(lu));
  };
  auto arc = [&](double th) -> Matrix {
    const cplx l = std::polar(d, th);
    return -(f(l) * cplx(0.0, 1.0) * l) * res(l);
  };
  const auto ray_part = quad::gauss_kronrod(rays, 0.0, std::log(R / d), cfg);
  const auto arc_part = quad::gauss_kronrod(arc, -zeta, zeta, cfg);
  require(ray_part.converged && arc_part.converged, ErrorKind::quadrature_failure,
          "keyhole quadrature did not converge");
  return (ray_part.value + arc_part.value) / cplx(0.0, 2.0 * pi);
}

namespace {

// A^{-b} for 0 < b < 1 and invertible sectorial A.
Matrix negative_power(const MatrixOperator& A, double b, double sa, const QuadratureConfig& cfg) {
  const double zeta = 0.5 * (sa + pi);
  const double d = 0.5 * A.spectral_gap();
  const double R = 1e3 * A.norm();
  const double margin = 1e-8 * A.norm();
  for (Eigen::Index i = 0; i < A.dim(); ++i) {
    const cplx l = A.eigenvalues()(i);
    const double gap = zeta - std::abs(std::arg(l));
    const double to_ray = gap >= 0.5 * pi ? std::abs(l) : std::abs(l) * std::sin(gap);
    require(std::min(to_ray, std::abs(l) - d) > margin, ErrorKind::contour_too_close,
            "keyhole path passes too close to the spectrum");
  }
  Matrix out = keyhole_integral(A, [b](cplx l) { return std::pow(l, -b); }, zeta, d, R, cfg);
  // Both rays beyond R, from the Neumann series of the resolvent.
  Matrix Ak = Matrix::Identity(A.dim(), A.dim());
  for (int k = 0; k < 60; ++k) {
    const double c = std::sin(zeta * (b + k)) * std::pow(R, -b - k) / (pi * (b + k));
    out += c * Ak;
    if (std::pow(A.norm() / R, k) * std::pow(R, -b) < 1e-17) break;
    Ak = Ak * A.entries();
  }
  return out;
}

Matrix integer_power(const Matrix& A, long k) {
  Matrix out = Matrix::Identity(A.rows(), A.cols());
  Matrix base = A;
  while (k > 0) {
    if (k & 1) out = out * base;
    base = base * base;
    k >>= 1;
  }
  return out;
}

Matrix power_invertible(const MatrixOperator& A, double b, const QuadratureConfig& cfg) {
  const double sa = spectral_angle(A);
  require(b * sa < pi, ErrorKind::sectoriality, "b times the spectral angle must stay below pi");
  const double fl = std::floor(b);
  const double bp = b - fl;
  const Matrix Afl = integer_power(A.entries(), static_cast<long>(fl));
  if (bp < 1e-15) return Afl;
  return negative_power(A, bp, sa, cfg).partialPivLu().solve(Afl);
}

}  // namespace

MatrixOperator fractional_power(const MatrixOperator& A, double b, const QuadratureConfig& cfg) {
  require(std::isfinite(b) && b > 0, ErrorKind::parameter_out_of_range, "b must be > 0");
  cfg.validate();
  if (!A.singular()) return MatrixOperator(power_invertible(A, b, cfg));

  spectral_angle(A);
  const Eigen::Index n = A.dim();
  std::vector<Matrix> iterates;
  for (int k = 4; k <= 12; ++k) {
    Matrix shifted = A.entries();
    shifted.diagonal().array() += std::ldexp(1.0, -k);
    iterates.push_back(power_invertible(MatrixOperator(shifted), b, cfg));
  }
  const std::size_t m = iterates.size();
  const double d1 = (iterates[m - 1] - iterates[m - 2]).norm();
  const double d2 = (iterates[m - 2] - iterates[m - 3]).norm();
  const double d3 = (iterates[m - 3] - iterates[m - 4]).norm();
  require(d1 <= 1.05 * d2 && d2 <= 1.05 * d3, ErrorKind::series_divergence,
          "shifted powers do not settle as the shift goes to zero");
  // Aitken delta-squared, entrywise, on the last three iterates.
  const Matrix& x0 = iterates[m - 3];
  const Matrix& x1 = iterates[m - 2];
  const Matrix& x2 = iterates[m - 1];
  Matrix out = x2;
  const double scale = std::max(1.0, x2.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const cplx dd = x2(i, j) - 2.0 * x1(i, j) + x0(i, j);
      if (std::abs(dd) > 1e-14 * scale) {
        const cplx dx = x2(i, j) - x1(i, j);
        out(i, j) = x2(i, j) - dx * dx / dd;
      }
    }
  }
  return MatrixOperator(out);
}

Matrix fractional_power_spectral(const MatrixOperator& A, double b) {
  require(std::isfinite(b) && b > 0, ErrorKind::parameter_out_of_range, "b must be > 0");
  const double sa = spectral_angle(A);
  require(b * sa < pi, ErrorKind::sectoriality, "b times the spectral angle must stay below pi");
  return A.apply_function([b](cplx l) { return l == 0.0 ? cplx(0.0) : std::pow(l, b); });
}

AnglePlan angle_plan(double alpha, double theta0, double beta, double gamma) {
  require(alpha > 0 && alpha <= 2, ErrorKind::parameter_out_of_range, "alpha must lie in (0,2]");
  require(gamma > 0 && gamma < 2, ErrorKind::parameter_out_of_range, "gamma must lie in (0,2)");
  require(beta > 0 && std::isfinite(beta), ErrorKind::parameter_out_of_range, "beta must be > 0");
  const double theta_max = std::min(0.5 * pi, pi / alpha - 0.5 * pi);
  require(theta0 >= 0 && theta0 <= theta_max + 1e-12, ErrorKind::parameter_out_of_range,
          "theta0 must lie in [0, min(pi/2, pi/alpha - pi/2)]");
  AnglePlan plan{alpha, theta0, beta, gamma, false, 0.0};
  // sector angle of A, then of A^beta, then the analyticity angle for order gamma
  const double phi = pi - (0.5 * pi + theta0) * alpha;
  const double phib = beta * std::max(phi, 0.0);
  if (phib >= pi) return plan;
  const double angle = analytic_angle_from_sector(phib, gamma);
  plan.valid = angle > 0;
  plan.result_angle = plan.valid ? angle : 0.0;
  return plan;
}

double analytic_angle_from_sector(double theta, double alpha) {
  return std::min((pi - theta) / alpha - 0.5 * pi, 0.5 * pi);
}

}  // namespace fracres::linop
