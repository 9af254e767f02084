#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "fracres/types.hpp"

namespace fracres::linop {

/// Square complex matrix with a cached eigendecomposition.
class MatrixOperator {
 public:
  explicit MatrixOperator(Matrix entries);

  static MatrixOperator scalar(cplx a);
  static MatrixOperator diagonal(const std::vector<cplx>& d);

  Eigen::Index dim() const { return entries_.rows(); }
  const Matrix& entries() const { return entries_; }
  const Vector& eigenvalues() const { return eigenvalues_; }
  const Matrix& eigenvectors() const { return V_; }
  const Matrix& eigenvectors_inverse() const { return Vinv_; }
  bool diagonalizable() const { return diagonalizable_; }

  /// Spectral norm.
  double norm() const { return norm_; }
  /// Smallest |lambda| over the spectrum.
  double spectral_gap() const;
  bool singular() const;

  /// V f(D) V^{-1}; throws not-diagonalizable when the cache cannot represent A.
  Matrix apply_function(const std::function<cplx(cplx)>& f) const;

 private:
  Matrix entries_;
  Vector eigenvalues_;
  Matrix V_, Vinv_;
  bool diagonalizable_ = false;
  double norm_ = 0.0;
};

/// (lambda I - A)^{-1}.
Matrix resolvent(const MatrixOperator& A, cplx lambda);

/// Largest |arg lambda| over the nonzero spectrum.
double spectral_angle(const MatrixOperator& A);

struct SectorReport {
  double spectral_angle = 0.0;
  std::vector<std::pair<double, double>> resolvent_sup;  ///< (probe angle, sup |z R(z,A)|)
  double verdict_angle = 0.0;
};

/// Empty lists select three probes between the spectral angle and pi and radii 1e-3..1e3.
SectorReport sector_probe(const MatrixOperator& A, std::vector<double> probe_angles = {},
                          std::vector<double> radii = {});

/// A^b for b > 0 through the Balakrishnan keyhole integral.
MatrixOperator fractional_power(const MatrixOperator& A, double b, const QuadratureConfig& cfg = {});

/// Principal A^b from the eigendecomposition; diagonalizable A only.
Matrix fractional_power_spectral(const MatrixOperator& A, double b);

/// (1/2 pi i) times the counterclockwise keyhole integral of f(l)(l - A)^{-1} with
/// rays at arg = +-zeta cut at radius R and an arc of radius d.
Matrix keyhole_integral(const MatrixOperator& A, const std::function<cplx(cplx)>& f, double zeta, double d,
                        double R, const QuadratureConfig& cfg);

struct AnglePlan {
  double alpha = 1.0;
  double theta0 = 0.0;
  double beta = 1.0;
  double gamma = 1.0;
  bool valid = false;
  double result_angle = 0.0;
};

/// Analyticity angle of the subordinated family built from a theta0-analytic
/// alpha-times family by the powers beta and gamma.
AnglePlan angle_plan(double alpha, double theta0, double beta, double gamma);

/// Analyticity angle of the alpha-times family generated by -A when A is
/// sectorial of angle theta; negative when no analytic extension exists.
double analytic_angle_from_sector(double theta, double alpha);

MatrixOperator read_matrix(std::istream& in);
MatrixOperator read_matrix_file(const std::string& path);
cplx parse_complex(const std::string& token);

}  // namespace fracres::linop
