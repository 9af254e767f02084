#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "fracres/types.hpp"

namespace fracres::kernels {

enum class Family { phi, p, f, half };

const char* to_string(Family f);
Family parse_family(const std::string& s);

/// Real-integral forms exist as printed and as a corrected variant.
enum class Variant { printed, corrected };

struct KernelSpec {
  Family family = Family::phi;
  double alpha = 1.0;
  double gamma = 0.5;
  double beta = 1.0;
  double omega = 0.0;  ///< 0 selects the default ray angle for f
  double theta = 0.0;  ///< 0 selects the default angle of the real-integral forms

  void validate() const;
  double ray_angle() const;
  double integral_angle() const;

  static KernelSpec phi(double gamma);
  static KernelSpec p(double alpha);
  static KernelSpec f(double alpha, double gamma, double beta);
  static KernelSpec half(double alpha);
};

/// Admissible ray interval for f_{alpha,gamma}^beta, upper end capped below pi.
std::pair<double, double> omega_interval(double alpha, double gamma, double beta);

/// t^{-gamma} Psi_gamma(s t^{-gamma}).
double phi_kernel(double gamma, double t, double s);
/// Real-integral representation of phi_gamma; theta = 0 selects the default.
double phi_kernel_integral(double gamma, double t, double s, double theta = 0.0);

/// One-sided stable density with Laplace transform exp(-lambda^alpha t).
double p_kernel(double alpha, double t, double s);
/// Real-integral (Yosida) representation of p_alpha.
double p_kernel_yosida(double alpha, double t, double s, Variant v, double theta = 0.0);

double f_kernel(const KernelSpec& spec, double t, double s, const QuadratureConfig& cfg = {});
/// gamma = 1 real form of f_{alpha,1}^beta.
double f_kernel_real(double alpha, double beta, double t, double s, Variant v, double omega = 0.0);
/// Real form of f_{alpha,1}^{1/alpha} for alpha in (1,2].
double f_kernel_inverse_power(double alpha, double t, double s, Variant v, double theta = 0.0);

double half_power_kernel(double alpha, double t, double s);

/// Tolerances for an integral over s of this kernel; relaxed for kernels that
/// are themselves quadratures.
QuadratureConfig kernel_outer_config(const KernelSpec& spec, const QuadratureConfig& cfg);

double kernel_value(const KernelSpec& spec, double t, double s, const QuadratureConfig& cfg = {});

/// The kernel turns E_{source}(-lambda s^{source}) into E_gamma(-lambda^beta t^gamma).
struct LaplacePair {
  double source = 1.0;
  double gamma = 1.0;
  double beta = 1.0;
};
LaplacePair laplace_pair(const KernelSpec& spec);

/// int_0^inf k(s) h(s) ds with h = E_source(-lambda s^source); handles the
/// oscillating source = 2 case.
double integrate_against_source(const std::function<double(double)>& k, double source, double lambda,
                                const QuadratureConfig& cfg, double scale = 1.0);

/// |int kernel(t,s) E_source(-lambda s^source) ds - E_gamma(-lambda^beta t^gamma)| per lambda.
std::vector<double> kernel_laplace_check(const KernelSpec& spec, double t, const std::vector<double>& lambdas,
                                         const QuadratureConfig& cfg = {});

double kernel_mass(const KernelSpec& spec, double t, const QuadratureConfig& cfg = {});

struct VariantReport {
  std::string form;
  double printed_residual = 0.0;    ///< Laplace residual; inf when the form does not integrate
  double corrected_residual = 0.0;
  double printed_pointwise = 0.0;   ///< max deviation from the primary kernel on a probe grid
  double corrected_pointwise = 0.0;
  Variant chosen = Variant::corrected;
};

/// Laplace-checks each real-integral form in both variants and picks the one that passes.
std::vector<VariantReport> validate_real_forms(const QuadratureConfig& cfg = {});

/// `family,alpha,beta,gamma,t,s,value` rows.
void write_kernel_csv(std::ostream& os, const KernelSpec& spec, const std::vector<double>& ts,
                      const std::vector<double>& ss, const QuadratureConfig& cfg = {});

}  // namespace fracres::kernels
