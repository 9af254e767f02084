#include "fracres/kernels.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <unordered_map>

#include "fracres/error.hpp"
#include "fracres/quadrature.hpp"
#include "fracres/specfun.hpp"
#include "fracres/trajectory.hpp"

namespace fracres::kernels {

namespace {

void require_ts(double t, double s) {
  require(std::isfinite(t) && t > 0, ErrorKind::domain, "t must be > 0");
  require(std::isfinite(s) && s > 0, ErrorKind::domain, "s must be > 0");
}

// int_0^inf amp(r) sin(phase(r)) dr. The tolerance is set against the integral
// of the smooth envelope amp, since the signed integral may cancel to ~0.
// r = c x puts the decay of amp near x ~ 1.
double real_integral(const std::function<double(double)>& amp, const std::function<double(double)>& phase, double c) {
  if (!(c > 0.0)) return 0.0;  // scale underflow: the kernel is negligible there
  QuadratureConfig qc;
  qc.rel_tol = 1e-11;
  qc.abs_tol = 1e-300;
  const auto env = quad::exp_sinh([&](double x) { return amp(c * x); }, 0.0, qc, 10);
  require(env.converged, ErrorKind::tail_bound, "real-integral envelope did not converge");
  qc.abs_tol = std::max(1e-300, 1e-12 * env.value);
  const auto r = quad::exp_sinh([&](double x) { return amp(c * x) * std::sin(phase(c * x)); }, 0.0, qc, 10);
  require(r.converged, ErrorKind::tail_bound, "real-integral kernel form did not converge");
  return c * r.value;
}

// Termwise integration of E_gamma - 1 along the rays:
// f ~ (1/pi) sum_n (-1)^{n+1} a Gamma(n a b + 1) sin(n pi b) t^{n g} / (Gamma(1 + n g) s^{n a b + 1}).
std::optional<double> f_large_s(double a, double b, double g, double t, double s) {
  if (s * std::pow(t, -g / (a * b)) < 10.0) return std::nullopt;
  const double ls = std::log(s), lt = std::log(t);
  double sum = 0.0, prev = std::numeric_limits<double>::infinity();
  for (int n = 1; n <= 40; ++n) {
    const double sn = std::sin(n * pi * b);
    const double lmag = std::lgamma(n * a * b + 1) + n * g * lt - std::lgamma(1 + n * g) - (n * a * b + 1) * ls;
    const double mag = a * std::exp(lmag) / pi;
    if (mag > prev) return std::nullopt;
    prev = mag;
    sum += (n % 2 == 1 ? 1.0 : -1.0) * sn * mag;
    if (mag <= 1e-14 * std::abs(sum) || mag < 1e-300) return sum;
  }
  return std::nullopt;
}

struct RayCache {
  std::array<double, 6> key{};
  std::unordered_map<double, cplx> values;

  void reset(const std::array<double, 6>& k) {
    if (k != key || values.size() > (1u << 18)) {
      key = k;
      values.clear();
    }
  }
  template <class F>
  cplx get(double r, F&& make) {
    const auto it = values.find(r);
    if (it != values.end()) return it->second;
    const cplx v = make();
    values.emplace(r, v);
    return v;
  }
};

double phi_theta_default(double gamma) { return 0.5 * (std::max(pi - pi / (2.0 * gamma), 0.0) + 0.5 * pi); }

}  // namespace

// Kernel values from an inner quadrature carry ~1e-10 relative noise; the
// outer integral cannot be asked for more.
QuadratureConfig kernel_outer_config(const KernelSpec& spec, const QuadratureConfig& cfg) {
  QuadratureConfig qc = cfg;
  if (spec.family == Family::f) {
    qc.rel_tol = std::max(cfg.rel_tol, 1e-8);
    qc.abs_tol = std::max(cfg.abs_tol, 1e-11);
  }
  return qc;
}

const char* to_string(Family f) {
  switch (f) {
    case Family::phi: return "phi";
    case Family::p: return "p";
    case Family::f: return "f";
    case Family::half: return "half";
  }
  return "?";
}

Family parse_family(const std::string& s) {
  if (s == "phi") return Family::phi;
  if (s == "p") return Family::p;
  if (s == "f") return Family::f;
  if (s == "half") return Family::half;
  fail(ErrorKind::parameter_out_of_range, "unknown kernel family '" + s + "'");
}

std::pair<double, double> omega_interval(double alpha, double gamma, double beta) {
  return {pi - 0.5 * alpha * pi, std::min(pi, (pi - 0.5 * gamma * pi) / beta)};
}

void KernelSpec::validate() const {
  switch (family) {
    case Family::phi:
      require(gamma > 0 && gamma < 1, ErrorKind::parameter_out_of_range, "phi needs gamma in (0,1)");
      if (theta != 0.0)
        require(theta > pi - pi / (2 * gamma) && theta < 0.5 * pi, ErrorKind::parameter_out_of_range,
                "phi needs theta in (pi - pi/(2 gamma), pi/2)");
      break;
    case Family::p:
      require(alpha > 0 && alpha < 1, ErrorKind::parameter_out_of_range, "p needs alpha in (0,1)");
      if (theta != 0.0)
        require(theta > 0.5 * pi && theta < pi, ErrorKind::parameter_out_of_range, "p needs theta in (pi/2, pi)");
      break;
    case Family::half:
      require(alpha > 0 && alpha <= 2, ErrorKind::parameter_out_of_range, "half needs alpha in (0,2]");
      break;
    case Family::f: {
      require(alpha > 0 && alpha <= 2, ErrorKind::parameter_out_of_range, "f needs alpha in (0,2]");
      require(gamma > 0 && gamma < 2, ErrorKind::parameter_out_of_range, "f needs gamma in (0,2)");
      require(beta > 0, ErrorKind::parameter_out_of_range, "f needs beta > 0");
      if (alpha < 2)
        require(beta < (2 * pi - pi * gamma) / (2 * pi - pi * alpha), ErrorKind::parameter_out_of_range,
                "f needs beta < (2 - gamma)/(2 - alpha)");
      require(!(beta == 1.0 && gamma == alpha), ErrorKind::parameter_out_of_range,
              "f is the identity subordination for beta = 1, gamma = alpha");
      const auto [lo, hi] = omega_interval(alpha, gamma, beta);
      require(lo < hi, ErrorKind::parameter_out_of_range, "empty ray-angle interval");
      if (omega != 0.0)
        require(omega > lo && omega < hi, ErrorKind::parameter_out_of_range, "omega outside its admissible interval");
      break;
    }
  }
}

double KernelSpec::ray_angle() const {
  if (omega != 0.0) return omega;
  const auto [lo, hi] = omega_interval(alpha, gamma, beta);
  return 0.5 * (lo + hi);
}

double KernelSpec::integral_angle() const {
  if (theta != 0.0) return theta;
  return family == Family::p ? 0.75 * pi : phi_theta_default(gamma);
}

KernelSpec KernelSpec::phi(double gamma) { return {Family::phi, 1.0, gamma, 1.0, 0.0, 0.0}; }
KernelSpec KernelSpec::p(double alpha) { return {Family::p, alpha, 1.0, 1.0, 0.0, 0.0}; }
KernelSpec KernelSpec::f(double alpha, double gamma, double beta) { return {Family::f, alpha, gamma, beta, 0.0, 0.0}; }
KernelSpec KernelSpec::half(double alpha) { return {Family::half, alpha, 0.5 * alpha, 0.5, 0.0, 0.0}; }

double phi_kernel(double gamma, double t, double s) {
  require(gamma > 0 && gamma < 1, ErrorKind::parameter_out_of_range, "phi needs gamma in (0,1)");
  require_ts(t, s);
  if (gamma == 0.5) return std::exp(-s * s / (4 * t)) / std::sqrt(pi * t);
  const double tg = std::pow(t, -gamma);
  return tg * specfun::wright_psi(gamma, s * tg);
}

double phi_kernel_integral(double gamma, double t, double s, double theta) {
  require(gamma > 0 && gamma < 1, ErrorKind::parameter_out_of_range, "phi needs gamma in (0,1)");
  require_ts(t, s);
  if (theta == 0.0) theta = phi_theta_default(gamma);
  const double a = gamma * (pi - theta);
  const double ca = std::cos(a), sa = std::sin(a), ct = std::cos(theta), st = std::sin(theta);
  return real_integral([&](double r) { return std::pow(r, gamma - 1) * std::exp(-s * std::pow(r, gamma) * ca - t * r * ct); },
                       [&](double r) { return t * r * st - s * std::pow(r, gamma) * sa + a; },
                       1.0 / (t + std::pow(s, 1.0 / gamma))) /
         pi;
}

double p_kernel(double alpha, double t, double s) {
  require(alpha > 0 && alpha < 1, ErrorKind::parameter_out_of_range, "p needs alpha in (0,1)");
  require_ts(t, s);
  if (alpha == 0.5) return t * std::exp(-t * t / (4 * s)) / (2 * std::sqrt(pi) * std::pow(s, 1.5));
  const double z = t * std::pow(s, -alpha);
  return alpha * z / s * specfun::wright_psi(alpha, z);
}

double p_kernel_yosida(double alpha, double t, double s, Variant v, double theta) {
  require(alpha > 0 && alpha < 1, ErrorKind::parameter_out_of_range, "p needs alpha in (0,1)");
  require_ts(t, s);
  if (theta == 0.0) theta = 0.75 * pi;
  const double ct = std::cos(theta), st = std::sin(theta);
  const double cat = std::cos(alpha * theta), sat = std::sin(alpha * theta);
  return real_integral([&](double r) { return std::exp(s * r * ct - t * std::pow(r, alpha) * cat); },
                       [&](double r) {
                         const double phase_t = v == Variant::corrected ? std::pow(r, alpha) : r;
                         return s * r * st - t * phase_t * sat + theta;
                       },
                       1.0 / (s + std::pow(t, 1.0 / alpha))) /
         pi;
}

double f_kernel(const KernelSpec& spec, double t, double s, const QuadratureConfig& cfg) {
  require(spec.family == Family::f, ErrorKind::parameter_out_of_range, "f_kernel needs family f");
  spec.validate();
  require_ts(t, s);
  const double a = spec.alpha, b = spec.beta, g = spec.gamma;
  const double w = spec.ray_angle();
  const double tg = std::pow(t, g);
  if (auto tail = f_large_s(a, b, g, t, s)) return *tail;
  // mu = r e^{iw};  (-mu)^{1/a} = r^{1/a} e^{-i(pi-w)/a}
  const cplx ew = std::polar(1.0, w);
  const cplx eb = std::polar(1.0, b * w);
  const cplx root_dir = std::polar(1.0, -(pi - w) / a);
  const cplx pow_dir = std::polar(1.0, -(pi - w) * (1.0 / a - 1.0));
  // The constant term of E_gamma integrates to a real number, so it drops out
  // of the imaginary part; beyond the natural s-scale it dominates and is
  // removed via E_gamma(z) - 1 = z E_{gamma,1+gamma}(z).
  const bool subtract = s * std::pow(t, -g / (a * b)) > 1.0;
  const specfun::MLParams ml{g, subtract ? 1.0 + g : 1.0};
  // The ray factor depends on (r, t) only and the quadrature abscissae do not
  // move with s, so successive s-evaluations reuse it.
  thread_local RayCache cache;
  cache.reset({a, b, g, w, t, ml.beta});
  auto integrand = [&](double r) -> cplx {
    const double rr = std::pow(r, 1.0 / a);
    const cplx e = cache.get(r, [&] {
      const cplx z = -std::pow(r, b) * tg * eb;
      return subtract ? z * specfun::mittag_leffler(ml, z) : specfun::mittag_leffler(ml, z);
    });
    return e * (rr / r) * pow_dir * std::exp(-s * rr * root_dir) * ew;
  };
  QuadratureConfig qc = cfg;
  qc.rel_tol = std::min(cfg.rel_tol, 1e-10);
  qc.abs_tol = 1e-300;
  const auto res = quad::exp_sinh(integrand, 0.0, qc, 10);
  require(res.converged, ErrorKind::tail_bound,
          "f kernel ray integral did not converge (s = " + format_double(s) + ", error " +
              format_double(res.error) + ")");
  return res.value.imag() / pi;
}

double f_kernel_real(double alpha, double beta, double t, double s, Variant v, double omega) {
  KernelSpec spec = KernelSpec::f(alpha, 1.0, beta);
  spec.omega = omega;
  spec.validate();
  require_ts(t, s);
  const double w = spec.ray_angle();
  const double q = (pi - w) / alpha;
  const double cq = std::cos(q), sq = std::sin(q), sb = std::sin(beta * w);
  const double damp = v == Variant::corrected ? std::cos(beta * w) : sb;
  return real_integral(
             [&](double r) {
               const double ra = std::pow(r, 1.0 / alpha);
               return ra / r * std::exp(-s * ra * cq - t * std::pow(r, beta) * damp);
             },
             [&](double r) { return t * std::pow(r, beta) * sb - s * std::pow(r, 1.0 / alpha) * sq + q; },
             1.0 / (std::pow(s, alpha) + std::pow(t, 1.0 / beta))) /
         pi;
}

double f_kernel_inverse_power(double alpha, double t, double s, Variant v, double theta) {
  require(alpha > 1 && alpha <= 2, ErrorKind::parameter_out_of_range, "needs alpha in (1,2]");
  require_ts(t, s);
  const double lo = pi - 0.5 * alpha * pi, hi = 0.5 * alpha * pi;
  if (theta == 0.0) theta = 0.5 * (lo + hi);
  require(theta > lo && theta < hi, ErrorKind::parameter_out_of_range, "theta outside (pi - alpha pi/2, alpha pi/2)");
  const double q = (pi - theta) / alpha, u = theta / alpha;
  const double second = v == Variant::corrected ? s : t;
  return alpha / pi * real_integral([&](double r) { return std::exp(-s * r * std::cos(q) - t * r * std::cos(u)); },
                                    [&](double r) { return t * r * std::sin(u) - second * r * std::sin(q) + q; },
                                    1.0 / (s + t));
}

double half_power_kernel(double alpha, double t, double s) {
  require(alpha > 0 && alpha <= 2, ErrorKind::parameter_out_of_range, "half needs alpha in (0,2]");
  require_ts(t, s);
  const double r = std::pow(s / t, alpha);
  // (alpha/pi) t^{a/2} s^{a/2-1} / (s^a + t^a), written in s/t to avoid overflow
  return alpha / pi * std::sqrt(r) / (s * (1.0 + r));
}

double kernel_value(const KernelSpec& spec, double t, double s, const QuadratureConfig& cfg) {
  switch (spec.family) {
    case Family::phi: return phi_kernel(spec.gamma, t, s);
    case Family::p: return p_kernel(spec.alpha, t, s);
    case Family::f: return f_kernel(spec, t, s, cfg);
    case Family::half: return half_power_kernel(spec.alpha, t, s);
  }
  return 0.0;
}

LaplacePair laplace_pair(const KernelSpec& spec) {
  switch (spec.family) {
    case Family::phi: return {1.0, spec.gamma, 1.0};
    case Family::p: return {1.0, 1.0, spec.alpha};
    case Family::f: return {spec.alpha, spec.gamma, spec.beta};
    case Family::half: return {spec.alpha, 0.5 * spec.alpha, 0.5};
  }
  return {};
}

double integrate_against_source(const std::function<double(double)>& k, double source, double lambda,
                                const QuadratureConfig& cfg, double scale) {
  require(lambda >= 0, ErrorKind::domain, "lambda must be >= 0");
  const specfun::MLParams ml{source, 1.0};
  auto h = [&](double s) {
    if (lambda == 0.0) return 1.0;
    if (source == 1.0) return std::exp(-lambda * s);
    return specfun::mittag_leffler(ml, -lambda * std::pow(s, source));
  };
  auto integrand = [&](double s) { return k(s) * h(s); };
  const QuadratureConfig& qc = cfg;
  if (source == 2.0 && lambda > 0.0) {
    const double P = pi / std::sqrt(lambda);
    const double L = P * std::max(1.0, std::ceil(4.0 * scale / P));
    const auto head = quad::tanh_sinh(integrand, 0.0, L, qc, 10);
    const auto tail = quad::oscillatory_halfline(integrand, L, P, qc);
    require(head.converged && tail.converged, ErrorKind::quadrature_failure,
            "oscillatory source integral did not converge");
    return head.value + tail.value;
  }
  const auto r = quad::exp_sinh(integrand, 0.0, qc, 9);
  require(r.converged, ErrorKind::quadrature_failure, "source integral did not converge");
  return r.value;
}

std::vector<double> kernel_laplace_check(const KernelSpec& spec, double t, const std::vector<double>& lambdas,
                                         const QuadratureConfig& cfg) {
  spec.validate();
  require(t > 0, ErrorKind::domain, "t must be > 0");
  const LaplacePair lp = laplace_pair(spec);
  auto k = [&](double s) { return kernel_value(spec, t, s, cfg); };
  const QuadratureConfig outer = kernel_outer_config(spec, cfg);
  const double scale = std::pow(t, lp.gamma / lp.source);
  std::vector<double> out;
  out.reserve(lambdas.size());
  for (double lam : lambdas) {
    const double lhs = integrate_against_source(k, lp.source, lam, outer, scale);
    const double rhs =
        specfun::mittag_leffler(specfun::MLParams{lp.gamma, 1.0}, -std::pow(lam, lp.beta) * std::pow(t, lp.gamma));
    out.push_back(std::abs(lhs - rhs));
  }
  return out;
}

double kernel_mass(const KernelSpec& spec, double t, const QuadratureConfig& cfg) {
  spec.validate();
  return integrate_against_source([&](double s) { return kernel_value(spec, t, s, cfg); }, 1.0, 0.0,
                                  kernel_outer_config(spec, cfg));
}

std::vector<VariantReport> validate_real_forms(const QuadratureConfig& cfg) {
  std::vector<VariantReport> out;
  QuadratureConfig outer = cfg;
  outer.rel_tol = std::max(cfg.rel_tol, 1e-9);
  auto check = [&](const std::string& name, double source, double gamma, double beta, double t,
                   const std::function<double(Variant, double)>& form, const std::function<double(double)>& ref) {
    VariantReport rep;
    rep.form = name;
    const double inf = std::numeric_limits<double>::infinity();
    for (Variant v : {Variant::printed, Variant::corrected}) {
      double worst = 0.0, point = 0.0;
      for (double lam : {0.0, 1.0}) {
        double r = inf;
        try {
          const double lhs =
              integrate_against_source([&](double s) { return form(v, s); }, source, lam, outer, t);
          const double rhs = specfun::mittag_leffler(specfun::MLParams{gamma, 1.0},
                                                     -std::pow(lam, beta) * std::pow(t, gamma));
          r = std::abs(lhs - rhs);
        } catch (const Error&) {
        }
        worst = std::max(worst, std::isnan(r) ? inf : r);
      }
      for (double s : {0.25, 0.5, 1.0, 2.0, 4.0}) {
        double d = inf;
        try {
          d = std::abs(form(v, s) - ref(s));
        } catch (const Error&) {
        }
        point = std::max(point, std::isnan(d) ? inf : d);
      }
      if (v == Variant::printed) {
        rep.printed_residual = worst;
        rep.printed_pointwise = point;
      } else {
        rep.corrected_residual = worst;
        rep.corrected_pointwise = point;
      }
    }
    rep.chosen = rep.printed_residual <= 1e-6 && rep.printed_pointwise <= 1e-6 ? Variant::printed : Variant::corrected;
    out.push_back(rep);
  };
  check(
      "p-real-integral", 1.0, 1.0, 0.6, 1.0, [](Variant v, double s) { return p_kernel_yosida(0.6, 1.0, s, v); },
      [](double s) { return p_kernel(0.6, 1.0, s); });
  check(
      "f-gamma-one-real-integral", 1.5, 1.0, 0.5, 1.0,
      [](Variant v, double s) { return f_kernel_real(1.5, 0.5, 1.0, s, v); },
      [](double s) { return f_kernel(KernelSpec::f(1.5, 1.0, 0.5), 1.0, s); });
  check(
      "f-inverse-power-real-integral", 1.5, 1.0, 1.0 / 1.5, 1.0,
      [](Variant v, double s) { return f_kernel_inverse_power(1.5, 1.0, s, v); },
      [](double s) { return f_kernel(KernelSpec::f(1.5, 1.0, 1.0 / 1.5), 1.0, s); });
  return out;
}

void write_kernel_csv(std::ostream& os, const KernelSpec& spec, const std::vector<double>& ts,
                      const std::vector<double>& ss, const QuadratureConfig& cfg) {
  spec.validate();
  os << "family,alpha,beta,gamma,t,s,value\n";
  for (double t : ts)
    for (double s : ss)
      os << to_string(spec.family) << ',' << format_double(spec.alpha) << ',' << format_double(spec.beta) << ','
         << format_double(spec.gamma) << ',' << format_double(t) << ',' << format_double(s) << ','
         << format_double(kernel_value(spec, t, s, cfg)) << '\n';
}

}  // namespace fracres::kernels
