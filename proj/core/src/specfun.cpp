#include "fracres/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "fracres/error.hpp"
#include "fracres/quadrature.hpp"

namespace fracres::specfun {

namespace {

using ld = long double;
using cld = std::complex<long double>;

constexpr ld pi_l = 3.141592653589793238462643383279502884L;
constexpr ld eps_l = std::numeric_limits<ld>::epsilon();

bool is_pole(ld x) {
  if (x > 0) return false;
  const ld r = std::nearbyint(x);
  return std::abs(x - r) <= 1e-13L * std::max<ld>(1.0L, std::abs(x));
}

ld rgamma_l(ld x) {
  if (is_pole(x)) return 0.0L;
  if (x >= 0.5L) {
    if (x > 1700.0L) return std::exp(-std::lgamma(x));
    return 1.0L / std::tgamma(x);
  }
  // reflection: 1/Gamma(x) = Gamma(1-x) sin(pi x) / pi
  return std::sin(pi_l * x) * std::tgamma(1.0L - x) / pi_l;
}

struct SeriesSum {
  cplx value;
  double abs_sum = 0.0;
  bool converged = false;

  double roundoff() const { return abs_sum * static_cast<double>(eps_l) * 32.0; }
};

SeriesSum ml_series(double alpha, double beta, cplx z) {
  const cld zl(z.real(), z.imag());
  const ld az = std::abs(zl);
  // past this index the terms decrease monotonically
  const ld peak = az > 0 ? std::pow(az, 1.0L / alpha) / alpha + 2.0L : 0.0L;
  cld pw = 1.0L, sum = 0.0L;
  ld abs_sum = 0.0L;
  SeriesSum out;
  int small = 0;
  for (int n = 0; n < 20000; ++n) {
    const ld x = static_cast<ld>(beta) + static_cast<ld>(alpha) * n;
    if (x > 1750.0L) break;
    const cld t = pw * rgamma_l(x);
    sum += t;
    abs_sum += std::abs(t);
    if (n > peak && std::abs(t) <= eps_l * 1e-3L * abs_sum) {
      if (++small >= 3) {
        out.converged = true;
        break;
      }
    } else {
      small = 0;
    }
    pw *= zl;
    if (!std::isfinite(std::abs(pw))) break;
  }
  out.value = cplx(static_cast<double>(sum.real()), static_cast<double>(sum.imag()));
  out.abs_sum = static_cast<double>(abs_sum);
  return out;
}

// Poles s = z^{1/alpha} e^{2 pi i k / alpha} of s^alpha - z on the principal sheet.
std::vector<cplx> principal_poles(double alpha, cplx z) {
  std::vector<cplx> poles;
  if (z == 0.0) return poles;
  const double th = std::arg(z);
  const double mod = std::pow(std::abs(z), 1.0 / alpha);
  const int k0 = static_cast<int>(std::ceil((-alpha * pi - th) / (2 * pi))) - 1;
  const int k1 = static_cast<int>(std::floor((alpha * pi - th) / (2 * pi))) + 1;
  for (int k = k0; k <= k1; ++k) {
    const double phi = (th + 2 * pi * k) / alpha;
    if (std::abs(phi) < pi) poles.push_back(std::polar(mod, phi));
  }
  return poles;
}

cplx residue(double beta, cplx s, double alpha) { return std::pow(s, 1.0 - beta) * std::exp(s) / alpha; }

struct AsymptoticSum {
  cplx value;
  double remainder = std::numeric_limits<double>::infinity();
};

AsymptoticSum ml_asymptotic(double alpha, double beta, cplx z, int N) {
  AsymptoticSum out;
  cplx sum = 0.0;
  for (cplx s : principal_poles(alpha, z)) sum += residue(beta, s, alpha);
  cplx zinv = 1.0 / z, pw = zinv;
  for (int n = 1; n < N; ++n) {
    sum -= pw * rgamma(beta - alpha * n);
    pw *= zinv;
  }
  const double az = std::abs(z);
  double rem = 0.0;
  for (int n = N; n <= N + 1; ++n)
    rem = std::max(rem, std::abs(rgamma(beta - alpha * n)) * std::pow(az, -static_cast<double>(n)));
  // An exponentially small pole sitting near the branch cut makes the
  // algebraic expansion non-uniform; treat its size as part of the remainder.
  const double th = std::arg(z);
  for (int k = -2; k <= 2; ++k) {
    const double phi = (th + 2 * pi * k) / alpha;
    if (std::abs(std::abs(phi) - pi) < 0.5) {
      const double mod = std::pow(az, 1.0 / alpha);
      rem = std::max(rem, std::pow(mod, 1.0 - beta) * std::exp(mod * std::cos(phi)) / alpha);
    }
  }
  out.value = sum;
  out.remainder = rem;
  return out;
}

double parabola_distance(cplx p, double mu) { return std::abs(std::sqrt(p / mu).real() - 1.0); }

cplx ml_inversion(double alpha, double beta, cplx z) {
  const auto poles = principal_poles(alpha, z);
  static constexpr double candidates[] = {1.0, 0.75, 1.5, 0.5, 2.0, 3.0, 0.35, 4.0, 6.0, 0.25, 8.0};
  double mu = 1.0, best = -1.0;
  for (double m : candidates) {
    double d = 1.0;
    for (cplx s : poles) d = std::min(d, parabola_distance(s, m));
    if (d > best) {
      best = d;
      mu = m;
    }
    if (d >= 0.4) break;
  }
  require(best > 1e-3, ErrorKind::regime_failure, "pole on the inversion contour");
  cplx sum = 0.0;
  for (cplx s : poles)
    if (std::sqrt(s / mu).real() > 1.0) sum += residue(beta, s, alpha);
  auto g = [&](double u) -> cplx {
    const cplx w(1.0, u);
    const cplx s = mu * w * w;
    const cplx sa = std::pow(s, alpha);
    return w * std::exp(s) * std::pow(s, alpha - beta) / (sa - z);
  };
  QuadratureConfig qc;
  qc.rel_tol = 1e-13;
  qc.abs_tol = 1e-16;
  const auto r = quad::trapezoid_line(g, 0.25, qc, 12, 80.0);
  require(r.converged, ErrorKind::regime_failure, "Laplace inversion did not converge");
  return sum + r.value * (mu / pi);
}

std::optional<cplx> closed_form(double alpha, double beta, cplx z) {
  if (alpha == 1.0 && beta == 1.0) return std::exp(z);
  if (alpha == 1.0 && beta == 2.0) return (std::exp(z) - 1.0) / z;
  if (alpha == 2.0 && beta == 1.0) return std::cosh(std::sqrt(z));
  if (alpha == 2.0 && beta == 2.0) {
    const cplx r = std::sqrt(z);
    return std::sinh(r) / r;
  }
  return std::nullopt;
}

struct Evaluation {
  cplx value;
  EvalRegime regime;
};

Evaluation evaluate(const MLParams& p, cplx z, const MLConfig& cfg) {
  p.validate();
  cfg.validate();
  require(std::isfinite(z.real()) && std::isfinite(z.imag()), ErrorKind::domain, "argument must be finite");
  Evaluation ev;
  ev.regime.r0 = cfg.r0;
  ev.regime.N = cfg.terms(p.alpha);
  ev.regime.R = p.alpha < 2.0 ? asymptotic_radius(p, cfg) : cfg.R;
  const double az = std::abs(z);
  ev.regime.tag = Regime::series;
  if (az <= cfg.r0) {
    ev.value = ml_series(p.alpha, p.beta, z).value;
    return ev;
  }
  if (auto c = closed_form(p.alpha, p.beta, z)) {
    ev.value = *c;
    return ev;
  }
  if (p.alpha < 2.0 && az >= ev.regime.R) {
    const auto a = ml_asymptotic(p.alpha, p.beta, z, ev.regime.N);
    if (a.remainder <= cfg.asym_tol) {
      ev.regime.tag = Regime::asymptotic;
      ev.value = a.value;
      return ev;
    }
  }
  const auto s = ml_series(p.alpha, p.beta, z);
  if (s.converged && s.roundoff() <= std::max(cfg.tol * std::abs(s.value), cfg.tol_abs)) {
    ev.value = s.value;
    return ev;
  }
  require(p.alpha < 2.0, ErrorKind::regime_failure, "alpha >= 2 outside the series disc");
  ev.regime.tag = Regime::laplace_inversion;
  ev.value = ml_inversion(p.alpha, p.beta, z);
  return ev;
}

}  // namespace

void MLParams::validate() const {
  require(std::isfinite(alpha) && alpha > 0, ErrorKind::parameter_out_of_range, "alpha must be > 0");
  require(std::isfinite(beta) && beta > 0, ErrorKind::parameter_out_of_range, "beta must be > 0");
}

void MLConfig::validate() const {
  require(r0 > 0 && r0 < R, ErrorKind::parameter_out_of_range, "need 0 < r0 < R");
  require(N >= 0, ErrorKind::parameter_out_of_range, "N must be >= 1 (or 0 for the default)");
  require(tol > 0 && asym_tol > 0 && tol_abs >= 0, ErrorKind::parameter_out_of_range, "tolerances must be > 0");
}

int MLConfig::terms(double alpha) const { return N > 0 ? N : static_cast<int>(std::ceil(10.0 / alpha)); }

const char* to_string(Regime r) {
  switch (r) {
    case Regime::series: return "series";
    case Regime::asymptotic: return "asymptotic";
    case Regime::laplace_inversion: return "laplace-inversion";
  }
  return "?";
}

double rgamma(double x) { return static_cast<double>(rgamma_l(x)); }

double asymptotic_radius(const MLParams& p, const MLConfig& cfg) {
  p.validate();
  const int N = cfg.terms(p.alpha);
  double R = cfg.R;
  for (int n = N; n <= N + 1; ++n) {
    const double c = std::abs(rgamma(p.beta - p.alpha * n));
    if (c > 0) R = std::max(R, std::pow(c / cfg.asym_tol, 1.0 / n));
  }
  return R;
}

cplx mittag_leffler(const MLParams& p, cplx z, const MLConfig& cfg) { return evaluate(p, z, cfg).value; }

double mittag_leffler(const MLParams& p, double x, const MLConfig& cfg) {
  return evaluate(p, cplx(x, 0.0), cfg).value.real();
}

EvalRegime select_regime(const MLParams& p, cplx z, const MLConfig& cfg) { return evaluate(p, z, cfg).regime; }

cplx mittag_leffler_in(const MLParams& p, cplx z, Regime regime, const MLConfig& cfg) {
  p.validate();
  switch (regime) {
    case Regime::series: {
      const auto s = ml_series(p.alpha, p.beta, z);
      require(s.converged, ErrorKind::series_divergence, "series did not converge");
      return s.value;
    }
    case Regime::asymptotic:
      require(p.alpha < 2.0, ErrorKind::regime_failure, "asymptotics need alpha < 2");
      require(z != 0.0, ErrorKind::domain, "asymptotics need z != 0");
      return ml_asymptotic(p.alpha, p.beta, z, cfg.terms(p.alpha)).value;
    case Regime::laplace_inversion:
      require(p.alpha < 2.0, ErrorKind::regime_failure, "inversion needs alpha < 2");
      return ml_inversion(p.alpha, p.beta, z);
  }
  return 0.0;
}

// ---- Wright-type function

namespace {

SeriesSum wright_series(double gamma, cplx z) {
  const cld mz(-z.real(), -z.imag());
  const ld az = std::abs(mz);
  const ld peak = std::pow(az + 1.0L, 1.0L / (1.0L - gamma)) + 2.0L;
  cld pw = 1.0L, sum = 0.0L;
  ld abs_sum = 0.0L;
  SeriesSum out;
  int small = 0;
  for (int n = 0; n < 20000; ++n) {
    const ld x = 1.0L - gamma - static_cast<ld>(gamma) * n;
    if (x < -1700.0L) break;
    const cld t = pw * rgamma_l(x);
    sum += t;
    abs_sum += std::abs(t);
    if (n > peak && std::abs(t) <= eps_l * 1e-3L * abs_sum) {
      if (++small >= 4) {
        out.converged = true;
        break;
      }
    } else if (n > peak && t == 0.0L) {
      // zero from a pole of Gamma; neither resets nor advances the run
    } else {
      small = 0;
    }
    pw *= mz / static_cast<ld>(n + 1);
    if (!std::isfinite(std::abs(pw))) break;
  }
  out.value = cplx(static_cast<double>(sum.real()), static_cast<double>(sum.imag()));
  out.abs_sum = static_cast<double>(abs_sum);
  return out;
}

}  // namespace

cplx wright_psi(double gamma, cplx z) {
  require(std::isfinite(gamma) && gamma > 0 && gamma < 1, ErrorKind::parameter_out_of_range,
          "gamma must lie in (0,1)");
  require(std::isfinite(z.real()) && std::isfinite(z.imag()), ErrorKind::domain, "argument must be finite");
  const auto s = wright_series(gamma, z);
  if (s.converged && s.roundoff() <= std::max(1e-13 * std::abs(s.value), 1e-17)) return s.value;

  // Hankel contour through the saddle of mu - z mu^gamma.
  const cplx saddle = std::pow(gamma * z, 1.0 / (1.0 - gamma));
  if (z.imag() == 0.0 && z.real() > 0.0) {
    const double log_mag = -saddle.real() * (1.0 - gamma) / gamma;
    if (log_mag < -700.0) return 0.0;
  }
  const double c = std::max(1.0, saddle.real() > 0 ? saddle.real() : std::abs(saddle));
  auto g = [&](double u) -> cplx {
    const cplx w(1.0, u);
    const cplx mu = c * w * w;
    return w * std::pow(mu, gamma - 1.0) * std::exp(mu - z * std::pow(mu, gamma));
  };
  QuadratureConfig qc;
  qc.rel_tol = 1e-12;
  qc.abs_tol = 1e-300;
  const double h0 = std::min(0.25, 0.5 / std::sqrt(1.0 + 2.0 * c * (1.0 - gamma)));
  const auto r = quad::trapezoid_line(g, h0, qc, 12, 80.0);
  require(r.converged, ErrorKind::truncation, "Wright contour integral did not converge");
  return r.value * (c / pi);
}

double wright_psi(double gamma, double x) { return wright_psi(gamma, cplx(x, 0.0)).real(); }

double g_kernel(double beta, double t) {
  require(std::isfinite(beta) && beta >= 0, ErrorKind::parameter_out_of_range, "beta must be >= 0");
  require(beta != 0.0, ErrorKind::symbolic_delta, "g_0 is the Dirac delta");
  require(std::isfinite(t) && t > 0, ErrorKind::domain, "t must be > 0");
  if (beta < 170.0) return std::pow(t, beta - 1.0) / std::tgamma(beta);
  return std::exp((beta - 1.0) * std::log(t) - std::lgamma(beta));
}

Trajectory caputo_l1(const Trajectory& samples, double alpha) {
  require(std::isfinite(alpha) && alpha > 0 && alpha <= 1, ErrorKind::parameter_out_of_range,
          "alpha must lie in (0,1]");
  samples.validate();
  require(samples.size() >= 2, ErrorKind::grid, "need at least two samples");
  const auto h = samples.uniform_step();
  require(h.has_value() && *h > 0, ErrorKind::grid, "L1 scheme needs a uniform increasing grid");
  require(std::abs(samples.grid.front()) <= 1e-12 * std::abs(samples.grid.back()), ErrorKind::grid,
          "grid must start at t = 0");
  const std::size_t N = samples.size() - 1;
  std::vector<double> b(N);
  for (std::size_t k = 0; k < N; ++k)
    b[k] = std::pow(k + 1.0, 1.0 - alpha) - (k == 0 ? 0.0 : std::pow(static_cast<double>(k), 1.0 - alpha));
  const double c = std::pow(*h, -alpha) / std::tgamma(2.0 - alpha);
  std::vector<Vector> diffs(N);
  for (std::size_t j = 0; j < N; ++j) diffs[j] = samples.states[j + 1] - samples.states[j];
  Trajectory out;
  out.grid.assign(samples.grid.begin() + 1, samples.grid.end());
  out.states.reserve(N);
  for (std::size_t n = 1; n <= N; ++n) {
    Vector acc = Vector::Zero(samples.dim());
    for (std::size_t k = 0; k < n; ++k) acc += b[k] * diffs[n - k - 1];
    out.states.push_back(c * acc);
  }
  return out;
}

}  // namespace fracres::specfun
