#pragma once

// Adaptive Gauss-Kronrod and double-exponential integrators. The integrands may
// return double, std::complex<double>, or dense Eigen vectors/matrices.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <queue>
#include <type_traits>
#include <utility>
#include <vector>

#include "fracres/error.hpp"
#include "fracres/types.hpp"

namespace fracres::quad {

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const cplx& v) { return std::abs(v); }
template <class Derived>
double magnitude(const Eigen::MatrixBase<Derived>& m) {
  return m.norm();
}

inline bool finite(double v) { return std::isfinite(v); }
inline bool finite(const cplx& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }
template <class Derived>
bool finite(const Eigen::MatrixBase<Derived>& m) {
  return m.allFinite();
}

template <class V>
struct Result {
  V value{};
  double error = 0.0;
  int evaluations = 0;
  bool converged = false;
};

template <class F>
using value_t = std::decay_t<std::invoke_result_t<F&, double>>;

namespace detail {

// QUADPACK qk21 abscissae and weights.
inline constexpr double xgk[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
inline constexpr double wgk[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208980138212, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
inline constexpr double wg[5] = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

template <class V>
struct Segment {
  double a, b;
  V value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F, class V = value_t<F>>
Segment<V> kronrod21(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  V fc = f(center);
  V kron = fc * wgk[10];
  V gauss = fc * 0.0;
  for (int j = 0; j < 10; ++j) {
    const double dx = half * xgk[j];
    V f1 = f(center - dx);
    V f2 = f(center + dx);
    V s = f1 + f2;
    kron += s * wgk[j];
    if (j % 2 == 1) gauss += s * wg[j / 2];
  }
  kron *= half;
  gauss *= half;
  const double err = magnitude(V(kron - gauss));
  return {a, b, std::move(kron), err};
}

}  // namespace detail

/// Globally adaptive 21-point Gauss-Kronrod on [a, b].
template <class F>
Result<value_t<F>> gauss_kronrod(F&& f, double a, double b, const QuadratureConfig& cfg) {
  using V = value_t<F>;
  Result<V> out;
  if (a == b) {
    out.value = f(a) * 0.0;
    out.converged = true;
    return out;
  }
  std::priority_queue<detail::Segment<V>> heap;
  auto first = detail::kronrod21(f, a, b);
  out.evaluations = 21;
  V total = first.value;
  double err = first.error;
  heap.push(std::move(first));
  int subdiv = 1;
  while (err > std::max(cfg.abs_tol, cfg.rel_tol * magnitude(total)) && subdiv < cfg.max_subdiv) {
    auto worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      heap.push(std::move(worst));
      break;
    }
    auto left = detail::kronrod21(f, worst.a, mid);
    auto right = detail::kronrod21(f, mid, worst.b);
    out.evaluations += 42;
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(std::move(left));
    heap.push(std::move(right));
    ++subdiv;
  }
  // Re-sum to shed the drift of the incremental updates.
  V sum = heap.top().value * 0.0;
  double esum = 0.0;
  while (!heap.empty()) {
    sum += heap.top().value;
    esum += heap.top().error;
    heap.pop();
  }
  out.value = std::move(sum);
  out.error = esum;
  out.converged = esum <= std::max(cfg.abs_tol, cfg.rel_tol * magnitude(out.value));
  return out;
}

namespace detail {

// Level-doubling trapezoid sum over u in [lo, hi] for a transformed integrand
// term(u) that already includes the Jacobian. Stops adding nodes at a side
// once terms there are negligible.
template <class Term>
auto de_trapezoid(Term&& term, double lo, double hi, const QuadratureConfig& cfg, int max_levels)
    -> Result<std::decay_t<decltype(*term(0.0))>> {
  using V = std::decay_t<decltype(*term(0.0))>;
  Result<V> out;
  const double eps = std::numeric_limits<double>::epsilon();

  // Level 0 with h = 1/2, walking outward from the origin to find the live range.
  double h = 0.5;
  auto c0 = term(0.0);
  out.evaluations = 1;
  V sum = c0 ? *c0 : V{};
  bool have = static_cast<bool>(c0);
  double umin = 0.0, umax = 0.0;
  for (int dir = -1; dir <= 1; dir += 2) {
    int small_run = 0;
    for (int k = 1;; ++k) {
      const double u = dir * k * h;
      if (u < lo || u > hi) break;
      auto tk = term(u);
      ++out.evaluations;
      if (!tk) break;
      if (!have) {
        sum = *tk;
        have = true;
      } else {
        sum += *tk;
      }
      if (dir < 0) umin = u; else umax = u;
      const double mag = magnitude(*tk);
      const double ref = magnitude(sum);
      if (ref > 0 && mag <= eps * 1e-2 * ref) {
        if (++small_run >= 2) break;
      } else {
        small_run = 0;
      }
    }
  }
  if (!have) fail(ErrorKind::quadrature_failure, "integrand undefined on the whole range");
  V estimate = sum * h;
  double diff = std::numeric_limits<double>::infinity();
  for (int level = 1; level <= max_levels; ++level) {
    h *= 0.5;
    V add = sum * 0.0;
    for (double u = umin + h; u < umax; u += 2 * h) {
      auto tk = term(u);
      ++out.evaluations;
      if (tk) add += *tk;
    }
    sum += add;
    V next = sum * h;
    diff = magnitude(V(next - estimate));
    estimate = std::move(next);
    if (level >= 2 && diff <= std::max(cfg.abs_tol, cfg.rel_tol * magnitude(estimate))) {
      out.converged = true;
      break;
    }
  }
  out.value = std::move(estimate);
  out.error = diff;
  return out;
}

}  // namespace detail

/// Exp-sinh rule on [a, inf). Integrable algebraic singularities at a and
/// algebraic or exponential decay at infinity are handled without truncation.
template <class F>
Result<value_t<F>> exp_sinh(F&& f, double a, const QuadratureConfig& cfg, int max_levels = 8) {
  using V = value_t<F>;
  const double half_pi = 0.5 * pi;
  auto term = [&](double u) -> std::optional<V> {
    const double e = std::exp(half_pi * std::sinh(u));
    const double x = a + e;
    if (!(x > a) || !std::isfinite(x) || e > 1e250) return std::nullopt;
    const double w = half_pi * std::cosh(u) * e;
    V v = f(x);
    if (!finite(v)) return std::nullopt;
    return V(v * w);
  };
  return detail::de_trapezoid(term, -6.5, 6.5, cfg, max_levels);
}

/// Tanh-sinh rule on (a, b); tolerates integrable singularities at both ends.
template <class F>
Result<value_t<F>> tanh_sinh(F&& f, double a, double b, const QuadratureConfig& cfg, int max_levels = 8) {
  using V = value_t<F>;
  const double half_pi = 0.5 * pi;
  const double len = b - a;
  auto term = [&](double u) -> std::optional<V> {
    const double v = half_pi * std::sinh(u);
    const double ev = std::exp(-2.0 * std::abs(v));
    // distance fraction to the nearer endpoint
    const double near = ev / (1.0 + ev);
    const double x = v < 0 ? a + len * near : b - len * near;
    if (!(x > a && x < b)) return std::nullopt;
    const double sech2 = 4.0 * ev / ((1.0 + ev) * (1.0 + ev));
    const double w = 0.25 * pi * len * std::cosh(u) * sech2;
    V val = f(x);
    if (!finite(val)) return std::nullopt;
    return V(val * w);
  };
  return detail::de_trapezoid(term, -4.5, 4.5, cfg, max_levels);
}

/// Trapezoid rule on the whole real line for an analytic, decaying integrand,
/// refined by step halving until successive sums agree.
template <class F>
Result<value_t<F>> trapezoid_line(F&& g, double h0, const QuadratureConfig& cfg, int max_levels = 10,
                                  double umax_limit = 60.0) {
  using V = value_t<F>;
  Result<V> out;
  const double eps = std::numeric_limits<double>::epsilon();
  double h = h0;
  V sum = g(0.0);
  out.evaluations = 1;
  double umin = 0.0, umax = 0.0;
  for (int dir = -1; dir <= 1; dir += 2) {
    int small_run = 0;
    for (int k = 1;; ++k) {
      const double u = dir * k * h;
      if (std::abs(u) > umax_limit) break;
      V v = g(u);
      ++out.evaluations;
      if (!finite(v)) fail(ErrorKind::quadrature_failure, "non-finite integrand on contour");
      sum += v;
      if (dir < 0) umin = u; else umax = u;
      const double ref = magnitude(sum);
      if (ref > 0 && magnitude(v) <= eps * 1e-2 * ref) {
        if (++small_run >= 3) break;
      } else {
        small_run = 0;
      }
    }
  }
  V estimate = sum * h;
  double diff = std::numeric_limits<double>::infinity();
  for (int level = 1; level <= max_levels; ++level) {
    h *= 0.5;
    V add = sum * 0.0;
    for (double u = umin + h; u < umax; u += 2 * h) {
      V v = g(u);
      ++out.evaluations;
      if (!finite(v)) fail(ErrorKind::quadrature_failure, "non-finite integrand on contour");
      add += v;
    }
    sum += add;
    V next = sum * h;
    diff = magnitude(V(next - estimate));
    estimate = std::move(next);
    if (diff <= std::max(cfg.abs_tol, cfg.rel_tol * magnitude(estimate))) {
      out.converged = true;
      break;
    }
  }
  out.value = std::move(estimate);
  out.error = diff;
  return out;
}

/// Wynn epsilon extrapolation of a sequence of partial sums; returns the
/// entry of the highest even column.
inline double wynn_extrapolate(const std::vector<double>& partial) {
  const std::size_t n = partial.size();
  if (n == 0) return 0.0;
  std::vector<double> a(n, 0.0), b(partial);
  double best = partial.back();
  int col = 0;
  while (b.size() >= 2) {
    std::vector<double> c(b.size() - 1);
    for (std::size_t i = 0; i + 1 < b.size(); ++i) {
      const double d = b[i + 1] - b[i];
      if (d == 0.0 || !std::isfinite(d)) return best;
      c[i] = a[i + 1] + 1.0 / d;
    }
    ++col;
    if (col % 2 == 0) best = c.back();
    a = std::move(b);
    b = std::move(c);
  }
  return best;
}

/// Limit of base + sum_k piece(k) for slowly converging, oscillating block
/// integrals, accelerated componentwise with the epsilon algorithm.
template <class Piece, class V>
Result<V> wynn_series(Piece&& piece, V base, const QuadratureConfig& cfg, int min_terms = 8, int max_terms = 80) {
  Result<V> out;
  V s = base;
  std::vector<V> partial;
  V last = base;
  double last_diff = std::numeric_limits<double>::infinity();
  auto components = [](const V& v) {
    if constexpr (std::is_same_v<V, double>) {
      return std::vector<double>{v};
    } else if constexpr (std::is_same_v<V, cplx>) {
      return std::vector<double>{v.real(), v.imag()};
    } else {
      std::vector<double> c;
      c.reserve(2 * v.size());
      for (Eigen::Index i = 0; i < v.size(); ++i) {
        c.push_back(v(i).real());
        c.push_back(v(i).imag());
      }
      return c;
    }
  };
  for (int k = 0; k < max_terms; ++k) {
    s += piece(k);
    partial.push_back(s);
    ++out.evaluations;
    const std::size_t ncomp = components(s).size();
    std::vector<std::vector<double>> seq(ncomp);
    for (const auto& p : partial) {
      auto c = components(p);
      for (std::size_t j = 0; j < ncomp; ++j) seq[j].push_back(c[j]);
    }
    std::vector<double> acc(ncomp);
    for (std::size_t j = 0; j < ncomp; ++j) acc[j] = wynn_extrapolate(seq[j]);
    V best = s;
    if constexpr (std::is_same_v<V, double>) {
      best = acc[0];
    } else if constexpr (std::is_same_v<V, cplx>) {
      best = cplx(acc[0], acc[1]);
    } else {
      for (Eigen::Index i = 0; i < best.size(); ++i) best(i) = cplx(acc[2 * i], acc[2 * i + 1]);
    }
    if (k > 0) {
      const double diff = magnitude(V(best - last));
      const double tol = std::max(cfg.abs_tol, cfg.rel_tol * magnitude(best));
      if (k + 1 >= min_terms && diff <= tol && last_diff <= tol) {
        out.value = best;
        out.error = diff;
        out.converged = true;
        return out;
      }
      last_diff = diff;
    }
    last = best;
  }
  out.value = last;
  out.error = last_diff;
  return out;
}

/// int_a^inf f for an integrand that oscillates with the given half period and
/// decays slowly: Gauss-Kronrod blocks, summed with epsilon acceleration.
template <class F>
Result<value_t<F>> oscillatory_halfline(F&& f, double a, double half_period, const QuadratureConfig& cfg,
                                        int max_blocks = 200) {
  using V = value_t<F>;
  QuadratureConfig block = cfg;
  block.abs_tol = cfg.abs_tol * 1e-2;
  auto piece = [&](int k) -> V {
    return gauss_kronrod(f, a + k * half_period, a + (k + 1) * half_period, block).value;
  };
  V zero = f(a) * 0.0;
  return wynn_series(piece, zero, cfg, 8, max_blocks);
}

}  // namespace fracres::quad
