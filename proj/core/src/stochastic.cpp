#include "fracres/stochastic.hpp"

#include <algorithm>
#include <cmath>

#include "fracres/error.hpp"
#include "fracres/kernels.hpp"
#include "fracres/parallel.hpp"
#include "fracres/quadrature.hpp"

namespace fracres::stochastic {

std::array<std::uint32_t, 4> philox(std::uint64_t key, std::uint64_t stream, std::uint64_t index) {
  constexpr std::uint64_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
  constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
  std::uint32_t c[4] = {static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                        static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  std::uint32_t k0 = static_cast<std::uint32_t>(key), k1 = static_cast<std::uint32_t>(key >> 32);
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = M0 * c[0], p1 = M1 * c[2];
    const std::uint32_t n0 = static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k0;
    const std::uint32_t n1 = static_cast<std::uint32_t>(p1);
    const std::uint32_t n2 = static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k1;
    const std::uint32_t n3 = static_cast<std::uint32_t>(p0);
    c[0] = n0;
    c[1] = n1;
    c[2] = n2;
    c[3] = n3;
    k0 += W0;
    k1 += W1;
  }
  return {c[0], c[1], c[2], c[3]};
}

std::array<double, 2> uniform_pair(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  const auto w = philox(seed, stream, index);
  auto to_unit = [](std::uint32_t lo, std::uint32_t hi) {
    const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 32 | lo) >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
  };
  return {to_unit(w[0], w[1]), to_unit(w[2], w[3])};
}

double kanter(double alpha, double u, double v) {
  const double a = alpha, th = pi * u;
  // log A(th) = (a/(1-a)) log sin(a th) + log sin((1-a) th) - (1/(1-a)) log sin th
  const double logA = a / (1.0 - a) * std::log(std::sin(a * th)) + std::log(std::sin((1.0 - a) * th)) -
                      std::log(std::sin(th)) / (1.0 - a);
  const double logE = std::log(-std::log(v));
  return std::exp((1.0 - a) / a * (logA - logE));
}

void StableSampler::validate() const {
  require(std::isfinite(alpha) && alpha > 0 && alpha < 1, ErrorKind::parameter_out_of_range,
          "stable index must lie in (0,1)");
  require(count >= 2, ErrorKind::parameter_out_of_range, "need at least two samples");
}

namespace {

constexpr std::uint64_t second_stream = 1ull << 63;

struct Moments {
  std::size_t n = 0;
  Vector mean;
  RealVector m2;
};

Moments combine(const Moments& a, const Moments& b) {
  if (a.n == 0) return b;
  if (b.n == 0) return a;
  Moments out;
  out.n = a.n + b.n;
  const Vector delta = b.mean - a.mean;
  const double wa = static_cast<double>(a.n), wb = static_cast<double>(b.n), w = static_cast<double>(out.n);
  out.mean = a.mean + delta * (wb / w);
  out.m2 = a.m2 + b.m2 + delta.cwiseAbs2() * (wa * wb / w);
  return out;
}

// Fixed-order pairwise combination, independent of thread scheduling.
Moments reduce_pairwise(std::vector<Moments>& parts, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return parts[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  return combine(reduce_pairwise(parts, lo, mid), reduce_pairwise(parts, mid, hi));
}

// g(stream, index) evaluated per sample; blocks of block_size use stream = block.
McEstimate estimate(const std::function<Vector(std::uint64_t, std::uint64_t)>& g, const StableSampler& s) {
  s.validate();
  const std::size_t blocks = (s.count + block_size - 1) / block_size;
  std::vector<Moments> parts(blocks);
  parallel::for_each_index(blocks, [&](std::size_t b) {
    const std::size_t lo = b * block_size, hi = std::min(s.count, lo + block_size);
    Moments m;
    for (std::size_t i = lo; i < hi; ++i) {
      const Vector x = g(b, i - lo);
      if (m.n == 0) {
        m.n = 1;
        m.mean = x;
        m.m2 = RealVector::Zero(x.size());
        continue;
      }
      ++m.n;
      const Vector d = x - m.mean;
      m.mean += d / static_cast<double>(m.n);
      m.m2 += (d.array() * (x - m.mean).conjugate().array()).real().matrix();
    }
    parts[b] = std::move(m);
  });
  const Moments total = reduce_pairwise(parts, 0, blocks);
  McEstimate out;
  out.estimate = total.mean;
  out.stderr_ = (total.m2.array().max(0.0) / (static_cast<double>(total.n - 1) * total.n)).sqrt().matrix();
  out.n = total.n;
  out.seed = s.seed;
  return out;
}

double draw(const StableSampler& s, std::uint64_t stream, std::uint64_t index) {
  const auto u = uniform_pair(s.seed, stream, index);
  return kanter(s.alpha, u[0], u[1]);
}

}  // namespace

std::vector<double> sample_stable(const StableSampler& s) {
  s.validate();
  std::vector<double> out(s.count);
  const std::size_t blocks = (s.count + block_size - 1) / block_size;
  parallel::for_each_index(blocks, [&](std::size_t b) {
    const std::size_t lo = b * block_size, hi = std::min(s.count, lo + block_size);
    for (std::size_t i = lo; i < hi; ++i) out[i] = draw(s, b, i - lo);
  });
  return out;
}

McEstimate mc_mean(const std::function<Vector(double)>& g, const StableSampler& s) {
  return estimate([&](std::uint64_t b, std::uint64_t i) { return g(draw(s, b, i)); }, s);
}

McEstimate mc_fractional_solution(const std::function<Vector(double)>& u, double t, const StableSampler& s) {
  require(std::isfinite(t) && t > 0, ErrorKind::domain, "t must be > 0");
  return mc_mean([&](double S) { return u(std::pow(t / S, s.alpha)); }, s);
}

McEstimate mc_power_solution(const std::function<Vector(double)>& u, double t, const StableSampler& s) {
  require(std::isfinite(t) && t > 0, ErrorKind::domain, "t must be > 0");
  const double scale = std::pow(t, 1.0 / s.alpha);
  return mc_mean([&](double S) { return u(scale * S); }, s);
}

McEstimate mc_composition(const std::function<Vector(double)>& u, double t, const StableSampler& s) {
  require(std::isfinite(t) && t > 0, ErrorKind::domain, "t must be > 0");
  return estimate(
      [&](std::uint64_t b, std::uint64_t i) {
        const double E = std::pow(t / draw(s, b, i), s.alpha);
        return u(std::pow(E, 1.0 / s.alpha) * draw(s, b | second_stream, i));
      },
      s);
}

double ks_distance_to_kernel(std::vector<double> samples, double alpha, double t, std::size_t points) {
  require(samples.size() >= 2, ErrorKind::parameter_out_of_range, "need samples");
  require(points >= 2, ErrorKind::parameter_out_of_range, "need at least two CDF points");
  require(std::isfinite(t) && t > 0, ErrorKind::domain, "t must be > 0");
  const double scale = std::pow(t, 1.0 / alpha);
  for (double& x : samples) x *= scale;
  std::sort(samples.begin(), samples.end());
  const std::size_t n = samples.size();
  points = std::min(points, n);
  std::vector<std::size_t> idx(points);
  for (std::size_t k = 0; k < points; ++k) idx[k] = std::min(n - 1, (k + 1) * n / (points + 1));
  std::vector<double> piece(points);
  QuadratureConfig qc;
  qc.rel_tol = 1e-10;
  qc.abs_tol = 1e-13;
  auto p = [&](double s) { return s <= 0.0 ? 0.0 : kernels::p_kernel(alpha, t, s); };
  parallel::for_each_index(points, [&](std::size_t k) {
    const double a = k == 0 ? 0.0 : samples[idx[k - 1]], b = samples[idx[k]];
    if (b <= a) return;
    const auto r = k == 0 ? quad::tanh_sinh(p, a, b, qc, 10) : quad::gauss_kronrod(p, a, b, qc);
    require(r.converged, ErrorKind::quadrature_failure, "CDF quadrature did not converge");
    piece[k] = r.value;
  });
  double F = 0.0, D = 0.0;
  for (std::size_t k = 0; k < points; ++k) {
    F += piece[k];
    const double lo = static_cast<double>(idx[k]) / n, hi = static_cast<double>(idx[k] + 1) / n;
    D = std::max({D, std::abs(F - lo), std::abs(F - hi)});
  }
  return D;
}

}  // namespace fracres::stochastic
