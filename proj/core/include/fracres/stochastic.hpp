#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "fracres/types.hpp"

namespace fracres::stochastic {

/// Philox4x32-10: four 32-bit outputs per (key, 128-bit counter). Streams are
/// independent by construction, so parallel draws are reproducible.
std::array<std::uint32_t, 4> philox(std::uint64_t key, std::uint64_t stream, std::uint64_t index);

/// Two uniforms in (0,1) from one counter value.
std::array<double, 2> uniform_pair(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

/// Kanter's representation: positive alpha-stable variate with E e^{-lambda S} = e^{-lambda^alpha}
/// from U ~ (0,1) (scaled to an angle) and V ~ (0,1) (giving E = -log V).
double kanter(double alpha, double u, double v);

struct StableSampler {
  double alpha = 0.5;
  std::uint64_t seed = 1;
  std::size_t count = 100000;

  void validate() const;
};

/// Samples are drawn in fixed blocks of this size, one counter stream per block.
inline constexpr std::size_t block_size = 4096;

std::vector<double> sample_stable(const StableSampler& s);

struct McEstimate {
  Vector estimate;
  RealVector stderr_;  ///< per component, from the complex sample variance
  std::size_t n = 0;
  std::uint64_t seed = 0;
};

/// (1/n) sum g(S_i) with a deterministic block-wise reduction.
McEstimate mc_mean(const std::function<Vector(double)>& g, const StableSampler& s);

/// (1/n) sum u((t/S_i)^alpha): the inverse-subordinator time change.
McEstimate mc_fractional_solution(const std::function<Vector(double)>& u, double t, const StableSampler& s);

/// (1/n) sum u(t^{1/alpha} S_i): the subordinator time change.
McEstimate mc_power_solution(const std::function<Vector(double)>& u, double t, const StableSampler& s);

/// Two-stage estimate of u(D(E(t))) with D, E of the same index: E(t) = (t/S)^alpha, then
/// D(E) = E^{1/alpha} S' from an independent draw of the same counter.
McEstimate mc_composition(const std::function<Vector(double)>& u, double t, const StableSampler& s);

/// Kolmogorov distance between the empirical law of t^{1/alpha} S and the density
/// p_alpha(t, .), with the CDF integrated by quadrature at `points` order statistics.
double ks_distance_to_kernel(std::vector<double> samples, double alpha, double t, std::size_t points = 1000);

}  // namespace fracres::stochastic
