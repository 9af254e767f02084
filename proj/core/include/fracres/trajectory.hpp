#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fracres/types.hpp"

namespace fracres {

/// Time grid plus one state vector per grid point.
struct Trajectory {
  std::vector<double> grid;
  std::vector<Vector> states;
  std::optional<std::vector<double>> residual_caputo;

  std::size_t size() const { return grid.size(); }
  Eigen::Index dim() const { return states.empty() ? 0 : states.front().size(); }

  /// Throws when grid and states disagree in length or dimension.
  void validate() const;

  /// Uniform step when the grid is uniform to 1e-9 relative; nullopt otherwise.
  std::optional<double> uniform_step() const;

  static Trajectory scalar(std::vector<double> grid, const std::vector<double>& values);
};

/// Writes `t,component_0,...` with 17 significant digits. Components with a
/// non-negligible imaginary part are written as `re+imi`.
void write_csv(std::ostream& os, const Trajectory& traj);

std::string format_double(double v);
std::string format_complex(cplx v);

}  // namespace fracres
