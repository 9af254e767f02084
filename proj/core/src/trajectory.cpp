#include "fracres/trajectory.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "fracres/error.hpp"

namespace fracres {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::parameter_out_of_range: return "parameter-out-of-range";
    case ErrorKind::domain: return "domain-error";
    case ErrorKind::symbolic_delta: return "symbolic-delta";
    case ErrorKind::regime_failure: return "regime-failure";
    case ErrorKind::truncation: return "truncation-error";
    case ErrorKind::eigenvalue_collision: return "eigenvalue-collision";
    case ErrorKind::negative_real_spectrum: return "negative-real-spectrum";
    case ErrorKind::sectoriality: return "sectoriality-violation";
    case ErrorKind::contour_too_close: return "contour-too-close-to-spectrum";
    case ErrorKind::not_diagonalizable: return "not-diagonalizable";
    case ErrorKind::series_divergence: return "series-divergence";
    case ErrorKind::quadrature_failure: return "quadrature-failure";
    case ErrorKind::tail_bound: return "tail-bound-failure";
    case ErrorKind::grid: return "grid-error";
    case ErrorKind::integrator_failure: return "integrator-failure";
    case ErrorKind::io: return "io-error";
  }
  return "unknown";
}

void QuadratureConfig::validate() const {
  require(rel_tol > 0 && abs_tol > 0, ErrorKind::parameter_out_of_range, "quadrature tolerances must be > 0");
  require(truncation > 0, ErrorKind::parameter_out_of_range, "truncation must be > 0");
  require(max_subdiv > 0, ErrorKind::parameter_out_of_range, "max_subdiv must be > 0");
}

void Trajectory::validate() const {
  require(grid.size() == states.size(), ErrorKind::grid, "grid and states differ in length");
  for (const auto& s : states)
    require(s.size() == dim(), ErrorKind::grid, "states differ in dimension");
}

std::optional<double> Trajectory::uniform_step() const {
  if (grid.size() < 2) return std::nullopt;
  const double h = (grid.back() - grid.front()) / static_cast<double>(grid.size() - 1);
  for (std::size_t j = 1; j < grid.size(); ++j) {
    if (std::abs((grid[j] - grid[j - 1]) - h) > 1e-9 * std::abs(h)) return std::nullopt;
  }
  return h;
}

Trajectory Trajectory::scalar(std::vector<double> grid, const std::vector<double>& values) {
  Trajectory t;
  t.grid = std::move(grid);
  t.states.reserve(values.size());
  for (double v : values) t.states.push_back(Vector::Constant(1, cplx(v, 0.0)));
  return t;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_complex(cplx v) {
  if (v.imag() == 0.0) return format_double(v.real());
  char buf[80];
  std::snprintf(buf, sizeof buf, "%.17g%+.17gi", v.real(), v.imag());
  return buf;
}

void write_csv(std::ostream& os, const Trajectory& traj) {
  os << "t";
  for (Eigen::Index i = 0; i < traj.dim(); ++i) os << ",component_" << i;
  os << '\n';
  for (std::size_t j = 0; j < traj.size(); ++j) {
    os << format_double(traj.grid[j]);
    const Vector& s = traj.states[j];
    const double scale = std::max(1.0, s.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      const cplx v = s(i);
      os << ',' << (std::abs(v.imag()) <= 1e-12 * scale ? format_double(v.real()) : format_complex(v));
    }
    os << '\n';
  }
}

}  // namespace fracres
