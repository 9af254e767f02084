#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fracres {

enum class ErrorKind {
  parameter_out_of_range,
  domain,
  symbolic_delta,
  regime_failure,
  truncation,
  eigenvalue_collision,
  negative_real_spectrum,
  sectoriality,
  contour_too_close,
  not_diagonalizable,
  series_divergence,
  quadrature_failure,
  tail_bound,
  grid,
  integrator_failure,
  io,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// True for kinds that signal invalid input rather than a numerical failure.
constexpr bool is_validation(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::parameter_out_of_range:
    case ErrorKind::domain:
    case ErrorKind::symbolic_delta:
    case ErrorKind::negative_real_spectrum:
    case ErrorKind::sectoriality:
    case ErrorKind::not_diagonalizable:
    case ErrorKind::grid:
      return true;
    default:
      return false;
  }
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

}  // namespace fracres
