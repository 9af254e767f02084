#include "fracres/verify.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "fracres/cauchy.hpp"
#include "fracres/error.hpp"
#include "fracres/kernels.hpp"
#include "fracres/linop.hpp"
#include "fracres/parallel.hpp"
#include "fracres/quadrature.hpp"
#include "fracres/resolvent.hpp"
#include "fracres/specfun.hpp"
#include "fracres/stochastic.hpp"
#include "fracres/subordinate.hpp"
#include "fracres/trajectory.hpp"

namespace fracres::verify {

Suite parse_suite(const std::string& s) {
  if (s == "specfun") return Suite::specfun;
  if (s == "kernels") return Suite::kernels;
  if (s == "subordination") return Suite::subordination;
  if (s == "cauchy") return Suite::cauchy;
  if (s == "stochastic") return Suite::stochastic;
  if (s == "all") return Suite::all;
  fail(ErrorKind::parameter_out_of_range, "unknown suite '" + s + "'");
}

const char* to_string(Suite s) {
  switch (s) {
    case Suite::specfun: return "specfun";
    case Suite::kernels: return "kernels";
    case Suite::subordination: return "subordination";
    case Suite::cauchy: return "cauchy";
    case Suite::stochastic: return "stochastic";
    case Suite::all: return "all";
  }
  return "?";
}

std::vector<int> criteria_of(Suite s) {
  switch (s) {
    case Suite::specfun: return {1, 2};
    case Suite::kernels: return {3, 4, 5, 11};
    case Suite::subordination: return {6, 7};
    case Suite::cauchy: return {8, 9};
    case Suite::stochastic: return {10};
    case Suite::all: return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
  }
  return {};
}

namespace {

using linop::MatrixOperator;

// Worst case over a criterion's checks; each check has its own threshold and
// the row reports the largest error/threshold ratio.
struct Tally {
  double ratio = 0.0;
  double measured = 0.0;
  double tolerance = 0.0;
  std::string where;
  bool any = false;

  void add(double err, double tol, const std::string& label) {
    const double r = std::isfinite(err) ? err / tol : std::numeric_limits<double>::infinity();
    if (!any || r > ratio || std::isnan(err)) {
      ratio = std::isnan(err) ? std::numeric_limits<double>::infinity() : r;
      measured = err;
      tolerance = tol;
      where = label;
      any = true;
    }
  }
};

std::string label(std::initializer_list<std::pair<const char*, double>> kv) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, v] : kv) {
    os << (first ? "" : " ") << k << "=" << v;
    first = false;
  }
  return os.str();
}

double tighten(double pinned, const Options& opt) { return opt.tol ? std::min(pinned, *opt.tol) : pinned; }

Vector unit(Eigen::Index n) { return Vector::Ones(n) / std::sqrt(static_cast<double>(n)); }

void special_functions(Tally& T, const Options& opt) {
  const double tol_cos = tighten(1e-10, opt), tol_exp = tighten(1e-12, opt), tol_half = tighten(1e-8, opt);
  for (int i = 0; i < 50; ++i) {
    const double x = 10.0 * i / 49.0;
    const double v = specfun::mittag_leffler(specfun::MLParams{2.0, 1.0}, -x * x);
    T.add(std::abs(v - std::cos(x)), tol_cos, label({{"E2 x", x}}));
  }
  for (double r : {0.0, 0.5, 1.0, 2.0, 3.5, 5.0})
    for (int k = 0; k < 16; ++k) {
      const cplx z = std::polar(r, 2 * pi * k / 16.0);
      const cplx v = specfun::mittag_leffler(specfun::MLParams{1.0, 1.0}, z);
      T.add(std::abs(v - std::exp(z)) / std::abs(std::exp(z)), tol_exp, label({{"E1 |z|", r}, {"arg", 2 * pi * k / 16}}));
    }
  // E_{1/2}(-x) = exp(x^2) erfc(x)
  for (int i = 0; i <= 50; ++i) {
    const double x = 5.0 * i / 50.0;
    const double ref = std::exp(x * x) * std::erfc(x);
    T.add(std::abs(specfun::mittag_leffler(0.5, -x) - ref) / ref, tol_half, label({{"E1/2 x", x}}));
  }
}

void laplace_integral(Tally& T, const Options& opt) {
  const double tol = tighten(1e-6, opt);
  const double lam = 2.0, w = 1.0, beta = 1.0, horizon = 60.0;
  QuadratureConfig qc;
  qc.rel_tol = 1e-12;
  qc.abs_tol = 1e-15;
  for (double alpha : {0.5, 1.0, 1.5}) {
    const specfun::MLParams p{alpha, beta};
    auto f = [&](double t) {
      if (t <= 0) return beta == 1.0 ? 1.0 : 0.0;
      return std::exp(-lam * t) * std::pow(t, beta - 1) * specfun::mittag_leffler(p, w * std::pow(t, alpha));
    };
    const auto r = quad::tanh_sinh(f, 0.0, horizon, qc, 10);
    // integrand is below (2/alpha) e^{-t} past the horizon
    const double tail = 2.0 / alpha * std::exp(-horizon);
    const double exact = std::pow(lam, alpha - beta) / (std::pow(lam, alpha) - w);
    T.add(r.converged ? std::abs(r.value - exact) + tail : std::numeric_limits<double>::infinity(), tol,
          label({{"alpha", alpha}}));
  }
}

void kernel_masses(Tally& T, const Options& opt) {
  const double tol = tighten(1e-6, opt);
  for (double t : {0.5, 1.0, 2.0}) {
    for (double a : {0.3, 0.5, 0.7, 0.9}) {
      T.add(std::abs(kernels::kernel_mass(kernels::KernelSpec::phi(a), t) - 1.0), tol, label({{"phi g", a}, {"t", t}}));
      T.add(std::abs(kernels::kernel_mass(kernels::KernelSpec::p(a), t) - 1.0), tol, label({{"p a", a}, {"t", t}}));
    }
    for (double a : {0.5, 1.0, 2.0})
      T.add(std::abs(kernels::kernel_mass(kernels::KernelSpec::half(a), t) - 1.0), tol, label({{"half a", a}, {"t", t}}));
  }
}

void kernel_characterizations(Tally& T, std::string& note, const Options& opt) {
  const double tol = tighten(1e-6, opt), tol_point = tighten(1e-12, opt);
  const std::vector<double> lams{0.5, 1.0, 2.0};
  auto run = [&](const kernels::KernelSpec& spec, const char* name, double par) {
    const auto res = kernels::kernel_laplace_check(spec, 1.0, lams);
    for (std::size_t i = 0; i < res.size(); ++i) T.add(res[i], tol, label({{name, par}, {"lambda", lams[i]}}));
  };
  for (double a : {0.3, 0.5, 0.7}) {
    run(kernels::KernelSpec::p(a), "p a", a);
    run(kernels::KernelSpec::phi(a), "phi g", a);
  }
  run(kernels::KernelSpec::f(1.0, 0.5, 0.5), "composition a'", 0.5);
  // general Wright route against the closed forms at index 1/2
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j) {
      const double t = 0.25 + 3.75 * i / 19.0, s = 0.25 + 3.75 * j / 19.0;
      const double phi = std::exp(-s * s / (4 * t)) / std::sqrt(pi * t);
      const double phi_w = specfun::wright_psi(0.5, s / std::sqrt(t)) / std::sqrt(t);
      T.add(std::abs(phi - phi_w) / std::max(1.0, phi), tol_point, label({{"phi1/2 t", t}, {"s", s}}));
      const double p = t * std::exp(-t * t / (4 * s)) / (2 * std::sqrt(pi) * std::pow(s, 1.5));
      const double z = t / std::sqrt(s);
      const double p_w = 0.5 * z / s * specfun::wright_psi(0.5, z);
      T.add(std::abs(p - p_w) / std::max(1.0, p), tol_point, label({{"p1/2 t", t}, {"s", s}}));
    }
  std::ostringstream os;
  for (const auto& rep : kernels::validate_real_forms())
    os << " " << rep.form << ":" << (rep.chosen == kernels::Variant::printed ? "printed" : "corrected");
  note = os.str();
}

Matrix denman_beavers_sqrt(const Matrix& A) {
  Matrix Y = A, Z = Matrix::Identity(A.rows(), A.cols());
  for (int k = 0; k < 100; ++k) {
    const Matrix Yn = 0.5 * (Y + Z.inverse());
    const Matrix Zn = 0.5 * (Z + Y.inverse());
    const double change = (Yn - Y).norm();
    Y = Yn;
    Z = Zn;
    if (change <= 1e-15 * Y.norm()) break;
  }
  return Y;
}

MatrixOperator random_spd(std::uint64_t seed, int n) {
  Matrix M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M(i, j) = 2.0 * stochastic::uniform_pair(seed, 99, i * n + j)[0] - 1.0;
  return MatrixOperator(Matrix(M.adjoint() * M + Matrix::Identity(n, n)));
}

void fractional_powers(Tally& T, const Options& opt) {
  const double tol = tighten(1e-8, opt);
  const std::vector<std::pair<const char*, MatrixOperator>> cases{
      {"diag(1,4)", MatrixOperator::diagonal({1.0, 4.0})}, {"spd4", random_spd(opt.seed, 4)}};
  for (const auto& [name, A] : cases)
    for (double b : {0.3, 0.5, 0.8, 1.5}) {
      const Matrix bal = linop::fractional_power(A, b).entries();
      const Matrix spec = linop::fractional_power_spectral(A, b);
      T.add((bal - spec).norm(), tol, std::string(name) + " " + label({{"b", b}}));
    }
  Matrix J(2, 2);
  J << 4.0, 1.0, 0.0, 4.0;
  const Matrix root = linop::fractional_power(MatrixOperator(J), 0.5).entries();
  T.add((root - denman_beavers_sqrt(J)).norm(), tol, "jordan sqrt");
}

void angle_planner(Tally& T, const Options&) {
  // closed-form arithmetic must agree to rounding
  const double tol = 4 * std::numeric_limits<double>::epsilon();
  const auto d = linop::angle_plan(2.0, 0.0, 0.5, 1.0);
  T.add(d.valid ? std::abs(d.result_angle - pi / 2) : 1.0, tol, "alpha=2 beta=1/2 gamma=1");
  for (double a : {0.5, 1.0, 1.5, 2.0}) {
    const auto e = linop::angle_plan(a, 0.0, 0.5, a / 2);
    T.add(e.valid ? std::abs(e.result_angle - pi / 2) : 1.0, tol, label({{"half-power alpha", a}}));
  }
  const double grid[10][2] = {{0.5, 0.0}, {0.5, 0.4}, {0.8, 0.3}, {1.0, 0.0}, {1.0, 0.7},
                              {1.2, 0.5}, {1.5, 0.2}, {1.5, 0.6}, {1.8, 0.1}, {2.0, 0.0}};
  for (const auto& g : grid) {
    const double a = g[0], th = g[1];
    const double expect = std::min(pi / a - th / a - pi / 2, pi / 2);
    T.add(std::abs(linop::analytic_angle_from_sector(th, a) - expect), tol, label({{"alpha", a}, {"theta", th}}));
  }
}

void subordination_identity(Tally& T, const Options& opt) {
  struct Case {
    MatrixOperator A;
    double alpha, beta, gamma;
    const char* name;
  };
  const std::vector<Case> cases{
      {MatrixOperator::scalar(2.0), 1.0, 0.5, 0.5, "rho=2 a=1 g=1/2 b=1/2"},
      {MatrixOperator::scalar(2.0), 1.0, 1.0, 0.5, "rho=2 a=1 g=1/2 b=1"},
      {MatrixOperator::scalar(2.0), 2.0, 0.5, 1.0, "rho=2 a=2 g=1 b=1/2"},
      {MatrixOperator::diagonal({1.0, 4.0}), 1.0, 0.5, 0.5, "diag(1,4) a=1 g=1/2 b=1/2"},
      {MatrixOperator::diagonal({1.0, 4.0}), 2.0, 0.5, 1.0, "diag(1,4) a=2 g=1 b=1/2"},
  };
  for (const auto& c : cases) {
    subordinate::SubordinationCase sc{c.A, c.alpha, c.beta, c.gamma, {0.5, 1.0, 2.0}, unit(c.A.dim())};
    const double tol = tighten(c.alpha == 2.0 ? 1e-4 : 1e-5, opt);
    const auto res = subordinate::verify_theorem_main(sc);
    for (std::size_t i = 0; i < res.size(); ++i)
      T.add(res[i], tol, std::string(c.name) + " " + label({{"t", sc.t_grid[i]}}));
  }
}

void half_power(Tally& T, const Options& opt) {
  const Vector x = Vector::Ones(1);
  const double tol_cos = tighten(1e-4, opt), tol_sg = tighten(1e-5, opt);
  for (double a : {1.0, 2.0})
    for (double t : {0.5, 1.0}) {
      const resolvent::ResolventFamily F{MatrixOperator::scalar(a * a), 2.0, resolvent::Method::spectral};
      const Vector v = subordinate::subordinate_apply(F, kernels::KernelSpec::half(2.0), t, x);
      T.add(std::abs(v(0) - std::exp(-a * t)), tol_cos, label({{"cosine a", a}, {"t", t}}));
    }
  for (double rho : {1.0, 2.0})
    for (double t : {0.5, 1.0}) {
      const resolvent::ResolventFamily F{MatrixOperator::scalar(rho), 1.0, resolvent::Method::spectral};
      const Vector v = subordinate::subordinate_apply(F, kernels::KernelSpec::half(1.0), t, x);
      const double ref = specfun::mittag_leffler(0.5, -std::sqrt(rho) * std::sqrt(t));
      T.add(std::abs(v(0) - ref), tol_sg, label({{"semigroup rho", rho}, {"t", t}}));
    }
}

cauchy::CauchyProblem one_over_m_problem(const MatrixOperator& A, int m) {
  cauchy::CauchyProblem p{A, 1.0 / m, cauchy::Sign::minus, {}, cauchy::uniform_grid(2.0, 200), std::nullopt};
  p.initial_values.push_back(unit(A.dim()));
  return p;
}

void one_over_m(Tally& T, const Options& opt) {
  const double tol = tighten(1e-4, opt);
  const std::vector<std::pair<const char*, MatrixOperator>> ops{{"rho=1", MatrixOperator::scalar(1.0)},
                                                                {"rho=2", MatrixOperator::scalar(2.0)},
                                                                {"diag(1,2)", MatrixOperator::diagonal({1.0, 2.0})}};
  for (int m : {2, 3})
    for (const auto& [name, A] : ops) {
      const auto r = cauchy::check_one_over_m(one_over_m_problem(A, m));
      T.add(r.max_error, tol, std::string(name) + " " + label({{"m", m}}));
    }
}

void diffusion(Tally& T, const Options& opt) {
  const int N = 64;
  const double h = 1.0 / (N + 1);
  RealVector f0(N), mode(N);
  for (int j = 0; j < N; ++j) {
    const double x = (j + 1) * h;
    f0(j) = x * (1.0 - x);
    mode(j) = std::sin(pi * x);
  }
  const auto r = cauchy::fractional_diffusion_demo(N, 0.5, 1.0, f0);
  T.add(r.discrepancy, tighten(1e-3, opt), "subordination vs L1 stepper");
  const auto e = cauchy::fractional_diffusion_demo(N, 0.5, 1.0, mode);
  const double mu1 = 4.0 / (h * h) * std::pow(std::sin(pi * h / 2), 2);
  double worst = 0.0;
  for (std::size_t k = 0; k < e.subordinated.size(); ++k) {
    const double t = e.subordinated.grid[k];
    const double amp = specfun::mittag_leffler(0.5, -mu1 * std::sqrt(t));
    worst = std::max(worst, (e.subordinated.states[k] - amp * mode.cast<cplx>()).cwiseAbs().maxCoeff());
  }
  T.add(worst, tighten(1e-5, opt), "eigenmode");
}

void monte_carlo(Tally& T, const Options& opt) {
  // deviations in units of the standard error, threshold 3
  auto z = [](const stochastic::McEstimate& e, double ref) {
    return std::abs(e.estimate(0).real() - ref) / e.stderr_(0);
  };
  auto scalar = [](double rho) {
    return [rho](double s) { return Vector::Constant(1, std::exp(-rho * s)); };
  };
  const std::size_t n = 100000;
  for (double a : {0.3, 0.5, 0.7})
    for (double lam : {0.5, 1.0, 2.0}) {
      const auto e = stochastic::mc_mean(scalar(lam), {a, opt.seed, n});
      T.add(z(e, std::exp(-std::pow(lam, a))), 3.0, label({{"laplace a", a}, {"lambda", lam}}));
    }
  const stochastic::StableSampler half{0.5, opt.seed, n};
  for (double rho : {1.0, 2.0}) {
    const resolvent::ResolventFamily F{MatrixOperator::scalar(rho), 1.0, resolvent::Method::spectral};
    const double det = subordinate::subordinate_apply(F, kernels::KernelSpec::phi(0.5), 1.0, Vector::Ones(1))(0).real();
    T.add(z(stochastic::mc_fractional_solution(scalar(rho), 1.0, half), det), 3.0, label({{"fractional rho", rho}}));
    T.add(z(stochastic::mc_power_solution(scalar(rho), 1.0, half), std::exp(-std::sqrt(rho))), 3.0,
          label({{"power rho", rho}}));
  }
  const double comp = subordinate::direct_side(MatrixOperator::scalar(1.0), 0.5, 0.5, 1.0)(0, 0).real();
  T.add(z(stochastic::mc_composition(scalar(1.0), 1.0, half), comp), 3.0, "composition rho=1");
  const double ks = stochastic::ks_distance_to_kernel(stochastic::sample_stable(half), 0.5, 1.0);
  T.add(ks, 0.01, "ks distance");
}

using Runner = void (*)(Tally&, const Options&);

const char* criterion_name(int id) {
  static const char* names[] = {"",
                                "special-function identities",
                                "Laplace integral",
                                "kernel masses",
                                "kernel Laplace characterizations",
                                "fractional powers",
                                "generalized subordination identity",
                                "half-power subordination",
                                "1/m equivalence",
                                "fractional diffusion demo",
                                "Monte Carlo",
                                "angle planner"};
  return id >= 1 && id <= 11 ? names[id] : "?";
}

}  // namespace

CriterionResult run_criterion(int id, const Options& opt) {
  require(id >= 1 && id <= 11, ErrorKind::parameter_out_of_range, "criterion id must lie in 1..11");
  CriterionResult out;
  out.id = id;
  out.name = criterion_name(id);
  Tally T;
  std::string note;
  try {
    switch (id) {
      case 1: special_functions(T, opt); break;
      case 2: laplace_integral(T, opt); break;
      case 3: kernel_masses(T, opt); break;
      case 4: kernel_characterizations(T, note, opt); break;
      case 5: fractional_powers(T, opt); break;
      case 6: subordination_identity(T, opt); break;
      case 7: half_power(T, opt); break;
      case 8: one_over_m(T, opt); break;
      case 9: diffusion(T, opt); break;
      case 10: monte_carlo(T, opt); break;
      case 11: angle_planner(T, opt); break;
    }
  } catch (const std::exception& e) {
    out.measured = std::numeric_limits<double>::quiet_NaN();
    out.tolerance = T.tolerance;
    out.pass = false;
    out.detail = e.what();
    return out;
  }
  out.measured = T.measured;
  out.tolerance = T.tolerance;
  out.pass = T.any && T.ratio <= 1.0;
  out.detail = "worst: " + T.where + note;
  return out;
}

std::vector<CriterionResult> run_suite(Suite s, const Options& opt) {
  const auto ids = criteria_of(s);
  std::vector<CriterionResult> rows(ids.size());
  parallel::for_each_index(ids.size(), [&](std::size_t i) { rows[i] = run_criterion(ids[i], opt); });
  return rows;
}

void write_csv(std::ostream& os, const std::vector<CriterionResult>& rows) {
  os << "criterion,name,measured,tolerance,status,detail\n";
  for (const auto& r : rows) {
    std::string detail = r.detail;
    std::replace(detail.begin(), detail.end(), ',', ';');
    std::replace(detail.begin(), detail.end(), '\n', ' ');
    os << r.id << "," << r.name << "," << format_double(r.measured) << "," << format_double(r.tolerance) << ","
       << (r.pass ? "pass" : "FAIL") << "," << detail << "\n";
  }
}

}  // namespace fracres::verify
