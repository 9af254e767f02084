#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fracres/cauchy.hpp"
#include "fracres/error.hpp"
#include "fracres/kernels.hpp"
#include "fracres/linop.hpp"
#include "fracres/specfun.hpp"
#include "fracres/stochastic.hpp"
#include "fracres/trajectory.hpp"
#include "fracres/verify.hpp"

namespace {

using namespace fracres;

enum Exit { ok = 0, validation = 2, numerical = 3, io = 4 };

struct Flags {
  std::optional<double> alpha, beta, gamma, b, t, s, lambda, t_end, tol;
  std::optional<std::string> z, matrix, out, suite, family;
  std::optional<int> n, steps;
  std::optional<std::size_t> samples;
  std::uint64_t seed = 1;
};

cplx parse_z(const std::string& text) {
  const auto comma = text.find(',');
  try {
    std::size_t used = 0;
    if (comma == std::string::npos) {
      const double re = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return {re, 0.0};
    }
    const std::string a = text.substr(0, comma), b = text.substr(comma + 1);
    const double re = std::stod(a, &used);
    if (used != a.size()) throw std::invalid_argument(a);
    const double im = std::stod(b, &used);
    if (used != b.size()) throw std::invalid_argument(b);
    return {re, im};
  } catch (const std::logic_error&) {
    fail(ErrorKind::parameter_out_of_range, "--z expects re or re,im, got '" + text + "'");
  }
}

template <class T>
T need(const std::optional<T>& v, const char* flag) {
  require(v.has_value(), ErrorKind::parameter_out_of_range, std::string("missing ") + flag);
  return *v;
}

linop::MatrixOperator operator_from(const Flags& f) {
  if (f.matrix) return linop::read_matrix_file(*f.matrix);
  return linop::MatrixOperator::scalar(need(f.lambda, "--matrix or --lambda"));
}

QuadratureConfig quad_config(const Flags& f) {
  QuadratureConfig qc;
  if (f.tol) qc.rel_tol = *f.tol;
  qc.validate();
  return qc;
}

kernels::KernelSpec kernel_spec(const Flags& f) {
  const auto fam = kernels::parse_family(f.family.value_or("phi"));
  kernels::KernelSpec k;
  switch (fam) {
    case kernels::Family::phi: k = kernels::KernelSpec::phi(need(f.gamma, "--gamma")); break;
    case kernels::Family::p: k = kernels::KernelSpec::p(need(f.alpha, "--alpha")); break;
    case kernels::Family::f:
      k = kernels::KernelSpec::f(need(f.alpha, "--alpha"), need(f.gamma, "--gamma"), need(f.beta, "--beta"));
      break;
    case kernels::Family::half: k = kernels::KernelSpec::half(need(f.alpha, "--alpha")); break;
  }
  k.validate();
  return k;
}

int cmd_ml(const Flags& f, std::ostream& os) {
  const specfun::MLParams p{need(f.alpha, "--alpha"), f.beta.value_or(1.0)};
  p.validate();
  const cplx z = parse_z(need(f.z, "--z"));
  const cplx v = specfun::mittag_leffler(p, z);
  os << "alpha,beta,z_re,z_im,value_re,value_im,regime\n"
     << format_double(p.alpha) << ',' << format_double(p.beta) << ',' << format_double(z.real()) << ','
     << format_double(z.imag()) << ',' << format_double(v.real()) << ',' << format_double(v.imag()) << ','
     << specfun::to_string(specfun::select_regime(p, z).tag) << '\n';
  return ok;
}

int cmd_wright(const Flags& f, std::ostream& os) {
  const double g = need(f.gamma, "--gamma");
  const cplx z = parse_z(need(f.z, "--z"));
  const cplx v = specfun::wright_psi(g, z);
  os << "gamma,z_re,z_im,value_re,value_im\n"
     << format_double(g) << ',' << format_double(z.real()) << ',' << format_double(z.imag()) << ','
     << format_double(v.real()) << ',' << format_double(v.imag()) << '\n';
  return ok;
}

int cmd_kernel(const Flags& f, std::ostream& os) {
  const auto spec = kernel_spec(f);
  const double t = need(f.t, "--t");
  std::vector<double> ss;
  if (f.s) {
    ss.push_back(*f.s);
  } else {
    const int n = f.n.value_or(50);
    const double end = f.t_end.value_or(5.0);
    require(n >= 1 && end > 0, ErrorKind::parameter_out_of_range, "table needs --n >= 1 and --t-end > 0");
    for (int i = 1; i <= n; ++i) ss.push_back(end * i / n);
  }
  kernels::write_kernel_csv(os, spec, {t}, ss, quad_config(f));
  return ok;
}

int cmd_power(const Flags& f, std::ostream& os) {
  const auto A = linop::read_matrix_file(need(f.matrix, "--matrix"));
  const auto P = linop::fractional_power(A, need(f.b, "--b"), quad_config(f)).entries();
  for (Eigen::Index i = 0; i < P.rows(); ++i) {
    for (Eigen::Index j = 0; j < P.cols(); ++j) os << (j ? "," : "") << format_complex(P(i, j));
    os << '\n';
  }
  return ok;
}

int cmd_solve(const Flags& f, std::ostream& os) {
  const auto A = operator_from(f);
  cauchy::CauchyProblem p{A, need(f.alpha, "--alpha"), cauchy::Sign::minus, {},
                          cauchy::uniform_grid(f.t_end.value_or(1.0), f.steps.value_or(100)), std::nullopt};
  const int m = static_cast<int>(std::ceil(p.alpha));
  p.initial_values.push_back(Vector::Ones(A.dim()));
  for (int k = 1; k < m; ++k) p.initial_values.push_back(Vector::Zero(A.dim()));
  p.validate();
  write_csv(os, cauchy::solve_homogeneous(p, quad_config(f)));
  return ok;
}

int cmd_verify(const Flags& f, std::ostream& os) {
  verify::Options opt;
  opt.tol = f.tol;
  opt.seed = f.seed;
  const auto rows = verify::run_suite(verify::parse_suite(f.suite.value_or("all")), opt);
  verify::write_csv(os, rows);
  for (const auto& r : rows)
    if (!r.pass) return numerical;
  return ok;
}

int cmd_diffusion(const Flags& f, std::ostream& os) {
  const int N = f.n.value_or(64);
  require(N >= 2, ErrorKind::parameter_out_of_range, "--n must be >= 2");
  RealVector f0(N);
  for (int j = 0; j < N; ++j) {
    const double x = (j + 1.0) / (N + 1);
    f0(j) = x * (1.0 - x);
  }
  const double alpha = f.alpha.value_or(0.5);
  const auto r = cauchy::fractional_diffusion_demo(N, alpha, f.t.value_or(1.0), f0, f.steps.value_or(2000), 10,
                                                   quad_config(f));
  write_csv(os, r.subordinated);
  os << "meta,N=" << N << ",alpha=" << format_double(alpha) << ",h=" << format_double(r.h)
     << ",discrepancy=" << format_double(r.discrepancy) << '\n';
  return r.discrepancy <= 1e-3 ? ok : numerical;
}

int cmd_mc(const Flags& f, std::ostream& os) {
  const stochastic::StableSampler s{f.alpha.value_or(0.5), f.seed, f.samples.value_or(100000)};
  s.validate();
  const double rho = f.lambda.value_or(1.0), t = f.t.value_or(1.0);
  auto u = [rho](double tau) { return Vector::Constant(1, std::exp(-rho * tau)); };
  stochastic::McEstimate e;
  switch (kernels::parse_family(f.family.value_or("phi"))) {
    case kernels::Family::phi: e = stochastic::mc_fractional_solution(u, t, s); break;
    case kernels::Family::p: e = stochastic::mc_power_solution(u, t, s); break;
    case kernels::Family::f: e = stochastic::mc_composition(u, t, s); break;
    case kernels::Family::half: fail(ErrorKind::parameter_out_of_range, "mc supports --family phi, p or f");
  }
  os << "estimate,stderr,n,seed\n"
     << format_double(e.estimate(0).real()) << ',' << format_double(e.stderr_(0)) << ',' << e.n << ',' << e.seed
     << '\n';
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fractional resolvent families, subordination kernels and fractional Cauchy problems"};
  app.require_subcommand(1);
  Flags f;

  auto real = [&](CLI::App* c, const char* name, std::optional<double>& slot, const char* help) {
    c->add_option_function<double>(name, [&slot](const double& v) { slot = v; }, help);
  };
  auto text = [&](CLI::App* c, const char* name, std::optional<std::string>& slot, const char* help) {
    c->add_option_function<std::string>(name, [&slot](const std::string& v) { slot = v; }, help);
  };
  auto common = [&](CLI::App* c) {
    text(c, "--out", f.out, "write CSV here instead of stdout");
    real(c, "--tol", f.tol, "quadrature relative tolerance");
  };
  auto family = [&](CLI::App* c) {
    c->add_option_function<std::string>("--family", [&](const std::string& v) { f.family = v; }, "kernel family")
        ->check(CLI::IsMember({"phi", "p", "f", "half"}));
  };

  auto* ml = app.add_subcommand("ml", "Mittag-Leffler function E_{alpha,beta}(z)");
  real(ml, "--alpha", f.alpha, "alpha > 0");
  real(ml, "--beta", f.beta, "beta (default 1)");
  text(ml, "--z", f.z, "argument as re or re,im");
  common(ml);

  auto* wr = app.add_subcommand("wright", "Wright-type function Psi_gamma(z)");
  real(wr, "--gamma", f.gamma, "gamma in (0,1)");
  text(wr, "--z", f.z, "argument as re or re,im");
  common(wr);

  auto* ke = app.add_subcommand("kernel", "Subordination kernel values");
  family(ke);
  real(ke, "--alpha", f.alpha, "alpha");
  real(ke, "--beta", f.beta, "beta");
  real(ke, "--gamma", f.gamma, "gamma");
  real(ke, "--t", f.t, "time");
  real(ke, "--s", f.s, "single s; otherwise a table on (0, t-end]");
  real(ke, "--t-end", f.t_end, "upper end of the s table (default 5)");
  ke->add_option_function<int>("--n", [&](const int& v) { f.n = v; }, "table size (default 50)");
  common(ke);

  auto* po = app.add_subcommand("power", "Fractional power A^b");
  text(po, "--matrix", f.matrix, "matrix file");
  real(po, "--b", f.b, "exponent b > 0");
  common(po);

  auto* so = app.add_subcommand("solve", "Homogeneous fractional Cauchy problem, D^alpha u = -A u");
  text(so, "--matrix", f.matrix, "matrix file");
  real(so, "--lambda", f.lambda, "scalar A when no matrix is given");
  real(so, "--alpha", f.alpha, "order in (0,2]");
  real(so, "--t-end", f.t_end, "final time (default 1)");
  so->add_option_function<int>("--steps", [&](const int& v) { f.steps = v; }, "grid intervals (default 100)");
  common(so);

  auto* ve = app.add_subcommand("verify", "Acceptance suites");
  ve->add_option_function<std::string>("--suite", [&](const std::string& v) { f.suite = v; }, "suite")
      ->check(CLI::IsMember({"specfun", "kernels", "subordination", "cauchy", "stochastic", "all"}));
  ve->add_option("--seed", f.seed, "Monte Carlo seed");
  text(ve, "--out", f.out, "write CSV here instead of stdout");
  real(ve, "--tol", f.tol, "tighten residual thresholds to this value");

  auto* di = app.add_subcommand("diffusion", "Time-fractional heat equation demo");
  di->add_option_function<int>("--n", [&](const int& v) { f.n = v; }, "interior grid points (default 64)");
  real(di, "--alpha", f.alpha, "order in (0,1] (default 0.5)");
  real(di, "--t", f.t, "final time (default 1)");
  di->add_option_function<int>("--steps", [&](const int& v) { f.steps = v; }, "L1 steps (default 2000)");
  common(di);

  auto* mc = app.add_subcommand("mc", "Monte Carlo time change of u(s) = exp(-lambda s)");
  family(mc);
  real(mc, "--alpha", f.alpha, "stable index in (0,1) (default 0.5)");
  real(mc, "--lambda", f.lambda, "decay rate (default 1)");
  real(mc, "--t", f.t, "time (default 1)");
  mc->add_option_function<std::size_t>("--samples", [&](const std::size_t& v) { f.samples = v; },
                                       "sample count (default 100000)");
  mc->add_option("--seed", f.seed, "seed");
  common(mc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return validation;
  }

  try {
    std::ostringstream buf;
    int code = ok;
    if (*ml) code = cmd_ml(f, buf);
    else if (*wr) code = cmd_wright(f, buf);
    else if (*ke) code = cmd_kernel(f, buf);
    else if (*po) code = cmd_power(f, buf);
    else if (*so) code = cmd_solve(f, buf);
    else if (*ve) code = cmd_verify(f, buf);
    else if (*di) code = cmd_diffusion(f, buf);
    else if (*mc) code = cmd_mc(f, buf);
    if (f.out) {
      std::ofstream file(*f.out);
      if (!(file << buf.str())) {
        std::cerr << "io: cannot write " << *f.out << '\n';
        return io;
      }
    } else {
      std::cout << buf.str();
    }
    return code;
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    if (e.kind() == ErrorKind::io) return io;
    return is_validation(e.kind()) ? validation : numerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return numerical;
  }
}
