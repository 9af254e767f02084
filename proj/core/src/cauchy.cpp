#include "fracres/cauchy.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "fracres/error.hpp"
#include "fracres/kernels.hpp"
#include "fracres/specfun.hpp"
#include "fracres/subordinate.hpp"

namespace fracres::cauchy {

using linop::MatrixOperator;
using resolvent::ml_family;

int CauchyProblem::m() const { return static_cast<int>(std::ceil(alpha - 1e-12)); }

void CauchyProblem::validate() const {
  require(std::isfinite(alpha) && alpha > 0 && alpha <= 2, ErrorKind::parameter_out_of_range,
          "alpha must lie in (0,2]");
  require(static_cast<int>(initial_values.size()) == m(), ErrorKind::parameter_out_of_range,
          "need ceil(alpha) initial values");
  for (const Vector& x : initial_values)
    require(x.size() == A.dim(), ErrorKind::parameter_out_of_range, "initial value dimension mismatch");
  require(grid.size() >= 2, ErrorKind::grid, "grid needs at least two points");
  require(grid.front() == 0.0, ErrorKind::grid, "grid must start at 0");
  const double h = grid[1] - grid[0];
  require(h > 0, ErrorKind::grid, "grid must be increasing");
  for (std::size_t i = 1; i < grid.size(); ++i)
    require(std::abs(grid[i] - grid[i - 1] - h) <= 1e-9 * h, ErrorKind::grid, "grid must be uniform");
  if (forcing) {
    require(forcing->size() == grid.size(), ErrorKind::grid, "forcing must be sampled on the grid");
    for (const Vector& f : *forcing)
      require(f.size() == A.dim(), ErrorKind::parameter_out_of_range, "forcing dimension mismatch");
  }
}

MatrixOperator CauchyProblem::generator() const {
  return sign == Sign::minus ? A : MatrixOperator(Matrix(-A.entries()));
}

std::vector<double> uniform_grid(double T, int n) {
  require(std::isfinite(T) && T > 0, ErrorKind::grid, "T must be > 0");
  require(n >= 1, ErrorKind::grid, "need at least one step");
  std::vector<double> g(n + 1);
  for (int i = 0; i <= n; ++i) g[i] = T * i / n;
  return g;
}

namespace {

// (K * f)(t_n) on a uniform grid, exact for piecewise-linear f, from the
// first and second primitives q1, q2 of K. W is double or Matrix.
template <class Q1, class Q2>
std::vector<Vector> product_integrate(Q1&& q1, Q2&& q2, const std::vector<Vector>& f, double h) {
  const std::size_t N = f.size() - 1;
  using W = std::decay_t<decltype(q2(1.0))>;
  std::vector<W> p2(N + 1);
  for (std::size_t k = 0; k <= N; ++k) p2[k] = q2(k * h);
  std::vector<W> w(N);
  w[0] = p2[1] / h;
  for (std::size_t k = 1; k < N; ++k) w[k] = (p2[k + 1] - 2.0 * p2[k] + p2[k - 1]) / h;
  std::vector<Vector> out(N + 1, Vector::Zero(f[0].size()));
  for (std::size_t n = 1; n <= N; ++n) {
    Vector acc = w[0] * f[n];
    for (std::size_t j = 1; j < n; ++j) acc += w[n - j] * f[j];
    const W end = q1(n * h) - (p2[n] - p2[n - 1]) / h;
    acc += end * f[0];
    out[n] = acc;
  }
  return out;
}

std::vector<Vector> convolve_g(double beta, const std::vector<Vector>& f, double h) {
  auto prim = [](double b) {
    return [b](double s) { return s == 0.0 ? 0.0 : specfun::g_kernel(b, s); };
  };
  return product_integrate(prim(beta + 1.0), prim(beta + 2.0), f, h);
}

void attach_caputo_residual(Trajectory& u, const MatrixOperator& G, double alpha,
                            const std::optional<std::vector<Vector>>& forcing) {
  if (alpha > 1.0) return;
  const Trajectory d = specfun::caputo_l1(u, alpha);
  std::vector<double> res(u.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t n = 1; n < u.size(); ++n) {
    Vector r = d.states[n - 1] + G.entries() * u.states[n];
    if (forcing) r -= (*forcing)[n];
    res[n] = r.norm();
  }
  u.residual_caputo = std::move(res);
}

int one_over_m(double alpha) {
  const int m = static_cast<int>(std::lround(1.0 / alpha));
  require(m >= 2 && m <= 4 && std::abs(alpha * m - 1.0) <= 1e-12, ErrorKind::parameter_out_of_range,
          "alpha must be 1/m with m in {2,3,4}");
  return m;
}

Matrix matrix_power(const Matrix& B, int k) {
  Matrix out = Matrix::Identity(B.rows(), B.cols());
  for (int i = 0; i < k; ++i) out = out * B;
  return out;
}

// Three-stage Radau IIA (order 5, L-stable) for v' = B v + src(t), with step
// control by step doubling.
class LinearRadau {
 public:
  LinearRadau(Matrix B, std::function<Vector(double)> src, double rtol, double atol)
      : B_(std::move(B)), src_(std::move(src)), rtol_(rtol), atol_(atol) {}

  Vector advance(double t, double t_end, Vector v) {
    while (t < t_end) {
      require(++steps_ < 2000000, ErrorKind::integrator_failure, "companion integrator exceeded its step budget");
      const double h = std::min(h_, t_end - t);
      const Vector one = step(t, v, h);
      const Vector half = step(t + 0.5 * h, step(t, v, 0.5 * h), 0.5 * h);
      const double err = (half - one).norm() / 31.0;
      const double scale = atol_ + rtol_ * half.norm();
      const double fac = err == 0.0 ? 4.0 : std::clamp(0.9 * std::pow(scale / err, 1.0 / 6.0), 0.2, 4.0);
      if (err <= scale) {
        v = half + (half - one) / 31.0;
        t += h;
        if (h == h_ || fac < 1.0) h_ = h * fac;
      } else {
        require(h > 1e-15 * std::max(1.0, std::abs(t)), ErrorKind::integrator_failure,
                "companion integrator step size underflow");
        h_ = h * fac;
      }
    }
    return v;
  }

  void set_step(double h) { h_ = h; }

 private:
  Vector step(double t, const Vector& v, double h) const {
    static const double s6 = std::sqrt(6.0);
    static const double c[3] = {(4.0 - s6) / 10.0, (4.0 + s6) / 10.0, 1.0};
    static const double a[3][3] = {{(88.0 - 7.0 * s6) / 360.0, (296.0 - 169.0 * s6) / 1800.0, (-2.0 + 3.0 * s6) / 225.0},
                                   {(296.0 + 169.0 * s6) / 1800.0, (88.0 + 7.0 * s6) / 360.0, (-2.0 - 3.0 * s6) / 225.0},
                                   {(16.0 - s6) / 36.0, (16.0 + s6) / 36.0, 1.0 / 9.0}};
    const Eigen::Index n = v.size();
    Matrix M = Matrix::Identity(3 * n, 3 * n);
    Vector rhs(3 * n);
    Vector s[3];
    for (int j = 0; j < 3; ++j) s[j] = src_(t + c[j] * h);
    for (int i = 0; i < 3; ++i) {
      Vector r = v;
      for (int j = 0; j < 3; ++j) {
        M.block(i * n, j * n, n, n) -= (h * a[i][j]) * B_;
        r += (h * a[i][j]) * s[j];
      }
      rhs.segment(i * n, n) = r;
    }
    const Vector Y = M.partialPivLu().solve(rhs);
    return Y.segment(2 * n, n);
  }

  Matrix B_;
  std::function<Vector(double)> src_;
  double rtol_, atol_;
  double h_ = 1e-6;
  long steps_ = 0;
};

// L1 stepper for D^alpha u = -A u on a uniform grid of M steps; returns all states.
std::vector<RealVector> l1_heat(const Eigen::MatrixXd& A, double alpha, double T, int M, const RealVector& f0) {
  const Eigen::Index N = A.rows();
  const double tau = T / M;
  const double c = std::pow(tau, -alpha) / std::tgamma(2.0 - alpha);
  std::vector<double> b(M + 1);
  for (int k = 0; k <= M; ++k)
    b[k] = std::pow(k + 1.0, 1.0 - alpha) - (k == 0 ? 0.0 : std::pow(static_cast<double>(k), 1.0 - alpha));
  // r[i] = b_{M-i}, so the history weights of step n form one contiguous segment.
  RealVector r(M + 1);
  for (int i = 0; i <= M; ++i) r[i] = b[M - i];
  Eigen::MatrixXd sys = A;
  sys.diagonal().array() += c * b[0];
  const Eigen::LLT<Eigen::MatrixXd> llt(sys);
  require(llt.info() == Eigen::Success, ErrorKind::integrator_failure, "L1 system is not positive definite");
  const bool history = alpha < 1.0;
  Eigen::MatrixXd diffs(N, history ? M : 0);
  std::vector<RealVector> u{f0};
  u.reserve(M + 1);
  for (int n = 1; n <= M; ++n) {
    RealVector rhs = c * b[0] * u.back();
    if (history && n > 1) rhs -= c * (diffs.leftCols(n - 1) * r.segment(M - n + 1, n - 1));
    RealVector next = llt.solve(rhs);
    if (history) diffs.col(n - 1) = next - u.back();
    u.push_back(std::move(next));
  }
  return u;
}

}  // namespace

Trajectory solve_homogeneous(const CauchyProblem& p, const QuadratureConfig& cfg) {
  p.validate();
  const MatrixOperator G = p.generator();
  const resolvent::Method method = resolvent::default_method(G, p.alpha);
  Trajectory u;
  u.grid = p.grid;
  u.states.reserve(p.grid.size());
  for (double t : p.grid) {
    Vector acc = Vector::Zero(G.dim());
    for (int k = 0; k < p.m(); ++k) acc += ml_family(G, p.alpha, k + 1.0, t, method, cfg) * p.initial_values[k];
    u.states.push_back(std::move(acc));
  }
  attach_caputo_residual(u, G, p.alpha, std::nullopt);
  return u;
}

Trajectory solve_inhomogeneous_mild(const CauchyProblem& p, const QuadratureConfig& cfg) {
  p.validate();
  require(p.forcing.has_value(), ErrorKind::parameter_out_of_range, "mild solution needs a forcing");
  CauchyProblem hom = p;
  hom.forcing.reset();
  Trajectory u = solve_homogeneous(hom, cfg);
  const MatrixOperator G = p.generator();
  const resolvent::Method method = resolvent::default_method(G, p.alpha);
  const double a = p.alpha;
  const double h = p.grid[1] - p.grid[0];
  const auto conv = product_integrate([&](double s) { return ml_family(G, a, a + 1.0, s, method, cfg); },
                                      [&](double s) { return ml_family(G, a, a + 2.0, s, method, cfg); },
                                      *p.forcing, h);
  for (std::size_t n = 0; n < u.size(); ++n) u.states[n] += conv[n];
  u.residual_caputo.reset();
  attach_caputo_residual(u, G, a, p.forcing);
  return u;
}

OneOverMResult check_one_over_m(const CauchyProblem& p, double t0, const QuadratureConfig& cfg) {
  p.validate();
  const int m = one_over_m(p.alpha);
  require(t0 > 0 && t0 < p.grid.back(), ErrorKind::grid, "t0 must lie inside the grid");
  const MatrixOperator G = p.generator();
  const Matrix B = -G.entries();
  const Vector& x = p.initial_values[0];
  const double a = p.alpha;

  // Series value of S_{1/m}(t0)x: sum_k g_{k/m+1}(t0) B^k x.
  Vector v0 = x, term = x;
  for (int k = 1;; ++k) {
    require(k < 500, ErrorKind::series_divergence, "start-value series did not settle; reduce t0");
    term = B * term;
    const Vector add = std::exp(k * a * std::log(t0) - std::lgamma(k * a + 1.0)) * term;
    v0 += add;
    if (add.norm() <= 1e-17 * v0.norm() && k * a * std::log(t0) < -5.0) break;
  }

  std::vector<Vector> Bkx(m);
  Bkx[0] = x;
  for (int k = 1; k < m; ++k) Bkx[k] = B * Bkx[k - 1];
  auto src = [&](double t) -> Vector {
    Vector s = Vector::Zero(x.size());
    for (int k = 1; k < m; ++k) s += specfun::g_kernel(static_cast<double>(k) / m, t) * Bkx[k];
    return s;
  };
  LinearRadau ode(matrix_power(B, m), src, 1e-12, 1e-15);
  ode.set_step(1e-3 * t0);

  OneOverMResult out;
  const resolvent::Method method = resolvent::default_method(G, a);
  double t = t0;
  Vector v = v0;
  for (double tg : p.grid) {
    if (tg < t0) continue;
    v = ode.advance(t, tg, v);
    t = tg;
    const Vector u1 = ml_family(G, a, 1.0, tg, method, cfg) * x;
    out.fractional.grid.push_back(tg);
    out.fractional.states.push_back(u1);
    out.companion.grid.push_back(tg);
    out.companion.states.push_back(v);
    out.max_error = std::max(out.max_error, (u1 - v).norm());
  }
  return out;
}

InhomogeneousResidual inhomogeneous_one_over_m(const CauchyProblem& p, double t_from, const QuadratureConfig& cfg) {
  p.validate();
  const int m = one_over_m(p.alpha);
  require(p.forcing.has_value(), ErrorKind::parameter_out_of_range, "needs a sampled forcing");
  require(p.grid.size() >= 3, ErrorKind::grid, "grid needs at least three points");
  const MatrixOperator G = p.generator();
  const Matrix B = -G.entries();
  const Vector& x = p.initial_values[0];
  const std::vector<Vector>& f = *p.forcing;
  const double a = p.alpha;
  const double h = p.grid[1] - p.grid[0];
  const resolvent::Method method = resolvent::default_method(G, a);

  const auto sf = product_integrate([&](double s) { return ml_family(G, a, 2.0, s, method, cfg); },
                                    [&](double s) { return ml_family(G, a, 3.0, s, method, cfg); }, f, h);
  Trajectory w;
  w.grid = p.grid;
  for (std::size_t n = 0; n < p.grid.size(); ++n)
    w.states.push_back(ml_family(G, a, 1.0, p.grid[n], method, cfg) * x + sf[n]);

  InhomogeneousResidual out;
  const Trajectory d = specfun::caputo_l1(w, a);
  const auto gf = convolve_g(1.0 - a, f, h);
  for (std::size_t n = 1; n < w.size(); ++n) {
    if (p.grid[n] < t_from) continue;
    out.fractional = std::max(out.fractional, (d.states[n - 1] - B * w.states[n] - gf[n]).norm());
  }

  const Matrix Bm = matrix_power(B, m);
  std::vector<Vector> Bkx(m);
  Bkx[0] = x;
  for (int k = 1; k < m; ++k) Bkx[k] = B * Bkx[k - 1];
  std::vector<std::vector<Vector>> gk(m);
  for (int k = 1; k < m; ++k) gk[k] = convolve_g(static_cast<double>(k) / m, f, h);
  for (std::size_t n = 1; n + 1 < w.size(); ++n) {
    const double t = p.grid[n];
    if (t < t_from) continue;
    Vector rhs = Bm * w.states[n] + f[n];
    for (int k = 1; k < m; ++k) {
      const double g = specfun::g_kernel(static_cast<double>(k) / m, t);
      rhs += g * Bkx[k] + matrix_power(B, k) * gk[k][n];
    }
    const Vector deriv = (w.states[n + 1] - w.states[n - 1]) / (2.0 * h);
    out.first_order = std::max(out.first_order, (deriv - rhs).norm());
  }
  return out;
}

Matrix dirichlet_laplacian(int N) {
  require(N >= 1, ErrorKind::parameter_out_of_range, "N must be >= 1");
  const double h = 1.0 / (N + 1);
  const double w = 1.0 / (h * h);
  Matrix A = Matrix::Zero(N, N);
  for (int i = 0; i < N; ++i) {
    A(i, i) = 2.0 * w;
    if (i > 0) A(i, i - 1) = -w;
    if (i + 1 < N) A(i, i + 1) = -w;
  }
  return A;
}

DiffusionResult fractional_diffusion_demo(int N, double alpha, double T, const RealVector& f0, int steps, int outputs,
                                          const QuadratureConfig& cfg) {
  require(N >= 2, ErrorKind::parameter_out_of_range, "N must be >= 2");
  require(std::isfinite(alpha) && alpha > 0 && alpha <= 1, ErrorKind::parameter_out_of_range,
          "alpha must lie in (0,1]");
  require(std::isfinite(T) && T > 0, ErrorKind::domain, "T must be > 0");
  require(f0.size() == N, ErrorKind::parameter_out_of_range, "f0 must have N entries");
  require(outputs >= 1 && steps >= outputs && steps % outputs == 0, ErrorKind::grid,
          "steps must be a positive multiple of outputs");
  const Matrix Lc = dirichlet_laplacian(N);
  const Eigen::MatrixXd L = Lc.real();
  const MatrixOperator A(Lc);

  // Leading L1 error at fixed t > 0 is first order in the step; two runs cancel it.
  const auto coarse = l1_heat(L, alpha, T, steps, f0);
  const auto fine = l1_heat(L, alpha, T, 2 * steps, f0);

  DiffusionResult out;
  out.h = 1.0 / (N + 1);
  const resolvent::ResolventFamily F{A, 1.0, resolvent::Method::spectral};
  const Vector x = f0.cast<cplx>();
  for (int i = 0; i <= outputs; ++i) {
    const int n = i * (steps / outputs);
    const double t = T * n / steps;
    const RealVector ext = 2.0 * fine[2 * n] - coarse[n];
    out.stepped.grid.push_back(t);
    out.stepped.states.push_back(ext.cast<cplx>());
    Vector sub;
    if (t == 0.0)
      sub = x;
    else if (alpha == 1.0)
      sub = A.apply_function([t](cplx l) { return std::exp(-t * l); }) * x;
    else
      sub = subordinate::subordinate_apply(F, kernels::KernelSpec::phi(alpha), t, x, cfg);
    out.subordinated.grid.push_back(t);
    out.subordinated.states.push_back(sub);
  }
  const Vector& u1 = out.subordinated.states.back();
  const Vector& u2 = out.stepped.states.back();
  out.discrepancy = (u1 - u2).cwiseAbs().maxCoeff() / u1.cwiseAbs().maxCoeff();
  return out;
}

}  // namespace fracres::cauchy
