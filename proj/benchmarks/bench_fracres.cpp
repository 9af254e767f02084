#include <benchmark/benchmark.h>

#include "fracres/kernels.hpp"
#include "fracres/linop.hpp"
#include "fracres/specfun.hpp"
#include "fracres/stochastic.hpp"
#include "fracres/subordinate.hpp"

using namespace fracres;

namespace {

void BM_MittagLeffler(benchmark::State& st) {
  const double r = static_cast<double>(st.range(0));
  const specfun::MLParams p{0.7, 1.0};
  const cplx z = std::polar(r, 2.0);
  for (auto _ : st) benchmark::DoNotOptimize(specfun::mittag_leffler(p, z));
}
BENCHMARK(BM_MittagLeffler)->Arg(1)->Arg(8)->Arg(40);

void BM_WrightPsi(benchmark::State& st) {
  const double x = static_cast<double>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(specfun::wright_psi(0.4, x));
}
BENCHMARK(BM_WrightPsi)->Arg(1)->Arg(10)->Arg(40);

void BM_PhiKernel(benchmark::State& st) {
  double s = 0.1;
  for (auto _ : st) {
    benchmark::DoNotOptimize(kernels::phi_kernel(0.3, 1.0, s));
    s = s < 5 ? s + 0.01 : 0.1;
  }
}
BENCHMARK(BM_PhiKernel);

void BM_CompositionKernel(benchmark::State& st) {
  const auto f = kernels::KernelSpec::f(1.0, 0.5, 0.5);
  double s = 0.1;
  for (auto _ : st) {
    benchmark::DoNotOptimize(kernels::f_kernel(f, 1.0, s));
    s = s < 5 ? s + 0.01 : 0.1;
  }
}
BENCHMARK(BM_CompositionKernel);

void BM_FractionalPower(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  Matrix A = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    A(i, i) = 2.0 + i;
    if (i + 1 < n) A(i, i + 1) = A(i + 1, i) = -0.5;
  }
  const linop::MatrixOperator op(A);
  for (auto _ : st) benchmark::DoNotOptimize(linop::fractional_power(op, 0.5).entries());
}
BENCHMARK(BM_FractionalPower)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_Subordinate(benchmark::State& st) {
  const resolvent::ResolventFamily F{linop::MatrixOperator::diagonal({1.0, 4.0}), 1.0, resolvent::Method::spectral};
  const auto k = kernels::KernelSpec::phi(0.5);
  for (auto _ : st) benchmark::DoNotOptimize(subordinate::subordinate_apply(F, k, 1.0, Vector::Ones(2)));
}
BENCHMARK(BM_Subordinate)->Unit(benchmark::kMillisecond);

void BM_MonteCarlo(benchmark::State& st) {
  const stochastic::StableSampler s{0.5, 1, static_cast<std::size_t>(st.range(0))};
  const auto u = [](double x) { return Vector::Constant(1, std::exp(-x)); };
  for (auto _ : st) benchmark::DoNotOptimize(stochastic::mc_fractional_solution(u, 1.0, s).estimate);
  st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_MonteCarlo)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
