// Serial reference kernels against their OpenMP versions, plus one full
// solver step, on the default 32x32x64 grid and a larger 64x64x128 grid.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "hydrostat/decomposition.hpp"
#include "hydrostat/kernels.hpp"
#include "hydrostat/pe_solver.hpp"

namespace k = hydrostat::kernels;

namespace {

struct Data {
  explicit Data(std::size_t n)
      : a(n), b(n), c(n), d(n), e(n), f(n), out(n), z1(n), z2(n), z3(n), w1(n), w2(n) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (auto* v : {&a, &b, &c, &d, &e, &f}) for (auto& x : *v) x = u(rng);
    for (auto* v : {&z1, &z2, &z3}) for (auto& x : *v) x = {u(rng), u(rng)};
    for (auto& x : w1) x = std::abs(u(rng));
    for (auto& x : w2) x = std::abs(u(rng));
  }
  std::vector<double> a, b, c, d, e, f, out;
  std::vector<k::Complex> z1, z2, z3;
  std::vector<double> w1, w2;
};

std::size_t points(const benchmark::State& s) {
  return static_cast<std::size_t>(s.range(0)) * s.range(0) * s.range(1);
}

template <bool Omp>
void BM_Dot3(benchmark::State& s) {
  Data x(points(s));
  for (auto _ : s) {
    if constexpr (Omp) k::omp::dot3(x.a, x.b, x.c, x.d, x.e, x.f, x.out);
    else k::serial::dot3(x.a, x.b, x.c, x.d, x.e, x.f, x.out);
    benchmark::DoNotOptimize(x.out.data());
  }
  s.SetItemsProcessed(s.iterations() * x.out.size());
}

template <bool Omp>
void BM_Multiply(benchmark::State& s) {
  Data x(points(s));
  for (auto _ : s) {
    if constexpr (Omp) k::omp::multiply(x.a, x.b, x.out);
    else k::serial::multiply(x.a, x.b, x.out);
    benchmark::DoNotOptimize(x.out.data());
  }
  s.SetItemsProcessed(s.iterations() * x.out.size());
}

template <bool Omp>
void BM_Derivative(benchmark::State& s) {
  const int n = static_cast<int>(s.range(0)), nzc = static_cast<int>(s.range(1)) / 2 + 1;
  const k::SpectralShape shape{n, n, nzc};
  Data x(shape.size());
  std::vector<double> kz(nzc);
  for (int l = 0; l < nzc; ++l) kz[l] = l;
  for (auto _ : s) {
    if constexpr (Omp) k::omp::derivative(shape, 2, kz, x.z1, x.z2);
    else k::serial::derivative(shape, 2, kz, x.z1, x.z2);
    benchmark::DoNotOptimize(x.z2.data());
  }
  s.SetItemsProcessed(s.iterations() * shape.size());
}

template <bool Omp>
void BM_RkStage(benchmark::State& s) {
  Data x(points(s) / 2);
  for (auto _ : s) {
    if constexpr (Omp) k::omp::rk_stage(x.z1, x.z2, x.z3, x.w1, x.w2, 0.1, -0.05);
    else k::serial::rk_stage(x.z1, x.z2, x.z3, x.w1, x.w2, 0.1, -0.05);
    benchmark::DoNotOptimize(x.z1.data());
  }
  s.SetItemsProcessed(s.iterations() * x.z1.size());
}

template <bool Omp>
void BM_WeightedNorm(benchmark::State& s) {
  Data x(points(s) / 2);
  for (auto _ : s) {
    double r = Omp ? k::omp::weighted_norm2(x.z1, x.w1) : k::serial::weighted_norm2(x.z1, x.w1);
    benchmark::DoNotOptimize(r);
  }
  s.SetItemsProcessed(s.iterations() * x.z1.size());
}

template <bool Omp>
void BM_SumAbsPow(benchmark::State& s) {
  Data x(points(s));
  for (auto _ : s) {
    double r = Omp ? k::omp::sum_abs_pow(x.a, x.b, 4.0) : k::serial::sum_abs_pow(x.a, x.b, 4.0);
    benchmark::DoNotOptimize(r);
  }
  s.SetItemsProcessed(s.iterations() * x.a.size());
}

void BM_SolverStep(benchmark::State& s) {
  const int n = static_cast<int>(s.range(0)), nz = static_cast<int>(s.range(1));
  const auto g = hydrostat::make_grid(n, n, nz, 0.5);
  const hydrostat::PhysicsParams p{1.0, 0.5};
  hydrostat::SolverState st = hydrostat::make_state(hydrostat::analytic_field(g, {"vortex", 1.0}), p);
  const hydrostat::StepControl ctl{5e-4, 0.5};
  for (auto _ : s) {
    auto next = hydrostat::step(st, ctl);
    benchmark::DoNotOptimize(next.v.data().data());
  }
}

#define HS_PAIR(name)                                                         \
  BENCHMARK(name<false>)->Name(#name "/serial")->Args({32, 64})->Args({64, 128}); \
  BENCHMARK(name<true>)->Name(#name "/omp")->Args({32, 64})->Args({64, 128})

HS_PAIR(BM_Multiply);
HS_PAIR(BM_Dot3);
HS_PAIR(BM_Derivative);
HS_PAIR(BM_RkStage);
HS_PAIR(BM_WeightedNorm);
HS_PAIR(BM_SumAbsPow);
BENCHMARK(BM_SolverStep)->Args({32, 64})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
