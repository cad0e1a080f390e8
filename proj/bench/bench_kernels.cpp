// Serial reference vs OpenMP kernels on the grids used by the solver.

#include <benchmark/benchmark.h>

#include "chess/grid.hpp"
#include "chess/hessian_op.hpp"
#include "chess/mms.hpp"

namespace {

using chess::Exec;

Exec exec_of(const benchmark::State& state) { return state.range(2) == 0 ? Exec::serial : Exec::parallel; }

chess::Field make_phi(const benchmark::State& state) {
  const chess::TorusGrid grid(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
  return chess::make_mms(grid, 0.03, 11);
}

void BM_FftRoundtrip(benchmark::State& state) {
  const chess::Field phi = make_phi(state);
  for (auto _ : state) benchmark::DoNotOptimize(chess::fft_roundtrip(phi, exec_of(state)));
}

void BM_ComplexHessian(benchmark::State& state) {
  const chess::Field phi = make_phi(state);
  for (auto _ : state) benchmark::DoNotOptimize(chess::complex_hessian(phi, exec_of(state)));
}

void BM_ApplyOp(benchmark::State& state) {
  const chess::Field phi = make_phi(state);
  const chess::HermField hess = chess::complex_hessian(phi);
  for (auto _ : state) benchmark::DoNotOptimize(chess::apply_op(hess, 2, exec_of(state)));
}

void BM_Linearize(benchmark::State& state) {
  const chess::Field phi = make_phi(state);
  const chess::HermField hess = chess::complex_hessian(phi);
  for (auto _ : state) benchmark::DoNotOptimize(chess::linearize(hess, 2, exec_of(state)));
}

void BM_ApplyLin(benchmark::State& state) {
  const chess::Field phi = make_phi(state);
  const chess::LinearizedOp op = chess::linearize(phi, 2);
  for (auto _ : state) benchmark::DoNotOptimize(chess::apply_lin(op, phi, exec_of(state)));
}

void BM_Monitors(benchmark::State& state) {
  const chess::Field phi = make_phi(state);
  const chess::Field f = chess::apply_op(phi, 2);
  for (auto _ : state) benchmark::DoNotOptimize(chess::monitors(phi, f, 2, exec_of(state)));
}

// {n, N, exec}: exec 0 = serial reference, 1 = OpenMP.
#define CHESS_GRIDS ->Args({2, 16, 0})->Args({2, 16, 1})->Args({3, 8, 0})->Args({3, 8, 1})->Unit(benchmark::kMillisecond)

BENCHMARK(BM_FftRoundtrip) CHESS_GRIDS;
BENCHMARK(BM_ComplexHessian) CHESS_GRIDS;
BENCHMARK(BM_ApplyOp) CHESS_GRIDS;
BENCHMARK(BM_Linearize) CHESS_GRIDS;
BENCHMARK(BM_ApplyLin) CHESS_GRIDS;
BENCHMARK(BM_Monitors) CHESS_GRIDS;

}  // namespace

BENCHMARK_MAIN();
