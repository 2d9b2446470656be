#include <benchmark/benchmark.h>

#include "nhjj/qcc.hpp"

using namespace nhjj;

namespace {

ModelParams params(int n) {
  ModelParams p;
  p.raman = 1.0;
  p.soc = 0.3;
  p.interaction = 1.0;
  p.loss = 0.1;
  p.n_particles = n;
  return p;
}

void bm_basis_enumeration(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    FockBasis basis(n, 4);
    benchmark::DoNotOptimize(basis.size());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(bm_basis_enumeration)->Arg(4)->Arg(10)->Arg(20)->Arg(40)->Complexity();

void bm_index_lookup(benchmark::State& state) {
  FockBasis basis(20, 4);
  std::size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(basis.index_of(basis.state(k)));
    k = (k + 127) % basis.size();
  }
}
BENCHMARK(bm_index_lookup);

void bm_many_body_assembly(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  FockBasis basis(n, 4);
  const auto p = params(n);
  for (auto _ : state) {
    auto h = build_many_body(p, basis);
    benchmark::DoNotOptimize(h.entries().size());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(bm_many_body_assembly)->Arg(4)->Arg(10)->Arg(20)->Complexity();

void bm_sparse_apply(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  FockBasis basis(n, 4);
  const auto h = build_many_body(params(n), basis);
  Eigen::VectorXcd v = Eigen::VectorXcd::Random(static_cast<Eigen::Index>(basis.size()));
  for (auto _ : state) benchmark::DoNotOptimize(h.apply(v));
}
BENCHMARK(bm_sparse_apply)->Arg(10)->Arg(20);

void bm_eigendecompose(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  FockBasis basis(n, 4);
  const auto h = build_many_body(params(n), basis);
  for (auto _ : state) {
    auto spec = eigendecompose(h, {.vectors = true});
    benchmark::DoNotOptimize(spec.max_imag());
  }
}
BENCHMARK(bm_eigendecompose)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void bm_gpe_rhs(benchmark::State& state) {
  const auto p = params(1);
  Amplitudes x;
  x << Complex(0.5, 0.1), Complex(0.3, -0.2), Complex(-0.4, 0.3), Complex(0.2, 0.5);
  x /= std::sqrt(x.squaredNorm());
  for (auto _ : state) benchmark::DoNotOptimize(gpe_rhs(x, p, GpeForm::Gauged));
}
BENCHMARK(bm_gpe_rhs);

void bm_meanfield_evolution(benchmark::State& state) {
  const auto p = params(1);
  Amplitudes x0 = Amplitudes::Zero();
  x0[3] = 1.0;
  const auto grid = linspace(0, 10, 40);
  for (auto _ : state) {
    auto traj = evolve_meanfield(x0, p, grid, GpeForm::Gauged);
    benchmark::DoNotOptimize(traj.states.back());
  }
  state.SetItemsProcessed(state.iterations() * grid.size());
}
BENCHMARK(bm_meanfield_evolution)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
