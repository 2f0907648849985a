// Parallel gather kernels vs the serial scatter reference, plus one full
// primal-dual iteration and the profile projection.
//
//   rtv_bench --benchmark_filter=divergence
//   OMP_NUM_THREADS=4 rtv_bench

#include <benchmark/benchmark.h>

#include <random>

#include "rtv/curvature.hpp"
#include "rtv/data_terms.hpp"
#include "rtv/experiments.hpp"
#include "rtv/operators.hpp"
#include "rtv/solver.hpp"

using namespace rtv;

namespace {

GridSpec grid_for(const benchmark::State& st) {
  return GridSpec::make(int(st.range(0)), int(st.range(0)), int(st.range(1)));
}

FluxField random_flux(const GridSpec& g) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  FluxField f(g);
  for (auto* v : {&f.s1, &f.s2, &f.st})
    for (double& x : *v) x = d(rng);
  return f;
}

void set_items(benchmark::State& st, const GridSpec& g) {
  st.SetItemsProcessed(std::int64_t(st.iterations()) * std::int64_t(g.volume_count()));
}

template <auto Fn>
void flux_kernel(benchmark::State& st) {
  const GridSpec g = grid_for(st);
  const FluxField f = random_flux(g);
  for (auto _ : st) benchmark::DoNotOptimize(Fn(f, g));
  set_items(st, g);
}

template <auto Fn>
void volume_adjoint(benchmark::State& st) {
  const GridSpec g = grid_for(st);
  VolumeField phi(g);
  for (std::size_t v = 0; v < phi.values.size(); ++v) phi.values[v] = double(v % 7) - 3.0;
  for (auto _ : st) benchmark::DoNotOptimize(Fn(phi, g));
  set_items(st, g);
}

template <auto Fn>
void averaged_adjoint(benchmark::State& st) {
  const GridSpec g = grid_for(st);
  AveragedField xi(g);
  for (std::size_t v = 0; v < xi.values.size(); ++v) xi.values[v] = {double(v % 5), -1.0, 0.5};
  for (auto _ : st) benchmark::DoNotOptimize(Fn(xi, g));
  set_items(st, g);
}

void full_iteration(benchmark::State& st) {
  const int n = int(st.range(0)), nt = int(st.range(1));
  const DiskProblem d = make_disk_problem(n, 0.25 * n, 0.25 * n, 0.25 * n, nt);
  const DataTerm term = DataTerm::inpaint(d.u0, d.unknown);
  SolverConfig cfg;
  cfg.field_mask = FacetMask::border(n, n);
  const Preconditioners pre = assemble_preconditioners(d.grid, cfg.precond_power, cfg.step_balance);
  SolverState s = initial_state(d.grid, initial_guess(term));
  for (int w = 0; w < 50; ++w) iterate(s, pre, d.grid, d.model, term, cfg);
  for (auto _ : st) iterate(s, pre, d.grid, d.model, term, cfg);
  set_items(st, d.grid);
}

void profile_projection(benchmark::State& st) {
  const CurvatureModel m = CurvatureModel::make(CurvatureKind(st.range(0)), 10.0);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(-50.0, 50.0);
  std::vector<ProfilePoint> pts(4096);
  for (auto& p : pts) p = {d(rng), d(rng)};
  for (auto _ : st)
    for (const ProfilePoint& p : pts) benchmark::DoNotOptimize(project_profile(m, p));
  st.SetItemsProcessed(std::int64_t(st.iterations()) * std::int64_t(pts.size()));
  st.SetLabel(to_string(m.kind));
}

void sizes(benchmark::internal::Benchmark* b) {
  for (int n : {40, 128})
    for (int nt : {16, 64}) b->Args({n, nt});
  b->Unit(benchmark::kMicrosecond);
}

}  // namespace

BENCHMARK(flux_kernel<&rtv::apply_divergence>)->Name("divergence/parallel")->Apply(sizes);
BENCHMARK(flux_kernel<&rtv::reference::apply_divergence>)->Name("divergence/reference")->Apply(sizes);
BENCHMARK(flux_kernel<&rtv::apply_averaging>)->Name("averaging/parallel")->Apply(sizes);
BENCHMARK(flux_kernel<&rtv::reference::apply_averaging>)->Name("averaging/reference")->Apply(sizes);
BENCHMARK(flux_kernel<&rtv::apply_projection>)->Name("projection/parallel")->Apply(sizes);
BENCHMARK(flux_kernel<&rtv::reference::apply_projection>)->Name("projection/reference")->Apply(sizes);
BENCHMARK(volume_adjoint<&rtv::adjoint_divergence>)->Name("divergence_adjoint/parallel")->Apply(sizes);
BENCHMARK(volume_adjoint<&rtv::reference::adjoint_divergence>)->Name("divergence_adjoint/reference")->Apply(sizes);
BENCHMARK(averaged_adjoint<&rtv::adjoint_averaging>)->Name("averaging_adjoint/parallel")->Apply(sizes);
BENCHMARK(averaged_adjoint<&rtv::reference::adjoint_averaging>)->Name("averaging_adjoint/reference")->Apply(sizes);
BENCHMARK(full_iteration)->Name("pd_iteration")->Apply(sizes);
BENCHMARK(profile_projection)->Name("profile_projection")->DenseRange(0, 2)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
