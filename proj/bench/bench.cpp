#include <benchmark/benchmark.h>

#include <memory>
#include <vector>

#include "naxray/field.hpp"
#include "naxray/forward.hpp"
#include "naxray/geometry.hpp"
#include "naxray/mesh.hpp"
#include "naxray/prior.hpp"

using namespace naxray;

namespace {

std::shared_ptr<const Mesh> bench_mesh() {
  static const auto m = std::make_shared<const Mesh>(generate_disk_mesh(886, 1));
  return m;
}

const std::vector<Geodesic>& bench_geodesics() {
  static const auto g = shoot_geodesics(builtin_metric("paper-gaussian"), *bench_mesh(), sample_fanbeam(200, 2), 1e-3);
  return g;
}

template <bool Parallel>
void BM_scattering(benchmark::State& state) {
  const AlgebraField f = builtin_truth("bumps", bench_mesh(), Group::SU2);
  const auto& geos = bench_geodesics();
  std::vector<double> out(geos.size() * flat_size(f.group()));
  for (auto _ : state) {
    if constexpr (Parallel)
      scattering_batch_flat(f, geos, out);
    else
      scattering_batch_flat_serial(f, geos, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(geos.size()));
}

template <bool Parallel>
void BM_matern(benchmark::State& state) {
  const MaternParams p{};
  for (auto _ : state) {
    auto c = Parallel ? matern_covariance(*bench_mesh(), p) : matern_covariance_serial(*bench_mesh(), p);
    benchmark::DoNotOptimize(c.data());
  }
}

template <bool Parallel>
void BM_shoot(benchmark::State& state) {
  const Metric metric = builtin_metric("paper-gaussian");
  const auto entries = sample_fanbeam(100, 3);
  for (auto _ : state) {
    auto g = Parallel ? shoot_geodesics(metric, *bench_mesh(), entries, 1e-3)
                      : shoot_geodesics_serial(metric, *bench_mesh(), entries, 1e-3);
    benchmark::DoNotOptimize(g.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(entries.size()));
}

}  // namespace

BENCHMARK(BM_scattering<false>)->Name("scattering_batch/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_scattering<true>)->Name("scattering_batch/omp")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_matern<false>)->Name("matern_covariance/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_matern<true>)->Name("matern_covariance/omp")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_shoot<false>)->Name("shoot_geodesics/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_shoot<true>)->Name("shoot_geodesics/omp")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
