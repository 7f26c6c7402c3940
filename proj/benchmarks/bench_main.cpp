#include <benchmark/benchmark.h>

#include "cvqt/measures.hpp"
#include "cvqt/model.hpp"
#include "cvqt/protocol.hpp"
#include "cvqt/tomography.hpp"

#include <cmath>
#include <vector>

namespace {

using namespace cvqt;

void BM_RunTeleportation(benchmark::State& state) {
  const ProtocolConfig cfg = reference_lab_config();
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_teleportation(cfg, {1.0, 0.5}).fidelity);
  }
}
BENCHMARK(BM_RunTeleportation);

void BM_CalibrateGain(benchmark::State& state) {
  ProtocolConfig cfg = reference_lab_config();
  for (auto _ : state) {
    benchmark::DoNotOptimize(calibrate_gain(cfg));
  }
}
BENCHMARK(BM_CalibrateGain);

void BM_Negativity(benchmark::State& state) {
  const GaussianState tms = build_tms(5.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(negativity(tms));
  }
}
BENCHMARK(BM_Negativity);

void BM_SampleState(benchmark::State& state) {
  const GaussianState tms = build_tms(5.0);
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_state(tms, n, 1).sum());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n));
}
BENCHMARK(BM_SampleState)->Arg(1 << 14)->Arg(1 << 18);

void BM_ComputeMoments(benchmark::State& state) {
  const GaussianState tms = build_tms(5.0);
  const Eigen::MatrixXd samples = sample_state(tms, 1 << 16, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(compute_moments(samples, 4, 64).entries.size());
  }
  state.SetItemsProcessed(state.iterations() * samples.rows());
}
BENCHMARK(BM_ComputeMoments);

void BM_FitModel(benchmark::State& state) {
  std::vector<FitPoint> data;
  for (int i = 0; i < 20; ++i) {
    const double n = std::pow(10.0, -2.0 + 4.0 * i / 19.0);
    data.push_back({n, model_fidelity(n, {0.778, 1.015}), 1.0});
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_model(data).params.kappa);
  }
}
BENCHMARK(BM_FitModel);

}  // namespace

BENCHMARK_MAIN();
