#include <benchmark/benchmark.h>

#include "cvkey/analysis.hpp"
#include "cvkey/fock_oracle.hpp"
#include "cvkey/keyrate.hpp"

namespace {

using namespace cvkey;

ResourceSpec spec_of(ResourceKind kind) {
  ResourceSpec spec;
  spec.kind = kind;
  spec.r = squeezing_from_cosh2r(50);
  spec.t_bs = 0.9;
  spec.k = 1;
  spec.loss_p = 0.002;
  return spec;
}

void BM_SecretKeyRate_Tmsv(benchmark::State& state) {
  const ResourceSpec spec = spec_of(ResourceKind::Tmsv);
  const MismatchParams mm = MismatchParams::direct(0.01);
  const ChannelParams ch{15, 0.02, 1.0, 0.95};
  for (auto _ : state)
    benchmark::DoNotOptimize(secret_key_rate(spec, mm, ch).key_rate);
}
BENCHMARK(BM_SecretKeyRate_Tmsv);

void BM_SecretKeyRate_Subtracted(benchmark::State& state) {
  const ResourceSpec spec = spec_of(ResourceKind::Subtracted);
  const MismatchParams mm = MismatchParams::direct(0.01);
  const ChannelParams ch{15, 0.02, 1.0, 0.95};
  for (auto _ : state)
    benchmark::DoNotOptimize(secret_key_rate(spec, mm, ch).key_rate);
}
BENCHMARK(BM_SecretKeyRate_Subtracted);

void BM_SweepDistance400(benchmark::State& state) {
  SweepSpec spec;
  spec.resource = spec_of(ResourceKind::ZeroPhotonCatalysis);
  spec.mismatch = MismatchParams::direct(0.01);
  for (auto _ : state) benchmark::DoNotOptimize(sweep(spec, 1).size());
}
BENCHMARK(BM_SweepDistance400);

void BM_MaxDistance_Zpc(benchmark::State& state) {
  const ResourceSpec spec = spec_of(ResourceKind::ZeroPhotonCatalysis);
  const MismatchParams mm = MismatchParams::direct(0.01);
  const ChannelParams ch{15, 0.02, 1.0, 0.95};
  for (auto _ : state)
    benchmark::DoNotOptimize(max_distance(spec, mm, ch, 0.01));
}
BENCHMARK(BM_MaxDistance_Zpc);

void BM_FockOracle_Subtract1(benchmark::State& state) {
  const FockState st = tmsv_fock(0.5, 60);
  for (auto _ : state)
    benchmark::DoNotOptimize(project_ancilla(st, 0.9, 1).probability);
}
BENCHMARK(BM_FockOracle_Subtract1);

}  // namespace

BENCHMARK_MAIN();
