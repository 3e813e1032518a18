// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "metaopt/channel.hpp"
#include "metaopt/meta.hpp"

namespace {

using namespace metaopt;

void BM_OneRingCorrelation(benchmark::State& state) {
    const AntennaArray array =
        AntennaArray::uniform_linear(state.range(0), 0.5);
    for (auto _ : state)
        benchmark::DoNotOptimize(one_ring_correlation(array, 0.3, 0.1));
}
BENCHMARK(BM_OneRingCorrelation)->Arg(16)->Arg(64);

void BM_HrsmaBackward(benchmark::State& state) {
    const Eigen::Index nt = 8, k = 4, g = 2;
    SeededRng rng(7);
    const UserGroupLayout layout =
        UserGroupLayout::equal_groups(k, g, {-0.5, 0.5}, {0.1, 0.1});
    const AntennaArray array = AntennaArray::uniform_linear(nt, 0.5);
    const CsitEnsemble ensemble =
        sample_csit_ensemble(rng, layout, array, 0.5, state.range(0));
    const ObjectiveFn objective = hrsma_objective(
        ensemble, layout, PrecoderMode::Hrsma, 1.0, 100.0,
        RealVector::Zero(k), 0.0);
    const RealVector x0 =
        precoder_to_variable(svd_mrt_init(ensemble, layout, 100.0));
    for (auto _ : state) {
        Tape tape;
        RealVar x = tape.param(x0);
        RealVector realized;
        RealVar loss = objective(tape, x, realized);
        tape.backward(loss);
        benchmark::DoNotOptimize(tape.grad(x));
    }
}
BENCHMARK(BM_HrsmaBackward)->Arg(8)->Arg(32)->Arg(64);

void BM_MetaIteration(benchmark::State& state) {
    const Eigen::Index nt = 8, k = 4, g = 2;
    SeededRng rng(11);
    const UserGroupLayout layout =
        UserGroupLayout::equal_groups(k, g, {-0.5, 0.5}, {0.1, 0.1});
    const AntennaArray array = AntennaArray::uniform_linear(nt, 0.5);
    const CsitEnsemble ensemble =
        sample_csit_ensemble(rng, layout, array, 0.5, 16);
    const ObjectiveFn objective = hrsma_objective(
        ensemble, layout, PrecoderMode::Hrsma, 1.0, 100.0,
        RealVector::Zero(k), 0.0);
    const RealVector x0 =
        precoder_to_variable(svd_mrt_init(ensemble, layout, 100.0));
    const MlpSpec spec = MlpSpec::precoder_learner(x0.size(), 400);
    for (auto _ : state) {
        SeededRng run_rng = rng.derive(1);
        benchmark::DoNotOptimize(
            meta_optimize_single(objective, x0, spec, 2, 1e-3, run_rng));
    }
}
BENCHMARK(BM_MetaIteration);

} // namespace

BENCHMARK_MAIN();
