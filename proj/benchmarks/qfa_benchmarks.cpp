// Copyright 2026 The qfa Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "qfa/diagnostics.hpp"
#include "qfa/multiplier.hpp"
#include "qfa/penalty.hpp"
#include "qfa/sampler.hpp"
#include "qfa/topology.hpp"

namespace {

using namespace qfa;

const HardwareGraph& graph() {
    static const HardwareGraph g = build_pegasus(16);
    return g;
}

const CfaLibrary& library() {
    static const CfaLibrary lib = build_specialized_library(graph());
    return lib;
}

void BM_BuildPegasus(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(build_pegasus(static_cast<int>(state.range(0))));
}
BENCHMARK(BM_BuildPegasus)->Arg(6)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_PlaceTiles(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(place_tiles(graph(), 12, 21));
}
BENCHMARK(BM_PlaceTiles)->Unit(benchmark::kMillisecond);

void BM_SynthesizeBaseCfa(benchmark::State& state) {
    const auto tile = place_tiles(graph(), 1, 1)[0][0];
    SynthOptions opt;
    opt.bias_bound = 1.0;
    for (auto _ : state) benchmark::DoNotOptimize(synthesize_penalty(cfa_spec(), tile, 2, opt));
}
BENCHMARK(BM_SynthesizeBaseCfa)->Unit(benchmark::kMillisecond);

void BM_VerifyPenalty(benchmark::State& state) {
    const auto& pf = library().base(0);
    const auto spec = cfa_spec();
    for (auto _ : state) benchmark::DoNotOptimize(verify_penalty(pf, spec));
}
BENCHMARK(BM_VerifyPenalty);

void BM_BuildMultiplier(benchmark::State& state) {
    const int w = static_cast<int>(state.range(0));
    library();
    for (auto _ : state) benchmark::DoNotOptimize(build_multiplier(w, w, graph(), library()));
}
BENCHMARK(BM_BuildMultiplier)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

// Reads of 100 sweeps on the flux-pinned 4 x 4 multiplier.
void BM_AnnealFlux4x4(benchmark::State& state) {
    const auto b = build_multiplier(4, 4, graph(), library());
    const auto inst = apply_problem(b.layout, b.model, 143, InitMethod::FluxBias);
    AnnealConfig cfg;
    cfg.num_reads = 100;
    cfg.sweeps = 100;
    for (auto _ : state) benchmark::DoNotOptimize(sample_sa(inst.model, cfg));
    state.SetItemsProcessed(state.iterations() * cfg.num_reads * cfg.sweeps *
                            static_cast<std::int64_t>(inst.model.free_qubits().size()));
}
BENCHMARK(BM_AnnealFlux4x4)->Unit(benchmark::kMillisecond);

void BM_ExactSampler(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    IsingModel m;
    for (int i = 0; i < n; ++i) {
        m.add_bias(i, (i % 3) - 1.0);
        if (i > 0) m.add_coupling(i - 1, i, i % 2 ? -1.0 : 0.5);
    }
    for (auto _ : state) benchmark::DoNotOptimize(sample_exact(m));
}
BENCHMARK(BM_ExactSampler)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_ExcitationStats(benchmark::State& state) {
    const auto b = build_multiplier(4, 4, graph(), library());
    const auto inst = apply_problem(b.layout, b.model, 143, InitMethod::FluxBias);
    AnnealConfig cfg;
    cfg.num_reads = 200;
    cfg.sweeps = 50;
    const auto set = sample_sa(inst.model, cfg);
    for (auto _ : state) benchmark::DoNotOptimize(excitation_stats(inst.layout, inst.model, set));
}
BENCHMARK(BM_ExcitationStats)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
