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

#include <doctest.h>

#include "support.hpp"

using namespace qfa;

namespace {

ProblemInstance instance(int n, int m, std::uint64_t N) {
    ApplyOptions o;
    o.library = &testing::shared_library();
    const auto& b = testing::multiplier(n, m);
    return apply_problem(b.layout, b.model, N, InitMethod::FluxBias, o);
}

std::pair<int, int> argmax(const std::map<std::pair<int, int>, std::size_t>& counts) {
    std::pair<int, int> best{-1, -1};
    std::size_t top = 0;
    for (const auto& [k, c] : counts)
        if (best.first < 0 || c > top || (c == top && k < best)) {
            best = k;
            top = c;
        }
    return best;
}

}  // namespace

TEST_CASE("threshold defaults to the perimeter") {
    CHECK(default_remedy_threshold(8, 8) == 32);
    CHECK(default_remedy_threshold(9, 8) == 34);
    CHECK(default_remedy_threshold(10, 8) == 36);
}

TEST_CASE("ground state on the first sample stops immediately") {
    const auto inst = instance(3, 3, 35);
    AnnealConfig cfg;
    cfg.master_seed = 4;
    const auto r = remedy_loop(inst.layout, inst.model, cfg);
    CHECK(r.reached_ground);
    CHECK(r.iterations_used == 0);
    REQUIRE(r.history.size() == 1);
    CHECK(r.offsets.empty());
}

TEST_CASE("remedy targets the argmax and accumulates exact steps") {
    const auto inst = instance(4, 4, 143);
    const auto digest = model_digest(inst.model);
    AnnealConfig cfg;
    cfg.num_reads = 40;
    cfg.sweeps = 20;
    cfg.master_seed = 8;
    const double delta = 0.01;
    const auto r = remedy_loop(inst.layout, inst.model, cfg, delta, 6);
    CHECK(model_digest(inst.model) == digest);
    CHECK(r.iterations_used <= 6);
    std::map<Qubit, int> hits;
    for (const auto& step : r.history) {
        CHECK(step.most_excited == argmax(step.per_cfa));
        if (step.target.first < 0) continue;
        CHECK(step.target == step.most_excited);
        for (Qubit q : inst.layout.tile(step.target.second, step.target.first).tile.qubits) ++hits[q];
        for (const auto& [q, k] : hits) CHECK(step.offsets.at(q) == doctest::Approx(k * delta).epsilon(1e-12));
        CHECK(step.offsets.size() == hits.size());
    }
    CHECK(r.history.back().iteration == r.iterations_used);
    const auto j = r.to_json();
    CHECK(j.at("history").size() == r.history.size());
    CHECK(j.at("iterations_used") == r.iterations_used);
}

TEST_CASE("offsets clamp with a warning") {
    const auto inst = instance(4, 4, 143);
    AnnealConfig cfg;
    cfg.num_reads = 10;
    cfg.sweeps = 5;
    const auto r = remedy_loop(inst.layout, inst.model, cfg, 0.15, 3);
    bool warned = false;
    for (const auto& s : r.history) warned = warned || !s.warnings.empty();
    for (const auto& [q, v] : r.offsets) CHECK(v <= kMaxAnnealOffset + 1e-12);
    if (r.iterations_used >= 2) {
        std::map<std::pair<int, int>, int> times;
        for (const auto& s : r.history)
            if (s.target.first >= 0) ++times[s.target];
        bool repeated = false;
        for (const auto& [k, t] : times) repeated = repeated || t >= 2;
        CHECK(warned == repeated);
    }
}

TEST_CASE("remedy arguments are checked") {
    const auto inst = instance(3, 3, 35);
    CHECK_THROWS_AS(remedy_loop(inst.layout, inst.model, AnnealConfig{}, 0.0, 1), ConfigError);
    CHECK_THROWS_AS(remedy_loop(inst.layout, inst.model, AnnealConfig{}, 0.01, -1), ConfigError);
}
