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

#include <random>
#include <set>
#include <sstream>

#include "support.hpp"

using namespace qfa;

namespace {

IsingModel random_model(std::mt19937_64& rng, int n) {
    std::uniform_int_distribution<int> u(-4, 4);
    IsingModel m;
    for (int i = 0; i < n; ++i) m.add_bias(i, 0.5 * u(rng));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng() % 2) m.add_coupling(i, j, 0.25 * u(rng));
    return m;
}

AnnealConfig quick(int reads, std::uint64_t seed) {
    AnnealConfig c;
    c.num_reads = reads;
    c.sweeps = 200;
    c.master_seed = seed;
    return c;
}

}  // namespace

TEST_CASE("independent strong fields anneal to -1") {
    IsingModel m;
    for (int i = 0; i < 12; ++i) m.add_bias(i, 4.0);
    const auto set = sample_sa(m, quick(50, 1));
    REQUIRE(set.samples.size() == 1);
    CHECK(set.samples[0].occurrences == 50);
    for (auto s : set.samples[0].spins) CHECK(s == -1);
    CHECK(set.samples[0].energy == doctest::Approx(-48.0));
}

TEST_CASE("exact sampler matches brute force") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 2 + trial % 9;
        const auto m = random_model(rng, n);
        double best = 1e300;
        std::set<std::uint32_t> argmin;
        for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
            SpinMap s;
            for (int i = 0; i < n; ++i) s[i] = (mask >> i) & 1U ? 1 : -1;
            const double e = evaluate_energy(m, s);
            if (e < best - 1e-9) {
                best = e;
                argmin = {mask};
            } else if (e <= best + 1e-9) {
                argmin.insert(mask);
            }
        }
        const auto set = sample_exact(m);
        CHECK(set.min_energy() == doctest::Approx(best));
        std::set<std::uint32_t> got;
        for (const auto& s : set.samples) {
            std::uint32_t mask = 0;
            for (int i = 0; i < n; ++i)
                if (s.spins[static_cast<std::size_t>(i)] > 0) mask |= 1U << i;
            got.insert(mask);
        }
        CHECK(got == argmin);
    }
}

TEST_CASE("exact sampler capacity") {
    IsingModel m;
    for (int i = 0; i < 27; ++i) m.add_bias(i, 1.0);
    CHECK_THROWS_AS(sample_exact(m), SamplerCapacityError);
}

TEST_CASE("clamped chain has a unique minimum") {
    IsingModel m;
    m.offset = 4.0;
    m.add_coupling(0, 1, -2.0);
    m.add_coupling(1, 2, -2.0);
    m.touch(0);
    m.touch(1);
    m.touch(2);
    m.clamped[0] = 1;
    const auto set = sample_exact(m);
    REQUIRE(set.samples.size() == 1);
    CHECK(set.samples[0].energy == doctest::Approx(0.0));
    CHECK(set.samples[0].spins == std::vector<std::int8_t>{1, 1});
}

TEST_CASE("one clamped cfa tile") {
    const auto& lib = testing::shared_library();
    const auto& pf = lib.base(0);
    const auto& t = lib.templates[0];
    const auto spec = cfa_spec();
    for (std::uint32_t a = 0; a < 64; ++a) {
        IsingModel m;
        pf.add_to(m);
        for (int k = 0; k < kNumPorts; ++k) m.clamped[t.at(k)] = (a >> k) & 1U ? 1 : -1;
        const double e = sample_exact(m).min_energy();
        if (spec.holds(a))
            CHECK(std::abs(e) <= 1e-9);
        else
            CHECK(e >= pf.gap - 1e-9);
    }
}

TEST_CASE("sampling is deterministic and thread independent") {
    std::mt19937_64 rng(2);
    const auto m = random_model(rng, 30);
    auto cfg = quick(64, 99);
    const auto a = sample_sa(m, cfg);
    const auto b = sample_sa(m, cfg);
    cfg.threads = 4;
    const auto c = sample_sa(m, cfg);
    CHECK(sampleset_csv(a) == sampleset_csv(b));
    CHECK(sampleset_csv(a) == sampleset_csv(c));
    CHECK(sampleset_sidecar(a, quick(64, 99)).dump() == sampleset_sidecar(c, cfg).dump());
    CHECK(a.num_reads() == 64);
    for (const auto& s : a.samples) CHECK(s.energy == doctest::Approx(evaluate_energy(m, a.spin_map(s))).epsilon(1e-12));
    cfg.master_seed = 100;
    CHECK(sampleset_csv(sample_sa(m, cfg)) != sampleset_csv(a));
}

TEST_CASE("seeds derive per read") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t r = 0; r < 1000; ++r) CHECK(seen.insert(derive_seed(42, r)).second);
    CHECK(derive_seed(1, 0) != derive_seed(2, 0));
    CHECK(derive_seed(7, 3) == derive_seed(7, 3));
}

TEST_CASE("config validation") {
    IsingModel m;
    m.add_bias(0, 1.0);
    auto cfg = quick(1, 0);
    cfg.offsets[0] = 0.25;
    CHECK_THROWS_AS(sample_sa(m, cfg), ConfigError);
    cfg.offsets[0] = -0.2;
    CHECK_NOTHROW(sample_sa(m, cfg));
    cfg.num_reads = 0;
    CHECK_THROWS_AS(sample_sa(m, cfg), ConfigError);
    const auto back = anneal_config_from_json(quick(5, 8).to_json());
    CHECK(back.to_json() == quick(5, 8).to_json());
}

TEST_CASE("offsets leave energies untouched") {
    const auto& b = testing::multiplier(2, 2);
    const auto digest = model_digest(b.model);
    auto cfg = quick(20, 5);
    for (Qubit q : b.layout.tile(0, 0).tile.qubits) cfg.offsets[q] = 0.1;
    const auto set = sample_sa(b.model, cfg);
    CHECK(model_digest(b.model) == digest);
    CHECK(set.model_digest == digest);
    for (const auto& s : set.samples) CHECK(s.energy == doctest::Approx(evaluate_energy(b.model, set.spin_map(s))));
}

TEST_CASE("csv layout") {
    IsingModel m;
    m.add_bias(3, 1.0);
    m.add_bias(5, -1.0);
    const auto csv = sampleset_csv(sample_sa(m, quick(4, 1)));
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "read_id,energy,occurrences,spins");
    std::getline(in, line);
    CHECK(line == "0,-2,4,-+");
}

TEST_CASE("3 x 3 flux run finds 35") {
    const auto& b = testing::multiplier(3, 3);
    ApplyOptions o;
    o.library = &testing::shared_library();
    const auto inst = apply_problem(b.layout, b.model, 35, InitMethod::FluxBias, o);
    AnnealConfig cfg;
    cfg.master_seed = 1;
    const auto set = sample_sa(inst.model, cfg);
    std::size_t hits = 0;
    for (const auto& s : set.samples) {
        const auto d = decode(inst.layout, inst.model, set.spin_map(s));
        if (!d.is_zero_energy()) continue;
        hits += s.occurrences;
        CHECK(((d.p == 5 && d.q == 7) || (d.p == 7 && d.q == 5)));
        CHECK(d.circuit_consistent);
    }
    CHECK(hits > 0);
}
