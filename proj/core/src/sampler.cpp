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

#include "qfa/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

namespace qfa {

void AnnealConfig::validate() const {
    if (num_reads < 1) throw ConfigError("num_reads must be at least 1");
    if (sweeps < 1) throw ConfigError("sweeps must be at least 1");
    if (!(beta_min > 0.0) || !(beta_max >= beta_min)) throw ConfigError("need 0 < beta_min <= beta_max");
    if (!(offset_scale >= 0.0)) throw ConfigError("offset_scale must be non-negative");
    if (!(flux_strength >= 0.0)) throw ConfigError("flux_strength must be non-negative");
    if (threads < 1) throw ConfigError("threads must be at least 1");
    for (const auto& [q, d] : offsets)
        if (!(std::abs(d) <= kMaxAnnealOffset + 1e-12))
            throw ConfigError("anneal offset of qubit " + std::to_string(q) + " exceeds 0.2 in magnitude");
}

double AnnealConfig::beta_at(double progress) const {
    return beta_min * std::pow(beta_max / beta_min, std::clamp(progress, 0.0, 1.0));
}

nlohmann::json AnnealConfig::to_json() const {
    nlohmann::json off = nlohmann::json::object();
    for (const auto& [q, d] : offsets) off[std::to_string(q)] = d;
    return {{"num_reads", num_reads},         {"sweeps", sweeps},           {"beta_min", beta_min},
            {"beta_max", beta_max},           {"offsets", off},             {"offset_scale", offset_scale},
            {"flux_strength", flux_strength}, {"master_seed", master_seed}};
}

AnnealConfig anneal_config_from_json(const nlohmann::json& j) {
    AnnealConfig c;
    c.num_reads = j.value("num_reads", c.num_reads);
    c.sweeps = j.value("sweeps", c.sweeps);
    c.beta_min = j.value("beta_min", c.beta_min);
    c.beta_max = j.value("beta_max", c.beta_max);
    c.offset_scale = j.value("offset_scale", c.offset_scale);
    c.flux_strength = j.value("flux_strength", c.flux_strength);
    c.master_seed = j.value("master_seed", c.master_seed);
    c.threads = j.value("threads", c.threads);
    if (j.contains("offsets"))
        for (const auto& [k, v] : j.at("offsets").items()) c.offsets[std::stoi(k)] = v.get<double>();
    return c;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::size_t SampleSet::num_reads() const {
    std::size_t n = 0;
    for (const auto& s : samples) n += s.occurrences;
    return n;
}

double SampleSet::min_energy() const {
    double e = std::numeric_limits<double>::infinity();
    for (const auto& s : samples) e = std::min(e, s.energy);
    return e;
}

SpinMap SampleSet::spin_map(const Sample& s) const {
    SpinMap out;
    for (std::size_t i = 0; i < qubits.size(); ++i) out[qubits[i]] = s.spins[i];
    return out;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

SampleSet sample_exact(const IsingModel& model) {
    const CompactModel cm(model);
    const std::size_t n = cm.size();
    if (n > kMaxExactQubits)
        throw SamplerCapacityError("exact sampling supports at most 26 free qubits, model has " + std::to_string(n));
    SampleSet set;
    set.qubits = cm.qubits;
    set.model_digest = model_digest(model);
    set.config_digest = fnv1a_hex("exact");

    // Gray-code walk with incremental energy updates.
    std::vector<std::int8_t> spins(n, -1);
    std::vector<double> local(n);
    for (std::size_t i = 0; i < n; ++i) {
        local[i] = cm.field[i];
        for (const auto& [k, j] : cm.adj[i]) local[i] += j * spins[k];
    }
    double energy = cm.energy(spins);
    double best = energy;
    std::vector<std::uint64_t> minima{0};
    std::uint64_t code = 0;
    const std::uint64_t total = std::uint64_t{1} << n;
    constexpr double kTie = 1e-9;
    for (std::uint64_t step = 1; step < total; ++step) {
        const auto k = static_cast<std::size_t>(__builtin_ctzll(step));
        energy -= 2.0 * spins[k] * local[k];
        spins[k] = static_cast<std::int8_t>(-spins[k]);
        for (const auto& [nb, j] : cm.adj[k]) local[nb] += 2.0 * j * spins[k];
        code ^= std::uint64_t{1} << k;
        if (energy < best - kTie) {
            best = energy;
            minima.assign(1, code);
        } else if (energy <= best + kTie) {
            minima.push_back(code);
        }
    }
    std::sort(minima.begin(), minima.end());
    for (std::uint64_t c : minima) {
        Sample s;
        s.spins.resize(n);
        for (std::size_t i = 0; i < n; ++i) s.spins[i] = ((c >> i) & 1U) ? 1 : -1;
        s.energy = cm.energy(s.spins);
        s.first_read = set.samples.size();
        set.samples.push_back(std::move(s));
    }
    // Drift in the running sum can admit near-ties; keep exact minima only.
    const double e_min = set.min_energy();
    std::erase_if(set.samples, [&](const Sample& s) { return s.energy > e_min + kTie; });
    for (std::size_t i = 0; i < set.samples.size(); ++i) set.samples[i].first_read = i;
    return set;
}

namespace {

// exp(-40) is below the resolution of a 53-bit uniform draw.
constexpr double kMaxExponent = 40.0;

void anneal_read(const CompactModel& cm, const std::vector<double>& flux_field,
                 const std::vector<double>& progress_shift, const AnnealConfig& config, std::uint64_t seed,
                 std::vector<std::int8_t>& spins) {
    const std::size_t n = cm.size();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    spins.assign(n, 1);
    for (auto& s : spins) s = (rng() & 1U) ? 1 : -1;
    // Local fields are kept current across flips; most proposals are
    // rejected late in the anneal, so this beats recomputing per proposal.
    std::vector<double> field(n);
    for (std::size_t i = 0; i < n; ++i) {
        field[i] = cm.field[i] + flux_field[i];
        for (const auto& [k, j] : cm.adj[i]) field[i] += j * spins[k];
    }
    std::vector<std::size_t> shifted;
    for (std::size_t i = 0; i < n; ++i)
        if (progress_shift[i] != 0.0) shifted.push_back(i);
    std::vector<double> beta(n);
    const int sweeps = config.sweeps;
    for (int t = 0; t < sweeps; ++t) {
        const double progress = sweeps == 1 ? 1.0 : static_cast<double>(t) / (sweeps - 1);
        std::fill(beta.begin(), beta.end(), config.beta_at(progress));
        for (std::size_t i : shifted) beta[i] = config.beta_at(progress + progress_shift[i]);
        for (std::size_t i = 0; i < n; ++i) {
            const double delta = -2.0 * spins[i] * field[i];
            const double x = beta[i] * delta;
            if (delta > 0.0 && (x > kMaxExponent || uni(rng) >= std::exp(-x))) continue;
            spins[i] = static_cast<std::int8_t>(-spins[i]);
            for (const auto& [k, j] : cm.adj[i]) field[k] += 2.0 * j * spins[i];
        }
    }
}

}  // namespace

SampleSet sample_sa(const IsingModel& model, const AnnealConfig& config) {
    config.validate();
    const CompactModel cm(model);
    const std::size_t n = cm.size();
    std::vector<double> flux_field(n, 0.0), shift(n, 0.0);
    for (const auto& [q, target] : model.flux_biases) {
        const int i = cm.index_of(q);
        if (i >= 0) flux_field[static_cast<std::size_t>(i)] = -config.flux_strength * target;
    }
    for (const auto& [q, d] : config.offsets) {
        const int i = cm.index_of(q);
        if (i >= 0) shift[static_cast<std::size_t>(i)] = d * config.offset_scale;
    }

    const auto reads = static_cast<std::size_t>(config.num_reads);
    std::vector<std::vector<std::int8_t>> results(reads);
    auto work = [&](std::size_t first, std::size_t stride) {
        for (std::size_t r = first; r < reads; r += stride)
            anneal_read(cm, flux_field, shift, config, derive_seed(config.master_seed, r), results[r]);
    };
    const auto threads = static_cast<std::size_t>(std::min<int>(config.threads, config.num_reads));
    if (threads <= 1) {
        work(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
        for (auto& th : pool) th.join();
    }

    SampleSet set;
    set.qubits = cm.qubits;
    set.model_digest = model_digest(model);
    set.config_digest = fnv1a_hex(config.to_json().dump());
    std::map<std::vector<std::int8_t>, std::size_t> index;
    for (std::size_t r = 0; r < reads; ++r) {
        auto [it, fresh] = index.try_emplace(results[r], set.samples.size());
        if (!fresh) {
            ++set.samples[it->second].occurrences;
            continue;
        }
        Sample s;
        s.spins = results[r];
        s.energy = evaluate_energy(model, set.spin_map(s));
        s.first_read = r;
        set.samples.push_back(std::move(s));
    }
    return set;
}

std::string sampleset_csv(const SampleSet& set) {
    std::ostringstream os;
    os << "read_id,energy,occurrences,spins\n";
    for (const auto& s : set.samples) {
        os << s.first_read << ',' << format_double(s.energy) << ',' << s.occurrences << ',';
        for (auto v : s.spins) os << (v > 0 ? '+' : '-');
        os << '\n';
    }
    return os.str();
}

nlohmann::json sampleset_sidecar(const SampleSet& set, const AnnealConfig& config) {
    return {{"config", config.to_json()},
            {"qubits", set.qubits},
            {"model_digest", set.model_digest},
            {"config_digest", set.config_digest},
            {"num_reads", set.num_reads()},
            {"distinct_samples", set.samples.size()}};
}

}  // namespace qfa
