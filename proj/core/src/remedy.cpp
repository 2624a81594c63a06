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

#include "qfa/remedy.hpp"

#include <algorithm>
#include <stdexcept>

namespace qfa {

namespace {

nlohmann::json cell_json(const std::pair<int, int>& key) { return nlohmann::json::array({key.first, key.second}); }

nlohmann::json counts_json(const std::map<std::pair<int, int>, std::size_t>& counts) {
    auto j = nlohmann::json::array();
    for (const auto& [key, count] : counts) j.push_back({{"col", key.first}, {"row", key.second}, {"count", count}});
    return j;
}

}  // namespace

nlohmann::json RemedyResult::to_json() const {
    nlohmann::json j;
    j["reached_ground"] = reached_ground;
    j["iterations_used"] = iterations_used;
    auto steps = nlohmann::json::array();
    for (const auto& s : history) {
        nlohmann::json e;
        e["iteration"] = s.iteration;
        e["seed"] = s.seed;
        e["best_energy"] = s.best_energy;
        e["zero_energy_reads"] = s.zero_energy_reads;
        e["most_excited"] = cell_json(s.most_excited);
        e["most_excited_count"] = s.most_excited_count;
        e["target"] = s.target.first < 0 ? nlohmann::json(nullptr) : cell_json(s.target);
        e["per_cfa"] = counts_json(s.per_cfa);
        nlohmann::json offs = nlohmann::json::object();
        for (const auto& [q, v] : s.offsets) offs[std::to_string(q)] = v;
        e["offsets"] = offs;
        e["warnings"] = s.warnings;
        steps.push_back(e);
    }
    j["history"] = steps;
    return j;
}

RemedyResult remedy_loop(const MultiplierLayout& layout, const IsingModel& model, const AnnealConfig& base_config,
                         double delta, int threshold) {
    if (!(delta > 0.0)) throw ConfigError("remedy: delta must be positive");
    if (threshold == 0) threshold = default_remedy_threshold(layout.n, layout.m);
    if (threshold < 1) throw ConfigError("remedy: threshold must be at least 1");

    RemedyResult result;
    AnnealConfig config = base_config;
    for (int it = 0;; ++it) {
        RemedyStep step;
        step.iteration = it;
        step.seed = derive_seed(base_config.master_seed, 0x52454d00ULL + static_cast<std::uint64_t>(it));
        config.master_seed = step.seed;
        const SampleSet set = sample_sa(model, config);
        const ExcitationReport report = excitation_stats(layout, model, set);
        step.best_energy = set.min_energy();
        step.zero_energy_reads = report.zero_energy_reads();
        step.per_cfa = report.per_cfa;
        const auto [cell, count] = report.most_excited();
        step.most_excited = cell;
        step.most_excited_count = count;

        if (step.zero_energy_reads > 0) result.reached_ground = true;
        if (result.reached_ground || it >= threshold || count == 0) {
            step.offsets = config.offsets;
            result.history.push_back(std::move(step));
            break;
        }
        step.target = cell;
        const TileInstance& t = layout.tile(cell.second, cell.first);
        for (Qubit q : t.tile.qubits) {
            double& off = config.offsets[q];
            off += delta;
            if (off > kMaxAnnealOffset) {
                off = kMaxAnnealOffset;
                step.warnings.push_back("offset of qubit " + std::to_string(q) + " clamped");
            }
        }
        step.offsets = config.offsets;
        result.history.push_back(std::move(step));
        result.iterations_used = it + 1;
    }
    result.offsets = config.offsets;
    return result;
}

}  // namespace qfa
