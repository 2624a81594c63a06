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

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "qfa/diagnostics.hpp"
#include "qfa/multiplier.hpp"
#include "qfa/sampler.hpp"

namespace qfa {

inline constexpr double kDefaultRemedyDelta = 0.01;

// Perimeter of the embedded multiplier.
inline int default_remedy_threshold(int n, int m) { return 2 * (n + m); }

struct RemedyStep {
    int iteration = 0;
    std::uint64_t seed = 0;
    std::pair<int, int> most_excited{-1, -1};  // (col, row)
    std::size_t most_excited_count = 0;
    std::map<std::pair<int, int>, std::size_t> per_cfa;
    double best_energy = 0.0;
    std::size_t zero_energy_reads = 0;
    std::pair<int, int> target{-1, -1};  // (col, row); unset on the stopping step
    std::map<Qubit, double> offsets;     // cumulative, after this step
    std::vector<std::string> warnings;
};

struct RemedyResult {
    std::vector<RemedyStep> history;
    bool reached_ground = false;
    int iterations_used = 0;
    std::map<Qubit, double> offsets;

    nlohmann::json to_json() const;
};

// Each iteration samples with fresh seeds derived from the base master seed,
// stops on a zero-energy read, else advances the 8 qubits of the most
// excited tile by delta. Offsets above the sampler bound are clamped.
RemedyResult remedy_loop(const MultiplierLayout& layout, const IsingModel& model, const AnnealConfig& base_config,
                         double delta = kDefaultRemedyDelta, int threshold = 0);

}  // namespace qfa
