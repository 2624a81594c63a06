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

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qfa/multiplier.hpp"
#include "qfa/sampler.hpp"

namespace qfa {

inline constexpr double kZeroEnergy = 1e-9;

// Sample spins completed with the model's clamped values and, for flux
// pinned problems, the flux targets (constants evaluated as clamped).
SpinMap effective_spins(const IsingModel& model, const SpinMap& sample);
double problem_energy(const IsingModel& model, const SpinMap& sample);

struct FactorCandidate {
    std::uint64_t p = 0;
    std::uint64_t q = 0;
    double energy = 0.0;
    bool circuit_consistent = false;
    bool ancilla_slack = false;

    bool is_zero_energy() const { return std::abs(energy) <= kZeroEnergy; }
};

FactorCandidate decode(const MultiplierLayout& layout, const IsingModel& model, const SpinMap& sample);

// Local energy of one tile's penalty at the given spins.
double tile_penalty(const TileInstance& tile, const SpinMap& spins);

struct SampleFlags {
    bool broken_chain = false;  // includes violated pins
    bool excited_cfa = false;   // some tile at or above its gap
    bool slack_tile = false;    // some tile strictly between 0 and its gap
    bool zero_energy = false;
    std::size_t occurrences = 1;
};

// Counts are weighted by occurrences. Keys of per_cfa and per_chain_tile are
// (col, row).
struct ExcitationReport {
    std::vector<std::size_t> per_chain;  // aligned with layout.chains
    std::map<std::pair<int, int>, std::size_t> per_chain_tile;
    std::map<std::pair<int, int>, std::size_t> per_cfa;
    std::map<std::pair<int, int>, std::size_t> per_cfa_slack;
    std::size_t num_reads = 0;
    std::vector<SampleFlags> flags;  // aligned with sampleset.samples

    std::size_t reads_without_broken_chain() const;
    std::size_t reads_without_excited_cfa() const;
    std::size_t zero_energy_reads() const;
    // Most excited tile, ties to the smallest (col, row).
    std::pair<std::pair<int, int>, std::size_t> most_excited() const;
};

ExcitationReport excitation_stats(const MultiplierLayout& layout, const IsingModel& model, const SampleSet& set);

// kind,col,row,count. Chain rows count reads with any broken chain feeding
// the tile at (col, row).
std::string excitation_csv(const ExcitationReport& report);

// Energy split used by the decomposition check; weights are undone by the
// layout's api scale.
struct EnergyParts {
    double tiles = 0.0;
    double chains = 0.0;
    double pins = 0.0;
    double total(double scale) const { return (tiles + chains + pins) / scale; }
};

EnergyParts energy_parts(const MultiplierLayout& layout, const SpinMap& spins);

}  // namespace qfa
