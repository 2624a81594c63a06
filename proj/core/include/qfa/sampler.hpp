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
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qfa/ising.hpp"

namespace qfa {

class ConfigError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class SamplerCapacityError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline constexpr double kMaxAnnealOffset = 0.2;

struct AnnealConfig {
    int num_reads = 1000;
    int sweeps = 500;
    // Geometric inverse-temperature ramp over schedule progress [0, 1].
    double beta_min = 0.1;
    double beta_max = 10.0;
    std::map<Qubit, double> offsets;  // per-qubit schedule advance
    double offset_scale = 1.0;
    double flux_strength = 10.0;
    std::uint64_t master_seed = 0;
    int threads = 1;

    void validate() const;
    double beta_at(double progress) const;
    // Every field except `threads`, which never changes results.
    nlohmann::json to_json() const;
};

AnnealConfig anneal_config_from_json(const nlohmann::json& j);

// splitmix64 over (master, index).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

struct Sample {
    std::vector<std::int8_t> spins;  // over SampleSet::qubits
    double energy = 0.0;
    std::size_t occurrences = 1;
    std::size_t first_read = 0;
};

struct SampleSet {
    std::vector<Qubit> qubits;  // free qubits, ascending
    std::vector<Sample> samples;
    std::string model_digest;
    std::string config_digest;

    std::size_t num_reads() const;
    double min_energy() const;
    SpinMap spin_map(const Sample& s) const;
};

inline constexpr std::size_t kMaxExactQubits = 26;

// All global minima, one entry each.
SampleSet sample_exact(const IsingModel& model);

// Independent Metropolis anneals; identical spin vectors are merged in
// first-seen read order.
SampleSet sample_sa(const IsingModel& model, const AnnealConfig& config);

// read_id,energy,occurrences,spins with spins LSB-first (first free qubit
// first) as a string of + and -.
std::string sampleset_csv(const SampleSet& set);
nlohmann::json sampleset_sidecar(const SampleSet& set, const AnnealConfig& config);

// Energies print with 17 significant digits so files round-trip.
std::string format_double(double v);

}  // namespace qfa
