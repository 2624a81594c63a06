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
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace qfa {

using Qubit = int;
using Edge = std::pair<Qubit, Qubit>;
using SpinMap = std::map<Qubit, int>;

inline Edge make_edge(Qubit a, Qubit b) { return a < b ? Edge{a, b} : Edge{b, a}; }

inline constexpr double kBiasMin = -4.0;
inline constexpr double kBiasMax = 4.0;
inline constexpr double kCouplingMin = -2.0;
inline constexpr double kCouplingMax = 1.0;

class IncompleteAssignment : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// offset + sum_i h_i z_i + sum_ij J_ij z_i z_j over spins in {-1,+1}.
// Every qubit of the model has an entry in `biases` (possibly 0.0) unless it
// has been substituted away, in which case it lives in `clamped`.
struct IsingModel {
    double offset = 0.0;
    std::map<Qubit, double> biases;
    std::map<Edge, double> couplings;
    std::map<Qubit, int> clamped;
    std::map<Qubit, double> flux_biases;
    double gap_reference = 0.0;

    void add_bias(Qubit q, double v) { biases[q] += v; }
    void add_coupling(Qubit a, Qubit b, double v);
    void touch(Qubit q) { biases.try_emplace(q, 0.0); }

    // Qubits carrying weights or annotations, ascending.
    std::vector<Qubit> qubits() const;
    // qubits() minus clamped ones, ascending.
    std::vector<Qubit> free_qubits() const;

    bool operator==(const IsingModel&) const = default;
};

// Flux biases are excluded; clamped qubits take their stored values and
// override anything in `spins`.
double evaluate_energy(const IsingModel& model, const SpinMap& spins);

// Flat form for samplers: free qubits indexed 0..n-1, clamped contributions
// folded into fields and the constant.
struct CompactModel {
    std::vector<Qubit> qubits;
    std::vector<double> field;
    std::vector<std::vector<std::pair<std::uint32_t, double>>> adj;
    double constant = 0.0;

    explicit CompactModel(const IsingModel& model);
    std::size_t size() const { return qubits.size(); }
    double energy(const std::vector<std::int8_t>& spins) const;
    int index_of(Qubit q) const;
};

// "a,b" keys used by every JSON format of this library.
std::string edge_key(const Edge& e);
Edge parse_edge_key(const std::string& key);

nlohmann::json to_json(const IsingModel& model);
IsingModel ising_from_json(const nlohmann::json& j);

// Stable hex digest of the serialized weights (FNV-1a 64).
std::string model_digest(const IsingModel& model);
std::string fnv1a_hex(const std::string& bytes);

}  // namespace qfa
