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

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "qfa/boolean_spec.hpp"
#include "qfa/ising.hpp"
#include "qfa/topology.hpp"

namespace qfa {

// Ancillas are named a1, a2, ...; everything else in a placement is a
// variable of the spec.
bool is_ancilla_name(const std::string& name);

struct PenaltyFunction {
    double offset = 0.0;
    std::map<Qubit, double> biases;
    std::map<Edge, double> couplings;
    double gap = 0.0;
    std::map<std::string, Qubit> placement;
    int num_ancillas = 0;
    Fixing fixing;

    // Qubits of the placement, ascending.
    std::vector<Qubit> qubits() const;
    std::vector<Qubit> ancilla_qubits() const;

    // Local energy; every placed qubit needs a spin.
    double energy(const SpinMap& spins) const;
    // Minimum over ancilla spins with the non-ancilla qubits taken from
    // `spins`; optionally reports the minimizing ancilla spins.
    double min_over_ancillas(const SpinMap& spins, SpinMap* best = nullptr) const;

    void add_to(IsingModel& model) const;
    PenaltyFunction scaled(double lambda) const;
};

struct VerificationResult {
    bool satisfies_spec = false;
    double measured_gap = 0.0;
    double worst_sat_residual = 0.0;
    std::size_t slack_solution_count = 0;
};

inline constexpr double kResidualTolerance = 1e-9;
inline constexpr double kGapSlack = 1e-6;

VerificationResult verify_penalty(const PenaltyFunction& pf, const BooleanSpec& spec);

class SynthesisInfeasible : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct SynthOptions {
    double bias_bound = kBiasMax;
    // Qubits of fixed variables become extra ancillas with zero bias.
    bool recycle_fixed = true;
    // Second pass lifting slack rows towards the gap at the optimal gap.
    bool minimize_slack = true;
    // Cap on LP solves in the ancilla search; the best penalty found within
    // the cap is returned.
    long max_lps = 200000;
};

// Penalty over explicit qubits: `variables` maps each free variable of the
// spec to a qubit, `ancillas` are extra qubits, `zero_bias` ancillas get no
// linear term. Couplers are restricted to `couplers`.
PenaltyFunction synthesize_penalty(const BooleanSpec& spec,
                                   const std::vector<std::pair<std::string, Qubit>>& variables,
                                   const std::vector<Qubit>& ancillas, const std::vector<Qubit>& zero_bias,
                                   const std::vector<Edge>& couplers, const SynthOptions& options = {});

// CFA-shaped spec on a tile: variables sit on their named slots, the first
// `num_ancillas` ancilla slots follow, then (if enabled) recycled slots of
// fixed variables.
PenaltyFunction synthesize_penalty(const BooleanSpec& spec, const TileAssignment& tile, int num_ancillas = 2,
                                   const SynthOptions& options = {});

nlohmann::json to_json(const PenaltyFunction& pf);
PenaltyFunction penalty_from_json(const nlohmann::json& j);

// Specialized CFA penalties keyed by tile variant and fixing. Placements
// refer to the template tiles; transplant() maps an entry onto any tile of
// the same variant slot by slot.
class CfaLibrary {
  public:
    struct Entry {
        int variant = 0;
        PenaltyFunction penalty;
    };

    std::array<TileAssignment, 2> templates{};
    std::vector<Entry> entries;

    const PenaltyFunction* find(int variant, const Fixing& fixing) const;
    const PenaltyFunction& base(int variant) const;
    PenaltyFunction transplant(const PenaltyFunction& pf, int variant, const TileAssignment& tile) const;

    nlohmann::json to_json() const;
    static CfaLibrary from_json(const nlohmann::json& j);
};

// Canonical ordering of a fixing: slot order of the CFA variables.
Fixing canonical_fixing(Fixing fixing);

// Variables a tile at (row, col) of a rows x cols multiplier has pinned by
// constants or output bits.
std::vector<std::string> border_variables(int row, int col, int rows, int cols);

// Base entries for both variants plus every border fixing combination that
// leaves the CFA satisfiable. Base entries keep biases inside
// [-base_bias_bound, base_bias_bound].
CfaLibrary build_specialized_library(const HardwareGraph& graph, double base_bias_bound = 1.0,
                                     const SynthOptions& options = {});

}  // namespace qfa
