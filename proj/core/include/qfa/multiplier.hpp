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
#include "qfa/penalty.hpp"
#include "qfa/topology.hpp"

namespace qfa {

class OverflowError : public std::out_of_range {
  public:
    using std::out_of_range::out_of_range;
};

// LSB first; bit 1 -> +1, bit 0 -> -1.
std::vector<int> binary_spins(std::uint64_t value, int width);
std::string spins_msb_first(const std::vector<int>& spins);

// Equivalence link c - c*z*z'. `row`/`col` name the tile the link feeds.
struct Chain {
    Qubit a = -1;
    Qubit b = -1;
    std::string role;
    int row = 0;
    int col = 0;
    double strength = 0.0;
};

// Forcing term strength - strength*target*z added by extra chaining.
struct Pin {
    Qubit qubit = -1;
    int target = 1;
    double strength = 2.0;
};

struct TileInstance {
    TileAssignment tile;
    PenaltyFunction penalty;
};

// Tile (i, j) adds the partial product m_j q_i at weight i + j. Rows carry
// q bits (m of them), columns carry p bits (n of them).
struct MultiplierLayout {
    int n = 0;
    int m = 0;
    double chain_strength = 2.0;
    std::vector<std::vector<TileInstance>> tiles;  // [row][col]
    std::vector<Chain> chains;
    std::vector<Pin> pins;
    std::map<std::string, Qubit> role_map;
    double weight_scale = 1.0;  // divisor applied to every weight by api fixing

    const TileInstance& tile(int row, int col) const {
        return tiles.at(static_cast<std::size_t>(row)).at(static_cast<std::size_t>(col));
    }
    TileInstance& tile(int row, int col) {
        return tiles.at(static_cast<std::size_t>(row)).at(static_cast<std::size_t>(col));
    }
    int rows() const { return m; }
    int cols() const { return n; }
};

std::string tile_role(int row, int col, const std::string& variable);

class MissingLibraryEntry : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class RoutingError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct BuiltMultiplier {
    MultiplierLayout layout;
    IsingModel model;
};

// Sum of tile penalties and chain terms. Non-adjacent chain ends are routed
// through unused qubits along a shortest path; each hop is its own chain.
BuiltMultiplier build_multiplier(int n, int m, const HardwareGraph& graph, const CfaLibrary& library,
                                 double chain_strength = 2.0);

// Model-level gap: the smallest tile gap or chain gap 2c, divided by the
// api rescale factor.
double layout_gap(const MultiplierLayout& layout);

// Recomputes the model from the layout's tile penalties, chains and pins.
IsingModel compose_model(const MultiplierLayout& layout);

enum class InitMethod { ApiFix, AdhocLibrary, ExtraChain, FluxBias };
enum class ChainVariant { DirectBias, NeighborQubit };

InitMethod parse_method(const std::string& name);
std::string method_name(InitMethod method);

// A qubit pinned by the problem: an output bit of N or a structural zero.
struct Constraint {
    Qubit qubit = -1;
    int spin = -1;
    int row = 0;
    int col = 0;
    std::string variable;
};

std::vector<Constraint> problem_constraints(const MultiplierLayout& layout, std::uint64_t N);

struct ApplyOptions {
    ChainVariant chain_variant = ChainVariant::DirectBias;
    const CfaLibrary* library = nullptr;     // needed by AdhocLibrary
    const HardwareGraph* graph = nullptr;    // needed by the neighbour variant
};

struct ProblemInstance {
    MultiplierLayout layout;
    IsingModel model;
    InitMethod method = InitMethod::FluxBias;
    std::uint64_t N = 0;
};

// Clamps the given qubits, folds them into fields and the offset, then
// divides every weight (and gap_reference) by the smallest factor >= 1 that
// brings the model back into the hardware ranges. Returns that factor.
double api_fix(IsingModel& model, const std::map<Qubit, int>& clamps);

// Pins the output bits of N and the structural zeros with the given
// method. The layout is returned too: adhoc swaps border penalties, extra
// chaining adds pins and api fixing records its scale factor.
ProblemInstance apply_problem(const MultiplierLayout& layout, const IsingModel& model, std::uint64_t N,
                              InitMethod method, const ApplyOptions& options = {});

// Values of (m, q, in2, c_in, out, c_out) per tile for the circuit p * q.
using TileValues = std::array<bool, kNumPorts>;
std::vector<std::vector<TileValues>> simulate_circuit(const MultiplierLayout& layout, std::uint64_t p,
                                                      std::uint64_t q);

// Spins of every model qubit for the circuit p * q, ancillas at their tile
// minimum. Pins' neighbour qubits follow their targets.
SpinMap circuit_spins(const MultiplierLayout& layout, const IsingModel& model, std::uint64_t p, std::uint64_t q);

bool is_prime(std::uint64_t v);
// Primes with exactly `bits` bits (top bit set), ascending.
std::vector<std::uint64_t> primes_with_bits(int bits);

// Fixed: the largest n-bit prime times the largest m-bit primes.
// Pairs: every (p, q) of n-bit and m-bit primes, largest products first.
enum class InstanceMode { FixedLargest, AllPairs };

struct FactorInstance {
    std::uint64_t N = 0;
    std::uint64_t p = 0;  // n-bit factor
    std::uint64_t q = 0;  // m-bit factor
};

std::vector<FactorInstance> select_instances(int n, int m, std::size_t count,
                                             InstanceMode mode = InstanceMode::FixedLargest);

nlohmann::json model_file_json(const MultiplierLayout& layout, const IsingModel& model);
// Restores the model part of a model file.
IsingModel model_from_file_json(const nlohmann::json& j);

}  // namespace qfa
