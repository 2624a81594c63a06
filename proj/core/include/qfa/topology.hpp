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

#include <array>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qfa/ising.hpp"

namespace qfa {

struct PegasusCoord {
    int u = 0;  // orientation: 0 vertical, 1 horizontal
    int w = 0;  // perpendicular offset, [0, m)
    int k = 0;  // index within shore, [0, 12)
    int z = 0;  // parallel offset, [0, m-1)

    bool operator==(const PegasusCoord&) const = default;
};

class HardwareGraph {
  public:
    HardwareGraph() = default;
    HardwareGraph(int m, std::size_t num_nodes, std::vector<Edge> edges);

    int size_param() const { return m_; }
    std::size_t num_nodes() const { return adjacency_.size(); }
    std::vector<Qubit> nodes() const;
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<Qubit>& neighbors(Qubit q) const { return adjacency_.at(static_cast<std::size_t>(q)); }
    std::size_t degree(Qubit q) const { return neighbors(q).size(); }
    bool has_node(Qubit q) const { return q >= 0 && static_cast<std::size_t>(q) < adjacency_.size(); }
    bool has_edge(Qubit a, Qubit b) const;

    PegasusCoord coord(Qubit q) const;
    Qubit linear(const PegasusCoord& c) const;

  private:
    int m_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<Qubit>> adjacency_;
};

class InvalidSize : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

HardwareGraph build_pegasus(int m);

nlohmann::json graph_to_json(const HardwareGraph& graph);

// Slot order inside a tile; ports are the first six.
enum TileSlot : int { kSlotM = 0, kSlotQ, kSlotIn2, kSlotCin, kSlotOut, kSlotCout, kSlotA1, kSlotA2 };
inline constexpr int kTileSize = 8;
inline constexpr int kNumPorts = 6;
inline constexpr std::array<const char*, kTileSize> kSlotNames = {"m",   "q",     "in2", "c_in",
                                                                  "out", "c_out", "a1",  "a2"};
int slot_index(const std::string& name);

struct TileAssignment {
    int row = 0;
    int col = 0;
    int variant = 0;  // coupler pattern class: 1 on the bottom row, else 0
    std::array<Qubit, kTileSize> qubits{};
    std::vector<Edge> internal_couplers;
    std::map<std::string, Qubit> ports;

    Qubit at(int slot) const { return qubits[static_cast<std::size_t>(slot)]; }
};

using TileGrid = std::vector<std::vector<TileAssignment>>;  // [row][col]

class CapacityError : public std::runtime_error {
  public:
    CapacityError(const std::string& what, int max_rows, int at_cols, int at_rows, int max_cols)
        : std::runtime_error(what), max_rows_(max_rows), at_cols_(at_cols), at_rows_(at_rows), max_cols_(max_cols) {}
    // Feasible grids max_rows() x at_cols() and at_rows() x max_cols(); the
    // requested width (height) is clipped to the widest (tallest) single row
    // (column) that fits.
    int max_rows() const { return max_rows_; }
    int at_cols() const { return at_cols_; }
    int at_rows() const { return at_rows_; }
    int max_cols() const { return max_cols_; }

  private:
    int max_rows_;
    int at_cols_;
    int at_rows_;
    int max_cols_;
};

/// Places a rows x cols grid of K4,4 tiles. Columns advance along a
/// staircase through the three tile families of a Pegasus cell, rows advance
/// one cell along x. Every tile carries the same CFA slot pattern up to a
/// tile automorphism that alternates with column parity. The grid is centred
/// on the lattice.
TileGrid place_tiles(const HardwareGraph& graph, int rows, int cols);

enum class ViolationKind { MissingQubit, MissingEdge, BiasRange, CouplingRange };

struct Violation {
    ViolationKind kind;
    Qubit a = -1;
    Qubit b = -1;
    double value = 0.0;

    std::string describe() const;
};

std::vector<Violation> validate_model(const HardwareGraph& graph, const IsingModel& model);

}  // namespace qfa
