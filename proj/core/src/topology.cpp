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

#include "qfa/topology.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <tuple>

namespace qfa {
namespace {

// Internal-coupler offsets of the Pegasus shores.
constexpr std::array<int, 12> kVerticalOffsets = {2, 2, 2, 2, 10, 10, 10, 10, 6, 6, 6, 6};
constexpr std::array<int, 12> kHorizontalOffsets = {6, 6, 6, 6, 2, 2, 2, 2, 10, 10, 10, 10};

// Slot -> tile-local qubit (V0..V3 = 0..3, H0..H3 = 4..7) for even and odd
// columns. Both are images of one CFA placement under tile automorphisms.
constexpr std::array<int, kTileSize> kEvenColumnSlots = {5, 4, 0, 1, 2, 6, 7, 3};
constexpr std::array<int, kTileSize> kOddColumnSlots = {2, 3, 5, 4, 6, 1, 0, 7};

struct Block {
    int x = 0;
    int y = 0;
};

// Block coordinates of the three K4,4 families in a cell (cx, cy):
//   A at (3cx,   3cy+2), B at (3cx+1, 3cy+4), C at (3cx+2, 3cy+3).
bool tile_qubits(const HardwareGraph& g, Block b, std::array<Qubit, kTileSize>& out) {
    const int m = g.size_param();
    auto fill = [&](int vw, int vk, int vz, int hw, int hk, int hz) {
        if (vw < 0 || vw >= m || vz < 0 || vz >= m - 1 || hw < 0 || hw >= m || hz < 0 || hz >= m - 1)
            return false;
        for (int k = 0; k < 4; ++k) {
            out[static_cast<std::size_t>(k)] = g.linear({0, vw, vk + k, vz});
            out[static_cast<std::size_t>(4 + k)] = g.linear({1, hw, hk + k, hz});
        }
        return true;
    };
    const int rx = ((b.x % 3) + 3) % 3, ry = ((b.y % 3) + 3) % 3;
    const int cx = (b.x - rx) / 3;
    if (rx == 0 && ry == 2) {
        const int cy = (b.y - 2) / 3;
        return fill(cx, 0, cy, cy, 8, cx - 1);
    }
    if (rx == 1 && ry == 1) {
        const int cy = (b.y - 4) / 3;
        if (b.y < 4) return false;
        return fill(cx, 4, cy, cy + 1, 4, cx);
    }
    if (rx == 2 && ry == 0) {
        const int cy = (b.y - 3) / 3;
        if (b.y < 3) return false;
        return fill(cx, 8, cy, cy + 1, 0, cx);
    }
    return false;
}

Block relative_block(int row, int col) {
    const int even_steps = (col + 1) / 2, odd_steps = col / 2;
    return {even_steps + 3 * row, -even_steps - 3 * odd_steps};
}

class BlockIndex {
  public:
    explicit BlockIndex(const HardwareGraph& g) : span_(3 * g.size_param() + 3) {
        valid_.assign(static_cast<std::size_t>(span_ * span_), 0);
        std::array<Qubit, kTileSize> tmp{};
        for (int x = 0; x < span_; ++x)
            for (int y = 0; y < span_; ++y)
                if (tile_qubits(g, {x, y}, tmp)) {
                    valid_[static_cast<std::size_t>(x * span_ + y)] = 1;
                    lo_x_ = std::min(lo_x_, x);
                    hi_x_ = std::max(hi_x_, x);
                    lo_y_ = std::min(lo_y_, y);
                    hi_y_ = std::max(hi_y_, y);
                }
    }

    bool valid(int x, int y) const {
        return x >= 0 && y >= 0 && x < span_ && y < span_ && valid_[static_cast<std::size_t>(x * span_ + y)];
    }

    // Base block for the grid, or false if nothing fits.
    bool find_base(int rows, int cols, Block& base) const {
        if (rows <= 0 || cols <= 0 || hi_x_ < lo_x_) return false;
        int min_x = 0, max_x = 0, min_y = 0, max_y = 0;
        for (int r = 0; r < rows; r += std::max(1, rows - 1))
            for (int c = 0; c < cols; ++c) {
                const Block b = relative_block(r, c);
                min_x = std::min(min_x, b.x);
                max_x = std::max(max_x, b.x);
                min_y = std::min(min_y, b.y);
                max_y = std::max(max_y, b.y);
            }
        if (max_x - min_x > hi_x_ - lo_x_ || max_y - min_y > hi_y_ - lo_y_) return false;
        // Centre of the grid on the centre of the lattice, then the nearest
        // feasible base (ties broken lexicographically).
        const double cx = (lo_x_ + hi_x_) / 2.0 - (min_x + max_x) / 2.0;
        const double cy = (lo_y_ + hi_y_) / 2.0 - (min_y + max_y) / 2.0;
        std::vector<std::tuple<double, int, int>> cands;
        for (int bx = -min_x; bx + max_x < span_; ++bx)
            for (int by = -min_y; by + max_y < span_; ++by)
                cands.emplace_back((bx - cx) * (bx - cx) + (by - cy) * (by - cy), bx, by);
        std::sort(cands.begin(), cands.end());
        for (const auto& [d, bx, by] : cands) {
            bool ok = true;
            for (int r = 0; r < rows && ok; ++r)
                for (int c = 0; c < cols && ok; ++c) {
                    const Block b = relative_block(r, c);
                    ok = valid(bx + b.x, by + b.y);
                }
            if (ok) {
                base = {bx, by};
                return true;
            }
        }
        return false;
    }

  private:
    int span_;
    std::vector<char> valid_;
    int lo_x_ = 1 << 30, hi_x_ = -1, lo_y_ = 1 << 30, hi_y_ = -1;
};

}  // namespace

HardwareGraph::HardwareGraph(int m, std::size_t num_nodes, std::vector<Edge> edges) : m_(m) {
    adjacency_.resize(num_nodes);
    for (auto& e : edges) {
        if (e.first == e.second) throw std::invalid_argument("self-loop in hardware graph");
        e = make_edge(e.first, e.second);
        if (!has_node(e.first) || !has_node(e.second)) throw std::invalid_argument("edge endpoint out of range");
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    edges_ = std::move(edges);
    for (const auto& [a, b] : edges_) {
        adjacency_[static_cast<std::size_t>(a)].push_back(b);
        adjacency_[static_cast<std::size_t>(b)].push_back(a);
    }
    for (auto& nb : adjacency_) std::sort(nb.begin(), nb.end());
}

std::vector<Qubit> HardwareGraph::nodes() const {
    std::vector<Qubit> out(num_nodes());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<Qubit>(i);
    return out;
}

bool HardwareGraph::has_edge(Qubit a, Qubit b) const {
    if (!has_node(a) || !has_node(b)) return false;
    const auto& nb = neighbors(a);
    return std::binary_search(nb.begin(), nb.end(), b);
}

PegasusCoord HardwareGraph::coord(Qubit q) const {
    if (!has_node(q)) throw std::out_of_range("qubit not in graph: " + std::to_string(q));
    const int m1 = m_ - 1;
    PegasusCoord c;
    c.z = q % m1;
    q /= m1;
    c.k = q % 12;
    q /= 12;
    c.w = q % m_;
    c.u = q / m_;
    return c;
}

Qubit HardwareGraph::linear(const PegasusCoord& c) const {
    if (c.u < 0 || c.u > 1 || c.w < 0 || c.w >= m_ || c.k < 0 || c.k >= 12 || c.z < 0 || c.z >= m_ - 1)
        throw std::out_of_range("pegasus coordinate out of range");
    return ((c.u * m_ + c.w) * 12 + c.k) * (m_ - 1) + c.z;
}

HardwareGraph build_pegasus(int m) {
    if (m < 2) throw InvalidSize("pegasus size parameter must be >= 2, got " + std::to_string(m));
    const int m1 = m - 1;
    auto lin = [&](int u, int w, int k, int z) { return ((u * m + w) * 12 + k) * m1 + z; };
    std::vector<Edge> edges;
    for (int u = 0; u < 2; ++u)
        for (int w = 0; w < m; ++w)
            for (int k = 0; k < 12; ++k)
                for (int z = 0; z < m1; ++z) {
                    if (z + 1 < m1) edges.emplace_back(lin(u, w, k, z), lin(u, w, k, z + 1));
                    if (k % 2 == 0) edges.emplace_back(lin(u, w, k, z), lin(u, w, k + 1, z));
                }
    for (int w = 0; w < m; ++w)
        for (int k = 0; k < 12; ++k)
            for (int z = 0; z < m1; ++z)
                for (int kk = 0; kk < 12; ++kk) {
                    const int w2 = z + (kk < kVerticalOffsets[static_cast<std::size_t>(k)] ? 1 : 0);
                    const int z2 = w - (k < kHorizontalOffsets[static_cast<std::size_t>(kk)] ? 1 : 0);
                    if (w2 >= 0 && w2 < m && z2 >= 0 && z2 < m1) edges.emplace_back(lin(0, w, k, z), lin(1, w2, kk, z2));
                }
    return HardwareGraph(m, static_cast<std::size_t>(24 * m * m1), std::move(edges));
}

nlohmann::json graph_to_json(const HardwareGraph& graph) {
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& [a, b] : graph.edges()) edges.push_back({a, b});
    return {{"m", graph.size_param()}, {"nodes", graph.nodes()}, {"edges", edges}};
}

int slot_index(const std::string& name) {
    for (int s = 0; s < kTileSize; ++s)
        if (name == kSlotNames[static_cast<std::size_t>(s)]) return s;
    return -1;
}

TileGrid place_tiles(const HardwareGraph& graph, int rows, int cols) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("tile grid must be at least 1x1");
    const BlockIndex index(graph);
    Block base;
    if (!index.find_base(rows, cols, base)) {
        Block tmp;
        auto largest = [&](auto fits) {
            int k = 0;
            while (fits(k + 1)) ++k;
            return k;
        };
        const int widest = largest([&](int c) { return index.find_base(1, c, tmp); });
        const int tallest = largest([&](int r) { return index.find_base(r, 1, tmp); });
        const int at_cols = std::min(cols, widest), at_rows = std::min(rows, tallest);
        const int max_rows = largest([&](int r) { return index.find_base(r, at_cols, tmp); });
        const int max_cols = largest([&](int c) { return index.find_base(at_rows, c, tmp); });
        std::ostringstream msg;
        msg << "a " << rows << "x" << cols << " tile grid does not fit P" << graph.size_param()
            << "; largest feasible is " << max_rows << "x" << at_cols << " or " << at_rows << "x" << max_cols;
        throw CapacityError(msg.str(), max_rows, at_cols, at_rows, max_cols);
    }

    TileGrid grid(static_cast<std::size_t>(rows));
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const Block rel = relative_block(r, c);
            std::array<Qubit, kTileSize> local{};
            tile_qubits(graph, {base.x + rel.x, base.y + rel.y}, local);
            auto slots = (c % 2 == 0) ? kEvenColumnSlots : kOddColumnSlots;
            TileAssignment t;
            t.row = r;
            t.col = c;
            // The bottom row uses the second coupler pattern, with c_in and out
            // trading places; its specialized penalties reach larger gaps.
            if (r == rows - 1) {
                std::swap(slots[kSlotCin], slots[kSlotOut]);
                t.variant = 1;
            }
            for (int s = 0; s < kTileSize; ++s)
                t.qubits[static_cast<std::size_t>(s)] = local[static_cast<std::size_t>(slots[static_cast<std::size_t>(s)])];
            for (int a = 0; a < kTileSize; ++a)
                for (int b = a + 1; b < kTileSize; ++b)
                    if (graph.has_edge(t.at(a), t.at(b))) t.internal_couplers.push_back(make_edge(t.at(a), t.at(b)));
            std::sort(t.internal_couplers.begin(), t.internal_couplers.end());
            for (int s = 0; s < kNumPorts; ++s) t.ports[kSlotNames[static_cast<std::size_t>(s)]] = t.at(s);
            grid[static_cast<std::size_t>(r)].push_back(std::move(t));
        }
    }
    return grid;
}

std::string Violation::describe() const {
    std::ostringstream os;
    switch (kind) {
        case ViolationKind::MissingQubit: os << "qubit " << a << " is not in the graph"; break;
        case ViolationKind::MissingEdge: os << "no coupler between " << a << " and " << b; break;
        case ViolationKind::BiasRange: os << "bias " << value << " on qubit " << a << " outside [-4, 4]"; break;
        case ViolationKind::CouplingRange:
            os << "coupling " << value << " on (" << a << "," << b << ") outside [-2, 1]";
            break;
    }
    return os.str();
}

std::vector<Violation> validate_model(const HardwareGraph& graph, const IsingModel& model) {
    constexpr double kTol = 1e-9;
    std::vector<Violation> out;
    for (Qubit q : model.qubits())
        if (!graph.has_node(q)) out.push_back({ViolationKind::MissingQubit, q, -1, 0.0});
    for (const auto& [q, h] : model.biases)
        if (h < kBiasMin - kTol || h > kBiasMax + kTol) out.push_back({ViolationKind::BiasRange, q, -1, h});
    for (const auto& [e, j] : model.couplings) {
        if (!graph.has_edge(e.first, e.second)) out.push_back({ViolationKind::MissingEdge, e.first, e.second, j});
        if (j < kCouplingMin - kTol || j > kCouplingMax + kTol)
            out.push_back({ViolationKind::CouplingRange, e.first, e.second, j});
    }
    return out;
}

}  // namespace qfa
