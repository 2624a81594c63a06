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

#include <doctest.h>

#include <set>

#include "support.hpp"

using namespace qfa;

TEST_CASE("pegasus node count follows 24 m (m - 1)") {
    for (int m = 2; m <= 16; ++m) CHECK(build_pegasus(m).num_nodes() == static_cast<std::size_t>(24 * m * (m - 1)));
    CHECK(testing::pegasus16().num_nodes() == 5760);
    CHECK_THROWS_AS(build_pegasus(1), InvalidSize);
}

TEST_CASE("pegasus m=2 matches coordinate enumeration") {
    const auto g = build_pegasus(2);
    std::size_t count = 0;
    for (int u = 0; u < 2; ++u)
        for (int w = 0; w < 2; ++w)
            for (int k = 0; k < 12; ++k)
                for (int z = 0; z < 1; ++z) {
                    const Qubit q = g.linear({u, w, k, z});
                    CHECK(g.has_node(q));
                    CHECK(g.coord(q) == PegasusCoord{u, w, k, z});
                    ++count;
                }
    CHECK(count == g.num_nodes());
}

TEST_CASE("pegasus graph is simple with degree at most 15") {
    const auto& g = testing::pegasus16();
    std::set<Edge> seen;
    for (const auto& e : g.edges()) {
        CHECK(e.first < e.second);
        CHECK(seen.insert(e).second);
        CHECK(g.has_edge(e.first, e.second));
        CHECK(g.has_edge(e.second, e.first));
    }
    std::size_t max_degree = 0;
    for (Qubit q : g.nodes()) max_degree = std::max(max_degree, g.degree(q));
    CHECK(max_degree == 15);
}

TEST_CASE("graph json lists every node and edge") {
    const auto g = build_pegasus(3);
    const auto j = graph_to_json(g);
    CHECK(j.at("m") == 3);
    CHECK(j.at("nodes").size() == g.num_nodes());
    CHECK(j.at("edges").size() == g.edges().size());
}

namespace {

void check_grid(const HardwareGraph& g, const TileGrid& grid, int rows, int cols) {
    REQUIRE(grid.size() == static_cast<std::size_t>(rows));
    std::set<Qubit> used;
    for (int r = 0; r < rows; ++r) {
        REQUIRE(grid[static_cast<std::size_t>(r)].size() == static_cast<std::size_t>(cols));
        for (int c = 0; c < cols; ++c) {
            const auto& t = grid[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
            CHECK(t.row == r);
            CHECK(t.col == c);
            for (Qubit q : t.qubits) {
                CHECK(g.has_node(q));
                CHECK(used.insert(q).second);
            }
            for (const auto& e : t.internal_couplers) CHECK(g.has_edge(e.first, e.second));
        }
    }
    auto linked = [&](const TileAssignment& a, const TileAssignment& b) {
        for (Qubit x : a.qubits)
            for (Qubit y : b.qubits)
                if (g.has_edge(x, y)) return true;
        return false;
    };
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            const auto& t = grid[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
            if (c + 1 < cols) CHECK(linked(t, grid[static_cast<std::size_t>(r)][static_cast<std::size_t>(c + 1)]));
            if (r + 1 < rows) CHECK(linked(t, grid[static_cast<std::size_t>(r + 1)][static_cast<std::size_t>(c)]));
        }
}

}  // namespace

TEST_CASE("single tile placement") {
    const auto& g = testing::pegasus16();
    const auto grid = place_tiles(g, 1, 1);
    check_grid(g, grid, 1, 1);
    const auto& t = grid[0][0];
    CHECK(std::set<Qubit>(t.qubits.begin(), t.qubits.end()).size() == 8);
    CHECK_FALSE(t.internal_couplers.empty());
}

TEST_CASE("12 x 21 grid fits and is deterministic") {
    const auto& g = testing::pegasus16();
    const auto a = place_tiles(g, 12, 21);
    check_grid(g, a, 12, 21);
    const auto b = place_tiles(g, 12, 21);
    for (int r = 0; r < 12; ++r)
        for (int c = 0; c < 21; ++c)
            CHECK(a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)].qubits ==
                  b[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)].qubits);
}

TEST_CASE("oversized grid reports the largest feasible grid") {
    const auto& g = testing::pegasus16();
    try {
        (void)place_tiles(g, 100, 100);
        FAIL("expected a capacity error");
    } catch (const CapacityError& e) {
        MESSAGE(std::string(e.what()));
        CHECK(e.max_rows() >= 1);
        CHECK(e.max_cols() >= 1);
        CHECK_NOTHROW(place_tiles(g, e.max_rows(), e.at_cols()));
        CHECK_NOTHROW(place_tiles(g, e.at_rows(), e.max_cols()));
        CHECK_THROWS_AS(place_tiles(g, e.max_rows() + 1, e.at_cols()), CapacityError);
        CHECK_THROWS_AS(place_tiles(g, e.at_rows(), e.max_cols() + 1), CapacityError);
    }
}

TEST_CASE("validate_model reports each violation kind") {
    const auto& g = testing::pegasus16();
    const auto t = place_tiles(g, 1, 1)[0][0];
    IsingModel ok;
    for (Qubit q : t.qubits) ok.add_bias(q, 1.0);
    for (const auto& e : t.internal_couplers) ok.add_coupling(e.first, e.second, -1.0);
    CHECK(validate_model(g, ok).empty());

    IsingModel strong = ok;
    strong.couplings[t.internal_couplers.front()] = -2.5;
    const auto v = validate_model(g, strong);
    REQUIRE(v.size() == 1);
    CHECK(v[0].kind == ViolationKind::CouplingRange);
    CHECK(v[0].value == doctest::Approx(-2.5));

    IsingModel far;
    Qubit a = t.qubits[0], b = -1;
    for (Qubit q : g.nodes())
        if (q != a && !g.has_edge(a, q)) {
            b = q;
            break;
        }
    far.add_coupling(a, b, 0.5);
    const auto w = validate_model(g, far);
    REQUIRE(w.size() == 1);
    CHECK(w[0].kind == ViolationKind::MissingEdge);

    IsingModel bad;
    bad.add_bias(999999, 1.0);
    bad.add_bias(t.qubits[1], 4.5);
    const auto x = validate_model(g, bad);
    CHECK(x.size() == 2);
}

TEST_CASE("models built on the graph validate") {
    const auto& b = testing::multiplier(3, 3);
    CHECK(validate_model(testing::pegasus16(), b.model).empty());
}
