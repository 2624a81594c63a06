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

#include <random>

#include "qfa/lp.hpp"

using namespace qfa::lp;

namespace {

Problem box(std::size_t n, double lo, double hi) {
    Problem p;
    p.num_vars = n;
    p.objective.assign(n, 0.0);
    p.lower.assign(n, lo);
    p.upper.assign(n, hi);
    return p;
}

}  // namespace

TEST_CASE("lp solves a small bounded problem") {
    // max x + y  s.t.  x + 2y <= 4, 3x + y <= 6, 0 <= x, y <= 10
    Problem p = box(2, 0.0, 10.0);
    p.objective = {1.0, 1.0};
    p.rows.push_back({{1.0, 2.0}, Sense::LessEq, 4.0});
    p.rows.push_back({{3.0, 1.0}, Sense::LessEq, 6.0});
    const auto s = solve(p);
    REQUIRE(s.status == Status::Optimal);
    CHECK(s.objective == doctest::Approx(2.8));
    CHECK(s.x[0] == doctest::Approx(1.6));
    CHECK(s.x[1] == doctest::Approx(1.2));
}

TEST_CASE("lp handles equalities, negative bounds and infeasibility") {
    Problem p = box(2, -5.0, 5.0);
    p.objective = {1.0, -1.0};
    p.rows.push_back({{1.0, 1.0}, Sense::Equal, 1.0});
    auto s = solve(p);
    REQUIRE(s.status == Status::Optimal);
    CHECK(s.objective == doctest::Approx(9.0));  // x = 5, y = -4

    p.rows.push_back({{1.0, 0.0}, Sense::GreaterEq, 6.0});
    CHECK(solve(p).status == Status::Infeasible);
}

TEST_CASE("lp agrees with vertex enumeration on random 2d problems") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int trial = 0; trial < 200; ++trial) {
        Problem p = box(2, -2.0, 2.0);
        p.objective = {u(rng), u(rng)};
        for (int r = 0; r < 3; ++r) p.rows.push_back({{u(rng), u(rng)}, Sense::LessEq, std::abs(u(rng)) + 0.1});
        // Oracle: every pairwise intersection of active lines and bounds.
        std::vector<std::array<double, 3>> lines;  // a x + b y = c
        for (const auto& row : p.rows) lines.push_back({row.coeffs[0], row.coeffs[1], row.rhs});
        lines.push_back({1, 0, 2});
        lines.push_back({1, 0, -2});
        lines.push_back({0, 1, 2});
        lines.push_back({0, 1, -2});
        double best = -1e300;
        for (std::size_t i = 0; i < lines.size(); ++i)
            for (std::size_t j = i + 1; j < lines.size(); ++j) {
                const auto& a = lines[i];
                const auto& b = lines[j];
                const double det = a[0] * b[1] - a[1] * b[0];
                if (std::abs(det) < 1e-12) continue;
                const double x = (a[2] * b[1] - a[1] * b[2]) / det;
                const double y = (a[0] * b[2] - a[2] * b[0]) / det;
                bool feasible = x >= -2 - 1e-9 && x <= 2 + 1e-9 && y >= -2 - 1e-9 && y <= 2 + 1e-9;
                for (const auto& row : p.rows) feasible = feasible && row.coeffs[0] * x + row.coeffs[1] * y <= row.rhs + 1e-9;
                if (feasible) best = std::max(best, p.objective[0] * x + p.objective[1] * y);
            }
        const auto s = solve(p);
        REQUIRE(s.status == Status::Optimal);
        CHECK(s.objective == doctest::Approx(best).epsilon(1e-7));
    }
}

TEST_CASE("tightening an inequality to an equality") {
    Problem p = box(2, 0.0, 10.0);
    p.objective = {1.0, 1.0};
    p.rows.push_back({{1.0, 0.0}, Sense::LessEq, 3.0});
    p.rows.push_back({{0.0, 1.0}, Sense::GreaterEq, 1.0});
    TighteningLp lp(p);
    CHECK(lp.solve().objective == doctest::Approx(13.0));
    lp.make_equal(1);
    const auto s = lp.solve();
    CHECK(s.objective == doctest::Approx(4.0));
    CHECK(s.x[1] == doctest::Approx(1.0));
    CHECK_THROWS(lp.make_equal(1));
}

TEST_CASE("cutoff stops once the bound is reached") {
    Problem p = box(1, 0.0, 10.0);
    p.objective = {1.0};
    TighteningLp lp(p);
    TighteningLp copy = lp;
    const auto s = lp.solve(20.0);
    CHECK(s.status == Status::Cutoff);
    CHECK(s.objective <= 20.0);
    const auto full = copy.solve(5.0);
    REQUIRE(full.status == Status::Optimal);
    CHECK(full.objective == doctest::Approx(10.0));
}
