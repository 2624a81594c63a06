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

#include "qfa/boolean_spec.hpp"

using namespace qfa;

namespace {

// Independent full-adder oracle over (m, q, in2, c_in, out, c_out).
bool adder_row(std::uint32_t a) {
    const int m = a & 1U, q = (a >> 1) & 1U, in2 = (a >> 2) & 1U, cin = (a >> 3) & 1U;
    const int out = (a >> 4) & 1U, cout = (a >> 5) & 1U;
    const int sum = (m & q) + in2 + cin;
    return out == (sum & 1) && cout == (sum >> 1);
}

}  // namespace

TEST_CASE("cfa truth table") {
    const auto spec = cfa_spec();
    REQUIRE(spec.variables == std::vector<std::string>{"m", "q", "in2", "c_in", "out", "c_out"});
    std::size_t sat = 0;
    for (std::uint32_t a = 0; a < 64; ++a) {
        CHECK(spec.holds(a) == adder_row(a));
        sat += spec.holds(a) ? 1 : 0;
    }
    CHECK(sat == 16);
    CHECK(spec.count_satisfying() == 16);
}

TEST_CASE("cfa rows with m false reduce to a half adder") {
    const auto spec = cfa_spec();
    for (std::uint32_t a = 0; a < 64; a += 2) {
        const bool in2 = (a >> 2) & 1U, cin = (a >> 3) & 1U, out = (a >> 4) & 1U, cout = (a >> 5) & 1U;
        CHECK(spec.holds(a) == (out == (in2 != cin) && cout == (in2 && cin)));
    }
    // all inputs true: 1 + 1 + 1 = 11b
    for (std::uint32_t outs = 0; outs < 4; ++outs) CHECK(spec.holds(0b1111U | (outs << 4)) == (outs == 3));
}

TEST_CASE("specialize") {
    const auto spec = cfa_spec();
    const auto s = specialize(spec, {{"c_in", false}});
    CHECK(s.free_variables().size() == 5);
    CHECK(s.count_satisfying() == 8);
    CHECK(s.fixed_value("c_in") == std::optional<bool>(false));
    for (std::uint32_t mask = 0; mask < 32; ++mask) {
        const auto a = s.expand(mask);
        CHECK(((a >> 3) & 1U) == 0);
        CHECK(s.holds(a) == adder_row(a));
    }
    const auto same = specialize(spec, {});
    CHECK(same.truth == spec.truth);
    CHECK(same.free_variables() == spec.free_variables());
    CHECK_THROWS_AS(specialize(spec, {{"out", true}, {"out", false}}), EmptySpec);
    CHECK_THROWS_AS(specialize(spec, {{"nope", true}}), std::invalid_argument);
}

TEST_CASE("small specs") {
    const auto eq = equivalence_spec();
    CHECK(eq.count_satisfying() == 2);
    const auto lit = literal_spec();
    CHECK(lit.count_satisfying() == 1);
    CHECK(lit.holds(1));
    CHECK_FALSE(lit.holds(0));
    CHECK(fixing_key({}) == "-");
}
