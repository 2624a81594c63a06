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

#include "support.hpp"

#include <map>
#include <tuple>

namespace qfa::testing {

const HardwareGraph& pegasus16() {
    static const HardwareGraph g = build_pegasus(16);
    return g;
}

const CfaLibrary& shared_library() {
    static const CfaLibrary lib = build_specialized_library(pegasus16());
    return lib;
}

const BuiltMultiplier& multiplier(int n, int m, double chain_strength) {
    static std::map<std::tuple<int, int, double>, BuiltMultiplier> cache;
    auto key = std::make_tuple(n, m, chain_strength);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, build_multiplier(n, m, pegasus16(), shared_library(), chain_strength)).first;
    return it->second;
}

double brute_min_over_ancillas(const PenaltyFunction& pf, const SpinMap& fixed) {
    const auto anc = pf.ancilla_qubits();
    double best = 1e300;
    for (std::uint32_t mask = 0; mask < (1U << anc.size()); ++mask) {
        SpinMap s = fixed;
        for (std::size_t k = 0; k < anc.size(); ++k) s[anc[k]] = (mask >> k) & 1U ? 1 : -1;
        double e = pf.offset;
        for (const auto& [q, h] : pf.biases) e += h * s.at(q);
        for (const auto& [edge, j] : pf.couplings) e += j * s.at(edge.first) * s.at(edge.second);
        best = std::min(best, e);
    }
    return best;
}

std::vector<Biprime> biprimes(int n, int m) {
    std::vector<Biprime> out;
    for (std::uint64_t p = 3; p < (std::uint64_t{1} << n); p += 2)
        for (std::uint64_t q = 3; q < (std::uint64_t{1} << m); q += 2)
            if (is_prime(p) && is_prime(q)) out.push_back({p * q, p, q});
    return out;
}

SpinMap random_spins(const std::vector<Qubit>& qubits, std::mt19937_64& rng) {
    SpinMap s;
    for (Qubit q : qubits) s[q] = (rng() & 1U) ? 1 : -1;
    return s;
}

}  // namespace qfa::testing
