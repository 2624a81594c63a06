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
#include <random>
#include <vector>

#include "qfa/diagnostics.hpp"
#include "qfa/multiplier.hpp"
#include "qfa/penalty.hpp"
#include "qfa/remedy.hpp"
#include "qfa/sampler.hpp"
#include "qfa/topology.hpp"

namespace qfa::testing {

// Built once per process.
const HardwareGraph& pegasus16();
const CfaLibrary& shared_library();
const BuiltMultiplier& multiplier(int n, int m, double chain_strength = 2.0);

// Independent brute force: min over ancilla spins of the penalty, with the
// non-ancilla qubits set from `assignment` over the placement's variables.
double brute_min_over_ancillas(const PenaltyFunction& pf, const SpinMap& fixed);

// Biprimes p * q with p, q odd primes of at most n and m bits.
struct Biprime {
    std::uint64_t N, p, q;
};
std::vector<Biprime> biprimes(int n, int m);

SpinMap random_spins(const std::vector<Qubit>& qubits, std::mt19937_64& rng);

}  // namespace qfa::testing
