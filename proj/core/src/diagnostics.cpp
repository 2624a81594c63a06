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

#include "qfa/diagnostics.hpp"

#include <cmath>
#include <sstream>

#include "qfa/boolean_spec.hpp"

namespace qfa {

SpinMap effective_spins(const IsingModel& model, const SpinMap& sample) {
    SpinMap s = sample;
    for (const auto& [q, v] : model.clamped) s[q] = v;
    for (const auto& [q, v] : model.flux_biases) s[q] = v > 0 ? 1 : -1;
    return s;
}

double problem_energy(const IsingModel& model, const SpinMap& sample) {
    return evaluate_energy(model, effective_spins(model, sample));
}

double tile_penalty(const TileInstance& tile, const SpinMap& spins) { return tile.penalty.energy(spins); }

namespace {

bool tile_consistent(const TileInstance& t, const SpinMap& spins) {
    static const BooleanSpec cfa = cfa_spec();
    std::uint32_t assignment = 0;
    for (int s = 0; s < kNumPorts; ++s) {
        const std::string name = kSlotNames[static_cast<std::size_t>(s)];
        bool value = false;
        bool fixed = false;
        for (const auto& [n, v] : t.penalty.fixing)
            if (n == name) {
                value = v;
                fixed = true;
            }
        if (!fixed) value = spins.at(t.tile.at(s)) > 0;
        if (value) assignment |= 1U << static_cast<unsigned>(s);
    }
    return cfa.truth[assignment] != 0;
}

}  // namespace

FactorCandidate decode(const MultiplierLayout& layout, const IsingModel& model, const SpinMap& sample) {
    const SpinMap spins = effective_spins(model, sample);
    FactorCandidate c;
    for (int j = 0; j < layout.n; ++j)
        if (spins.at(layout.role_map.at("m_" + std::to_string(j))) > 0) c.p |= std::uint64_t{1} << j;
    for (int i = 0; i < layout.m; ++i)
        if (spins.at(layout.role_map.at("q_" + std::to_string(i))) > 0) c.q |= std::uint64_t{1} << i;
    c.energy = evaluate_energy(model, spins);
    c.circuit_consistent = true;
    for (const auto& row : layout.tiles) {
        for (const auto& t : row) {
            c.circuit_consistent = c.circuit_consistent && tile_consistent(t, spins);
            const double local = tile_penalty(t, spins);
            if (local > kResidualTolerance && local < t.penalty.gap - kGapSlack) c.ancilla_slack = true;
        }
    }
    return c;
}

std::size_t ExcitationReport::reads_without_broken_chain() const {
    std::size_t n = 0;
    for (const auto& f : flags) n += f.broken_chain ? 0 : f.occurrences;
    return n;
}

std::size_t ExcitationReport::reads_without_excited_cfa() const {
    std::size_t n = 0;
    for (const auto& f : flags) n += f.excited_cfa ? 0 : f.occurrences;
    return n;
}

std::size_t ExcitationReport::zero_energy_reads() const {
    std::size_t n = 0;
    for (const auto& f : flags) n += f.zero_energy ? f.occurrences : 0;
    return n;
}

std::pair<std::pair<int, int>, std::size_t> ExcitationReport::most_excited() const {
    std::pair<std::pair<int, int>, std::size_t> best{{-1, -1}, 0};
    for (const auto& [key, count] : per_cfa)  // ascending (col, row)
        if (best.first.first < 0 || count > best.second) best = {key, count};
    return best;
}

ExcitationReport excitation_stats(const MultiplierLayout& layout, const IsingModel& model, const SampleSet& set) {
    ExcitationReport r;
    r.per_chain.assign(layout.chains.size(), 0);
    for (int i = 0; i < layout.m; ++i)
        for (int j = 0; j < layout.n; ++j) {
            r.per_cfa[{j, i}] = 0;
            r.per_cfa_slack[{j, i}] = 0;
            r.per_chain_tile[{j, i}] = 0;
        }
    for (const auto& sample : set.samples) {
        SpinMap spins = set.spin_map(sample);
        for (const auto& [q, v] : model.clamped) spins[q] = v;
        SampleFlags f;
        f.occurrences = sample.occurrences;
        r.num_reads += sample.occurrences;
        std::map<std::pair<int, int>, bool> chain_tile;
        for (std::size_t k = 0; k < layout.chains.size(); ++k) {
            const Chain& c = layout.chains[k];
            if (spins.at(c.a) != spins.at(c.b)) {
                f.broken_chain = true;
                r.per_chain[k] += sample.occurrences;
                chain_tile[{c.col, c.row}] = true;
            }
        }
        for (const auto& [key, _] : chain_tile) r.per_chain_tile[key] += sample.occurrences;
        for (const auto& p : layout.pins)
            if (spins.at(p.qubit) != p.target) f.broken_chain = true;
        for (const auto& row : layout.tiles) {
            for (const auto& t : row) {
                const double local = tile_penalty(t, spins);
                const std::pair<int, int> key{t.tile.col, t.tile.row};
                if (local >= t.penalty.gap - kGapSlack) {
                    f.excited_cfa = true;
                    r.per_cfa[key] += sample.occurrences;
                } else if (local > kResidualTolerance) {
                    f.slack_tile = true;
                    r.per_cfa_slack[key] += sample.occurrences;
                }
            }
        }
        f.zero_energy = std::abs(problem_energy(model, set.spin_map(sample))) <= kZeroEnergy;
        r.flags.push_back(f);
    }
    return r;
}

std::string excitation_csv(const ExcitationReport& report) {
    std::ostringstream os;
    os << "kind,col,row,count\n";
    for (const auto& [key, count] : report.per_chain_tile) os << "chain," << key.first << ',' << key.second << ',' << count << '\n';
    for (const auto& [key, count] : report.per_cfa) os << "cfa," << key.first << ',' << key.second << ',' << count << '\n';
    return os.str();
}

EnergyParts energy_parts(const MultiplierLayout& layout, const SpinMap& spins) {
    EnergyParts e;
    for (const auto& row : layout.tiles)
        for (const auto& t : row) e.tiles += tile_penalty(t, spins);
    for (const auto& c : layout.chains) e.chains += c.strength - c.strength * spins.at(c.a) * spins.at(c.b);
    for (const auto& p : layout.pins) e.pins += p.strength - p.strength * p.target * spins.at(p.qubit);
    return e;
}

}  // namespace qfa
