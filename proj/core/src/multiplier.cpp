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

#include "qfa/multiplier.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <sstream>

namespace qfa {

std::vector<int> binary_spins(std::uint64_t value, int width) {
    if (width < 0 || width > 63) throw std::invalid_argument("width must be in [0, 63]");
    if (value >> width) throw OverflowError(std::to_string(value) + " needs more than " + std::to_string(width) + " bits");
    std::vector<int> out(static_cast<std::size_t>(width));
    for (int k = 0; k < width; ++k) out[static_cast<std::size_t>(k)] = ((value >> k) & 1U) ? 1 : -1;
    return out;
}

std::string spins_msb_first(const std::vector<int>& spins) {
    std::string s;
    for (auto it = spins.rbegin(); it != spins.rend(); ++it) s += *it > 0 ? '1' : '0';
    return s;
}

std::string tile_role(int row, int col, const std::string& variable) {
    return "t" + std::to_string(row) + "_" + std::to_string(col) + "." + variable;
}

namespace {

struct Link {
    std::string role;
    Qubit from;
    Qubit to;
    int row;
    int col;
};

// Breadth-first shortest path avoiding `used`, neighbours in ascending id.
std::vector<Qubit> route(const HardwareGraph& graph, Qubit from, Qubit to, const std::set<Qubit>& used) {
    if (graph.has_edge(from, to)) return {from, to};
    std::map<Qubit, Qubit> prev{{from, -1}};
    std::deque<Qubit> queue{from};
    bool found = false;
    while (!queue.empty() && !found) {
        const Qubit x = queue.front();
        queue.pop_front();
        for (Qubit y : graph.neighbors(x)) {
            if (y == to) {
                prev[y] = x;
                found = true;
                break;
            }
            if (used.count(y) || prev.count(y)) continue;
            prev[y] = x;
            queue.push_back(y);
        }
    }
    if (!found) return {};
    std::vector<Qubit> path{to};
    while (prev.at(path.back()) != -1) path.push_back(prev.at(path.back()));
    std::reverse(path.begin(), path.end());
    return path;
}

}  // namespace

BuiltMultiplier build_multiplier(int n, int m, const HardwareGraph& graph, const CfaLibrary& library,
                                 double chain_strength) {
    if (n < 1 || m < 1) throw std::invalid_argument("multiplier widths must be positive");
    if (n + m > 63) throw std::invalid_argument("multiplier too wide for 64-bit products");
    if (!(chain_strength > 0.0 && chain_strength <= 2.0))
        throw std::invalid_argument("chain strength must lie in (0, 2]");
    const TileGrid grid = place_tiles(graph, m, n);

    BuiltMultiplier out;
    MultiplierLayout& L = out.layout;
    L.n = n;
    L.m = m;
    L.chain_strength = chain_strength;
    L.tiles.resize(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) {
            const TileAssignment& t = grid[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            TileInstance inst{t, library.transplant(library.base(t.variant), t.variant, t)};
            for (int s = 0; s < kTileSize; ++s) L.role_map[tile_role(i, j, kSlotNames[static_cast<std::size_t>(s)])] = t.at(s);
            L.tiles[static_cast<std::size_t>(i)].push_back(std::move(inst));
        }
    }
    for (int j = 0; j < n; ++j) L.role_map["m_" + std::to_string(j)] = L.tile(0, j).tile.at(kSlotM);
    for (int i = 0; i < m; ++i) L.role_map["q_" + std::to_string(i)] = L.tile(i, 0).tile.at(kSlotQ);
    for (int i = 0; i < m; ++i) L.role_map["o_" + std::to_string(i)] = L.tile(i, 0).tile.at(kSlotOut);
    for (int j = 1; j < n; ++j) L.role_map["o_" + std::to_string(m - 1 + j)] = L.tile(m - 1, j).tile.at(kSlotOut);
    L.role_map["o_" + std::to_string(n + m - 1)] = L.tile(m - 1, n - 1).tile.at(kSlotCout);

    auto at = [&](int i, int j, int slot) { return L.tile(i, j).tile.at(slot); };
    std::vector<Link> links;
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i + 1 < m) links.push_back({"m_" + std::to_string(j), at(i, j, kSlotM), at(i + 1, j, kSlotM), i + 1, j});
            if (j + 1 < n) links.push_back({"q_" + std::to_string(i), at(i, j, kSlotQ), at(i, j + 1, kSlotQ), i, j + 1});
            if (j > 0) links.push_back({"carry", at(i, j - 1, kSlotCout), at(i, j, kSlotCin), i, j});
            if (i > 0 && j + 1 < n) links.push_back({"sum", at(i - 1, j + 1, kSlotOut), at(i, j, kSlotIn2), i, j});
            if (i > 0 && j == n - 1) links.push_back({"sum", at(i - 1, j, kSlotCout), at(i, j, kSlotIn2), i, j});
        }
    }
    std::set<Qubit> used;
    for (const auto& row : L.tiles)
        for (const auto& t : row) used.insert(t.tile.qubits.begin(), t.tile.qubits.end());
    for (const auto& link : links) {
        const auto path = route(graph, link.from, link.to, used);
        if (path.empty()) {
            std::ostringstream msg;
            msg << "cannot route " << link.role << " chain into tile (" << link.row << "," << link.col << ")";
            throw RoutingError(msg.str());
        }
        for (std::size_t k = 0; k + 1 < path.size(); ++k) {
            L.chains.push_back({path[k], path[k + 1], link.role, link.row, link.col, chain_strength});
            if (k > 0) used.insert(path[k]);
        }
    }
    out.model = compose_model(L);
    return out;
}

double layout_gap(const MultiplierLayout& layout) {
    double g = std::numeric_limits<double>::infinity();
    for (const auto& row : layout.tiles)
        for (const auto& t : row) g = std::min(g, t.penalty.gap);
    for (const auto& c : layout.chains) g = std::min(g, 2.0 * c.strength);
    for (const auto& p : layout.pins) g = std::min(g, 2.0 * p.strength);
    return g / layout.weight_scale;
}

IsingModel compose_model(const MultiplierLayout& layout) {
    IsingModel model;
    for (const auto& row : layout.tiles)
        for (const auto& t : row) t.penalty.add_to(model);
    for (const auto& c : layout.chains) {
        model.touch(c.a);
        model.touch(c.b);
        model.offset += c.strength;
        model.add_coupling(c.a, c.b, -c.strength);
    }
    for (const auto& p : layout.pins) {
        model.offset += p.strength;
        model.add_bias(p.qubit, -p.strength * p.target);
    }
    model.gap_reference = layout_gap(layout);
    return model;
}

InitMethod parse_method(const std::string& name) {
    if (name == "api" || name == "api_fix") return InitMethod::ApiFix;
    if (name == "adhoc" || name == "adhoc_library") return InitMethod::AdhocLibrary;
    if (name == "chain" || name == "extra_chain") return InitMethod::ExtraChain;
    if (name == "flux" || name == "flux_bias") return InitMethod::FluxBias;
    throw std::invalid_argument("unknown init method: " + name);
}

std::string method_name(InitMethod method) {
    switch (method) {
        case InitMethod::ApiFix: return "api";
        case InitMethod::AdhocLibrary: return "adhoc";
        case InitMethod::ExtraChain: return "chain";
        case InitMethod::FluxBias: return "flux";
    }
    return "?";
}

std::vector<Constraint> problem_constraints(const MultiplierLayout& layout, std::uint64_t N) {
    const int n = layout.n, m = layout.m;
    const auto bits = binary_spins(N, n + m);
    std::vector<Constraint> out;
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) {
            const auto& t = layout.tile(i, j).tile;
            for (const auto& var : border_variables(i, j, m, n)) {
                const int slot = slot_index(var);
                int spin = -1;
                if (var == "out") spin = bits[static_cast<std::size_t>(j == 0 ? i : m - 1 + j)];
                if (var == "c_out") spin = bits[static_cast<std::size_t>(n + m - 1)];
                out.push_back({t.at(slot), spin, i, j, var});
            }
        }
    }
    return out;
}

namespace {

void fold_clamped(IsingModel& model) {
    for (auto it = model.biases.begin(); it != model.biases.end();) {
        if (auto c = model.clamped.find(it->first); c != model.clamped.end()) {
            model.offset += it->second * c->second;
            it = model.biases.erase(it);
        } else {
            ++it;
        }
    }
    for (auto it = model.couplings.begin(); it != model.couplings.end();) {
        const auto ca = model.clamped.find(it->first.first);
        const auto cb = model.clamped.find(it->first.second);
        const bool a_fixed = ca != model.clamped.end(), b_fixed = cb != model.clamped.end();
        if (!a_fixed && !b_fixed) {
            ++it;
            continue;
        }
        if (a_fixed && b_fixed)
            model.offset += it->second * ca->second * cb->second;
        else if (a_fixed)
            model.add_bias(it->first.second, it->second * ca->second);
        else
            model.add_bias(it->first.first, it->second * cb->second);
        it = model.couplings.erase(it);
    }
}

}  // namespace

double api_fix(IsingModel& model, const std::map<Qubit, int>& clamps) {
    for (const auto& [q, v] : clamps) model.clamped[q] = v;
    fold_clamped(model);
    double s = 1.0;
    for (const auto& [_, h] : model.biases) s = std::max(s, std::abs(h) / kBiasMax);
    for (const auto& [_, j] : model.couplings) s = std::max({s, j / kCouplingMin, j / kCouplingMax});
    if (s > 1.0) {
        model.offset /= s;
        for (auto& [_, h] : model.biases) h /= s;
        for (auto& [_, j] : model.couplings) j /= s;
    }
    model.gap_reference /= s;
    return s;
}

ProblemInstance apply_problem(const MultiplierLayout& layout, const IsingModel& model, std::uint64_t N,
                              InitMethod method, const ApplyOptions& options) {
    ProblemInstance out{layout, model, method, N};
    MultiplierLayout& L = out.layout;
    IsingModel& M = out.model;
    const auto constraints = problem_constraints(layout, N);

    switch (method) {
        case InitMethod::ApiFix: {
            std::map<Qubit, int> clamps;
            for (const auto& c : constraints) clamps[c.qubit] = c.spin;
            L.weight_scale = api_fix(M, clamps);
            break;
        }
        case InitMethod::AdhocLibrary: {
            if (!options.library) throw std::invalid_argument("adhoc initialization needs a CFA library");
            std::map<std::pair<int, int>, Fixing> fixings;
            for (const auto& c : constraints) fixings[{c.row, c.col}].emplace_back(c.variable, c.spin > 0);
            for (const auto& [pos, fixing] : fixings) {
                TileInstance& t = L.tile(pos.first, pos.second);
                const PenaltyFunction* entry = options.library->find(t.tile.variant, fixing);
                if (!entry)
                    throw MissingLibraryEntry("no specialized CFA for " + fixing_key(canonical_fixing(fixing)) +
                                              " (variant " + std::to_string(t.tile.variant) + ")");
                t.penalty = options.library->transplant(*entry, t.tile.variant, t.tile);
            }
            M = compose_model(L);
            break;
        }
        case InitMethod::ExtraChain: {
            std::set<Qubit> taken;
            for (Qubit q : M.qubits()) taken.insert(q);
            for (const auto& c : constraints) {
                if (options.chain_variant == ChainVariant::DirectBias) {
                    L.pins.push_back({c.qubit, c.spin, 2.0});
                    continue;
                }
                if (!options.graph) throw std::invalid_argument("neighbour chaining needs the hardware graph");
                Qubit spare = -1;
                for (Qubit y : options.graph->neighbors(c.qubit))
                    if (!taken.count(y)) {
                        spare = y;
                        break;
                    }
                if (spare < 0)
                    throw RoutingError("no free neighbour for " + tile_role(c.row, c.col, c.variable));
                taken.insert(spare);
                L.chains.push_back({c.qubit, spare, "pin", c.row, c.col, 2.0});
                L.pins.push_back({spare, c.spin, 2.0});
                L.role_map["pin." + tile_role(c.row, c.col, c.variable)] = spare;
            }
            M = compose_model(L);
            break;
        }
        case InitMethod::FluxBias:
            for (const auto& c : constraints) M.flux_biases[c.qubit] = c.spin;
            break;
    }
    return out;
}

std::vector<std::vector<TileValues>> simulate_circuit(const MultiplierLayout& layout, std::uint64_t p,
                                                      std::uint64_t q) {
    const int n = layout.n, m = layout.m;
    if (p >> n) throw OverflowError("p does not fit in " + std::to_string(n) + " bits");
    if (q >> m) throw OverflowError("q does not fit in " + std::to_string(m) + " bits");
    std::vector<std::vector<TileValues>> v(static_cast<std::size_t>(m), std::vector<TileValues>(static_cast<std::size_t>(n)));
    auto cell = [&](int i, int j) -> TileValues& { return v[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; };
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) {
            TileValues& t = cell(i, j);
            t[kSlotM] = (p >> j) & 1U;
            t[kSlotQ] = (q >> i) & 1U;
            t[kSlotIn2] = i == 0 ? false : (j == n - 1 ? cell(i - 1, j)[kSlotCout] : cell(i - 1, j + 1)[kSlotOut]);
            t[kSlotCin] = j == 0 ? false : cell(i, j - 1)[kSlotCout];
            const int sum = (t[kSlotM] && t[kSlotQ]) + t[kSlotIn2] + t[kSlotCin];
            t[kSlotOut] = sum & 1;
            t[kSlotCout] = sum >= 2;
        }
    }
    return v;
}

SpinMap circuit_spins(const MultiplierLayout& layout, const IsingModel& model, std::uint64_t p, std::uint64_t q) {
    const auto values = simulate_circuit(layout, p, q);
    SpinMap spins;
    for (int i = 0; i < layout.m; ++i) {
        for (int j = 0; j < layout.n; ++j) {
            const TileInstance& t = layout.tile(i, j);
            for (int s = 0; s < kNumPorts; ++s)
                spins[t.tile.at(s)] = values[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)][static_cast<std::size_t>(s)] ? 1 : -1;
            for (Qubit a : t.penalty.ancilla_qubits()) spins[a] = -1;
            SpinMap best;
            t.penalty.min_over_ancillas(spins, &best);
            for (const auto& [a, s] : best) spins[a] = s;
        }
    }
    for (const auto& p_ : layout.pins) spins.try_emplace(p_.qubit, p_.target);
    for (const auto& c : layout.chains) spins.try_emplace(c.b, spins.at(c.a));
    for (const auto& [qb, s] : model.clamped) spins[qb] = s;
    return spins;
}

bool is_prime(std::uint64_t v) {
    if (v < 2) return false;
    for (std::uint64_t d = 2; d * d <= v; ++d)
        if (v % d == 0) return false;
    return true;
}

std::vector<std::uint64_t> primes_with_bits(int bits) {
    if (bits < 2 || bits > 31) throw std::invalid_argument("prime width must be in [2, 31]");
    std::vector<std::uint64_t> out;
    for (std::uint64_t v = std::uint64_t{1} << (bits - 1); v < (std::uint64_t{1} << bits); ++v)
        if (is_prime(v)) out.push_back(v);
    return out;
}

std::vector<FactorInstance> select_instances(int n, int m, std::size_t count, InstanceMode mode) {
    const auto ps = primes_with_bits(n);
    const auto qs = primes_with_bits(m);
    std::vector<FactorInstance> out;
    if (mode == InstanceMode::FixedLargest) {
        for (auto it = qs.rbegin(); it != qs.rend() && out.size() < count; ++it)
            out.push_back({ps.back() * *it, ps.back(), *it});
        return out;
    }
    for (auto p : ps)
        for (auto q : qs) out.push_back({p * q, p, q});
    std::sort(out.begin(), out.end(), [](const FactorInstance& a, const FactorInstance& b) {
        return a.N != b.N ? a.N > b.N : a.p > b.p;
    });
    if (out.size() > count) out.resize(count);
    return out;
}

nlohmann::json model_file_json(const MultiplierLayout& layout, const IsingModel& model) {
    nlohmann::json j = to_json(model);
    j["n"] = layout.n;
    j["m"] = layout.m;
    j["c"] = layout.chain_strength;
    j["role_map"] = layout.role_map;
    nlohmann::json chains = nlohmann::json::array();
    for (const auto& c : layout.chains)
        chains.push_back({{"a", c.a}, {"b", c.b}, {"role", c.role}, {"row", c.row}, {"col", c.col}, {"strength", c.strength}});
    j["chains"] = chains;
    nlohmann::json pins = nlohmann::json::array();
    for (const auto& p : layout.pins) pins.push_back({{"qubit", p.qubit}, {"target", p.target}, {"strength", p.strength}});
    j["pins"] = pins;
    return j;
}

IsingModel model_from_file_json(const nlohmann::json& j) { return ising_from_json(j); }

}  // namespace qfa
