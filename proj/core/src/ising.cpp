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

#include "qfa/ising.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

namespace qfa {

void IsingModel::add_coupling(Qubit a, Qubit b, double v) {
    if (a == b) throw std::invalid_argument("coupling on a single qubit");
    couplings[make_edge(a, b)] += v;
}

std::vector<Qubit> IsingModel::qubits() const {
    std::set<Qubit> s;
    for (const auto& [q, _] : biases) s.insert(q);
    for (const auto& [e, _] : couplings) {
        s.insert(e.first);
        s.insert(e.second);
    }
    for (const auto& [q, _] : clamped) s.insert(q);
    for (const auto& [q, _] : flux_biases) s.insert(q);
    return {s.begin(), s.end()};
}

std::vector<Qubit> IsingModel::free_qubits() const {
    std::vector<Qubit> out;
    for (Qubit q : qubits())
        if (!clamped.count(q)) out.push_back(q);
    return out;
}

namespace {

int spin_of(const IsingModel& model, const SpinMap& spins, Qubit q) {
    if (auto it = model.clamped.find(q); it != model.clamped.end()) return it->second;
    auto it = spins.find(q);
    if (it == spins.end())
        throw IncompleteAssignment("no spin for qubit " + std::to_string(q));
    return it->second;
}

}  // namespace

double evaluate_energy(const IsingModel& model, const SpinMap& spins) {
    double e = model.offset;
    for (const auto& [q, h] : model.biases) e += h * spin_of(model, spins, q);
    for (const auto& [edge, j] : model.couplings)
        e += j * spin_of(model, spins, edge.first) * spin_of(model, spins, edge.second);
    return e;
}

CompactModel::CompactModel(const IsingModel& model) {
    qubits = model.free_qubits();
    field.assign(qubits.size(), 0.0);
    adj.resize(qubits.size());
    constant = model.offset;
    for (const auto& [q, h] : model.biases) {
        if (auto it = model.clamped.find(q); it != model.clamped.end())
            constant += h * it->second;
        else
            field[index_of(q)] += h;
    }
    for (const auto& [edge, j] : model.couplings) {
        auto ca = model.clamped.find(edge.first);
        auto cb = model.clamped.find(edge.second);
        const bool fa = ca == model.clamped.end(), fb = cb == model.clamped.end();
        if (!fa && !fb) {
            constant += j * ca->second * cb->second;
        } else if (fa && !fb) {
            field[index_of(edge.first)] += j * cb->second;
        } else if (!fa && fb) {
            field[index_of(edge.second)] += j * ca->second;
        } else {
            const auto ia = static_cast<std::uint32_t>(index_of(edge.first));
            const auto ib = static_cast<std::uint32_t>(index_of(edge.second));
            adj[ia].emplace_back(ib, j);
            adj[ib].emplace_back(ia, j);
        }
    }
}

int CompactModel::index_of(Qubit q) const {
    auto it = std::lower_bound(qubits.begin(), qubits.end(), q);
    if (it == qubits.end() || *it != q) return -1;
    return static_cast<int>(it - qubits.begin());
}

double CompactModel::energy(const std::vector<std::int8_t>& spins) const {
    double e = constant;
    for (std::size_t i = 0; i < qubits.size(); ++i) {
        e += field[i] * spins[i];
        for (const auto& [k, j] : adj[i])
            if (k > i) e += j * spins[i] * spins[k];
    }
    return e;
}

std::string edge_key(const Edge& e) { return std::to_string(e.first) + "," + std::to_string(e.second); }

Edge parse_edge_key(const std::string& key) {
    const auto comma = key.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("bad coupling key: " + key);
    return make_edge(std::stoi(key.substr(0, comma)), std::stoi(key.substr(comma + 1)));
}

nlohmann::json to_json(const IsingModel& model) {
    nlohmann::json biases = nlohmann::json::object();
    for (const auto& [q, h] : model.biases) biases[std::to_string(q)] = h;
    nlohmann::json couplings = nlohmann::json::object();
    for (const auto& [e, j] : model.couplings)
        couplings[edge_key(e)] = j;
    nlohmann::json clamped = nlohmann::json::object();
    for (const auto& [q, s] : model.clamped) clamped[std::to_string(q)] = s;
    nlohmann::json flux = nlohmann::json::object();
    for (const auto& [q, v] : model.flux_biases) flux[std::to_string(q)] = v;
    return {{"offset", model.offset},   {"biases", biases},          {"couplings", couplings},
            {"clamped", clamped},       {"flux_biases", flux},       {"gap_reference", model.gap_reference}};
}

IsingModel ising_from_json(const nlohmann::json& j) {
    IsingModel m;
    m.offset = j.at("offset").get<double>();
    for (const auto& [k, v] : j.at("biases").items()) m.biases[std::stoi(k)] = v.get<double>();
    for (const auto& [k, v] : j.at("couplings").items()) m.couplings[parse_edge_key(k)] = v.get<double>();
    for (const auto& [k, v] : j.at("clamped").items()) m.clamped[std::stoi(k)] = v.get<int>();
    for (const auto& [k, v] : j.at("flux_biases").items()) m.flux_biases[std::stoi(k)] = v.get<double>();
    m.gap_reference = j.at("gap_reference").get<double>();
    return m;
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string model_digest(const IsingModel& model) { return fnv1a_hex(to_json(model).dump()); }

}  // namespace qfa
