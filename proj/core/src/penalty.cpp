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

#include "qfa/penalty.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "qfa/lp.hpp"

namespace qfa {

bool is_ancilla_name(const std::string& name) {
    return name.size() > 1 && name[0] == 'a' && std::isdigit(static_cast<unsigned char>(name[1]));
}

std::vector<Qubit> PenaltyFunction::qubits() const {
    std::set<Qubit> s;
    for (const auto& [_, q] : placement) s.insert(q);
    return {s.begin(), s.end()};
}

std::vector<Qubit> PenaltyFunction::ancilla_qubits() const {
    std::vector<Qubit> out;
    for (const auto& [name, q] : placement)
        if (is_ancilla_name(name)) out.push_back(q);
    std::sort(out.begin(), out.end());
    return out;
}

double PenaltyFunction::energy(const SpinMap& spins) const {
    double e = offset;
    for (const auto& [q, h] : biases) e += h * spins.at(q);
    for (const auto& [edge, j] : couplings) e += j * spins.at(edge.first) * spins.at(edge.second);
    return e;
}

double PenaltyFunction::min_over_ancillas(const SpinMap& spins, SpinMap* best) const {
    const auto anc = ancilla_qubits();
    SpinMap local;
    for (Qubit q : qubits())
        if (!std::binary_search(anc.begin(), anc.end(), q)) local[q] = spins.at(q);
    double lowest = std::numeric_limits<double>::infinity();
    for (std::uint32_t a = 0; a < (1U << anc.size()); ++a) {
        for (std::size_t k = 0; k < anc.size(); ++k) local[anc[k]] = ((a >> k) & 1U) ? 1 : -1;
        const double e = energy(local);
        if (e < lowest) {
            lowest = e;
            if (best) {
                best->clear();
                for (Qubit q : anc) (*best)[q] = local[q];
            }
        }
    }
    return lowest;
}

void PenaltyFunction::add_to(IsingModel& model) const {
    model.offset += offset;
    for (Qubit q : qubits()) model.touch(q);
    for (const auto& [q, h] : biases) model.add_bias(q, h);
    for (const auto& [e, j] : couplings) model.add_coupling(e.first, e.second, j);
}

PenaltyFunction PenaltyFunction::scaled(double lambda) const {
    PenaltyFunction out = *this;
    out.offset *= lambda;
    for (auto& [_, h] : out.biases) h *= lambda;
    for (auto& [_, j] : out.couplings) j *= lambda;
    out.gap *= lambda;
    return out;
}

namespace {

struct Frame {
    std::vector<Qubit> var_qubits;  // free variables in spec order
    std::vector<Qubit> anc_qubits;
};

Frame frame_for(const PenaltyFunction& pf, const BooleanSpec& spec) {
    Frame f;
    for (const auto& v : spec.free_variables()) {
        auto it = pf.placement.find(v);
        if (it == pf.placement.end()) throw std::invalid_argument("variable " + v + " has no qubit");
        f.var_qubits.push_back(it->second);
    }
    f.anc_qubits = pf.ancilla_qubits();
    return f;
}

void set_spins(SpinMap& s, const std::vector<Qubit>& qs, std::uint32_t bits) {
    for (std::size_t k = 0; k < qs.size(); ++k) s[qs[k]] = ((bits >> k) & 1U) ? 1 : -1;
}

}  // namespace

VerificationResult verify_penalty(const PenaltyFunction& pf, const BooleanSpec& spec) {
    const Frame f = frame_for(pf, spec);
    VerificationResult r;
    r.measured_gap = std::numeric_limits<double>::infinity();
    SpinMap s;
    for (std::uint32_t x = 0; x < (1U << f.var_qubits.size()); ++x) {
        set_spins(s, f.var_qubits, x);
        const bool sat = spec.holds(spec.expand(x));
        double lowest = std::numeric_limits<double>::infinity();
        bool slack = false;
        for (std::uint32_t a = 0; a < (1U << f.anc_qubits.size()); ++a) {
            set_spins(s, f.anc_qubits, a);
            const double e = pf.energy(s);
            lowest = std::min(lowest, e);
            if (e > kResidualTolerance && e < pf.gap - kGapSlack) slack = true;
        }
        if (sat) {
            r.worst_sat_residual = std::max(r.worst_sat_residual, std::abs(lowest));
            if (slack) ++r.slack_solution_count;
        } else {
            r.measured_gap = std::min(r.measured_gap, lowest);
        }
    }
    r.satisfies_spec =
        pf.gap > 0.0 && r.worst_sat_residual <= kResidualTolerance && r.measured_gap >= pf.gap - kGapSlack;
    return r;
}

namespace {

constexpr double kGapCap = 1000.0;
constexpr double kPruneEps = 1e-9;

// LP layout: [offset, biases..., couplings..., g].
class SynthesisProblem {
  public:
    SynthesisProblem(const BooleanSpec& spec, std::vector<Qubit> qubits, std::size_t num_vars,
                     const std::vector<Qubit>& zero_bias, const std::vector<Edge>& couplers, double bias_bound)
        : qubits_(std::move(qubits)), num_vars_(num_vars), num_anc_(qubits_.size() - num_vars),
          bias_bound_(bias_bound) {
        for (std::size_t i = 0; i < qubits_.size(); ++i)
            if (std::find(zero_bias.begin(), zero_bias.end(), qubits_[i]) == zero_bias.end())
                bias_slots_.push_back(i);
        std::set<Edge> seen;
        for (const auto& e : couplers) {
            auto ia = std::find(qubits_.begin(), qubits_.end(), e.first);
            auto ib = std::find(qubits_.begin(), qubits_.end(), e.second);
            if (ia == qubits_.end() || ib == qubits_.end() || !seen.insert(make_edge(e.first, e.second)).second)
                continue;
            pairs_.emplace_back(static_cast<std::size_t>(ia - qubits_.begin()),
                                static_cast<std::size_t>(ib - qubits_.begin()));
        }
        width_ = 1 + bias_slots_.size() + pairs_.size() + 1;
        const std::uint32_t nx = 1U << num_vars_, na = 1U << num_anc_;
        for (std::uint32_t x = 0; x < nx; ++x) {
            if (spec.holds(spec.expand(x)))
                sat_.push_back(x);
            else
                unsat_.push_back(x);
        }
        coeffs_.resize(std::size_t{nx} * na);
        for (std::uint32_t x = 0; x < nx; ++x)
            for (std::uint32_t a = 0; a < na; ++a) coeffs_[x * na + a] = row(x | (a << num_vars_));
    }

    std::size_t width() const { return width_; }
    std::size_t gap_index() const { return width_ - 1; }
    const std::vector<std::uint32_t>& sat_rows() const { return sat_; }
    std::uint32_t ancilla_values() const { return 1U << num_anc_; }

    // choice[k] is the zero-penalty ancilla value of sat_rows()[k], or -1.
    lp::Problem node_problem(const std::vector<int>& choice) const {
        lp::Problem p(width_);
        bounds(p);
        p.objective[gap_index()] = 1.0;
        const std::uint32_t na = ancilla_values();
        for (std::size_t k = 0; k < sat_.size(); ++k)
            for (std::uint32_t a = 0; a < na; ++a)
                p.add_row(coeff(sat_[k], a), static_cast<int>(a) == choice[k] ? lp::Sense::Equal : lp::Sense::GreaterEq,
                          0.0);
        for (std::uint32_t x : unsat_)
            for (std::uint32_t a = 0; a < na; ++a) {
                auto c = coeff(x, a);
                c[gap_index()] = -1.0;
                p.add_row(std::move(c), lp::Sense::GreaterEq, 0.0);
            }
        return p;
    }

    // Same constraints with g pinned near `gap`, plus one variable per
    // non-chosen SAT row bounded by min(P, gap); their sum is maximized.
    lp::Problem slack_problem(const std::vector<int>& choice, double gap) const {
        const std::uint32_t na = ancilla_values();
        const std::size_t extra = sat_.size() * (na - 1);
        lp::Problem p(width_ + extra);
        bounds(p);
        p.lower[gap_index()] = gap - kPruneEps;
        std::size_t t = width_;
        auto widen = [&](std::vector<double> c) {
            c.resize(width_ + extra, 0.0);
            return c;
        };
        for (std::size_t k = 0; k < sat_.size(); ++k)
            for (std::uint32_t a = 0; a < na; ++a) {
                if (static_cast<int>(a) == choice[k]) {
                    p.add_row(widen(coeff(sat_[k], a)), lp::Sense::Equal, 0.0);
                    continue;
                }
                auto c = widen(coeff(sat_[k], a));
                p.add_row(c, lp::Sense::GreaterEq, 0.0);
                c[t] = -1.0;
                p.add_row(std::move(c), lp::Sense::GreaterEq, 0.0);
                p.lower[t] = 0.0;
                p.upper[t] = gap;
                p.objective[t] = 1.0;
                ++t;
            }
        for (std::uint32_t x : unsat_)
            for (std::uint32_t a = 0; a < na; ++a) {
                auto c = widen(coeff(x, a));
                c[gap_index()] = -1.0;
                p.add_row(std::move(c), lp::Sense::GreaterEq, 0.0);
            }
        return p;
    }

    void fill(const std::vector<double>& x, PenaltyFunction& pf) const {
        pf.offset = x[0];
        for (std::size_t i = 0; i < bias_slots_.size(); ++i) {
            const double h = x[1 + i];
            if (h != 0.0) pf.biases[qubits_[bias_slots_[i]]] = h;
        }
        for (std::size_t i = 0; i < pairs_.size(); ++i) {
            const double j = x[1 + bias_slots_.size() + i];
            if (j != 0.0) pf.couplings[make_edge(qubits_[pairs_[i].first], qubits_[pairs_[i].second])] = j;
        }
    }

  private:
    std::vector<double> coeff(std::uint32_t x, std::uint32_t a) const {
        return coeffs_[x * ancilla_values() + a];
    }

    std::vector<double> row(std::uint32_t bits) const {
        std::vector<double> c(width_, 0.0);
        auto spin = [&](std::size_t i) { return ((bits >> i) & 1U) ? 1.0 : -1.0; };
        c[0] = 1.0;
        for (std::size_t i = 0; i < bias_slots_.size(); ++i) c[1 + i] = spin(bias_slots_[i]);
        for (std::size_t i = 0; i < pairs_.size(); ++i)
            c[1 + bias_slots_.size() + i] = spin(pairs_[i].first) * spin(pairs_[i].second);
        return c;
    }

    void bounds(lp::Problem& p) const {
        for (std::size_t i = 0; i < bias_slots_.size(); ++i) {
            p.lower[1 + i] = -bias_bound_;
            p.upper[1 + i] = bias_bound_;
        }
        for (std::size_t i = 0; i < pairs_.size(); ++i) {
            p.lower[1 + bias_slots_.size() + i] = kCouplingMin;
            p.upper[1 + bias_slots_.size() + i] = kCouplingMax;
        }
        p.lower[gap_index()] = 0.0;
        p.upper[gap_index()] = kGapCap;
    }

    std::vector<Qubit> qubits_;
    std::size_t num_vars_, num_anc_;
    double bias_bound_;
    std::vector<std::size_t> bias_slots_;
    std::vector<std::pair<std::size_t, std::size_t>> pairs_;
    std::size_t width_ = 0;
    std::vector<std::uint32_t> sat_, unsat_;
    std::vector<std::vector<double>> coeffs_;
};

struct Incumbent {
    double gap = -1.0;
    std::vector<int> choice;
    std::vector<double> x;
};

// Depth-first branch and bound over the per-row ancilla choice. Children
// are evaluated together on warm-started copies of the parent LP and
// explored best bound first; `budget` caps the number of LP solves.
class ChoiceSearch {
  public:
    ChoiceSearch(const SynthesisProblem& sp, long budget) : sp_(sp), budget_(budget) {}

    Incumbent run() {
        std::vector<int> choice(sp_.sat_rows().size(), -1);
        lp::TighteningLp root(sp_.node_problem(choice));
        if (choice.empty()) {
            const auto sol = root.solve();
            if (sol.status == lp::Status::Optimal && sol.objective > kPruneEps)
                inc_ = Incumbent{sol.objective, choice, sol.x};
            return inc_;
        }
        descend(root, choice);
        return inc_;
    }

    long spent() const { return spent_; }

  private:
    struct Child {
        double gap;
        int value;
        lp::TighteningLp lp;
        std::vector<double> x;
    };

    // Fail-first: every open row is tried with every ancilla value and the
    // row with the fewest surviving children (then the lowest best bound)
    // is branched on.
    void descend(const lp::TighteningLp& parent, std::vector<int>& choice) {
        const std::size_t na = sp_.ancilla_values();
        std::size_t open_rows = 0;
        for (int c : choice) open_rows += c < 0 ? 1 : 0;
        const bool leaf = open_rows == 1;

        std::vector<Child> best_kids;
        std::size_t best_row = choice.size();
        double best_top = 0.0;
        for (std::size_t row = 0; row < choice.size(); ++row) {
            if (choice[row] >= 0) continue;
            std::vector<Child> kids;
            for (std::size_t a = 0; a < na; ++a) {
                if (spent_ >= budget_) return;
                lp::TighteningLp lp = parent;
                lp.make_equal(row * na + a);
                const double cutoff = std::max(inc_.gap, 0.0) + kPruneEps;
                const auto sol = lp.solve(cutoff);
                ++spent_;
                if (sol.status != lp::Status::Optimal || sol.objective <= cutoff) continue;
                if (leaf) {
                    choice[row] = static_cast<int>(a);
                    inc_ = Incumbent{sol.objective, choice, sol.x};
                    choice[row] = -1;
                    continue;
                }
                kids.push_back(Child{sol.objective, static_cast<int>(a), std::move(lp), {}});
            }
            if (leaf) return;
            double top = 0.0;
            for (const auto& k : kids) top = std::max(top, k.gap);
            if (best_row == choice.size() || kids.size() < best_kids.size() ||
                (kids.size() == best_kids.size() && top < best_top)) {
                best_row = row;
                best_top = top;
                best_kids = std::move(kids);
            }
            if (best_kids.empty()) return;
        }
        std::stable_sort(best_kids.begin(), best_kids.end(),
                         [](const Child& a, const Child& b) { return a.gap > b.gap; });
        for (auto& k : best_kids) {
            if (spent_ >= budget_) return;
            if (k.gap <= inc_.gap + kPruneEps) continue;
            choice[best_row] = k.value;
            descend(k.lp, choice);
            choice[best_row] = -1;
        }
    }

    const SynthesisProblem& sp_;
    long budget_;
    long spent_ = 0;
    Incumbent inc_;
};

double solve_gap(const SynthesisProblem& sp, const std::vector<int>& choice) {
    const auto sol = lp::solve(sp.node_problem(choice));
    return sol.status == lp::Status::Optimal ? sol.objective : -1.0;
}

PenaltyFunction snap(const PenaltyFunction& pf, double denom) {
    auto r = [denom](double v) { return std::round(v * denom) / denom; };
    PenaltyFunction out = pf;
    out.offset = r(pf.offset);
    out.biases.clear();
    out.couplings.clear();
    for (const auto& [q, h] : pf.biases)
        if (double v = r(h); v != 0.0) out.biases[q] = v;
    for (const auto& [e, j] : pf.couplings)
        if (double v = r(j); v != 0.0) out.couplings[e] = v;
    return out;
}

std::string describe_row(const BooleanSpec& spec, std::uint32_t x) {
    const auto vars = spec.free_variables();
    std::ostringstream os;
    for (std::size_t k = 0; k < vars.size(); ++k) os << (k ? "," : "") << vars[k] << '=' << ((x >> k) & 1U);
    return os.str();
}

}  // namespace

PenaltyFunction synthesize_penalty(const BooleanSpec& spec,
                                   const std::vector<std::pair<std::string, Qubit>>& variables,
                                   const std::vector<Qubit>& ancillas, const std::vector<Qubit>& zero_bias,
                                   const std::vector<Edge>& couplers, const SynthOptions& options) {
    const auto free_vars = spec.free_variables();
    std::vector<Qubit> qubits;
    PenaltyFunction pf;
    for (const auto& v : free_vars) {
        auto it = std::find_if(variables.begin(), variables.end(), [&](const auto& p) { return p.first == v; });
        if (it == variables.end()) throw std::invalid_argument("no qubit for variable " + v);
        qubits.push_back(it->second);
        pf.placement[v] = it->second;
    }
    for (std::size_t k = 0; k < ancillas.size(); ++k) {
        qubits.push_back(ancillas[k]);
        pf.placement["a" + std::to_string(k + 1)] = ancillas[k];
    }
    if (std::set<Qubit>(qubits.begin(), qubits.end()).size() != qubits.size())
        throw std::invalid_argument("penalty qubits must be distinct");
    if (qubits.size() > 12) throw std::invalid_argument("too many qubits for exhaustive synthesis");
    pf.num_ancillas = static_cast<int>(ancillas.size());
    pf.fixing = spec.fixing;

    const SynthesisProblem sp(spec, qubits, free_vars.size(), zero_bias, couplers, options.bias_bound);
    ChoiceSearch cs(sp, options.max_lps);
    const Incumbent inc = cs.run();
    if (inc.gap <= kPruneEps) {
        // Name the first satisfying row the search could not give a zero.
        std::vector<int> choice(sp.sat_rows().size(), -1);
        std::string row = "-";
        for (std::size_t k = 0; k < choice.size(); ++k) {
            bool ok = false;
            for (int a = 0; a < static_cast<int>(sp.ancilla_values()) && !ok; ++a) {
                choice[k] = a;
                ok = solve_gap(sp, choice) > kPruneEps;
            }
            if (!ok) {
                row = describe_row(spec, sp.sat_rows()[k]);
                break;
            }
        }
        throw SynthesisInfeasible("no penalty with positive gap; stuck at input row " + row);
    }

    std::vector<double> x = inc.x;
    if (options.minimize_slack) {
        const auto sol = lp::solve(sp.slack_problem(inc.choice, inc.gap));
        if (sol.status == lp::Status::Optimal) x.assign(sol.x.begin(), sol.x.begin() + static_cast<long>(sp.width()));
    }
    sp.fill(x, pf);
    pf.gap = inc.gap;
    const VerificationResult raw = verify_penalty(pf, spec);

    // Prefer the coarsest rational grid that keeps the verified gap.
    for (double denom : {1.0, 2.0, 3.0, 4.0, 6.0, 8.0, 12.0, 16.0, 24.0, 48.0, 96.0}) {
        PenaltyFunction s = snap(pf, denom);
        bool in_range = true;
        for (const auto& [_, h] : s.biases) in_range = in_range && std::abs(h) <= options.bias_bound;
        for (const auto& [_, j] : s.couplings) in_range = in_range && j >= kCouplingMin && j <= kCouplingMax;
        if (!in_range) continue;
        const VerificationResult v = verify_penalty(s, spec);
        if (v.satisfies_spec && v.slack_solution_count <= raw.slack_solution_count) {
            s.gap = std::min(v.measured_gap, kGapCap);
            return s;
        }
    }
    if (!raw.satisfies_spec) throw SynthesisInfeasible("synthesized penalty failed verification");
    pf.gap = std::min(raw.measured_gap, kGapCap);
    return pf;
}

PenaltyFunction synthesize_penalty(const BooleanSpec& spec, const TileAssignment& tile, int num_ancillas,
                                   const SynthOptions& options) {
    if (num_ancillas < 0 || num_ancillas > kTileSize - kNumPorts)
        throw std::invalid_argument("ancilla budget exceeds the tile");
    std::vector<std::pair<std::string, Qubit>> vars;
    for (const auto& v : spec.free_variables()) {
        const int s = slot_index(v);
        if (s < 0 || s >= kNumPorts) throw std::invalid_argument("variable " + v + " has no tile slot");
        vars.emplace_back(v, tile.at(s));
    }
    std::vector<Qubit> ancillas, zero_bias;
    for (int k = 0; k < num_ancillas; ++k) ancillas.push_back(tile.at(kSlotA1 + k));
    if (options.recycle_fixed) {
        for (const auto& [name, _] : canonical_fixing(spec.fixing)) {
            const int s = slot_index(name);
            if (s < 0) continue;
            ancillas.push_back(tile.at(s));
            zero_bias.push_back(tile.at(s));
        }
    }
    return synthesize_penalty(spec, vars, ancillas, zero_bias, tile.internal_couplers, options);
}

nlohmann::json to_json(const PenaltyFunction& pf) {
    nlohmann::json fixing = nlohmann::json::object();
    for (const auto& [n, v] : pf.fixing) fixing[n] = v;
    nlohmann::json biases = nlohmann::json::object();
    for (const auto& [q, h] : pf.biases) biases[std::to_string(q)] = h;
    nlohmann::json couplings = nlohmann::json::object();
    for (const auto& [e, j] : pf.couplings) couplings[edge_key(e)] = j;
    nlohmann::json placement = nlohmann::json::object();
    for (const auto& [n, q] : pf.placement) placement[n] = q;
    return {{"fixing", fixing},       {"offset", pf.offset}, {"biases", biases},
            {"couplings", couplings}, {"gap", pf.gap},       {"placement", placement},
            {"num_ancillas", pf.num_ancillas}};
}

PenaltyFunction penalty_from_json(const nlohmann::json& j) {
    PenaltyFunction pf;
    for (const auto& [n, v] : j.at("fixing").items()) pf.fixing.emplace_back(n, v.get<bool>());
    pf.fixing = canonical_fixing(std::move(pf.fixing));
    pf.offset = j.at("offset").get<double>();
    for (const auto& [k, v] : j.at("biases").items()) pf.biases[std::stoi(k)] = v.get<double>();
    for (const auto& [k, v] : j.at("couplings").items()) pf.couplings[parse_edge_key(k)] = v.get<double>();
    pf.gap = j.at("gap").get<double>();
    for (const auto& [n, v] : j.at("placement").items()) pf.placement[n] = v.get<Qubit>();
    pf.num_ancillas = j.value("num_ancillas", 0);
    if (!j.contains("num_ancillas"))
        for (const auto& [n, _] : pf.placement) pf.num_ancillas += is_ancilla_name(n) ? 1 : 0;
    return pf;
}

Fixing canonical_fixing(Fixing fixing) {
    std::stable_sort(fixing.begin(), fixing.end(), [](const auto& a, const auto& b) {
        const int sa = slot_index(a.first), sb = slot_index(b.first);
        if (sa != sb) return (sa < 0 ? kTileSize : sa) < (sb < 0 ? kTileSize : sb);
        return a.first < b.first;
    });
    return fixing;
}

const PenaltyFunction* CfaLibrary::find(int variant, const Fixing& fixing) const {
    const Fixing key = canonical_fixing(fixing);
    for (const auto& e : entries)
        if (e.variant == variant && e.penalty.fixing == key) return &e.penalty;
    return nullptr;
}

const PenaltyFunction& CfaLibrary::base(int variant) const {
    const PenaltyFunction* pf = find(variant, {});
    if (!pf) throw std::out_of_range("library has no base entry for variant " + std::to_string(variant));
    return *pf;
}

PenaltyFunction CfaLibrary::transplant(const PenaltyFunction& pf, int variant, const TileAssignment& tile) const {
    const TileAssignment& from = templates.at(static_cast<std::size_t>(variant));
    if (tile.variant != variant) throw std::invalid_argument("tile variant does not match library entry");
    std::map<Qubit, Qubit> to;
    for (int s = 0; s < kTileSize; ++s) to[from.at(s)] = tile.at(s);
    auto map_q = [&](Qubit q) {
        auto it = to.find(q);
        if (it == to.end()) throw std::invalid_argument("library entry uses a qubit outside its template tile");
        return it->second;
    };
    PenaltyFunction out;
    out.offset = pf.offset;
    out.gap = pf.gap;
    out.num_ancillas = pf.num_ancillas;
    out.fixing = pf.fixing;
    for (const auto& [n, q] : pf.placement) out.placement[n] = map_q(q);
    for (const auto& [q, h] : pf.biases) out.biases[map_q(q)] = h;
    for (const auto& [e, j] : pf.couplings) {
        const Edge m = make_edge(map_q(e.first), map_q(e.second));
        if (!std::binary_search(tile.internal_couplers.begin(), tile.internal_couplers.end(), m))
            throw std::invalid_argument("tile lacks coupler " + edge_key(m) + " required by the library entry");
        out.couplings[m] = j;
    }
    return out;
}

nlohmann::json CfaLibrary::to_json() const {
    nlohmann::json tpl = nlohmann::json::array();
    for (const auto& t : templates) tpl.push_back({{"variant", t.variant}, {"qubits", t.qubits}});
    nlohmann::json list = nlohmann::json::array();
    for (const auto& e : entries) {
        auto j = qfa::to_json(e.penalty);
        j["variant"] = e.variant;
        list.push_back(std::move(j));
    }
    return {{"templates", tpl}, {"entries", list}};
}

CfaLibrary CfaLibrary::from_json(const nlohmann::json& j) {
    CfaLibrary lib;
    const auto& tpl = j.at("templates");
    if (tpl.size() != 2) throw std::invalid_argument("library needs two template tiles");
    for (std::size_t v = 0; v < 2; ++v) {
        auto& t = lib.templates[v];
        t.variant = tpl[v].at("variant").get<int>();
        t.qubits = tpl[v].at("qubits").get<std::array<Qubit, kTileSize>>();
        for (int s = 0; s < kNumPorts; ++s) t.ports[kSlotNames[static_cast<std::size_t>(s)]] = t.at(s);
    }
    for (const auto& e : j.at("entries")) lib.entries.push_back({e.at("variant").get<int>(), penalty_from_json(e)});
    return lib;
}

std::vector<std::string> border_variables(int row, int col, int rows, int cols) {
    std::vector<std::string> out;
    if (row == 0) out.push_back("in2");
    if (col == 0) out.push_back("c_in");
    if (col == 0 || row == rows - 1) out.push_back("out");
    if (row == rows - 1 && col == cols - 1) out.push_back("c_out");
    return out;
}

CfaLibrary build_specialized_library(const HardwareGraph& graph, double base_bias_bound,
                                     const SynthOptions& options) {
    const TileGrid grid = place_tiles(graph, 2, 1);
    CfaLibrary lib;
    lib.templates = {grid[0][0], grid[1][0]};
    const BooleanSpec base = cfa_spec();

    for (int variant = 0; variant < 2; ++variant) {
        const TileAssignment& tile = lib.templates[static_cast<std::size_t>(variant)];
        SynthOptions base_opts = options;
        base_opts.bias_bound = base_bias_bound;
        lib.entries.push_back({variant, synthesize_penalty(base, tile, 2, base_opts)});

        // Every border situation a tile of this variant can be in: top row,
        // rightmost column, leftmost column; variant 1 is the bottom row.
        std::set<std::vector<std::string>> shapes;
        for (int flags = 0; flags < 8; ++flags) {
            const bool top = flags & 1, right = flags & 2, left = flags & 4;
            const int rows = variant == 1 ? (top ? 1 : 2) : (top ? 2 : 3);
            const int row = top ? 0 : 1;
            const int cols = (right && left) ? 1 : 3;
            const int col = right ? 0 : (left ? cols - 1 : 1);
            auto vars = border_variables(row, col, rows, cols);
            if (!vars.empty()) shapes.insert(vars);
        }
        for (const auto& vars : shapes) {
            for (std::uint32_t bits = 0; bits < (1U << vars.size()); ++bits) {
                Fixing f;
                bool valid = true;
                for (std::size_t k = 0; k < vars.size(); ++k) {
                    const bool v = (bits >> k) & 1U;
                    // Structural constants are always false.
                    if ((vars[k] == "in2" || vars[k] == "c_in") && v) valid = false;
                    f.emplace_back(vars[k], v);
                }
                if (!valid) continue;
                BooleanSpec spec;
                try {
                    spec = specialize(base, canonical_fixing(f));
                } catch (const EmptySpec&) {
                    continue;
                }
                lib.entries.push_back({variant, synthesize_penalty(spec, tile, 2, options)});
            }
        }
    }
    return lib;
}

}  // namespace qfa
