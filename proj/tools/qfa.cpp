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

// qfa: synth | factor | sweep | remedy

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qfa/diagnostics.hpp"
#include "qfa/multiplier.hpp"
#include "qfa/penalty.hpp"
#include "qfa/remedy.hpp"
#include "qfa/sampler.hpp"
#include "qfa/topology.hpp"

using namespace qfa;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kPegasusSize = 16;

class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string out;
    std::string library;
    std::uint64_t seed = 0;
    int threads = 1;
    int n = 3;
    int m = 3;
    std::uint64_t N = 0;
    std::string method = "flux";
    std::string chain_variant = "direct";
    double chain_strength = 2.0;
    int reads = 1000;
    int sweeps = AnnealConfig{}.sweeps;
    double delta = kDefaultRemedyDelta;
    int threshold = 0;
    std::vector<std::string> sizes{"3x3", "4x4"};
    std::vector<double> c_list{1.0, 1.5, 2.0};
    std::size_t count = 10;
    std::string selection = "fixed";
};

json options_json(const std::string& command, const Options& o) {
    json j{{"seed", o.seed}, {"out", o.out}, {"library", o.library}};
    if (command == "synth") return j;
    j["reads"] = o.reads;
    j["sweeps"] = o.sweeps;
    j["method"] = o.method;
    j["chain-variant"] = o.chain_variant;
    if (command == "sweep") {
        j["sizes"] = o.sizes;
        j["c"] = o.c_list;
        j["count"] = o.count;
        j["selection"] = o.selection;
        return j;
    }
    j["n"] = o.n;
    j["m"] = o.m;
    j["N"] = o.N;
    j["chain-strength"] = o.chain_strength;
    if (command == "remedy") {
        j["delta"] = o.delta;
        j["threshold"] = o.threshold;
    }
    return j;
}

void write_file(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// Config keys become flags unless the flag is already on the command line;
// a sidecar ({"command", "config", ...}) is accepted as well.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
    std::vector<std::string> out;
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw UsageError("--config needs a file");
            path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        } else {
            out.push_back(args[i]);
        }
    }
    if (path.empty()) return out;
    std::ifstream f(path);
    if (!f) throw UsageError("cannot read config " + path);
    json j = json::parse(f);
    if (j.contains("config")) j = j["config"];
    if (!j.is_object()) throw UsageError("config must be a JSON object");
    std::set<std::string> given;
    for (const auto& a : out)
        if (a.rfind("--", 0) == 0) given.insert(a.substr(2, a.find('=') == std::string::npos ? std::string::npos : a.find('=') - 2));
    std::vector<std::string> injected;
    for (const auto& [key, value] : j.items()) {
        if (given.count(key) || value.is_null()) continue;
        if (value.is_string() && value.get<std::string>().empty()) continue;
        injected.push_back("--" + key);
        if (value.is_array()) {
            for (const auto& v : value) injected.push_back(v.is_string() ? v.get<std::string>() : v.dump());
        } else {
            injected.push_back(value.is_string() ? value.get<std::string>() : value.dump());
        }
    }
    // Subcommand name first, then config, then the explicit flags.
    if (out.empty()) return injected;
    std::vector<std::string> merged{out.front()};
    merged.insert(merged.end(), injected.begin(), injected.end());
    merged.insert(merged.end(), out.begin() + 1, out.end());
    return merged;
}

CfaLibrary load_library(const Options& o, const HardwareGraph& graph) {
    if (o.library.empty()) {
        std::cerr << "synthesizing CFA library (pass --library to reuse one)\n";
        return build_specialized_library(graph);
    }
    std::ifstream f(o.library);
    if (!f) throw UsageError("cannot read library " + o.library);
    return CfaLibrary::from_json(json::parse(f));
}

AnnealConfig anneal_config(const Options& o, std::uint64_t seed) {
    AnnealConfig c;
    c.num_reads = o.reads;
    c.sweeps = o.sweeps;
    c.master_seed = seed;
    c.threads = o.threads;
    return c;
}

ApplyOptions apply_options(const Options& o, const CfaLibrary& lib, const HardwareGraph& graph) {
    ApplyOptions a;
    a.library = &lib;
    a.graph = &graph;
    if (o.chain_variant == "direct")
        a.chain_variant = ChainVariant::DirectBias;
    else if (o.chain_variant == "neighbor")
        a.chain_variant = ChainVariant::NeighborQubit;
    else
        throw UsageError("--chain-variant must be direct or neighbor");
    return a;
}

std::pair<int, int> parse_size(const std::string& s) {
    const auto x = s.find('x');
    if (x == std::string::npos) throw UsageError("size must look like 4x4: " + s);
    try {
        return {std::stoi(s.substr(0, x)), std::stoi(s.substr(x + 1))};
    } catch (const std::exception&) {
        throw UsageError("size must look like 4x4: " + s);
    }
}

int cmd_synth(const Options& o) {
    if (o.out.empty()) throw UsageError("synth needs --out");
    const auto graph = build_pegasus(kPegasusSize);
    const auto lib = build_specialized_library(graph);
    std::size_t failures = 0;
    for (const auto& e : lib.entries) {
        const auto v = verify_penalty(e.penalty, specialize(cfa_spec(), e.penalty.fixing));
        const bool ok = v.satisfies_spec && v.measured_gap >= 2.0 - kGapSlack;
        failures += ok ? 0 : 1;
        std::cout << "variant " << e.variant << " fixing " << fixing_key(e.penalty.fixing) << " gap "
                  << e.penalty.gap << (ok ? "" : " FAILED") << '\n';
    }
    json j = lib.to_json();
    write_file(o.out, dump(j));
    write_file(o.out + ".sidecar.json", dump({{"command", "synth"}, {"config", options_json("synth", o)}}));
    std::cout << lib.entries.size() << " entries written to " << o.out << '\n';
    return failures == 0 ? 0 : 1;
}

int cmd_factor(const Options& o) {
    if (o.N == 0) throw UsageError("factor needs --N");
    if (o.out.empty()) throw UsageError("factor needs --out");
    const auto graph = build_pegasus(kPegasusSize);
    const auto lib = load_library(o, graph);
    const auto built = build_multiplier(o.n, o.m, graph, lib, o.chain_strength);
    const auto inst = apply_problem(built.layout, built.model, o.N, parse_method(o.method), apply_options(o, lib, graph));
    const auto cfg = anneal_config(o, o.seed);
    const auto set = sample_sa(inst.model, cfg);
    const auto report = excitation_stats(inst.layout, inst.model, set);

    std::size_t zero = 0, slack = 0;
    std::set<std::pair<std::uint64_t, std::uint64_t>> factors;
    json decoded = json::array();
    for (const auto& s : set.samples) {
        const auto c = decode(inst.layout, inst.model, set.spin_map(s));
        if (c.ancilla_slack) slack += s.occurrences;
        if (!c.is_zero_energy()) continue;
        zero += s.occurrences;
        if (factors.insert({c.p, c.q}).second) decoded.push_back({{"p", c.p}, {"q", c.q}, {"read_id", s.first_read}});
    }
    const fs::path dir(o.out);
    const json config = options_json("factor", o);
    write_file(dir / "model.json", dump(model_file_json(inst.layout, inst.model)));
    write_file(dir / "samples.csv", sampleset_csv(set));
    json side = sampleset_sidecar(set, cfg);
    side["anneal"] = side["config"];
    side["command"] = "factor";
    side["config"] = config;
    write_file(dir / "samples.json", dump(side));
    write_file(dir / "excitations.csv", excitation_csv(report));
    const json summary{{"command", "factor"},
                       {"config", config},
                       {"N", o.N},
                       {"zero_energy_reads", zero},
                       {"slack_reads", slack},
                       {"reads_without_broken_chain", report.reads_without_broken_chain()},
                       {"reads_without_excited_cfa", report.reads_without_excited_cfa()},
                       {"min_energy", set.min_energy()},
                       {"factors", decoded}};
    write_file(dir / "report.json", dump(summary));

    std::cout << "N=" << o.N << " method=" << o.method << " zero-energy reads " << zero << "/" << set.num_reads()
              << ", slack reads " << slack << '\n';
    for (const auto& [p, q] : factors) std::cout << "  " << o.N << " = " << p << " x " << q << '\n';
    return zero > 0 ? 0 : 1;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t k = v.size() / 2;
    return v.size() % 2 ? v[k] : (v[k - 1] + v[k]) / 2.0;
}

int cmd_sweep(const Options& o) {
    if (o.out.empty()) throw UsageError("sweep needs --out");
    if (o.selection != "fixed" && o.selection != "pairs") throw UsageError("--selection must be fixed or pairs");
    const auto graph = build_pegasus(kPegasusSize);
    const auto lib = load_library(o, graph);
    const auto mode = o.selection == "fixed" ? InstanceMode::FixedLargest : InstanceMode::AllPairs;
    const auto method = parse_method(o.method);
    const auto aopt = apply_options(o, lib, graph);

    std::ostringstream rows, summary;
    rows << "size,n,m,N,p,q,c,reads,ground,no_broken_chain,no_excited_cfa\n";
    summary << "size,c,metric,min,median,max\n";
    std::uint64_t run = 0;
    for (const auto& size : o.sizes) {
        const auto [n, m] = parse_size(size);
        const auto instances = select_instances(n, m, o.count, mode);
        for (double c : o.c_list) {
            const auto built = build_multiplier(n, m, graph, lib, c);
            std::vector<double> ground, unbroken, unexcited;
            for (const auto& fi : instances) {
                const auto inst = apply_problem(built.layout, built.model, fi.N, method, aopt);
                const auto set = sample_sa(inst.model, anneal_config(o, derive_seed(o.seed, run++)));
                const auto r = excitation_stats(inst.layout, inst.model, set);
                rows << size << ',' << n << ',' << m << ',' << fi.N << ',' << fi.p << ',' << fi.q << ','
                     << format_double(c) << ',' << r.num_reads << ',' << r.zero_energy_reads() << ','
                     << r.reads_without_broken_chain() << ',' << r.reads_without_excited_cfa() << '\n';
                ground.push_back(static_cast<double>(r.zero_energy_reads()));
                unbroken.push_back(static_cast<double>(r.reads_without_broken_chain()));
                unexcited.push_back(static_cast<double>(r.reads_without_excited_cfa()));
            }
            auto emit = [&](const char* metric, const std::vector<double>& v) {
                if (v.empty()) return;
                summary << size << ',' << format_double(c) << ',' << metric << ','
                        << format_double(*std::min_element(v.begin(), v.end())) << ',' << format_double(median(v))
                        << ',' << format_double(*std::max_element(v.begin(), v.end())) << '\n';
            };
            emit("ground", ground);
            emit("no_broken_chain", unbroken);
            emit("no_excited_cfa", unexcited);
            std::cerr << size << " c=" << c << " done\n";
        }
    }
    const fs::path dir(o.out);
    write_file(dir / "sweep.csv", rows.str());
    write_file(dir / "summary.csv", summary.str());
    write_file(dir / "sweep.json", dump({{"command", "sweep"}, {"config", options_json("sweep", o)}}));
    std::cout << "wrote " << (dir / "sweep.csv").string() << " and " << (dir / "summary.csv").string() << '\n';
    return 0;
}

int cmd_remedy(const Options& o) {
    if (o.N == 0) throw UsageError("remedy needs --N");
    if (o.out.empty()) throw UsageError("remedy needs --out");
    const auto graph = build_pegasus(kPegasusSize);
    const auto lib = load_library(o, graph);
    const auto built = build_multiplier(o.n, o.m, graph, lib, o.chain_strength);
    const auto inst = apply_problem(built.layout, built.model, o.N, parse_method(o.method), apply_options(o, lib, graph));
    const int threshold = o.threshold > 0 ? o.threshold : default_remedy_threshold(o.n, o.m);
    const auto result = remedy_loop(inst.layout, inst.model, anneal_config(o, o.seed), o.delta, threshold);
    json j = result.to_json();
    j["command"] = "remedy";
    j["config"] = options_json("remedy", o);
    j["threshold"] = threshold;
    j["model_digest"] = model_digest(inst.model);
    write_file(fs::path(o.out) / "remedy.json", dump(j));
    for (const auto& s : result.history)
        std::cout << "iteration " << s.iteration << " best energy " << format_double(s.best_energy)
                  << " most excited (" << s.most_excited.first << ", " << s.most_excited.second << ") x"
                  << s.most_excited_count << '\n';
    std::cout << (result.reached_ground ? "reached ground state" : "threshold reached") << " after "
              << result.iterations_used << " iterations\n";
    return result.reached_ground ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Prime factoring with annealed multiplier circuits"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--out", o.out, "Output file (synth) or directory");
        sub->add_option("--seed", o.seed, "Master seed (QFA_SEED overrides)");
        sub->add_option("--threads", o.threads, "Sampler threads")->check(CLI::PositiveNumber);
        sub->add_option("--library", o.library, "CFA library file from synth");
    };
    auto sampling = [&](CLI::App* sub) {
        sub->add_option("--method", o.method, "api, adhoc, chain or flux")
            ->check(CLI::IsMember({"api", "adhoc", "chain", "flux"}));
        sub->add_option("--chain-variant", o.chain_variant, "Extra chaining variant: direct or neighbor");
        sub->add_option("--reads", o.reads, "Reads per run")->check(CLI::PositiveNumber);
        sub->add_option("--sweeps", o.sweeps, "Sweeps per read")->check(CLI::PositiveNumber);
    };
    auto instance = [&](CLI::App* sub) {
        sub->add_option("--n", o.n, "Bits of the first factor")->check(CLI::Range(2, 31));
        sub->add_option("--m", o.m, "Bits of the second factor")->check(CLI::Range(2, 31));
        sub->add_option("--N", o.N, "Number to factor");
        sub->add_option("--chain-strength", o.chain_strength, "Chain strength c")->check(CLI::PositiveNumber);
    };

    auto* synth = app.add_subcommand("synth", "Synthesize and verify the CFA library");
    common(synth);
    auto* factor = app.add_subcommand("factor", "Factor one number");
    common(factor);
    sampling(factor);
    instance(factor);
    auto* sweep = app.add_subcommand("sweep", "Chain-strength sweep over biprime instances");
    common(sweep);
    sampling(sweep);
    sweep->add_option("--sizes", o.sizes, "Multiplier sizes such as 3x3 4x4");
    sweep->add_option("--c", o.c_list, "Chain strengths");
    sweep->add_option("--count", o.count, "Instances per size");
    sweep->add_option("--selection", o.selection, "fixed (largest prime times the largest primes) or pairs");
    auto* remedy = app.add_subcommand("remedy", "Incremental anneal-offset remedy");
    common(remedy);
    sampling(remedy);
    instance(remedy);
    remedy->add_option("--delta", o.delta, "Offset step")->check(CLI::PositiveNumber);
    remedy->add_option("--threshold", o.threshold, "Iteration cap (default 2(n+m))");

    try {
        std::vector<std::string> args(argv + 1, argv + argc);
        args = expand_config(args);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    if (const char* env = std::getenv("QFA_SEED")) {
        try {
            o.seed = std::stoull(env);
        } catch (const std::exception&) {
            std::cerr << "error: QFA_SEED must be an unsigned integer\n";
            return 2;
        }
    }

    try {
        if (synth->parsed()) return cmd_synth(o);
        if (factor->parsed()) return cmd_factor(o);
        if (sweep->parsed()) return cmd_sweep(o);
        return cmd_remedy(o);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
