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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "support.hpp"

#ifdef QFA_CLI_PATH

namespace fs = std::filesystem;
using namespace qfa;

namespace {

const fs::path& workdir() {
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() / "qfa_cli_test";
        fs::remove_all(d);
        fs::create_directories(d);
        std::ofstream(d / "lib.json") << testing::shared_library().to_json().dump();
        return d;
    }();
    return dir;
}

int run(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + " '" + std::string(QFA_CLI_PATH) + "' " + args + " > '" +
                            (workdir() / "stdout.txt").string() + "' 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

std::vector<std::vector<std::string>> parse_csv(const fs::path& p, const std::string& header) {
    std::istringstream in(slurp(p));
    std::string line;
    std::getline(in, line);
    CHECK(line == header);
    const auto width = std::count(header.begin(), header.end(), ',') + 1;
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream f(line);
        std::string cell;
        while (std::getline(f, cell, ',')) cells.push_back(cell);
        CHECK(static_cast<long>(cells.size()) == width);
        rows.push_back(cells);
    }
    return rows;
}

std::string lib() { return "--library '" + (workdir() / "lib.json").string() + "'"; }

}  // namespace

TEST_CASE("cli factor writes parseable, reproducible files") {
    const auto a = workdir() / "factor_a";
    REQUIRE(run("factor --N 35 --n 3 --m 3 --reads 300 --seed 5 " + lib() + " --out '" + a.string() + "'") == 0);
    const auto samples = parse_csv(a / "samples.csv", "read_id,energy,occurrences,spins");
    std::size_t reads = 0;
    for (const auto& r : samples) {
        reads += std::stoul(r[2]);
        CHECK(r[3].find_first_not_of("+-") == std::string::npos);
    }
    CHECK(reads == 300);
    for (const auto& r : parse_csv(a / "excitations.csv", "kind,col,row,count")) CHECK(std::stoul(r[3]) <= 300);
    const auto side = nlohmann::json::parse(slurp(a / "samples.json"));
    CHECK(side.at("config").at("seed") == 5);
    CHECK(side.at("anneal").at("master_seed") == 5);
    CHECK(side.at("anneal").at("num_reads") == 300);
    CHECK(side.at("command") == "factor");
    const auto report = nlohmann::json::parse(slurp(a / "report.json"));
    CHECK(report.at("zero_energy_reads").get<int>() > 0);

    const auto b = workdir() / "factor_b";
    REQUIRE(run("factor --config '" + (a / "samples.json").string() + "' --threads 3 --out '" + b.string() + "'") == 0);
    for (const char* f : {"samples.csv", "excitations.csv", "model.json"}) CHECK(slurp(a / f) == slurp(b / f));

    const auto c = workdir() / "factor_c";
    REQUIRE(run("factor --config '" + (a / "samples.json").string() + "' --out '" + c.string() + "'", "QFA_SEED=6") == 0);
    CHECK(nlohmann::json::parse(slurp(c / "samples.json")).at("anneal").at("master_seed") == 6);
}

TEST_CASE("cli usage and representation errors") {
    CHECK(run("synth") == 2);
    CHECK(run("factor --N 64 --n 3 --m 3 " + lib() + " --out '" + (workdir() / "x").string() + "'") != 0);
    CHECK(run("factor --N 35 --method nope --out x") != 0);
    CHECK(run("") != 0);
}

TEST_CASE("cli sweep row count") {
    const auto d = workdir() / "sweep";
    REQUIRE(run("sweep --sizes 3x3 4x4 --count 2 --reads 20 --sweeps 50 --seed 1 " + lib() + " --out '" + d.string() + "'") == 0);
    const auto rows = parse_csv(d / "sweep.csv", "size,n,m,N,p,q,c,reads,ground,no_broken_chain,no_excited_cfa");
    CHECK(rows.size() == 2 * 3 * 2);
    const auto summary = parse_csv(d / "summary.csv", "size,c,metric,min,median,max");
    CHECK(summary.size() == 2 * 3 * 3);
    const auto side = nlohmann::json::parse(slurp(d / "sweep.json"));
    CHECK(side.at("config").at("c") == std::vector<double>{1.0, 1.5, 2.0});
}

TEST_CASE("cli remedy history") {
    const auto d = workdir() / "remedy";
    run("remedy --N 143 --n 4 --m 4 --reads 30 --sweeps 20 --threshold 3 --seed 2 " + lib() + " --out '" + d.string() + "'");
    const auto j = nlohmann::json::parse(slurp(d / "remedy.json"));
    CHECK(j.at("threshold") == 3);
    CHECK(j.at("iterations_used").get<int>() <= 3);
    for (const auto& s : j.at("history")) {
        CHECK(s.contains("per_cfa"));
        CHECK(s.contains("offsets"));
        CHECK(s.contains("most_excited"));
        CHECK(s.contains("best_energy"));
    }
}

#endif
