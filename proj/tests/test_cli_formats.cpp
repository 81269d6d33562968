// Copyright 2026 The sizebias Authors.
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

// End-to-end checks of the command-line front end: exit codes, literal
// validation, and byte-identical reruns for fixed seeds.

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

namespace {

struct CliResult {
    int exit_code = -1;
    std::string out;
};

CliResult run_cli(const std::string& args) {
    const std::string cmd = std::string(SIZEBIAS_CLI_PATH) + " " + args + " 2>/dev/null";
    std::array<char, 4096> buf{};
    CliResult res;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (std::fgets(buf.data(), buf.size(), pipe)) res.out += buf.data();
    const int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("no arguments prints usage and exits 2") {
    const CliResult r = run_cli("");
    CHECK(r.exit_code == 2);
}

TEST_CASE("bias subcommand applies the catalogue") {
    const CliResult r =
        run_cli(R"(bias --dist '{"kind":"family","name":"beta","params":{"a":1,"b":1}}')");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("beta(a=1, b=2)") != std::string::npos);
}

TEST_CASE("malformed literals exit 2 with a diagnostic") {
    CHECK(run_cli("bias --dist '{\"kind\":\"nope\"}'").exit_code == 2);
    CHECK(run_cli("bias --dist 'not-json'").exit_code == 2);
    CHECK(run_cli("deconv --dist '{\"kind\":\"family\",\"name\":\"poisson\",\"params\":{}}'")
              .exit_code == 2);
    CHECK(run_cli("levy --nu '{\"c\":-1}' --seed 1").exit_code == 2);
}

TEST_CASE("dickman evaluation prints the tabulated value") {
    const CliResult r = run_cli("dickman --umax 3 --h 0.001 --eval 2");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("rho(2) = 0.30685") != std::string::npos);
}

TEST_CASE("buchstab evaluation prints the tabulated value") {
    const CliResult r = run_cli("buchstab --umax 3 --h 0.001 --eval 2.5");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("omega(2.5) = 0.562186") != std::string::npos);
}

TEST_CASE("deconv prints a NEGATIVE certificate for the binomial") {
    const CliResult r =
        run_cli(R"(deconv --dist '{"kind":"family","name":"binomial","params":{"n":4,"p":0.3}}')");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("NEGATIVE") != std::string::npos);
}

TEST_CASE("seeded runs produce byte-identical output files") {
    const std::string f1 = "/tmp/sizebias_cli_test_1.json";
    const std::string f2 = "/tmp/sizebias_cli_test_2.json";
    const std::string args = R"(levy --nu '{"c":0,"atoms":[[1,0.5],[2,0.25]]}' --seed 9 --n 2000 --out )";
    CHECK(run_cli(args + f1).exit_code == 0);
    CHECK(run_cli(args + f2).exit_code == 0);
    const std::string a = slurp(f1), b = slurp(f2);
    CHECK(!a.empty());
    CHECK(a == b);
    std::remove(f1.c_str());
    std::remove(f2.c_str());
}

TEST_CASE("midzuno subcommand reports bias fields") {
    const std::string csv = "/tmp/sizebias_cli_pop.csv";
    {
        std::ofstream out(csv);
        out << "x,y\n1,1\n2,4\n5,0\n";
    }
    const CliResult r = run_cli("midzuno --pop " + csv + " --m 2 --scheme srs");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"bias\"") != std::string::npos);
    CHECK(r.out.find("\"true_ratio\"") != std::string::npos);
    const CliResult m = run_cli("midzuno --pop " + csv + " --m 2");
    CHECK(m.exit_code == 0);
    CHECK(m.out.find("\"exact_enumeration\": true") != std::string::npos);
    std::remove(csv.c_str());
}

TEST_CASE("literals can come from @file references") {
    const std::string lit = "/tmp/sizebias_cli_dist.json";
    {
        std::ofstream out(lit);
        out << R"({"kind":"family","name":"exponential","params":{"alpha":2}})";
    }
    const CliResult r = run_cli("bias --dist @" + lit);
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("gamma(alpha=2, t=2)") != std::string::npos);
    CHECK(run_cli("bias --dist @/tmp/definitely_missing_file.json").exit_code == 2);
    std::remove(lit.c_str());
}

TEST_CASE("bias subcommand honors --format csv") {
    const CliResult r = run_cli(
        R"(bias --dist '{"kind":"family","name":"poisson","params":{"lambda":2}}' --format csv)");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("input,biased,descriptor") != std::string::npos);
}

TEST_CASE("renewal subcommand emits CSV rows") {
    const CliResult r = run_cli(
        R"(renewal --dist '{"kind":"family","name":"exponential","params":{"alpha":1}}' --seed 3 --n 2000 --t 0.5)");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("t,mean_W,se,ks_stat") != std::string::npos);
    CHECK(r.out.find("0.5,") != std::string::npos);
}
