/*
   Copyright 2026 the hsa authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <json.hpp>

namespace {

using json = nlohmann::json;

struct CmdResult {
    int exit_code = -1;
    std::string output;
};

/* Runs the installed binary with the given arguments, capturing stdout (and
   stderr when merge_stderr is set) and the process exit code. */
CmdResult run_cli(const std::string& args, bool merge_stderr = true) {
    const std::string cmd =
        std::string(HSA_CLI_PATH) + " " + args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CmdResult res;
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) res.output.append(buf, n);
    const int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

std::string write_config(const std::string& name, const std::string& body) {
    const std::string path = "/tmp/hsa_cli_" + name + ".json";
    std::ofstream out(path);
    out << body;
    return path;
}

std::vector<json> parse_lines(const std::string& text) {
    std::vector<json> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) rows.push_back(json::parse(line));
    return rows;
}

}  // namespace

TEST_CASE("constants command reproduces the closed fixture constants") {
    const CmdResult res = run_cli("constants --preset paper-fixture");
    CHECK(res.exit_code == 0);
    const json rep = json::parse(res.output);
    CHECK(rep["A"].get<double>() == doctest::Approx(16.0).epsilon(1e-12));
    CHECK(rep["B"].get<double>() == doctest::Approx(32.0).epsilon(1e-12));
    CHECK(rep["X"].get<double>() == doctest::Approx(16.0).epsilon(1e-12));
    CHECK(rep["Y"].get<double>() == doctest::Approx(32.0).epsilon(1e-12));
    CHECK(rep["Z"].get<double>() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(rep["alpha"].get<double>() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(rep["M"].get<double>() == doctest::Approx(32.0 * std::sqrt(2.0)).epsilon(1e-12));
    CHECK(rep["meas"].get<double>() == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(rep["g_norm"].get<double>() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(rep["tail"].get<double>() == doctest::Approx(2.0).epsilon(1e-12));

    const CmdResult csv = run_cli("constants --preset paper-fixture --format csv");
    CHECK(csv.exit_code == 0);
    CHECK(csv.output.rfind("A,B,X,Y,Z,alpha,M,meas,g_norm,tail\n", 0) == 0);
}

TEST_CASE("constants command restricted to the quadrant cone scales the measure") {
    const std::string cfg = write_config(
        "quadrant",
        R"({"body":{"preset":"cube","dim":2},"cone":{"generators":[[1,0],[0,1]]},)"
        R"("weight":{"type":"power","gamma":0.5},"p":"inf","h":1.0})");
    const CmdResult res = run_cli("constants --config " + cfg);
    CHECK(res.exit_code == 0);
    const json rep = json::parse(res.output);
    CHECK(rep["A"].get<double>() == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(rep["B"].get<double>() == doctest::Approx(8.0).epsilon(1e-12));
    CHECK(rep["meas"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("stechkin command emits a strictly decreasing budget grid") {
    const std::string cfg = write_config(
        "stechkin",
        R"({"body":{"preset":"cube","dim":2},"cone":"full",)"
        R"("weight":{"type":"power","gamma":0.5},"p":"inf","N":[16,32,64]})");
    const CmdResult res = run_cli("stechkin --config " + cfg);
    CHECK(res.exit_code == 0);
    const std::vector<json> rows = parse_lines(res.output);
    REQUIRE(rows.size() == 3);
    const double expected[][3] = {{16.0, 4.0, 32.0}, {32.0, 1.0, 16.0}, {64.0, 0.25, 8.0}};
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i]["N"].get<double>() == doctest::Approx(expected[i][0]).epsilon(1e-12));
        CHECK(rows[i]["h_N"].get<double>() == doctest::Approx(expected[i][1]).epsilon(1e-9));
        CHECK(rows[i]["E_N"].get<double>() == doctest::Approx(expected[i][2]).epsilon(1e-9));
    }

    const CmdResult csv = run_cli("stechkin --config " + cfg + " --format csv");
    CHECK(csv.exit_code == 0);
    CHECK(csv.output.rfind("N,h_N,E_N\n", 0) == 0);
}

TEST_CASE("apply command evaluates built-in fields at given points") {
    const std::string cfg = write_config(
        "apply",
        R"({"body":{"preset":"cube","dim":2},"cone":"full",)"
        R"("weight":{"type":"power","gamma":0.5},"p":"inf","h":1.0,)"
        R"("apply":{"field":"psi","mode":"full","points":[[0,0]]}})");
    const CmdResult res = run_cli("apply --config " + cfg);
    CHECK(res.exit_code == 0);
    const std::vector<json> rows = parse_lines(res.output);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0]["value"].get<double>() == doctest::Approx(32.0).epsilon(1e-6));
    CHECK(rows[0]["converged"].get<bool>());

    const std::string czero = write_config(
        "apply_const",
        R"({"body":{"preset":"cube","dim":2},"cone":"full",)"
        R"("weight":{"type":"power","gamma":0.5},"p":"inf","h":1.0,)"
        R"("apply":{"field":"constant","value":3.5,"mode":"full","points":[[0.25,-0.5]]}})");
    const CmdResult zres = run_cli("apply --config " + czero);
    CHECK(zres.exit_code == 0);
    const std::vector<json> zrows = parse_lines(zres.output);
    REQUIRE(zrows.size() == 1);
    CHECK(zrows[0]["value"].get<double>() == 0.0);
}

TEST_CASE("verify command passes the fixture battery with byte-identical reruns") {
    const CmdResult first = run_cli("verify --preset paper-fixture --seed 42", false);
    const CmdResult second = run_cli("verify --preset paper-fixture --seed 42", false);
    CHECK(first.exit_code == 0);
    CHECK(second.exit_code == 0);
    CHECK(first.output == second.output);

    const std::vector<json> rows = parse_lines(first.output);
    CHECK(rows.size() >= 8);
    for (const json& row : rows) {
        CAPTURE(row.dump());
        CHECK(row["pass"].get<bool>());
        CHECK(row.contains("name"));
        CHECK(row.contains("lhs"));
        CHECK(row.contains("rhs"));
        CHECK(row.contains("ratio_or_sigma"));
    }
}

TEST_CASE("configuration and infeasibility failures map to distinct exit codes") {
    CHECK(run_cli("constants").exit_code == 2);
    CHECK(run_cli("constants --preset no-such-preset").exit_code == 2);
    CHECK(run_cli("constants --config /does/not/exist.json").exit_code == 2);

    const std::string broken = write_config("broken", "{\"body\":");
    CHECK(run_cli("constants --config " + broken).exit_code == 2);

    /* h and N are mutually exclusive scale fields. */
    const std::string twoscale = write_config(
        "twoscale",
        R"({"body":{"preset":"cube","dim":2},"cone":"full",)"
        R"("weight":{"type":"power","gamma":0.5},"p":"inf","h":1.0,"N":32})");
    CHECK(run_cli("constants --config " + twoscale).exit_code == 2);

    /* gamma = 0.6 with p = 4 violates gamma < 1 - d/p; the diagnostic names
       the condition and the process reports mathematical infeasibility. */
    const std::string infeasible = write_config(
        "infeasible",
        R"({"body":{"preset":"cube","dim":2},"cone":"full",)"
        R"("weight":{"type":"power","gamma":0.6},"p":4,"h":1.0})");
    const CmdResult res = run_cli("constants --config " + infeasible);
    CHECK(res.exit_code == 3);
    CHECK(res.output.find("1 - d/p") != std::string::npos);

    /* A budget at or above a finite full operator norm cannot be met. */
    const std::string bounded = write_config(
        "bounded",
        R"({"body":{"preset":"cube","dim":2},"cone":"full",)"
        R"("weight":{"type":"table","grid":[0.5,1,2],)"
        R"("values":[1.4142135623730951,1,0.25],"tail_exponent":-4.0},)"
        R"("p":"inf","N":1000000})");
    CHECK(run_cli("stechkin --config " + bounded).exit_code == 3);
}
