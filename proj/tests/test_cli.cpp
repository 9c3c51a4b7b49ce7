// End-to-end checks of the command-line tool, driving the built binary.

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include <catch2/catch.hpp>

#include <json.hpp>

namespace {

const std::string kCli = QBEL_CLI_PATH;
const std::string kDataDir = QBEL_DATA_DIR;

struct RunResult {
    int exit_code;
    std::string output; // stdout and stderr interleaved
};

RunResult run_cli(const std::string& args) {
    std::string command = kCli + " " + args + " 2>&1";
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string output;
    std::array<char, 4096> buffer{};
    size_t got = 0;
    while ((got = fread(buffer.data(), 1, buffer.size(), pipe)) > 0)
        output.append(buffer.data(), got);
    int status = pclose(pipe);
    return RunResult{WEXITSTATUS(status), output};
}

std::string write_temp(const std::string& name, const std::string& content) {
    std::string path = std::string("/tmp/qbel_cli_test_") + name;
    std::ofstream out(path);
    out << content;
    return path;
}

const std::string kNumericDoc = kDataDir + "/demo_numeric_confidence.json";
const std::string kQualitativeDoc = kDataDir + "/demo_qualitative_confidence.json";

} // namespace

TEST_CASE("fuse renders the deferred redistribution table") {
    RunResult r = run_cli("fuse " + kNumericDoc +
                          " --rule pcr5 --approx deferred --confidence min");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("A        B        A|B      A&B") != std::string::npos);
    CHECK(r.output.find("qmPCR5  L4(0.3)  L2(0.3)  L0(0.8)  L0(1)") != std::string::npos);
    CHECK(r.output.find("quasi-normalized: yes") != std::string::npos);
}

TEST_CASE("fuse shows the deferred conjunctive conflict") {
    RunResult r = run_cli("fuse " + kNumericDoc +
                          " --rule conjunctive --approx deferred --confidence min");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("L2(0.3)") != std::string::npos); // the A&B cell
    CHECK(r.output.find("quasi-normalized: no") != std::string::npos);
}

TEST_CASE("fuse emits parseable json") {
    RunResult r = run_cli("fuse " + kNumericDoc +
                          " --rule pcr5 --approx stepwise --confidence min --format json --trace");
    CHECK(r.exit_code == 0);
    nlohmann::json j = nlohmann::json::parse(r.output);
    CHECK(j["rule"] == "pcr5");
    CHECK(j["fused"]["A"]["index"] == 4);
    CHECK(j["fused"]["B"]["confidence"] == "0.3");
    CHECK(j["quasi_normalized"] == true);
    CHECK(j["trace"].is_array());
    CHECK(!j["trace"].empty());
}

TEST_CASE("fuse output is byte-deterministic") {
    std::string args = "fuse " + kQualitativeDoc + " --rule pcr5 --trace --unicode";
    RunResult first = run_cli(args);
    RunResult second = run_cli(args);
    CHECK(first.exit_code == 0);
    CHECK(first.output == second.output);
    CHECK(first.output.find("A∪B") != std::string::npos);
}

TEST_CASE("validate accepts the demos and reports quasi-normalization") {
    RunResult r = run_cli("validate " + kNumericDoc);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("qm1: ok (quasi-normalized)") != std::string::npos);
    CHECK(r.output.find("qm2: ok (quasi-normalized)") != std::string::npos);
}

TEST_CASE("validate rejects malformed masses with diagnostics") {
    std::string path = write_temp("invalid.json", R"({
        "frame": ["A", "B"],
        "model": "shafer",
        "scale": 5,
        "enrichment": "none",
        "sources": {"s1": {"A&B": "L2", "A": "L{9}"}, "s2": {"A": "L6"}}
    })");
    RunResult r = run_cli("validate " + path);
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("key-not-reduced") != std::string::npos);
    CHECK(r.output.find("index-out-of-range") != std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("syntax errors in documents exit with code 2 and a column") {
    std::string path = write_temp("syntax.json", R"({
        "frame": ["A", "B"],
        "model": "shafer",
        "scale": 5,
        "enrichment": "none",
        "sources": {"s1": {"A&&B": "L2"}, "s2": {"A": "L6"}}
    })");
    RunResult r = run_cli("fuse " + path);
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("column 3") != std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("unreadable files exit with code 1") {
    RunResult r = run_cli("fuse /nonexistent/doc.json");
    CHECK(r.exit_code == 1);
}

TEST_CASE("operation errors exit with code 3") {
    RunResult missing = run_cli("fuse " + kNumericDoc + " --sources qm1,zz");
    CHECK(missing.exit_code == 3);

    std::string path = write_temp("bigframe.json", R"({
        "frame": ["A", "B", "C", "D", "E", "F"],
        "frame_limit": 6,
        "model": "free",
        "scale": 5,
        "enrichment": "none",
        "sources": {"s1": {"A": "L6"}, "s2": {"B": "L6"}}
    })");
    RunResult too_large = run_cli("enumerate " + path);
    CHECK(too_large.exit_code == 3);
    std::remove(path.c_str());
}

TEST_CASE("enumerate lists the constrained hyper-power set") {
    RunResult r = run_cli("enumerate " + kNumericDoc);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("4 elements") != std::string::npos);
    CHECK(r.output.find("EMPTY") != std::string::npos);
    CHECK(r.output.find("A|B") != std::string::npos);

    std::string path = write_temp("free3.json", R"({
        "frame": ["A", "B", "C"],
        "model": "free",
        "scale": 5,
        "enrichment": "none",
        "sources": {"s1": {"A": "L6"}, "s2": {"B": "L6"}}
    })");
    RunResult free3 = run_cli("enumerate " + path);
    CHECK(free3.exit_code == 0);
    CHECK(free3.output.find("19 elements") != std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("belpl prints belief and plausibility") {
    RunResult r = run_cli("belpl " + kNumericDoc + " --source qm1 --prop A --approx stepwise");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("qBel(A) = L1(0.3)") != std::string::npos);
    CHECK(r.output.find("qPl(A) = L4(0.3)") != std::string::npos);

    RunResult bad = run_cli("belpl " + kNumericDoc + " --source qm1 --prop 'A&&'");
    CHECK(bad.exit_code == 2);
}
