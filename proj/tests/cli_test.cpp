#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rico/json_io.hpp"
#include "support/test_support.hpp"

namespace fs = std::filesystem;

namespace {

std::string cli() {
    const char* path = std::getenv("RICO_CLI");
    REQUIRE_MESSAGE(path != nullptr, "RICO_CLI must point at the rico binary");
    return path;
}

fs::path workdir() {
    const fs::path dir = fs::temp_directory_path() / "rico_cli_test";
    fs::create_directories(dir);
    return dir;
}

int run(const std::string& args, const fs::path& stdout_to = {}) {
    std::string cmd = cli() + " " + args;
    if (!stdout_to.empty()) cmd += " > " + stdout_to.string();
    cmd += " 2>/dev/null";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << text;
}

const std::string kSmallTiers =
    R"({"tiers":[{"e2_count":1},{"e2_count":1},{"e2_count":2}]})";

} // namespace

TEST_CASE("gen writes a valid instance and is byte-deterministic") {
    const fs::path dir = workdir();
    write(dir / "tiers.json", kSmallTiers);
    const std::string tiers = (dir / "tiers.json").string();

    REQUIRE(run("gen --cns 4 --seed 7 --out " + (dir / "a.json").string() + " --tiers " + tiers) == 0);
    REQUIRE(run("gen --cns 4 --seed 7 --out " + (dir / "b.json").string() + " --tiers " + tiers) == 0);
    CHECK(slurp(dir / "a.json") == slurp(dir / "b.json"));

    const rico::Instance in = rico::instance_from_json(slurp(dir / "a.json"));
    CHECK(rico::validate_instance(in).empty());
    CHECK(in.compute_nodes.size() == 5);
    CHECK(in.e2_nodes.size() == 4);
}

TEST_CASE("gen rejects impossible CN counts with a usage error") {
    const fs::path dir = workdir();
    CHECK(run("gen --cns 600 --seed 1 --out " + (dir / "x.json").string()) == 2);
    CHECK(run("gen --seed 1") == 2); // missing required flags
}

TEST_CASE("solve heuristic and exact emit summary lines and files") {
    const fs::path dir = workdir();
    write(dir / "tiers.json", kSmallTiers);
    REQUIRE(run("gen --cns 4 --seed 7 --out " + (dir / "i.json").string() + " --tiers " +
                (dir / "tiers.json").string()) == 0);

    REQUIRE(run("solve --strategy heuristic --in " + (dir / "i.json").string() + " --out " +
                    (dir / "h.json").string(),
                dir / "h.csv") == 0);
    const std::string line = slurp(dir / "h.csv");
    CHECK(line.rfind("heuristic,", 0) == 0);
    CHECK(line.find(",true,") != std::string::npos);

    const rico::Instance in = rico::instance_from_json(slurp(dir / "i.json"));
    const rico::Solution sol = rico::solution_from_json(slurp(dir / "h.json"), in);
    CHECK(rico::check_feasible(in, sol).empty());

    REQUIRE(run("solve --strategy exact --budget 60 --in " + (dir / "i.json").string() + " --out " +
                    (dir / "e.json").string(),
                dir / "e.csv") == 0);
    CHECK(slurp(dir / "e.csv").rfind("exact,", 0) == 0);
}

TEST_CASE("solve race reports both strategies and the applied one") {
    const fs::path dir = workdir();
    write(dir / "tiers.json", kSmallTiers);
    REQUIRE(run("gen --cns 4 --seed 7 --out " + (dir / "i.json").string() + " --tiers " +
                (dir / "tiers.json").string()) == 0);
    REQUIRE(run("solve --strategy race --budget 30 --in " + (dir / "i.json").string() + " --out " +
                    (dir / "race.json").string(),
                dir / "race.csv") == 0);
    const std::string out = slurp(dir / "race.csv");
    CHECK(out.find("heuristic,") != std::string::npos);
    CHECK(out.find("exact,") != std::string::npos);
    CHECK(out.find("race,") != std::string::npos);
    const std::string report = slurp(dir / "race.json");
    CHECK(report.find("\"applied\"") != std::string::npos);
}

TEST_CASE("solve exits 3 on infeasible instances") {
    const fs::path dir = workdir();
    const rico::Instance bad = rico_test::TestInstance{}
                                   .cloud()
                                   .e2("n1")
                                   .xapp("x1", 10)
                                   .lat("n1", "c0", 6)
                                   .build();
    write(dir / "bad.json", rico::instance_to_json(bad));
    CHECK(run("solve --strategy heuristic --in " + (dir / "bad.json").string()) == 3);
    CHECK(run("solve --strategy exact --budget 10 --in " + (dir / "bad.json").string()) == 3);
}

TEST_CASE("compare emits the frozen column set and is byte-deterministic") {
    const fs::path dir = workdir();
    write(dir / "tiers.json", kSmallTiers);
    const std::string common = "compare --cns-list 2,3 --seed 7 --budget 5 --tiers " +
                               (dir / "tiers.json").string();
    REQUIRE(run(common + " --out " + (dir / "c1.csv").string()) == 0);
    REQUIRE(run(common + " --out " + (dir / "c2.csv").string()) == 0);
    const std::string csv = slurp(dir / "c1.csv");
    CHECK(csv == slurp(dir / "c2.csv"));
    CHECK(csv.rfind("n_cns,strategy,cost,elapsed_s,e2t_instances,xapp_instances,status\n", 0) == 0);
    // one exact and one heuristic row per point
    CHECK(csv.find("2,exact,") != std::string::npos);
    CHECK(csv.find("2,heuristic,") != std::string::npos);
    CHECK(csv.find("3,exact,") != std::string::npos);
    CHECK(csv.find("3,heuristic,") != std::string::npos);
}

TEST_CASE("compare without a cns list is a usage error") {
    CHECK(run("compare --seed 7") == 2);
}

TEST_CASE("simulate writes deterministic trace files with the milestone events") {
    const fs::path dir = workdir();
    write(dir / "tiers.json", kSmallTiers);
    REQUIRE(run("gen --cns 4 --seed 7 --out " + (dir / "i.json").string() + " --tiers " +
                (dir / "tiers.json").string()) == 0);
    write(dir / "sim.json", R"({"scenario":{"e2":"n4","at":150.0,"added_ms":10.0}})");

    const std::string base = "simulate --scenario spike --in " + (dir / "i.json").string() +
                             " --config " + (dir / "sim.json").string();
    REQUIRE(run(base + " --out-dir " + (dir / "t1").string()) == 0);
    REQUIRE(run(base + " --out-dir " + (dir / "t2").string()) == 0);
    CHECK(slurp(dir / "t1/events.jsonl") == slurp(dir / "t2/events.jsonl"));
    CHECK(slurp(dir / "t1/samples.csv") == slurp(dir / "t2/samples.csv"));
    CHECK(slurp(dir / "t1/manifest.json") == slurp(dir / "t2/manifest.json"));

    const std::string events = slurp(dir / "t1/events.jsonl");
    CHECK(events.find("\"OptimizationTrigger\"") != std::string::npos);
    CHECK(events.find("\"RedeployStarted\"") != std::string::npos);
    CHECK(events.find("\"LoopSatisfied\"") != std::string::npos);
    CHECK(slurp(dir / "t1/samples.csv").rfind("time,e2,xapp,loop_latency_ms\n", 0) == 0);
}

TEST_CASE("simulate crash scenario hits the node-down path") {
    const fs::path dir = workdir();
    write(dir / "tiers.json", kSmallTiers);
    REQUIRE(run("gen --cns 4 --seed 7 --out " + (dir / "i.json").string() + " --tiers " +
                (dir / "tiers.json").string()) == 0);
    write(dir / "sim.json", R"({"scenario":{"at":30.0}})");
    REQUIRE(run("simulate --scenario crash --in " + (dir / "i.json").string() + " --config " +
                    (dir / "sim.json").string() + " --out-dir " + (dir / "crash").string()) == 0);
    const std::string events = slurp(dir / "crash/events.jsonl");
    CHECK(events.find("\"NodeDownDetected\"") != std::string::npos);
}

TEST_CASE("unknown flags exit with the usage code") {
    CHECK(run("frobnicate") == 2);
    CHECK(run("solve --strategy sideways --in nowhere.json") == 2);
}
