#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace {

std::string cli_path() {
    const char* p = std::getenv("HNLS_CLI");
    REQUIRE_MESSAGE(p != nullptr, "HNLS_CLI must point at the CLI binary");
    return p;
}

struct RunResult {
    int code = -1;
    std::string out;
};

RunResult run(const std::string& args) {
    const std::string tmp = "cli_test_stdout.tmp";
    const std::string cmd = cli_path() + " " + args + " > " + tmp + " 2> cli_test_stderr.tmp";
    const int raw = std::system(cmd.c_str());
    RunResult r;
    r.code = WEXITSTATUS(raw);
    std::ifstream f(tmp, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    r.out = ss.str();
    return r;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    f << text;
}

const char* kInitField =
    R"([{"j":0,"k":0,"re":0.3,"im":0.0},{"j":1,"k":0,"re":-0.1,"im":0.2},{"j":0,"k":-1,"re":0.0,"im":0.15}])";

}  // namespace

TEST_CASE("--version and usage errors") {
    const auto v = run("--version");
    CHECK(v.code == 0);
    CHECK(v.out.find("hnls") != std::string::npos);
    CHECK(run("").code == 2);                       // no subcommand
    CHECK(run("frobnicate").code == 2);             // unknown subcommand
    CHECK(run("count").code == 2);                  // missing required --radius
    CHECK(run("count --radius 4 --bogus 1").code == 2);
}

TEST_CASE("count is deterministic and emits valid JSON") {
    const std::string args = "count --radius 4 --samples 50 --seed 7";
    const auto a = run(args);
    const auto b = run(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    const auto j = nlohmann::json::parse(a.out);
    CHECK(j.contains("max_ratio"));
    CHECK(j["witness"].contains("count"));
    CHECK(j["radius"] == 4);
    CHECK(j["seed"] == 7);
    // different seed changes the payload
    CHECK(run("count --radius 4 --samples 50 --seed 8").out != a.out);
    // non-power-of-two radius is a config error
    CHECK(run("count --radius 5 --samples 10").code == 2);
}

TEST_CASE("config file sections, unknown keys, and flag precedence") {
    write_file("cli_cfg.json", R"({"count": {"radius": 4, "samples": 50, "seed": 7}})");
    const auto from_cfg = run("--config cli_cfg.json count");
    REQUIRE(from_cfg.code == 0);
    CHECK(from_cfg.out == run("count --radius 4 --samples 50 --seed 7").out);
    // command line wins over the config value
    const auto override_seed = run("--config cli_cfg.json count --seed 9");
    CHECK(override_seed.out == run("count --radius 4 --samples 50 --seed 9").out);
    // unknown keys and sections are usage errors
    write_file("cli_bad1.json", R"({"count": {"radius": 4, "wat": 1}})");
    CHECK(run("--config cli_bad1.json count").code == 2);
    write_file("cli_bad2.json", R"({"mystery": {}})");
    CHECK(run("--config cli_bad2.json count --radius 4").code == 2);
    write_file("cli_bad3.json", "not json");
    CHECK(run("--config cli_bad3.json count --radius 4").code == 2);
}

TEST_CASE("simulate emits JSON-lines records and honors --out") {
    write_file("cli_init.json", kInitField);
    const auto r = run("simulate --init cli_init.json --radius 2 --dt 0.01 --T 0.05 --record-every 1");
    REQUIRE(r.code == 0);
    std::istringstream lines(r.out);
    std::string line;
    int count = 0;
    double prev_t = -1.0;
    while (std::getline(lines, line)) {
        const auto j = nlohmann::json::parse(line);
        CHECK(j.contains("t"));
        CHECK(j.contains("field_ref"));
        CHECK(j.contains("mass"));
        CHECK(j.contains("hamiltonian"));
        CHECK(j.contains("fl_norms"));
        CHECK(j.contains("field"));
        CHECK(double(j["t"]) > prev_t);
        prev_t = j["t"];
        ++count;
    }
    CHECK(count == 6);  // t = 0 plus 5 steps

    const auto rf = run("simulate --init cli_init.json --radius 2 --dt 0.01 --T 0.05 --out cli_sim.out");
    REQUIRE(rf.code == 0);
    CHECK(rf.out.empty());
    std::ifstream f("cli_sim.out", std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    CHECK(ss.str() == r.out);

    // missing init file is a usage/config error
    CHECK(run("simulate --init cli_nope.json --radius 2").code == 2);
}

TEST_CASE("simulate flags blow-up with exit code 3") {
    write_file("cli_blow.json", R"([{"j":0,"k":0,"re":990000.0,"im":0.0}])");
    const auto r = run("simulate --init cli_blow.json --radius 1 --dt 0.1 --T 1.0");
    CHECK(r.code == 3);
    CHECK(r.out.find("\"blow_up\":true") != std::string::npos);
}

TEST_CASE("nf-compare runs and reports distances") {
    write_file("cli_init.json", kInitField);
    const auto r = run("nf-compare --init cli_init.json --radius 2 --T 0.02 --steps 4 --Jmax 2 --p 1.25");
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["distances"].size() == 5);
    CHECK(j.contains("sup_distance"));
    CHECK(j["convergence"]["converged"] == true);
    CHECK(run("nf-compare --init cli_init.json --radius 2 --Jmax 1").code == 2);
}

TEST_CASE("illpose CSV output and guards") {
    const auto r = run("illpose --s 0 --p 2 --t 0.5 --N 8,16,32");
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("N,norm\n", 0) == 0);
    CHECK(r.out.find("slope,") != std::string::npos);
    CHECK(r.out.find("expected,1\n") != std::string::npos);
    CHECK(run("illpose --N 8,16").code == 2);
    CHECK(run("illpose --t 0 --N 8,16,32").code == 2);
}

TEST_CASE("probe emits the threshold-scan CSV and the modulation-sum CSV") {
    const auto r = run("probe --p 2 --s-list 0.25,0.5 --radii 1,2,4 --sigma0-range 8");
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("p,s,radius,sup_value,slope,classification\n", 0) == 0);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 7);
    CHECK(run("probe --p 2").code == 2);  // missing s-list/radii

    const auto m = run("probe --p 1.25 --msum-j 2 --msum-K 1 --msum-alpha-radius 1000");
    REQUIRE(m.code == 0);
    CHECK(m.out.rfind("j,K,p,alpha_radius,S_value,bound\n", 0) == 0);
}
