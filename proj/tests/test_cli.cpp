#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

namespace {

struct Run {
    int code;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(POLYPRIME_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* f = popen(cmd.c_str(), "r");
    REQUIRE(f);
    std::string out;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, f)) > 0) out.append(buf, n);
    int st = pclose(f);
    return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

nlohmann::json json_of(const std::string& args) {
    auto r = run("--format json " + args);
    REQUIRE(r.code == 0);
    return nlohmann::json::parse(r.out);
}

}  // namespace

TEST_CASE("exit codes") {
    CHECK(run("--help").code == 0);
    CHECK(run("").code == 2);
    CHECK(run("frobnicate").code == 2);
    CHECK(run("density --limit 2,2 --nu 1").code == 0);
    CHECK(run("density --a 2 --b 4").code == 3);
    CHECK(run("density --a 2").code == 3);
    CHECK(run("density --a 18 --b 2").code == 3);
    CHECK(run("density --limit 2 --nu 1").code == 3);
    CHECK(run("--format yaml density --limit 2,2 --nu 1").code == 2);
}

TEST_CASE("envelope") {
    auto j = json_of("density --limit 2,2 --nu 1");
    CHECK(j["schema"] == "polyprime/1");
    CHECK(j["command"] == "density");
    CHECK(j.contains("parameters"));
    CHECK(j["timing"]["seconds"].is_number());
    CHECK(j["exact"]["density_over_S"] == "6/5");
    // exact values are strings, never floats
    for (auto& [k, v] : j["exact"].items()) CHECK(v.is_string());
    for (auto& [k, v] : j["numeric"].items()) CHECK(v.is_string());
}

TEST_CASE("density") {
    auto j = json_of("density --a 2 --b 3 --oracle 200,100");
    CHECK(j["data"]["terms"].size() == 4);
    const double d = std::stod(j["numeric"]["density"].get<std::string>());
    const double o = std::stod(j["numeric"]["oracle"].get<std::string>());
    CHECK(std::abs(d - o) < 5e-3);
    auto t = run("density --a 2 --b 3");
    CHECK(t.code == 0);
    CHECK(t.out.find("density") != std::string::npos);
    auto c = run("--format csv density --a 2 --b 3");
    CHECK(c.code == 0);
    CHECK(c.out.find(',') != std::string::npos);
}

TEST_CASE("dependent inputs name the dependency") {
    const std::string cmd = std::string(POLYPRIME_CLI_PATH) + " density --a 2 --b 4 2>&1";
    FILE* f = popen(cmd.c_str(), "r");
    std::string out;
    char buf[512];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, f)) > 0) out.append(buf, n);
    pclose(f);
    CHECK(out.find("dependent") != std::string::npos);
    CHECK(out.find("4") != std::string::npos);
}

TEST_CASE("stephens") {
    auto j = json_of("stephens --nu 1 --prime-bound 100000");
    CHECK(j["command"] == "stephens");
    CHECK(j["numeric"].dump().find("0.5759") != std::string::npos);
}

TEST_CASE("e8 and polyhedral") {
    auto e = json_of("e8 containment");
    CHECK(e["data"]["lattices"] == 132462);
    CHECK(e["data"]["d4sq_per_d8"] == 35);
    auto p = json_of("polyhedral");
    CHECK(p["exact"]["aggregate_over_S"] == "45917201977683407/23712195741520320");
    CHECK(p["exact"]["reference_aggregate_over_S"] == "83568208560360063877/43166735003229880320");
}
