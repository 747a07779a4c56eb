#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "mulab/analysis.hpp"
#include "mulab/errors.hpp"

using namespace mulab;
namespace fs = std::filesystem;

namespace {

struct RunResult {
    int code;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    std::string cmd = std::string(MULAB_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    std::array<char, 4096> buf{};
    size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
    int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string data(const std::string& rel) { return std::string(MULAB_DATA_DIR) + "/" + rel; }

fs::path scratch(const std::string& name) {
    fs::path d = fs::temp_directory_path() / ("mulab_test_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

}  // namespace

TEST_CASE("ingest fills and validates coefficients") {
    auto recs = ingest_text(R"({"curves": [{"label": "11a1", "ainvs": [0, -1, 1, -10, -20], "conductor": 11}]})");
    REQUIRE(recs.size() == 1);
    auto at = complete_a_table(recs[0], 20);
    CHECK(at.at(2) == -2);
    CHECK(at.at(3) == -1);
    CHECK(at.at(5) == 1);
    CHECK_THROWS_AS(ingest_text(R"([{"label": "11a1", "ainvs": [0, -1, 1, -10, -20], "conductor": 11, "aplist": {"2": 1}}])"),
                    Error);
    try {
        ingest_text(R"([{"label": "11a1", "ainvs": [0, -1, 1, -10, -20], "conductor": 11, "aplist": {"2": 1}}])");
    } catch (const Error& e) {
        CHECK(e.kind() == "InconsistentAp");
        CHECK(exit_code_for(e) == 3);
    }
    CHECK(ingest_text("[]").empty());
    CHECK_THROWS_AS(ingest_text(R"([{"label": "x", "ainvs": [0, 0, 0, 0, 0], "conductor": 1}])"), Error);
    CHECK_THROWS_AS(ingest_text("not json"), Error);
}

TEST_CASE("config files") {
    auto d = scratch("cfg");
    {
        std::ofstream(d / "a.toml") << "# run settings\n[run]\np = 3\nprecision = 5\nell-bound = 150\nformat = \"table\"\n";
        std::ofstream(d / "b.toml") << "colour = blue\n";
        std::ofstream(d / "c.toml") << "p = three\n";
    }
    RunConfig cfg;
    apply_config_file((d / "a.toml").string(), cfg);
    CHECK(cfg.p == 3);
    CHECK(cfg.precision == 5);
    CHECK(cfg.ell_bound == 150);
    CHECK(cfg.format == "table");
    CHECK(cfg.layers == 3);
    CHECK_THROWS_AS(apply_config_file((d / "b.toml").string(), cfg), Error);
    CHECK_THROWS_AS(apply_config_file((d / "c.toml").string(), cfg), Error);
    fs::remove_all(d);
}

TEST_CASE("analyze output is deterministic and cache-independent") {
    auto d = scratch("cache");
    auto a = run_cli("analyze --curves " + data("curves_11a.json"));
    auto b = run_cli("analyze --curves " + data("curves_11a.json") + " --cache " + (d / "c").string());
    auto c = run_cli("analyze --curves " + data("curves_11a.json") + " --cache " + (d / "c").string());
    auto v = run_cli("analyze --curves " + data("curves_11a.json") + " --cache " + (d / "c").string() + " --verify-cache");
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out == c.out);
    CHECK(a.out == v.out);
    CHECK(v.code == 0);
    auto j = nlohmann::json::parse(a.out);
    REQUIRE(j["curves"].size() == 3);
    CHECK(j["curves"][0]["iwasawa"]["mu"] == 1);
    CHECK(j["curves"][1]["iwasawa"]["mu"] == 2);
    CHECK(j["curves"][2]["iwasawa"]["mu"] == 0);
    CHECK(j["violations"].empty());
    fs::remove_all(d);
}

TEST_CASE("table output carries the assumption flag") {
    auto r = run_cli("analyze --curves " + data("curves_11a.json") + " --format table");
    CHECK(r.code == 0);
    CHECK(r.out.find(kMainConjectureFlag) != std::string::npos);
}

TEST_CASE("exit codes") {
    auto d = scratch("exit");
    std::ofstream(d / "bad.json")
        << R"([{"label": "11a1", "ainvs": [0, -1, 1, -10, -20], "conductor": 11, "aplist": {"2": 1}}])";
    CHECK(run_cli("analyze --curves " + (d / "bad.json").string()).code == 3);
    CHECK(run_cli("analyze --curves " + (d / "missing.json").string()).code == 3);
    std::ofstream(d / "badp.json") << R"([{"label": "11a1", "ainvs": [0, -1, 1, -10, -20], "conductor": 11, "p": 11}])";
    CHECK(run_cli("analyze --curves " + (d / "badp.json").string()).code == 3);
    CHECK(run_cli("analyze --curves " + data("curves_11a.json") + " --format xml").code == 3);
    CHECK(run_cli("analyze --no-such-flag").code == 3);
    fs::remove_all(d);
}

TEST_CASE("lambda-invariants and lift-lab subcommands") {
    auto r = run_cli("lambda-invariants --presentation " + data("presentations/mu_vector_1_1.json"));
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["mu_vector"] == nlohmann::json::array({1, 1}));
    CHECK(j["mu"] == 3);
    auto l = run_cli("lift-lab run " + data("scenarios/s3_p3.json"));
    REQUIRE(l.code == 0);
    CHECK(nlohmann::json::parse(l.out)["status"] == "lifted");
}
