#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "doctest.h"
#include "reference.hpp"
#include "tritherm/csv.hpp"

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run cli(std::vector<std::string> args) {
    args.insert(args.begin(), "tritherm");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = tritherm::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

bool has(const std::string& text, const std::string& needle) { return text.find(needle) != std::string::npos; }

std::string file_text(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const std::string fig2 = ref::config_path("fig2.json");

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("steady") {
    const Run r = cli({"steady", "--config", fig2});
    CHECK(r.code == 0);
    CHECK(has(r.out, "Q_L = "));
    CHECK(has(r.out, "p8 = "));
    CHECK(has(r.out, "secular ratio"));
}

TEST_CASE("steady at equal temperatures") {
    const Run r = cli({"steady", "--config", fig2, "--set", "bath.L.temperature=0.1", "--set",
                       "bath.R.temperature=0.1"});
    CHECK(r.code == 0);
    CHECK(has(r.out, "sum = "));
}

TEST_CASE("exit codes") {
    const Run singular = cli({"steady", "--config", fig2, "--set", "bath.L.gamma=0", "--set", "bath.M.gamma=0",
                              "--set", "bath.R.gamma=0"});
    CHECK(singular.code == tritherm::cli::kExitNumerical);
    CHECK(has(singular.err, "SingularSteadyState"));
    CHECK(cli({"steady", "--config", fig2, "--set", "device.omega_M=0.3"}).code == tritherm::cli::kExitUsage);
    CHECK(cli({"steady", "--config", "/nonexistent.json"}).code == tritherm::cli::kExitUsage);
    CHECK(cli({"steady"}).code == tritherm::cli::kExitUsage);
    CHECK(cli({"steady", "--config", fig2, "--bogus"}).code == tritherm::cli::kExitUsage);
    CHECK(cli({}).code == tritherm::cli::kExitUsage);
    CHECK(cli({"sweep", "--config", fig2}).code == tritherm::cli::kExitUsage);  // --out is required
    CHECK(cli({"valve", "--config", fig2, "--range", "1:0:5"}).code == tritherm::cli::kExitUsage);
    CHECK(cli({"stabilizer", "--config", fig2, "--terminal", "Q"}).code == tritherm::cli::kExitUsage);
}

TEST_CASE("every subcommand documents its flags") {
    const std::vector<std::pair<std::string, std::vector<std::string>>> expected{
        {"steady", {}},
        {"sweep", {}},
        {"amplifier", {"--range", "--step"}},
        {"valve", {"--range"}},
        {"rectify", {"--delta-t", "--two-terminal", "--range"}},
        {"stabilizer", {"--range", "--terminal"}},
        {"switch", {"--range", "--epsilon"}},
        {"validate", {"--seed", "--draws"}},
    };
    for (const auto& [sub, flags] : expected) {
        const Run r = cli({sub, "--help"});
        CHECK(r.code == 0);
        for (const char* common : {"--config", "--set", "--out", "--threads"}) CHECK(has(r.out, common));
        for (const auto& f : flags) CHECK(has(r.out, f));
    }
    const Run top = cli({"--help"});
    for (const auto& [sub, flags] : expected) CHECK(has(top.out, sub));
}

TEST_CASE("valve on Fig. 4(a)") {
    const Run r = cli({"valve", "--config", ref::config_path("fig4a.json")});
    CHECK(r.code == 0);
    CHECK(has(r.out, "Q_R = 0 at T_M = 0.07"));
    CHECK(has(r.out, "Q_M = 0 at T_M = 0.22"));
    CHECK(has(r.out, "Q_L = 0 at T_M = 0.51"));
}

TEST_CASE("two-terminal rectifier") {
    const Run r = cli({"rectify", "--config", ref::config_path("fig5bc.json"), "--two-terminal", "--delta-t", "0.45"});
    CHECK(r.code == 0);
    CHECK(has(r.out, "two-terminal"));
    CHECK(has(r.out, "R = 0.99"));
    const Run zero = cli({"rectify", "--config", ref::config_path("fig5bc.json"), "--delta-t", "0"});
    CHECK(zero.code == tritherm::cli::kExitNumerical);
    CHECK(has(zero.err, "BothCurrentsZero"));
}

TEST_CASE("rectifier scan finds the Fig. 5(a) sign change") {
    const Run r = cli({"rectify", "--config", ref::config_path("fig5a.json"), "--range", "-0.4:0.4:81"});
    CHECK(r.code == 0);
    CHECK(has(r.out, "Q_R changes sign near delta_T = -0.1"));
}

TEST_CASE("amplifier across a plateau flags points and still succeeds") {
    const auto out = ref::scratch("amp.csv");
    const Run r = cli({"amplifier", "--config", fig2, "--range", "0:0.5:11", "--out", out.string()});
    CHECK(r.code == 0);
    CHECK(has(r.err, "warning"));
    const tritherm::CsvTable t = tritherm::read_csv(out.string());
    REQUIRE(t.rows.size() == 11);
    CHECK(t.rows[0].back() == "DegenerateDenominator");
    CHECK(t.rows[5].back() == "ok");
}

TEST_CASE("switch, stabilizer") {
    const Run sw = cli({"switch", "--config", fig2});
    CHECK(sw.code == 0);
    CHECK(has(sw.out, "T_M <= 0.01"));
    const Run none = cli({"switch", "--config", fig2, "--epsilon", "1e-9"});
    CHECK(none.code == 0);
    CHECK(has(none.out, "none"));
    const Run st = cli({"stabilizer", "--config", ref::config_path("fig3a.json"), "--range", "0:0.8:21"});
    CHECK(st.code == 0);
    CHECK(has(st.out, "flatness"));
}

TEST_CASE("sweep writes a deterministic CSV") {
    const auto a = ref::scratch("sweep-a.csv"), b = ref::scratch("sweep-b.csv");
    const std::string cfg = ref::config_path("fig4a.json");
    CHECK(cli({"sweep", "--config", cfg, "--set", "sweep.count=30", "--out", a.string(), "--threads", "1"}).code == 0);
    CHECK(cli({"sweep", "--config", cfg, "--set", "sweep.count=30", "--out", b.string(), "--threads", "3"}).code == 0);
    const std::string text = file_text(a);
    CHECK(text == file_text(b));
    CHECK(has(text, "# config sweep.count=30"));
    CHECK(tritherm::read_csv(a.string()).rows.size() == 30);
}

TEST_CASE("validate") {
    const Run r = cli({"validate", "--config", fig2, "--draws", "5"});
    CHECK(r.code == 0);
    CHECK(has(r.out, "0 failed"));
    const Run again = cli({"validate", "--config", fig2, "--draws", "5"});
    CHECK(again.out == r.out);
    const Run other = cli({"validate", "--config", fig2, "--draws", "5", "--seed", "1"});
    CHECK(other.out != r.out);
    const Run damped = cli({"validate", "--config", fig2, "--draws", "2", "--set", "bath.L.gamma=0.1", "--set",
                            "bath.M.gamma=0.1", "--set", "bath.R.gamma=0.1"});
    CHECK(damped.code == 0);
    CHECK(has(damped.out, "WARN  secular"));
}

}  // TEST_SUITE
