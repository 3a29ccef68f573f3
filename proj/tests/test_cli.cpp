#include "pmme/cli.hpp"
#include "pmme/config.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct Run {
    int status;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "pmme");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int status = pmme::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {status, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const char* base = std::getenv("PMME_TEST_TMP");
    fs::path dir = fs::path(base ? base : fs::temp_directory_path().string()) / ("pmme_cli_" + name);
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

} // namespace

TEST_CASE("coeffs prints the table and writes json") {
    const auto dir = scratch("coeffs");
    const auto r = run({"coeffs", "--out", dir.string()});
    REQUIRE(r.status == 0);
    CHECK(r.out.find("psi1") != std::string::npos);
    CHECK(r.out.find("3.4641") != std::string::npos);
    CHECK(r.out.find("75") != std::string::npos);
    const auto j = nlohmann::json::parse(slurp(dir / "coeffs.json"));
    CHECK(j["psi"]["psi1"].get<double>() == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(j["B1"].get<double>() == doctest::Approx(1.5 * std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("estimate from a given moment") {
    const auto dir = scratch("estimate");
    const auto r = run({"estimate", "--mbar", "0.5", "--out", dir.string()});
    REQUIRE(r.status == 0);
    CHECK(r.out.find("0.5236") != std::string::npos);
    const auto j = nlohmann::json::parse(slurp(dir / "estimate.json"));
    CHECK(j["theta_hat"].get<double>() == doctest::Approx(std::asin(0.5)).epsilon(1e-10));
    CHECK(j["clamped"] == "none");
}

TEST_CASE("dump-config round trips with overrides") {
    const auto r = run({"coeffs", "--n", "77", "--seed", "5", "--model", "gaussian", "--dump-config"});
    REQUIRE(r.status == 0);
    const auto c = pmme::parse_config(r.out);
    CHECK(c.n == 77);
    CHECK(c.seed == 5);
    CHECK(c.model.name == "gaussian");

    const auto dir = scratch("dump");
    fs::create_directories(dir);
    {
        std::ofstream f(dir / "config.json");
        f << r.out;
    }
    const auto again = run({"coeffs", "--config", (dir / "config.json").string(), "--dump-config"});
    REQUIRE(again.status == 0);
    CHECK(again.out == r.out);
}

TEST_CASE("errors produce a record and no artifacts") {
    const auto dir = scratch("error");
    const auto r = run({"coeffs", "--theta0", "5", "--out", dir.string()});
    CHECK(r.status == 1);
    const auto j = nlohmann::json::parse(r.err);
    CHECK(j["error"]["kind"] == "configuration");
    CHECK(!j["error"]["message"].get<std::string>().empty());
    CHECK_FALSE(fs::exists(dir / "coeffs.json"));

    const auto usage = run({"coeffs", "--bogus"});
    CHECK(usage.status == 2);
    CHECK(nlohmann::json::parse(usage.err)["error"]["kind"] == "usage");
    CHECK(run({}).status == 2);
    CHECK(run({"estimate", "--mbar", "abc"}).status == 2);
}

TEST_CASE("small simulation and condition runs") {
    const auto dir = scratch("sim");
    const auto s = run({"simulate", "--n", "3", "--replications", "2", "--out", dir.string()});
    REQUIRE(s.status == 0);
    const auto csv = slurp(dir / "paths.csv");
    CHECK(csv.rfind("replication,path_index,event_time\n", 0) == 0);

    const auto c = run({"check-conditions", "--out", dir.string()});
    REQUIRE(c.status == 0);
    CHECK(nlohmann::json::parse(slurp(dir / "conditions.json"))["all_pass"] == true);

    const auto v = run({"validate-cdf", "--n", "50", "--N", "200", "--workers", "1", "--out", dir.string()});
    REQUIRE(v.status == 0);
    CHECK(v.out.find("KS vs normal") != std::string::npos);
    CHECK(fs::exists(dir / "cdf.csv"));
    CHECK(nlohmann::json::parse(slurp(dir / "report.json"))["N"] == 200);
}
