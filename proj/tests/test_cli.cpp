#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "reldev/cli.hpp"
#include "reldev/io.hpp"
#include "reldev/simulation.hpp"

using namespace reldev;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

struct Workspace {
    std::filesystem::path dir;
    std::filesystem::path series;
    Workspace() : dir(std::filesystem::temp_directory_path() / "reldev_test_cli") {
        std::filesystem::remove_all(dir);
        std::filesystem::create_directories(dir);
        series = dir / "mu2.csv";
        ErrorSpec e;
        e.seed = 17;
        const TimeSeries x = simulate_series(MeanSpec::mu2(), e, 600);
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 1; i <= x.size(); ++i) {
            rows.push_back({static_cast<double>(i), x.at(i)});
        }
        write_csv(series, {"t", "value"}, rows);
    }
    ~Workspace() { std::filesystem::remove_all(dir); }
};

}  // namespace

TEST_CASE("usage errors exit 1") {
    CHECK(run({}).code == kExitUsage);
    CHECK(run({"frobnicate"}).code == kExitUsage);
    CHECK(run({"test", "--input", "x.csv"}).code == kExitUsage);
    CHECK(run({"quantile", "--alpha", "2"}).code == kExitUsage);
    const Run help = run({"--help"});
    CHECK(help.code == kExitOk);
    CHECK(help.out.find("export-fit") != std::string::npos);
}

TEST_CASE("data errors exit 2") {
    Workspace w;
    CHECK(run({"test", "--input", (w.dir / "missing.csv").string(), "--delta", "1"}).code == kExitData);
    const auto bad = w.dir / "bad.csv";
    std::ofstream(bad) << "1\n2\nNaN\n";
    const Run r = run({"test", "--input", bad.string(), "--delta", "1"});
    CHECK(r.code == kExitData);
    CHECK(r.err.find("row 3") != std::string::npos);
}

TEST_CASE("quantile is deterministic") {
    const std::vector<std::string> args{"quantile", "--nu", "default", "--alpha", "0.05", "--paths", "20000",
                                        "--grid", "400", "--seed", "5"};
    const Run a = run(args);
    const Run b = run(args);
    REQUIRE(a.code == kExitOk);
    const auto ja = nlohmann::json::parse(a.out);
    const auto jb = nlohmann::json::parse(b.out);
    CHECK(ja["critical_value"] == jb["critical_value"]);
    CHECK(ja["critical_value"].get<double>() > 4.0);
    CHECK(ja["critical_value"].get<double>() < 9.0);
}

TEST_CASE("test subcommand writes a JSON outcome") {
    Workspace w;
    const auto json_out = w.dir / "outcome.json";
    const Run r = run({"test", "--input", w.series.string(), "--column", "value", "--benchmark", "constant:10",
                       "--tau", "lebesgue", "--delta", "1.39", "--alpha", "0.05", "--paths", "20000", "--grid",
                       "400", "--json-out", json_out.string()});
    REQUIRE(r.code == kExitOk);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["schema"] == 1);
    CHECK(j["method"] == "sn");
    CHECK(j["bandwidth_source"] == "cv");
    CHECK(j["config"]["delta"] == 1.39);
    CHECK(j["reject"].is_boolean());
    CHECK(j["d_hat_sq_full"].get<double>() == doctest::Approx(1.9375).epsilon(0.25));
    std::ifstream in(json_out);
    CHECK(nlohmann::json::parse(in) == j);

    const Run lrv = run({"test", "--input", w.series.string(), "--benchmark", "constant:10", "--delta", "1.39",
                         "--bandwidth", "0.1", "--method", "lrv"});
    REQUIRE(lrv.code == kExitOk);
    CHECK(nlohmann::json::parse(lrv.out)["method"] == "lrv");
}

TEST_CASE("cv subcommand prints the table") {
    Workspace w;
    const Run r = run({"cv", "--input", w.series.string(), "--cv-grid", "thinned"});
    REQUIRE(r.code == kExitOk);
    CHECK(r.out.find("# folds=10") != std::string::npos);
    CHECK(r.out.find("bandwidth,mse,feasible") != std::string::npos);
}

TEST_CASE("export-fit round trip") {
    Workspace w;
    const auto out = w.dir / "fit.csv";
    const Run r = run({"export-fit", "--input", w.series.string(), "--benchmark", "constant:10", "--bandwidth",
                       "0.1", "--out", out.string()});
    REQUIRE(r.code == kExitOk);
    const auto table = read_numeric_table(out);
    REQUIRE(table.size() == 600);
    for (const auto& row : table) {
        REQUIRE(row.size() == 4);
        CHECK(row[2] == 10.0);
        CHECK(row[3] == doctest::Approx(row[1] - row[2]).epsilon(1e-15));
    }
    CHECK(table[299][0] == doctest::Approx(0.5));
    CHECK(table[299][1] == doctest::Approx(10.5).epsilon(0.05));
}

TEST_CASE("simulate subcommand") {
    Workspace w;
    const auto scenario = w.dir / "s.json";
    std::ofstream(scenario) << R"({"n": 200, "mean": {"kind": "mu2"}, "benchmark": "constant:10",
        "delta": 60, "bandwidth": 0.15, "law": {"paths": 5000, "grid": 200}})";
    const auto csv = w.dir / "rates.csv";
    const Run r = run({"simulate", "--scenario", scenario.string(), "--reps", "20", "--seed", "4", "--out",
                       csv.string()});
    REQUIRE(r.code == kExitOk);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["id"] == "s");
    CHECK(j["rate"] == 0.0);
    CHECK(std::filesystem::exists(csv));
    std::ofstream(scenario) << R"({"n": 200, "unknown": 1})";
    CHECK(run({"simulate", "--scenario", scenario.string()}).code == kExitUsage);
}
