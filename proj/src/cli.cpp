#include "reldev/cli.hpp"

#include <cstdio>
#include <fstream>
#include <optional>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "reldev/bandwidth.hpp"
#include "reldev/errors.hpp"
#include "reldev/io.hpp"
#include "reldev/limit_law.hpp"
#include "reldev/lrv.hpp"
#include "reldev/selfnorm.hpp"
#include "reldev/simulation.hpp"

namespace reldev {

namespace {

struct SeriesOptions {
    std::string input;
    std::string column;
    std::string time_column;

    void add(CLI::App* cmd) {
        cmd->add_option("--input", input, "CSV file with the series")->required();
        cmd->add_option("--column", column, "column name or 0-based index (default: last)");
        cmd->add_option("--time-column", time_column, "time column, checked for equal spacing only");
    }

    LoadedSeries load(std::ostream& err) const {
        LoadedSeries s = load_series_csv(SeriesFile{input, column, time_column});
        for (const std::string& w : s.warnings) {
            err << "warning: " << w << '\n';
        }
        return s;
    }
};

struct ModelOptions {
    std::string benchmark = "constant:0";
    std::string tau = "lebesgue";
    std::string bandwidth = "cv";
    std::string kernel = "quartic";
    std::size_t folds = 10;
    std::uint64_t cv_seed = CvConfig{}.seed;
    std::string grid = "auto";

    void add(CLI::App* cmd) {
        cmd->add_option("--benchmark", benchmark, "constant:c | window:t0,t1 | point:t | linear:file");
        cmd->add_option("--tau", tau, "lebesgue | window:t0,t1[,scale]");
        cmd->add_option("--bandwidth", bandwidth, "h in (0, 1/2] or cv");
        cmd->add_option("--kernel", kernel, "quartic | epanechnikov | triweight");
        cmd->add_option("--folds", folds, "cross-validation folds");
        cmd->add_option("--cv-seed", cv_seed, "cross-validation split seed");
        cmd->add_option("--cv-grid", grid, "auto | full | thinned")->check(CLI::IsMember({"auto", "full", "thinned"}));
    }

    void apply(TestConfig& cfg) const {
        cfg.benchmark = parse_benchmark(benchmark);
        cfg.tau = parse_tau(tau);
        cfg.kernel = Kernel::by_name(kernel);
        cfg.cv.folds = folds;
        cfg.cv.seed = cv_seed;
        cfg.cv.policy = grid == "full" ? BandwidthGrid::Full
                        : grid == "thinned" ? BandwidthGrid::Thinned
                                            : BandwidthGrid::Auto;
        if (bandwidth != "cv") {
            std::size_t used = 0;
            try {
                cfg.bandwidth = std::stod(bandwidth, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != bandwidth.size()) {
                throw ArgumentError("bandwidth must be a number or cv");
            }
        }
    }
};

struct LawOptions {
    std::string nu = "default";
    std::size_t paths = 100000;
    std::size_t grid = 1000;
    std::uint64_t seed = kDefaultLimitSeed;
    std::string cache;

    void add(CLI::App* cmd) {
        cmd->add_option("--nu", nu, "default | discrete:l1,... | uniform:zeta[,m] | JSON file");
        cmd->add_option("--paths", paths, "Monte-Carlo paths of the limit law");
        cmd->add_option("--grid", grid, "Brownian grid size of the limit law");
        cmd->add_option("--seed", seed, "limit-law seed");
        cmd->add_option("--cache", cache, "quantile cache file");
    }

    void apply(TestConfig& cfg) const {
        cfg.nu = parse_nu(nu);
        cfg.law_paths = paths;
        cfg.law_grid_size = grid;
        cfg.law_seed = seed;
        cfg.law_cache = cache;
    }
};

void write_json(const nlohmann::json& j, const std::string& file, std::ostream& out) {
    out << j.dump(2) << '\n';
    if (!file.empty()) {
        std::ofstream f(file);
        if (!f) {
            throw DataError("cannot write " + file);
        }
        f << j.dump(2) << '\n';
    }
}

std::string number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Relevant-deviation tests for the trend of a locally stationary series", "reldev"};
    app.require_subcommand(1);

    // test
    CLI::App* test = app.add_subcommand("test", "run the self-normalized or LRV test on a series");
    SeriesOptions test_series;
    ModelOptions test_model;
    LawOptions test_law;
    double delta = 0.0;
    double alpha = 0.05;
    std::size_t block = kDefaultBlockWidth;
    double block_cover = TestConfig{}.min_block_cover;
    std::string method = "sn";
    std::string json_out;
    LrvConfig lrv;
    test_series.add(test);
    test_model.add(test);
    test_law.add(test);
    test->add_option("--delta", delta, "relevance threshold")->required();
    test->add_option("--alpha", alpha, "level");
    test->add_option("--block", block, "block width b_n");
    test->add_option("--block-cover", block_cover, "CV floor: blocks per narrow half-window (0: off)");
    test->add_option("--method", method, "sn | lrv")->check(CLI::IsMember({"sn", "lrv"}));
    test->add_option("--json-out", json_out, "also write the JSON outcome here");
    test->add_option("--lrv-window", lrv.window, "LRV window half-width m (0: n^(2/3))");
    test->add_option("--lrv-block", lrv.sub_block, "LRV sub-block length l (0: n^(1/3))");

    // simulate
    CLI::App* sim = app.add_subcommand("simulate", "rejection-rate experiment from a scenario file");
    std::string scenario_file;
    std::size_t reps = 1000;
    std::uint64_t sim_seed = 1;
    std::string sim_out;
    std::string sim_log;
    sim->add_option("--scenario", scenario_file, "scenario JSON")->required();
    sim->add_option("--reps", reps, "replications");
    sim->add_option("--seed", sim_seed, "experiment seed");
    sim->add_option("--out", sim_out, "CSV file the result row is appended to");
    sim->add_option("--log", sim_log, "per-replication JSON log");

    // cv
    CLI::App* cv = app.add_subcommand("cv", "cross-validated bandwidth and MSE table");
    SeriesOptions cv_series;
    ModelOptions cv_model;
    std::string cv_out;
    cv_series.add(cv);
    cv->add_option("--kernel", cv_model.kernel, "quartic | epanechnikov | triweight");
    cv->add_option("--folds", cv_model.folds, "folds");
    cv->add_option("--cv-seed", cv_model.cv_seed, "split seed");
    cv->add_option("--cv-grid", cv_model.grid, "auto | full | thinned")
        ->check(CLI::IsMember({"auto", "full", "thinned"}));
    cv->add_option("--out", cv_out, "CSV file for the MSE table (default: stdout)");

    // quantile
    CLI::App* qcmd = app.add_subcommand("quantile", "critical value of the limit law");
    LawOptions q_law;
    double q_alpha = 0.05;
    q_law.add(qcmd);
    qcmd->add_option("--alpha", q_alpha, "level");

    // export-fit
    CLI::App* fit = app.add_subcommand("export-fit", "fitted trend, benchmark and deviation as CSV");
    SeriesOptions fit_series;
    ModelOptions fit_model;
    std::string fit_out;
    fit_series.add(fit);
    fit_model.add(fit);
    fit->add_option("--out", fit_out, "output CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kExitOk;
        }
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    try {
        if (*test) {
            const LoadedSeries data = test_series.load(err);
            TestConfig cfg;
            test_model.apply(cfg);
            test_law.apply(cfg);
            cfg.delta = delta;
            cfg.alpha = alpha;
            cfg.block_width = block;
            cfg.min_block_cover = block_cover;
            const TestOutcome o = method == "lrv" ? run_lrv_test(data.series, cfg, lrv) : run_test(data.series, cfg);
            nlohmann::json j = outcome_to_json(o, cfg);
            j["config"]["input"] = test_series.input;
            j["config"]["column"] = test_series.column;
            j["config"]["bandwidth"] = test_model.bandwidth;
            j["config"]["method"] = method;
            if (method == "lrv") {
                j["config"]["lrv_window"] = lrv.window;
                j["config"]["lrv_block"] = lrv.sub_block;
            }
            for (const std::string& w : data.warnings) {
                j["warnings"].push_back(w);
            }
            write_json(j, json_out, out);
        } else if (*sim) {
            const Scenario s = load_scenario(scenario_file);
            const ExperimentResult r = rejection_rate_experiment(s, reps, sim_seed);
            if (!sim_out.empty()) {
                append_result_csv(sim_out, s, r, sim_seed);
            }
            nlohmann::json j = {{"schema", 1},    {"scenario", s.source}, {"id", s.id},
                                {"method", s.method}, {"n", s.n},        {"delta", s.test.delta},
                                {"rate", r.rate}, {"se", r.se},           {"reps", r.reps},
                                {"rejections", r.rejections}, {"failures", r.failures},
                                {"seed", sim_seed}, {"wall_seconds", r.wall_seconds}};
            write_json(j, {}, out);
            if (!sim_log.empty()) {
                nlohmann::json log = nlohmann::json::array();
                for (const ReplicationLog& e : r.log) {
                    log.push_back({{"rep", e.rep},           {"seed", e.seed},         {"ok", e.ok},
                                   {"reject", e.reject},     {"bandwidth", e.bandwidth}, {"error", e.error}});
                }
                std::ofstream f(sim_log);
                if (!f) {
                    throw DataError("cannot write " + sim_log);
                }
                f << nlohmann::json{{"schema", 1}, {"id", s.id}, {"replications", log}}.dump(2) << '\n';
            }
        } else if (*cv) {
            const LoadedSeries data = cv_series.load(err);
            TestConfig cfg;
            cv_model.apply(cfg);
            const CvResult r = cross_validate_bandwidth(data.series, cfg.kernel, cfg.cv);
            std::vector<std::vector<double>> rows;
            for (const CvEntry& e : r.table) {
                rows.push_back({e.bandwidth, e.mse, e.feasible ? 1.0 : 0.0});
            }
            const std::vector<std::string> comments = {
                "input=" + cv_series.input, "column=" + cv_series.column, "kernel=" + cfg.kernel.name(),
                "folds=" + std::to_string(cfg.cv.folds), "cv_seed=" + std::to_string(cfg.cv.seed),
                "grid=" + cv_model.grid, "selected=" + number(r.bandwidth)};
            if (cv_out.empty()) {
                for (const std::string& c : comments) {
                    out << "# " << c << '\n';
                }
                out << "bandwidth,mse,feasible\n";
                for (const auto& row : rows) {
                    out << number(row[0]) << ',' << number(row[1]) << ',' << number(row[2]) << '\n';
                }
            } else {
                write_csv(cv_out, {"bandwidth", "mse", "feasible"}, rows, comments);
                out << nlohmann::json{{"schema", 1}, {"bandwidth", r.bandwidth}, {"out", cv_out}}.dump(2) << '\n';
            }
        } else if (*qcmd) {
            TestConfig cfg;
            q_law.apply(cfg);
            if (!(q_alpha > 0.0 && q_alpha < 1.0)) {
                throw ArgumentError("alpha must lie in (0, 1)");
            }
            const RatioSampler s = cfg.sampler();
            const auto law = cached_ratio_law(s, cfg.law_cache);
            nlohmann::json j = {{"schema", 1},       {"nu", s.nu.fingerprint()}, {"grid", s.grid_size},
                                {"paths", s.n_paths}, {"seed", s.seed},         {"alpha", q_alpha},
                                {"key", s.fingerprint()}, {"cache", q_law.cache},
                                {"critical_value", law->critical_value(q_alpha)}};
            write_json(j, {}, out);
        } else if (*fit) {
            const LoadedSeries data = fit_series.load(err);
            TestConfig cfg;
            fit_model.apply(cfg);
            const auto [h, source] = resolve_bandwidth(data.series, cfg);
            const TimeSeries& x = data.series;
            const LocalLinearSmoother smoother = full_smoother(x, cfg.kernel);
            const double ghat = estimate_benchmark(cfg.benchmark, smoother, h);
            const std::vector<double> grid = design_grid(x.size());
            const std::vector<double> curve = jackknife_curve(smoother, h, grid);
            std::vector<std::vector<double>> rows;
            for (std::size_t i = 0; i < grid.size(); ++i) {
                rows.push_back({grid[i], curve[i], ghat, curve[i] - ghat});
            }
            write_csv(fit_out, {"t", "mu_tilde", "g_hat", "d_hat"}, rows,
                      {"input=" + fit_series.input, "column=" + fit_series.column,
                       "benchmark=" + cfg.benchmark.describe(), "kernel=" + cfg.kernel.name(),
                       "bandwidth=" + number(h), "bandwidth_source=" + source});
            out << nlohmann::json{{"schema", 1}, {"bandwidth", h}, {"bandwidth_source", source}, {"out", fit_out}}
                       .dump(2)
                << '\n';
        }
    } catch (const DataError& e) {
        err << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const NumericError& e) {
        err << "numeric error: " << e.what() << '\n';
        return kExitData;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitOk;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"reldev"};
    for (const std::string& a : args) {
        argv.push_back(a.c_str());
    }
    return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace reldev
