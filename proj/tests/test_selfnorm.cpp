#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "reldev/errors.hpp"
#include "reldev/selfnorm.hpp"
#include "reldev/simulation.hpp"

using namespace reldev;

namespace {

const RatioLaw& test_law() {
    static const RatioLaw law = [] {
        RatioSampler s;
        s.n_paths = 20000;
        s.grid_size = 500;
        return make_ratio_law(s);
    }();
    return law;
}

TimeSeries mu2_series(std::size_t n, double noise, std::uint64_t seed) {
    ErrorSpec e;
    e.seed = seed;
    TimeSeries base = simulate_series(MeanSpec::mu2(), e, n);
    std::vector<double> v(n);
    for (std::size_t i = 1; i <= n; ++i) {
        const double mean = eval_mean(MeanSpec::mu2(), static_cast<double>(i) / n);
        v[i - 1] = mean + noise * (base.at(i) - mean);
    }
    return TimeSeries(std::move(v));
}

}  // namespace

TEST_CASE("self-normalizer") {
    const NuMeasure nu = NuMeasure::standard();
    const DistancePath flat({0.2, 0.4, 0.6, 0.8, 1.0}, {0.7, 0.7, 0.7, 0.7, 0.7});
    CHECK(self_normalizer(flat, nu) == 0.0);
    const DistancePath linear({0.2, 0.4, 0.6, 0.8, 1.0}, {0.2, 0.4, 0.6, 0.8, 1.0});
    // 0.25 * (0.2 * 0.8 + 0.4 * 0.6 + 0.6 * 0.4 + 0.8 * 0.2)
    CHECK(self_normalizer(linear, nu) == doctest::Approx(0.2).epsilon(1e-14));

    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 2.0);
    const NuMeasure weighted = NuMeasure::discrete({0.3, 0.5, 0.9}, {1.0, 2.0, 1.0});
    std::vector<double> vals{u(rng), u(rng), u(rng), u(rng)};
    const DistancePath path({0.3, 0.5, 0.9, 1.0}, vals);
    const double direct = 0.25 * 0.3 * std::abs(vals[0] - vals[3]) + 0.5 * 0.5 * std::abs(vals[1] - vals[3]) +
                          0.25 * 0.9 * std::abs(vals[2] - vals[3]);
    CHECK(self_normalizer(path, weighted) == doctest::Approx(direct).epsilon(1e-14));
    CHECK_THROWS_AS(self_normalizer(linear, weighted), ConfigError);
}

TEST_CASE("continuous nu normalizer") {
    const NuMeasure nu = NuMeasure::continuous_uniform(0.2, 17);
    std::vector<double> lambdas = nu.path_lambdas();
    lambdas.push_back(1.0);
    std::vector<double> vals;
    for (double l : lambdas) {
        vals.push_back(1.0 + l);
    }
    // Average of l (1 - l) over [0.2, 1].
    const double exact = (0.5 * (1 - 0.04) - (1 - 0.008) / 3.0) / 0.8;
    CHECK(self_normalizer(DistancePath(lambdas, vals), nu) == doctest::Approx(exact).epsilon(2e-3));
}

TEST_CASE("argument checks") {
    const TimeSeries x = mu2_series(200, 1.0, 1);
    TestConfig cfg;
    cfg.bandwidth = 0.1;
    cfg.delta = 0.0;
    CHECK_THROWS_AS(run_test(x, cfg, test_law()), ArgumentError);
    cfg.delta = 1.0;
    cfg.alpha = 1.0;
    CHECK_THROWS_AS(run_test(x, cfg, test_law()), ArgumentError);
    cfg.alpha = 0.05;
    CHECK_THROWS_AS(run_test(TimeSeries(std::vector<double>(30, 1.0)), cfg, test_law()), ArgumentError);
    cfg.block_width = 0;
    CHECK_THROWS_AS(run_test(x, cfg, test_law()), ArgumentError);
}

TEST_CASE("noiseless alternative is rejected") {
    const TimeSeries x = mu2_series(5000, 0.0, 1);
    TestConfig cfg;
    cfg.benchmark = BenchmarkFunctional::constant(10.0);
    cfg.delta = 1.0;
    cfg.bandwidth = 0.05;
    const TestOutcome o = run_test(x, cfg, test_law());
    CHECK(o.reject);
    CHECK(o.d_hat_sq_full == doctest::Approx(1.9375).epsilon(5e-3));
    CHECK(o.p_value < 0.05);
    CHECK(o.method == "sn");
}

TEST_CASE("null side never rejects and delta is monotone") {
    const TimeSeries x = mu2_series(600, 1.0, 3);
    TestConfig cfg;
    cfg.benchmark = BenchmarkFunctional::constant(10.0);
    cfg.bandwidth = 0.1;
    cfg.delta = 5.0;
    const TestOutcome far = run_test(x, cfg, test_law());
    CHECK(far.d_hat_sq_full <= 25.0);
    CHECK_FALSE(far.reject);
    double last_p = 0.0;
    for (double delta : {0.5, 1.0, 1.3, 1.4, 1.5, 2.0}) {
        cfg.delta = delta;
        const TestOutcome o = run_test(x, cfg, test_law());
        CHECK(o.p_value >= last_p);
        last_p = o.p_value;
        CHECK(o.reject == (o.p_value < cfg.alpha));
    }
}

TEST_CASE("cross-validated bandwidth respects the block floor") {
    const TimeSeries x = mu2_series(500, 1.0, 5);
    TestConfig cfg;
    cfg.benchmark = BenchmarkFunctional::constant(10.0);
    cfg.delta = 1.39;
    const double floor = bandwidth_floor(500, cfg);
    CHECK(floor == doctest::Approx(std::sqrt(2.0) * 2.0 * 20.0 / 500.0));
    const TestOutcome o = run_test(x, cfg, test_law());
    CHECK(o.bandwidth_source == "cv");
    CHECK(o.bandwidth >= floor - 1e-12);
    cfg.min_block_cover = 0.0;
    CHECK(bandwidth_floor(500, cfg) == 0.0);
    cfg.min_block_cover = 100.0;
    CHECK(bandwidth_floor(500, cfg) == 0.5);
}

TEST_CASE("outcome json") {
    const TimeSeries x = mu2_series(400, 1.0, 9);
    TestConfig cfg;
    cfg.benchmark = BenchmarkFunctional::constant(10.0);
    cfg.bandwidth = 0.12;
    cfg.delta = 1.39;
    const TestOutcome o = run_test(x, cfg, test_law());
    const auto j = outcome_to_json(o, cfg);
    CHECK(j["schema"] == 1);
    CHECK(j["method"] == "sn");
    CHECK(j["config"]["benchmark"] == "constant:10");
    CHECK(j["config"]["block_width"] == 20);
    CHECK(j["path"]["lambda"].size() == 5);
    CHECK(j["bandwidth"] == 0.12);
    bool warned = false;
    for (const auto& w : o.warnings) {
        warned = warned || w.find("500") != std::string::npos;
    }
    CHECK(warned);
}
