#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "properties.hpp"
#include "reldev/bandwidth.hpp"
#include "reldev/errors.hpp"

using namespace reldev;

TEST_CASE("candidate grids") {
    CvConfig cfg;
    cfg.policy = BandwidthGrid::Full;
    const auto full = bandwidth_candidates(200, cfg);
    REQUIRE(full.size() == 100);
    CHECK(full.front() == doctest::Approx(1.0 / 200));
    CHECK(full.back() == doctest::Approx(0.5));
    cfg.policy = BandwidthGrid::Thinned;
    const auto thin = bandwidth_candidates(1000, cfg);
    CHECK(thin.size() == 60);
    CHECK(thin.front() == doctest::Approx(2.0 / 1000));
    CHECK(thin.back() == 0.5);
    CHECK(std::is_sorted(thin.begin(), thin.end()));
    cfg.policy = BandwidthGrid::Auto;
    CHECK(bandwidth_candidates(500, cfg).size() == 250);
    CHECK(bandwidth_candidates(501, cfg).size() == 60);
    cfg.candidates = {0.3, 0.1, 0.3};
    CHECK(bandwidth_candidates(500, cfg) == std::vector<double>{0.1, 0.3});
    cfg.candidates = {0.7};
    CHECK_THROWS_AS(bandwidth_candidates(500, cfg), ArgumentError);
}

TEST_CASE("partition") {
    const auto sets = cv_partition(103, 10, 42);
    REQUIRE(sets.size() == 10);
    std::vector<std::size_t> all;
    for (const auto& s : sets) {
        CHECK((s.size() == 10 || s.size() == 11));
        all.insert(all.end(), s.begin(), s.end());
    }
    std::sort(all.begin(), all.end());
    for (std::size_t i = 0; i < all.size(); ++i) {
        CHECK(all[i] == i + 1);
    }
    CHECK(cv_partition(103, 10, 42) == sets);
    CHECK(cv_partition(103, 10, 43) != sets);
    CHECK_THROWS_AS(cv_partition(5, 10, 1), ArgumentError);
    CHECK_THROWS_AS(cv_partition(50, 1, 1), ArgumentError);
}

TEST_CASE("affine data ties go to the largest bandwidth") {
    const TimeSeries x = props::affine_series(200, 1.0, -2.0);
    CvConfig cfg;
    cfg.candidates = {0.05, 0.1, 0.2, 0.3, 0.5};
    const CvResult r = cross_validate_bandwidth(x, Kernel::quartic(), cfg);
    CHECK(r.bandwidth == 0.5);
    for (const CvEntry& e : r.table) {
        CHECK(e.feasible);
        CHECK(e.mse <= 1e-20);
    }
    const std::vector<CvEntry> table{{0.1, 1.0, true}, {0.2, 1.0 + 1e-14, true}, {0.3, 0.5, false}};
    CHECK(*best_bandwidth(table) == 0.2);
    CHECK(*best_bandwidth(table, 0.1) == 0.2);
    CHECK_FALSE(best_bandwidth(table, 0.2).has_value());
}

TEST_CASE("selected bandwidth minimizes the table and is deterministic") {
    std::mt19937_64 rng(6);
    std::normal_distribution<double> z(0.0, 0.5);
    std::vector<double> v(300);
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = std::sin(2.0 * std::numbers::pi * (i + 1) / 300.0) + z(rng);
    }
    const TimeSeries x(v);
    const CvResult a = cross_validate_bandwidth(x, Kernel::quartic());
    const CvResult b = cross_validate_bandwidth(x, Kernel::quartic());
    CHECK(a.bandwidth == b.bandwidth);
    double best = INFINITY;
    double best_h = 0.0;
    for (const CvEntry& e : a.table) {
        if (e.feasible && e.mse < best) {
            best = e.mse;
            best_h = e.bandwidth;
        }
    }
    CHECK(a.bandwidth == best_h);
    // Smallest candidates leave fewer than 4 points in the narrow window.
    CHECK_FALSE(a.table.front().feasible);
}

TEST_CASE("score includes the 1 / (1 - h) factor") {
    std::mt19937_64 rng(7);
    const TimeSeries x = props::gaussian_series(120, rng);
    CvConfig cfg;
    cfg.candidates = {0.25};
    cfg.seed = 5;
    const CvResult r = cross_validate_bandwidth(x, Kernel::quartic(), cfg);
    double sse = 0.0;
    for (const auto& held : cv_partition(120, 10, 5)) {
        const auto pred = cv_fold_predictions(x, Kernel::quartic(), 0.25, held);
        for (std::size_t i = 0; i < held.size(); ++i) {
            sse += std::pow(x.at(held[i]) - pred[i], 2);
        }
    }
    CHECK(r.table[0].mse == doctest::Approx(sse / 0.75).epsilon(1e-12));
}

TEST_CASE("cv bandwidth responds to the trend") {
    int upper = 0;
    int small = 0;
    const int reps = 40;
    for (int r = 0; r < reps; ++r) {
        std::mt19937_64 rng(1000 + r);
        std::normal_distribution<double> z;
        std::vector<double> noise(500);
        std::vector<double> wave(500);
        for (std::size_t i = 0; i < 500; ++i) {
            noise[i] = 2.0 + z(rng);
            wave[i] = std::sin(8.0 * std::numbers::pi * (i + 1) / 500.0) + 0.5 * z(rng);
        }
        CvConfig cfg;
        cfg.seed = 10 + r;
        cfg.policy = BandwidthGrid::Thinned;
        const auto grid = bandwidth_candidates(500, cfg);
        const double h_noise = cross_validate_bandwidth(TimeSeries(noise), Kernel::quartic(), cfg).bandwidth;
        const auto index = std::find(grid.begin(), grid.end(), h_noise) - grid.begin();
        upper += static_cast<std::size_t>(index) >= grid.size() / 2;
        small += cross_validate_bandwidth(TimeSeries(wave), Kernel::quartic(), cfg).bandwidth < 0.125;
    }
    CHECK(upper > reps / 2);
    CHECK(small > reps / 2);
}

TEST_CASE("fold leakage") {
    const auto r = props::fold_leakage(31, 60);
    CHECK(r.cases >= 50);
    CHECK(r.failures == 0);
}

TEST_CASE("too short for cross-validation") {
    CHECK_THROWS_AS(cross_validate_bandwidth(TimeSeries(std::vector<double>(39, 1.0)), Kernel::quartic()),
                    ArgumentError);
}
