#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "reldev/bandwidth.hpp"
#include "reldev/benchmarks.hpp"
#include "reldev/estimation.hpp"
#include "reldev/kernels.hpp"
#include "reldev/limit_law.hpp"
#include "reldev/measures.hpp"
#include "reldev/nu_measure.hpp"

namespace reldev {

inline constexpr std::size_t kMinSampleSize = 40;
inline constexpr std::size_t kWarnSampleSize = 500;

/// Everything the decision rules need besides the data.
struct TestConfig {
    BenchmarkFunctional benchmark = BenchmarkFunctional::constant(0.0);
    TauMeasure tau = TauMeasure::lebesgue();
    NuMeasure nu = NuMeasure::standard();
    double delta = 1.0;
    double alpha = 0.05;
    std::size_t block_width = kDefaultBlockWidth;
    /// Fixed bandwidth; cross-validation when empty.
    std::optional<double> bandwidth;
    /// Cross-validated bandwidths of the self-normalized test are restricted to
    /// h / sqrt 2 >= min_block_cover * b_n / n; 0 leaves the grid untouched.
    double min_block_cover = 2.0;
    CvConfig cv;
    Kernel kernel = Kernel::quartic();
    /// Monte-Carlo settings of the limit law (its nu is taken from `nu`).
    std::size_t law_grid_size = 1000;
    std::size_t law_paths = 100000;
    std::uint64_t law_seed = kDefaultLimitSeed;
    std::filesystem::path law_cache;

    RatioSampler sampler() const;
};

struct TestOutcome {
    std::string method;
    double statistic = 0.0;
    double normalizer = 0.0;
    double critical_value = 0.0;
    double p_value = 1.0;
    bool reject = false;
    double d_hat_sq_full = 0.0;
    double bandwidth = 0.0;
    std::string bandwidth_source;
    std::size_t n = 0;
    /// Self-normalized test only.
    std::optional<DistancePath> path;
    std::vector<std::string> warnings;
};

/// Discrete nu: sum of w_j * l_j * |d^2(l_j) - d^2(1)|. Continuous uniform nu:
/// trapezoid of l * |d^2(l) - d^2(1)| over the path lambdas in [zeta, 1],
/// divided by 1 - zeta. Throws ConfigError when a needed lambda is missing.
double self_normalizer(const DistancePath& path, const NuMeasure& nu);

/// Smallest cross-validation candidate admitted by `min_block_cover` for a
/// series of length n (capped at 1/2).
double bandwidth_floor(std::size_t n, const TestConfig& cfg);

/// Bandwidth per the config: the fixed value or the cross-validated one.
std::pair<double, std::string> resolve_bandwidth(const TimeSeries& x, const TestConfig& cfg);

/// Self-normalized test. Rejects iff d^2(1) > delta^2 + q_{1-alpha} * V_n.
TestOutcome run_test(const TimeSeries& x, const TestConfig& cfg);

/// Same with an explicit limit law (skips the process-wide law cache).
TestOutcome run_test(const TimeSeries& x, const TestConfig& cfg, const RatioLaw& law);

/// Flat JSON record of the outcome with every input echoed ("schema": 1).
nlohmann::json outcome_to_json(const TestOutcome& outcome, const TestConfig& cfg);

}  // namespace reldev
