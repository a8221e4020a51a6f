#include "reldev/selfnorm.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "reldev/errors.hpp"

namespace reldev {

namespace {

void check_common(const TimeSeries& x, const TestConfig& cfg) {
    if (!(cfg.delta > 0.0)) {
        throw ArgumentError("delta must be positive");
    }
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) {
        throw ArgumentError("alpha must lie in (0, 1)");
    }
    if (x.size() < kMinSampleSize) {
        throw ArgumentError("the tests need at least 40 observations");
    }
}

nlohmann::json real_or_string(double v) {
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    if (std::isnan(v)) {
        return "nan";
    }
    return v;
}

}  // namespace

RatioSampler TestConfig::sampler() const {
    RatioSampler s;
    s.nu = nu;
    s.grid_size = law_grid_size;
    s.n_paths = law_paths;
    s.seed = law_seed;
    return s;
}

double self_normalizer(const DistancePath& path, const NuMeasure& nu) {
    const double full = path.full();
    if (nu.kind() == NuMeasure::Kind::Discrete) {
        double total = 0.0;
        for (std::size_t j = 0; j < nu.points().size(); ++j) {
            const double lambda = nu.points()[j];
            total += nu.weights()[j] * lambda * std::abs(path.at(lambda) - full);
        }
        return total;
    }
    const auto lambdas = path.lambdas();
    const auto values = path.values();
    std::size_t first = 0;
    while (first < lambdas.size() && lambdas[first] < nu.zeta() - 1e-12) {
        ++first;
    }
    if (first >= lambdas.size() || std::abs(lambdas[first] - nu.zeta()) > 1e-12 || lambdas.size() - first < 2) {
        throw ConfigError("distance path does not cover [zeta, 1] for the continuous nu");
    }
    double total = 0.0;
    for (std::size_t i = first; i + 1 < lambdas.size(); ++i) {
        const double left = lambdas[i] * std::abs(values[i] - full);
        const double right = lambdas[i + 1] * std::abs(values[i + 1] - full);
        total += 0.5 * (left + right) * (lambdas[i + 1] - lambdas[i]);
    }
    return total / (1.0 - nu.zeta());
}

double bandwidth_floor(std::size_t n, const TestConfig& cfg) {
    if (!(cfg.min_block_cover >= 0.0)) {
        throw ArgumentError("min_block_cover must be non-negative");
    }
    const double floor = std::numbers::sqrt2 * cfg.min_block_cover * static_cast<double>(cfg.block_width) /
                         static_cast<double>(n);
    return std::min(floor, 0.5);
}

std::pair<double, std::string> resolve_bandwidth(const TimeSeries& x, const TestConfig& cfg) {
    if (cfg.bandwidth) {
        check_bandwidth(*cfg.bandwidth);
        return {*cfg.bandwidth, "fixed"};
    }
    return {cross_validate_bandwidth(x, cfg.kernel, cfg.cv).bandwidth, "cv"};
}

TestOutcome run_test(const TimeSeries& x, const TestConfig& cfg, const RatioLaw& law) {
    check_common(x, cfg);
    if (cfg.block_width < 1 || cfg.block_width > x.size()) {
        throw ArgumentError("block width must lie in [1, n]");
    }
    TestOutcome out;
    out.method = "sn";
    out.n = x.size();
    const BlockPermutation perm(x.size(), cfg.block_width);
    const auto path_at = [&](double h) {
        return distance_path(x, perm, cfg.kernel, h, cfg.benchmark, cfg.tau, cfg.nu.path_lambdas());
    };
    std::optional<DistancePath> computed;
    if (cfg.bandwidth) {
        check_bandwidth(*cfg.bandwidth);
        out.bandwidth = *cfg.bandwidth;
        out.bandwidth_source = "fixed";
        computed = path_at(out.bandwidth);
    } else {
        CvConfig cv_cfg = cfg.cv;
        const double floor = bandwidth_floor(x.size(), cfg);
        if (floor > 0.0) {
            std::vector<double> admitted;
            for (double h : bandwidth_candidates(x.size(), cfg.cv)) {
                if (h >= floor - 1e-12) {
                    admitted.push_back(h);
                }
            }
            if (admitted.empty() || admitted.front() > floor + 1e-12) {
                admitted.insert(admitted.begin(), floor);
            }
            cv_cfg.candidates = std::move(admitted);
        }
        const CvResult cv = cross_validate_bandwidth(x, cfg.kernel, cv_cfg);
        out.bandwidth = cv.bandwidth;
        out.bandwidth_source = "cv";
        while (!computed) {
            try {
                computed = path_at(out.bandwidth);
            } catch (const DegenerateWindow&) {
                const auto next = best_bandwidth(cv.table, out.bandwidth);
                if (!next) {
                    throw;
                }
                out.warnings.push_back("cv bandwidth " + std::to_string(out.bandwidth) +
                                       " leaves a degenerate prefix window; using the best larger candidate");
                out.bandwidth = *next;
            }
        }
    }
    DistancePath path = std::move(*computed);
    out.normalizer = self_normalizer(path, cfg.nu);
    out.d_hat_sq_full = path.full();
    out.critical_value = law.critical_value(cfg.alpha);

    const double excess = out.d_hat_sq_full - cfg.delta * cfg.delta;
    out.reject = out.d_hat_sq_full > cfg.delta * cfg.delta + out.critical_value * out.normalizer;
    if (out.normalizer > 0.0) {
        out.statistic = excess / out.normalizer;
        out.p_value = law.exceedance(out.statistic);
    } else {
        out.statistic = excess > 0.0 ? std::numeric_limits<double>::infinity()
                                     : -std::numeric_limits<double>::infinity();
        out.p_value = excess > 0.0 ? 0.0 : 1.0;
        out.warnings.emplace_back("self-normalizer is zero; decision compares d^2(1) with delta^2 only");
    }
    if (x.size() < kWarnSampleSize) {
        out.warnings.emplace_back("n below 500: the asymptotic level may be inaccurate");
    }
    out.path = std::move(path);
    return out;
}

TestOutcome run_test(const TimeSeries& x, const TestConfig& cfg) {
    check_common(x, cfg);
    const auto law = cached_ratio_law(cfg.sampler(), cfg.law_cache);
    return run_test(x, cfg, *law);
}

nlohmann::json outcome_to_json(const TestOutcome& outcome, const TestConfig& cfg) {
    nlohmann::json j = {
        {"schema", 1},
        {"method", outcome.method},
        {"n", outcome.n},
        {"statistic", real_or_string(outcome.statistic)},
        {"normalizer", outcome.normalizer},
        {"critical_value", outcome.critical_value},
        {"p_value", outcome.p_value},
        {"reject", outcome.reject},
        {"d_hat_sq_full", outcome.d_hat_sq_full},
        {"bandwidth", outcome.bandwidth},
        {"bandwidth_source", outcome.bandwidth_source},
        {"warnings", outcome.warnings},
        {"config",
         {{"benchmark", cfg.benchmark.describe()},
          {"tau", cfg.tau.label()},
          {"nu", cfg.nu.fingerprint()},
          {"delta", cfg.delta},
          {"alpha", cfg.alpha},
          {"block_width", cfg.block_width},
          {"min_block_cover", cfg.min_block_cover},
          {"kernel", cfg.kernel.name()},
          {"cv_folds", cfg.cv.folds},
          {"cv_seed", cfg.cv.seed},
          {"law", cfg.sampler().fingerprint()}}},
    };
    if (outcome.path) {
        j["path"] = {{"lambda", std::vector<double>(outcome.path->lambdas().begin(), outcome.path->lambdas().end())},
                     {"d_hat_sq", std::vector<double>(outcome.path->values().begin(), outcome.path->values().end())}};
    }
    return j;
}

}  // namespace reldev
