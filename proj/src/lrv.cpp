#include "reldev/lrv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include <boost/math/distributions/normal.hpp>

#include "reldev/errors.hpp"
#include "reldev/parallel.hpp"
#include "reldev/quadrature.hpp"

namespace reldev {

double LrvEstimate::operator()(double t) const {
    if (grid.empty()) {
        throw ConfigError("empty long-run variance estimate");
    }
    if (t <= grid.front()) {
        return values.front();
    }
    if (t >= grid.back()) {
        return values.back();
    }
    const auto it = std::upper_bound(grid.begin(), grid.end(), t);
    const std::size_t j = static_cast<std::size_t>(it - grid.begin());
    const double w = (t - grid[j - 1]) / (grid[j] - grid[j - 1]);
    return (1.0 - w) * values[j - 1] + w * values[j];
}

double local_lrv(const TimeSeries& x, std::span<const double> fitted, double t, std::size_t m, std::size_t l) {
    const std::size_t n = x.size();
    if (fitted.size() != n) {
        throw ArgumentError("fitted curve must have one value per observation");
    }
    if (l < 2 || l > m) {
        throw ArgumentError("long-run variance needs 2 <= l <= m");
    }
    const double dn = static_cast<double>(n);
    const double lo = std::max(1.0, std::ceil((t - static_cast<double>(m) / dn) * dn - 1e-9));
    const double hi = std::min(dn, std::floor((t + static_cast<double>(m) / dn) * dn + 1e-9));
    if (hi < lo || hi - lo + 1.0 < 2.0 * static_cast<double>(l)) {
        throw WindowTooSmall("long-run variance window holds fewer than 2l design points");
    }
    const auto first = static_cast<std::size_t>(lo);
    const auto last = static_cast<std::size_t>(hi);
    double block = 0.0;
    for (std::size_t i = first; i < first + l; ++i) {
        block += x.at(i) - fitted[i - 1];
    }
    double total = block * block;
    std::size_t count = 1;
    for (std::size_t end = first + l; end <= last; ++end) {
        block += (x.at(end) - fitted[end - 1]) - (x.at(end - l) - fitted[end - l - 1]);
        total += block * block;
        ++count;
    }
    return total / (static_cast<double>(count) * static_cast<double>(l));
}

LrvEstimate estimate_lrv(const TimeSeries& x, std::span<const double> fitted, const LrvConfig& cfg) {
    const double dn = static_cast<double>(x.size());
    LrvEstimate est;
    est.window = cfg.window != 0 ? cfg.window : static_cast<std::size_t>(std::floor(std::cbrt(dn * dn) + 1e-9));
    est.sub_block = cfg.sub_block != 0 ? cfg.sub_block : static_cast<std::size_t>(std::floor(std::cbrt(dn) + 1e-9));
    if (cfg.t_points < 2) {
        throw ArgumentError("long-run variance needs at least 2 t-points");
    }
    est.grid.resize(cfg.t_points);
    est.values.resize(cfg.t_points);
    for (std::size_t j = 0; j < cfg.t_points; ++j) {
        est.grid[j] = static_cast<double>(j) / static_cast<double>(cfg.t_points - 1);
    }
    parallel_for(cfg.t_points, [&](std::size_t j) {
        est.values[j] = local_lrv(x, fitted, est.grid[j], est.window, est.sub_block);
    });
    return est;
}

DOmegaEstimate d_omega_hat(const TimeSeries& x, const BenchmarkFunctional& g, const TauMeasure& tau, double h,
                           const Kernel& k) {
    check_bandwidth(h);
    const InfluenceOmega omega = influence_omega(g);
    auto smoother = std::make_shared<LocalLinearSmoother>(full_smoother(x, k));
    const double ghat = estimate_benchmark(g, *smoother, h);
    const auto d = [smoother, h, ghat](double t) { return smoother->jackknife(t, h) - ghat; };

    double mass = 0.0;
    for (const TauSegment& s : tau.segments()) {
        const QuadratureRule rule = node_trapezoid(smoother->positions(), s.a, s.b);
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double f = s.density(rule.nodes[i]);
            if (f != 0.0) {
                mass += rule.weights[i] * f * d(rule.nodes[i]);
            }
        }
    }
    return DOmegaEstimate{[tau, omega, d, mass](double t) { return tau.density(t) * d(t) - omega(t) * mass; }};
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw ArgumentError("normal quantile needs p in (0, 1)");
    }
    return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

TestOutcome run_lrv_test(const TimeSeries& x, const TestConfig& cfg, const LrvConfig& lrv) {
    if (!(cfg.delta > 0.0)) {
        throw ArgumentError("delta must be positive");
    }
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) {
        throw ArgumentError("alpha must lie in (0, 1)");
    }
    const std::size_t n = x.size();
    TestOutcome out;
    out.method = "lrv";
    out.n = n;
    const auto [h, source] = resolve_bandwidth(x, cfg);
    out.bandwidth = h;
    out.bandwidth_source = source;

    const LocalLinearSmoother smoother = full_smoother(x, cfg.kernel);
    const double ghat = estimate_benchmark(cfg.benchmark, smoother, h);
    out.d_hat_sq_full = deviation_sq(smoother, h, ghat, cfg.tau);

    const std::vector<double> fitted = jackknife_curve(smoother, h, design_grid(n));
    const LrvEstimate sigma2 = estimate_lrv(x, fitted, lrv);
    const DOmegaEstimate d_omega = d_omega_hat(x, cfg.benchmark, cfg.tau, h, cfg.kernel);

    const QuadratureRule rule = design_trapezoid(n, 0.0, 1.0);
    double norm_sq = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double v = d_omega(rule.nodes[i]);
        norm_sq += rule.weights[i] * v * v * std::max(0.0, sigma2(rule.nodes[i]));
    }
    out.normalizer = 2.0 * std::sqrt(norm_sq) / std::sqrt(static_cast<double>(n));
    out.critical_value = normal_quantile(1.0 - cfg.alpha);

    const double excess = out.d_hat_sq_full - cfg.delta * cfg.delta;
    out.reject = out.d_hat_sq_full > cfg.delta * cfg.delta + out.critical_value * out.normalizer;
    if (out.normalizer > 0.0) {
        out.statistic = excess / out.normalizer;
        out.p_value = 0.5 * std::erfc(out.statistic / std::sqrt(2.0));
    } else {
        out.statistic = excess > 0.0 ? std::numeric_limits<double>::infinity()
                                     : -std::numeric_limits<double>::infinity();
        out.p_value = excess > 0.0 ? 0.0 : 1.0;
        out.warnings.emplace_back("variance estimate is zero; decision compares d^2 with delta^2 only");
    }
    return out;
}

}  // namespace reldev
