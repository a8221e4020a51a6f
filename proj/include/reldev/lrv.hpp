#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "reldev/benchmarks.hpp"
#include "reldev/estimation.hpp"
#include "reldev/measures.hpp"
#include "reldev/selfnorm.hpp"

namespace reldev {

/// Tuning of the local long-run variance estimator; 0 selects the defaults
/// m = floor(n^(2/3)) and l = floor(n^(1/3)).
struct LrvConfig {
    std::size_t window = 0;
    std::size_t sub_block = 0;
    /// Number of equispaced t-points on [0, 1] where sigma^2 is estimated.
    std::size_t t_points = 50;
};

/// sigma^2 estimate, linearly interpolated between the t-grid points.
struct LrvEstimate {
    std::vector<double> grid;
    std::vector<double> values;
    std::size_t window = 0;
    std::size_t sub_block = 0;

    double operator()(double t) const;
};

struct DOmegaEstimate {
    std::function<double(double)> eval;

    double operator()(double x) const { return eval(x); }
};

/// Block-sum estimate at t from the residuals x_i - fitted_i. Averages
/// (sum of l consecutive residuals)^2 / l over every length-l run of design
/// points inside [t - m/n, t + m/n]. Requires 2 <= l <= m and at least 2l
/// points in the window (WindowTooSmall otherwise).
double local_lrv(const TimeSeries& x, std::span<const double> fitted, double t, std::size_t m, std::size_t l);

LrvEstimate estimate_lrv(const TimeSeries& x, std::span<const double> fitted, const LrvConfig& cfg = {});

/// Plug-in f_tau * d - omega * (integral of d against tau), d = Jackknife fit
/// minus the full-sample benchmark estimate. NotApplicable for PointEval.
DOmegaEstimate d_omega_hat(const TimeSeries& x, const BenchmarkFunctional& g, const TauMeasure& tau, double h,
                           const Kernel& k = Kernel::quartic());

/// Standard normal quantile.
double normal_quantile(double p);

/// Rejects iff d^2 > delta^2 + z_{1-alpha} * 2 * ||d_omega sigma||_2 / sqrt(n).
/// Uses benchmark, tau, delta, alpha, bandwidth, cv and kernel from `cfg`.
TestOutcome run_lrv_test(const TimeSeries& x, const TestConfig& cfg, const LrvConfig& lrv = {});

}  // namespace reldev
