#include "reldev/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "reldev/errors.hpp"

namespace reldev {

namespace {

constexpr double kDegeneracyTolerance = 1e-12;

struct WeightedSums {
    double s0 = 0.0;
    double s1 = 0.0;
    double s2 = 0.0;
    double r0 = 0.0;
    double r1 = 0.0;
    double first_position = 0.0;
    bool any = false;
    bool distinct = false;

    void add(double u, double w, double y, double position) {
        if (w <= 0.0) {
            return;
        }
        if (!any) {
            any = true;
            first_position = position;
        } else if (position != first_position) {
            distinct = true;
        }
        s0 += w;
        s1 += w * u;
        s2 += w * u * u;
        r0 += w * y;
        r1 += w * u * y;
    }

    // Returns (level, slope in u units); throws when the 2x2 system is singular.
    std::pair<double, double> solve(double t, double h, double lambda) const {
        const double det = s0 * s2 - s1 * s1;
        if (!distinct || !(det >= kDegeneracyTolerance * s0 * s0) || det <= 0.0) {
            throw DegenerateWindow(t, h, lambda);
        }
        return {(r0 * s2 - r1 * s1) / det, (s0 * r1 - s1 * r0) / det};
    }
};

}  // namespace

void check_bandwidth(double h) {
    if (!(h > 0.0 && h <= 0.5)) {
        throw ArgumentError("bandwidth must lie in (0, 1/2]");
    }
}

TimeSeries::TimeSeries(std::vector<double> values) : values_(std::move(values)) {
    if (values_.size() < 2) {
        throw ArgumentError("a time series needs at least 2 observations");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) {
            throw ArgumentError("time series values must be finite");
        }
    }
}

LocalLinearSmoother::LocalLinearSmoother(std::vector<double> positions, std::vector<double> values, Kernel kernel,
                                         double lambda)
    : kernel_(std::move(kernel)), lambda_(lambda) {
    if (positions.size() != values.size()) {
        throw ArgumentError("smoother positions and values differ in length");
    }
    std::vector<std::size_t> order(positions.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&positions](std::size_t a, std::size_t b) { return positions[a] < positions[b]; });
    positions_.reserve(order.size());
    values_.reserve(order.size());
    for (std::size_t i : order) {
        positions_.push_back(positions[i]);
        values_.push_back(values[i]);
    }
}

std::pair<std::size_t, std::size_t> LocalLinearSmoother::window(double t, double h) const {
    const auto lo = std::lower_bound(positions_.begin(), positions_.end(), t - h);
    const auto hi = std::upper_bound(lo, positions_.end(), t + h);
    return {static_cast<std::size_t>(lo - positions_.begin()), static_cast<std::size_t>(hi - positions_.begin())};
}

LevelSlope LocalLinearSmoother::fit(double t, double h) const {
    check_bandwidth(h);
    if (!(t >= 0.0 && t <= 1.0)) {
        throw ArgumentError("evaluation point t must lie in [0, 1]");
    }
    const auto [lo, hi] = window(t, h);
    WeightedSums sums;
    for (std::size_t i = lo; i < hi; ++i) {
        const double u = (positions_[i] - t) / h;
        sums.add(u, kernel_(u), values_[i], positions_[i]);
    }
    const auto [level, slope_u] = sums.solve(t, h, lambda_);
    return {level, slope_u / h};
}

double LocalLinearSmoother::jackknife(double t, double h) const {
    check_bandwidth(h);
    if (!(t >= 0.0 && t <= 1.0)) {
        throw ArgumentError("evaluation point t must lie in [0, 1]");
    }
    const auto [lo, hi] = window(t, h);
    WeightedSums wide;
    WeightedSums narrow;
    for (std::size_t i = lo; i < hi; ++i) {
        const double u = (positions_[i] - t) / h;
        const double y = values_[i];
        wide.add(u, kernel_(u), y, positions_[i]);
        const double v = std::numbers::sqrt2 * u;
        narrow.add(v, kernel_(v), y, positions_[i]);
    }
    const double narrow_level = narrow.solve(t, h / std::numbers::sqrt2, lambda_).first;
    const double wide_level = wide.solve(t, h, lambda_).first;
    return 2.0 * narrow_level - wide_level;
}

std::size_t LocalLinearSmoother::count_in_window(double t, double h) const {
    const auto [lo, hi] = window(t, h);
    std::size_t count = 0;
    for (std::size_t i = lo; i < hi; ++i) {
        if (kernel_((positions_[i] - t) / h) > 0.0) {
            ++count;
        }
    }
    return count;
}

std::vector<double> design_grid(std::size_t n) {
    std::vector<double> grid(n);
    for (std::size_t i = 1; i <= n; ++i) {
        grid[i - 1] = static_cast<double>(i) / static_cast<double>(n);
    }
    return grid;
}

LocalLinearSmoother prefix_smoother(const TimeSeries& x, const BlockPermutation& p, const Kernel& k, double lambda) {
    if (p.size() != x.size()) {
        throw ArgumentError("block permutation size does not match the series length");
    }
    const std::vector<std::size_t> prefix = p.permuted_prefix(lambda);
    std::vector<double> positions;
    std::vector<double> values;
    positions.reserve(prefix.size());
    values.reserve(prefix.size());
    for (std::size_t idx : prefix) {
        positions.push_back(x.design_point(idx));
        values.push_back(x.at(idx));
    }
    return LocalLinearSmoother(std::move(positions), std::move(values), k, lambda);
}

LocalLinearSmoother full_smoother(const TimeSeries& x, const Kernel& k) {
    return LocalLinearSmoother(design_grid(x.size()), std::vector<double>(x.values().begin(), x.values().end()), k,
                               1.0);
}

LevelSlope seq_local_linear(const TimeSeries& x, const BlockPermutation& p, const Kernel& k, double h, double lambda,
                            double t) {
    check_bandwidth(h);
    return prefix_smoother(x, p, k, lambda).fit(t, h);
}

double seq_jackknife(const TimeSeries& x, const BlockPermutation& p, const Kernel& k, double h, double lambda,
                     double t) {
    check_bandwidth(h);
    return prefix_smoother(x, p, k, lambda).jackknife(t, h);
}

std::vector<double> jackknife_curve(const LocalLinearSmoother& smoother, double h, std::span<const double> grid) {
    std::vector<double> out;
    out.reserve(grid.size());
    for (double t : grid) {
        out.push_back(smoother.jackknife(t, h));
    }
    return out;
}

std::vector<double> fit_curve(const TimeSeries& x, const BlockPermutation& p, const Kernel& k, double h,
                              double lambda, std::span<const double> grid) {
    check_bandwidth(h);
    return jackknife_curve(prefix_smoother(x, p, k, lambda), h, grid);
}

}  // namespace reldev
