#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "reldev/blocking.hpp"
#include "reldev/kernels.hpp"

namespace reldev {

/// Observations X_1, ..., X_n attached to the design points i / n.
class TimeSeries {
public:
    /// Throws ArgumentError for fewer than 2 values or any non-finite value.
    explicit TimeSeries(std::vector<double> values);

    std::size_t size() const noexcept { return values_.size(); }
    /// 1-based access, X_i.
    double at(std::size_t i) const { return values_.at(i - 1); }
    std::span<const double> values() const noexcept { return values_; }
    double design_point(std::size_t i) const noexcept {
        return static_cast<double>(i) / static_cast<double>(values_.size());
    }

private:
    std::vector<double> values_;
};

struct LevelSlope {
    double level;
    double slope;
};

/// Weighted least squares line fit around t with weights K((x_i - t) / h).
///
/// The design need not be the full grid: prefixes of the block permutation and
/// cross-validation training sets both go through this class. Positions are
/// stored sorted so each window is located by binary search.
class LocalLinearSmoother {
public:
    /// `lambda` only labels DegenerateWindow errors.
    LocalLinearSmoother(std::vector<double> positions, std::vector<double> values, Kernel kernel,
                        double lambda = 1.0);

    std::size_t size() const noexcept { return positions_.size(); }
    std::span<const double> positions() const noexcept { return positions_; }
    std::span<const double> values() const noexcept { return values_; }
    const Kernel& kernel() const noexcept { return kernel_; }

    LevelSlope fit(double t, double h) const;

    /// 2 * fit(t, h / sqrt 2).level - fit(t, h).level, computed in one pass.
    double jackknife(double t, double h) const;

    /// Design points with positive weight inside the window of half-width h.
    std::size_t count_in_window(double t, double h) const;

private:
    std::pair<std::size_t, std::size_t> window(double t, double h) const;

    std::vector<double> positions_;
    std::vector<double> values_;
    Kernel kernel_;
    double lambda_;
};

/// Design points i / n, i = 1..n.
std::vector<double> design_grid(std::size_t n);

/// Smoother over the lambda-prefix (T_1, ..., T_floor(lambda n)) of the permuted sample.
LocalLinearSmoother prefix_smoother(const TimeSeries& x, const BlockPermutation& p, const Kernel& k, double lambda);

/// Smoother over the full sample in natural order.
LocalLinearSmoother full_smoother(const TimeSeries& x, const Kernel& k);

LevelSlope seq_local_linear(const TimeSeries& x, const BlockPermutation& p, const Kernel& k, double h, double lambda,
                            double t);

double seq_jackknife(const TimeSeries& x, const BlockPermutation& p, const Kernel& k, double h, double lambda,
                     double t);

/// seq_jackknife at every grid point, sharing the prefix design.
std::vector<double> fit_curve(const TimeSeries& x, const BlockPermutation& p, const Kernel& k, double h,
                              double lambda, std::span<const double> grid);

/// Jackknife evaluation of an existing smoother over a grid.
std::vector<double> jackknife_curve(const LocalLinearSmoother& smoother, double h, std::span<const double> grid);

/// Throws ArgumentError unless h lies in (0, 1/2].
void check_bandwidth(double h);

}  // namespace reldev
