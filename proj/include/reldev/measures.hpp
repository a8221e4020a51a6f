#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "reldev/benchmarks.hpp"
#include "reldev/blocking.hpp"
#include "reldev/estimation.hpp"
#include "reldev/kernels.hpp"

namespace reldev {

/// One continuity piece of a tau density: f_tau restricted to [a, b].
struct TauSegment {
    double a;
    double b;
    std::function<double(double)> density;
};

/// Weighting measure tau with a piecewise continuous density on [0, 1].
class TauMeasure {
public:
    /// Segments must be non-overlapping, inside [0, 1] and have non-negative densities.
    TauMeasure(std::vector<TauSegment> segments, std::string label);

    /// Lebesgue measure on [0, 1].
    static TauMeasure lebesgue();
    /// Constant density `scale` on [t0, t1]; scale defaults to 1 / (t1 - t0).
    static TauMeasure window(double t0, double t1, double scale = 0.0);

    std::span<const TauSegment> segments() const noexcept { return segments_; }
    const std::string& label() const noexcept { return label_; }

    /// f_tau(x); at a shared breakpoint the left segment wins.
    double density(double x) const;
    double total_mass() const;

private:
    std::vector<TauSegment> segments_;
    std::string label_;
};

/// Integral of f against tau, Simpson per continuity segment. Known kinks of f
/// may be passed as extra breakpoints.
double tau_integrate(const TauMeasure& tau, const std::function<double(double)>& f,
                     std::span<const double> breakpoints = {});

/// d^2_{2,n}(lambda) on a lambda grid ending at 1.
class DistancePath {
public:
    /// Throws ArgumentError unless lambdas are strictly increasing, end at 1 and values are >= 0.
    DistancePath(std::vector<double> lambdas, std::vector<double> values);

    std::span<const double> lambdas() const noexcept { return lambdas_; }
    std::span<const double> values() const noexcept { return values_; }
    double full() const noexcept { return values_.back(); }
    /// Value at a grid lambda (matched within 1e-12); throws ConfigError when absent.
    double at(double lambda) const;

private:
    std::vector<double> lambdas_;
    std::vector<double> values_;
};

/// Integral of (smoother Jackknife fit - ghat)^2 against tau, trapezoid over
/// the smoother's own design points inside each tau segment.
double deviation_sq(const LocalLinearSmoother& smoother, double h, double ghat, const TauMeasure& tau);

/// d^2_{2,n}(lambda) for the lambda-prefix of the permuted sample.
double distance_sq(const TimeSeries& x, const BlockPermutation& p, const Kernel& k, double h,
                   const BenchmarkFunctional& g, const TauMeasure& tau, double lambda);

/// Distance path at the given lambdas (1 is appended when missing).
DistancePath distance_path(const TimeSeries& x, const BlockPermutation& p, const Kernel& k, double h,
                           const BenchmarkFunctional& g, const TauMeasure& tau, std::vector<double> lambdas);

/// lambda * sqrt(n) * (d^2(lambda) - d0sq) on the path grid.
std::vector<double> gn_process(const DistancePath& path, double d0sq, std::size_t n);

/// Point-evaluation scaling lambda * sqrt(n h) * (d^2(lambda) - d0sq).
std::vector<double> gn_process_local(const DistancePath& path, double d0sq, std::size_t n, double h);

}  // namespace reldev
