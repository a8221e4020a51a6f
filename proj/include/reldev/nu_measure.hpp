#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace reldev {

/// Probability measure over prefix fractions used by the self-normalizer.
///
/// Either finitely many support points in [zeta, 1) with positive weights, or
/// the uniform distribution on [zeta, 1]. nu({1}) is always 0.
class NuMeasure {
public:
    enum class Kind { Discrete, ContinuousUniform };

    /// Weights are normalized to sum 1; zeta defaults to the smallest point.
    static NuMeasure discrete(std::vector<double> points, std::vector<double> weights, double zeta = 0.0);
    /// Equal weights on the given points.
    static NuMeasure discrete_uniform(std::vector<double> points);
    /// Uniform on [zeta, 1]; the distance path is evaluated on `quadrature_points` equispaced lambdas.
    static NuMeasure continuous_uniform(double zeta, std::size_t quadrature_points = 17);
    /// Uniform on {0.2, 0.4, 0.6, 0.8}.
    static NuMeasure standard();

    Kind kind() const noexcept { return kind_; }
    double zeta() const noexcept { return zeta_; }
    const std::vector<double>& points() const noexcept { return points_; }
    const std::vector<double>& weights() const noexcept { return weights_; }

    /// Lambdas at which the distance path is needed, excluding lambda = 1.
    std::vector<double> path_lambdas() const;

    /// Stable textual key used by the quantile cache.
    std::string fingerprint() const;

private:
    NuMeasure(Kind kind, double zeta, std::vector<double> points, std::vector<double> weights)
        : kind_(kind), zeta_(zeta), points_(std::move(points)), weights_(std::move(weights)) {}

    Kind kind_;
    double zeta_;
    // Discrete: support and weights. Continuous: the path quadrature grid, weights unused.
    std::vector<double> points_;
    std::vector<double> weights_;
};

}  // namespace reldev
