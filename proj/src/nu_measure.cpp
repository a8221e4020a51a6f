#include "reldev/nu_measure.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "reldev/errors.hpp"

namespace reldev {

NuMeasure NuMeasure::discrete(std::vector<double> points, std::vector<double> weights, double zeta) {
    if (points.empty() || points.size() != weights.size()) {
        throw ArgumentError("discrete nu needs matching, non-empty points and weights");
    }
    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&points](std::size_t a, std::size_t b) { return points[a] < points[b]; });
    std::vector<double> p;
    std::vector<double> w;
    double total = 0.0;
    for (std::size_t i : order) {
        if (!(points[i] > 0.0 && points[i] < 1.0)) {
            throw ArgumentError("discrete nu support must lie in (0, 1)");
        }
        if (!(weights[i] > 0.0)) {
            throw ArgumentError("discrete nu weights must be positive");
        }
        if (!p.empty() && points[i] == p.back()) {
            throw ArgumentError("discrete nu support points must be distinct");
        }
        p.push_back(points[i]);
        w.push_back(weights[i]);
        total += weights[i];
    }
    for (double& v : w) {
        v /= total;
    }
    const double z = zeta > 0.0 ? zeta : p.front();
    if (!(z > 0.0 && z < 1.0) || p.front() < z) {
        throw ArgumentError("zeta must lie in (0, 1) and below every support point");
    }
    return NuMeasure(Kind::Discrete, z, std::move(p), std::move(w));
}

NuMeasure NuMeasure::discrete_uniform(std::vector<double> points) {
    std::vector<double> weights(points.size(), 1.0);
    return discrete(std::move(points), std::move(weights));
}

NuMeasure NuMeasure::continuous_uniform(double zeta, std::size_t quadrature_points) {
    if (!(zeta > 0.0 && zeta < 1.0)) {
        throw ArgumentError("zeta must lie in (0, 1)");
    }
    if (quadrature_points < 2) {
        throw ArgumentError("continuous nu needs at least 2 quadrature points");
    }
    std::vector<double> grid;
    for (std::size_t i = 0; i + 1 < quadrature_points; ++i) {
        grid.push_back(zeta + (1.0 - zeta) * static_cast<double>(i) / static_cast<double>(quadrature_points - 1));
    }
    return NuMeasure(Kind::ContinuousUniform, zeta, std::move(grid), {});
}

NuMeasure NuMeasure::standard() { return discrete_uniform({0.2, 0.4, 0.6, 0.8}); }

std::vector<double> NuMeasure::path_lambdas() const { return points_; }

std::string NuMeasure::fingerprint() const {
    std::ostringstream os;
    os.precision(17);
    if (kind_ == Kind::Discrete) {
        os << "discrete";
        for (std::size_t i = 0; i < points_.size(); ++i) {
            os << (i == 0 ? ':' : ';') << points_[i] << '@' << weights_[i];
        }
    } else {
        os << "uniform:" << zeta_ << '/' << points_.size() + 1;
    }
    os << "|zeta=" << zeta_;
    return os.str();
}

}  // namespace reldev
