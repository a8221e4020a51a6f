#include "reldev/measures.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "reldev/errors.hpp"
#include "reldev/quadrature.hpp"

namespace reldev {

TauMeasure::TauMeasure(std::vector<TauSegment> segments, std::string label)
    : segments_(std::move(segments)), label_(std::move(label)) {
    if (segments_.empty()) {
        throw ArgumentError("tau needs at least one segment");
    }
    std::sort(segments_.begin(), segments_.end(), [](const TauSegment& l, const TauSegment& r) { return l.a < r.a; });
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        const TauSegment& s = segments_[i];
        if (!(s.a >= 0.0 && s.a < s.b && s.b <= 1.0) || !s.density) {
            throw ArgumentError("tau segments must satisfy 0 <= a < b <= 1 and carry a density");
        }
        if (i > 0 && s.a < segments_[i - 1].b) {
            throw ArgumentError("tau segments overlap");
        }
        for (int j = 0; j <= 64; ++j) {
            const double x = s.a + (s.b - s.a) * j / 64.0;
            const double f = s.density(x);
            if (!(f >= 0.0) || !std::isfinite(f)) {
                throw ArgumentError("tau density must be finite and non-negative");
            }
        }
    }
}

TauMeasure TauMeasure::lebesgue() {
    return TauMeasure({TauSegment{0.0, 1.0, [](double) { return 1.0; }}}, "lebesgue");
}

TauMeasure TauMeasure::window(double t0, double t1, double scale) {
    if (!(t0 >= 0.0 && t0 < t1 && t1 <= 1.0)) {
        throw ArgumentError("tau window needs 0 <= t0 < t1 <= 1");
    }
    if (scale < 0.0) {
        throw ArgumentError("tau window scale must be non-negative");
    }
    const double c = scale > 0.0 ? scale : 1.0 / (t1 - t0);
    std::ostringstream label;
    label.precision(17);
    label << "window:" << t0 << ',' << t1 << ',' << c;
    return TauMeasure({TauSegment{t0, t1, [c](double) { return c; }}}, label.str());
}

double TauMeasure::density(double x) const {
    for (const TauSegment& s : segments_) {
        if (x >= s.a && x <= s.b) {
            return s.density(x);
        }
    }
    return 0.0;
}

double TauMeasure::total_mass() const {
    return tau_integrate(*this, [](double) { return 1.0; });
}

double tau_integrate(const TauMeasure& tau, const std::function<double(double)>& f,
                     std::span<const double> breakpoints) {
    double total = 0.0;
    for (const TauSegment& s : tau.segments()) {
        total += integrate_piecewise([&](double x) { return f(x) * s.density(x); }, s.a, s.b, breakpoints, 1e-10);
    }
    return total;
}

DistancePath::DistancePath(std::vector<double> lambdas, std::vector<double> values)
    : lambdas_(std::move(lambdas)), values_(std::move(values)) {
    if (lambdas_.empty() || lambdas_.size() != values_.size()) {
        throw ArgumentError("distance path needs matching, non-empty lambda and value grids");
    }
    for (std::size_t i = 0; i < lambdas_.size(); ++i) {
        if (!(lambdas_[i] > 0.0 && lambdas_[i] <= 1.0) || (i > 0 && !(lambdas_[i] > lambdas_[i - 1]))) {
            throw ArgumentError("distance path lambdas must be strictly increasing in (0, 1]");
        }
        if (!(values_[i] >= 0.0)) {
            throw ArgumentError("distance path values must be non-negative");
        }
    }
    if (lambdas_.back() != 1.0) {
        throw ArgumentError("distance path must end at lambda = 1");
    }
}

double DistancePath::at(double lambda) const {
    for (std::size_t i = 0; i < lambdas_.size(); ++i) {
        if (std::abs(lambdas_[i] - lambda) <= 1e-12) {
            return values_[i];
        }
    }
    std::ostringstream os;
    os << "distance path has no value at lambda=" << lambda;
    throw ConfigError(os.str());
}

double deviation_sq(const LocalLinearSmoother& smoother, double h, double ghat, const TauMeasure& tau) {
    double total = 0.0;
    for (const TauSegment& s : tau.segments()) {
        const QuadratureRule rule = node_trapezoid(smoother.positions(), s.a, s.b);
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double f = s.density(rule.nodes[i]);
            if (f == 0.0) {
                continue;
            }
            const double d = smoother.jackknife(rule.nodes[i], h) - ghat;
            total += rule.weights[i] * f * d * d;
        }
    }
    return total;
}

double distance_sq(const TimeSeries& x, const BlockPermutation& p, const Kernel& k, double h,
                   const BenchmarkFunctional& g, const TauMeasure& tau, double lambda) {
    check_bandwidth(h);
    const LocalLinearSmoother prefix = prefix_smoother(x, p, k, lambda);
    const double ghat = estimate_benchmark(g, prefix, h);
    return deviation_sq(prefix, h, ghat, tau);
}

DistancePath distance_path(const TimeSeries& x, const BlockPermutation& p, const Kernel& k, double h,
                           const BenchmarkFunctional& g, const TauMeasure& tau, std::vector<double> lambdas) {
    std::sort(lambdas.begin(), lambdas.end());
    lambdas.erase(std::unique(lambdas.begin(), lambdas.end()), lambdas.end());
    if (lambdas.empty() || lambdas.back() != 1.0) {
        lambdas.push_back(1.0);
    }
    std::vector<double> values;
    values.reserve(lambdas.size());
    for (double lambda : lambdas) {
        values.push_back(distance_sq(x, p, k, h, g, tau, lambda));
    }
    return DistancePath(std::move(lambdas), std::move(values));
}

std::vector<double> gn_process(const DistancePath& path, double d0sq, std::size_t n) {
    if (!(d0sq >= 0.0)) {
        throw ArgumentError("d0sq must be non-negative");
    }
    const double root_n = std::sqrt(static_cast<double>(n));
    std::vector<double> out;
    out.reserve(path.lambdas().size());
    for (std::size_t i = 0; i < path.lambdas().size(); ++i) {
        out.push_back(path.lambdas()[i] * root_n * (path.values()[i] - d0sq));
    }
    return out;
}

std::vector<double> gn_process_local(const DistancePath& path, double d0sq, std::size_t n, double h) {
    check_bandwidth(h);
    std::vector<double> out = gn_process(path, d0sq, n);
    const double root_h = std::sqrt(h);
    for (double& v : out) {
        v *= root_h;
    }
    return out;
}

}  // namespace reldev
