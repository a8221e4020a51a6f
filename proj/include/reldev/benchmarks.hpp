#pragma once

#include <functional>
#include <string>
#include <variant>

#include "reldev/blocking.hpp"
#include "reldev/estimation.hpp"
#include "reldev/kernels.hpp"

namespace reldev {

struct ConstantBenchmark {
    double value;
};

/// g(mu) = (t1 - t0)^-1 * integral of mu over [t0, t1].
struct WindowAverageBenchmark {
    double t0;
    double t1;
};

/// g(mu) = mu(t).
struct PointEvalBenchmark {
    double t;
};

/// g(mu) = integral of mu(x) h_g(x) over [0, 1] with a continuous representer h_g.
struct GeneralLinearBenchmark {
    std::function<double(double)> representer;
    std::string label;
};

/// The functional g(mu) the trend is compared against.
class BenchmarkFunctional {
public:
    using Kind = std::variant<ConstantBenchmark, WindowAverageBenchmark, PointEvalBenchmark, GeneralLinearBenchmark>;

    static BenchmarkFunctional constant(double c);
    /// Requires 0 <= t0 < t1 <= 1.
    static BenchmarkFunctional window_average(double t0, double t1);
    /// Requires t in [0, 1].
    static BenchmarkFunctional point_eval(double t);
    static BenchmarkFunctional general_linear(std::function<double(double)> representer, std::string label = "linear");

    const Kind& kind() const noexcept { return kind_; }
    bool is_point_eval() const noexcept { return std::holds_alternative<PointEvalBenchmark>(kind_); }

    /// Short textual form, e.g. "constant:10" or "window:0,0.5".
    std::string describe() const;

private:
    explicit BenchmarkFunctional(Kind kind) : kind_(std::move(kind)) {}

    Kind kind_;
};

/// Influence function omega of the benchmark estimator.
struct InfluenceOmega {
    std::function<double(double)> eval;

    double operator()(double x) const { return eval(x); }
};

/// Sequential benchmark estimate from the lambda-prefix.
///
/// Constant returns c; WindowAverage averages the prefix observations whose
/// design point lies in [t0, t1]; PointEval and GeneralLinear plug in the
/// Jackknife fit of the same prefix.
double estimate_benchmark(const BenchmarkFunctional& g, const TimeSeries& x, const BlockPermutation& p,
                          const Kernel& k, double h, double lambda);

/// Same, reusing an already built prefix smoother.
double estimate_benchmark(const BenchmarkFunctional& g, const LocalLinearSmoother& prefix, double h);

/// Throws NotApplicable for PointEval.
InfluenceOmega influence_omega(const BenchmarkFunctional& g);

}  // namespace reldev
