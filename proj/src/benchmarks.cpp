#include "reldev/benchmarks.hpp"

#include <cmath>
#include <sstream>

#include "reldev/errors.hpp"
#include "reldev/quadrature.hpp"

namespace reldev {

namespace {

constexpr double kEdgeSlack = 1e-12;

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

BenchmarkFunctional BenchmarkFunctional::constant(double c) {
    if (!std::isfinite(c)) {
        throw ArgumentError("constant benchmark must be finite");
    }
    return BenchmarkFunctional(ConstantBenchmark{c});
}

BenchmarkFunctional BenchmarkFunctional::window_average(double t0, double t1) {
    if (!(t0 >= 0.0 && t0 < t1 && t1 <= 1.0)) {
        throw ArgumentError("window benchmark needs 0 <= t0 < t1 <= 1");
    }
    return BenchmarkFunctional(WindowAverageBenchmark{t0, t1});
}

BenchmarkFunctional BenchmarkFunctional::point_eval(double t) {
    if (!(t >= 0.0 && t <= 1.0)) {
        throw ArgumentError("point benchmark needs t in [0, 1]");
    }
    return BenchmarkFunctional(PointEvalBenchmark{t});
}

BenchmarkFunctional BenchmarkFunctional::general_linear(std::function<double(double)> representer,
                                                        std::string label) {
    if (!representer) {
        throw ArgumentError("linear benchmark needs a representer");
    }
    return BenchmarkFunctional(GeneralLinearBenchmark{std::move(representer), std::move(label)});
}

std::string BenchmarkFunctional::describe() const {
    std::ostringstream os;
    os.precision(17);
    std::visit(Overloaded{
                   [&os](const ConstantBenchmark& b) { os << "constant:" << b.value; },
                   [&os](const WindowAverageBenchmark& b) { os << "window:" << b.t0 << ',' << b.t1; },
                   [&os](const PointEvalBenchmark& b) { os << "point:" << b.t; },
                   [&os](const GeneralLinearBenchmark& b) { os << "linear:" << b.label; },
               },
               kind_);
    return os.str();
}

double estimate_benchmark(const BenchmarkFunctional& g, const LocalLinearSmoother& prefix, double h) {
    return std::visit(
        Overloaded{
            [](const ConstantBenchmark& b) { return b.value; },
            [&prefix](const WindowAverageBenchmark& b) {
                const auto positions = prefix.positions();
                const auto values = prefix.values();
                double sum = 0.0;
                std::size_t count = 0;
                for (std::size_t i = 0; i < positions.size(); ++i) {
                    if (positions[i] >= b.t0 - kEdgeSlack && positions[i] <= b.t1 + kEdgeSlack) {
                        sum += values[i];
                        ++count;
                    }
                }
                if (count == 0) {
                    throw EmptyWindow("no prefix observation falls inside the benchmark window");
                }
                return sum / static_cast<double>(count);
            },
            [&prefix, h](const PointEvalBenchmark& b) { return prefix.jackknife(b.t, h); },
            [&prefix, h](const GeneralLinearBenchmark& b) {
                const QuadratureRule rule = node_trapezoid(prefix.positions(), 0.0, 1.0);
                double total = 0.0;
                for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                    const double x = rule.nodes[i];
                    total += rule.weights[i] * b.representer(x) * prefix.jackknife(x, h);
                }
                return total;
            },
        },
        g.kind());
}

double estimate_benchmark(const BenchmarkFunctional& g, const TimeSeries& x, const BlockPermutation& p,
                          const Kernel& k, double h, double lambda) {
    if (std::holds_alternative<ConstantBenchmark>(g.kind())) {
        // Validates lambda even though the value ignores the data.
        (void)p.prefix_length(lambda);
        return std::get<ConstantBenchmark>(g.kind()).value;
    }
    return estimate_benchmark(g, prefix_smoother(x, p, k, lambda), h);
}

InfluenceOmega influence_omega(const BenchmarkFunctional& g) {
    return std::visit(Overloaded{
                          [](const ConstantBenchmark&) { return InfluenceOmega{[](double) { return 0.0; }}; },
                          [](const WindowAverageBenchmark& b) {
                              const double scale = 1.0 / (b.t1 - b.t0);
                              return InfluenceOmega{[b, scale](double x) {
                                  return (x >= b.t0 && x <= b.t1) ? scale : 0.0;
                              }};
                          },
                          [](const PointEvalBenchmark&) -> InfluenceOmega {
                              throw NotApplicable("point-evaluation benchmarks have no influence function");
                          },
                          [](const GeneralLinearBenchmark& b) { return InfluenceOmega{b.representer}; },
                      },
                      g.kind());
}

}  // namespace reldev
