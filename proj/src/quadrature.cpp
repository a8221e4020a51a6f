#include "reldev/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace reldev {

namespace {

constexpr int kStartIntervals = 1 << 14;
constexpr int kMaxIntervals = 1 << 22;

double simpson(const RealFunction& f, double a, double b, int intervals) {
    const double step = (b - a) / intervals;
    double odd = 0.0;
    double even = 0.0;
    for (int i = 1; i < intervals; ++i) {
        const double v = f(a + i * step);
        if (i % 2 == 1) {
            odd += v;
        } else {
            even += v;
        }
    }
    return step / 3.0 * (f(a) + 4.0 * odd + 2.0 * even + f(b));
}

}  // namespace

double integrate(const RealFunction& f, double a, double b, double tol) {
    if (!(b > a)) {
        return 0.0;
    }
    int intervals = kStartIntervals;
    double coarse = simpson(f, a, b, intervals);
    while (true) {
        intervals *= 2;
        const double fine = simpson(f, a, b, intervals);
        const double delta = fine - coarse;
        if (std::abs(delta) < tol || intervals >= kMaxIntervals) {
            return fine + delta / 15.0;
        }
        coarse = fine;
    }
}

double integrate_piecewise(const RealFunction& f, double a, double b, std::span<const double> breakpoints,
                           double tol) {
    if (!(b > a)) {
        return 0.0;
    }
    std::vector<double> cuts{a};
    for (double c : breakpoints) {
        if (c > a && c < b) {
            cuts.push_back(c);
        }
    }
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    const double piece_tol = tol / static_cast<double>(cuts.size() - 1);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        total += integrate(f, cuts[i], cuts[i + 1], piece_tol);
    }
    return total;
}

double integrate_piecewise(const RealFunction& f, double a, double b, std::initializer_list<double> breakpoints,
                           double tol) {
    return integrate_piecewise(f, a, b, std::span<const double>(breakpoints.begin(), breakpoints.size()), tol);
}

QuadratureRule design_trapezoid(std::size_t n, double a, double b) {
    QuadratureRule rule;
    if (!(b > a) || n == 0) {
        return rule;
    }
    const double dn = static_cast<double>(n);
    rule.nodes.push_back(a);
    const auto first = static_cast<std::size_t>(std::floor(a * dn)) + 1;
    for (std::size_t i = first; i <= n; ++i) {
        const double x = static_cast<double>(i) / dn;
        if (x >= b) {
            break;
        }
        if (x > a) {
            rule.nodes.push_back(x);
        }
    }
    rule.nodes.push_back(b);
    rule.weights.assign(rule.nodes.size(), 0.0);
    for (std::size_t i = 0; i + 1 < rule.nodes.size(); ++i) {
        const double half = 0.5 * (rule.nodes[i + 1] - rule.nodes[i]);
        rule.weights[i] += half;
        rule.weights[i + 1] += half;
    }
    return rule;
}

QuadratureRule node_trapezoid(std::span<const double> nodes, double a, double b) {
    constexpr double slack = 1e-12;
    QuadratureRule rule;
    if (!(b > a)) {
        return rule;
    }
    const auto lo = std::lower_bound(nodes.begin(), nodes.end(), a - slack);
    const auto hi = std::upper_bound(nodes.begin(), nodes.end(), b + slack);
    rule.nodes.assign(lo, hi);
    if (rule.nodes.empty()) {
        return rule;
    }
    rule.weights.assign(rule.nodes.size(), 0.0);
    rule.weights.front() += std::max(0.0, rule.nodes.front() - a);
    rule.weights.back() += std::max(0.0, b - rule.nodes.back());
    for (std::size_t i = 0; i + 1 < rule.nodes.size(); ++i) {
        const double half = 0.5 * (rule.nodes[i + 1] - rule.nodes[i]);
        rule.weights[i] += half;
        rule.weights[i + 1] += half;
    }
    return rule;
}

}  // namespace reldev
