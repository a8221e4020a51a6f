#pragma once

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

namespace reldev {

using RealFunction = std::function<double(double)>;

/// Composite Simpson on [a, b], starting from 2^14 intervals and doubling until
/// successive estimates differ by less than `tol`; returns the Richardson
/// extrapolated value. Empty or reversed ranges integrate to 0.
double integrate(const RealFunction& f, double a, double b, double tol = 1e-10);

/// Same, splitting [a, b] at the given interior breakpoints (points outside are ignored).
double integrate_piecewise(const RealFunction& f, double a, double b, std::span<const double> breakpoints,
                           double tol = 1e-10);

double integrate_piecewise(const RealFunction& f, double a, double b, std::initializer_list<double> breakpoints,
                           double tol = 1e-10);

/// Nodes and weights of a fixed quadrature rule.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Trapezoidal rule on [a, b] whose nodes are a, every design point i / n
/// strictly inside (a, b), and b. Used wherever an integral is taken over a
/// curve that is only estimated at resolution 1 / n.
QuadratureRule design_trapezoid(std::size_t n, double a, double b);

/// Trapezoidal rule through the sorted `nodes` lying in [a, b]. The pieces
/// between a and the first node and between the last node and b take the
/// value at that node, so nothing is evaluated outside the node set.
QuadratureRule node_trapezoid(std::span<const double> nodes, double a, double b);

}  // namespace reldev
