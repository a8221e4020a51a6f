#include "reldev/kernels.hpp"

#include <cmath>
#include <numbers>

#include "reldev/errors.hpp"
#include "reldev/quadrature.hpp"

namespace reldev {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

}  // namespace

Kernel Kernel::quartic() { return Kernel(Shape::Quartic, "quartic"); }

Kernel Kernel::epanechnikov() { return Kernel(Shape::Epanechnikov, "epanechnikov"); }

Kernel Kernel::triweight() { return Kernel(Shape::Triweight, "triweight"); }

Kernel Kernel::custom(std::string name, std::function<double(double)> profile) {
    if (!profile) {
        throw ArgumentError("custom kernel needs a profile function");
    }
    Kernel k(Shape::Custom, std::move(name), std::move(profile));
    for (int i = 0; i <= 1000; ++i) {
        const double x = -1.0 + 2.0 * i / 1000.0;
        const double v = k(x);
        if (!(v >= 0.0) || std::abs(v - k(-x)) > 1e-12 * (1.0 + std::abs(v))) {
            throw ArgumentError("kernel '" + k.name() + "' must be non-negative and symmetric on [-1, 1]");
        }
    }
    const double mass = integrate([&k](double x) { return k(x); }, -1.0, 1.0);
    if (std::abs(mass - 1.0) > 1e-8) {
        throw ArgumentError("kernel '" + k.name() + "' does not integrate to 1");
    }
    return k;
}

Kernel Kernel::by_name(const std::string& name) {
    if (name == "quartic") {
        return quartic();
    }
    if (name == "epanechnikov") {
        return epanechnikov();
    }
    if (name == "triweight") {
        return triweight();
    }
    throw ArgumentError("unknown kernel '" + name + "'");
}

double JackknifeKernel::operator()(double x) const noexcept {
    return 2.0 * std::numbers::sqrt2 * base_(std::numbers::sqrt2 * x) - base_(x);
}

double eval_kernel(const Kernel& k, double x) { return k(x); }

double eval_jackknife_kernel(const JackknifeKernel& k, double x) { return k(x); }

double kernel_moment(const Kernel& k, double t, int j) {
    if (j < 0 || j > 2) {
        throw ArgumentError("kernel_moment: order must be 0, 1 or 2");
    }
    if (!(t >= 0.0 && t <= 1.0)) {
        throw ArgumentError("kernel_moment: t must lie in [0, 1]");
    }
    const double lo = std::max(-t, -1.0);
    const double hi = std::min(1.0 - t, 1.0);
    return integrate([&k, j](double x) { return std::pow(x, j) * k(x); }, lo, hi);
}

double kappa_squared(const Kernel& k, double t) {
    if (!(t >= 0.0 && t <= 1.0)) {
        throw ArgumentError("kappa_squared: t must lie in [0, 1]");
    }
    const JackknifeKernel star(k);
    if (t > 0.0 && t < 1.0) {
        return integrate_piecewise([&star](double x) { return star(x) * star(x); }, -1.0, 1.0,
                                   {-kInvSqrt2, kInvSqrt2});
    }
    const double k0 = kernel_moment(k, t, 0);
    const double k1 = kernel_moment(k, t, 1);
    const double k2 = kernel_moment(k, t, 2);
    const double det = k0 * k2 - k1 * k1;
    const auto braces = [&](double x) {
        const double v = (k2 * kInvSqrt2 - k1 * x) * star(x) + (kInvSqrt2 - 1.0) * k2 * k(x);
        return v * v;
    };
    const double integral = integrate_piecewise(braces, -t, 1.0 - t, {-kInvSqrt2, kInvSqrt2});
    return integral / (det * det);
}

}  // namespace reldev
