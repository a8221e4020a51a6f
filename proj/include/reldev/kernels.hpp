#pragma once

#include <functional>
#include <string>

namespace reldev {

/// Smoothing kernel supported on [-1, 1].
///
/// Built-in kernels are evaluated inline; user kernels wrap an arbitrary
/// profile. Either way the value is forced to exactly 0 outside [-1, 1].
class Kernel {
public:
    enum class Shape { Quartic, Epanechnikov, Triweight, Custom };

    static Kernel quartic();
    static Kernel epanechnikov();
    static Kernel triweight();
    /// Wraps a user profile. Throws ArgumentError if the profile is negative,
    /// asymmetric on a test grid, or does not integrate to 1 within 1e-8.
    static Kernel custom(std::string name, std::function<double(double)> profile);

    /// Looks up a built-in kernel by name ("quartic", "epanechnikov", "triweight").
    static Kernel by_name(const std::string& name);

    double operator()(double x) const noexcept {
        if (x < -1.0 || x > 1.0) {
            return 0.0;
        }
        switch (shape_) {
            case Shape::Quartic: {
                const double u = 1.0 - x * x;
                return 0.9375 * u * u;
            }
            case Shape::Epanechnikov:
                return 0.75 * (1.0 - x * x);
            case Shape::Triweight: {
                const double u = 1.0 - x * x;
                return 1.09375 * u * u * u;
            }
            case Shape::Custom:
                break;
        }
        return profile_(x);
    }

    Shape shape() const noexcept { return shape_; }
    const std::string& name() const noexcept { return name_; }

private:
    Kernel(Shape shape, std::string name, std::function<double(double)> profile = {})
        : shape_(shape), name_(std::move(name)), profile_(std::move(profile)) {}

    Shape shape_;
    std::string name_;
    std::function<double(double)> profile_;
};

/// Bias-corrected kernel K*(x) = 2 sqrt(2) K(sqrt(2) x) - K(x) matching the
/// Jackknife combination of bandwidths h/sqrt(2) and h.
class JackknifeKernel {
public:
    explicit JackknifeKernel(Kernel base) : base_(std::move(base)) {}

    double operator()(double x) const noexcept;

    const Kernel& base() const noexcept { return base_; }

private:
    Kernel base_;
};

double eval_kernel(const Kernel& k, double x);
double eval_jackknife_kernel(const JackknifeKernel& k, double x);

/// kappa_{t,j} = integral of x^j K(x) over [-t, 1-t], j in {0, 1, 2}, t in [0, 1].
double kernel_moment(const Kernel& k, double t, int j);

/// Variance constant of the point-evaluation variant. For t in (0, 1) this is
/// the integral of K*^2 over [-1, 1]; at t in {0, 1} the boundary-corrected form
/// built from kernel_moment(t, 0..2) is used.
double kappa_squared(const Kernel& k, double t);

}  // namespace reldev
