#include "doctest.h"

#include <cmath>
#include <numbers>

#include "reldev/errors.hpp"
#include "reldev/kernels.hpp"
#include "reldev/quadrature.hpp"

using namespace reldev;

namespace {

double riemann(const std::function<double(double)>& f, double a, double b, int m) {
    const double dx = (b - a) / m;
    double s = 0.0;
    for (int i = 0; i < m; ++i) {
        s += f(a + (i + 0.5) * dx);
    }
    return s * dx;
}

}  // namespace

TEST_CASE("quartic kernel values") {
    const Kernel k = Kernel::quartic();
    CHECK(eval_kernel(k, 0.0) == doctest::Approx(0.9375).epsilon(1e-15));
    CHECK(eval_kernel(k, 1.0) == 0.0);
    CHECK(eval_kernel(k, 0.5) == doctest::Approx(0.52734375).epsilon(1e-15));
    CHECK(eval_kernel(k, -1.5) == 0.0);
    CHECK(eval_kernel(k, 1.0000001) == 0.0);
}

TEST_CASE("built-in kernels are symmetric densities on [-1, 1]") {
    for (const Kernel& k : {Kernel::quartic(), Kernel::epanechnikov(), Kernel::triweight()}) {
        CAPTURE(k.name());
        for (int i = 0; i <= 200; ++i) {
            const double x = -1.2 + 2.4 * i / 200.0;
            CHECK(k(x) >= 0.0);
            CHECK(k(x) == k(-x));
        }
        CHECK(integrate([&](double x) { return k(x); }, -1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("jackknife kernel") {
    const JackknifeKernel ks(Kernel::quartic());
    CHECK(eval_jackknife_kernel(ks, 0.0) == doctest::Approx((2.0 * std::numbers::sqrt2 - 1.0) * 0.9375));
    CHECK(eval_jackknife_kernel(ks, 1.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(integrate([&](double x) { return ks(x); }, -1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-8));
    const Kernel& k = ks.base();
    for (double x : {-0.9, -0.3, 0.1, 0.6, 0.95}) {
        CHECK(ks(x) == doctest::Approx(2.0 * std::numbers::sqrt2 * k(std::numbers::sqrt2 * x) - k(x)));
    }
}

TEST_CASE("kernel moments") {
    const Kernel k = Kernel::quartic();
    CHECK(kernel_moment(k, 0.5, 1) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(kernel_moment(k, 0.0, 0) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(kernel_moment(k, 0.0, 1) == doctest::Approx(15.0 / 96.0).epsilon(1e-10));
    CHECK_THROWS_AS(kernel_moment(k, 0.5, 3), ArgumentError);
}

TEST_CASE("kappa squared") {
    const Kernel k = Kernel::quartic();
    const JackknifeKernel ks(k);
    const double oracle = riemann([&](double x) { return ks(x) * ks(x); }, -1.0, 1.0, 1000000);
    CHECK(kappa_squared(k, 0.5) == doctest::Approx(oracle).epsilon(1e-8));
    CHECK(kappa_squared(k, 0.5) == doctest::Approx(1.49597).epsilon(1e-5));
    CHECK(kappa_squared(k, 0.3) == kappa_squared(k, 0.7));
    CHECK(kappa_squared(k, 0.0) == doctest::Approx(kappa_squared(k, 1.0)).epsilon(1e-12));
    CHECK(kappa_squared(k, 0.0) > kappa_squared(k, 0.5));
}

TEST_CASE("custom kernels are validated") {
    CHECK_THROWS_AS(Kernel::custom("short", [](double) { return 0.4; }), ArgumentError);
    CHECK_THROWS_AS(Kernel::custom("skew", [](double x) { return 0.5 + 0.25 * x; }), ArgumentError);
    const Kernel u = Kernel::custom("uniform", [](double) { return 0.5; });
    CHECK(u(2.0) == 0.0);
    CHECK(u(0.3) == 0.5);
    CHECK_THROWS_AS(Kernel::by_name("gauss"), ArgumentError);
    CHECK(Kernel::by_name("epanechnikov").name() == "epanechnikov");
}
