#include <doctest.h>

#include <cmath>

#include "cfh/quadrature.hpp"

using namespace cfh;

namespace {

// Fixed-grid oracle: composite Simpson on n nodes (n odd).
double simpson_oracle(const std::function<double(double)>& f, double a, double b, int n) {
    if (n % 2 == 0) ++n;
    double h = (b - a) / (n - 1);
    double sum = f(a) + f(b);
    for (int i = 1; i < n - 1; ++i) sum += f(a + i * h) * ((i % 2) ? 4.0 : 2.0);
    return sum * h / 3.0;
}

}  // namespace

TEST_CASE("adaptive rule on closed forms") {
    auto f = [](double x) { return std::exp(-x) * std::sin(3.0 * x); };
    // Antiderivative of e^{-x} sin(3x): -(e^{-x})(sin 3x + 3 cos 3x)/10.
    auto F = [](double x) { return -std::exp(-x) * (std::sin(3 * x) + 3 * std::cos(3 * x)) / 10.0; };
    auto q = integrate(f, 0.0, 2.0);
    CHECK(q.value == doctest::Approx(F(2.0) - F(0.0)).epsilon(1e-12));

    auto g = [](double x) { return 1.0 / (1.0 + x * x); };
    auto q2 = integrate(g, -1.0, 1.0);
    CHECK(q2.value == doctest::Approx(M_PI / 2.0).epsilon(1e-12));
}

TEST_CASE("agrees with a million-node fixed-grid oracle") {
    auto f = [](double x) {
        double r = (1.0 + 2.0 * x - x * x) / 2.0;  // smooth and positive on [-0.3, 0.5]
        return std::sqrt((1.0 - r) / r);
    };
    double oracle = simpson_oracle(f, -0.3, 0.5, 1000001);
    auto q = integrate(f, -0.3, 0.5);
    CHECK(std::abs(q.value - oracle) < 1e-9);
}

TEST_CASE("orientation and empty interval") {
    auto f = [](double x) { return x * x; };
    CHECK(integrate(f, 1.0, 1.0).value == doctest::Approx(0.0));
    CHECK(integrate(f, 0.0, 1.0).value == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
    CHECK(integrate(f, 1.0, 0.0).value == doctest::Approx(-1.0 / 3.0).epsilon(1e-13));
}
