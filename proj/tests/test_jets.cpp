#include <doctest.h>

#include <cmath>
#include <functional>

#include "cfh/jets.hpp"

using namespace cfh;

namespace {

// Independent finite-difference oracle for mixed partials of a trivariate
// scalar function (Richardson-extrapolated central differences).
double fd_partial(const std::function<double(double, double, double)>& f, int i, int j, int k,
                  double x, double y, double z, double h = 1e-2) {
    if (i > 0)
        return (fd_partial(f, i - 1, j, k, x + h, y, z, h) -
                fd_partial(f, i - 1, j, k, x - h, y, z, h)) /
               (2 * h);
    if (j > 0)
        return (fd_partial(f, i, j - 1, k, x, y + h, z, h) -
                fd_partial(f, i, j - 1, k, x, y - h, z, h)) /
               (2 * h);
    if (k > 0)
        return (fd_partial(f, i, j, k - 1, x, y, z + h, h) -
                fd_partial(f, i, j, k - 1, x, y, z - h, h)) /
               (2 * h);
    return f(x, y, z);
}

template <typename JetFn, typename Fn>
void check_against_fd(JetFn jf, Fn f, double x, double y, double z, double tol_scale = 1.0) {
    Jet u = jf(Jet::variable(0, x), Jet::variable(1, y), Jet::variable(2, z));
    for (int i = 0; i + 0 <= 3; ++i)
        for (int j = 0; i + j <= 3; ++j)
            for (int k = 0; i + j + k <= 3; ++k) {
                double want = fd_partial(f, i, j, k, x, y, z);
                double tol = tol_scale * (1e-5 * std::max(1.0, std::abs(want)));
                CHECK(std::abs(u.deriv(i, j, k) - want) <= tol);
            }
}

}  // namespace

TEST_CASE("jet arithmetic matches finite differences") {
    auto f = [](double x, double y, double z) {
        return std::sin(x) * std::exp(0.3 * y) + std::sqrt(2.0 + z) * std::cos(x * y) +
               x * x * z / (1.5 + y * y);
    };
    auto jf = [](const Jet& x, const Jet& y, const Jet& z) {
        return jsin(x) * jexp(0.3 * y) + jsqrt(2.0 + z) * jcos(x * y) +
               x * x * z / (1.5 + y * y);
    };
    check_against_fd(jf, f, 0.4, -0.7, 0.9);
    check_against_fd(jf, f, -1.1, 0.2, 0.1);
}

TEST_CASE("jet transcendental functions to fourth order") {
    // Exact fourth derivative of log at a point.
    Jet u = jlog(2.0 + Jet::variable(2, 0.5));
    double x = 2.5;
    CHECK(u.value() == doctest::Approx(std::log(x)).epsilon(1e-14));
    CHECK(u.deriv(0, 0, 1) == doctest::Approx(1.0 / x).epsilon(1e-14));
    CHECK(u.deriv(0, 0, 2) == doctest::Approx(-1.0 / (x * x)).epsilon(1e-14));
    CHECK(u.deriv(0, 0, 3) == doctest::Approx(2.0 / (x * x * x)).epsilon(1e-14));
    CHECK(u.deriv(0, 0, 4) == doctest::Approx(-6.0 / (x * x * x * x)).epsilon(1e-14));

    Jet s = jsinh(Jet::variable(0, 0.8));
    CHECK(s.deriv(4, 0, 0) == doctest::Approx(std::sinh(0.8)).epsilon(1e-13));
    Jet c = jcosh(Jet::variable(1, -0.4));
    CHECK(c.deriv(0, 3, 0) == doctest::Approx(std::sinh(-0.4)).epsilon(1e-13));
}

TEST_CASE("jet cross-partials are symmetric by construction") {
    Jet x = Jet::variable(0, 0.3), y = Jet::variable(1, 0.6), z = Jet::variable(2, -0.2);
    Jet u = jexp(x * y) * jsin(y * z) + jcos(x) * z;
    Jet uxy = u.derivative(0).derivative(1);
    Jet uyx = u.derivative(1).derivative(0);
    for (int t = 0; t < Jet::kTerms; ++t) CHECK(uxy.c[t] == doctest::Approx(uyx.c[t]));
}

TEST_CASE("jet division and reciprocal") {
    Jet x = Jet::variable(0, 1.7);
    Jet one = x / x;
    CHECK(one.value() == doctest::Approx(1.0));
    CHECK(std::abs(one.deriv(1, 0, 0)) < 1e-15);
    CHECK(std::abs(one.deriv(2, 0, 0)) < 1e-13);
    CHECK_THROWS_AS(jrecip(Jet::variable(0, 0.0)), std::domain_error);
    CHECK_THROWS_AS(jsqrt(Jet::constant(-1.0)), std::domain_error);
}

TEST_CASE("jet derivative operator shifts coefficients") {
    Jet x = Jet::variable(0, 2.0), z = Jet::variable(2, 1.0);
    Jet u = x * x * z + 3.0 * z * z;  // d/dz = x^2 + 6z
    Jet uz = u.derivative(2);
    CHECK(uz.value() == doctest::Approx(4.0 + 6.0));
    CHECK(uz.deriv(1, 0, 0) == doctest::Approx(4.0));  // d/dx (x^2) = 2x = 4
    CHECK(uz.deriv(0, 0, 1) == doctest::Approx(6.0));
}
