#include <doctest.h>

#include <cmath>
#include <random>

#include "cfh/fitting.hpp"

using namespace cfh;

namespace {

std::vector<Vec4> circle_points(const Vec4& c, double rho, const Vec4& p, const Vec4& q,
                                int n, double arc = 2.0 * M_PI) {
    std::vector<Vec4> pts;
    for (int i = 0; i < n; ++i) {
        double t = arc * i / double(n);
        pts.push_back(c + rho * (std::cos(t) * p + std::sin(t) * q));
    }
    return pts;
}

}  // namespace

TEST_CASE("circle fit recovers synthetic ground truth") {
    Vec4 c(1, 0, 0, 0);
    Vec4 p(0, 1, 0, 0), q(0, 0, 1, 0);
    auto pts = circle_points(c, 2.0, p, q, 4);
    CircleFit fit = fit_circle(pts);
    CHECK_FALSE(fit.degenerate_line);
    CHECK(fit.max_residual < 1e-12);
    CHECK((fit.center - c).norm() < 1e-10);
    CHECK(fit.radius == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("three noncollinear points fit exactly") {
    std::vector<Vec4> pts = {{0, 0, 0, 0}, {1, 0, 1, 0}, {2, 0, 0.5, 0}};
    CircleFit fit = fit_circle(pts);
    CHECK(fit.max_residual < 1e-10);
}

TEST_CASE("collinear points degrade to a line") {
    std::vector<Vec4> pts;
    Vec4 d(1, 2, -1, 0.5);
    for (int i = 0; i < 6; ++i) pts.push_back(0.3 * i * d);
    CircleFit fit = fit_circle(pts);
    CHECK(fit.degenerate_line);
    CHECK(std::isinf(fit.radius));
    CHECK(fit.max_residual < 1e-12);
}

TEST_CASE("circle fit on a partial noisy arc stays close") {
    Vec4 c(0, 1, -2, 0.5);
    Vec4 p = Vec4(1, 1, 0, 0).normalized();
    Vec4 q = Vec4(-1, 1, 3, 0).normalized();
    q = (q - q.dot(p) * p).normalized();
    auto pts = circle_points(c, 1.5, p, q, 40, 1.2);
    std::mt19937_64 rng(7);
    std::normal_distribution<double> noise(0.0, 1e-8);
    for (auto& x : pts)
        for (int i = 0; i < 4; ++i) x[i] += noise(rng);
    CircleFit fit = fit_circle(pts);
    CHECK(std::abs(fit.radius - 1.5) < 1e-6);
    CHECK(fit.max_residual < 1e-6);
}

TEST_CASE("sphere fit recovers synthetic ground truth") {
    Vec4 c(0.5, -1, 2, 0);
    double rho = 1.25;
    std::vector<Vec4> pts;
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int i = 0; i < 40; ++i) {
        Vec4 d(g(rng), g(rng), g(rng), g(rng));
        pts.push_back(c + rho * d.normalized());
    }
    SphereFit fit = fit_sphere(pts);
    CHECK_FALSE(fit.degenerate_hyperplane);
    CHECK((fit.center - c).norm() < 1e-10);
    CHECK(fit.radius == doctest::Approx(rho).epsilon(1e-10));
    CHECK(fit.max_residual < 1e-12);
}

TEST_CASE("hyperplane samples set the degenerate flag") {
    std::vector<Vec4> pts;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Vec4 n = Vec4(1, 2, 0, -1).normalized();
    Vec4 b1(2, -1, 0, 0), b2(0, 0, 1, 0), b3(1, 0, 0, 1);
    b1 = (b1 - b1.dot(n) * n).normalized();
    b2 = (b2 - b2.dot(n) * n - b2.dot(b1) * b1).normalized();
    b3 = (b3 - b3.dot(n) * n - b3.dot(b1) * b1 - b3.dot(b2) * b2).normalized();
    for (int i = 0; i < 30; ++i)
        pts.push_back(0.7 * n + u(rng) * b1 + u(rng) * b2 + u(rng) * b3);
    SphereFit fit = fit_sphere(pts);
    CHECK(fit.degenerate_hyperplane);
    CHECK(std::abs(std::abs(fit.plane_normal.dot(n)) - 1.0) < 1e-9);
    CHECK(fit.max_residual < 1e-10);
}

TEST_CASE("sphere fit input validation") {
    std::vector<Vec4> few = {{0, 0, 0, 0}, {1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}};
    CHECK_THROWS(fit_sphere(few));
    // Rank-deficient: all points on a line.
    std::vector<Vec4> line;
    for (int i = 0; i < 8; ++i) line.push_back(Vec4(i, 2.0 * i, 0, 0));
    CHECK_THROWS(fit_sphere(line));
}

TEST_CASE("containment fit: circle inside a 2-sphere") {
    Vec4 c(1, 1, 0, 0);
    Vec4 p(0, 1, 0, 0), q(0, 0, 0, 1);
    auto pts = circle_points(c, 0.8, p, q, 24);
    TwoSphereFit fit = fit_two_sphere_containment(pts);
    CHECK(fit.max_residual / fit.scale < 1e-10);
    CHECK(fit.planar);

    // A spherical (non-planar) curve on a 2-sphere in the x4=0 flat.
    std::vector<Vec4> sph;
    for (int i = 0; i < 60; ++i) {
        double t = 2.0 * M_PI * i / 60.0;
        double th = 0.6 + 0.5 * std::sin(2.0 * t);
        Vec4 x(std::sin(th) * std::cos(t), std::sin(th) * std::sin(t), std::cos(th), 0.0);
        sph.push_back(2.0 * x + Vec4(0.5, 0, 0, 0));
    }
    TwoSphereFit fit2 = fit_two_sphere_containment(sph);
    CHECK_FALSE(fit2.planar);
    CHECK(fit2.max_residual / fit2.scale < 1e-10);
}
