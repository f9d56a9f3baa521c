#include <doctest.h>

#include <cmath>

#include "cfh/spaceform.hpp"

using namespace cfh;

TEST_CASE("trig pair values per curvature sign") {
    auto q = cs_pair(1, M_PI / 2);
    CHECK(q.c == doctest::Approx(0.0).epsilon(0.0).scale(1.0));
    CHECK(std::abs(q.c) < 1e-15);
    CHECK(q.s == doctest::Approx(1.0));

    auto f = cs_pair(0, 2.0);
    CHECK(f.c == doctest::Approx(1.0));
    CHECK(f.s == doctest::Approx(2.0));

    auto h = cs_pair(-1, 0.0);
    CHECK(h.c == doctest::Approx(1.0));
    CHECK(h.s == doctest::Approx(0.0));
}

TEST_CASE("pythagorean and double-angle identities") {
    for (int eps : {-1, 0, 1}) {
        for (int i = 0; i <= 40; ++i) {
            double s = -5.0 + 10.0 * i / 40.0;
            auto t = cs_pair(eps, s);
            auto t2 = cs_pair(eps, 2.0 * s);
            CHECK(std::abs(t.c * t.c + eps * t.s * t.s - 1.0) < 1e-12 * std::max(1.0, t.c * t.c));
            CHECK(std::abs(t2.c - (t.c * t.c - eps * t.s * t.s)) <
                  1e-12 * std::max(1.0, std::abs(t2.c)));
            CHECK(std::abs(t2.s - 2.0 * t.c * t.s) < 1e-12 * std::max(1.0, std::abs(t2.s)));
        }
    }
}

TEST_CASE("derivative pair matches central differences") {
    double h = 1e-5;
    for (int eps : {-1, 0, 1}) {
        for (double s : {-1.3, 0.2, 2.4}) {
            auto t = cs_pair(eps, s);
            double dc = (cs_pair(eps, s + h).c - cs_pair(eps, s - h).c) / (2 * h);
            double ds = (cs_pair(eps, s + h).s - cs_pair(eps, s - h).s) / (2 * h);
            CHECK(t.dc == doctest::Approx(dc).epsilon(1e-8));
            CHECK(t.ds == doctest::Approx(ds).epsilon(1e-8));
            CHECK(t.dc == doctest::Approx(-eps * t.s).epsilon(1e-14));
            CHECK(t.ds == doctest::Approx(t.c).epsilon(1e-14));
        }
    }
}

TEST_CASE("ambient inner products by signature") {
    SpaceForm flat{0};
    Vec u(3), v(3);
    u << 1, 0, 0;
    v << 1, 0, 0;
    CHECK(form_inner(flat, u, v) == doctest::Approx(1.0));

    SpaceForm hyp{-1};
    Vec w(4), w2(4);
    w << 1, 0, 0, 0;
    CHECK(form_inner(hyp, w, w) == doctest::Approx(-1.0));

    SpaceForm sph{1};
    w2 << 0, 1, 0, 0;
    CHECK(form_inner(sph, w, w2) == doctest::Approx(0.0));
    CHECK_THROWS(form_inner(sph, u, w));
}

TEST_CASE("quadric membership and sheet flag") {
    SpaceForm sph{1};
    Vec p(4);
    p << 1, 0, 0, 0;
    CHECK(membership(sph, p).residual == doctest::Approx(0.0));
    p << 2, 0, 0, 0;
    CHECK(membership(sph, p).residual == doctest::Approx(3.0));

    SpaceForm hyp{-1};
    Vec q(4);
    q << 1, 0, 0, 0;
    auto m = membership(hyp, q);
    CHECK(m.residual == doctest::Approx(0.0));
    CHECK_FALSE(m.wrong_sheet);
    q << -1, 0, 0, 0;
    auto m2 = membership(hyp, q);
    CHECK(m2.residual == doctest::Approx(0.0));
    CHECK(m2.wrong_sheet);

    SpaceForm flat{0};
    Vec r(3);
    r << 5, 1, 2;
    CHECK(membership(flat, r).residual == doctest::Approx(0.0));
}

TEST_CASE("jet trig pair agrees with scalar values") {
    for (int eps : {-1, 0, 1}) {
        Jet s = Jet::variable(2, 0.7);
        Jet C = cs_c_jet(eps, s), S = cs_s_jet(eps, s);
        auto t = cs_pair(eps, 0.7);
        CHECK(C.value() == doctest::Approx(t.c).epsilon(1e-14));
        CHECK(S.value() == doctest::Approx(t.s).epsilon(1e-14));
        CHECK(C.deriv(0, 0, 1) == doctest::Approx(t.dc).epsilon(1e-14));
        CHECK(S.deriv(0, 0, 1) == doctest::Approx(t.ds).epsilon(1e-14));
    }
}
