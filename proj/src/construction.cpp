#include "cfh/construction.hpp"

#include <cmath>
#include <stdexcept>

#include "cfh/quadrature.hpp"

namespace cfh {

WeingartenCoefficients derive_bars(double P, double Q, double R, const SpaceForm& form) {
    WeingartenCoefficients cf;
    cf.P = P;
    cf.Q = Q;
    cf.R = R;
    double e = form.eps;
    cf.Pbar = P + e * R;
    cf.Qbar = Q;
    cf.Rbar = P - e * R + 4.0;
    cf.Lambda = 2.0 * (e * e - 1.0) * R;
    return cf;
}

std::array<double, 3> constants_to_pqr(double c1, double c2, double lambda,
                                       const SpaceForm& form) {
    double e = form.eps;
    double P = e * (e + lambda) + 2.0 * c1 - 2.0;
    double Q = 4.0 * c2;
    double R = e * e * (e + lambda) + 2.0 * e * c1 - 2.0 * lambda;
    return {P, Q, R};
}

std::array<double, 3> pqr_to_constants(double P, double Q, double R, const SpaceForm& form) {
    double c2 = Q / 4.0;
    switch (form.eps) {
        case 0:
            return {(P + 2.0) / 2.0, c2, -R / 2.0};
        case 1:
            return {(P + R) / 4.0, c2, (P - R) / 2.0 + 1.0};
        case -1:
            return {(P - R) / 4.0, c2, -(P + R) / 2.0 - 1.0};
        default:
            throw std::invalid_argument("eps must be -1, 0 or +1");
    }
}

double constants_r_crosscheck(double c1, double c2, double lambda, const SpaceForm& form,
                              double lo, double hi, int n) {
    auto pqr = constants_to_pqr(c1, c2, lambda, form);
    WeingartenCoefficients cf = derive_bars(pqr[0], pqr[1], pqr[2], form);
    double e = form.eps;
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        double s = lo + (hi - lo) * i / double(n - 1);
        TrigPair t2 = cs_pair(form.eps, 2.0 * s);
        TrigPair t1 = cs_pair(form.eps, s);
        double rhs = c1 * t2.c + c2 * t2.s + (1.0 - e * e) * lambda * t1.s * t1.s +
                     e * (e + lambda) / 2.0;
        worst = std::max(worst, std::abs(eval_r(cf, form, s) - rhs));
    }
    return worst;
}

double eval_r(const WeingartenCoefficients& cf, const SpaceForm& form, double s) {
    TrigPair t2 = cs_pair(form.eps, 2.0 * s);
    TrigPair t1 = cs_pair(form.eps, s);
    return 0.25 * (cf.Pbar * t2.c + cf.Qbar * t2.s + cf.Lambda * t1.s * t1.s + cf.Rbar);
}

double eval_r_prime(const WeingartenCoefficients& cf, const SpaceForm& form, double s) {
    double e = form.eps;
    TrigPair t2 = cs_pair(form.eps, 2.0 * s);
    // C(2s)' = -2 eps S(2s), S(2s)' = 2 C(2s), (S^2)' = S(2s).
    return 0.25 * (-2.0 * e * cf.Pbar * t2.s + 2.0 * cf.Qbar * t2.c + cf.Lambda * t2.s);
}

Jet r_jet(const WeingartenCoefficients& cf, const SpaceForm& form, const Jet& s) {
    Jet C2 = cs_c_jet(form.eps, 2.0 * s);
    Jet S2 = cs_s_jet(form.eps, 2.0 * s);
    Jet S1 = cs_s_jet(form.eps, s);
    return 0.25 * (cf.Pbar * C2 + cf.Qbar * S2 + cf.Lambda * (S1 * S1) + Jet::constant(cf.Rbar));
}

namespace {

bool admissible(const WeingartenCoefficients& cf, const SpaceForm& form, double s) {
    double r = eval_r(cf, form, s);
    return r > 0.0 && r < 1.0;
}

double bisect_boundary(const WeingartenCoefficients& cf, const SpaceForm& form, double inside,
                       double outside) {
    for (int i = 0; i < 200; ++i) {
        double m = 0.5 * (inside + outside);
        if (admissible(cf, form, m))
            inside = m;
        else
            outside = m;
        if (std::abs(outside - inside) < 1e-10) break;
    }
    return inside;
}

}  // namespace

std::vector<Interval> find_admissible_intervals(const WeingartenCoefficients& cf,
                                                const SpaceForm& form, double lo, double hi,
                                                int n) {
    if (n < 64) throw std::invalid_argument("interval scan needs n >= 64");
    std::vector<Interval> out;
    double h = (hi - lo) / double(n - 1);
    bool open = false;
    Interval cur;
    for (int i = 0; i < n; ++i) {
        double s = lo + h * i;
        bool ok = admissible(cf, form, s);
        if (ok && !open) {
            open = true;
            if (i == 0) {
                cur.lo = lo;
                cur.lo_is_root = false;
            } else {
                cur.lo = bisect_boundary(cf, form, s, s - h);
                cur.lo_is_root = true;
            }
        } else if (!ok && open) {
            cur.hi = bisect_boundary(cf, form, s - h, s);
            cur.hi_is_root = true;
            out.push_back(cur);
            open = false;
            cur = Interval{};
        }
    }
    if (open) {
        cur.hi = hi;
        cur.hi_is_root = false;
        out.push_back(cur);
    }
    return out;
}

Profile::Profile(WeingartenCoefficients cf, SpaceForm form, double s0, Interval window,
                 double perturb)
    : cf_(cf), form_(form), s0_(s0), window_(window), perturb_(perturb) {
    if (!(window_.contains(s0) || s0 == window_.lo || s0 == window_.hi))
        throw std::invalid_argument("profile base point s0 outside the admissible window");
}

void Profile::require_inside(double s) const {
    if (s < window_.lo - 1e-12 || s > window_.hi + 1e-12)
        throw std::out_of_range("profile evaluation outside the admissible window");
    double r = eval_r(cf_, form_, s);
    if (!(r > 0.0) || 1.0 - r < 1e-9)
        throw std::out_of_range("profile evaluation too close to the window boundary");
}

double Profile::a_of(double s) const {
    require_inside(s);
    auto integrand = [&](double t) {
        double r = eval_r(cf_, form_, t);
        return std::sqrt((1.0 - r) / r);
    };
    double base = integrate(integrand, s0_, s, 1e-12, 1e-15).value;
    return base + perturb_ * s * s - perturb_ * s0_ * s0_;
}

Jet Profile::a_jet(double s) const {
    require_inside(s);
    Jet sj = Jet::variable(2, s);
    Jet r = r_jet(cf_, form_, sj);
    Jet ap = jsqrt((1.0 - r) / r);
    // Integrate the derivative jet in the s-axis; the value comes from
    // quadrature. Storage is factorial-normalized, so coefficient n of a'
    // becomes coefficient n+1 of a divided by (n+1).
    Jet a;
    a.c[0] = a_of(s);
    using jet_detail::tables;
    for (int n = 0; n + 1 <= Jet::kDeg; ++n) {
        double cn = ap.c[tables.idx[0][0][n]];
        a.c[tables.idx[0][0][n + 1]] = cn / double(n + 1);
    }
    if (perturb_ != 0.0) {
        // a -> a + perturb (s^2 - s0^2); the constant part is already inside a_of.
        a.c[tables.idx[0][0][1]] += 2.0 * perturb_ * s;
        a.c[tables.idx[0][0][2]] += perturb_;
    }
    return a;
}

ProfileValues Profile::eval(double s) const {
    Jet a = a_jet(s);
    ProfileValues pv;
    pv.a = a.value();
    pv.ap = a.deriv(0, 0, 1);
    pv.app = a.deriv(0, 0, 2);
    Jet ap = a.derivative(2);
    Jet b = jsqrt(1.0 + ap * ap);
    Jet B = jlog(b);
    pv.b = b.value();
    pv.B = B.value();
    pv.Bp = B.deriv(0, 0, 1);
    return pv;
}

HypersurfacePatch::HypersurfacePatch(std::shared_ptr<const SurfaceChart> chart, Profile profile)
    : chart_(std::move(chart)), profile_(std::move(profile)), form_(chart_->form()) {
    if (form_.eps != profile_.form().eps)
        throw std::invalid_argument("chart and profile disagree on the space form");
}

JVec HypersurfacePatch::f_jet(double x1, double x2, double s) const {
    Jet a1 = Jet::variable(0, x1), a2 = Jet::variable(1, x2), a3 = Jet::variable(2, s);
    JVec h = chart_->position_jet(a1, a2);
    JVec N = chart_->normal_jet(a1, a2);
    Jet C = cs_c_jet(form_.eps, a3);
    Jet S = cs_s_jet(form_.eps, a3);
    JVec f(ambient_dim());
    for (int i = 0; i < h.n; ++i) f[i] = C * h[i] + S * N[i];
    f[ambient_dim() - 1] = profile_.a_jet(s);
    return f;
}

JVec HypersurfacePatch::eta_jet(double x1, double x2, double s) const {
    Jet a1 = Jet::variable(0, x1), a2 = Jet::variable(1, x2), a3 = Jet::variable(2, s);
    JVec h = chart_->position_jet(a1, a2);
    JVec N = chart_->normal_jet(a1, a2);
    Jet C = cs_c_jet(form_.eps, a3);
    Jet S = cs_s_jet(form_.eps, a3);
    Jet ap = profile_.a_jet(s).derivative(2);
    Jet binv = jrecip(jsqrt(1.0 + ap * ap));
    JVec eta(ambient_dim());
    Jet coef = -ap * binv;
    for (int i = 0; i < h.n; ++i) eta[i] = coef * (C * N[i] - double(form_.eps) * S * h[i]);
    eta[ambient_dim() - 1] = binv;
    return eta;
}

std::array<std::array<Jet, 3>, 3> HypersurfacePatch::metric_jet(double x1, double x2,
                                                                double s) const {
    JVec f = f_jet(x1, x2, s);
    std::array<JVec, 3> df = {f.derivative(0), f.derivative(1), f.derivative(2)};
    std::array<std::array<Jet, 3>, 3> g;
    int mu = form_.mu();
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
            g[i][j] = jdot(mu, df[i], df[j]);
            if (j != i) g[j][i] = g[i][j];
        }
    return g;
}

ShapeOp HypersurfacePatch::shape_operator(double x1, double x2, double s) const {
    JVec f = f_jet(x1, x2, s);
    JVec eta = eta_jet(x1, x2, s);
    int mu = form_.mu();
    std::array<JVec, 3> df = {f.derivative(0), f.derivative(1), f.derivative(2)};

    Mat3 G, B;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            G(i, j) = jdot(mu, df[i], df[j]).value();
            B(i, j) = jdot(mu, df[i].derivative(j), eta).value();
        }

    ShapeOp out;
    out.A = G.ldlt().solve(B);

    // Transport route: principal data of the frozen parallel surface plus the
    // profile's closed-form derivatives.
    auto parallel = ParallelChart(chart_, s);
    PrincipalData pd = parallel.principal_at(x1, x2);
    ProfileValues pv = profile_.eval(s);
    out.A_parallel.setZero();
    out.A_parallel(0, 0) = -(pv.ap / pv.b) * pd.k1;
    out.A_parallel(1, 1) = -(pv.ap / pv.b) * pd.k2;
    out.A_parallel(2, 2) = pv.app / (pv.b * pv.b * pv.b);
    out.route_discrepancy = (out.A - out.A_parallel).cwiseAbs().maxCoeff();

    Eigen::GeneralizedSelfAdjointEigenSolver<Mat3> es(B, G);
    if (es.info() != Eigen::Success) throw std::runtime_error("shape operator eigensolver failed");
    // Ascending from Eigen; flip to descending.
    V3 lam = es.eigenvalues().reverse();
    Mat3 vec;
    for (int i = 0; i < 3; ++i) vec.col(i) = es.eigenvectors().col(2 - i);
    out.eigenvalues = lam;
    out.eigenvectors = vec;
    out.min_gap = std::min({std::abs(lam[0] - lam[1]), std::abs(lam[1] - lam[2]),
                            std::abs(lam[0] - lam[2])});
    return out;
}

double HypersurfacePatch::regularity(double x1, double x2, double s) const {
    JVec f = f_jet(x1, x2, s);
    std::array<JVec, 3> df = {f.derivative(0), f.derivative(1), f.derivative(2)};
    Mat3 G;
    int mu = form_.mu();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) G(i, j) = jdot(mu, df[i], df[j]).value();
    Eigen::SelfAdjointEigenSolver<Mat3> es(G);
    return es.eigenvalues().minCoeff();
}

Vec HypersurfacePatch::t_tangent(double x1, double x2, double s) const {
    // dt = eta / b + tangent part; subtracting the normal component leaves
    // (a'/b^2) f_* d_s exactly.
    JVec eta = eta_jet(x1, x2, s);
    int dim = ambient_dim();
    ProfileValues pv = profile_.eval(s);
    Vec t = Vec::Zero(dim);
    t[dim - 1] = 1.0;
    for (int i = 0; i < dim; ++i) t[i] -= eta[i].value() / pv.b;
    return t;
}

std::pair<double, double> curvature_transform(double K, double H, const SpaceForm& form,
                                              double s) {
    double e = form.eps;
    TrigPair t1 = cs_pair(form.eps, s);
    TrigPair t2 = cs_pair(form.eps, 2.0 * s);
    double den = t1.c * t1.c - t2.s * H + t1.s * t1.s * K;
    if (std::abs(den) < 1e-14)
        throw std::domain_error("parallel-surface focal point: vanishing denominator");
    double Ks = (e * e * t1.s * t1.s + e * t2.s * H + t1.c * t1.c * K) / den;
    double Hs = (e * t2.s + 2.0 * t2.c * H - t2.s * K) / (2.0 * den);
    return {Ks, Hs};
}

}  // namespace cfh
