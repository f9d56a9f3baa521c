#include "cfh/charts.hpp"

#include <cmath>
#include <nlohmann/json.hpp>
#include <stdexcept>

namespace cfh {

using nlohmann::json;

SurfaceJet SurfaceChart::jet_at(double x1, double x2, int order) const {
    if (!domain_.contains(x1, x2))
        throw std::out_of_range("chart evaluation outside the declared domain");
    if (order > 4) throw std::invalid_argument("chart jets are available up to order 4");
    SurfaceJet out;
    out.jets = position_jet(Jet::variable(0, x1), Jet::variable(1, x2));
    out.order = order;
    return out;
}

Vec SurfaceChart::normal_at(double x1, double x2) const {
    JVec nj = normal_jet(Jet::variable(0, x1), Jet::variable(1, x2));
    Vec n(nj.n);
    for (int i = 0; i < nj.n; ++i) n[i] = nj[i].value();
    return n;
}

PrincipalData SurfaceChart::principal_at(double x1, double x2) const {
    Jet a = Jet::variable(0, x1), b = Jet::variable(1, x2);
    JVec h = position_jet(a, b);
    JVec N = normal_jet(a, b);
    int mu = form_.mu();
    JVec h1 = h.derivative(0), h2 = h.derivative(1);

    PrincipalData pd;
    double g11 = jdot(mu, h1, h1).value();
    double g22 = jdot(mu, h2, h2).value();
    double g12 = jdot(mu, h1, h2).value();
    if (g11 <= 0 || g22 <= 0) throw std::runtime_error("degenerate tangent plane");
    pd.v1 = std::sqrt(g11);
    pd.v2 = std::sqrt(g22);
    pd.off_diag_I = std::abs(g12);

    double II11 = jdot(mu, h1.derivative(0), N).value();
    double II22 = jdot(mu, h2.derivative(1), N).value();
    double II12 = jdot(mu, h1.derivative(1), N).value();
    pd.off_diag_II = std::abs(II12);

    double scale = std::max({std::abs(II11), std::abs(II22), 1.0});
    if (pd.off_diag_I > 1e-9 * pd.v1 * pd.v2 || pd.off_diag_II > 1e-9 * scale)
        throw std::runtime_error("chart coordinates are not principal");

    pd.k1 = II11 / g11;
    pd.k2 = II22 / g22;
    pd.V1 = pd.k1 * pd.v1;
    pd.V2 = pd.k2 * pd.v2;
    pd.Kext = pd.k1 * pd.k2;
    pd.H = 0.5 * (pd.k1 + pd.k2);
    pd.e1 = Vec(h.n);
    pd.e2 = Vec(h.n);
    for (int i = 0; i < h.n; ++i) {
        pd.e1[i] = h1[i].value() / pd.v1;
        pd.e2[i] = h2[i].value() / pd.v2;
    }
    return pd;
}

double SurfaceChart::min_umbilic_gap(int n1, int n2) const {
    double gap = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j) {
            double x1 = domain_.x1lo + (domain_.x1hi - domain_.x1lo) * i / double(n1 - 1);
            double x2 = domain_.x2lo + (domain_.x2hi - domain_.x2lo) * j / double(n2 - 1);
            PrincipalData pd = principal_at(x1, x2);
            gap = std::min(gap, std::abs(pd.k1 - pd.k2));
        }
    return gap;
}

ParallelChart::ParallelChart(std::shared_ptr<const SurfaceChart> base, double s)
    : SurfaceChart(base->form(), base->domain(), base->name() + "_parallel"),
      base_(std::move(base)) {
    TrigPair t = cs_pair(form_.eps, s);
    cs_ = t.c;
    ss_ = t.s;
}

JVec ParallelChart::position_jet(const Jet& x1, const Jet& x2) const {
    JVec h = base_->position_jet(x1, x2);
    JVec N = base_->normal_jet(x1, x2);
    return cs_ * h + ss_ * N;
}

JVec ParallelChart::normal_jet(const Jet& x1, const Jet& x2) const {
    JVec h = base_->position_jet(x1, x2);
    JVec N = base_->normal_jet(x1, x2);
    return cs_ * N + (-double(form_.eps) * ss_) * h;
}

namespace {

// --- catalog charts -------------------------------------------------------

// Circular cylinder of radius rho in R^3; x1 is the angle, x2 the ruling.
// Inward normal.
class CylinderChart final : public SurfaceChart {
public:
    CylinderChart(double rho, Rect dom)
        : SurfaceChart({0}, dom, "cylinder"), rho_(rho) {}
    JVec position_jet(const Jet& x1, const Jet& x2) const override {
        JVec p(3);
        p[0] = rho_ * jcos(x1);
        p[1] = rho_ * jsin(x1);
        p[2] = x2;
        return p;
    }
    JVec normal_jet(const Jet& x1, const Jet&) const override {
        JVec n(3);
        n[0] = -jcos(x1);
        n[1] = -jsin(x1);
        n[2] = Jet::constant(0.0);
        return n;
    }
    std::optional<std::array<double, 3>> documented_witness() const override {
        // K_ext = 0, H = 1/(2 rho) with the inward orientation.
        return std::array<double, 3>{-1.0, 2.0 * rho_, 1.0};
    }

private:
    double rho_;
};

// Tractroid of constant extrinsic curvature -1 in R^3; x1 > 0 is the meridian
// parameter, x2 the angle. Normal -(tanh x1 cos x2, tanh x1 sin x2, sech x1).
class PseudosphereChart final : public SurfaceChart {
public:
    explicit PseudosphereChart(Rect dom) : SurfaceChart({0}, dom, "pseudosphere") {}
    JVec position_jet(const Jet& x1, const Jet& x2) const override {
        Jet sech = jrecip(jcosh(x1));
        Jet tanh = jsinh(x1) * sech;
        JVec p(3);
        p[0] = sech * jcos(x2);
        p[1] = sech * jsin(x2);
        p[2] = x1 - tanh;
        return p;
    }
    JVec normal_jet(const Jet& x1, const Jet& x2) const override {
        Jet sech = jrecip(jcosh(x1));
        Jet tanh = jsinh(x1) * sech;
        JVec n(3);
        n[0] = -tanh * jcos(x2);
        n[1] = -tanh * jsin(x2);
        n[2] = -sech;
        return n;
    }
    std::optional<std::array<double, 3>> documented_witness() const override {
        // K_ext = -1, H varies: the Q = 0 family, signed for a usable window.
        return std::array<double, 3>{-1.0, 0.0, 1.0};
    }
};

// Product torus in S^3 with radii (r1, r2), r1^2 + r2^2 = 1.
class FlatTorusChart final : public SurfaceChart {
public:
    FlatTorusChart(double r1, Rect dom)
        : SurfaceChart({1}, dom, "flat_torus"), r1_(r1), r2_(std::sqrt(1.0 - r1 * r1)) {}
    JVec position_jet(const Jet& x1, const Jet& x2) const override {
        JVec p(4);
        p[0] = r1_ * jcos(x1);
        p[1] = r1_ * jsin(x1);
        p[2] = r2_ * jcos(x2);
        p[3] = r2_ * jsin(x2);
        return p;
    }
    JVec normal_jet(const Jet& x1, const Jet& x2) const override {
        JVec n(4);
        n[0] = -r2_ * jcos(x1);
        n[1] = -r2_ * jsin(x1);
        n[2] = r1_ * jcos(x2);
        n[3] = r1_ * jsin(x2);
        return n;
    }
    std::optional<std::array<double, 3>> documented_witness() const override {
        // K_ext = -1, H = (r2^2 - r1^2) / (2 r1 r2), both constant.
        double H = (r2_ * r2_ - r1_ * r1_) / (2.0 * r1_ * r2_);
        return std::array<double, 3>{-1.0, 1.0, 1.0 + H};
    }

private:
    double r1_, r2_;
};

// Tube at distance d from a geodesic in H^3; x1 runs along the geodesic, x2
// around the tube. Inward orientation (toward the core geodesic).
class EquidistantTubeChart final : public SurfaceChart {
public:
    EquidistantTubeChart(double d, Rect dom)
        : SurfaceChart({-1}, dom, "equidistant_tube"), cd_(std::cosh(d)), sd_(std::sinh(d)) {}
    JVec position_jet(const Jet& x1, const Jet& x2) const override {
        JVec p(4);
        p[0] = cd_ * jcosh(x1);
        p[1] = cd_ * jsinh(x1);
        p[2] = sd_ * jcos(x2);
        p[3] = sd_ * jsin(x2);
        return p;
    }
    JVec normal_jet(const Jet& x1, const Jet& x2) const override {
        JVec n(4);
        n[0] = -sd_ * jcosh(x1);
        n[1] = -sd_ * jsinh(x1);
        n[2] = -cd_ * jcos(x2);
        n[3] = -cd_ * jsin(x2);
        return n;
    }
    std::optional<std::array<double, 3>> documented_witness() const override {
        // K_ext = 1, H = coth(2d) with the inward orientation.
        double d = std::asinh(sd_);
        double H = 1.0 / std::tanh(2.0 * d);
        return std::array<double, 3>{-1.0, 1.0, H - 1.0};
    }

private:
    double cd_, sd_;
};

// Surface of revolution (rho(x2) cos x1, rho(x2) sin x1, x2) with
// rho = 1 + amp sin(freq x2): generic non-Weingarten control. Inward-ish
// normal matching the circular cylinder when amp = 0.
class WavyCylinderChart final : public SurfaceChart {
public:
    WavyCylinderChart(double amp, double freq, Rect dom)
        : SurfaceChart({0}, dom, "wavy_cylinder"), amp_(amp), freq_(freq) {}
    JVec position_jet(const Jet& x1, const Jet& x2) const override {
        Jet rho = 1.0 + amp_ * jsin(freq_ * x2);
        JVec p(3);
        p[0] = rho * jcos(x1);
        p[1] = rho * jsin(x1);
        p[2] = x2;
        return p;
    }
    JVec normal_jet(const Jet& x1, const Jet& x2) const override {
        Jet rhop = amp_ * freq_ * jcos(freq_ * x2);
        Jet inv = jrecip(jsqrt(1.0 + rhop * rhop));
        JVec n(3);
        n[0] = -inv * jcos(x1);
        n[1] = -inv * jsin(x1);
        n[2] = inv * rhop;
        return n;
    }

private:
    double amp_, freq_;
};

Rect rect_from_json(const json& j, Rect fallback) {
    if (!j.contains("domain")) return fallback;
    const auto& d = j.at("domain");
    return Rect{d.at(0).at(0).get<double>(), d.at(0).at(1).get<double>(),
                d.at(1).at(0).get<double>(), d.at(1).at(1).get<double>()};
}

}  // namespace

WeingartenFit weingarten_fit(const SurfaceChart& chart,
                             const std::vector<std::pair<double, double>>& samples) {
    if (samples.size() < 3) throw std::invalid_argument("weingarten fit needs >= 3 samples");
    Eigen::MatrixXd M(samples.size(), 3);
    for (size_t i = 0; i < samples.size(); ++i) {
        PrincipalData pd = chart.principal_at(samples[i].first, samples[i].second);
        M(i, 0) = pd.Kext;
        M(i, 1) = pd.H;
        M(i, 2) = -1.0;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    WeingartenFit out;
    Eigen::Vector3d w = svd.matrixV().col(2);
    out.non_unique = sv[1] <= std::max(1e-12, 1e-10 * sv[0]);
    if (out.non_unique) {
        // Constant (K,H): a whole plane of witnesses fits. Return the member
        // orthogonal to the vacuous pure-P direction when possible.
        Eigen::Vector3d a = svd.matrixV().col(1), b = svd.matrixV().col(2);
        Eigen::Vector3d e1(1, 0, 0);
        Eigen::Vector3d c = a * b.dot(e1) - b * a.dot(e1);  // in span{a,b}, orthogonal to e1
        if (c.norm() > 1e-12)
            w = c / c.norm();
    }
    // Normalize max(|P|,|Q|,|R|) = 1, sign fixed by the largest component.
    int imax = 0;
    for (int i = 1; i < 3; ++i)
        if (std::abs(w[i]) > std::abs(w[imax]) + 1e-15) imax = i;
    w /= w[imax];
    out.P = w[0];
    out.Q = w[1];
    out.R = w[2];
    double res = 0.0;
    for (Eigen::Index i = 0; i < M.rows(); ++i)
        res = std::max(res, std::abs(out.P * M(i, 0) + out.Q * M(i, 1) - out.R));
    out.residual = res;
    return out;
}

std::shared_ptr<SurfaceChart> make_chart(const json& spec, int eps, double umbilic_gap) {
    std::string kind = spec.at("kind").get<std::string>();
    std::shared_ptr<SurfaceChart> chart;
    const double two_pi = 2.0 * M_PI;

    if (kind == "cylinder" || kind == "cylinder_over_plane_curve") {
        if (eps != 0) throw std::invalid_argument("cylinder charts require eps = 0");
        double rho = spec.value("radius", 1.0);
        if (rho <= 0) throw std::invalid_argument("cylinder radius must be positive");
        chart = std::make_shared<CylinderChart>(rho,
                                                rect_from_json(spec, {0, two_pi, -1, 1}));
    } else if (kind == "pseudosphere") {
        Rect dom = rect_from_json(spec, {0.5, 2.0, 0, two_pi});
        if (spec.contains("u_range")) {
            dom.x1lo = spec.at("u_range").at(0).get<double>();
            dom.x1hi = spec.at("u_range").at(1).get<double>();
        }
        if (eps != 0) throw std::invalid_argument("pseudosphere charts require eps = 0");
        if (dom.x1lo <= 1e-3)
            throw std::invalid_argument("pseudosphere u-range must avoid the cusp at 0");
        chart = std::make_shared<PseudosphereChart>(dom);
    } else if (kind == "flat_torus") {
        if (eps != 1) throw std::invalid_argument("flat torus charts require eps = +1");
        double r1 = spec.at("r1").get<double>();
        if (!(r1 > 0.0 && r1 < 1.0))
            throw std::invalid_argument("flat torus needs 0 < r1 < 1 (r2 = sqrt(1-r1^2))");
        chart = std::make_shared<FlatTorusChart>(r1,
                                                 rect_from_json(spec, {0, two_pi, 0, two_pi}));
    } else if (kind == "equidistant_tube") {
        if (eps != -1) throw std::invalid_argument("equidistant tube charts require eps = -1");
        double d = spec.at("d").get<double>();
        if (d <= 0) throw std::invalid_argument("tube distance d must be positive");
        chart = std::make_shared<EquidistantTubeChart>(d,
                                                       rect_from_json(spec, {-1, 1, 0, two_pi}));
    } else if (kind == "user_defined") {
        std::string id = spec.at("id").get<std::string>();
        if (id == "wavy_cylinder") {
            double amp = spec.value("amp", 0.1);
            double freq = spec.value("freq", 2.0);
            if (eps != 0) throw std::invalid_argument("wavy_cylinder requires eps = 0");
            chart = std::make_shared<WavyCylinderChart>(
                amp, freq, rect_from_json(spec, {0, two_pi, -1, 1}));
        } else {
            throw std::invalid_argument("unknown user_defined chart id: " + id);
        }
    } else {
        throw std::invalid_argument("unknown chart kind: " + kind);
    }

    double gap = chart->min_umbilic_gap();
    if (gap < umbilic_gap)
        throw std::invalid_argument("chart domain contains (near-)umbilic points, gap " +
                                    std::to_string(gap));
    return chart;
}

}  // namespace cfh
