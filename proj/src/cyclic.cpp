#include "cfh/cyclic.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cfh {

namespace {

template <typename F>
double central4(const F& f, double h) {
    return (8.0 * (f(h) - f(-h)) - (f(2.0 * h) - f(-2.0 * h))) / (12.0 * h);
}

// Euclidean normal of span(t1,t2,t3) in R^4 via the generalized cross product.
Vec4 cross4(const Vec4& a, const Vec4& b, const Vec4& c) {
    Vec4 n;
    for (int d = 0; d < 4; ++d) {
        // Signed 3x3 minor obtained by deleting row d.
        Eigen::Matrix3d M;
        int r = 0;
        for (int i = 0; i < 4; ++i) {
            if (i == d) continue;
            M(r, 0) = a[i];
            M(r, 1) = b[i];
            M(r, 2) = c[i];
            ++r;
        }
        n[d] = ((d % 2) ? 1.0 : -1.0) * M.determinant();
    }
    return n;
}

struct PointData {
    Mat3 G;
    Mat3 B;
    Vec4 N;
    Eigen::Matrix<double, 4, 3> T;  // tangent vectors F_* d_i
};

PointData point_data(const ImmersionR4& F, const V3& u) {
    JVec f = F.jet(u[0], u[1], u[2]);
    std::array<JVec, 3> df = {f.derivative(0), f.derivative(1), f.derivative(2)};
    PointData pd;
    for (int i = 0; i < 3; ++i)
        for (int a = 0; a < 4; ++a) pd.T(a, i) = df[i][a].value();
    Vec4 n = cross4(pd.T.col(0), pd.T.col(1), pd.T.col(2));
    double nn = n.norm();
    if (nn < 1e-300) throw std::runtime_error("degenerate immersion point");
    pd.N = n / nn;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            pd.G(i, j) = pd.T.col(i).dot(pd.T.col(j));
            Vec4 fij;
            JVec second = df[i].derivative(j);
            for (int a = 0; a < 4; ++a) fij[a] = second[a].value();
            pd.B(i, j) = fij.dot(pd.N);
        }
    return pd;
}

}  // namespace

ImmersionR4 compose_immersion(const HypersurfacePatch& patch,
                              const std::vector<ConformalMap>& pipeline, Rect3 domain) {
    ImmersionR4 F;
    F.domain = domain;
    int eps = patch.form().eps;
    auto pipe = pipeline;
    F.jet = [&patch, pipe, eps](double x1, double x2, double s) {
        JVec f = patch.f_jet(x1, x2, s);
        return apply_pipeline_jet(pipe, eps, f);
    };
    F.e1_hint = [](double, double, double) { return V3(0, 0, 1); };
    return F;
}

ImmersionR4 make_graph_control() {
    ImmersionR4 F;
    F.domain = Rect3{{-0.3, -0.3, -0.3}, {0.3, 0.3, 0.3}};
    F.jet = [](double u1, double u2, double u3) {
        Jet x = Jet::variable(0, u1), y = Jet::variable(1, u2), z = Jet::variable(2, u3);
        JVec out(4);
        out[0] = x;
        out[1] = y;
        out[2] = z;
        out[3] = 0.5 * (x * x + 2.0 * (y * y) + 4.0 * (z * z)) + 0.3 * x * y * z +
                 0.2 * (x * x) * y + 0.1 * (y * y) * z;
        return out;
    };
    return F;
}

ImmersionR4 make_round_sphere(double radius) {
    ImmersionR4 F;
    F.domain = Rect3{{-0.5, -0.5, -0.5}, {0.5, 0.5, 0.5}};
    F.jet = [radius](double u1, double u2, double u3) {
        Jet x = Jet::variable(0, u1), y = Jet::variable(1, u2), z = Jet::variable(2, u3);
        JVec out(4);
        Jet w = jsqrt(Jet::constant(radius * radius) - x * x - y * y - z * z);
        out[0] = x;
        out[1] = y;
        out[2] = z;
        out[3] = w;
        return out;
    };
    return F;
}

PrincipalFrame principal_frame(const ImmersionR4& F, const V3& u, double min_gap) {
    PointData pd = point_data(F, u);
    Eigen::GeneralizedSelfAdjointEigenSolver<Mat3> es(pd.B, pd.G);
    if (es.info() != Eigen::Success) throw std::runtime_error("frame eigensolver failed");

    PrincipalFrame fr;
    fr.G = pd.G;
    fr.normal = pd.N;

    std::array<int, 3> order = {0, 1, 2};
    if (F.e1_hint) {
        // Label e_1 by the preferred tangent direction, the remaining two by
        // descending eigenvalue.
        V3 hint = F.e1_hint(u[0], u[1], u[2]);
        Vec4 Hdir = pd.T * hint;
        Hdir.normalize();
        double best = -1.0;
        int ibest = 0;
        for (int i = 0; i < 3; ++i) {
            Vec4 Ei = pd.T * es.eigenvectors().col(i);
            double c = std::abs(Ei.normalized().dot(Hdir));
            if (c > best) {
                best = c;
                ibest = i;
            }
        }
        int o = 1;
        order[0] = ibest;
        for (int i = 2; i >= 0; --i)
            if (i != ibest) order[o++] = i;
    } else {
        // Descending eigenvalues (Eigen returns ascending).
        order = {2, 1, 0};
    }

    for (int k = 0; k < 3; ++k) {
        int i = order[k];
        fr.lam[k] = es.eigenvalues()[i];
        fr.e_param.col(k) = es.eigenvectors().col(i);
        Vec4 Ek = pd.T * es.eigenvectors().col(i);
        fr.E.col(k) = Ek / Ek.norm();
    }
    fr.min_gap = std::min({std::abs(fr.lam[0] - fr.lam[1]), std::abs(fr.lam[0] - fr.lam[2]),
                           std::abs(fr.lam[1] - fr.lam[2])});
    Eigen::Matrix3d gram = fr.E.transpose() * fr.E;
    fr.orthonormality = (gram - Mat3::Identity()).cwiseAbs().maxCoeff();
    if (fr.min_gap < min_gap)
        throw std::runtime_error("near-umbilic point: principal frame is not defined");
    return fr;
}

MetricField immersion_metric(const ImmersionR4& F) {
    return [&F](double x, double y, double z) {
        JVec f = F.jet(x, y, z);
        std::array<JVec, 3> df = {f.derivative(0), f.derivative(1), f.derivative(2)};
        MetricJet g;
        for (int i = 0; i < 3; ++i)
            for (int j = i; j < 3; ++j) {
                g[i][j] = jdot(0, df[i], df[j]);
                if (i != j) g[j][i] = g[i][j];
            }
        return g;
    };
}

FrameProbe immersion_frame_probe(const ImmersionR4& F, double min_gap) {
    return [&F, min_gap](const std::array<double, 3>& q) {
        PrincipalFrame fr = principal_frame(F, V3(q[0], q[1], q[2]), min_gap);
        FrameSample s;
        for (int i = 0; i < 3; ++i) {
            s.lam[i] = fr.lam[i];
            for (int a = 0; a < 3; ++a) s.e[i][a] = fr.e_param(a, i);
        }
        return s;
    };
}

namespace {

// Frame field with eigenvalue matching and sign continuation against a base
// frame (for stencil derivatives).
struct FrameField {
    const ImmersionR4& F;
    PrincipalFrame base;
    double min_gap;

    PrincipalFrame at(const V3& u) const {
        PrincipalFrame fr = principal_frame(F, u, min_gap);
        // Match eigenvalues to the base labels by proximity.
        std::array<int, 3> perm = {0, 1, 2};
        std::array<bool, 3> used{};
        for (int i = 0; i < 3; ++i) {
            double bestd = std::numeric_limits<double>::infinity();
            int bestj = -1;
            for (int j = 0; j < 3; ++j) {
                if (used[j]) continue;
                double d = std::abs(fr.lam[j] - base.lam[i]);
                if (d < bestd) {
                    bestd = d;
                    bestj = j;
                }
            }
            perm[i] = bestj;
            used[bestj] = true;
        }
        PrincipalFrame out = fr;
        for (int i = 0; i < 3; ++i) {
            out.lam[i] = fr.lam[perm[i]];
            out.e_param.col(i) = fr.e_param.col(perm[i]);
            out.E.col(i) = fr.E.col(perm[i]);
            if (out.E.col(i).dot(base.E.col(i)) < 0.0) {
                out.E.col(i) *= -1.0;
                out.e_param.col(i) *= -1.0;
            }
        }
        if (out.normal.dot(base.normal) < 0.0) out.normal *= -1.0;
        return out;
    }
};

}  // namespace

PropQuantities prop_quantities(const ImmersionR4& F, const V3& u, double h) {
    FrameField field{F, principal_frame(F, u), 1e-7};
    const PrincipalFrame& base = field.base;

    // Directional derivative along the (fixed) coordinate direction of e_i at
    // the base point: fields are evaluated along straight parameter lines.
    auto dir_deriv = [&](const V3& dir, auto&& scalar) {
        return central4([&](double t) { return scalar(V3(u + t * dir)); }, h);
    };

    auto lam_of = [&](const V3& q, int i) { return field.at(q).lam[i]; };

    V3 d1 = base.e_param.col(0), d2 = base.e_param.col(1), d3 = base.e_param.col(2);

    PropQuantities out;
    double e2l1 = dir_deriv(d2, [&](const V3& q) { return lam_of(q, 0); });
    double e3l1 = dir_deriv(d3, [&](const V3& q) { return lam_of(q, 0); });
    double e1l1 = dir_deriv(d1, [&](const V3& q) { return lam_of(q, 0); });
    out.rho2 = e2l1 / (base.lam[0] - base.lam[1]);
    out.rho3 = e3l1 / (base.lam[0] - base.lam[2]);
    out.scale = 1.0 + std::abs(out.rho2) + std::abs(out.rho3);

    // rho_j as fields, differentiated along e_1.
    auto rho_field = [&](const V3& q, int j) {
        PrincipalFrame fr = field.at(q);
        V3 ej = fr.e_param.col(j);
        double ejl1 = central4(
            [&](double t) { return field.at(V3(q + t * ej)).lam[0]; }, h);
        return ejl1 / (fr.lam[0] - fr.lam[j]);
    };
    out.e1_rho2 = dir_deriv(d1, [&](const V3& q) { return rho_field(q, 1); });
    out.e1_rho3 = dir_deriv(d1, [&](const V3& q) { return rho_field(q, 2); });

    // e_1(lam_1) as a field for item (iii).
    auto e1lam1_field = [&](const V3& q) {
        PrincipalFrame fr = field.at(q);
        V3 e1 = fr.e_param.col(0);
        return central4([&](double t) { return field.at(V3(q + t * e1)).lam[0]; }, h);
    };
    double e2_e1l1 = dir_deriv(d2, e1lam1_field);
    double e3_e1l1 = dir_deriv(d3, e1lam1_field);
    double e2l1v = e2l1, e3l1v = e3l1;
    out.item3_2 = (base.lam[0] - base.lam[1]) * e2_e1l1 - 2.0 * e1l1 * e2l1v;
    out.item3_3 = (base.lam[0] - base.lam[2]) * e3_e1l1 - 2.0 * e1l1 * e3l1v;

    out.mu = e1l1 / ((base.lam[1] - base.lam[0]) * (base.lam[2] - base.lam[0]));
    auto mu_field = [&](const V3& q) {
        PrincipalFrame fr = field.at(q);
        V3 e1 = fr.e_param.col(0);
        double v = central4([&](double t) { return field.at(V3(q + t * e1)).lam[0]; }, h);
        return v / ((fr.lam[1] - fr.lam[0]) * (fr.lam[2] - fr.lam[0]));
    };
    out.e2_mu = dir_deriv(d2, mu_field);
    out.e3_mu = dir_deriv(d3, mu_field);

    // Intrinsic circle test: <nabla_{e1} nabla_{e1} e1, e_j> computed from the
    // connection against the stencil value of e_1(rho_j).
    MetricField mf = immersion_metric(F);
    MetricJet gj = mf(u[0], u[1], u[2]);
    CurvatureBundle bun = curvature_bundle(gj);

    auto nabla_e1e1 = [&](const V3& q) -> V3 {
        PrincipalFrame fr = field.at(q);
        MetricJet g = mf(q[0], q[1], q[2]);
        CurvatureBundle b = curvature_bundle(g);
        V3 e1 = fr.e_param.col(0);
        V3 res = V3::Zero();
        for (int m = 0; m < 3; ++m) {
            double v = 0.0;
            for (int k = 0; k < 3; ++k) {
                double dk = central4(
                    [&](double t) {
                        V3 qq = q;
                        qq[k] += t;
                        return field.at(qq).e_param(m, 0);
                    },
                    h);
                v += e1[k] * dk;
                for (int l = 0; l < 3; ++l) v += e1[k] * b.gamma[m][k][l] * e1[l];
            }
            res[m] = v;
        }
        return res;
    };

    V3 n11 = nabla_e1e1(u);
    // e_1<nabla_{e1}e1, e_j> - <nabla_{e1}e1, nabla_{e1}e_j> via metric
    // compatibility; evaluate the first term by a stencil along e_1.
    auto inner_g = [&](const V3& a, const V3& b2) {
        double s = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) s += bun.g[i][j] * a[i] * b2[j];
        return s;
    };
    for (int j = 1; j < 3; ++j) {
        auto term = [&](const V3& q) {
            PrincipalFrame fr = field.at(q);
            V3 n = nabla_e1e1(q);
            MetricJet g = mf(q[0], q[1], q[2]);
            double s = 0.0;
            for (int a = 0; a < 3; ++a)
                for (int b2 = 0; b2 < 3; ++b2)
                    s += g[a][b2].value() * n[a] * fr.e_param(b2, j);
            return s;
        };
        double e1_term = dir_deriv(d1, term);
        // <nabla_{e1}e1, nabla_{e1}e_j>
        V3 n1j = V3::Zero();
        for (int m = 0; m < 3; ++m) {
            double v = 0.0;
            for (int k = 0; k < 3; ++k) {
                double dk = central4(
                    [&](double t) {
                        V3 qq = u;
                        qq[k] += t;
                        return field.at(qq).e_param(m, j);
                    },
                    h);
                v += d1[k] * dk;
                for (int l = 0; l < 3; ++l) v += d1[k] * bun.gamma[m][k][l] * base.e_param(l, j);
            }
            n1j[m] = v;
        }
        double lhs = e1_term - inner_g(n11, n1j);
        double rhs = (j == 1) ? out.e1_rho2 : out.e1_rho3;
        if (j == 1)
            out.intrinsic_circle2 = lhs - rhs;
        else
            out.intrinsic_circle3 = lhs - rhs;
    }
    return out;
}

TraceResult trace_curvature_line(const ImmersionR4& F, const V3& u0, double arclen,
                                 int n_steps, TraceMode mode) {
    TraceResult out;
    MetricField mf = immersion_metric(F);

    V3 ref = F.e1_hint ? F.e1_hint(u0[0], u0[1], u0[2]) : V3(0, 0, 1);

    auto velocity = [&](const V3& q, const V3& prev) -> V3 {
        V3 v;
        if (mode == TraceMode::principal) {
            PrincipalFrame fr = principal_frame(F, q, 1e-9);
            v = fr.e_param.col(0);
        } else {
            // Unit-speed direction of the line-factor tangent: on composed
            // builds this is the coordinate s-direction normalized by the
            // metric; use the hint direction.
            v = F.e1_hint ? F.e1_hint(q[0], q[1], q[2]) : V3(0, 0, 1);
            MetricJet g = mf(q[0], q[1], q[2]);
            double n2 = 0.0;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) n2 += g[i][j].value() * v[i] * v[j];
            v /= std::sqrt(n2);
        }
        if (v.dot(prev) < 0.0) v = -v;
        return v;
    };

    auto inside = [&](const V3& q) {
        for (int i = 0; i < 3; ++i)
            if (q[i] < F.domain.lo[i] || q[i] > F.domain.hi[i]) return false;
        return true;
    };

    auto record = [&](const V3& q) {
        JVec f = F.jet(q[0], q[1], q[2]);
        Vec4 p;
        for (int a = 0; a < 4; ++a) p[a] = f[a].value();
        out.points.push_back(p);
        out.params.push_back(q);
    };

    for (int dir = -1; dir <= 1; dir += 2) {
        V3 q = u0;
        V3 prev = double(dir) * ref;
        double hstep = arclen / double(n_steps);
        if (dir == 1) record(q);
        for (int k = 0; k < n_steps; ++k) {
            if (!inside(q)) {
                out.left_domain = true;
                break;
            }
            V3 k1 = velocity(q, prev);
            V3 k2 = velocity(q + 0.5 * hstep * k1, k1);
            V3 k3 = velocity(q + 0.5 * hstep * k2, k2);
            V3 k4 = velocity(q + hstep * k3, k3);
            V3 qn = q + (hstep / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            prev = k1;
            if (!inside(qn)) {
                out.left_domain = true;
                break;
            }
            q = qn;
            record(q);
        }
    }
    return out;
}

namespace {

double alignment_angle(const ImmersionR4& F, const KillingField& field, const V3& u,
                       bool use_t_tangent) {
    PointData pd = point_data(F, u);
    Vec4 y;
    {
        JVec f = F.jet(u[0], u[1], u[2]);
        for (int a = 0; a < 4; ++a) y[a] = f[a].value();
    }
    Vec4 W = killing_eval(field, y);
    // Tangent projection: solve G c = T^T W.
    V3 rhs = pd.T.transpose() * W;
    V3 c = pd.G.ldlt().solve(rhs);
    Vec4 proj = pd.T * c;
    double pn = proj.norm();
    if (pn < 1e-13) throw std::runtime_error("field is tangentially vanishing");

    Vec4 target;
    if (use_t_tangent) {
        V3 hint = F.e1_hint ? F.e1_hint(u[0], u[1], u[2]) : V3(0, 0, 1);
        target = pd.T * hint;
    } else {
        PrincipalFrame fr = principal_frame(F, u);
        double best = -1.0;
        for (int i = 0; i < 3; ++i) {
            double cang = std::abs(fr.E.col(i).dot(proj) / pn);
            if (cang > best) {
                best = cang;
                target = fr.E.col(i);
            }
        }
    }
    double ca = std::abs(target.normalized().dot(proj / pn));
    ca = std::min(1.0, ca);
    return std::acos(ca);
}

}  // namespace

double killing_alignment(const ImmersionR4& F, const KillingField& field, const V3& u) {
    return alignment_angle(F, field, u, false);
}

double killing_alignment_t(const ImmersionR4& F, const KillingField& field, const V3& u) {
    return alignment_angle(F, field, u, true);
}

BatteryResult run_battery(const ImmersionR4& F, const BatteryOptions& opt) {
    BatteryResult out;
    const Rect3& d = F.domain;

    auto lin = [](double lo, double hi, int n, int i) {
        return lo + (hi - lo) * (i + 0.5) / double(n);
    };

    // Items (i)-(iii), (v mu): stencil residuals over an interior sample grid.
    for (int i = 0; i < opt.sample_n[0]; ++i)
        for (int j = 0; j < opt.sample_n[1]; ++j)
            for (int k = 0; k < opt.sample_n[2]; ++k) {
                V3 u(lin(d.lo[0], d.hi[0], opt.sample_n[0], i),
                     lin(d.lo[1], d.hi[1], opt.sample_n[1], j),
                     lin(d.lo[2], d.hi[2], opt.sample_n[2], k));
                PropQuantities pq = prop_quantities(F, u, opt.stencil_h * F.domain.scale());
                out.item2 = std::max(out.item2,
                                     std::max(std::abs(pq.e1_rho2), std::abs(pq.e1_rho3)) /
                                         pq.scale);
                out.item3 = std::max(out.item3,
                                     std::max(std::abs(pq.item3_2), std::abs(pq.item3_3)) /
                                         pq.scale);
                out.item1_intrinsic =
                    std::max(out.item1_intrinsic,
                             std::max(std::abs(pq.intrinsic_circle2 + pq.e1_rho2),
                                      std::abs(pq.intrinsic_circle3 + pq.e1_rho3)) /
                                 pq.scale);
                out.item5_mu = std::max(out.item5_mu, std::max(std::abs(pq.e2_mu),
                                                               std::abs(pq.e3_mu)) /
                                                          (1.0 + std::abs(pq.mu)));
            }

    // Items (i)/(iv): traces and their containment fits.
    int nt = opt.n_traces;
    int grid = std::max(1, int(std::ceil(std::sqrt(double(nt)))));
    int made = 0;
    for (int i = 0; i < grid && made < nt; ++i)
        for (int j = 0; j < grid && made < nt; ++j) {
            V3 u0(lin(d.lo[0], d.hi[0], grid, i), lin(d.lo[1], d.hi[1], grid, j),
                  0.5 * (d.lo[2] + d.hi[2]));
            TraceResult tr =
                trace_curvature_line(F, u0, opt.trace_arclen, opt.trace_steps, opt.trace_mode);
            if (tr.points.size() < 8) continue;
            ++made;
            TwoSphereFit ts = fit_two_sphere_containment(tr.points);
            out.item4_containment =
                std::max(out.item4_containment, ts.max_residual / ts.scale);
            CircleFit cf = fit_circle(tr.points);
            double scale = cf.degenerate_line
                               ? std::max(1.0, (tr.points.front() - tr.points.back()).norm())
                               : cf.radius;
            out.circle_roundness = std::max(out.circle_roundness, cf.max_residual / scale);
        }

    // Item (v): hypersphere fits of the parameter slices u3 = const.
    for (int k = 0; k < opt.n_slices; ++k) {
        double s = lin(d.lo[2], d.hi[2], opt.n_slices, k);
        std::vector<Vec4> pts;
        for (int i = 0; i < opt.slice_n1; ++i)
            for (int j = 0; j < opt.slice_n2; ++j) {
                V3 u(lin(d.lo[0], d.hi[0], opt.slice_n1, i),
                     lin(d.lo[1], d.hi[1], opt.slice_n2, j), s);
                JVec f = F.jet(u[0], u[1], u[2]);
                Vec4 p;
                for (int a = 0; a < 4; ++a) p[a] = f[a].value();
                pts.push_back(p);
            }
        SphereFit sf = fit_sphere(pts);
        double scale = sf.degenerate_hyperplane ? 1.0 : sf.radius;
        out.item5_sphere = std::max(out.item5_sphere, sf.max_residual / scale);
    }

    out.item_pass[0] = out.item1_intrinsic < opt.tol_items;
    out.item_pass[1] = out.item2 < opt.tol_items;
    out.item_pass[2] = out.item3 < opt.tol_items;
    out.item_pass[3] = out.item4_containment < opt.tol_fits;
    out.item_pass[4] = out.item5_sphere < opt.tol_fits && out.item5_mu < opt.tol_items;
    bool first = out.item_pass[0];
    out.verdict_agreement = true;
    for (bool b : out.item_pass)
        if (b != first) out.verdict_agreement = false;
    return out;
}

}  // namespace cfh
