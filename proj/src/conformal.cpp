#include "cfh/conformal.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace cfh {

namespace {

JVec phi_jet(int eps, const JVec& p) {
    if (eps == 0) {
        if (p.n != 4) throw std::invalid_argument("flat product points are 4-dimensional");
        return p;
    }
    if (p.n != 5) throw std::invalid_argument("curved product points are 5-dimensional");
    JVec out(4);
    const Jet& t = p[4];
    if (eps == 1) {
        Jet et = jexp(t);
        for (int i = 0; i < 4; ++i) out[i] = et * p[i];
        return out;
    }
    // eps = -1: light-cone coordinate of the pseudo-orthonormal basis.
    Jet x0 = 0.5 * (p[0] + p[3]);
    if (x0.value() <= 0.0)
        throw std::domain_error("hyperbolic covering map needs positive cone coordinate");
    Jet inv = jrecip(x0);
    out[0] = inv * p[1];
    out[1] = inv * p[2];
    out[2] = inv * jcos(t);
    out[3] = inv * jsin(t);
    return out;
}

JVec inversion_jet(const ConformalMap& m, const JVec& p) {
    if (p.n != 4) throw std::invalid_argument("inversion acts on R^4 points");
    if (m.radius <= 0.0) throw std::invalid_argument("inversion radius must be positive");
    JVec d(4);
    for (int i = 0; i < 4; ++i) d[i] = p[i] - Jet::constant(m.center[i]);
    Jet n2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2] + d[3] * d[3];
    if (n2.value() <= 0.0) throw std::domain_error("inversion center hit");
    Jet scale = (m.radius * m.radius) * jrecip(n2);
    JVec out(4);
    for (int i = 0; i < 4; ++i) out[i] = Jet::constant(m.center[i]) + scale * d[i];
    return out;
}

JVec to_jvec(const Vec& p) {
    JVec out(int(p.size()));
    for (int i = 0; i < out.n; ++i) out[i] = Jet::constant(p[i]);
    return out;
}

Vec values(const JVec& p) {
    Vec out(p.n);
    for (int i = 0; i < p.n; ++i) out[i] = p[i].value();
    return out;
}

// Orthonormal tangent frame at a product point (columns), with curves staying
// on the quadric: c_i(tau) = normalize(x + tau u_i) on the curved factor.
struct DomainFrame {
    int dim;                      // parameter count (always 4)
    std::function<Vec(int, double)> curve;  // curve(i, tau): point on the product
};

DomainFrame domain_frame(int eps, const Vec& p) {
    DomainFrame fr;
    fr.dim = 4;
    if (eps == 0) {
        fr.curve = [p](int i, double tau) {
            Vec q = p;
            q[i] += tau;
            return q;
        };
        return fr;
    }
    SpaceForm form{eps};
    Vec x = p.head(4);
    // Gram-Schmidt an ambient seed basis against x (form-orthogonal).
    std::vector<Vec> basis;
    for (int i = 0; i < 4 && int(basis.size()) < 3; ++i) {
        Vec v = Vec::Zero(4);
        v[i] = 1.0;
        double xv = form_inner(form, x, v);
        double xx = form_inner(form, x, x);  // = eps
        v -= x * (xv / xx);
        for (const auto& b : basis) v -= b * form_inner(form, b, v);
        double n2 = form_inner(form, v, v);
        if (n2 < 1e-12) continue;
        basis.push_back(v / std::sqrt(n2));
    }
    if (basis.size() != 3) throw std::runtime_error("failed to frame the quadric tangent space");
    double t = p[4];
    int e = eps;
    fr.curve = [x, t, basis, e](int i, double tau) {
        Vec q(5);
        if (i == 3) {
            q.head(4) = x;
            q[4] = t + tau;
            return q;
        }
        Vec y = x + tau * basis[i];
        SpaceForm form{e};
        double yy = form_inner(form, y, y);
        // Normalize back to the quadric <y,y> = eps.
        y /= std::sqrt(yy / double(e));
        q.head(4) = y;
        q[4] = t;
        return q;
    };
    return fr;
}

template <typename F>
Vec central4_vec(const F& f, double h) {
    return (8.0 * (f(h) - f(-h)) - (f(2.0 * h) - f(-2.0 * h))) / (12.0 * h);
}

}  // namespace

JVec apply_map_jet(const ConformalMap& map, int eps, const JVec& p) {
    switch (map.kind) {
        case ConformalMap::Kind::phi:
            return phi_jet(eps, p);
        case ConformalMap::Kind::inversion:
            return inversion_jet(map, p);
        case ConformalMap::Kind::identity:
            return p;
    }
    throw std::logic_error("unreachable");
}

JVec apply_pipeline_jet(const std::vector<ConformalMap>& maps, int eps, const JVec& p) {
    JVec cur = p;
    for (const auto& m : maps) cur = apply_map_jet(m, eps, cur);
    return cur;
}

Vec apply_map(const ConformalMap& map, int eps, const Vec& p) {
    return values(apply_map_jet(map, eps, to_jvec(p)));
}

Vec apply_pipeline(const std::vector<ConformalMap>& maps, int eps, const Vec& p) {
    return values(apply_pipeline_jet(maps, eps, to_jvec(p)));
}

Conformality map_conformality(const ConformalMap& map, int eps, const Vec& p, double h) {
    double hs = h * std::max(1.0, p.norm());
    Eigen::MatrixXd J(4, 4);
    if (map.kind == ConformalMap::Kind::phi) {
        DomainFrame fr = domain_frame(eps, p);
        for (int i = 0; i < 4; ++i) {
            auto col = [&](double tau) { return apply_map(map, eps, fr.curve(i, tau)); };
            J.col(i) = central4_vec(col, hs);
        }
    } else {
        for (int i = 0; i < 4; ++i) {
            auto col = [&](double tau) {
                Vec q = p;
                q[i] += tau;
                return apply_map(map, eps, q);
            };
            J.col(i) = central4_vec(col, hs);
        }
    }
    Mat4 JtJ = (J.transpose() * J);
    double lambda2 = JtJ.trace() / 4.0;
    Conformality out;
    out.lambda = std::sqrt(std::max(0.0, lambda2));
    out.residual = (JtJ - lambda2 * Mat4::Identity()).norm() / std::max(1.0, lambda2);
    return out;
}

Vec4 killing_eval(const KillingField& f, const Vec4& y) {
    Vec4 out = Vec4::Zero();
    switch (f.kind) {
        case KillingField::Kind::constant_axis:
            out[f.i] = 1.0;
            return out;
        case KillingField::Kind::rotation:
            out[f.j] = y[f.i];
            out[f.i] = -y[f.j];
            return out;
        case KillingField::Kind::radial:
            return y;
        case KillingField::Kind::special: {
            double sum2 = 0.0;
            for (int a = 0; a < 4; ++a)
                if (a != f.i) sum2 += y[a] * y[a];
            out[f.i] = 0.5 * (y[f.i] * y[f.i] - sum2);
            for (int a = 0; a < 4; ++a)
                if (a != f.i) out[a] = y[f.i] * y[a];
            return out;
        }
    }
    throw std::logic_error("unreachable");
}

Mat4 killing_jacobian(const KillingField& f, const Vec4& y) {
    Mat4 J = Mat4::Zero();
    switch (f.kind) {
        case KillingField::Kind::constant_axis:
            return J;
        case KillingField::Kind::rotation:
            J(f.j, f.i) = 1.0;
            J(f.i, f.j) = -1.0;
            return J;
        case KillingField::Kind::radial:
            return Mat4::Identity();
        case KillingField::Kind::special: {
            for (int a = 0; a < 4; ++a) {
                if (a == f.i) {
                    J(f.i, f.i) = y[f.i];
                } else {
                    J(f.i, a) = -y[a];
                    J(a, a) = y[f.i];
                    J(a, f.i) = y[a];
                }
            }
            return J;
        }
    }
    throw std::logic_error("unreachable");
}

double killing_conformal_residual(const KillingField& f, const Vec4& y) {
    Mat4 J = killing_jacobian(f, y);
    Mat4 S = J + J.transpose();
    double div = J.trace();
    return (S - (div / 2.0) * Mat4::Identity()).norm();
}

double relatedness_residual(const ConformalMap& map, int eps, const KillingField& field,
                            const Vec& p, double h) {
    auto curve = [&](double tau) {
        Vec q = p;
        q[q.size() - 1] += tau;
        return apply_map(map, eps, q);
    };
    Vec push = central4_vec(curve, h);
    Vec4 img = apply_map(map, eps, p);
    Vec want = killing_eval(field, img);
    return (push - want).norm();
}

}  // namespace cfh
