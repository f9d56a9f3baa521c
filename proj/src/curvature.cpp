#include "cfh/curvature.hpp"

#include <cmath>
#include <stdexcept>

namespace cfh {

namespace {

// Inverse of a symmetric 3x3 jet matrix by adjugate over determinant.
void invert_metric(const MetricJet& g, MetricJet& inv) {
    Jet det = g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1]) -
              g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0]) +
              g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0]);
    if (det.value() == 0.0) throw std::runtime_error("singular metric");
    Jet idet = jrecip(det);
    inv[0][0] = (g[1][1] * g[2][2] - g[1][2] * g[2][1]) * idet;
    inv[0][1] = (g[0][2] * g[2][1] - g[0][1] * g[2][2]) * idet;
    inv[0][2] = (g[0][1] * g[1][2] - g[0][2] * g[1][1]) * idet;
    inv[1][1] = (g[0][0] * g[2][2] - g[0][2] * g[2][0]) * idet;
    inv[1][2] = (g[0][2] * g[1][0] - g[0][0] * g[1][2]) * idet;
    inv[2][2] = (g[0][0] * g[1][1] - g[0][1] * g[1][0]) * idet;
    inv[1][0] = inv[0][1];
    inv[2][0] = inv[0][2];
    inv[2][1] = inv[1][2];
}

struct Pipeline {
    MetricJet g, ginv;
    Jet gamma[3][3][3];   // jets, degree-2 content
    Jet ric[3][3];        // degree-1 content
    Jet scal;
    Jet schouten[3][3];
    double riem[3][3][3][3] = {};
};

Pipeline run_pipeline(const MetricJet& gj) {
    Pipeline p;
    p.g = gj;
    invert_metric(gj, p.ginv);

    std::array<std::array<std::array<Jet, 3>, 3>, 3> dg;
    for (int k = 0; k < 3; ++k)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) dg[k][i][j] = gj[i][j].derivative(k);

    for (int k = 0; k < 3; ++k)
        for (int i = 0; i < 3; ++i)
            for (int j = i; j < 3; ++j) {
                Jet sum;
                for (int l = 0; l < 3; ++l)
                    sum += p.ginv[k][l] * (dg[i][j][l] + dg[j][i][l] - dg[l][i][j]);
                p.gamma[k][i][j] = 0.5 * sum;
                p.gamma[k][j][i] = p.gamma[k][i][j];
            }

    // Riemann via jets to keep first derivatives for the Ricci contraction.
    Jet riem_jet[3][3][3][3];
    for (int l = 0; l < 3; ++l)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k) {
                    Jet val = p.gamma[l][j][k].derivative(i) - p.gamma[l][i][k].derivative(j);
                    for (int m = 0; m < 3; ++m)
                        val += p.gamma[l][i][m] * p.gamma[m][j][k] -
                               p.gamma[l][j][m] * p.gamma[m][i][k];
                    riem_jet[l][i][j][k] = val;
                    p.riem[l][i][j][k] = val.value();
                }

    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) {
            Jet sum;
            for (int i = 0; i < 3; ++i) sum += riem_jet[i][i][j][k];
            p.ric[j][k] = sum;
        }

    Jet scal;
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) scal += p.ginv[j][k] * p.ric[j][k];
    p.scal = scal;

    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) p.schouten[i][j] = p.ric[i][j] - 0.25 * scal * gj[i][j];
    return p;
}

// Codazzi defect in the metric norm for L = Ric_endo - coeff * scal * Id.
double codazzi_of_pipeline(const Pipeline& p, double coeff) {
    Jet L[3][3];
    for (int m = 0; m < 3; ++m)
        for (int j = 0; j < 3; ++j) {
            Jet sum;
            for (int k = 0; k < 3; ++k) sum += p.ginv[m][k] * p.ric[k][j];
            L[m][j] = sum;
            if (m == j) L[m][j] -= coeff * p.scal;
        }
    double worst = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            double comp[3];
            for (int m = 0; m < 3; ++m) {
                double cij = L[m][j].derivative(i).value();
                double cji = L[m][i].derivative(j).value();
                for (int a = 0; a < 3; ++a) {
                    cij += p.gamma[m][i][a].value() * L[a][j].value() -
                           p.gamma[a][i][j].value() * L[m][a].value();
                    cji += p.gamma[m][j][a].value() * L[a][i].value() -
                           p.gamma[a][j][i].value() * L[m][a].value();
                }
                comp[m] = cij - cji;
            }
            double norm2 = 0.0;
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) norm2 += p.g[a][b].value() * comp[a] * comp[b];
            worst = std::max(worst, std::sqrt(std::max(0.0, norm2)));
        }
    return worst;
}

}  // namespace

CurvatureBundle curvature_bundle(const MetricJet& gj) {
    Pipeline p = run_pipeline(gj);
    CurvatureBundle b;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            b.g[i][j] = gj[i][j].value();
            b.ginv[i][j] = p.ginv[i][j].value();
            b.ric[i][j] = p.ric[i][j].value();
            b.schouten[i][j] = p.schouten[i][j].value();
            for (int k = 0; k < 3; ++k) b.gamma[k][i][j] = p.gamma[k][i][j].value();
        }
    b.scal = p.scal.value();
    for (int l = 0; l < 3; ++l)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k) b.riem[l][i][j][k] = p.riem[l][i][j][k];

    double riem_scale = 0.0;
    for (int l = 0; l < 3; ++l)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k)
                    riem_scale = std::max(riem_scale, std::abs(b.riem[l][i][j][k]));
    double bianchi = 0.0;
    for (int l = 0; l < 3; ++l)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k)
                    bianchi = std::max(bianchi,
                                       std::abs(b.riem[l][i][j][k] + b.riem[l][j][k][i] +
                                                b.riem[l][k][i][j]));
    b.bianchi_residual = bianchi / (riem_scale + 1.0);

    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (i == j) continue;
            double num = 0.0;
            for (int l = 0; l < 3; ++l) num += b.g[i][l] * b.riem[l][i][j][j];
            double den = b.g[i][i] * b.g[j][j] - b.g[i][j] * b.g[i][j];
            b.sectional[i][j] = num / den;
            b.curvature_scale = std::max(b.curvature_scale, std::abs(b.sectional[i][j]));
        }

    // Cotton: antisymmetrized covariant derivative of the Schouten tensor.
    double dP[3][3][3];
    for (int k = 0; k < 3; ++k)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double v = p.schouten[i][j].derivative(k).value();
                for (int a = 0; a < 3; ++a)
                    v -= b.gamma[a][k][i] * b.schouten[a][j] + b.gamma[a][k][j] * b.schouten[i][a];
                dP[k][i][j] = v;
            }
    double norm2 = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) {
                b.cotton[i][j][k] = dP[i][j][k] - dP[j][i][k];
            }
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int a = 0; a < 3; ++a)
                    for (int c = 0; c < 3; ++c)
                        for (int e = 0; e < 3; ++e)
                            norm2 += b.ginv[i][a] * b.ginv[j][c] * b.ginv[k][e] *
                                     b.cotton[i][j][k] * b.cotton[a][c][e];
    b.cotton_norm = std::sqrt(std::max(0.0, norm2));
    b.codazzi_standard = codazzi_of_pipeline(p, 0.25);
    return b;
}

double codazzi_residual(const MetricJet& gj, double coeff) {
    Pipeline p = run_pipeline(gj);
    return codazzi_of_pipeline(p, coeff);
}

LameData lame_curvatures(const MetricJet& gj) {
    LameData out{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != j) out.offdiag = std::max(out.offdiag, std::abs(gj[i][j].value()));
    double scale = std::max({gj[0][0].value(), gj[1][1].value(), gj[2][2].value()});
    if (out.offdiag > 1e-10 * scale)
        throw std::invalid_argument("Lame formulas require an orthogonal-coordinate metric");

    for (int i = 0; i < 3; ++i) out.v[i] = jsqrt(gj[i][i]);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (i == j) continue;
            out.phi[i][j] = out.v[j].derivative(i) / out.v[i];
        }

    // -v_i v_j K_ij = (phi^ij)_i + (phi^ji)_j + phi^ki phi^kj, k the third index.
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (i == j) {
                out.K[i][j] = 0.0;
                continue;
            }
            int k = 3 - i - j;
            double lhs = out.phi[i][j].derivative(i).value() +
                         out.phi[j][i].derivative(j).value() +
                         (out.phi[k][i] * out.phi[k][j]).value();
            out.K[i][j] = -lhs / (out.v[i].value() * out.v[j].value());
        }

    CurvatureBundle b = curvature_bundle(gj);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != j)
                out.vs_tensor_route =
                    std::max(out.vs_tensor_route, std::abs(out.K[i][j] - b.sectional[i][j]));

    out.ell[0] = 0.5 * (out.K[0][1] + out.K[0][2] - out.K[1][2]);
    out.ell[1] = 0.5 * (out.K[0][1] + out.K[1][2] - out.K[0][2]);
    out.ell[2] = 0.5 * (out.K[0][2] + out.K[1][2] - out.K[0][1]);
    for (int i = 0; i < 3; ++i) out.psi[i] = out.ell[i] * out.v[i].value();

    // Codazzi in Lame variables: psi_{i,j} = phi^{ji} psi_j. The psi_i are
    // only known pointwise here; their derivatives come from the jet route.
    Jet Kj[3][3];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (i == j) continue;
            int k = 3 - i - j;
            Jet lhs = out.phi[i][j].derivative(i) + out.phi[j][i].derivative(j) +
                      out.phi[k][i] * out.phi[k][j];
            Kj[i][j] = -lhs / (out.v[i] * out.v[j]);
        }
    Jet ellj[3] = {0.5 * (Kj[0][1] + Kj[0][2] - Kj[1][2]),
                   0.5 * (Kj[0][1] + Kj[1][2] - Kj[0][2]),
                   0.5 * (Kj[0][2] + Kj[1][2] - Kj[0][1])};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (i == j) continue;
            Jet psi_i = ellj[i] * out.v[i];
            Jet psi_j = ellj[j] * out.v[j];
            double res = psi_i.derivative(j).value() - (out.phi[j][i] * psi_j).value();
            out.codazzi_psi = std::max(out.codazzi_psi, std::abs(res));
        }
    return out;
}

GuichardResiduals guichard_residuals(const Jet& alpha, const Jet& beta) {
    GuichardResiduals r;
    auto d = [](const Jet& f, int axis) { return f.derivative(axis); };
    Jet a1 = d(alpha, 0), a2 = d(alpha, 1), a3 = d(alpha, 2);
    Jet b1 = d(beta, 0), b2 = d(beta, 1), b3 = d(beta, 2);

    r.f23 = (d(a2, 2) + a2 * (a3 - b3)).value();
    r.h13 = (d(b1, 2) - b1 * (a3 - b3)).value();

    Jet e2mb = jexp(-2.0 * beta);
    Jet e2ma = jexp(-2.0 * alpha);
    Jet U = e2mb * (d(a2, 1) + a2 * a2 - a2 * b2);
    Jet V = e2ma * (d(b1, 0) + b1 * b1 - a1 * b1);
    Jet W = d(a3, 2) + a3 * a3 + d(b3, 2) + b3 * b3 - a3 * b3;

    r.conf4 = (d(U, 1) + d(V, 1) - d(W, 1)).value();
    r.conf5 = (d(U, 0) + d(V, 0) - d(W, 0)).value();

    // Third equation, literally: the first product keeps e^{-2 beta} outside
    // the x3-derivative, the second keeps it inside.
    Jet inner_a = d(a2, 1) + a2 * a2 - a2 * b2;
    Jet T = a3 * b3 + d(b3, 2) + b3 * b3 - d(a3, 2) - a3 * a3;
    Jet lhs = e2mb * d(inner_a, 2) + d(V, 2) + d(T, 2);
    Jet rhs = 2.0 * (d(a3, 2) + a3 * a3 - a3 * b3) * b3 - 2.0 * V * b3;
    r.conf6 = (lhs - rhs).value();

    // Auxiliary identity: beta_11 + beta_1 (beta - alpha)_1 = (phi^12)_1 e^{alpha - beta}
    // with phi^12 = beta_1 e^{beta - alpha}.
    Jet phi12 = b1 * jexp(beta - alpha);
    r.h11f22 = (d(b1, 0) + b1 * (b1 - a1) - d(phi12, 0) * jexp(alpha - beta)).value();
    return r;
}

namespace {

// 4th-order central difference of a scalar sample along a parameter line.
template <typename F>
double central4(const F& f, double h) {
    return (8.0 * (f(h) - f(-h)) - (f(2.0 * h) - f(-2.0 * h))) / (12.0 * h);
}

}  // namespace

CartanResiduals cartan_conditions(const FrameProbe& frame, const MetricField& metric,
                                  const std::array<double, 3>& u, double h) {
    FrameSample base = frame(u);
    if (!base.valid) throw std::runtime_error("frame probe invalid at base point");

    MetricJet gj = metric(u[0], u[1], u[2]);
    CurvatureBundle bun = curvature_bundle(gj);

    // Align eigenvector signs of a stencil sample with the base frame.
    auto aligned = [&](const std::array<double, 3>& q) {
        FrameSample s = frame(q);
        for (int i = 0; i < 3; ++i) {
            double dot = 0.0;
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) dot += bun.g[a][b] * s.e[i][a] * base.e[i][b];
            if (dot < 0.0)
                for (int a = 0; a < 3; ++a) s.e[i][a] = -s.e[i][a];
        }
        return s;
    };

    // Coordinate partials of frame components and eigenvalues.
    double de[3][3][3];  // de[k][i][a] = d_k (e_i)^a
    double dlam[3][3];   // dlam[k][i] = d_k lam_i
    for (int k = 0; k < 3; ++k) {
        auto probe = [&](double t) {
            std::array<double, 3> q = u;
            q[k] += t;
            return aligned(q);
        };
        for (int i = 0; i < 3; ++i) {
            dlam[k][i] = central4([&](double t) { return probe(t).lam[i]; }, h);
            for (int a = 0; a < 3; ++a)
                de[k][i][a] = central4([&](double t) { return probe(t).e[i][a]; }, h);
        }
    }

    // nabla_{e_i} e_j in coordinate components.
    double nab[3][3][3];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int m = 0; m < 3; ++m) {
                double v = 0.0;
                for (int k = 0; k < 3; ++k) {
                    v += base.e[i][k] * de[k][j][m];
                    for (int l = 0; l < 3; ++l)
                        v += base.e[i][k] * bun.gamma[m][k][l] * base.e[j][l];
                }
                nab[i][j][m] = v;
            }

    auto gdot = [&](const double* x, const double* y) {
        double s = 0.0;
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) s += bun.g[a][b] * x[a] * y[b];
        return s;
    };

    CartanResiduals out;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (j == i) continue;
            int k = 3 - i - j;
            out.uno = std::max(out.uno, std::abs(gdot(nab[i][j], base.e[k].data())));
        }

    // Directional derivatives e_i(lam_j).
    double elam[3][3];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double v = 0.0;
            for (int k = 0; k < 3; ++k) v += base.e[i][k] * dlam[k][j];
            elam[i][j] = v;
        }

    for (int i = 0; i < 3; ++i) {
        int j = (i + 1) % 3, k = (i + 2) % 3;
        double lhs = (base.lam[j] - base.lam[k]) * elam[i][i] +
                     (base.lam[i] - base.lam[k]) * elam[i][j] +
                     (base.lam[j] - base.lam[i]) * elam[i][k];
        out.dos = std::max(out.dos, std::abs(lhs));
    }

    for (int i = 0; i < 3; ++i) {
        double res[3];
        for (int m = 0; m < 3; ++m) {
            double v = nab[i][i][m];
            for (int j = 0; j < 3; ++j) {
                if (j == i) continue;
                v -= elam[j][i] / (base.lam[i] - base.lam[j]) * base.e[j][m];
            }
            res[m] = v;
        }
        out.tres = std::max(out.tres, std::sqrt(std::max(0.0, gdot(res, res))));
    }
    return out;
}

}  // namespace cfh
