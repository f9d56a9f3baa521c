#pragma once

#include <array>
#include <functional>

#include "cfh/jets.hpp"
#include "cfh/spaceform.hpp"

namespace cfh {

using MetricJet = std::array<std::array<Jet, 3>, 3>;
using MetricField = std::function<MetricJet(double, double, double)>;

// Point values of the Levi-Civita pipeline for a 3-metric, computed from
// order-3 metric jets. Index conventions: R(d_i, d_j) d_k = riem[l][i][j][k] d_l,
// ric(j,k) = riem[i][i][j][k] summed, sectional(i,j) along span(d_i, d_j).
struct CurvatureBundle {
    double g[3][3] = {};
    double ginv[3][3] = {};
    double gamma[3][3][3] = {};        // gamma[k][i][j] = Gamma^k_{ij}
    double riem[3][3][3][3] = {};
    double ric[3][3] = {};
    double scal = 0;
    double sectional[3][3] = {};
    double schouten[3][3] = {};        // Ric - (scal/4) g (lower indices)
    double cotton[3][3][3] = {};       // C_{ijk} = grad_i P_{jk} - grad_j P_{ik}
    double cotton_norm = 0;            // |C| in the metric norm
    double codazzi_standard = 0;       // Codazzi defect of the standard Schouten
    double bianchi_residual = 0;       // first Bianchi identity check (relative)
    double curvature_scale = 0;        // max |sectional| (for scaled residuals)

    double scaled_cotton() const { return cotton_norm / (curvature_scale + 1.0); }
    double scaled_codazzi() const { return codazzi_standard / (curvature_scale + 1.0); }
};

CurvatureBundle curvature_bundle(const MetricJet& gj);

// Codazzi defect of the endomorphism Ric - coeff * scal * Id; the standard
// three-dimensional Schouten corresponds to coeff = 1/4.
double codazzi_residual(const MetricJet& gj, double coeff);

struct LameData {
    Jet v[3];          // v_i = sqrt(g_ii)
    Jet phi[3][3];     // phi[i][j] = (d_i v_j) / v_i, defined off-diagonal
    double K[3][3];    // sectional curvatures from the orthogonal-metric formulas
    double ell[3];     // eigenvalues of the Schouten endomorphism
    double psi[3];     // psi_i = ell_i v_i
    double codazzi_psi = 0;        // max |psi_{i,j} - phi^{ji} psi_j|
    double offdiag = 0;            // largest off-diagonal metric entry
    double vs_tensor_route = 0;    // max |K_ij(Lame) - K_ij(tensor)|
};

// Orthogonal-coordinate curvature via the Lame-coefficient formulas,
// cross-checked against the tensor pipeline.
LameData lame_curvatures(const MetricJet& gj);

struct GuichardResiduals {
    double f23 = 0;    // alpha_23 + alpha_2 (alpha - beta)_3
    double h13 = 0;    // beta_13 - beta_1 (alpha - beta)_3
    double conf4 = 0;
    double conf5 = 0;
    double conf6 = 0;
    double h11f22 = 0; // beta_11 + beta_1 (beta - alpha)_1 - (phi^12)_1 e^(alpha-beta)
    double max5() const {
        return std::max({std::abs(f23), std::abs(h13), std::abs(conf4), std::abs(conf5),
                         std::abs(conf6)});
    }
};

// The conformal-flatness system for the normalized metric
// e^{2 alpha} dx1^2 + e^{2 beta} dx2^2 + dx3^2, evaluated literally from
// order-3 jets of alpha and beta.
GuichardResiduals guichard_residuals(const Jet& alpha, const Jet& beta);

// Point samples of an orthonormal principal frame with curvatures, in the
// coordinate frame of a parameter domain.
struct FrameSample {
    std::array<double, 3> lam{};
    std::array<std::array<double, 3>, 3> e{};  // e[i] = coordinate components of e_i
    bool valid = true;
};
using FrameProbe = std::function<FrameSample(const std::array<double, 3>&)>;

struct CartanResiduals {
    double uno = 0;   // max |<nabla_{e_i} e_j, e_k>| over distinct triples
    double dos = 0;   // cyclic eigenvalue-derivative relation
    double tres = 0;  // nabla_{e_i} e_i - sum_j (lam_i - lam_j)^{-1} e_j(lam_i) e_j
};

// Frame-based conformal-flatness conditions; derivatives of the frame and the
// eigenvalues use 4th-order central differences of the probe at step h.
CartanResiduals cartan_conditions(const FrameProbe& frame, const MetricField& metric,
                                  const std::array<double, 3>& u, double h);

}  // namespace cfh
