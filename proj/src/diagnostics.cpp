#include "cfh/diagnostics.hpp"

#include <cmath>

namespace cfh {

namespace {

struct PatchJets {
    std::array<std::array<Jet, 3>, 3> g;
    Jet alpha, beta, B;
    Jet k1s, k2s;  // principal curvatures of the frozen parallel surface
};

PatchJets patch_jets(const HypersurfacePatch& patch, double x1, double x2, double s) {
    PatchJets out;
    out.g = patch.metric_jet(x1, x2, s);
    Jet logg33 = jlog(out.g[2][2]);
    out.B = 0.5 * logg33;
    out.alpha = 0.5 * (jlog(out.g[0][0]) - logg33);
    out.beta = 0.5 * (jlog(out.g[1][1]) - logg33);

    JVec f = patch.f_jet(x1, x2, s);
    JVec eta = patch.eta_jet(x1, x2, s);
    int mu = patch.form().mu();
    JVec f1 = f.derivative(0), f2 = f.derivative(1);
    out.k1s = jdot(mu, f1.derivative(0), eta) / out.g[0][0];
    out.k2s = jdot(mu, f2.derivative(1), eta) / out.g[1][1];
    return out;
}

}  // namespace

void alpha_beta_jets(const HypersurfacePatch& patch, double x1, double x2, double s, Jet& alpha,
                     Jet& beta) {
    PatchJets pj = patch_jets(patch, x1, x2, s);
    alpha = pj.alpha;
    beta = pj.beta;
}

ProofDiagnostics proof_diagnostics(const HypersurfacePatch& patch, double x1, double x2,
                                   double s, const std::optional<ProofConstants>& constants) {
    PatchJets pj = patch_jets(patch, x1, x2, s);
    double e = patch.form().eps;

    Jet e2B = jexp(2.0 * pj.B);
    Jet Ks = pj.k1s * pj.k2s;
    Jet Hs = 0.5 * (pj.k1s + pj.k2s);
    Jet Bp = pj.B.derivative(2);
    Jet phi = (e2B - 1.0) * Ks + 2.0 * Bp * Hs;

    ProofDiagnostics d;
    d.phi = phi.value();
    d.phi1 = phi.derivative(0).value();
    d.phi2 = phi.derivative(1).value();
    d.phi3 = phi.derivative(2).value();

    double Bpv = Bp.value();
    double Bppv = Bp.derivative(2).value();
    double e2Bv = e2B.value();
    d.theta = e * e2Bv + Bppv - e + d.phi - 2.0 * Bpv * Bpv;
    d.system_line1 = d.phi3 - 2.0 * Bpv * (e + d.phi);
    d.system_line2 = e + 2.0 * Bpv * Bpv - e * e2Bv - Bppv - d.phi;
    d.phi3_full = d.phi3 - 2.0 * pj.k2s.value() * d.theta - 2.0 * Bpv * (e + d.phi);

    // rho from its alpha/beta definition and from the closed-form identity.
    Jet a2 = pj.alpha.derivative(1), a1 = pj.alpha.derivative(0), a3 = pj.alpha.derivative(2);
    Jet b1 = pj.beta.derivative(0), b2 = pj.beta.derivative(1), b3 = pj.beta.derivative(2);
    Jet U = jexp(-2.0 * pj.beta) * (a2.derivative(1) + a2 * a2 - a2 * b2);
    Jet V = jexp(-2.0 * pj.alpha) * (b1.derivative(0) + b1 * b1 - a1 * b1);
    Jet W = a3.derivative(2) + a3 * a3 + b3.derivative(2) + b3 * b3 - a3 * b3;
    d.rho = (U + V - W).value();
    d.rho_identity = d.rho - (2.0 * Bppv - Bpv * Bpv - e * e2Bv + 2.0 * e - d.phi);

    d.alpha3_identity = a3.value() + pj.k1s.value() + Bpv;
    d.beta3_identity = b3.value() + pj.k2s.value() + Bpv;
    d.alpha33_identity =
        a3.derivative(2).value() + e + pj.k1s.value() * pj.k1s.value() + Bppv;

    if (constants) {
        double expected = constants->lambda * e2Bv - e;
        d.phi_vs_lambda = std::abs(d.phi - expected);
    }
    return d;
}

std::map<std::string, Residual> point_checks(const HypersurfacePatch& patch, double x1,
                                             double x2, double s,
                                             const std::optional<ProofConstants>& constants) {
    std::map<std::string, Residual> out;
    const SpaceForm& form = patch.form();
    int mu = form.mu();

    JVec f = patch.f_jet(x1, x2, s);
    JVec eta = patch.eta_jet(x1, x2, s);
    std::array<JVec, 3> df = {f.derivative(0), f.derivative(1), f.derivative(2)};

    MetricJet gj = patch.metric_jet(x1, x2, s);
    CurvatureBundle bundle = curvature_bundle(gj);
    double cscale = bundle.curvature_scale + 1.0;
    auto put = [&](const std::string& name, double raw, double scale = 1.0) {
        out[name] = Residual{std::abs(raw), std::abs(raw) / scale};
    };

    // Normal-field certifications.
    put("eta_unit", jdot(mu, eta, eta).value() - 1.0);
    for (int i = 0; i < 3; ++i)
        put("eta_orth_" + std::to_string(i + 1), jdot(mu, df[i], eta).value());

    // Block structure of the induced metric.
    double gsc = std::max({std::abs(gj[0][0].value()), std::abs(gj[1][1].value()),
                           std::abs(gj[2][2].value())});
    put("metric_cross_13", gj[0][2].value(), gsc);
    put("metric_cross_23", gj[1][2].value(), gsc);
    put("metric_cross_12", gj[0][1].value(), gsc);

    // b^2 r = 1 on unperturbed builds (g_33 = b^2).
    double r = eval_r(patch.profile().coefficients(), form, s);
    put("b2_r_identity", gj[2][2].value() * r - 1.0);

    // Conformal flatness: Cotton and the Codazzi defect of the Schouten tensor.
    out["cotton"] = Residual{bundle.cotton_norm, bundle.scaled_cotton()};
    out["codazzi_schouten"] = Residual{bundle.codazzi_standard, bundle.scaled_codazzi()};
    put("bianchi", bundle.bianchi_residual);

    // Flatness system residuals for the normalized exponents.
    PatchJets pjets = patch_jets(patch, x1, x2, s);
    GuichardResiduals gr = guichard_residuals(pjets.alpha, pjets.beta);
    put("pde_f23", gr.f23, cscale);
    put("pde_h13", gr.h13, cscale);
    put("pde_conf4", gr.conf4, cscale);
    put("pde_conf5", gr.conf5, cscale);
    put("pde_conf6", gr.conf6, cscale);
    put("pde_h11f22", gr.h11f22, cscale);

    // phi/theta diagnostics.
    ProofDiagnostics pd = proof_diagnostics(patch, x1, x2, s, constants);
    put("theta", pd.theta, cscale);
    put("phi_x1", pd.phi1, cscale);
    put("phi_x2", pd.phi2, cscale);
    put("system_line1", pd.system_line1, cscale);
    put("system_line2", pd.system_line2, cscale);
    put("phi3_full", pd.phi3_full, cscale);
    put("rho_identity", pd.rho_identity, cscale);
    put("alpha3_identity", pd.alpha3_identity, cscale);
    put("beta3_identity", pd.beta3_identity, cscale);
    put("alpha33_identity", pd.alpha33_identity, cscale);
    if (constants) put("phi_vs_lambda", pd.phi_vs_lambda, cscale);

    // Transport route of the shape operator against the direct one; principal
    // angle of the line-factor tangent.
    ShapeOp so = patch.shape_operator(x1, x2, s);
    put("sff_dual_route", so.route_discrepancy);
    out["eigen_gap"] = Residual{so.min_gap, so.min_gap};

    Vec T = patch.t_tangent(x1, x2, s);
    // Compare against the coordinate direction f_* d_s (exact eigendirection
    // when the angle vanishes).
    Vec fs(f.n);
    for (int i = 0; i < f.n; ++i) fs[i] = df[2][i].value();
    double tn = std::sqrt(form_inner(form, T, T));
    double fn = std::sqrt(form_inner(form, fs, fs));
    double ct = form_inner(form, T, fs) / (tn * fn);
    ct = std::min(1.0, std::max(-1.0, std::abs(ct)));
    put("t_tangent_angle", std::acos(ct));

    // Persistence of the off-block Lame ratios: (phi^{ij})_3 = 0 for i != j in {1,2}.
    LameData ld = lame_curvatures(gj);
    put("phi12_s", ld.phi[0][1].derivative(2).value(), cscale);
    put("phi21_s", ld.phi[1][0].derivative(2).value(), cscale);
    put("lame_vs_tensor", ld.vs_tensor_route, cscale);

    // eq of parallel-ratio persistence: v^s_{j,i}/v^s_i at s equals its value
    // at the base point of the window.
    double s0 = patch.profile().s0();
    MetricJet g0 = patch.metric_jet(x1, x2, s0);
    LameData ld0 = lame_curvatures(g0);
    // phi^{ij} of the slice metric equals v^s_{j,i}/v^s_i (the b factors drop
    // out of the ratio only in the off-block entries, so compare those).
    put("parallel_ratio_12", ld.phi[0][1].value() - ld0.phi[0][1].value(), cscale);
    put("parallel_ratio_21", ld.phi[1][0].value() - ld0.phi[1][0].value(), cscale);

    return out;
}

}  // namespace cfh
