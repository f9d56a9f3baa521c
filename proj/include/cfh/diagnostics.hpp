#pragma once

#include <map>
#include <optional>
#include <string>

#include "cfh/construction.hpp"
#include "cfh/curvature.hpp"

namespace cfh {

struct ProofConstants {
    double c1 = 0, c2 = 0, lambda = 0;
};

// The scalar identities that certify conformal flatness of an assembled
// hypersurface at one point: the auxiliary function phi built from the
// parallel-surface curvatures, its parameter derivatives, the combination
// theta, and the closed-form rho of the flatness system.
struct ProofDiagnostics {
    double phi = 0;
    double phi1 = 0, phi2 = 0, phi3 = 0;
    double theta = 0;
    double rho = 0;
    double rho_identity = 0;     // rho vs 2B'' - (B')^2 - eps e^{2B} + 2 eps - phi
    double system_line1 = 0;     // phi' - 2 B' (eps + phi)
    double system_line2 = 0;     // eps + 2(B')^2 - eps e^{2B} - B'' - phi (= -theta)
    double phi3_full = 0;        // phi_3 - 2 k2s theta - 2 B'(eps + phi)
    double alpha3_identity = 0;  // alpha_3 + k1s + B'
    double beta3_identity = 0;   // beta_3 + k2s + B'
    double alpha33_identity = 0; // alpha_33 + eps + (k1s)^2 + B''
    double phi_vs_lambda = 0;    // |phi - (lambda e^{2B} - eps)| when constants given
};

ProofDiagnostics proof_diagnostics(const HypersurfacePatch& patch, double x1, double x2,
                                   double s,
                                   const std::optional<ProofConstants>& constants = {});

// One named residual with raw and curvature-scaled values.
struct Residual {
    double raw = 0;
    double scaled = 0;
};

// Every per-point certification of a build, keyed by check name. The scale
// divisor is max |sectional curvature| + 1 at the point.
std::map<std::string, Residual> point_checks(const HypersurfacePatch& patch, double x1,
                                             double x2, double s,
                                             const std::optional<ProofConstants>& constants = {});

// Jets of the normalized metric exponents: e^alpha = v1s/b, e^beta = v2s/b.
void alpha_beta_jets(const HypersurfacePatch& patch, double x1, double x2, double s, Jet& alpha,
                     Jet& beta);

}  // namespace cfh
