#pragma once

#include <Eigen/Dense>

#include "cfh/jets.hpp"

namespace cfh {

using Vec = Eigen::VectorXd;

// The three simply connected space forms of curvature eps in {-1, 0, +1},
// modeled as quadrics in (pseudo-)Euclidean ambient space. The Lorentz
// signature is (-,+,+,+) with the negative direction first; hyperbolic points
// live on the sheet with positive first coordinate.
struct SpaceForm {
    int eps = 0;

    int mu() const { return eps == -1 ? 1 : 0; }
    // Ambient dimension of the quadric alone (3 for eps=0, 4 otherwise).
    int quadric_dim() const { return eps == 0 ? 3 : 4; }
    // Ambient dimension once the line factor is appended (last coordinate).
    int product_dim() const { return eps == 0 ? 4 : 5; }
};

struct TrigPair {
    double c, s;    // C(s), S(s)
    double dc, ds;  // C'(s) = -eps S(s), S'(s) = C(s)
};

// Curvature-indexed trigonometric pair: (cos, sin) on the sphere, (1, s) in
// the flat case, (cosh, sinh) in the hyperbolic case.
TrigPair cs_pair(int eps, double s);

// Jet versions, composable with an arbitrary jet argument.
Jet cs_c_jet(int eps, const Jet& s);
Jet cs_s_jet(int eps, const Jet& s);

// Symmetric bilinear form; the first coordinate is negated iff form.mu() = 1.
double form_inner(const SpaceForm& form, const Vec& u, const Vec& v);

struct QuadricCheck {
    double residual = 0.0;  // |<p,p> - eps| (0 for eps = 0)
    bool wrong_sheet = false;
};

// Distance of p from the quadric level set <p,p> = eps. For eps = -1 the
// hyperboloid sheet with p[0] > 0 is required; the other sheet is flagged
// separately from an off-quadric point.
QuadricCheck membership(const SpaceForm& form, const Vec& p);

}  // namespace cfh
