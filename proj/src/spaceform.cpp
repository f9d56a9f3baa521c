#include "cfh/spaceform.hpp"

#include <cmath>
#include <stdexcept>

namespace cfh {

TrigPair cs_pair(int eps, double s) {
    switch (eps) {
        case 1:
            return {std::cos(s), std::sin(s), -std::sin(s), std::cos(s)};
        case 0:
            return {1.0, s, 0.0, 1.0};
        case -1:
            return {std::cosh(s), std::sinh(s), std::sinh(s), std::cosh(s)};
        default:
            throw std::invalid_argument("eps must be -1, 0 or +1");
    }
}

Jet cs_c_jet(int eps, const Jet& s) {
    switch (eps) {
        case 1:
            return jcos(s);
        case 0:
            return Jet::constant(1.0);
        case -1:
            return jcosh(s);
        default:
            throw std::invalid_argument("eps must be -1, 0 or +1");
    }
}

Jet cs_s_jet(int eps, const Jet& s) {
    switch (eps) {
        case 1:
            return jsin(s);
        case 0:
            return s;
        case -1:
            return jsinh(s);
        default:
            throw std::invalid_argument("eps must be -1, 0 or +1");
    }
}

double form_inner(const SpaceForm& form, const Vec& u, const Vec& v) {
    if (u.size() != v.size()) throw std::invalid_argument("inner product dimension mismatch");
    double r = u.dot(v);
    if (form.mu() == 1) r -= 2.0 * u[0] * v[0];
    return r;
}

QuadricCheck membership(const SpaceForm& form, const Vec& p) {
    QuadricCheck out;
    if (form.eps == 0) return out;
    out.residual = std::abs(form_inner(form, p, p) - form.eps);
    if (form.eps == -1 && p[0] <= 0.0) out.wrong_sheet = true;
    return out;
}

}  // namespace cfh
