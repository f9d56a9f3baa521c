#pragma once

#include <memory>
#include <vector>

#include "cfh/charts.hpp"
#include "cfh/jets.hpp"
#include "cfh/spaceform.hpp"

namespace cfh {

using Mat3 = Eigen::Matrix3d;
using V3 = Eigen::Vector3d;

struct WeingartenCoefficients {
    double P = 0, Q = 0, R = 0;
    double Pbar = 0, Qbar = 0, Rbar = 0, Lambda = 0;
};

// Derived coefficients: Pbar = P + eps R, Qbar = Q, Rbar = P - eps R + 4,
// Lambda = 2 (eps^2 - 1) R.
WeingartenCoefficients derive_bars(double P, double Q, double R, const SpaceForm& form);

// The (c1, c2, lambda) parametrization of the same data; returns (P, Q, R).
std::array<double, 3> constants_to_pqr(double c1, double c2, double lambda,
                                       const SpaceForm& form);
// Inverse of constants_to_pqr.
std::array<double, 3> pqr_to_constants(double P, double Q, double R, const SpaceForm& form);

// Pointwise agreement of the two closed forms of r(s): the bar-coefficient
// expression against c1 C(2s) + c2 S(2s) + (1-eps^2) lambda S^2(s) +
// eps(eps+lambda)/2. Returns the max residual over a uniform sample.
double constants_r_crosscheck(double c1, double c2, double lambda, const SpaceForm& form,
                              double lo, double hi, int n = 101);

// r(s) = (Pbar C(2s) + Qbar S(2s) + Lambda S(s)^2 + Rbar) / 4 and r'(s).
double eval_r(const WeingartenCoefficients& cf, const SpaceForm& form, double s);
double eval_r_prime(const WeingartenCoefficients& cf, const SpaceForm& form, double s);
Jet r_jet(const WeingartenCoefficients& cf, const SpaceForm& form, const Jet& s);

struct Interval {
    double lo = 0, hi = 0;
    bool lo_is_root = false;  // endpoint produced by root refinement (vs scan clip)
    bool hi_is_root = false;
    double width() const { return hi - lo; }
    bool contains(double s) const { return s > lo && s < hi; }
};

// Maximal open subintervals of [lo, hi] where 0 < r < 1, endpoints refined by
// bisection to 1e-10. An empty result is a normal outcome.
std::vector<Interval> find_admissible_intervals(const WeingartenCoefficients& cf,
                                                const SpaceForm& form, double lo, double hi,
                                                int n = 512);

struct ProfileValues {
    double a = 0, ap = 0, app = 0;
    double b = 0, B = 0, Bp = 0;
};

// The profile data of a construction window: a(s) by adaptive quadrature of
// sqrt((1-r)/r) from s0, with all derivatives in closed form. An optional
// quadratic perturbation a -> a + perturb s^2 deliberately breaks the
// construction for negative controls.
class Profile {
public:
    Profile() = default;
    Profile(WeingartenCoefficients cf, SpaceForm form, double s0, Interval window,
            double perturb = 0.0);

    const Interval& window() const { return window_; }
    double s0() const { return s0_; }
    const WeingartenCoefficients& coefficients() const { return cf_; }
    const SpaceForm& form() const { return form_; }

    // Taylor jet of a at s on axis 2 (value by quadrature, derivatives exact).
    Jet a_jet(double s) const;
    ProfileValues eval(double s) const;
    double a_of(double s) const;

private:
    void require_inside(double s) const;
    WeingartenCoefficients cf_;
    SpaceForm form_;
    double s0_ = 0;
    Interval window_;
    double perturb_ = 0;
};

struct ShapeOp {
    Mat3 A;            // shape operator in the coordinate frame (direct route)
    Mat3 A_parallel;   // from the parallel-surface transport relation
    double route_discrepancy = 0;
    V3 eigenvalues;    // sorted descending
    Mat3 eigenvectors; // columns, coordinate-frame components, unit g-norm
    double min_gap = 0;
};

// The assembled hypersurface f(x,s) = C(s) h + S(s) N + a(s) e_t with unit
// normal eta = -(a'/b) N_s + (1/b) e_t.
class HypersurfacePatch {
public:
    HypersurfacePatch(std::shared_ptr<const SurfaceChart> chart, Profile profile);

    const SurfaceChart& chart() const { return *chart_; }
    const Profile& profile() const { return profile_; }
    const SpaceForm& form() const { return form_; }
    int ambient_dim() const { return form_.product_dim(); }

    JVec f_jet(double x1, double x2, double s) const;
    JVec eta_jet(double x1, double x2, double s) const;
    // Pullback metric as jets (order-3 content) in coordinates (x1, x2, s).
    std::array<std::array<Jet, 3>, 3> metric_jet(double x1, double x2, double s) const;

    ShapeOp shape_operator(double x1, double x2, double s) const;
    // Smallest eigenvalue of the coordinate Gram matrix.
    double regularity(double x1, double x2, double s) const;
    // Ambient tangent component of the unit field along the line factor.
    Vec t_tangent(double x1, double x2, double s) const;

private:
    std::shared_ptr<const SurfaceChart> chart_;
    Profile profile_;
    SpaceForm form_;
};

// Closed-form transformation of (K_ext, H) to the parallel surface at s.
// Throws when the denominator vanishes (focal point).
std::pair<double, double> curvature_transform(double K, double H, const SpaceForm& form,
                                              double s);

}  // namespace cfh
