#pragma once

#include <Eigen/Dense>
#include <vector>

namespace cfh {

using Vec4 = Eigen::Vector4d;

struct CircleFit {
    Vec4 center = Vec4::Zero();
    double radius = 0.0;
    Eigen::Matrix<double, 4, 2> plane;  // orthonormal in-plane directions
    double rms_residual = 0.0;
    double max_residual = 0.0;
    bool degenerate_line = false;   // collinear input: best-fit line instead
    Vec4 line_point = Vec4::Zero();
    Vec4 line_dir = Vec4::Zero();
};

struct SphereFit {
    Vec4 center = Vec4::Zero();
    double radius = 0.0;
    double rms_residual = 0.0;
    double max_residual = 0.0;
    bool degenerate_hyperplane = false;  // quadratic coefficient below threshold
    Vec4 plane_normal = Vec4::Zero();
    double plane_offset = 0.0;  // <n,x> = offset for the hyperplane case
};

// Best circle through points in R^4: principal-component plane, Taubin
// algebraic initialization, Gauss-Newton geometric refinement. Residuals are
// full R^4 distances to the fitted circle. Collinear inputs degrade to a line
// fit with the degenerate flag set. Requires >= 3 non-coincident points.
CircleFit fit_circle(const std::vector<Vec4>& pts);

// Best hypersphere |x|^2 - 2<c,x> + gamma = 0 through points in R^4 by total
// least squares on the lifted coordinates; detects the affine-hyperplane
// degeneration. Requires >= 5 points spanning >= 3 affine dimensions.
SphereFit fit_sphere(const std::vector<Vec4>& pts);

// Containment fit for a curve inside a two-dimensional sphere (or affine
// 2-plane) of R^4: rank-aware principal flat plus an in-flat sphere fit.
// Returns the max distance of the points to the fitted object, scaled by the
// object's size.
struct TwoSphereFit {
    double max_residual = 0.0;
    double scale = 1.0;  // fitted radius or point-cloud extent
    bool planar = false; // points already lie in an affine 2-plane
};
TwoSphereFit fit_two_sphere_containment(const std::vector<Vec4>& pts);

}  // namespace cfh
