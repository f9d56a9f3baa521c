#pragma once

#include <vector>

#include "cfh/jets.hpp"
#include "cfh/spaceform.hpp"

namespace cfh {

using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

// One stage of the map pipeline into R^4. "phi" adapts to the space form:
// the exponential cone map (x,t) -> e^t x on the sphere product, the
// circle-covering map on the hyperbolic product, the factor-collapsing
// identity in the flat case. "inversion" is the conformal involution about
// the sphere |y - center| = radius.
struct ConformalMap {
    enum class Kind { phi, inversion, identity } kind = Kind::phi;
    Vec4 center = Vec4::Zero();
    double radius = 1.0;
};

// Pseudo-orthonormal basis used for the hyperbolic covering map, expressed in
// the standard (-,+,+,+) coordinates: e0 = (1,0,0,1), e1, e2 the spatial
// axes, e3 = (1,0,0,-1)/4, so <e0,e0> = <e3,e3> = 0 and <e0,e3> = -1/2.
// The light-cone coordinate of a standard point p is x0 = (p[0] + p[3]) / 2.

// Apply one map to a product-space point (jets); p has dimension 4 (eps = 0)
// or 5 (eps = +-1) for "phi", and 4 afterwards.
JVec apply_map_jet(const ConformalMap& map, int eps, const JVec& p);
JVec apply_pipeline_jet(const std::vector<ConformalMap>& maps, int eps, const JVec& p);

// Value-level conveniences.
Vec apply_map(const ConformalMap& map, int eps, const Vec& p);
Vec apply_pipeline(const std::vector<ConformalMap>& maps, int eps, const Vec& p);

struct Conformality {
    double lambda = 0;    // scale factor of the differential
    double residual = 0;  // Frobenius defect of J^T J - lambda^2 I on an orthonormal frame
};

// Numerical conformality of one map at a product-space point (4th-order
// central differences along geodesic-normalized parameter curves).
Conformality map_conformality(const ConformalMap& map, int eps, const Vec& p,
                              double h = 1e-5);

// Conformal Killing fields of flat R^4: constants, rotations, the radial
// field, and the special conformal fields.
struct KillingField {
    enum class Kind { constant_axis, rotation, radial, special } kind = Kind::radial;
    int i = 0, j = 1;  // axes for constant_axis / rotation / special
};

Vec4 killing_eval(const KillingField& f, const Vec4& y);
Mat4 killing_jacobian(const KillingField& f, const Vec4& y);
// Defect of the conformal Killing equation at y: the trace-free part of the
// symmetrized Jacobian.
double killing_conformal_residual(const KillingField& f, const Vec4& y);

// |Phi_* d_t - field(Phi(p))| at a product point p, by numerical pushforward.
double relatedness_residual(const ConformalMap& map, int eps, const KillingField& field,
                            const Vec& p, double h = 1e-5);

}  // namespace cfh
