#pragma once

#include <functional>
#include <vector>

#include "cfh/conformal.hpp"
#include "cfh/construction.hpp"
#include "cfh/curvature.hpp"
#include "cfh/fitting.hpp"

namespace cfh {

struct Rect3 {
    double lo[3] = {0, 0, 0};
    double hi[3] = {1, 1, 1};
    double scale() const {
        return std::max({hi[0] - lo[0], hi[1] - lo[1], hi[2] - lo[2]});
    }
};

// A hypersurface of flat R^4 given by exact parameter jets.
struct ImmersionR4 {
    std::function<JVec(double, double, double)> jet;  // axes 0,1,2; output dim 4
    Rect3 domain;
    // Preferred tangent direction used to label e_1 (coordinate components);
    // empty disables the preference and e_1 is the largest-curvature direction.
    std::function<V3(double, double, double)> e1_hint;
};

// Composition of a built patch with a conformal pipeline into R^4.
ImmersionR4 compose_immersion(const HypersurfacePatch& patch,
                              const std::vector<ConformalMap>& pipeline, Rect3 domain);

// Generic graph hypersurface (u, w(u)) with three distinct curvatures and no
// cyclic structure; negative control.
ImmersionR4 make_graph_control();

// Round hypersphere patch (fully umbilic).
ImmersionR4 make_round_sphere(double radius);

struct PrincipalFrame {
    std::array<double, 3> lam{};       // lam[0] belongs to e_1
    Mat3 e_param;                      // columns: coordinate components of e_i
    Eigen::Matrix<double, 4, 3> E;     // columns: F_* e_i (unit, R^4)
    Vec4 normal = Vec4::Zero();
    Mat3 G;                            // induced metric
    double min_gap = 0;
    double orthonormality = 0;         // Gram defect of the E columns
};

// Eigen-frame of the shape operator of F at u; throws when the pairwise
// eigenvalue gaps fall under min_gap (near-umbilic point).
PrincipalFrame principal_frame(const ImmersionR4& F, const V3& u, double min_gap = 1e-5);

struct PropQuantities {
    double rho2 = 0, rho3 = 0;         // rho_j = e_j(lam_1) / (lam_1 - lam_j)
    double e1_rho2 = 0, e1_rho3 = 0;   // cyclic criterion: both vanish
    double item3_2 = 0, item3_3 = 0;   // (lam1-lamj) e_j e_1(lam1) - 2 e_1(lam1) e_j(lam1)
    double mu = 0;
    double e2_mu = 0, e3_mu = 0;       // parallelism of the umbilical normal direction
    double intrinsic_circle2 = 0;      // <nabla_{e1} nabla_{e1} e1, e_j> vs e_1(rho_j)
    double intrinsic_circle3 = 0;
    double scale = 1.0;                // 1 + |rho_2| + |rho_3|
};

// Directional-derivative residuals of the cyclic criteria at u; all
// derivatives by 4th-order parameter-space stencils at step h.
PropQuantities prop_quantities(const ImmersionR4& F, const V3& u, double h);

struct TraceResult {
    std::vector<Vec4> points;          // R^4 samples along the integral curve
    std::vector<V3> params;            // parameter-space path
    bool left_domain = false;
};

// Integral curve of the distinguished principal field through u0 (both
// directions, 4th-order Runge-Kutta in parameter space, unit metric speed).
// mode "t_tangent" follows the pushed line-factor tangent (defined even at
// curvature collisions); mode "principal" follows the e_1 eigenvector field.
enum class TraceMode { principal, t_tangent };
TraceResult trace_curvature_line(const ImmersionR4& F, const V3& u0, double arclen,
                                 int n_steps, TraceMode mode = TraceMode::principal);

// Angle between the tangent projection of the field along F and the nearest
// principal direction.
double killing_alignment(const ImmersionR4& F, const KillingField& field, const V3& u);
// Same, but against the pushed line-factor tangent; defined at collisions.
double killing_alignment_t(const ImmersionR4& F, const KillingField& field, const V3& u);

// Metric field of the immersion for the frame-based flatness conditions.
MetricField immersion_metric(const ImmersionR4& F);
FrameProbe immersion_frame_probe(const ImmersionR4& F, double min_gap = 1e-5);

struct BatteryResult {
    // Item residuals, maxima over the sample set (scaled where stated).
    double item1_intrinsic = 0;   // integral curves are intrinsic circles
    double item2 = 0;             // e_1(rho_j) = 0
    double item3 = 0;
    double item4_containment = 0; // traces inside 2-spheres / 2-planes (scaled)
    double item5_sphere = 0;      // leaves inside hyperspheres (scaled)
    double item5_mu = 0;          // e_j(mu) = 0
    double circle_roundness = 0;  // best round-circle residual of traces (scaled)
    bool verdict_agreement = true;
    std::array<bool, 5> item_pass{};
};

struct BatteryOptions {
    int sample_n[3] = {4, 4, 3};
    double stencil_h = 1e-3;
    int n_traces = 20;
    double trace_arclen = 1.0;
    int trace_steps = 120;
    int n_slices = 12;
    int slice_n1 = 10, slice_n2 = 10;
    double tol_items = 1e-4;      // items (1)-(3), (5 mu)
    double tol_fits = 1e-6;       // containment and sphere fits (scaled)
    TraceMode trace_mode = TraceMode::principal;
};

BatteryResult run_battery(const ImmersionR4& F, const BatteryOptions& opt);

}  // namespace cfh
