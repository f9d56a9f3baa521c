#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "cfh/jets.hpp"
#include "cfh/spaceform.hpp"

namespace cfh {

struct Rect {
    double x1lo = 0, x1hi = 1, x2lo = 0, x2hi = 1;
    bool contains(double x1, double x2, double slack = 1e-12) const {
        return x1 >= x1lo - slack && x1 <= x1hi + slack && x2 >= x2lo - slack &&
               x2 <= x2hi + slack;
    }
    double scale() const { return std::max(x1hi - x1lo, x2hi - x2lo); }
};

// Immersion jets evaluated at one parameter point: the position and all mixed
// partials in (x1, x2) up to the requested order.
struct SurfaceJet {
    JVec jets;  // axes 0,1 carry the surface parameters
    int order = 4;
    int dim() const { return jets.n; }
    Vec point() const {
        Vec p(jets.n);
        for (int i = 0; i < jets.n; ++i) p[i] = jets[i].value();
        return p;
    }
    // Partial derivative d^{i+j} h / dx1^i dx2^j as an ambient vector.
    Vec partial(int i, int j) const {
        Vec p(jets.n);
        for (int a = 0; a < jets.n; ++a) p[a] = jets[a].deriv(i, j, 0);
        return p;
    }
};

struct PrincipalData {
    double v1 = 0, v2 = 0;  // Lame coefficients of the first fundamental form
    double V1 = 0, V2 = 0;  // second-form coefficients, II = V1 v1 dx1^2 + V2 v2 dx2^2
    double k1 = 0, k2 = 0;  // principal curvatures k_i = V_i / v_i
    double Kext = 0, H = 0;
    Vec e1, e2;             // unit principal directions in ambient coordinates
    double off_diag_I = 0;  // |<h_1, h_2>|
    double off_diag_II = 0; // |<h_12, N>|
};

class SurfaceChart {
public:
    SurfaceChart(SpaceForm form, Rect domain, std::string name)
        : form_(form), domain_(domain), name_(std::move(name)) {}
    virtual ~SurfaceChart() = default;

    const SpaceForm& form() const { return form_; }
    const Rect& domain() const { return domain_; }
    const std::string& name() const { return name_; }

    // Immersion and unit normal with the chart's documented orientation.
    // Arguments are jets seeded on axes 0 and 1.
    virtual JVec position_jet(const Jet& x1, const Jet& x2) const = 0;
    virtual JVec normal_jet(const Jet& x1, const Jet& x2) const = 0;

    // Constant-coefficient witness P K_ext + Q H = R when one is documented.
    virtual std::optional<std::array<double, 3>> documented_witness() const {
        return std::nullopt;
    }

    SurfaceJet jet_at(double x1, double x2, int order = 4) const;
    Vec normal_at(double x1, double x2) const;
    PrincipalData principal_at(double x1, double x2) const;
    double min_umbilic_gap(int n1 = 17, int n2 = 17) const;

protected:
    SpaceForm form_;
    Rect domain_;
    std::string name_;
};

// Frozen-parameter parallel surface h_s = C(s) h + S(s) N with its transported
// normal N_s = C(s) N - eps S(s) h.
class ParallelChart : public SurfaceChart {
public:
    ParallelChart(std::shared_ptr<const SurfaceChart> base, double s);
    JVec position_jet(const Jet& x1, const Jet& x2) const override;
    JVec normal_jet(const Jet& x1, const Jet& x2) const override;

private:
    std::shared_ptr<const SurfaceChart> base_;
    double cs_, ss_;
};

struct WeingartenFit {
    double P = 0, Q = 0, R = 0;  // normalized so max(|P|,|Q|,|R|) = 1
    double residual = 0;         // max_i |P K_i + Q H_i - R|
    bool non_unique = false;     // constant (K,H): one-parameter family
};

// Least-squares fit of the affine relation P K_ext + Q H = R over samples.
WeingartenFit weingarten_fit(const SurfaceChart& chart,
                             const std::vector<std::pair<double, double>>& samples);

// Builds a catalog chart from its JSON parameter block, validating parameter
// ranges and the umbilic gap over the requested domain.
// Kinds: cylinder {radius | plane_curve}, pseudosphere {u_range}, flat_torus
// {r1}, equidistant_tube {d}, user_defined {id, params}.
std::shared_ptr<SurfaceChart> make_chart(const nlohmann::json& spec, int eps,
                                         double umbilic_gap = 1e-3);

}  // namespace cfh
