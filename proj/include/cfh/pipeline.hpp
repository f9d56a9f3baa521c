#pragma once

#include <map>
#include <memory>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "cfh/cyclic.hpp"
#include "cfh/diagnostics.hpp"
#include "cfh/mesh_io.hpp"

namespace cfh {

// Exit codes of the command-line driver.
enum ExitCode {
    kExitOk = 0,
    kExitVerificationFailed = 1,
    kExitConfigError = 2,
    kExitDomainError = 3,
    kExitIoError = 4,
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    int eps = 0;
    nlohmann::json chart;                             // catalog parameter block
    std::optional<std::array<double, 3>> weingarten;  // explicit (P,Q,R); nullopt = fit
    double s0 = 0.0;
    double scan_lo = -1.0, scan_hi = 1.0;
    int interval_index = -1;  // -1: window containing s0, else the widest one
    int n1 = 8, n2 = 8, ns = 6;
    std::vector<ConformalMap> pipeline;  // applied left to right
    std::map<std::string, double> tolerances;
    std::uint64_t seed = 1;
    std::string output_dir;
    double profile_perturbation = 0.0;  // adds perturb * s^2 to a(s)
    double margin_frac = 0.05;          // inset applied to root endpoints of the window
    bool csv_full = false;              // per-point CSV rows instead of the summary
    nlohmann::json raw;                 // verbatim echo for reports
};

RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config_file(const std::string& path);

std::map<std::string, double> default_tolerances();
std::uint64_t fnv1a_hash(const std::string& data);
extern const char* kCodeVersion;

// ---------------------------------------------------------------------------

struct BuildResult {
    std::shared_ptr<SurfaceChart> chart;
    std::shared_ptr<HypersurfacePatch> patch;
    WeingartenCoefficients coefficients;
    ProofConstants constants;
    std::vector<Interval> intervals;  // all admissible windows in the scan range
    Interval window;                  // the chosen one
    std::vector<double> grid_x1, grid_x2, grid_s;
    Rect3 domain3;                    // parameter box actually gridded
    nlohmann::json summary;           // deterministic build record
    std::vector<double> grid_samples; // per-point f, eta, lambda_i, sigma_min (row-major)
    int sample_stride = 0;
};

BuildResult run_build(const RunConfig& cfg);

// Summary of one named residual over the grid.
struct CheckSummary {
    std::string name;
    int count = 0;
    double max_raw = 0.0;
    double max_scaled = 0.0;
    double tolerance = 0.0;
    bool pass = true;
};

struct VerifyResult {
    std::vector<CheckSummary> checks;
    bool all_pass = true;
    nlohmann::json report;  // the full residual report
    std::string csv;
    double min_eigen_gap = 0.0;
    double min_regularity = 0.0;
};

VerifyResult run_verify(const RunConfig& cfg, const BuildResult& build);

struct CyclicResult {
    BatteryResult battery;
    double killing_angle = 0.0;     // designated field per space form
    std::string killing_field_name;
    nlohmann::json fit_report;      // per-curve and per-slice fit records
    nlohmann::json report;
    int excluded_points = 0;        // map-domain violations
    bool pass = true;
};

CyclicResult run_map_cyclic(const RunConfig& cfg, const BuildResult& build);

// Export helpers: s = const leaves as quad meshes, distinguished curvature
// lines as polylines (after the configured map pipeline).
std::string export_slices(const RunConfig& cfg, const BuildResult& build,
                          const Projection& proj, const std::string& format);
std::string export_lines(const RunConfig& cfg, const BuildResult& build,
                         const Projection& proj);

// The designated conformal Killing field per space form.
KillingField designated_field(int eps);

// Deterministic inversion center outside the image of the mapped build.
Vec4 inversion_center_outside(const BuildResult& build, const std::vector<ConformalMap>& pre);

}  // namespace cfh
