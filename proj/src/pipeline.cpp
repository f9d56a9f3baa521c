#include "cfh/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace cfh {

using nlohmann::json;

const char* kCodeVersion = "cfh 0.1.0";

std::uint64_t fnv1a_hash(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::map<std::string, double> default_tolerances() {
    return {
        {"cotton", 1e-6},
        {"codazzi_schouten", 1e-6},
        {"pde_f23", 1e-6},
        {"pde_h13", 1e-6},
        {"pde_conf4", 1e-6},
        {"pde_conf5", 1e-6},
        {"pde_conf6", 1e-6},
        {"pde_h11f22", 1e-8},
        {"t_tangent_angle", 1e-7},
        {"eigen_gap_min", 1e-4},
        {"sff_dual_route", 1e-8},
        {"theta", 1e-7},
        {"phi_x1", 1e-7},
        {"phi_x2", 1e-7},
        {"system_line1", 1e-6},
        {"system_line2", 1e-6},
        {"phi3_full", 1e-6},
        {"rho_identity", 1e-6},
        {"alpha3_identity", 1e-8},
        {"beta3_identity", 1e-8},
        {"alpha33_identity", 1e-7},
        {"phi_vs_lambda", 1e-7},
        {"constants_roundtrip", 1e-12},
        {"b2_r_identity", 1e-12},
        {"eta_unit", 1e-10},
        {"eta_orth_1", 1e-10},
        {"eta_orth_2", 1e-10},
        {"eta_orth_3", 1e-10},
        {"metric_cross_12", 1e-10},
        {"metric_cross_13", 1e-10},
        {"metric_cross_23", 1e-10},
        {"phi12_s", 1e-8},
        {"phi21_s", 1e-8},
        {"parallel_ratio_12", 1e-8},
        {"parallel_ratio_21", 1e-8},
        {"lame_vs_tensor", 1e-8},
        {"bianchi", 1e-9},
        {"cartan_uno", 1e-5},
        {"cartan_dos", 1e-5},
        {"cartan_tres", 1e-5},
        {"circle_fit", 1e-6},
        {"sphere_fit", 1e-6},
        {"containment_fit", 1e-6},
        {"item2", 1e-4},
        {"item3", 1e-4},
        {"killing_angle", 1e-6},
        {"regularity_min", 1e-6},
    };
}

namespace {

ConformalMap parse_map(const json& j) {
    std::string kind = j.at("kind").get<std::string>();
    ConformalMap m;
    if (kind == "phi") {
        m.kind = ConformalMap::Kind::phi;
    } else if (kind == "identity") {
        m.kind = ConformalMap::Kind::identity;
    } else if (kind == "inversion") {
        m.kind = ConformalMap::Kind::inversion;
        auto c = j.at("center");
        for (int i = 0; i < 4; ++i) m.center[i] = c.at(i).get<double>();
        m.radius = j.at("radius").get<double>();
        if (m.radius <= 0) throw ConfigError("inversion radius must be positive");
    } else {
        throw ConfigError("unknown map kind: " + kind);
    }
    return m;
}

}  // namespace

RunConfig parse_config(const json& j) {
    RunConfig cfg;
    try {
        cfg.raw = j;
        cfg.eps = j.at("eps").get<int>();
        if (cfg.eps != -1 && cfg.eps != 0 && cfg.eps != 1)
            throw ConfigError("eps must be -1, 0 or +1");
        cfg.chart = j.at("chart");
        if (j.contains("weingarten")) {
            const auto& w = j.at("weingarten");
            if (w.is_string()) {
                if (w.get<std::string>() != "fit")
                    throw ConfigError("weingarten must be {P,Q,R} or \"fit\"");
            } else {
                cfg.weingarten = std::array<double, 3>{w.at("P").get<double>(),
                                                       w.at("Q").get<double>(),
                                                       w.at("R").get<double>()};
            }
        }
        cfg.s0 = j.value("s0", 0.0);
        if (j.contains("scan")) {
            cfg.scan_lo = j.at("scan").at(0).get<double>();
            cfg.scan_hi = j.at("scan").at(1).get<double>();
        }
        if (cfg.scan_lo >= cfg.scan_hi) throw ConfigError("empty scan range");
        cfg.interval_index = j.value("interval_index", -1);
        if (j.contains("grid")) {
            cfg.n1 = j.at("grid").value("n1", 8);
            cfg.n2 = j.at("grid").value("n2", 8);
            cfg.ns = j.at("grid").value("ns", 6);
        }
        if (cfg.n1 < 4 || cfg.n2 < 4 || cfg.ns < 4)
            throw ConfigError("grid sizes must be >= 4");
        if (j.contains("map_pipeline"))
            for (const auto& m : j.at("map_pipeline")) cfg.pipeline.push_back(parse_map(m));
        cfg.tolerances = default_tolerances();
        if (j.contains("thresholds"))
            for (auto it = j.at("thresholds").begin(); it != j.at("thresholds").end(); ++it) {
                double v = it.value().get<double>();
                if (v <= 0) throw ConfigError("tolerances must be positive");
                cfg.tolerances[it.key()] = v;
            }
        cfg.seed = j.value("seed", std::uint64_t(1));
        cfg.output_dir = j.value("output_dir", std::string("out"));
        cfg.profile_perturbation = j.value("profile_perturbation", 0.0);
        cfg.margin_frac = j.value("margin_frac", 0.05);
        cfg.csv_full = j.value("csv_full", false);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
    return parse_config(j);
}

namespace {

std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / double(n - 1);
    return v;
}

}  // namespace

BuildResult run_build(const RunConfig& cfg) {
    BuildResult br;
    try {
        br.chart = make_chart(cfg.chart, cfg.eps);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    SpaceForm form{cfg.eps};

    std::array<double, 3> pqr;
    if (cfg.weingarten) {
        pqr = *cfg.weingarten;
    } else {
        // Fit over a deterministic sample of the chart domain.
        const Rect& dom = br.chart->domain();
        std::vector<std::pair<double, double>> samples;
        for (int i = 0; i < 7; ++i)
            for (int j = 0; j < 7; ++j)
                samples.push_back({dom.x1lo + (dom.x1hi - dom.x1lo) * (i + 0.5) / 7.0,
                                   dom.x2lo + (dom.x2hi - dom.x2lo) * (j + 0.5) / 7.0});
        WeingartenFit fit = weingarten_fit(*br.chart, samples);
        if (fit.residual > 1e-8)
            throw DomainError("chart is not linear Weingarten: fit residual " +
                              fmt17(fit.residual));
        pqr = {fit.P, fit.Q, fit.R};
    }
    br.coefficients = derive_bars(pqr[0], pqr[1], pqr[2], form);
    auto c = pqr_to_constants(pqr[0], pqr[1], pqr[2], form);
    br.constants = ProofConstants{c[0], c[1], c[2]};

    br.intervals = find_admissible_intervals(br.coefficients, form, cfg.scan_lo, cfg.scan_hi);
    if (br.intervals.empty()) {
        double rlo = std::numeric_limits<double>::infinity(), rhi = -rlo;
        for (int i = 0; i <= 64; ++i) {
            double s = cfg.scan_lo + (cfg.scan_hi - cfg.scan_lo) * i / 64.0;
            double r = eval_r(br.coefficients, form, s);
            rlo = std::min(rlo, r);
            rhi = std::max(rhi, r);
        }
        throw DomainError("no admissible interval in the scan range: r spans [" + fmt17(rlo) +
                          ", " + fmt17(rhi) + "] but (0,1) is required");
    }
    int chosen = -1;
    if (cfg.interval_index >= 0) {
        if (cfg.interval_index >= int(br.intervals.size()))
            throw DomainError("interval_index out of range");
        chosen = cfg.interval_index;
    } else {
        for (size_t i = 0; i < br.intervals.size(); ++i)
            if (br.intervals[i].contains(cfg.s0)) chosen = int(i);
        if (chosen < 0) {
            double best = -1.0;
            for (size_t i = 0; i < br.intervals.size(); ++i)
                if (br.intervals[i].width() > best) {
                    best = br.intervals[i].width();
                    chosen = int(i);
                }
        }
    }
    br.window = br.intervals[chosen];
    if (!br.window.contains(cfg.s0))
        throw DomainError("s0 is not inside the selected admissible interval");

    Profile profile(br.coefficients, form, cfg.s0, br.window, cfg.profile_perturbation);
    br.patch = std::make_shared<HypersurfacePatch>(br.chart, profile);

    // Grid: inset root endpoints of the window so the open-interval guard
    // never trips.
    double lo = br.window.lo, hi = br.window.hi;
    double margin = cfg.margin_frac * br.window.width();
    if (br.window.lo_is_root) lo += margin;
    if (br.window.hi_is_root) hi -= margin;
    const Rect& dom = br.chart->domain();
    br.grid_x1 = linspace(dom.x1lo, dom.x1hi, cfg.n1);
    br.grid_x2 = linspace(dom.x2lo, dom.x2hi, cfg.n2);
    br.grid_s = linspace(lo, hi, cfg.ns);
    br.domain3 = Rect3{{dom.x1lo, dom.x2lo, lo}, {dom.x1hi, dom.x2hi, hi}};

    // Sampled grid: f, eta, eigenvalues, regularity.
    int dim = br.patch->ambient_dim();
    br.sample_stride = 2 * dim + 4;
    br.grid_samples.reserve(size_t(cfg.n1) * cfg.n2 * cfg.ns * br.sample_stride);
    for (double x1 : br.grid_x1)
        for (double x2 : br.grid_x2)
            for (double s : br.grid_s) {
                JVec f = br.patch->f_jet(x1, x2, s);
                JVec eta = br.patch->eta_jet(x1, x2, s);
                ShapeOp so = br.patch->shape_operator(x1, x2, s);
                double reg = br.patch->regularity(x1, x2, s);
                for (int i = 0; i < dim; ++i) br.grid_samples.push_back(f[i].value());
                for (int i = 0; i < dim; ++i) br.grid_samples.push_back(eta[i].value());
                for (int i = 0; i < 3; ++i) br.grid_samples.push_back(so.eigenvalues[i]);
                br.grid_samples.push_back(reg);
            }

    json summary;
    summary["config_hash"] = fmt17(double(fnv1a_hash(cfg.raw.dump())));
    summary["config_hash_u64"] = fnv1a_hash(cfg.raw.dump());
    summary["code_version"] = kCodeVersion;
    summary["config"] = cfg.raw;
    summary["weingarten"] = {{"P", pqr[0]}, {"Q", pqr[1]}, {"R", pqr[2]}};
    summary["derived"] = {{"Pbar", br.coefficients.Pbar},
                          {"Qbar", br.coefficients.Qbar},
                          {"Rbar", br.coefficients.Rbar},
                          {"Lambda", br.coefficients.Lambda}};
    summary["constants"] = {
        {"c1", br.constants.c1}, {"c2", br.constants.c2}, {"lambda", br.constants.lambda}};
    json ivals = json::array();
    for (const auto& iv : br.intervals) ivals.push_back({iv.lo, iv.hi});
    summary["admissible_intervals"] = ivals;
    summary["window"] = {br.window.lo, br.window.hi};
    summary["grid_s_range"] = {br.grid_s.front(), br.grid_s.back()};
    summary["ambient_dim"] = dim;
    summary["sample_stride"] = br.sample_stride;
    summary["sample_layout"] = "f[dim], eta[dim], lambda[3], sigma_min";
    br.summary = summary;
    return br;
}

VerifyResult run_verify(const RunConfig& cfg, const BuildResult& build) {
    VerifyResult vr;
    const HypersurfacePatch& patch = *build.patch;
    SpaceForm form{cfg.eps};

    std::map<std::string, CheckSummary> acc;
    auto tol_of = [&](const std::string& name) {
        auto it = cfg.tolerances.find(name);
        return it == cfg.tolerances.end() ? 1e-6 : it->second;
    };
    auto add = [&](const std::string& name, double raw, double scaled) {
        CheckSummary& ch = acc[name];
        ch.name = name;
        ch.count += 1;
        ch.max_raw = std::max(ch.max_raw, std::abs(raw));
        ch.max_scaled = std::max(ch.max_scaled, std::abs(scaled));
        ch.tolerance = tol_of(name);
    };

    std::ostringstream csv;
    csv << "x1,x2,s,check,raw,scaled,verdict\n";
    double min_gap = std::numeric_limits<double>::infinity();
    double min_reg = std::numeric_limits<double>::infinity();

    std::optional<ProofConstants> constants = build.constants;
    for (double x1 : build.grid_x1)
        for (double x2 : build.grid_x2)
            for (double s : build.grid_s) {
                auto checks = point_checks(patch, x1, x2, s, constants);
                for (const auto& [name, res] : checks) {
                    if (name == "eigen_gap") {
                        min_gap = std::min(min_gap, res.raw);
                        continue;
                    }
                    add(name, res.raw, res.scaled);
                    if (cfg.csv_full)
                        csv << fmt17(x1) << "," << fmt17(x2) << "," << fmt17(s) << "," << name
                            << "," << fmt17(res.raw) << "," << fmt17(res.scaled) << ","
                            << (res.scaled <= tol_of(name) ? "pass" : "fail") << "\n";
                }
                min_reg = std::min(min_reg, patch.regularity(x1, x2, s));
            }

    // Frame-based flatness conditions on the mapped immersion (identity for
    // the flat form, the cone/covering map otherwise).
    {
        std::vector<ConformalMap> phi_only = {{ConformalMap::Kind::phi, Vec4::Zero(), 1.0}};
        ImmersionR4 F = compose_immersion(patch, phi_only, build.domain3);
        MetricField mf = immersion_metric(F);
        FrameProbe probe = immersion_frame_probe(F);
        double h = 1e-3 * build.domain3.scale();
        // Interior subsample: the stencils need margin.
        for (int i = 1; i + 1 < int(build.grid_x1.size()); i += 5)
            for (int j = 1; j + 1 < int(build.grid_x2.size()); j += 5)
                for (int k = 1; k + 1 < int(build.grid_s.size()); k += 4) {
                    std::array<double, 3> u = {build.grid_x1[i], build.grid_x2[j],
                                               build.grid_s[k]};
                    CartanResiduals cr = cartan_conditions(probe, mf, u, h);
                    add("cartan_uno", cr.uno, cr.uno);
                    add("cartan_dos", cr.dos, cr.dos);
                    add("cartan_tres", cr.tres, cr.tres);
                }
    }

    // Constants cross-check: the two closed forms of r agree on the window.
    double cc = constants_r_crosscheck(build.constants.c1, build.constants.c2,
                                       build.constants.lambda, form, build.grid_s.front(),
                                       build.grid_s.back());
    add("constants_roundtrip", cc, cc);

    add("eigen_gap_min", min_gap, min_gap);
    add("regularity_min", min_reg, min_reg);

    vr.min_eigen_gap = min_gap;
    vr.min_regularity = min_reg;

    for (auto& [name, ch] : acc) {
        // Gap and regularity are lower bounds: pass when above tolerance.
        if (name == "eigen_gap_min" || name == "regularity_min")
            ch.pass = ch.max_scaled >= ch.tolerance;
        else
            ch.pass = ch.max_scaled <= ch.tolerance;
        vr.all_pass = vr.all_pass && ch.pass;
        vr.checks.push_back(ch);
        if (!cfg.csv_full)
            csv << ",,," << name << "," << fmt17(ch.max_raw) << "," << fmt17(ch.max_scaled)
                << "," << (ch.pass ? "pass" : "fail") << "\n";
    }
    vr.csv = csv.str();

    json rep;
    rep["suite"] = "verify";
    rep["provenance"] = {{"config_hash", fnv1a_hash(cfg.raw.dump())},
                         {"code_version", kCodeVersion}};
    rep["config"] = cfg.raw;
    rep["build"] = build.summary;
    json checks = json::array();
    for (const auto& ch : vr.checks)
        checks.push_back({{"name", ch.name},
                          {"count", ch.count},
                          {"max_raw", ch.max_raw},
                          {"max_scaled", ch.max_scaled},
                          {"tolerance", ch.tolerance},
                          {"verdict", ch.pass ? "pass" : "fail"}});
    rep["checks"] = checks;
    rep["all_pass"] = vr.all_pass;
    vr.report = rep;
    return vr;
}

KillingField designated_field(int eps) {
    KillingField f;
    switch (eps) {
        case 0:
            f.kind = KillingField::Kind::constant_axis;
            f.i = 3;
            break;
        case 1:
            f.kind = KillingField::Kind::radial;
            break;
        case -1:
            f.kind = KillingField::Kind::rotation;
            f.i = 2;
            f.j = 3;
            break;
    }
    return f;
}

Vec4 inversion_center_outside(const BuildResult& build, const std::vector<ConformalMap>& pre) {
    Vec4 lo = Vec4::Constant(std::numeric_limits<double>::infinity());
    Vec4 hi = -lo;
    const auto& p = *build.patch;
    int eps = p.form().eps;
    for (double x1 : build.grid_x1)
        for (double x2 : build.grid_x2)
            for (double s : build.grid_s) {
                JVec f = p.f_jet(x1, x2, s);
                JVec y = apply_pipeline_jet(pre, eps, f);
                for (int a = 0; a < 4; ++a) {
                    lo[a] = std::min(lo[a], y[a].value());
                    hi[a] = std::max(hi[a], y[a].value());
                }
            }
    Vec4 c = 0.5 * (lo + hi);
    Vec4 half = 0.5 * (hi - lo);
    c[0] += 2.0 * half.norm() + 1.0;  // clearly outside along the first axis
    return c;
}

CyclicResult run_map_cyclic(const RunConfig& cfg, const BuildResult& build) {
    CyclicResult cr;
    std::vector<ConformalMap> pipeline = cfg.pipeline;
    if (pipeline.empty()) pipeline.push_back({ConformalMap::Kind::phi, Vec4::Zero(), 1.0});

    ImmersionR4 F = compose_immersion(*build.patch, pipeline, build.domain3);

    BatteryOptions opt;
    opt.tol_items = cfg.tolerances.count("item2") ? cfg.tolerances.at("item2") : 1e-4;
    opt.tol_fits = cfg.tolerances.count("sphere_fit") ? cfg.tolerances.at("sphere_fit") : 1e-6;
    cr.battery = run_battery(F, opt);

    // Alignment of the designated field, midpoint of the grid.
    KillingField field = designated_field(cfg.eps);
    switch (cfg.eps) {
        case 0:
            cr.killing_field_name = "constant_x4";
            break;
        case 1:
            cr.killing_field_name = "radial";
            break;
        case -1:
            cr.killing_field_name = "rotation_34";
            break;
    }
    double worst_angle = 0.0;
    int excluded = 0;
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) {
            V3 u(build.grid_x1[(i + 1) * (build.grid_x1.size() - 1) / 4],
                 build.grid_x2[(k + 1) * (build.grid_x2.size() - 1) / 4],
                 build.grid_s[build.grid_s.size() / 2]);
            try {
                worst_angle = std::max(worst_angle, killing_alignment_t(F, field, u));
            } catch (const std::exception&) {
                ++excluded;
            }
        }
    cr.killing_angle = worst_angle;
    cr.excluded_points = excluded;

    double tol_items = opt.tol_items;
    double tol_fits = opt.tol_fits;
    double tol_angle =
        cfg.tolerances.count("killing_angle") ? cfg.tolerances.at("killing_angle") : 1e-6;
    cr.pass = cr.battery.item2 < tol_items && cr.battery.item3 < tol_items &&
              cr.battery.item4_containment < tol_fits && cr.battery.item5_sphere < tol_fits &&
              cr.battery.verdict_agreement && cr.killing_angle < tol_angle;

    json fits;
    fits["battery"] = {{"item1_intrinsic", cr.battery.item1_intrinsic},
                       {"item2", cr.battery.item2},
                       {"item3", cr.battery.item3},
                       {"item4_containment", cr.battery.item4_containment},
                       {"item5_sphere", cr.battery.item5_sphere},
                       {"item5_mu", cr.battery.item5_mu},
                       {"circle_roundness", cr.battery.circle_roundness},
                       {"verdict_agreement", cr.battery.verdict_agreement}};
    cr.fit_report = fits;

    json rep;
    rep["suite"] = "map_cyclic";
    rep["provenance"] = {{"config_hash", fnv1a_hash(cfg.raw.dump())},
                         {"code_version", kCodeVersion}};
    rep["config"] = cfg.raw;
    rep["fits"] = fits;
    rep["killing"] = {{"field", cr.killing_field_name},
                      {"max_angle", cr.killing_angle},
                      {"excluded_points", cr.excluded_points}};
    rep["all_pass"] = cr.pass;
    cr.report = rep;
    return cr;
}

std::string export_slices(const RunConfig& cfg, const BuildResult& build,
                          const Projection& proj, const std::string& format) {
    std::vector<ConformalMap> pipeline = cfg.pipeline;
    int eps = cfg.eps;
    std::ostringstream all;
    bool first = true;
    for (double s : build.grid_s) {
        std::vector<Vec4> grid;
        for (double x1 : build.grid_x1)
            for (double x2 : build.grid_x2) {
                JVec f = build.patch->f_jet(x1, x2, s);
                JVec y = pipeline.empty() ? f : apply_pipeline_jet(pipeline, eps, f);
                if (y.n != 4) throw DomainError("export needs a pipeline ending in R^4");
                Vec4 p;
                for (int a = 0; a < 4; ++a) p[a] = y[a].value();
                grid.push_back(p);
            }
        if (!first && format == "ply") break;  // one PLY per file; keep the first slice
        if (format == "obj")
            all << obj_quad_mesh(grid, int(build.grid_x1.size()), int(build.grid_x2.size()),
                                 proj);
        else
            all << ply_quad_mesh(grid, int(build.grid_x1.size()), int(build.grid_x2.size()),
                                 proj);
        first = false;
    }
    return all.str();
}

std::string export_lines(const RunConfig& cfg, const BuildResult& build,
                         const Projection& proj) {
    std::vector<ConformalMap> pipeline = cfg.pipeline;
    if (pipeline.empty()) pipeline.push_back({ConformalMap::Kind::phi, Vec4::Zero(), 1.0});
    ImmersionR4 F = compose_immersion(*build.patch, pipeline, build.domain3);
    std::vector<std::vector<Vec4>> lines;
    int grid = 4;
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j) {
            V3 u0(build.domain3.lo[0] +
                      (build.domain3.hi[0] - build.domain3.lo[0]) * (i + 0.5) / grid,
                  build.domain3.lo[1] +
                      (build.domain3.hi[1] - build.domain3.lo[1]) * (j + 0.5) / grid,
                  0.5 * (build.domain3.lo[2] + build.domain3.hi[2]));
            TraceResult tr = trace_curvature_line(F, u0, 0.8, 100, TraceMode::t_tangent);
            lines.push_back(tr.points);
        }
    return obj_polylines(lines, proj);
}

}  // namespace cfh
