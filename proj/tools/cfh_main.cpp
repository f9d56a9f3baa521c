// Command-line driver: build, verify, map-cyclic, export, catalog.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "cfh/pipeline.hpp"

namespace fs = std::filesystem;
using cfh::RunConfig;
using nlohmann::json;

namespace {

void write_file(const fs::path& path, const std::string& data) {
    fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file " + path.string());
    out << data;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

void write_grid_binary(const fs::path& dir, const cfh::BuildResult& build) {
    // Little-endian 64-bit floats, row-major over (i1, i2, is); JSON sidecar
    // describes the shape and per-point layout.
    std::ofstream out(dir / "grid.bin", std::ios::binary);
    if (!out) throw std::runtime_error("cannot open grid.bin");
    out.write(reinterpret_cast<const char*>(build.grid_samples.data()),
              std::streamsize(build.grid_samples.size() * sizeof(double)));
    json meta;
    meta["shape"] = {build.grid_x1.size(), build.grid_x2.size(), build.grid_s.size()};
    meta["stride"] = build.sample_stride;
    meta["layout"] = build.summary["sample_layout"];
    meta["dtype"] = "float64_le";
    meta["order"] = "row_major_i1_i2_is";
    write_file(dir / "grid.meta.json", meta.dump(2) + "\n");
}

int run(int argc, char** argv) {
    CLI::App app{"construction and certification of cyclic conformally flat hypersurfaces"};
    app.require_subcommand(1);

    std::string config_path;
    std::string what = "slices";
    std::string projection = "drop:3";
    std::string format = "obj";
    std::string out_path;

    auto add_cfg = [&](CLI::App* cmd) {
        cmd->add_option("-c,--config", config_path, "JSON run configuration")->required();
    };

    CLI::App* cmd_build = app.add_subcommand("build", "assemble a hypersurface and sample it");
    add_cfg(cmd_build);
    CLI::App* cmd_verify =
        app.add_subcommand("verify", "run every geometric certification on a build");
    add_cfg(cmd_verify);
    CLI::App* cmd_cyclic = app.add_subcommand(
        "map-cyclic", "apply the conformal pipeline and certify the cyclic property");
    add_cfg(cmd_cyclic);
    CLI::App* cmd_export = app.add_subcommand("export", "write OBJ/PLY meshes and lines");
    add_cfg(cmd_export);
    cmd_export->add_option("--what", what, "slices | lines");
    cmd_export->add_option("--projection", projection, "drop:<axis> | matrix:<12 csv values>");
    cmd_export->add_option("--format", format, "obj | ply");
    cmd_export->add_option("-o,--output", out_path, "output file path");
    CLI::App* cmd_catalog =
        app.add_subcommand("catalog", "list chart kinds and their parameter schemas");

    CLI11_PARSE(app, argc, argv);

    if (cmd_catalog->parsed()) {
        json cat;
        cat["cylinder"] = {{"eps", 0}, {"params", {"radius (>0)"}}, {"domain", "[[x1lo,x1hi],[x2lo,x2hi]]"}};
        cat["pseudosphere"] = {{"eps", 0}, {"params", {"u_range ([lo,hi], lo > 0)"}}};
        cat["flat_torus"] = {{"eps", 1}, {"params", {"r1 (0<r1<1, r2=sqrt(1-r1^2))"}}};
        cat["equidistant_tube"] = {{"eps", -1}, {"params", {"d (>0)"}}};
        cat["user_defined"] = {{"params", {"id (wavy_cylinder), amp, freq"}}};
        std::cout << cat.dump(2) << std::endl;
        return cfh::kExitOk;
    }

    RunConfig cfg = cfh::load_config_file(config_path);
    fs::path outdir(cfg.output_dir);

    if (cmd_build->parsed()) {
        cfh::BuildResult build = cfh::run_build(cfg);
        fs::create_directories(outdir);
        write_file(outdir / "build.json", build.summary.dump(2) + "\n");
        write_grid_binary(outdir, build);
        std::cout << "build ok: window [" << build.window.lo << ", " << build.window.hi
                  << "], grid " << cfg.n1 << "x" << cfg.n2 << "x" << cfg.ns << std::endl;
        return cfh::kExitOk;
    }
    if (cmd_verify->parsed()) {
        cfh::BuildResult build = cfh::run_build(cfg);
        cfh::VerifyResult vr = cfh::run_verify(cfg, build);
        fs::create_directories(outdir);
        write_file(outdir / "verify.json", vr.report.dump(2) + "\n");
        write_file(outdir / "residuals.csv", vr.csv);
        for (const auto& ch : vr.checks)
            std::cout << (ch.pass ? "pass  " : "FAIL  ") << ch.name << "  max_scaled "
                      << ch.max_scaled << "  tol " << ch.tolerance << "\n";
        std::cout << (vr.all_pass ? "verify: all checks passed" : "verify: FAILURES present")
                  << std::endl;
        return vr.all_pass ? cfh::kExitOk : cfh::kExitVerificationFailed;
    }
    if (cmd_cyclic->parsed()) {
        cfh::BuildResult build = cfh::run_build(cfg);
        cfh::CyclicResult cr = cfh::run_map_cyclic(cfg, build);
        fs::create_directories(outdir);
        write_file(outdir / "map_cyclic.json", cr.report.dump(2) + "\n");
        write_file(outdir / "fits.json", cr.fit_report.dump(2) + "\n");
        std::cout << cr.report["fits"]["battery"].dump(2) << std::endl;
        std::cout << "killing " << cr.killing_field_name << " angle " << cr.killing_angle
                  << (cr.pass ? "  -> pass" : "  -> FAIL") << std::endl;
        return cr.pass ? cfh::kExitOk : cfh::kExitVerificationFailed;
    }
    if (cmd_export->parsed()) {
        cfh::BuildResult build = cfh::run_build(cfg);
        cfh::Projection proj = cfh::Projection::drop_axis(3);
        if (projection.rfind("drop:", 0) == 0) {
            proj = cfh::Projection::drop_axis(std::stoi(projection.substr(5)));
        } else if (projection.rfind("matrix:", 0) == 0) {
            Eigen::Matrix<double, 3, 4> M;
            std::istringstream is(projection.substr(7));
            std::string tok;
            for (int r = 0; r < 3; ++r)
                for (int c = 0; c < 4; ++c) {
                    if (!std::getline(is, tok, ','))
                        throw cfh::ConfigError("projection matrix needs 12 comma-separated values");
                    M(r, c) = std::stod(tok);
                }
            proj = cfh::Projection::matrix(M);
        } else {
            throw cfh::ConfigError("unknown projection spec: " + projection);
        }
        std::string data;
        if (what == "slices")
            data = cfh::export_slices(cfg, build, proj, format);
        else if (what == "lines")
            data = cfh::export_lines(cfg, build, proj);
        else
            throw cfh::ConfigError("--what must be slices or lines");
        fs::path target = out_path.empty()
                              ? outdir / (what + (format == "ply" ? ".ply" : ".obj"))
                              : fs::path(out_path);
        write_file(target, data);
        std::cout << "exported " << target.string() << std::endl;
        return cfh::kExitOk;
    }
    return cfh::kExitConfigError;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const cfh::ConfigError& e) {
        std::cerr << "config error: " << e.what() << std::endl;
        return cfh::kExitConfigError;
    } catch (const cfh::DomainError& e) {
        std::cerr << "domain error: " << e.what() << std::endl;
        return cfh::kExitDomainError;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "io error: " << e.what() << std::endl;
        return cfh::kExitIoError;
    } catch (const std::exception& e) {
        std::string msg = e.what();
        if (msg.find("file") != std::string::npos || msg.find("write") != std::string::npos) {
            std::cerr << "io error: " << msg << std::endl;
            return cfh::kExitIoError;
        }
        std::cerr << "error: " << msg << std::endl;
        return cfh::kExitVerificationFailed;
    }
}
