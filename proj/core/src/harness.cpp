#include "surfpde/harness.hpp"

#include <cmath>
#include <filesystem>
#include <functional>
#include <ostream>

#include "surfpde/errors.hpp"
#include "surfpde/io.hpp"
#include "surfpde/tangential.hpp"

namespace surfpde {

namespace {

using ExactFn = std::function<double(const Vec3&, double)>;

// exact solutions of the surface heat equation for the built-in benchmarks
ExactFn exact_solution_for(const RunConfig& config, const MeshWithProjector& mesh) {
    if (config.u0 == "cos_theta" && mesh.family == "circle")
        return [](const Vec3& p, double t) { return std::exp(-t) * p.x; };
    if (config.u0 == "harmonic_x1x2" && mesh.family == "icosphere")
        return [](const Vec3& p, double t) { return std::exp(-6.0 * t) * p.x * p.y; };
    throw ValidationError("converge: unknown benchmark (use mesh 'circle N' with u0 cos_theta or "
                          "mesh 'icosphere L' with u0 harmonic_x1x2)");
}

double tau_for_level(const RunConfig& config, double h) {
    std::string rule = config.tau_rule;
    if (rule == "auto") rule = (config.theta >= 0.75) ? "h2" : "h";
    if (rule == "h2") return config.tau_coeff * h * h;
    if (rule == "h") return config.tau_coeff * h;
    return config.tau; // fixed
}

EvolutionProblem problem_from_config(const RunConfig& config,
                                     std::shared_ptr<const SurfaceMesh> mesh, double tau) {
    EvolutionProblem p;
    p.mesh = mesh;
    p.flow = build_flow_from_config(config, mesh, config.t_final);
    p.mode = parse_mode(config.mode);
    p.diffusion = build_diffusion_from_config(config);
    p.initial = build_initial_from_config(config, *mesh);
    p.t_final = config.t_final;
    p.tau = tau;
    p.theta = config.theta;
    p.cg_tol = config.cg_tol;
    p.cg_max_iter = config.cg_max_iter;
    return p;
}

double fit_slope(const std::vector<double>& x_log, const std::vector<double>& y_log) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x_log.size());
    for (size_t i = 0; i < x_log.size(); ++i) {
        sx += x_log[i];
        sy += y_log[i];
        sxx += x_log[i] * x_log[i];
        sxy += x_log[i] * y_log[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void warn_negative_c(const SolutionTrajectory& traj, std::ostream& log) {
    for (size_t k = 0; k < traj.diagnostics.size(); ++k) {
        if (traj.diagnostics[k].min_c < 0.0) {
            log << "warning: min c = " << format_double(traj.diagnostics[k].min_c)
                << " < 0 at t = " << format_double(traj.times[k])
                << " (uniqueness assumption not met)\n";
            return; // one warning per run is enough
        }
    }
}

} // namespace

SolutionTrajectory run_solve(const RunConfig& config, std::ostream& log) {
    const auto mesh = build_mesh_from_config(config);
    const auto problem = problem_from_config(config, mesh.mesh, config.tau);
    log << "solve: mesh " << config.mesh << " (" << mesh.mesh->num_vertices() << " vertices, "
        << mesh.mesh->num_elements() << " elements), flow " << config.flow << ", coefficient mode "
        << config.mode << ", d0 " << config.d0 << ", theta " << format_double(config.theta)
        << ", tau " << format_double(config.tau) << ", t_final " << format_double(config.t_final)
        << "\n";
    SolutionTrajectory traj = solve_evolution(problem);
    warn_negative_c(traj, log);
    log << "solve: " << traj.num_levels() << " levels, stiffness assembled "
        << traj.stiffness_assemblies << "x, final discrete mass "
        << format_double(traj.diagnostics.back().discrete_mass) << "\n";
    return traj;
}

EocTable run_convergence(const RunConfig& config, std::ostream& log) {
    MeshWithProjector base = build_mesh_from_config(config);
    const ExactFn exact = exact_solution_for(config, base);
    // isometric motions leave the pulled-back problem unchanged, so the fixed
    // exact solutions stay valid
    if (config.flow != "identity" && config.flow != "rotation" && config.flow != "translate")
        throw ValidationError("converge: benchmark requires the identity flow or an isometric "
                              "one (rotation, translate)");

    log << "converge: benchmark " << config.u0 << " on " << config.mesh << ", " << config.levels
        << " levels, coefficient mode " << config.mode << ", theta "
        << format_double(config.theta) << "\n";

    EocTable table;
    std::shared_ptr<const SurfaceMesh> mesh = base.mesh;
    for (int level = 0; level < config.levels; ++level) {
        if (level > 0) mesh = std::make_shared<SurfaceMesh>(refine(*mesh, base.projector));
        const double h = mesh_size(*mesh);
        const double tau = tau_for_level(config, h);
        const auto problem = problem_from_config(config, mesh, tau);
        const SolutionTrajectory traj = solve_evolution(problem);

        // nodal error against the exact solution's vertex interpolant at t_final
        std::vector<double> err(mesh->num_vertices());
        const auto& uh = traj.values.back();
        for (int v = 0; v < mesh->num_vertices(); ++v)
            err[v] = uh[v] - exact(mesh->vertices[v], config.t_final);

        EocTable::Row row;
        row.level = level;
        row.h = h;
        row.l2_err = l2_norm(*mesh, err);
        row.h1_err = h1_seminorm(*mesh, err);
        if (config.flow != "identity") {
            const auto weights =
                mass_weights(*problem.flow, *mesh, config.t_final, CoefficientMode::pullback);
            row.l2_err_moved = l2_norm_weighted(*mesh, err, weights);
            row.has_moved = true;
        }
        if (!table.rows.empty()) {
            row.l2_eoc = std::log2(table.rows.back().l2_err / row.l2_err);
            row.h1_eoc = std::log2(table.rows.back().h1_err / row.h1_err);
            row.has_eoc = true;
        }
        table.rows.push_back(row);

        log << "  level " << level << ": h=" << format_double(h, 6)
            << " l2=" << format_double(row.l2_err, 6)
            << (row.has_eoc ? " eoc=" + format_double(row.l2_eoc, 4) : std::string())
            << " h1=" << format_double(row.h1_err, 6)
            << (row.has_eoc ? " eoc=" + format_double(row.h1_eoc, 4) : std::string());
        if (row.has_moved) log << " l2_moved=" << format_double(row.l2_err_moved, 6);
        log << "\n";
    }
    return table;
}

FlowTestReport run_flow_test(const RunConfig& config, std::ostream& log) {
    if (config.flow != "zero" && config.flow != "radial" && config.flow != "rotation")
        throw ValidationError("flow-test: flow must be a built-in field (zero, radial, rotation)");
    const auto base = build_mesh_from_config(config);
    const auto mesh = base.mesh;
    const FlowMap exact = exact_field_flow(config.flow, mesh, config.t_final);

    VelocityField field = config.flow == "radial"     ? radial_field()
                          : config.flow == "rotation" ? rotation_field()
                                                      : zero_field();

    log << "flow-test: field " << config.flow << " on " << config.mesh << ", t_final "
        << format_double(config.t_final) << "\n";

    FlowTestReport report;
    report.exact = (config.flow == "zero");
    for (const char* scheme_name : {"euler", "rk4"}) {
        const OdeScheme scheme = parse_scheme(scheme_name);
        std::vector<double> log_tau, log_err;
        double prev_err = 0.0;
        for (size_t k = 0; k < config.flow_tau_levels.size(); ++k) {
            const double tau = config.flow_tau_levels[k];
            const FlowMap flow = integrate_flow(mesh, field, config.t_final, tau, scheme);
            double max_err = 0.0, roundtrip = 0.0;
            for (int v = 0; v < mesh->num_vertices(); ++v) {
                const Vec3 computed = flow.vertex_position(v, config.t_final);
                max_err = std::max(
                    max_err, distance(computed, exact.vertex_position(v, config.t_final)));
                roundtrip = std::max(
                    roundtrip, distance(flow.inverse(computed, config.t_final), mesh->vertices[v]));
            }
            FlowTestReport::Row row;
            row.scheme = scheme_name;
            row.tau_ode = tau;
            row.max_err = max_err;
            row.roundtrip_err = roundtrip;
            if (k > 0 && max_err > 0.0 && prev_err > 0.0) {
                row.eoc = std::log(prev_err / max_err) /
                          std::log(config.flow_tau_levels[k - 1] / tau);
                row.has_eoc = true;
            }
            prev_err = max_err;
            report.rows.push_back(row);
            if (max_err > 0.0) {
                log_tau.push_back(std::log(tau));
                log_err.push_back(std::log(max_err));
            }
            log << "  " << scheme_name << " tau=" << format_double(tau, 6)
                << " err=" << format_double(max_err, 6)
                << " roundtrip=" << format_double(roundtrip, 6) << "\n";
        }
        const double order = log_err.size() >= 2 ? fit_slope(log_tau, log_err) : 0.0;
        if (scheme == OdeScheme::euler) report.fitted_order_euler = order;
        else report.fitted_order_rk4 = order;
        log << "  " << scheme_name << " fitted order: "
            << (log_err.size() >= 2 ? format_double(order, 4) : std::string("exact")) << "\n";
    }
    return report;
}

PerturbationStudy run_perturb(const RunConfig& config, std::ostream& log) {
    const auto mesh = build_mesh_from_config(config);
    PerturbationConfig pc;
    pc.base = problem_from_config(config, mesh.mesh, config.tau);
    pc.h_levels = config.perturb_h;
    if (config.perturb_profile == "ones")
        pc.profile.assign(mesh.mesh->num_elements(), 1.0);
    else
        pc.profile = alternating_profile(*mesh.mesh);
    if (config.perturb_source == "euler_flow") {
        pc.source = PerturbationConfig::Source::euler_flow;
        if (config.flow != "zero" && config.flow != "radial" && config.flow != "rotation")
            throw ValidationError(
                "perturb: euler_flow source needs a built-in field flow (zero, radial, rotation)");
        pc.field_name = config.flow;
    }

    log << "perturb: mesh " << config.mesh << ", coefficient mode " << config.mode << ", source "
        << config.perturb_source << ", " << pc.h_levels.size() << " levels\n";
    PerturbationStudy study = run_perturbation_study(pc);
    for (size_t k = 0; k < study.h_levels.size(); ++k) {
        log << "  h=" << format_double(study.h_levels[k], 6)
            << " E=" << format_double(study.errors[k], 6)
            << (k > 0 && !study.exact ? " eoc=" + format_double(study.eoc[k - 1], 4) : std::string())
            << "\n";
    }
    log << "  slope: " << (study.exact ? std::string("exact") : format_double(study.slope, 6))
        << "\n";
    return study;
}

void write_eoc_csv(const EocTable& table, const std::string& path) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : table.rows) {
        rows.push_back({std::to_string(r.level), format_double(r.h), format_double(r.l2_err),
                        r.has_eoc ? format_double(r.l2_eoc) : std::string(),
                        format_double(r.h1_err),
                        r.has_eoc ? format_double(r.h1_eoc) : std::string()});
    }
    write_csv(path, "level,h,l2_err,l2_eoc,h1_err,h1_eoc", rows);
}

void write_moved_l2_csv(const EocTable& table, const std::string& path) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : table.rows) {
        if (!r.has_moved) continue;
        rows.push_back({std::to_string(r.level), format_double(r.h), format_double(r.l2_err),
                        format_double(r.l2_err_moved),
                        format_double(r.l2_err_moved / std::max(r.l2_err, 1e-300))});
    }
    write_csv(path, "level,h,l2_err_fixed,l2_err_moved,ratio", rows);
}

void write_flow_test_csv(const FlowTestReport& report, const std::string& path) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : report.rows) {
        rows.push_back({r.scheme, format_double(r.tau_ode), format_double(r.max_err),
                        r.has_eoc ? format_double(r.eoc) : std::string(),
                        format_double(r.roundtrip_err)});
    }
    rows.push_back({"fit", "euler",
                    report.exact ? std::string("exact") : format_double(report.fitted_order_euler),
                    "", ""});
    rows.push_back({"fit", "rk4",
                    report.exact ? std::string("exact") : format_double(report.fitted_order_rk4),
                    "", ""});
    write_csv(path, "scheme,tau_ode,max_err,eoc,roundtrip_err", rows);
}

void write_perturbation_csv(const PerturbationStudy& study, const std::string& path) {
    std::vector<std::vector<std::string>> rows;
    for (size_t k = 0; k < study.h_levels.size(); ++k) {
        rows.push_back({format_double(study.h_levels[k]), format_double(study.errors[k]),
                        (k > 0 && !study.exact) ? format_double(study.eoc[k - 1]) : std::string()});
    }
    rows.push_back({"slope", study.exact ? std::string("exact") : format_double(study.slope), ""});
    write_csv(path, "h,E,eoc", rows);
}

void write_diagnostics_csv(const SolutionTrajectory& traj, const std::string& path) {
    std::vector<std::vector<std::string>> rows;
    for (int k = 0; k < traj.num_levels(); ++k) {
        rows.push_back({format_double(traj.times[k]), format_double(traj.diagnostics[k].min_c),
                        format_double(traj.diagnostics[k].discrete_mass),
                        std::to_string(traj.diagnostics[k].cg_iterations)});
    }
    write_csv(path, "t,min_c,discrete_mass,cg_iterations", rows);
}

} // namespace surfpde
