#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "surfpde/coefficients.hpp"
#include "surfpde/flowmap.hpp"
#include "surfpde/mesh.hpp"

namespace surfpde {

/// Flat key=value run description. '#' starts a comment, values may contain
/// spaces, later assignments win (command-line overrides are appended last).
/// Unknown keys and out-of-range values are rejected.
struct RunConfig {
    std::string experiment = "solve"; // solve | converge | perturb | flow-test

    // mesh: "icosphere L" | "circle N" | "disk L" | file path (OFF or CURVE)
    std::string mesh = "icosphere 2";

    // flow: identity | uniform_scale | translate | ellipsoid_axis (analytic)
    //       zero | radial | rotation (vector fields, integrated)
    std::string flow = "identity";
    double flow_alpha = 0.5;
    Vec3 flow_dir{1.0, 0.0, 0.0};
    std::string flow_scheme = "rk4"; // euler | rk4
    double flow_tau = 0.01;
    std::vector<double> flow_tau_levels{0.1, 0.05, 0.025}; // flow-test

    std::string mode = "pullback"; // literal | pullback
    std::string d0 = "tangential_identity"; // scaled_tangential | anisotropic_diag | zero
    double d0_kappa = 1.0;
    Vec3 d0_diag{1.0, 1.0, 1.0};

    std::string u0 = "constant"; // harmonic_x1x2 | cos_theta | constant | bump
    double u0_value = 1.0;

    double t_final = 1.0;
    double tau = 0.01;
    double theta = 1.0;

    int levels = 3;                 // refinement levels in a convergence run
    std::string tau_rule = "auto";  // auto | h2 | h | fixed
    double tau_coeff = 1.0;

    std::vector<double> perturb_h{0.1, 0.05, 0.025};
    std::string perturb_profile = "alternating"; // alternating | ones
    std::string perturb_source = "direct";       // direct | euler_flow

    double cg_tol = 1e-10;
    int cg_max_iter = 20000;

    std::string out = ".";
    bool write_vtk = true; // solve experiment only
    int vtk_stride = 1;
};

/// Parse a config file; `overrides` are "key" -> "value" pairs applied last.
RunConfig parse_config_file(const std::string& path,
                            const std::vector<std::pair<std::string, std::string>>& overrides = {});
RunConfig parse_config_text(const std::string& text,
                            const std::vector<std::pair<std::string, std::string>>& overrides = {});

/// Mesh with the projector used to keep refinements on the exact surface
/// (empty for file meshes and the disk).
struct MeshWithProjector {
    std::shared_ptr<const SurfaceMesh> mesh;
    SurfaceProjector projector;
    std::string family; // icosphere | circle | disk | file
};

MeshWithProjector build_mesh_from_config(const RunConfig& config);
std::shared_ptr<const FlowMap> build_flow_from_config(const RunConfig& config,
                                                      std::shared_ptr<const SurfaceMesh> mesh,
                                                      double t_final);
DiffusionSpec build_diffusion_from_config(const RunConfig& config);
std::vector<double> build_initial_from_config(const RunConfig& config, const SurfaceMesh& mesh);
CoefficientMode parse_mode(const std::string& name);
OdeScheme parse_scheme(const std::string& name);

} // namespace surfpde
