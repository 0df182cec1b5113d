#include "surfpde/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "surfpde/errors.hpp"
#include "surfpde/shapes.hpp"

namespace surfpde {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    double out = 0.0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size())
        throw ValidationError("config: key '" + key + "' expects a number, got '" + v + "'");
    return out;
}

int to_int(const std::string& key, const std::string& v) {
    const double d = to_double(key, v);
    const int i = static_cast<int>(std::lround(d));
    if (std::abs(d - i) > 1e-12)
        throw ValidationError("config: key '" + key + "' expects an integer, got '" + v + "'");
    return i;
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ValidationError("config: key '" + key + "' expects true/false, got '" + v + "'");
}

std::vector<double> to_doubles(const std::string& key, const std::string& v) {
    std::istringstream ss(v);
    std::vector<double> out;
    std::string tok;
    while (ss >> tok) out.push_back(to_double(key, tok));
    if (out.empty()) throw ValidationError("config: key '" + key + "' expects numbers");
    return out;
}

Vec3 to_vec3(const std::string& key, const std::string& v) {
    const auto d = to_doubles(key, v);
    if (d.size() != 3)
        throw ValidationError("config: key '" + key + "' expects 3 numbers, got '" + v + "'");
    return {d[0], d[1], d[2]};
}

void check_in(const std::string& key, const std::string& v,
              std::initializer_list<const char*> allowed) {
    for (const char* a : allowed)
        if (v == a) return;
    std::string list;
    for (const char* a : allowed) list += std::string(list.empty() ? "" : "|") + a;
    throw ValidationError("config: key '" + key + "' must be one of " + list + ", got '" + v + "'");
}

void apply(RunConfig& c, const std::string& key, const std::string& value) {
    if (key == "experiment") {
        check_in(key, value, {"solve", "converge", "perturb", "flow-test"});
        c.experiment = value;
    } else if (key == "mesh") {
        c.mesh = value;
    } else if (key == "flow") {
        check_in(key, value, {"identity", "uniform_scale", "translate", "ellipsoid_axis", "zero",
                              "radial", "rotation"});
        c.flow = value;
    } else if (key == "flow_alpha") {
        c.flow_alpha = to_double(key, value);
    } else if (key == "flow_dir") {
        c.flow_dir = to_vec3(key, value);
    } else if (key == "flow_scheme") {
        check_in(key, value, {"euler", "rk4"});
        c.flow_scheme = value;
    } else if (key == "flow_tau") {
        c.flow_tau = to_double(key, value);
        if (!(c.flow_tau > 0.0)) throw ValidationError("config: flow_tau must be positive");
    } else if (key == "flow_tau_levels") {
        c.flow_tau_levels = to_doubles(key, value);
    } else if (key == "mode") {
        check_in(key, value, {"literal", "pullback"});
        c.mode = value;
    } else if (key == "d0") {
        check_in(key, value, {"tangential_identity", "scaled_tangential", "anisotropic_diag", "zero"});
        c.d0 = value;
    } else if (key == "d0_kappa") {
        c.d0_kappa = to_double(key, value);
    } else if (key == "d0_diag") {
        c.d0_diag = to_vec3(key, value);
    } else if (key == "u0") {
        check_in(key, value, {"harmonic_x1x2", "cos_theta", "constant", "bump"});
        c.u0 = value;
    } else if (key == "u0_value") {
        c.u0_value = to_double(key, value);
    } else if (key == "t_final") {
        c.t_final = to_double(key, value);
        if (!(c.t_final >= 0.0)) throw ValidationError("config: t_final must be >= 0");
    } else if (key == "tau") {
        c.tau = to_double(key, value);
        if (!(c.tau > 0.0)) throw ValidationError("config: tau must be positive");
    } else if (key == "theta") {
        c.theta = to_double(key, value);
        if (!(c.theta >= 0.5 && c.theta <= 1.0))
            throw ValidationError("config: theta must lie in [0.5, 1]");
    } else if (key == "levels") {
        c.levels = to_int(key, value);
        if (c.levels < 1) throw ValidationError("config: levels must be >= 1");
    } else if (key == "tau_rule") {
        check_in(key, value, {"auto", "h2", "h", "fixed"});
        c.tau_rule = value;
    } else if (key == "tau_coeff") {
        c.tau_coeff = to_double(key, value);
        if (!(c.tau_coeff > 0.0)) throw ValidationError("config: tau_coeff must be positive");
    } else if (key == "perturb_h") {
        c.perturb_h = to_doubles(key, value);
    } else if (key == "perturb_profile") {
        check_in(key, value, {"alternating", "ones"});
        c.perturb_profile = value;
    } else if (key == "perturb_source") {
        check_in(key, value, {"direct", "euler_flow"});
        c.perturb_source = value;
    } else if (key == "cg_tol") {
        c.cg_tol = to_double(key, value);
        if (!(c.cg_tol > 0.0)) throw ValidationError("config: cg_tol must be positive");
    } else if (key == "cg_max_iter") {
        c.cg_max_iter = to_int(key, value);
        if (c.cg_max_iter < 1) throw ValidationError("config: cg_max_iter must be >= 1");
    } else if (key == "out") {
        c.out = value;
    } else if (key == "write_vtk") {
        c.write_vtk = to_bool(key, value);
    } else if (key == "vtk_stride") {
        c.vtk_stride = to_int(key, value);
        if (c.vtk_stride < 1) throw ValidationError("config: vtk_stride must be >= 1");
    } else {
        throw ValidationError("config: unknown key '" + key + "'");
    }
}

} // namespace

RunConfig parse_config_text(const std::string& text,
                            const std::vector<std::pair<std::string, std::string>>& overrides) {
    RunConfig c;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError("config: expected key=value on line " + std::to_string(line_no));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ValidationError("config: empty key or value on line " + std::to_string(line_no));
        apply(c, key, value);
    }
    for (const auto& [key, value] : overrides) apply(c, key, value);
    return c;
}

RunConfig parse_config_file(const std::string& path,
                            const std::vector<std::pair<std::string, std::string>>& overrides) {
    std::ifstream in(path);
    if (!in) throw ValidationError("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), overrides);
}

MeshWithProjector build_mesh_from_config(const RunConfig& config) {
    std::istringstream ss(config.mesh);
    std::string kind;
    ss >> kind;
    MeshWithProjector out;
    if (kind == "icosphere" || kind == "circle" || kind == "disk") {
        long param = -1;
        if (!(ss >> param))
            throw ValidationError("config: mesh '" + kind + "' needs a parameter, e.g. '" + kind +
                                  " 3'");
        out.family = kind;
        if (kind == "icosphere") {
            out.mesh = std::make_shared<SurfaceMesh>(make_icosphere(static_cast<int>(param)));
            out.projector = unit_sphere_projector();
        } else if (kind == "circle") {
            out.mesh = std::make_shared<SurfaceMesh>(make_circle(static_cast<int>(param)));
            out.projector = unit_circle_projector();
        } else {
            out.mesh = std::make_shared<SurfaceMesh>(make_disk(static_cast<int>(param)));
        }
        return out;
    }
    // otherwise a file path; sniff the header token
    out.family = "file";
    std::ifstream in(config.mesh);
    if (!in) throw ValidationError("config: cannot open mesh file '" + config.mesh + "'");
    std::string token;
    in >> token;
    in.close();
    if (token == "CURVE")
        out.mesh = std::make_shared<SurfaceMesh>(load_curve_file(config.mesh));
    else
        out.mesh = std::make_shared<SurfaceMesh>(load_off_file(config.mesh));
    return out;
}

std::shared_ptr<const FlowMap> build_flow_from_config(const RunConfig& config,
                                                      std::shared_ptr<const SurfaceMesh> mesh,
                                                      double t_final) {
    const std::string& name = config.flow;
    if (name == "identity") return std::make_shared<FlowMap>(identity_flow(mesh, t_final));
    if (name == "uniform_scale")
        return std::make_shared<FlowMap>(uniform_scale_flow(mesh, config.flow_alpha, t_final));
    if (name == "translate")
        return std::make_shared<FlowMap>(translate_flow(mesh, config.flow_dir, t_final));
    if (name == "ellipsoid_axis")
        return std::make_shared<FlowMap>(ellipsoid_axis_flow(mesh, config.flow_alpha, t_final));

    VelocityField field;
    if (name == "zero") field = zero_field();
    else if (name == "radial") field = radial_field();
    else if (name == "rotation") field = rotation_field();
    else throw ValidationError("config: unknown flow '" + name + "'");
    return std::make_shared<FlowMap>(
        integrate_flow(std::move(mesh), std::move(field), t_final, config.flow_tau,
                       parse_scheme(config.flow_scheme)));
}

DiffusionSpec build_diffusion_from_config(const RunConfig& config) {
    if (config.d0 == "tangential_identity") return tangential_identity();
    if (config.d0 == "scaled_tangential") return scaled_tangential(config.d0_kappa);
    if (config.d0 == "anisotropic_diag")
        return anisotropic_diag(config.d0_diag.x, config.d0_diag.y, config.d0_diag.z);
    if (config.d0 == "zero") return zero_diffusion();
    throw ValidationError("config: unknown d0 '" + config.d0 + "'");
}

std::vector<double> build_initial_from_config(const RunConfig& config, const SurfaceMesh& mesh) {
    std::vector<double> u0(mesh.num_vertices());
    for (int v = 0; v < mesh.num_vertices(); ++v) {
        const Vec3& p = mesh.vertices[v];
        if (config.u0 == "harmonic_x1x2") u0[v] = p.x * p.y;
        else if (config.u0 == "cos_theta") u0[v] = p.x;
        else if (config.u0 == "constant") u0[v] = config.u0_value;
        else if (config.u0 == "bump") u0[v] = std::exp(-10.0 * norm2(p - Vec3{1.0, 0.0, 0.0}));
        else throw ValidationError("config: unknown u0 '" + config.u0 + "'");
    }
    return u0;
}

CoefficientMode parse_mode(const std::string& name) {
    if (name == "literal") return CoefficientMode::literal;
    if (name == "pullback") return CoefficientMode::pullback;
    throw ValidationError("config: unknown coefficient mode '" + name + "'");
}

OdeScheme parse_scheme(const std::string& name) {
    if (name == "euler") return OdeScheme::euler;
    if (name == "rk4") return OdeScheme::rk4;
    throw ValidationError("config: unknown ODE scheme '" + name + "'");
}

} // namespace surfpde
