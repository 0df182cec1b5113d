#include "surfpde/coefficients.hpp"

#include <cmath>

#include "surfpde/errors.hpp"

namespace surfpde {

const char* to_string(CoefficientMode mode) {
    return mode == CoefficientMode::literal ? "literal" : "pullback";
}

DiffusionSpec tangential_identity() {
    return {[](const Vec3&, const Vec3& normal, double) { return Mat3::tangential_projector(normal); },
            true, "tangential_identity"};
}

DiffusionSpec scaled_tangential(double kappa) {
    if (!(kappa >= 0.0)) throw ValidationError("diffusion: kappa must be >= 0");
    return {[kappa](const Vec3&, const Vec3& normal, double) {
                return kappa * Mat3::tangential_projector(normal);
            },
            true, "scaled_tangential"};
}

DiffusionSpec anisotropic_diag(double d0, double d1, double d2) {
    if (!(d0 >= 0.0 && d1 >= 0.0 && d2 >= 0.0))
        throw ValidationError("diffusion: diagonal entries must be >= 0");
    return {[d0, d1, d2](const Vec3&, const Vec3& normal, double) {
                const Mat3 p = Mat3::tangential_projector(normal);
                const Mat3 d = Mat3::diagonal(d0, d1, d2);
                // P D P: symmetric and zero on the normal direction
                Mat3 r = Mat3::zero();
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j)
                        for (int k = 0; k < 3; ++k)
                            for (int l = 0; l < 3; ++l) r(i, j) += p(i, k) * d(k, l) * p(l, j);
                return r;
            },
            true, "anisotropic_diag"};
}

DiffusionSpec zero_diffusion() {
    return {[](const Vec3&, const Vec3&, double) { return Mat3::zero(); }, true, "zero"};
}

namespace {

std::array<Vec3, 3> moved_coords(const FlowMap& flow, const SurfaceMesh& mesh, int e, double t) {
    std::array<Vec3, 3> c{};
    for (int k = 0; k <= mesh.dim_surface; ++k)
        c[k] = flow.vertex_position(mesh.elements[e][k], t);
    return c;
}

ElementGeometry mode_geometry(const FlowMap& flow, const SurfaceMesh& mesh, int e, double t,
                              CoefficientMode mode) {
    if (mode == CoefficientMode::literal) return element_geometry(mesh, e);
    return element_geometry(moved_coords(flow, mesh, e, t), mesh.dim_surface);
}

} // namespace

std::vector<double> compute_c(const FlowMap& flow, const SurfaceMesh& mesh, double t,
                              CoefficientMode mode) {
    std::vector<double> c(mesh.num_elements());
    std::array<Vec3, 3> w{};
    for (int e = 0; e < mesh.num_elements(); ++e) {
        for (int k = 0; k <= mesh.dim_surface; ++k)
            w[k] = flow.vertex_velocity(mesh.elements[e][k], t);
        const ElementGeometry geom = mode_geometry(flow, mesh, e, t, mode);
        c[e] = tangential_divergence(geom, {w.data(), size_t(mesh.dim_surface + 1)});
    }
    return c;
}

std::vector<ChartTensor> effective_diffusion(const DiffusionSpec& d0, const FlowMap& flow,
                                             const SurfaceMesh& mesh, double t,
                                             CoefficientMode mode) {
    if (!d0.tensor) throw ValidationError("diffusion: missing tensor callback");
    const int dim = mesh.dim_surface;
    std::vector<ChartTensor> out(mesh.num_elements());
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const auto coords = (mode == CoefficientMode::literal)
                                ? mesh.element_coords(e)
                                : moved_coords(flow, mesh, e, t);
        const ElementGeometry geom = element_geometry(coords, dim);
        const Mat3 D = d0.tensor(geom.midpoint(coords), geom.unit_normal, t);

        const double scale = std::max(1.0, D.max_abs());
        if (D.asymmetry() > 1e-12 * scale)
            throw ValidationError("diffusion: non-symmetric D0 on element " + std::to_string(e));
        if (norm(D.apply(geom.unit_normal)) > 1e-8 * scale)
            throw ValidationError("diffusion: D0 does not vanish on the normal space (element " +
                                  std::to_string(e) + ", t=" + std::to_string(t) + ")");

        // b_ij = e_i . D e_j, then a = g^{-1} b g^{-1}
        double b[2][2] = {{0, 0}, {0, 0}};
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j)
                b[i][j] = dot(geom.edge_vectors[i], D.apply(geom.edge_vectors[j]));
        ChartTensor a;
        for (int k = 0; k < dim; ++k)
            for (int l = 0; l < dim; ++l) {
                double s = 0.0;
                for (int i = 0; i < dim; ++i)
                    for (int j = 0; j < dim; ++j)
                        s += geom.inverse_metric[k][i] * b[i][j] * geom.inverse_metric[j][l];
                a.a[k][l] = s;
            }
        // enforce exact symmetry of the stored tensor
        if (dim == 2) {
            const double sym = 0.5 * (a.a[0][1] + a.a[1][0]);
            a.a[0][1] = a.a[1][0] = sym;
        }
        out[e] = a;
    }
    return out;
}

std::vector<double> mass_weights(const FlowMap& flow, const SurfaceMesh& mesh, double t,
                                 CoefficientMode mode) {
    std::vector<double> w(mesh.num_elements(), 1.0);
    if (mode == CoefficientMode::literal) return w;
    const int dim = mesh.dim_surface;
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const auto moved = moved_coords(flow, mesh, e, t);
        double det = 0.0;
        if (dim == 1) {
            det = norm2(moved[1] - moved[0]);
        } else {
            const Vec3 e1 = moved[1] - moved[0], e2 = moved[2] - moved[0];
            det = norm2(e1) * norm2(e2) - dot(e1, e2) * dot(e1, e2);
        }
        const double moved_measure = std::sqrt(std::max(det, 0.0)) * (dim == 1 ? 1.0 : 0.5);
        const double ratio = moved_measure / element_geometry(mesh, e).measure;
        if (!(ratio >= 1e-12))
            throw NumericalError("flow degenerates element " + std::to_string(e) +
                                 " at t=" + std::to_string(t) + " (measure ratio " +
                                 std::to_string(ratio) + ")");
        w[e] = ratio;
    }
    return w;
}

std::vector<double> perturb_c(std::span<const double> c, double h, std::span<const double> g) {
    if (c.size() != g.size()) throw ValidationError("perturb_c: size mismatch");
    if (!(h >= 0.0)) throw ValidationError("perturb_c: h must be >= 0");
    for (double v : g)
        if (!(std::abs(v) <= 1.0 + 1e-12))
            throw ValidationError("perturb_c: profile must satisfy |g| <= 1");
    std::vector<double> out(c.size());
    for (size_t e = 0; e < c.size(); ++e) out[e] = c[e] + h * g[e];
    return out;
}

CoefficientSet build_coefficient_set(const FlowMap& flow, const SurfaceMesh& mesh,
                                     const DiffusionSpec& d0, std::span<const double> times,
                                     CoefficientMode mode) {
    CoefficientSet set;
    set.mode = mode;
    set.time_levels.assign(times.begin(), times.end());
    for (double t : times) {
        set.mass_weight.push_back(mass_weights(flow, mesh, t, mode));
        set.c_values.push_back(compute_c(flow, mesh, t, mode));
        set.diffusion_local.push_back(effective_diffusion(d0, flow, mesh, t, mode));
    }
    return set;
}

} // namespace surfpde
