#include "surfpde/tangential.hpp"

#include <cmath>

#include "surfpde/errors.hpp"

namespace surfpde {

ElementGeometry element_geometry(const std::array<Vec3, 3>& coords, int dim) {
    if (dim != 1 && dim != 2) throw ValidationError("element_geometry: dim must be 1 or 2");
    ElementGeometry g;
    g.dim = dim;
    for (int i = 0; i < dim; ++i) g.edge_vectors[i] = coords[i + 1] - coords[0];
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) g.metric[i][j] = dot(g.edge_vectors[i], g.edge_vectors[j]);

    double det = 0.0;
    if (dim == 1) {
        det = g.metric[0][0];
        if (det > 0.0) g.inverse_metric[0][0] = 1.0 / det;
    } else {
        det = g.metric[0][0] * g.metric[1][1] - g.metric[0][1] * g.metric[1][0];
        if (det > 0.0) {
            const double inv = 1.0 / det;
            g.inverse_metric[0][0] = g.metric[1][1] * inv;
            g.inverse_metric[1][1] = g.metric[0][0] * inv;
            g.inverse_metric[0][1] = -g.metric[0][1] * inv;
            g.inverse_metric[1][0] = -g.metric[1][0] * inv;
        }
    }
    double edge_scale = 0.0;
    for (int i = 0; i < dim; ++i) edge_scale = std::max(edge_scale, norm2(g.edge_vectors[i]));
    if (!(det > 1e-28 * (dim == 1 ? edge_scale : edge_scale * edge_scale)))
        throw ValidationError("element_geometry: degenerate simplex");

    g.sqrt_det = std::sqrt(det);
    g.measure = g.sqrt_det * (dim == 1 ? 1.0 : 0.5);

    for (int k = 0; k <= dim; ++k) {
        Vec3 grad{};
        for (int i = 0; i < dim; ++i) {
            double coef = 0.0;
            for (int j = 0; j < dim; ++j)
                coef += g.inverse_metric[i][j] * reference_barycentric_gradient(k, j);
            grad += coef * g.edge_vectors[i];
        }
        g.basis_gradients[k] = grad;
    }

    if (dim == 2) {
        g.unit_normal = normalized(cross(g.edge_vectors[0], g.edge_vectors[1]));
    } else {
        const Vec3 t = normalized(g.edge_vectors[0]);
        g.unit_normal = {-t.y, t.x, 0.0};
    }
    return g;
}

ElementGeometry element_geometry(const SurfaceMesh& mesh, int e) {
    return element_geometry(mesh.element_coords(e), mesh.dim_surface);
}

Vec3 tangential_gradient_p1(const ElementGeometry& geom, std::span<const double> nodal) {
    Vec3 grad{};
    for (int k = 0; k <= geom.dim; ++k) grad += nodal[k] * geom.basis_gradients[k];
    return grad;
}

double tangential_divergence(const ElementGeometry& geom, std::span<const Vec3> vertex_vectors) {
    // sum_k X_k . grad(lambda_k) equals g^{ij} d_i(X) . e_j for P1 interpolation
    double div = 0.0;
    for (int k = 0; k <= geom.dim; ++k) div += dot(vertex_vectors[k], geom.basis_gradients[k]);
    return div;
}

namespace {

// integral of lambda_i lambda_j over the element is measure * (1 + delta_ij) / ((n+1)(n+2))
double element_l2_sq(const SurfaceMesh& mesh, int e, std::span<const double> nodal, double measure) {
    const int nvk = mesh.verts_per_element();
    const double scale = measure / double((nvk) * (nvk + 1));
    double s = 0.0;
    for (int i = 0; i < nvk; ++i) {
        const double ui = nodal[mesh.elements[e][i]];
        for (int j = 0; j < nvk; ++j) {
            const double uj = nodal[mesh.elements[e][j]];
            s += scale * (i == j ? 2.0 : 1.0) * ui * uj;
        }
    }
    return s;
}

} // namespace

double l2_norm(const SurfaceMesh& mesh, std::span<const double> nodal) {
    double s = 0.0;
    for (int e = 0; e < mesh.num_elements(); ++e)
        s += element_l2_sq(mesh, e, nodal, element_geometry(mesh, e).measure);
    return std::sqrt(s);
}

double l2_norm_weighted(const SurfaceMesh& mesh, std::span<const double> nodal,
                        std::span<const double> element_weights) {
    double s = 0.0;
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const double measure = element_geometry(mesh, e).measure * element_weights[e];
        s += element_l2_sq(mesh, e, nodal, measure);
    }
    return std::sqrt(s);
}

double h1_seminorm(const SurfaceMesh& mesh, std::span<const double> nodal) {
    double s = 0.0;
    double local[3];
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const auto geom = element_geometry(mesh, e);
        for (int k = 0; k <= geom.dim; ++k) local[k] = nodal[mesh.elements[e][k]];
        const Vec3 grad = tangential_gradient_p1(geom, {local, size_t(geom.dim + 1)});
        s += norm2(grad) * geom.measure;
    }
    return std::sqrt(s);
}

double surface_measure(const SurfaceMesh& mesh) {
    double s = 0.0;
    for (int e = 0; e < mesh.num_elements(); ++e) s += element_geometry(mesh, e).measure;
    return s;
}

} // namespace surfpde
