#pragma once

#include <array>
#include <span>

#include "surfpde/geometry.hpp"
#include "surfpde/mesh.hpp"

namespace surfpde {

/// Per-element first-order geometry of the chart F(lambda) = p0 + sum_i lambda_i (p_i - p0).
///
/// The chart tangent vectors are the edge vectors e_i = p_i - p0, the metric is
/// g_ij = e_i . e_j, and the tangential gradient of the k-th P1 basis function
/// is grad(lambda_k) = g^{ij} d_j(lambda_k) e_i with the reference barycentric
/// derivatives d_j(lambda_0) = -1, d_j(lambda_k) = delta_jk. Only the n x n
/// blocks of the 2 x 2 arrays are meaningful for n = 1.
struct ElementGeometry {
    int dim = 2;
    std::array<Vec3, 2> edge_vectors{};
    double metric[2][2] = {{0, 0}, {0, 0}};
    double inverse_metric[2][2] = {{0, 0}, {0, 0}};
    double sqrt_det = 0.0;
    double measure = 0.0; // sqrt_det times the reference measure (1 or 1/2)
    std::array<Vec3, 3> basis_gradients{};
    /// n=2: normalized e1 x e2. n=1: in-plane left normal of the tangent.
    Vec3 unit_normal{};

    Vec3 midpoint(const std::array<Vec3, 3>& coords) const {
        Vec3 m{};
        for (int k = 0; k <= dim; ++k) m += coords[k];
        return m / double(dim + 1);
    }
};

/// Symmetric n x n tensor in chart coordinates (only the n x n block is used
/// for n = 1). Carries the effective diffusion a^{kl} = g^{ki} (e_i . D e_j) g^{jl}.
struct ChartTensor {
    double a[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
};

/// Reference barycentric gradients d_i(lambda_k), k = 0..n, i = 0..n-1.
inline double reference_barycentric_gradient(int k, int i) {
    return k == 0 ? -1.0 : (k - 1 == i ? 1.0 : 0.0);
}

ElementGeometry element_geometry(const std::array<Vec3, 3>& coords, int dim);
ElementGeometry element_geometry(const SurfaceMesh& mesh, int e);

/// Tangential gradient of the P1 interpolant of the nodal values; constant per element.
Vec3 tangential_gradient_p1(const ElementGeometry& geom, std::span<const double> nodal);

/// Tangential divergence g^{ij} d_i(X) . e_j of the componentwise P1 interpolant
/// of an ambient vector field given by its vertex values. Constant per element;
/// the position field yields exactly n.
double tangential_divergence(const ElementGeometry& geom, std::span<const Vec3> vertex_vectors);

/// L2 norm of the P1 function with the given nodal values (exact quadrature).
double l2_norm(const SurfaceMesh& mesh, std::span<const double> nodal);

/// L2 norm with per-element measure weights (for norms over a moved mesh).
double l2_norm_weighted(const SurfaceMesh& mesh, std::span<const double> nodal,
                        std::span<const double> element_weights);

/// H1 seminorm: element-constant gradients integrated over the mesh.
double h1_seminorm(const SurfaceMesh& mesh, std::span<const double> nodal);

/// Total measure (area for n=2, length for n=1).
double surface_measure(const SurfaceMesh& mesh);

} // namespace surfpde
