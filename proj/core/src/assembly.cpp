#include "surfpde/assembly.hpp"

#include <cmath>
#include <string>

#include "surfpde/errors.hpp"

namespace surfpde {

namespace {

std::shared_ptr<const SparsityPattern> pattern_or_build(const SurfaceMesh& mesh,
                                                        std::shared_ptr<const SparsityPattern> p) {
    if (p) {
        if (p->n != mesh.num_vertices())
            throw ValidationError("assembly: pattern dimension does not match mesh");
        return p;
    }
    return std::make_shared<SparsityPattern>(SparsityPattern::from_mesh(mesh));
}

double weight_of(std::span<const double> weights, int e) {
    return weights.empty() ? 1.0 : weights[e];
}

// scatter a local (n+1)x(n+1) matrix
void scatter(SparseSymMatrix& A, const SurfaceMesh& mesh, int e, const double local[3][3]) {
    const int k = mesh.verts_per_element();
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) A.add(mesh.elements[e][i], mesh.elements[e][j], local[i][j]);
}

SparseSymMatrix assemble_mass_like(const SurfaceMesh& mesh, std::span<const double> c_values,
                                   std::span<const double> element_weights,
                                   std::shared_ptr<const SparsityPattern> pattern,
                                   bool require_positive) {
    SparseSymMatrix A(pattern_or_build(mesh, std::move(pattern)));
    const int k = mesh.verts_per_element();
    double local[3][3];
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const double w = weight_of(element_weights, e);
        if (require_positive && !(w > 0.0))
            throw ValidationError("assembly: nonpositive mass weight on element " +
                                  std::to_string(e));
        const double c = c_values.empty() ? 1.0 : c_values[e];
        const double measure = element_geometry(mesh, e).measure;
        const double scale = c * w * measure / double(k * (k + 1));
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) local[i][j] = scale * (i == j ? 2.0 : 1.0);
        scatter(A, mesh, e, local);
    }
    return A;
}

} // namespace

SparseSymMatrix assemble_mass(const SurfaceMesh& mesh, std::span<const double> element_weights,
                              std::shared_ptr<const SparsityPattern> pattern) {
    return assemble_mass_like(mesh, {}, element_weights, std::move(pattern), true);
}

SparseSymMatrix assemble_weighted_mass(const SurfaceMesh& mesh, std::span<const double> c_values,
                                       std::span<const double> element_weights,
                                       std::shared_ptr<const SparsityPattern> pattern) {
    if (static_cast<int>(c_values.size()) != mesh.num_elements())
        throw ValidationError("assembly: c_values size does not match element count");
    return assemble_mass_like(mesh, c_values, element_weights, std::move(pattern), true);
}

SparseSymMatrix assemble_stiffness(const SurfaceMesh& mesh, std::span<const ChartTensor> diffusion,
                                   std::span<const double> element_weights,
                                   std::shared_ptr<const SparsityPattern> pattern) {
    if (static_cast<int>(diffusion.size()) != mesh.num_elements())
        throw ValidationError("assembly: diffusion size does not match element count");
    SparseSymMatrix A(pattern_or_build(mesh, std::move(pattern)));
    const int dim = mesh.dim_surface;
    const int k = dim + 1;
    double local[3][3];
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const ChartTensor& a = diffusion[e];
        const double scale = std::max({std::abs(a.a[0][0]), std::abs(a.a[1][1]),
                                       std::abs(a.a[0][1]), 1e-300});
        if (std::abs(a.a[0][1] - a.a[1][0]) > 1e-12 * scale)
            throw ValidationError("assembly: asymmetric diffusion tensor on element " +
                                  std::to_string(e));
        const double tr = a.a[0][0] + (dim == 2 ? a.a[1][1] : 0.0);
        const double det2 = a.a[0][0] * a.a[1][1] - a.a[0][1] * a.a[1][0];
        if (tr < -1e-12 * scale || (dim == 2 && det2 < -1e-12 * scale * scale))
            throw ValidationError("assembly: indefinite diffusion tensor on element " +
                                  std::to_string(e));

        const double measure = element_geometry(mesh, e).measure;
        const double w = weight_of(element_weights, e) * measure;
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) {
                double s = 0.0;
                for (int p = 0; p < dim; ++p)
                    for (int q = 0; q < dim; ++q)
                        s += reference_barycentric_gradient(i, p) * a.a[p][q] *
                             reference_barycentric_gradient(j, q);
                local[i][j] = w * s;
            }
        scatter(A, mesh, e, local);
    }
    return A;
}

void apply_dirichlet(SparseSymMatrix& matrix, std::span<double> rhs,
                     std::span<const int> boundary_vertices) {
    const int n = matrix.dimension();
    if (static_cast<int>(rhs.size()) != n)
        throw ValidationError("apply_dirichlet: rhs size mismatch");
    std::vector<char> flag(n, 0);
    for (int b : boundary_vertices) {
        if (b < 0 || b >= n) throw ValidationError("apply_dirichlet: boundary index out of range");
        flag[b] = 1;
    }
    if (boundary_vertices.empty()) return;

    const auto& p = matrix.pattern();
    auto& vals = matrix.values();
    for (int i = 0; i < p.n; ++i)
        for (int idx = p.offsets[i]; idx < p.offsets[i + 1]; ++idx) {
            const int j = p.cols[idx];
            if (flag[i] || flag[j]) vals[idx] = (i == j) ? 1.0 : 0.0;
        }
    for (int b : boundary_vertices) rhs[b] = 0.0;
}

} // namespace surfpde
