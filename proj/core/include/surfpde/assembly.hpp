#pragma once

#include <memory>
#include <span>

#include "surfpde/mesh.hpp"
#include "surfpde/sparse.hpp"
#include "surfpde/tangential.hpp"

namespace surfpde {

// P1 operators on the fixed mesh. Coefficients are element-constant; mass and
// stiffness integrals are exact for such coefficients. Passing an empty weight
// span means unit weights. When no pattern is supplied one is built from the
// mesh; sharing a pattern across calls makes repeated assembly values-only.

/// Weighted mass matrix: element contribution
/// weight * measure / 12 * [[2,1,1],[1,2,1],[1,1,2]] for triangles,
/// weight * length  /  6 * [[2,1],[1,2]]            for segments.
SparseSymMatrix assemble_mass(const SurfaceMesh& mesh, std::span<const double> element_weights = {},
                              std::shared_ptr<const SparsityPattern> pattern = nullptr);

/// Weighted stiffness matrix with chart-space diffusion tensors:
/// contribution_ij = weight * measure * d(lambda_i)^T a d(lambda_j) with
/// reference barycentric gradients. Tensors must be symmetric PSD.
SparseSymMatrix assemble_stiffness(const SurfaceMesh& mesh, std::span<const ChartTensor> diffusion,
                                   std::span<const double> element_weights = {},
                                   std::shared_ptr<const SparsityPattern> pattern = nullptr);

/// Mass matrix with element weight c * mass_weight; c may be negative.
SparseSymMatrix assemble_weighted_mass(const SurfaceMesh& mesh, std::span<const double> c_values,
                                       std::span<const double> element_weights = {},
                                       std::shared_ptr<const SparsityPattern> pattern = nullptr);

/// Symmetric elimination of homogeneous Dirichlet rows/columns: boundary rows
/// and columns zeroed, diagonal set to 1, rhs entries zeroed. (Boundary values
/// are homogeneous, so no column contribution moves to the rhs.)
void apply_dirichlet(SparseSymMatrix& matrix, std::span<double> rhs,
                     std::span<const int> boundary_vertices);

} // namespace surfpde
