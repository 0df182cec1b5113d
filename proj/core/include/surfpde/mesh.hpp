#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "surfpde/geometry.hpp"

namespace surfpde {

/// Fixed triangulated surface (dim_surface = 2, elements are triangles in R^3)
/// or polygonal curve (dim_surface = 1, elements are segments in the z = 0
/// plane). Instances are immutable after construction; every factory path runs
/// the full validation set (index ranges, degeneracy, manifoldness, consistent
/// orientation) and computes the boundary vertex set.
struct SurfaceMesh {
    int dim_surface = 2;
    std::vector<Vec3> vertices;
    /// dim_surface+1 indices per element; entry [2] is -1 for segments.
    std::vector<std::array<int, 3>> elements;
    /// Vertices incident to a facet owned by exactly one element; sorted ascending.
    std::vector<int> boundary_vertices;

    int num_vertices() const { return static_cast<int>(vertices.size()); }
    int num_elements() const { return static_cast<int>(elements.size()); }
    int verts_per_element() const { return dim_surface + 1; }

    std::array<Vec3, 3> element_coords(int e) const {
        std::array<Vec3, 3> c{};
        for (int k = 0; k <= dim_surface; ++k) c[k] = vertices[elements[e][k]];
        return c;
    }
};

/// Validate raw data and construct a mesh (boundary set computed here).
/// Throws ValidationError on out-of-range indices, degenerate elements,
/// non-manifold facets, or inconsistent orientation.
SurfaceMesh build_mesh(int dim_surface, std::vector<Vec3> vertices,
                       std::vector<std::array<int, 3>> elements);

/// ASCII OFF reader, triangles only. Errors name the offending line.
SurfaceMesh load_off(std::istream& in);
SurfaceMesh load_off_file(const std::string& path);

/// Curve reader. First line "CURVE <N> <closed|open>", then N lines "x y".
SurfaceMesh load_curve(std::istream& in);
SurfaceMesh load_curve_file(const std::string& path);

/// Closest-point map onto the exact surface; must be idempotent on its image.
/// An empty function means "no projection".
using SurfaceProjector = std::function<Vec3(const Vec3&)>;

/// Midpoint (red) refinement: every triangle splits into 4, every segment into
/// 2. New vertices sit at edge midpoints and are mapped by the projector when
/// one is given. Orientation is inherited from the parent elements.
SurfaceMesh refine(const SurfaceMesh& mesh, const SurfaceProjector& projector = {});

/// Maximum element diameter (longest edge over all elements).
double mesh_size(const SurfaceMesh& mesh);

/// Number of distinct undirected edges (n=2) or segments (n=1).
int count_edges(const SurfaceMesh& mesh);

/// Per-vertex flag vector: 1 for boundary vertices, 0 otherwise.
std::vector<char> boundary_mask(const SurfaceMesh& mesh);

} // namespace surfpde
