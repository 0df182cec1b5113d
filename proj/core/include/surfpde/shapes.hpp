#pragma once

#include "surfpde/mesh.hpp"

namespace surfpde {

// Built-in meshes used by the harness and the test suites. Both sphere
// meshes are inscribed: all vertices lie exactly on the unit sphere.

/// Regular tetrahedron inscribed in the sphere of radius sqrt(3), outward oriented.
SurfaceMesh make_tetrahedron();

/// Regular icosahedron normalized to the unit sphere, outward oriented.
SurfaceMesh make_icosahedron();

/// Icosahedron subdivided `level` times, every vertex projected to the unit
/// sphere. level 0 is the icosahedron itself (12 vertices).
SurfaceMesh make_icosphere(int level);

/// Regular n-gon inscribed in the unit circle, closed, counterclockwise.
SurfaceMesh make_circle(int n);

/// Flat unit disk in the z = 0 plane: hexagonal fan refined `level` times with
/// rim vertices snapped to the unit circle. Has a nonempty boundary.
SurfaceMesh make_disk(int level);

/// Axis-aligned unit square traversed counterclockwise (4 segments of length 1).
SurfaceMesh make_square_curve();

SurfaceProjector unit_sphere_projector();
SurfaceProjector unit_circle_projector();

} // namespace surfpde
