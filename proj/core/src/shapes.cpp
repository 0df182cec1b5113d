#include "surfpde/shapes.hpp"

#include <cmath>

#include "surfpde/errors.hpp"

namespace surfpde {

SurfaceMesh make_tetrahedron() {
    std::vector<Vec3> v = {{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
    std::vector<std::array<int, 3>> f = {{0, 1, 2}, {0, 2, 3}, {0, 3, 1}, {1, 3, 2}};
    return build_mesh(2, std::move(v), std::move(f));
}

SurfaceMesh make_icosahedron() {
    const double t = 0.5 * (1.0 + std::sqrt(5.0));
    std::vector<Vec3> v = {{-1, t, 0}, {1, t, 0},   {-1, -t, 0}, {1, -t, 0},
                           {0, -1, t}, {0, 1, t},   {0, -1, -t}, {0, 1, -t},
                           {t, 0, -1}, {t, 0, 1},   {-t, 0, -1}, {-t, 0, 1}};
    for (auto& p : v) p = normalized(p);
    std::vector<std::array<int, 3>> f = {
        {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
        {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
        {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
        {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
    return build_mesh(2, std::move(v), std::move(f));
}

SurfaceMesh make_icosphere(int level) {
    if (level < 0) throw ValidationError("icosphere: level must be >= 0");
    SurfaceMesh mesh = make_icosahedron();
    const auto proj = unit_sphere_projector();
    for (int l = 0; l < level; ++l) mesh = refine(mesh, proj);
    return mesh;
}

SurfaceMesh make_circle(int n) {
    if (n < 3) throw ValidationError("circle: need at least 3 vertices");
    std::vector<Vec3> v;
    v.reserve(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) {
        const double a = 2.0 * M_PI * k / n;
        v.emplace_back(std::cos(a), std::sin(a), 0.0);
    }
    std::vector<std::array<int, 3>> segs;
    segs.reserve(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) segs.push_back({k, (k + 1) % n, -1});
    return build_mesh(1, std::move(v), std::move(segs));
}

SurfaceMesh make_disk(int level) {
    if (level < 0) throw ValidationError("disk: level must be >= 0");
    std::vector<Vec3> v = {{0, 0, 0}};
    for (int k = 0; k < 6; ++k) {
        const double a = 2.0 * M_PI * k / 6;
        v.emplace_back(std::cos(a), std::sin(a), 0.0);
    }
    std::vector<std::array<int, 3>> f;
    for (int k = 0; k < 6; ++k) f.push_back({0, 1 + k, 1 + (k + 1) % 6});
    SurfaceMesh mesh = build_mesh(2, std::move(v), std::move(f));
    for (int l = 0; l < level; ++l) {
        mesh = refine(mesh);
        // snap the rim onto the unit circle; interior stays flat
        std::vector<Vec3> verts = mesh.vertices;
        for (int b : mesh.boundary_vertices) {
            const double r = std::hypot(verts[b].x, verts[b].y);
            verts[b] = {verts[b].x / r, verts[b].y / r, 0.0};
        }
        mesh = build_mesh(2, std::move(verts), std::move(mesh.elements));
    }
    return mesh;
}

SurfaceMesh make_square_curve() {
    std::vector<Vec3> v = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}};
    std::vector<std::array<int, 3>> segs = {{0, 1, -1}, {1, 2, -1}, {2, 3, -1}, {3, 0, -1}};
    return build_mesh(1, std::move(v), std::move(segs));
}

SurfaceProjector unit_sphere_projector() {
    return [](const Vec3& p) { return normalized(p); };
}

SurfaceProjector unit_circle_projector() {
    return [](const Vec3& p) {
        const double r = std::hypot(p.x, p.y);
        return Vec3{p.x / r, p.y / r, 0.0};
    };
}

} // namespace surfpde
