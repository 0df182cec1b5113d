#include <doctest.h>

#include <array>
#include <cmath>

#include "helpers.hpp"
#include "surfpde/errors.hpp"
#include "surfpde/shapes.hpp"
#include "surfpde/tangential.hpp"

using namespace surfpde;
using testutil::sample_vertices;
using testutil::sphere_integral;

namespace {

const std::array<Vec3, 3> kUnitRightTriangle = {Vec3{0, 0, 0}, Vec3{1, 0, 0}, Vec3{0, 1, 0}};

} // namespace

TEST_SUITE("tangential") {

TEST_CASE("flat unit right triangle: identity chart") {
    const auto g = element_geometry(kUnitRightTriangle, 2);
    CHECK(g.metric[0][0] == doctest::Approx(1.0));
    CHECK(g.metric[0][1] == doctest::Approx(0.0));
    CHECK(g.metric[1][1] == doctest::Approx(1.0));
    CHECK(g.measure == doctest::Approx(0.5));
    CHECK(distance(g.basis_gradients[0], {-1, -1, 0}) < 1e-14);
    CHECK(distance(g.basis_gradients[1], {1, 0, 0}) < 1e-14);
    CHECK(distance(g.basis_gradients[2], {0, 1, 0}) < 1e-14);
}

TEST_CASE("uniformly scaled triangle") {
    const std::array<Vec3, 3> coords = {Vec3{0, 0, 0}, Vec3{2, 0, 0}, Vec3{0, 2, 0}};
    const auto g = element_geometry(coords, 2);
    CHECK(g.metric[0][0] == doctest::Approx(4.0));
    CHECK(g.metric[1][1] == doctest::Approx(4.0));
    CHECK(g.metric[0][1] == doctest::Approx(0.0));
    CHECK(g.measure == doctest::Approx(2.0));
}

TEST_CASE("segment in the plane") {
    const std::array<Vec3, 3> coords = {Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{}};
    const auto g = element_geometry(coords, 1);
    CHECK(g.metric[0][0] == doctest::Approx(2.0));
    CHECK(g.measure == doctest::Approx(std::sqrt(2.0)));
    CHECK(std::abs(dot(g.unit_normal, g.edge_vectors[0])) < 1e-14);
}

TEST_CASE("degenerate simplex is rejected") {
    const std::array<Vec3, 3> coords = {Vec3{0, 0, 0}, Vec3{1, 0, 0}, Vec3{2, 0, 0}};
    CHECK_THROWS_AS(element_geometry(coords, 2), ValidationError);
}

TEST_CASE("per-element structural invariants on the icosphere") {
    const SurfaceMesh mesh = make_icosphere(2);
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const auto g = element_geometry(mesh, e);
        // metric SPD and inverse consistent
        CHECK(g.metric[0][0] > 0.0);
        CHECK(g.metric[0][0] * g.metric[1][1] - g.metric[0][1] * g.metric[1][0] > 0.0);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                double id = 0.0;
                for (int k = 0; k < 2; ++k) id += g.inverse_metric[i][k] * g.metric[k][j];
                CHECK(id == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
            }
        // partition of unity and normal orthogonality of the basis gradients
        Vec3 sum{};
        for (int k = 0; k < 3; ++k) {
            sum += g.basis_gradients[k];
            CHECK(std::abs(dot(g.basis_gradients[k], g.unit_normal)) < 1e-12);
        }
        CHECK(norm(sum) < 1e-12);
        CHECK(g.measure == doctest::Approx(g.sqrt_det * 0.5).epsilon(1e-14));
    }
}

TEST_CASE("tangential gradient examples") {
    const auto g = element_geometry(kUnitRightTriangle, 2);
    const double constant[3] = {1.0, 1.0, 1.0};
    CHECK(norm(tangential_gradient_p1(g, constant)) < 1e-14);
    const double linear[3] = {0.0, 1.0, 0.0}; // h = x1 on the identity chart
    CHECK(distance(tangential_gradient_p1(g, linear), {1, 0, 0}) < 1e-14);
}

TEST_CASE("gradient of a sampled function is tangent to sphere elements") {
    const SurfaceMesh mesh = make_icosphere(2);
    const auto nodal = sample_vertices(mesh, [](const Vec3& p) { return p.z; });
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const auto g = element_geometry(mesh, e);
        double local[3];
        for (int k = 0; k < 3; ++k) local[k] = nodal[mesh.elements[e][k]];
        const Vec3 grad = tangential_gradient_p1(g, local);
        CHECK(std::abs(dot(grad, g.unit_normal)) < 1e-12);
    }
}

TEST_CASE("tangential divergence examples") {
    const SurfaceMesh sphere = make_icosphere(1);
    const SurfaceMesh circle = make_circle(24);

    // position field gives exactly n
    for (int e = 0; e < sphere.num_elements(); ++e) {
        const auto g = element_geometry(sphere, e);
        const auto c = sphere.element_coords(e);
        CHECK(tangential_divergence(g, c) == doctest::Approx(2.0).epsilon(1e-12));
    }
    for (int e = 0; e < circle.num_elements(); ++e) {
        const auto g = element_geometry(circle, e);
        const auto c = circle.element_coords(e);
        CHECK(tangential_divergence(g, {c.data(), 2}) == doctest::Approx(1.0).epsilon(1e-12));
    }

    // constant field has zero divergence
    const auto g0 = element_geometry(kUnitRightTriangle, 2);
    const std::array<Vec3, 3> constant = {Vec3{1, 2, 3}, Vec3{1, 2, 3}, Vec3{1, 2, 3}};
    CHECK(std::abs(tangential_divergence(g0, constant)) < 1e-12);

    // in-plane rotation field on a flat triangle is divergence-free
    std::array<Vec3, 3> rot{};
    for (int k = 0; k < 3; ++k)
        rot[k] = {-kUnitRightTriangle[k].y, kUnitRightTriangle[k].x, 0.0};
    CHECK(std::abs(tangential_divergence(g0, rot)) < 1e-12);
}

TEST_CASE("norms of constants: sqrt(area) and zero seminorm") {
    const SurfaceMesh mesh = make_icosphere(2);
    std::vector<double> ones(mesh.num_vertices(), 1.0);
    const double area = surface_measure(mesh);
    CHECK(l2_norm(mesh, ones) == doctest::Approx(std::sqrt(area)).epsilon(1e-12));
    CHECK(h1_seminorm(mesh, ones) < 1e-12);
}

TEST_CASE("seminorm of a linear function on one triangle") {
    const SurfaceMesh tri = build_mesh(
        2, {kUnitRightTriangle[0], kUnitRightTriangle[1], kUnitRightTriangle[2]}, {{0, 1, 2}});
    const std::vector<double> nodal = {0.0, 1.0, 0.0}; // h = x1
    CHECK(h1_seminorm(tri, nodal) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
}

TEST_CASE("l2 norm of x1*x2 on the icosphere approaches the sphere integral") {
    // oracle: independent quadrature over the exact sphere
    const double exact = sphere_integral([](const Vec3& p) { return p.x * p.x * p.y * p.y; });
    CHECK(exact == doctest::Approx(4.0 * M_PI / 15.0).epsilon(1e-12)); // oracle self-check

    const SurfaceMesh mesh = make_icosphere(4);
    const auto nodal = sample_vertices(mesh, [](const Vec3& p) { return p.x * p.y; });
    const double val = l2_norm(mesh, nodal);
    CHECK(val * val == doctest::Approx(exact).epsilon(0.02));
}

TEST_CASE("scale covariance") {
    const SurfaceMesh mesh = make_icosphere(1);
    const double s = 2.0;
    std::vector<Vec3> scaled = mesh.vertices;
    for (auto& p : scaled) p *= s;
    const SurfaceMesh big = build_mesh(2, scaled, mesh.elements);

    const auto nodal = sample_vertices(mesh, [](const Vec3& p) { return p.x * p.y; });
    CHECK(surface_measure(big) == doctest::Approx(s * s * surface_measure(mesh)).epsilon(1e-12));
    CHECK(l2_norm(big, nodal) == doctest::Approx(s * l2_norm(mesh, nodal)).epsilon(1e-12));
    CHECK(h1_seminorm(big, nodal) == doctest::Approx(h1_seminorm(mesh, nodal)).epsilon(1e-12));

    const SurfaceMesh curve = make_circle(16);
    std::vector<Vec3> scaled_c = curve.vertices;
    for (auto& p : scaled_c) p *= s;
    const SurfaceMesh big_c = build_mesh(1, scaled_c, curve.elements);
    const auto nodal_c = sample_vertices(curve, [](const Vec3& p) { return p.x; });
    CHECK(l2_norm(big_c, nodal_c) ==
          doctest::Approx(std::sqrt(s) * l2_norm(curve, nodal_c)).epsilon(1e-12));
    CHECK(h1_seminorm(big_c, nodal_c) ==
          doctest::Approx(h1_seminorm(curve, nodal_c) / std::sqrt(s)).epsilon(1e-12));
}

TEST_CASE("gradient commutes with rigid rotations") {
    const double a = 0.7;
    const double R[3][3] = {{std::cos(a), -std::sin(a), 0},
                            {std::sin(a), std::cos(a), 0},
                            {0, 0, 1}};
    auto rotate = [&](const Vec3& p) {
        return Vec3{R[0][0] * p.x + R[0][1] * p.y + R[0][2] * p.z,
                    R[1][0] * p.x + R[1][1] * p.y + R[1][2] * p.z,
                    R[2][0] * p.x + R[2][1] * p.y + R[2][2] * p.z};
    };
    const std::array<Vec3, 3> coords = {Vec3{0.1, 0.2, 0.3}, Vec3{1.0, 0.1, -0.2},
                                        Vec3{0.3, 1.1, 0.4}};
    std::array<Vec3, 3> rotated{};
    for (int k = 0; k < 3; ++k) rotated[k] = rotate(coords[k]);
    const double nodal[3] = {0.4, -1.2, 2.0};
    const Vec3 grad = tangential_gradient_p1(element_geometry(coords, 2), nodal);
    const Vec3 grad_rot = tangential_gradient_p1(element_geometry(rotated, 2), nodal);
    CHECK(distance(rotate(grad), grad_rot) < 1e-12);
}

} // TEST_SUITE
