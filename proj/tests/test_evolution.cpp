#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <memory>

#include "helpers.hpp"
#include "surfpde/assembly.hpp"
#include "surfpde/errors.hpp"
#include "surfpde/evolution.hpp"
#include "surfpde/shapes.hpp"

using namespace surfpde;
using testutil::sample_vertices;

namespace {

EvolutionProblem base_problem(std::shared_ptr<const SurfaceMesh> mesh) {
    EvolutionProblem p;
    p.mesh = mesh;
    p.flow = std::make_shared<FlowMap>(identity_flow(mesh, 10.0));
    p.mode = CoefficientMode::literal;
    p.initial.assign(mesh->num_vertices(), 0.0);
    p.cg_tol = 1e-12;
    return p;
}

// discrete eigenvalue of the nodal vector u under (K, M); exact when u is a
// discrete eigenvector (Fourier modes on the regular polygon are)
double rayleigh_quotient(const SurfaceMesh& mesh, const std::vector<double>& u) {
    const auto flow = identity_flow(std::make_shared<SurfaceMesh>(mesh), 1.0);
    const auto tensors =
        effective_diffusion(tangential_identity(), flow, mesh, 0.0, CoefficientMode::literal);
    const auto K = assemble_stiffness(mesh, tensors);
    const auto M = assemble_mass(mesh, {}, K.pattern_ptr());
    const auto Ku = K.apply(u);
    const auto Mu = M.apply(u);
    double uKu = 0.0, uMu = 0.0;
    for (size_t i = 0; i < u.size(); ++i) {
        uKu += u[i] * Ku[i];
        uMu += u[i] * Mu[i];
    }
    return uKu / uMu;
}

} // namespace

TEST_SUITE("evolution") {

TEST_CASE("constants are preserved exactly on a closed surface") {
    const auto mesh = std::make_shared<SurfaceMesh>(make_icosphere(1));
    EvolutionProblem p = base_problem(mesh);
    const double kappa = 2.5;
    p.initial.assign(mesh->num_vertices(), kappa);
    p.t_final = 0.2;
    p.tau = 0.05;
    const auto traj = solve_evolution(p);
    for (const auto& level : traj.values)
        for (double v : level) CHECK(v == kappa); // warm-started CG takes zero iterations
    for (const auto& d : traj.diagnostics) CHECK(d.cg_iterations == 0);
}

TEST_CASE("pure reaction with theta=1 is the scalar implicit recurrence") {
    const auto mesh = std::make_shared<SurfaceMesh>(make_icosphere(1));
    EvolutionProblem p = base_problem(mesh);
    p.diffusion = zero_diffusion();
    const double lambda = 3.0, tau = 0.1;
    p.c_override = [&](double) {
        return std::vector<double>(mesh->num_elements(), lambda);
    };
    p.initial = sample_vertices(*mesh, [](const Vec3& q) { return 1.0 + q.x; });
    p.t_final = tau;
    p.tau = tau;
    p.theta = 1.0;
    const auto traj = solve_evolution(p);
    REQUIRE(traj.num_levels() == 2);
    for (int v = 0; v < mesh->num_vertices(); ++v)
        CHECK(traj.values[1][v] ==
              doctest::Approx(p.initial[v] / (1.0 + tau * lambda)).epsilon(1e-10));
}

TEST_CASE("step_theta standalone matches solve_evolution") {
    const auto mesh = std::make_shared<SurfaceMesh>(make_icosphere(0));
    EvolutionProblem p = base_problem(mesh);
    p.initial = sample_vertices(*mesh, [](const Vec3& q) { return q.x * q.y; });
    p.t_final = 0.1;
    p.tau = 0.1;
    const auto traj = solve_evolution(p);
    const auto one = step_theta(p, p.initial, 0.0, 0.1, p.theta);
    REQUIRE(traj.num_levels() == 2);
    for (int v = 0; v < mesh->num_vertices(); ++v) CHECK(one[v] == traj.values[1][v]);
}

TEST_CASE("pullback mode conserves the total discrete mass") {
    const auto mesh = std::make_shared<SurfaceMesh>(make_icosphere(1));
    EvolutionProblem p = base_problem(mesh);
    p.mode = CoefficientMode::pullback;
    p.flow = std::make_shared<FlowMap>(uniform_scale_flow(mesh, 0.5, 1.0));
    p.initial = sample_vertices(*mesh, [](const Vec3& q) { return 1.0 + q.x * q.y; });
    p.t_final = 1.0;
    p.tau = 0.05;
    p.cg_tol = 1e-13;
    const auto traj = solve_evolution(p);
    const double m0 = traj.diagnostics.front().discrete_mass;
    for (const auto& d : traj.diagnostics)
        CHECK(d.discrete_mass == doctest::Approx(m0).epsilon(1e-10));
    // the surface is growing: min c stays positive
    for (size_t k = 1; k < traj.diagnostics.size(); ++k) CHECK(traj.diagnostics[k].min_c > 0.0);
}

TEST_CASE("conservation also holds for the non-uniform ellipsoid flow") {
    const auto mesh = std::make_shared<SurfaceMesh>(make_icosphere(1));
    EvolutionProblem p = base_problem(mesh);
    p.mode = CoefficientMode::pullback;
    p.flow = std::make_shared<FlowMap>(ellipsoid_axis_flow(mesh, 0.4, 1.0));
    p.initial = sample_vertices(*mesh, [](const Vec3& q) { return 1.0 + 0.5 * q.z; });
    p.t_final = 1.0;
    p.tau = 0.05;
    p.cg_tol = 1e-13;
    const auto traj = solve_evolution(p);
    const double m0 = traj.diagnostics.front().discrete_mass;
    for (const auto& d : traj.diagnostics)
        CHECK(d.discrete_mass == doctest::Approx(m0).epsilon(1e-9));
    // the axis stretch is non-isometric: c changes sign over the period
    bool saw_negative = false;
    for (const auto& d : traj.diagnostics) saw_negative |= (d.min_c < 0.0);
    CHECK(saw_negative);
}

TEST_CASE("circle heat benchmark converges at second order") {
    std::vector<double> errors, hs;
    for (int n : {16, 32, 64}) {
        const auto mesh = std::make_shared<SurfaceMesh>(make_circle(n));
        EvolutionProblem p = base_problem(mesh);
        p.initial = sample_vertices(*mesh, [](const Vec3& q) { return q.x; });
        const double h = mesh_size(*mesh);
        p.tau = h * h;
        p.t_final = 1.0;
        const auto traj = solve_evolution(p);
        std::vector<double> err(mesh->num_vertices());
        for (int v = 0; v < mesh->num_vertices(); ++v)
            err[v] = traj.values.back()[v] - std::exp(-1.0) * mesh->vertices[v].x;
        errors.push_back(l2_norm(*mesh, err));
        hs.push_back(h);
    }
    for (size_t k = 0; k + 1 < errors.size(); ++k) {
        const double eoc = std::log(errors[k] / errors[k + 1]) / std::log(hs[k] / hs[k + 1]);
        CHECK(eoc >= 1.8);
    }
}

TEST_CASE("t_final = 0 yields the single initial level") {
    const auto mesh = std::make_shared<SurfaceMesh>(make_icosphere(0));
    EvolutionProblem p = base_problem(mesh);
    p.initial = sample_vertices(*mesh, [](const Vec3& q) { return q.z; });
    p.t_final = 0.0;
    const auto traj = solve_evolution(p);
    CHECK(traj.num_levels() == 1);
    CHECK(traj.values[0] == p.initial);
}

TEST_CASE("nodal source integrates exactly for constants") {
    // du/dt = 1 with zero diffusion influence (constant in space): u(t) = t
    const auto mesh = std::make_shared<SurfaceMesh>(make_icosphere(1));
    EvolutionProblem p = base_problem(mesh);
    p.source = [&](double) { return std::vector<double>(mesh->num_vertices(), 1.0); };
    p.t_final = 0.5;
    p.tau = 0.1;
    const auto traj = solve_evolution(p);
    for (int level = 0; level < traj.num_levels(); ++level)
        for (double v : traj.values[level])
            CHECK(v == doctest::Approx(traj.times[level]).epsilon(1e-10));
}

TEST_CASE("weak_load reproduces the nodal source path") {
    const auto mesh = std::make_shared<SurfaceMesh>(make_icosphere(0));
    const auto M = assemble_mass(*mesh);
    EvolutionProblem p = base_problem(mesh);
    p.initial = sample_vertices(*mesh, [](const Vec3& q) { return q.x; });
    p.t_final = 0.3;
    p.tau = 0.1;
    auto f = [&](double t) {
        return sample_vertices(*mesh, [t](const Vec3& q) { return q.y * (1.0 + t); });
    };
    EvolutionProblem p_nodal = p;
    p_nodal.source = f;
    EvolutionProblem p_weak = p;
    p_weak.weak_load = [&](double t) { return M.apply(f(t)); };
    const auto a = solve_evolution(p_nodal);
    const auto b = solve_evolution(p_weak);
    for (int level = 0; level < a.num_levels(); ++level)
        for (int v = 0; v < mesh->num_vertices(); ++v)
            CHECK(a.values[level][v] == doctest::Approx(b.values[level][v]).epsilon(1e-12));
}

TEST_CASE("implicit Euler decays monotonically for c >= 0") {
    const auto mesh = std::make_shared<SurfaceMesh>(make_icosphere(1));
    EvolutionProblem p = base_problem(mesh);
    p.initial = sample_vertices(
        *mesh, [](const Vec3& q) { return std::exp(-10.0 * norm2(q - Vec3{1, 0, 0})); });
    p.t_final = 0.5;
    p.tau = 0.05;
    p.theta = 1.0;
    const auto traj = solve_evolution(p);
    double prev = l2_norm(*mesh, traj.values[0]);
    for (int level = 1; level < traj.num_levels(); ++level) {
        const double cur = l2_norm(*mesh, traj.values[level]);
        CHECK(cur <= prev * (1.0 + 1e-8));
        prev = cur;
    }
}

TEST_CASE("time discretization orders: theta=1 first, theta=1/2 second") {
    const auto mesh = std::make_shared<SurfaceMesh>(make_circle(64));
    const auto u0 = sample_vertices(*mesh, [](const Vec3& q) { return q.x; });
    // u0 is an exact discrete eigenvector on the regular polygon, so the
    // semidiscrete solution exp(-lambda_h t) u0 isolates the time error
    const double lambda_h = rayleigh_quotient(*mesh, u0);
    CHECK(lambda_h == doctest::Approx(1.0).epsilon(0.01));

    for (double theta : {1.0, 0.5}) {
        std::vector<double> log_tau, log_err;
        for (double tau : {0.05, 0.025, 0.0125}) {
            EvolutionProblem p = base_problem(mesh);
            p.initial = u0;
            p.t_final = 1.0;
            p.tau = tau;
            p.theta = theta;
            p.cg_tol = 1e-13;
            const auto traj = solve_evolution(p);
            const double target = std::exp(-lambda_h);
            std::vector<double> err(mesh->num_vertices());
            for (int v = 0; v < mesh->num_vertices(); ++v)
                err[v] = traj.values.back()[v] - target * u0[v];
            log_tau.push_back(std::log(tau));
            log_err.push_back(std::log(l2_norm(*mesh, err)));
        }
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double n = 3.0;
        for (int i = 0; i < 3; ++i) {
            sx += log_tau[i];
            sy += log_err[i];
            sxx += log_tau[i] * log_tau[i];
            sxy += log_tau[i] * log_err[i];
        }
        const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        if (theta == 1.0) CHECK(slope == doctest::Approx(1.0).epsilon(0.2));
        else CHECK(slope == doctest::Approx(2.0).epsilon(0.15)); // 2.0 +/- 0.3
    }
}

TEST_CASE("literal mode assembles the stiffness exactly once") {
    const auto mesh = std::make_shared<SurfaceMesh>(make_icosphere(1));
    EvolutionProblem p = base_problem(mesh);
    p.flow = std::make_shared<FlowMap>(uniform_scale_flow(mesh, 1.0, 1.0));
    p.initial = sample_vertices(*mesh, [](const Vec3& q) { return q.x * q.y; });
    p.t_final = 0.5;
    p.tau = 0.1;
    const auto traj = solve_evolution(p);
    CHECK(traj.stiffness_assemblies == 1);

    EvolutionProblem pb = p;
    pb.mode = CoefficientMode::pullback;
    const auto traj_pb = solve_evolution(pb);
    CHECK(traj_pb.stiffness_assemblies == traj_pb.num_levels());
}

TEST_CASE("Dirichlet vertices stay pinned to zero") {
    const auto mesh = std::make_shared<SurfaceMesh>(make_disk(2));
    EvolutionProblem p = base_problem(mesh);
    p.initial.assign(mesh->num_vertices(), 1.0); // boundary values are forced to 0
    p.t_final = 0.2;
    p.tau = 0.05;
    const auto traj = solve_evolution(p);
    for (const auto& level : traj.values)
        for (int b : mesh->boundary_vertices) CHECK(level[b] == 0.0);
    // interior decays from the boundary inward
    const auto mask = boundary_mask(*mesh);
    for (int v = 0; v < mesh->num_vertices(); ++v)
        if (!mask[v]) CHECK(traj.values.back()[v] < 1.0);
}

TEST_CASE("pushforward snapshot transports values unchanged") {
    const auto mesh = std::make_shared<SurfaceMesh>(make_icosphere(1));
    EvolutionProblem p = base_problem(mesh);
    p.flow = std::make_shared<FlowMap>(uniform_scale_flow(mesh, 1.0, 1.0));
    p.initial = sample_vertices(*mesh, [](const Vec3& q) { return q.x * q.y; });
    p.t_final = 1.0;
    p.tau = 0.25;
    const auto traj = solve_evolution(p);

    const auto at0 = pushforward_snapshot(traj, *p.flow, *mesh, 0.0);
    CHECK(at0.values == p.initial);
    for (int v = 0; v < mesh->num_vertices(); ++v)
        CHECK(distance(at0.positions[v], mesh->vertices[v]) < 1e-15);

    const auto at1 = pushforward_snapshot(traj, *p.flow, *mesh, 1.0);
    CHECK(at1.values == traj.values.back()); // identical values, moved positions
    for (int v = 0; v < mesh->num_vertices(); ++v)
        CHECK(distance(at1.positions[v], 2.0 * mesh->vertices[v]) < 1e-15);

    // multiset of nodal values is untouched by the pushforward
    auto sorted_before = traj.values.back();
    auto sorted_after = at1.values;
    std::sort(sorted_before.begin(), sorted_before.end());
    std::sort(sorted_after.begin(), sorted_after.end());
    CHECK(sorted_before == sorted_after);
}

TEST_CASE("isometric flow preserves the discrete L2 norm of the pushforward") {
    const auto mesh = std::make_shared<SurfaceMesh>(make_icosphere(1));
    EvolutionProblem p = base_problem(mesh);
    p.mode = CoefficientMode::pullback;
    p.flow = std::make_shared<FlowMap>(
        integrate_flow(mesh, rotation_field(), 1.0, 0.002, OdeScheme::rk4));
    p.initial = sample_vertices(*mesh, [](const Vec3& q) { return q.x * q.y; });
    p.t_final = 1.0;
    p.tau = 0.1;
    const auto traj = solve_evolution(p);
    const auto& u = traj.values.back();
    const double fixed_norm = l2_norm(*mesh, u);
    const auto weights = mass_weights(*p.flow, *mesh, 1.0, CoefficientMode::pullback);
    const double moved_norm = l2_norm_weighted(*mesh, u, weights);
    CHECK(moved_norm == doctest::Approx(fixed_norm).epsilon(1e-10));
}

TEST_CASE("evaluate_pushforward: vertices, constants, and edge midpoints") {
    const auto mesh = std::make_shared<SurfaceMesh>(make_icosphere(1));
    EvolutionProblem p = base_problem(mesh);
    p.flow = std::make_shared<FlowMap>(uniform_scale_flow(mesh, 1.0, 1.0));
    p.initial = sample_vertices(*mesh, [](const Vec3& q) { return q.x + 0.5 * q.y * q.z; });
    p.t_final = 1.0;
    p.tau = 0.25;
    const auto traj = solve_evolution(p);

    const double t = 1.0;
    for (int v = 0; v < mesh->num_vertices(); v += 7) {
        const Vec3 moved = p.flow->position(mesh->vertices[v], t);
        CHECK(evaluate_pushforward(traj, *p.flow, *mesh, moved, t) ==
              doctest::Approx(traj.values.back()[v]).epsilon(1e-10));
    }

    // P1 linearity along a moved edge: the midpoint value is the mean
    const auto& el = mesh->elements[5];
    const Vec3 mid_fixed = 0.5 * (mesh->vertices[el[0]] + mesh->vertices[el[1]]);
    const Vec3 mid_moved = p.flow->position(mid_fixed, t);
    const double expected = 0.5 * (traj.values.back()[el[0]] + traj.values.back()[el[1]]);
    CHECK(evaluate_pushforward(traj, *p.flow, *mesh, mid_moved, t) ==
          doctest::Approx(expected).epsilon(1e-8));

    // a constant solution (zero reaction) evaluates to the constant anywhere
    EvolutionProblem pc = base_problem(mesh);
    pc.initial.assign(mesh->num_vertices(), 4.25);
    pc.t_final = 1.0;
    pc.tau = 0.25;
    const auto traj_c = solve_evolution(pc);
    CHECK(evaluate_pushforward(traj_c, *pc.flow, *mesh, mid_fixed, t) ==
          doctest::Approx(4.25).epsilon(1e-12));

    // far-away points are not located
    CHECK_THROWS_WITH_AS(evaluate_pushforward(traj, *p.flow, *mesh, {10, 10, 10}, t),
                         doctest::Contains("not located"), ValidationError);
}

TEST_CASE("problem validation") {
    const auto mesh = std::make_shared<SurfaceMesh>(make_icosphere(0));
    EvolutionProblem p = base_problem(mesh);
    p.initial.assign(mesh->num_vertices(), 0.0);
    p.theta = 0.25;
    CHECK_THROWS_WITH_AS(solve_evolution(p), doctest::Contains("theta"), ValidationError);
    p.theta = 1.0;
    p.tau = -1.0;
    CHECK_THROWS_WITH_AS(solve_evolution(p), doctest::Contains("tau"), ValidationError);
    p.tau = 0.1;
    p.initial.pop_back();
    CHECK_THROWS_WITH_AS(solve_evolution(p), doctest::Contains("initial"), ValidationError);
}

} // TEST_SUITE
