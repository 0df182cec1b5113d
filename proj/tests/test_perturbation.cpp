#include <doctest.h>

#include <cmath>
#include <memory>

#include "helpers.hpp"
#include "surfpde/assembly.hpp"
#include "surfpde/errors.hpp"
#include "surfpde/perturbation.hpp"
#include "surfpde/shapes.hpp"

using namespace surfpde;
using testutil::sample_vertices;

namespace {

EvolutionProblem sphere_base(std::shared_ptr<const SurfaceMesh> mesh, double t_final, double tau) {
    EvolutionProblem p;
    p.mesh = mesh;
    p.flow = std::make_shared<FlowMap>(identity_flow(mesh, t_final));
    p.mode = CoefficientMode::literal;
    p.initial = sample_vertices(*mesh, [](const Vec3& q) { return q.x * q.y; });
    p.t_final = t_final;
    p.tau = tau;
    p.cg_tol = 1e-12;
    return p;
}

} // namespace

TEST_SUITE("perturbation") {

TEST_CASE("spacetime norm of identical trajectories is zero") {
    const auto mesh = std::make_shared<SurfaceMesh>(make_icosphere(1));
    const auto p = sphere_base(mesh, 0.2, 0.05);
    const auto traj = solve_evolution(p);
    CHECK(spacetime_h1_norm(traj, traj, *mesh) == 0.0);
}

TEST_CASE("constant-in-time spatial constant: norm is kappa * sqrt(area)") {
    const auto mesh = std::make_shared<SurfaceMesh>(make_icosphere(1));
    const double kappa = 0.75;
    // build two synthetic trajectories over [0, 1] whose difference is kappa
    SolutionTrajectory a, b;
    for (int k = 0; k <= 10; ++k) {
        a.times.push_back(0.1 * k);
        b.times.push_back(0.1 * k);
        a.values.emplace_back(mesh->num_vertices(), kappa);
        b.values.emplace_back(mesh->num_vertices(), 0.0);
    }
    const double area = surface_measure(*mesh);
    CHECK(spacetime_h1_norm(a, b, *mesh) ==
          doctest::Approx(kappa * std::sqrt(area)).epsilon(1e-12));
}

TEST_CASE("linear-in-time difference integrates to |phi|_H1 / sqrt(3)") {
    const auto mesh = std::make_shared<SurfaceMesh>(make_icosphere(1));
    const auto phi = sample_vertices(*mesh, [](const Vec3& q) { return q.x * q.y; });
    const int n_levels = 100;
    SolutionTrajectory a, b;
    for (int k = 0; k <= n_levels; ++k) {
        const double t = double(k) / n_levels;
        a.times.push_back(t);
        b.times.push_back(t);
        std::vector<double> scaled(phi.size());
        for (size_t i = 0; i < phi.size(); ++i) scaled[i] = t * phi[i];
        a.values.push_back(scaled);
        b.values.emplace_back(phi.size(), 0.0);
    }
    const double l2 = l2_norm(*mesh, phi);
    const double h1 = h1_seminorm(*mesh, phi);
    const double expected = std::sqrt((l2 * l2 + h1 * h1) / 3.0);
    CHECK(spacetime_h1_norm(a, b, *mesh) == doctest::Approx(expected).epsilon(0.01));
}

TEST_CASE("mismatched trajectories are rejected") {
    const auto mesh = std::make_shared<SurfaceMesh>(make_icosphere(0));
    auto p = sphere_base(mesh, 0.2, 0.05);
    const auto traj = solve_evolution(p);
    p.tau = 0.1;
    const auto other = solve_evolution(p);
    CHECK_THROWS_AS(spacetime_h1_norm(traj, other, *mesh), ValidationError);
}

TEST_CASE("zero profile gives the exact sentinel") {
    const auto mesh = std::make_shared<SurfaceMesh>(make_icosphere(1));
    PerturbationConfig config;
    config.base = sphere_base(mesh, 0.1, 0.02);
    config.profile.assign(mesh->num_elements(), 0.0);
    const auto study = run_perturbation_study(config);
    CHECK(study.exact);
    for (double e : study.errors) CHECK(e == 0.0);
    CHECK(study.eoc.empty());
}

TEST_CASE("direct injection shows first-order error growth") {
    const auto mesh = std::make_shared<SurfaceMesh>(make_icosphere(2));
    PerturbationConfig config;
    config.base = sphere_base(mesh, 0.1, 0.005);
    const auto study = run_perturbation_study(config);
    REQUIRE(study.errors.size() == 3);
    CHECK(!study.exact);
    CHECK(study.slope == doctest::Approx(1.0).epsilon(0.2)); // inside [0.8, 1.2]
    // errors decrease with h (5% slack)
    for (size_t k = 0; k + 1 < study.errors.size(); ++k)
        CHECK(study.errors[k + 1] <= study.errors[k] * 1.05);
}

TEST_CASE("error responds linearly when the source trajectory is frozen") {
    // solve the error equation de/dt + c e - div(D grad e) = (c_h - c) u with a
    // fixed precomputed u; doubling the amplitude must double the error
    const auto mesh = std::make_shared<SurfaceMesh>(make_icosphere(1));
    const auto base = sphere_base(mesh, 0.1, 0.01);
    const auto u_traj = solve_evolution(base);
    const auto M_pattern = SparsityPattern::from_mesh(*mesh);
    const auto profile = alternating_profile(*mesh);

    auto solve_error_eq = [&](double h) {
        EvolutionProblem err_problem = base;
        err_problem.initial.assign(mesh->num_vertices(), 0.0);
        err_problem.weak_load = [&, h](double t) {
            // rhs = M_{(c_h - c)} u(t) with c_h - c = h * g
            std::vector<double> coeff(mesh->num_elements());
            for (int e = 0; e < mesh->num_elements(); ++e) coeff[e] = h * profile[e];
            const auto R = assemble_weighted_mass(*mesh, coeff);
            return R.apply(u_traj.values_at(t));
        };
        return solve_evolution(err_problem);
    };
    const auto zero = solve_evolution([&] {
        EvolutionProblem p = base;
        p.initial.assign(mesh->num_vertices(), 0.0);
        return p;
    }());
    const double e1 = spacetime_h1_norm(solve_error_eq(0.05), zero, *mesh);
    const double e2 = spacetime_h1_norm(solve_error_eq(0.10), zero, *mesh);
    CHECK(e2 / e1 == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("euler-integrated coefficient reproduces the first-order rate") {
    const auto mesh = std::make_shared<SurfaceMesh>(make_icosphere(1));
    PerturbationConfig config;
    config.base = sphere_base(mesh, 0.1, 0.005);
    config.source = PerturbationConfig::Source::euler_flow;
    config.field_name = "radial";
    config.h_levels = {0.02, 0.01, 0.005};
    const auto study = run_perturbation_study(config);
    CHECK(!study.exact);
    CHECK(study.slope == doctest::Approx(1.0).epsilon(0.25));
}

TEST_CASE("level validation") {
    const auto mesh = std::make_shared<SurfaceMesh>(make_icosphere(0));
    PerturbationConfig config;
    config.base = sphere_base(mesh, 0.1, 0.05);
    config.h_levels = {0.1, 0.05};
    CHECK_THROWS_WITH_AS(run_perturbation_study(config), doctest::Contains("3"), ValidationError);
    config.h_levels = {0.1, 0.2, 0.05};
    CHECK_THROWS_WITH_AS(run_perturbation_study(config), doctest::Contains("decreasing"),
                         ValidationError);
}

} // TEST_SUITE
