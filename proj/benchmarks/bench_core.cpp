#include <benchmark/benchmark.h>

#include <map>
#include <memory>

#include "surfpde/assembly.hpp"
#include "surfpde/coefficients.hpp"
#include "surfpde/evolution.hpp"
#include "surfpde/shapes.hpp"

using namespace surfpde;

namespace {

std::shared_ptr<const SurfaceMesh> icosphere(int level) {
    static std::map<int, std::shared_ptr<const SurfaceMesh>> cache;
    auto& slot = cache[level];
    if (!slot) slot = std::make_shared<SurfaceMesh>(make_icosphere(level));
    return slot;
}

std::vector<double> harmonic(const SurfaceMesh& mesh) {
    std::vector<double> u(mesh.num_vertices());
    for (int v = 0; v < mesh.num_vertices(); ++v)
        u[v] = mesh.vertices[v].x * mesh.vertices[v].y;
    return u;
}

void BM_Refine(benchmark::State& state) {
    const auto mesh = icosphere(static_cast<int>(state.range(0)));
    const auto proj = unit_sphere_projector();
    for (auto _ : state) {
        SurfaceMesh fine = refine(*mesh, proj);
        benchmark::DoNotOptimize(fine.vertices.data());
    }
}
BENCHMARK(BM_Refine)->DenseRange(1, 4);

void BM_AssembleMass(benchmark::State& state) {
    const auto mesh = icosphere(static_cast<int>(state.range(0)));
    const auto pattern = std::make_shared<SparsityPattern>(SparsityPattern::from_mesh(*mesh));
    for (auto _ : state) {
        auto M = assemble_mass(*mesh, {}, pattern);
        benchmark::DoNotOptimize(M.values().data());
    }
}
BENCHMARK(BM_AssembleMass)->DenseRange(2, 5);

void BM_AssembleStiffness(benchmark::State& state) {
    const auto mesh = icosphere(static_cast<int>(state.range(0)));
    const auto pattern = std::make_shared<SparsityPattern>(SparsityPattern::from_mesh(*mesh));
    const FlowMap flow = identity_flow(mesh, 1.0);
    const auto tensors =
        effective_diffusion(tangential_identity(), flow, *mesh, 0.0, CoefficientMode::literal);
    for (auto _ : state) {
        auto K = assemble_stiffness(*mesh, tensors, {}, pattern);
        benchmark::DoNotOptimize(K.values().data());
    }
}
BENCHMARK(BM_AssembleStiffness)->DenseRange(2, 5);

void BM_CgSolve(benchmark::State& state) {
    const auto mesh = icosphere(static_cast<int>(state.range(0)));
    const FlowMap flow = identity_flow(mesh, 1.0);
    const auto tensors =
        effective_diffusion(tangential_identity(), flow, *mesh, 0.0, CoefficientMode::literal);
    auto A = assemble_stiffness(*mesh, tensors);
    const auto M = assemble_mass(*mesh, {}, A.pattern_ptr());
    A.axpy(1.0, M); // SPD Helmholtz-type system
    const auto b = M.apply(harmonic(*mesh));
    for (auto _ : state) {
        auto res = cg_solve(A, b, 1e-10, 10000);
        benchmark::DoNotOptimize(res.x.data());
    }
}
BENCHMARK(BM_CgSolve)->DenseRange(2, 4);

void BM_FlowRk4(benchmark::State& state) {
    const auto mesh = icosphere(3);
    const double tau = 1.0 / static_cast<double>(state.range(0));
    for (auto _ : state) {
        FlowMap flow = integrate_flow(mesh, rotation_field(), 1.0, tau, OdeScheme::rk4);
        benchmark::DoNotOptimize(&flow);
    }
}
BENCHMARK(BM_FlowRk4)->Arg(50)->Arg(100)->Arg(200);

void BM_ThetaStep(benchmark::State& state) {
    const auto mesh = icosphere(static_cast<int>(state.range(0)));
    EvolutionProblem p;
    p.mesh = mesh;
    p.flow = std::make_shared<FlowMap>(uniform_scale_flow(mesh, 0.5, 1.0));
    p.mode = CoefficientMode::pullback;
    p.initial = harmonic(*mesh);
    p.t_final = 1.0;
    p.tau = 0.02;
    for (auto _ : state) {
        auto next = step_theta(p, p.initial, 0.0, p.tau, p.theta);
        benchmark::DoNotOptimize(next.data());
    }
}
BENCHMARK(BM_ThetaStep)->DenseRange(2, 4);

} // namespace

BENCHMARK_MAIN();
