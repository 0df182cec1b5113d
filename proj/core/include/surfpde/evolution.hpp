#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "surfpde/assembly.hpp"
#include "surfpde/coefficients.hpp"
#include "surfpde/flowmap.hpp"
#include "surfpde/mesh.hpp"

namespace surfpde {

/// Time-marching problem for the fixed-surface equation
///   du/dt + c u - div(D grad u) = f   on the initial surface,
/// with homogeneous Dirichlet values on the boundary vertex set.
///
/// The theta-scheme solves, per step,
///   [M(t+tau)/tau + theta (K + R)(t+tau)] u+ =
///   [M(t)/tau - (1-theta) (K + R)(t)] u + theta L(t+tau) + (1-theta) L(t),
/// i.e. the time-dependent mass term is discretized in conservative form,
/// d/dt(M u) ~ (M(t+tau) u+ - M(t) u) / tau.
///
/// R is the net reaction matrix. In literal mode the reaction c u appears
/// explicitly, so R is the c-weighted mass. In pullback mode the growth of the
/// weighted mass matrix carries the advection exactly — elementwise,
/// d/dt(moved measure) = moved measure * c — so the reaction term cancels
/// against the mass growth and R holds only the residual (c_used - c_flow),
/// which vanishes unless c is overridden (perturbation runs). On a closed
/// surface this makes the total discrete mass 1^T M(t) u(t) exactly constant.
struct EvolutionProblem {
    std::shared_ptr<const SurfaceMesh> mesh;
    std::shared_ptr<const FlowMap> flow; // defaults to the identity when null
    CoefficientMode mode = CoefficientMode::pullback;
    DiffusionSpec diffusion = tangential_identity();
    std::vector<double> initial; // nodal u0 (vertex interpolant)
    double t_final = 1.0;
    double tau = 0.01;
    double theta = 1.0; // in [1/2, 1]

    /// Optional nodal source values f(t); assembled against M(t).
    std::function<std::vector<double>(double)> source;
    /// Optional pre-assembled load vector added to the rhs at time t.
    std::function<std::vector<double>(double)> weak_load;
    /// Optional override of the per-element reaction coefficient (perturbed
    /// coefficient runs). Receives t, returns one value per element.
    std::function<std::vector<double>(double)> c_override;

    double cg_tol = 1e-10;
    int cg_max_iter = 20000;
};

struct LevelDiagnostics {
    double min_c = 0.0;         // min over elements of the reaction coefficient used
    double discrete_mass = 0.0; // 1^T M(t) u(t)
    int cg_iterations = 0;
};

struct SolutionTrajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> values; // nodal values per level
    std::vector<LevelDiagnostics> diagnostics;
    CoefficientMode mode = CoefficientMode::pullback;
    int stiffness_assemblies = 0;

    int num_levels() const { return static_cast<int>(times.size()); }
    /// Nodal values at time t, interpolated linearly between stored levels.
    std::vector<double> values_at(double t) const;
};

/// One theta-step from the nodal values at time t to time t + tau.
std::vector<double> step_theta(const EvolutionProblem& problem, const std::vector<double>& state,
                               double t, double tau, double theta,
                               LevelDiagnostics* new_level_diag = nullptr);

/// March from u0 to t_final, storing every level. tau is adjusted on the last
/// step when t_final is not an integer multiple.
SolutionTrajectory solve_evolution(const EvolutionProblem& problem);

struct PushforwardSnapshot {
    std::vector<Vec3> positions;  // moved vertex positions at t
    std::vector<double> values;   // transported nodal values (identical to the fixed-mesh values)
};

/// Pair the moved vertex positions with the (time-interpolated) nodal values;
/// the piecewise-linear interpolant of these pairs is the transported solution
/// on the moved mesh.
PushforwardSnapshot pushforward_snapshot(const SolutionTrajectory& traj, const FlowMap& flow,
                                         const SurfaceMesh& mesh, double t);

/// Evaluate the transported solution at an arbitrary point p near the moved
/// surface: map p back through the flow inverse, locate the containing element
/// of the initial mesh by projected barycentric search, and interpolate.
double evaluate_pushforward(const SolutionTrajectory& traj, const FlowMap& flow,
                            const SurfaceMesh& mesh, const Vec3& p, double t);

} // namespace surfpde
