#include "surfpde/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "surfpde/errors.hpp"
#include "surfpde/sparse.hpp"

namespace surfpde {

namespace {

struct LevelOps {
    double t = 0.0;
    SparseSymMatrix mass;      // M(t)
    SparseSymMatrix stiffness; // K(t)
    SparseSymMatrix reaction;  // R(t), net reaction (see EvolutionProblem docs)
    std::vector<double> load;  // assembled source at t
    double min_c = 0.0;
};

struct Workspace {
    const EvolutionProblem& problem;
    const SurfaceMesh& mesh;
    const FlowMap* flow; // may be null (identity)
    std::shared_ptr<const SparsityPattern> pattern;
    FlowMap identity;    // used when problem.flow is null

    // literal mode with time-independent diffusion reuses the first stiffness
    std::optional<SparseSymMatrix> frozen_stiffness;
    int stiffness_assemblies = 0;

    explicit Workspace(const EvolutionProblem& p)
        : problem(p),
          mesh(*p.mesh),
          flow(p.flow.get()),
          pattern(std::make_shared<SparsityPattern>(SparsityPattern::from_mesh(*p.mesh))),
          identity(identity_flow(p.mesh, p.t_final)) {
        if (!flow) flow = &identity;
    }

    LevelOps build(double t) {
        LevelOps ops;
        ops.t = t;
        const auto weights = mass_weights(*flow, mesh, t, problem.mode);
        const auto c_flow = compute_c(*flow, mesh, t, problem.mode);
        std::vector<double> c_used = problem.c_override ? problem.c_override(t) : c_flow;
        if (static_cast<int>(c_used.size()) != mesh.num_elements())
            throw ValidationError("evolution: c_override returned wrong element count");
        ops.min_c = c_used.empty() ? 0.0 : *std::min_element(c_used.begin(), c_used.end());

        ops.mass = assemble_mass(mesh, weights, pattern);

        if (problem.mode == CoefficientMode::literal && problem.diffusion.time_independent &&
            frozen_stiffness) {
            ops.stiffness = *frozen_stiffness;
        } else {
            const auto tensors = effective_diffusion(problem.diffusion, *flow, mesh, t, problem.mode);
            ops.stiffness = assemble_stiffness(mesh, tensors, weights, pattern);
            ++stiffness_assemblies;
            if (problem.mode == CoefficientMode::literal && problem.diffusion.time_independent)
                frozen_stiffness = ops.stiffness;
        }

        // net reaction: literal keeps c explicitly; pullback absorbs the flow's
        // c into the moving mass and keeps only an override residual
        std::vector<double> r_coef(mesh.num_elements(), 0.0);
        if (problem.mode == CoefficientMode::literal) {
            r_coef = c_used;
        } else {
            for (size_t e = 0; e < r_coef.size(); ++e) r_coef[e] = c_used[e] - c_flow[e];
        }
        ops.reaction = assemble_weighted_mass(mesh, r_coef, weights, pattern);

        ops.load.assign(mesh.num_vertices(), 0.0);
        if (problem.source) {
            const auto f = problem.source(t);
            if (static_cast<int>(f.size()) != mesh.num_vertices())
                throw ValidationError("evolution: source returned wrong vertex count");
            ops.load = ops.mass.apply(f);
        }
        if (problem.weak_load) {
            const auto extra = problem.weak_load(t);
            if (static_cast<int>(extra.size()) != mesh.num_vertices())
                throw ValidationError("evolution: weak_load returned wrong vertex count");
            for (int i = 0; i < mesh.num_vertices(); ++i) ops.load[i] += extra[i];
        }
        return ops;
    }

    std::vector<double> advance(const LevelOps& old_ops, const LevelOps& new_ops,
                                const std::vector<double>& u, double tau, double theta,
                                int* cg_iterations) const {
        const int n = mesh.num_vertices();
        // rhs = [M(t)/tau - (1-theta)(K + R)(t)] u + theta L+ + (1-theta) L
        std::vector<double> rhs = old_ops.mass.apply(u);
        for (double& v : rhs) v /= tau;
        if (theta < 1.0) {
            const auto ku = old_ops.stiffness.apply(u);
            const auto ru = old_ops.reaction.apply(u);
            for (int i = 0; i < n; ++i) rhs[i] -= (1.0 - theta) * (ku[i] + ru[i]);
        }
        for (int i = 0; i < n; ++i)
            rhs[i] += theta * new_ops.load[i] + (1.0 - theta) * old_ops.load[i];

        // A = M(t+tau)/tau + theta (K + R)(t+tau)
        SparseSymMatrix A = new_ops.mass;
        A.scale(1.0 / tau);
        A.axpy(theta, new_ops.stiffness);
        A.axpy(theta, new_ops.reaction);
        apply_dirichlet(A, rhs, mesh.boundary_vertices);

        try {
            CgResult res = cg_solve(A, rhs, problem.cg_tol, problem.cg_max_iter, u);
            if (cg_iterations) *cg_iterations = res.iterations;
            return std::move(res.x);
        } catch (const NumericalError& err) {
            throw NumericalError(std::string(err.what()) + " (time level t=" +
                                 std::to_string(new_ops.t) + ")");
        }
    }
};

std::vector<double> time_levels(double t_final, double tau) {
    std::vector<double> times{0.0};
    if (t_final <= 0.0) return times;
    const long full = std::lround(std::floor(t_final / tau + 1e-9));
    for (long k = 1; k <= full; ++k) times.push_back(double(k) * tau);
    if (t_final - times.back() > 1e-9 * std::max(1.0, t_final)) times.push_back(t_final);
    times.back() = t_final;
    return times;
}

void validate_problem(const EvolutionProblem& p) {
    if (!p.mesh) throw ValidationError("evolution: mesh required");
    if (!(p.tau > 0.0)) throw ValidationError("evolution: tau must be positive");
    if (!(p.t_final >= 0.0)) throw ValidationError("evolution: t_final must be >= 0");
    if (!(p.theta >= 0.5 && p.theta <= 1.0))
        throw ValidationError("evolution: theta must lie in [1/2, 1]");
    if (static_cast<int>(p.initial.size()) != p.mesh->num_vertices())
        throw ValidationError("evolution: initial data size does not match vertex count");
    if (p.flow && p.flow->t_final() < p.t_final - 1e-12)
        throw ValidationError("evolution: flow does not cover [0, t_final]");
}

double dot_all_ones(const SparseSymMatrix& M, const std::vector<double>& u) {
    const auto mu = M.apply(u);
    double s = 0.0;
    for (double v : mu) s += v;
    return s;
}

} // namespace

std::vector<double> SolutionTrajectory::values_at(double t) const {
    if (times.empty()) throw ValidationError("trajectory: empty");
    const double slack = 1e-9 * std::max(1.0, times.back());
    if (t < times.front() - slack || t > times.back() + slack)
        throw ValidationError("trajectory: t=" + std::to_string(t) + " outside stored range");
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    size_t hi = std::min(static_cast<size_t>(it - times.begin()), times.size() - 1);
    if (hi == 0) hi = std::min<size_t>(1, times.size() - 1);
    if (hi == 0) return values[0];
    const size_t lo = hi - 1;
    const double w = std::clamp((t - times[lo]) / (times[hi] - times[lo]), 0.0, 1.0);
    std::vector<double> out(values[lo].size());
    for (size_t i = 0; i < out.size(); ++i)
        out[i] = (1.0 - w) * values[lo][i] + w * values[hi][i];
    return out;
}

std::vector<double> step_theta(const EvolutionProblem& problem, const std::vector<double>& state,
                               double t, double tau, double theta,
                               LevelDiagnostics* new_level_diag) {
    validate_problem(problem);
    Workspace ws(problem);
    const LevelOps old_ops = ws.build(t);
    const LevelOps new_ops = ws.build(t + tau);
    int iters = 0;
    auto next = ws.advance(old_ops, new_ops, state, tau, theta, &iters);
    if (new_level_diag) {
        new_level_diag->min_c = new_ops.min_c;
        new_level_diag->discrete_mass = dot_all_ones(new_ops.mass, next);
        new_level_diag->cg_iterations = iters;
    }
    return next;
}

SolutionTrajectory solve_evolution(const EvolutionProblem& problem) {
    validate_problem(problem);
    Workspace ws(problem);

    SolutionTrajectory traj;
    traj.mode = problem.mode;
    traj.times = time_levels(problem.t_final, problem.tau);

    std::vector<double> u = problem.initial;
    for (int b : problem.mesh->boundary_vertices) u[b] = 0.0;

    LevelOps ops = ws.build(0.0);
    traj.values.push_back(u);
    traj.diagnostics.push_back({ops.min_c, dot_all_ones(ops.mass, u), 0});

    for (size_t level = 1; level < traj.times.size(); ++level) {
        const double tau = traj.times[level] - traj.times[level - 1];
        LevelOps next_ops = ws.build(traj.times[level]);
        int iters = 0;
        u = ws.advance(ops, next_ops, u, tau, problem.theta, &iters);
        traj.values.push_back(u);
        traj.diagnostics.push_back({next_ops.min_c, dot_all_ones(next_ops.mass, u), iters});
        ops = std::move(next_ops);
    }
    traj.stiffness_assemblies = ws.stiffness_assemblies;
    return traj;
}

PushforwardSnapshot pushforward_snapshot(const SolutionTrajectory& traj, const FlowMap& flow,
                                         const SurfaceMesh& mesh, double t) {
    PushforwardSnapshot snap;
    snap.positions = flow.moved_positions(t);
    snap.values = traj.values_at(t);
    if (static_cast<int>(snap.values.size()) != mesh.num_vertices())
        throw ValidationError("pushforward: trajectory does not match mesh");
    return snap;
}

namespace {

struct Located {
    int element = -1;
    double bary[3] = {0, 0, 0};
    double distance = std::numeric_limits<double>::infinity();
};

// barycentric coordinates of the point projected onto the element's plane/line
// (gcc 11 reports a spurious maybe-uninitialized for the returned aggregate)
#pragma GCC diagnostic push
#pragma GCC diagnostic ignored "-Wmaybe-uninitialized"
Located locate_point(const SurfaceMesh& mesh, const Vec3& x) {
    Located best;
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const ElementGeometry geom = element_geometry(mesh, e);
        const auto coords = mesh.element_coords(e);
        const Vec3 d = x - coords[0];
        double alpha[2] = {0.0, 0.0};
        for (int i = 0; i < geom.dim; ++i)
            for (int j = 0; j < geom.dim; ++j)
                alpha[i] += geom.inverse_metric[i][j] * dot(geom.edge_vectors[j], d);
        Vec3 in_plane{};
        for (int i = 0; i < geom.dim; ++i) in_plane += alpha[i] * geom.edge_vectors[i];
        const double off_plane = norm(d - in_plane);

        double bary[3] = {1.0, 0.0, 0.0};
        for (int i = 0; i < geom.dim; ++i) {
            bary[i + 1] = alpha[i];
            bary[0] -= alpha[i];
        }
        // distance to the element: off-plane part plus barycentric violation
        double violation = 0.0;
        for (int k = 0; k <= geom.dim; ++k) violation = std::max(violation, -bary[k]);
        const double dist = off_plane + violation * norm(geom.edge_vectors[0]);
        if (dist < best.distance) {
            best.element = e;
            best.distance = dist;
            for (int k = 0; k < 3; ++k) best.bary[k] = bary[k];
        }
    }
    return best;
}
#pragma GCC diagnostic pop

} // namespace

double evaluate_pushforward(const SolutionTrajectory& traj, const FlowMap& flow,
                            const SurfaceMesh& mesh, const Vec3& p, double t) {
    const Vec3 x = flow.inverse(p, t);
    if (!is_finite(x)) throw NumericalError("pushforward: flow inverse produced non-finite point");
    const Located loc = locate_point(mesh, x);
    const double tol = 1e-6 * std::max(mesh_size(mesh), 1e-12);
    if (loc.element < 0 || loc.distance > tol)
        throw ValidationError("pushforward: point not located on any element within tolerance");
    const auto values = traj.values_at(t);
    double result = 0.0;
    for (int k = 0; k <= mesh.dim_surface; ++k) {
        double b = std::clamp(loc.bary[k], 0.0, 1.0);
        result += b * values[mesh.elements[loc.element][k]];
    }
    return result;
}

} // namespace surfpde
