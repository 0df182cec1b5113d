#pragma once

#include <span>
#include <string>
#include <vector>

#include "surfpde/evolution.hpp"

namespace surfpde {

/// Space-time error norm sqrt( int_0^T ||a - b||_{H1}^2 dt ) between two
/// trajectories on the same mesh and time levels, by the composite trapezoidal
/// rule over [ l2^2 + h1_seminorm^2 ] of the nodal difference.
double spacetime_h1_norm(const SolutionTrajectory& traj_a, const SolutionTrajectory& traj_b,
                         const SurfaceMesh& mesh);

/// Coefficient-perturbation study: solve the base problem with the reaction
/// coefficient c and with a perturbed coefficient whose error level is h, for
/// a decreasing sequence of h, and fit the slope of log E(h) against log h.
struct PerturbationConfig {
    EvolutionProblem base;              // flow/mode/diffusion/u0/t_final/tau/theta
    std::vector<double> h_levels{0.1, 0.05, 0.025};
    std::vector<double> profile;        // per-element g with |g| <= 1

    enum class Source {
        direct,     // c_h = c + h * g, injected directly
        euler_flow, // c_h from a forward-Euler integrated flow with step h
    };
    Source source = Source::direct;
    /// euler_flow only: name of the built-in field ("radial", "rotation",
    /// "zero"); the base run uses its closed-form flow.
    std::string field_name = "radial";
};

struct PerturbationStudy {
    std::vector<double> h_levels;  // strictly decreasing
    std::vector<double> errors;    // E(h) >= 0
    std::vector<double> eoc;       // pairwise log2(E_k / E_{k+1}), size levels-1
    double slope = 0.0;            // least-squares fit of log E vs log h
    bool exact = false;            // every E(h) == 0; slope is meaningless then
};

PerturbationStudy run_perturbation_study(const PerturbationConfig& config);

/// Alternating +1/-1 per-element profile (the default perturbation shape).
std::vector<double> alternating_profile(const SurfaceMesh& mesh);

} // namespace surfpde
