#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "surfpde/flowmap.hpp"
#include "surfpde/geometry.hpp"
#include "surfpde/mesh.hpp"
#include "surfpde/tangential.hpp"

namespace surfpde {

/// How the time-dependent coefficients of the fixed-surface equation are built.
///
/// literal: the reaction coefficient is the tangential divergence of the
/// material velocity taken over the FIXED initial geometry, the diffusion
/// tensor is sandwiched with fixed edge vectors, and the mass weight is 1.
///
/// pullback: all quantities come from the MOVED element geometry at time t;
/// the mass weight is the ratio of moved to initial element measure. This is
/// the exact transformation of the moving-surface equation and is the default.
enum class CoefficientMode { literal, pullback };

const char* to_string(CoefficientMode mode);

/// Ambient diffusion tensor D0 evaluated at a surface point. The callback
/// receives the element midpoint and unit normal of the geometry implied by
/// the coefficient mode (fixed element for literal, moved element for
/// pullback). D0 must be symmetric and vanish on the normal direction; both
/// are checked, never silently repaired.
struct DiffusionSpec {
    std::function<Mat3(const Vec3& point, const Vec3& normal, double t)> tensor;
    bool time_independent = true;
    std::string name = "custom";
};

DiffusionSpec tangential_identity();
DiffusionSpec scaled_tangential(double kappa);
/// P diag(d) P with P the tangential projector; symmetric, PSD for d >= 0.
DiffusionSpec anisotropic_diag(double d0, double d1, double d2);
DiffusionSpec zero_diffusion();

/// Per-element reaction coefficient c at time t: tangential divergence of the
/// P1-interpolated vertex velocities over the mode's element geometry.
std::vector<double> compute_c(const FlowMap& flow, const SurfaceMesh& mesh, double t,
                              CoefficientMode mode);

/// Per-element effective chart diffusion tensors at time t.
std::vector<ChartTensor> effective_diffusion(const DiffusionSpec& d0, const FlowMap& flow,
                                             const SurfaceMesh& mesh, double t,
                                             CoefficientMode mode);

/// Per-element mass weights at time t: all ones in literal mode, ratio of
/// moved to initial element measure in pullback mode. Throws NumericalError
/// "flow degenerates element ..." when the ratio collapses below 1e-12.
std::vector<double> mass_weights(const FlowMap& flow, const SurfaceMesh& mesh, double t,
                                 CoefficientMode mode);

/// c + h * g elementwise; the profile g must satisfy |g| <= 1.
std::vector<double> perturb_c(std::span<const double> c, double h, std::span<const double> g);

/// Coefficient table over a sequence of time levels.
struct CoefficientSet {
    CoefficientMode mode = CoefficientMode::pullback;
    std::vector<double> time_levels;
    std::vector<std::vector<double>> c_values;          // [level][element]
    std::vector<std::vector<ChartTensor>> diffusion_local; // [level][element]
    std::vector<std::vector<double>> mass_weight;       // [level][element]
};

CoefficientSet build_coefficient_set(const FlowMap& flow, const SurfaceMesh& mesh,
                                     const DiffusionSpec& d0, std::span<const double> times,
                                     CoefficientMode mode);

} // namespace surfpde
