#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "surfpde/geometry.hpp"
#include "surfpde/mesh.hpp"

namespace surfpde {

enum class OdeScheme { euler, rk4 };

/// Ambient velocity field V(y, t).
using VelocityField = std::function<Vec3(const Vec3&, double)>;

/// Evolution of the initial surface over [0, t_final]: the family of maps
/// Phi(., t) with Phi(x, 0) = x.
///
/// Two kinds. An analytic flow is given by callbacks for Phi, its time
/// derivative, and optionally its inverse. An integrated flow tracks each mesh
/// vertex through the ODE dy/dt = V(y, t) with a one-step scheme; positions
/// between stored ODE steps are interpolated linearly in time, and the inverse
/// integrates the same ODE backward from (p, t) to time 0.
class FlowMap {
public:
    enum class Kind { analytic, integrated };
    using MapFn = std::function<Vec3(const Vec3&, double)>;

    static FlowMap analytic(std::shared_ptr<const SurfaceMesh> mesh, MapFn phi, MapFn phi_dt,
                            MapFn inverse, double t_final);
    static FlowMap integrate(std::shared_ptr<const SurfaceMesh> mesh, VelocityField field,
                             double t_final, double ode_step, OdeScheme scheme);

    Kind kind() const { return kind_; }
    double t_final() const { return t_final_; }
    OdeScheme scheme() const { return scheme_; }
    double ode_step() const { return ode_step_; }
    const SurfaceMesh& mesh() const { return *mesh_; }
    std::shared_ptr<const SurfaceMesh> mesh_ptr() const { return mesh_; }
    bool has_inverse() const;

    /// Phi(x, t) for an arbitrary point (integrated kind: fresh forward integration).
    Vec3 position(const Vec3& x, double t) const;
    /// Velocity of the material point labeled x: dPhi/dt(x, t).
    Vec3 velocity(const Vec3& x, double t) const;
    /// Phi(., t)^{-1}(p). Analytic kind requires the inverse callback.
    Vec3 inverse(const Vec3& p, double t) const;

    Vec3 vertex_position(int v, double t) const;
    Vec3 vertex_velocity(int v, double t) const;
    /// Positions of all mesh vertices at time t.
    std::vector<Vec3> moved_positions(double t) const;

private:
    FlowMap() = default;
    void check_time(double t) const;
    Vec3 integrate_from(const Vec3& y0, double t0, double t1) const; // either direction

    Kind kind_ = Kind::analytic;
    std::shared_ptr<const SurfaceMesh> mesh_;
    double t_final_ = 0.0;
    MapFn phi_, phi_dt_, phi_inverse_;
    VelocityField field_;
    OdeScheme scheme_ = OdeScheme::rk4;
    double ode_step_ = 0.0;
    std::vector<double> time_grid_;
    std::vector<std::vector<Vec3>> trajectory_; // [grid step][vertex]
};

/// Integrate the flow of a vector field for every mesh vertex.
FlowMap integrate_flow(std::shared_ptr<const SurfaceMesh> mesh, VelocityField field,
                       double t_final, double ode_step, OdeScheme scheme);

// Built-in analytic flows.
FlowMap identity_flow(std::shared_ptr<const SurfaceMesh> mesh, double t_final);
/// Phi(x, t) = (1 + alpha t) x.
FlowMap uniform_scale_flow(std::shared_ptr<const SurfaceMesh> mesh, double alpha, double t_final);
/// Phi(x, t) = x + t d.
FlowMap translate_flow(std::shared_ptr<const SurfaceMesh> mesh, const Vec3& direction,
                       double t_final);
/// Phi(x, t) = ((1 + alpha sin(2 pi t)) x_1, x_2, x_3).
FlowMap ellipsoid_axis_flow(std::shared_ptr<const SurfaceMesh> mesh, double alpha, double t_final);

// Built-in vector fields.
VelocityField zero_field();
VelocityField radial_field();   // V(y) = y
VelocityField rotation_field(); // V(y) = (-y2, y1, 0)

/// Closed-form flow of a built-in field ("zero", "radial", "rotation"); the
/// oracle the integrated flows are measured against.
FlowMap exact_field_flow(const std::string& field_name, std::shared_ptr<const SurfaceMesh> mesh,
                         double t_final);

} // namespace surfpde
