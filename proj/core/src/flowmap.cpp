#include "surfpde/flowmap.hpp"

#include <algorithm>
#include <cmath>

#include "surfpde/errors.hpp"

namespace surfpde {

namespace {

Vec3 ode_step_once(const VelocityField& field, const Vec3& y, double t, double h, OdeScheme scheme) {
    if (scheme == OdeScheme::euler) return y + h * field(y, t);
    const Vec3 k1 = field(y, t);
    const Vec3 k2 = field(y + (0.5 * h) * k1, t + 0.5 * h);
    const Vec3 k3 = field(y + (0.5 * h) * k2, t + 0.5 * h);
    const Vec3 k4 = field(y + h * k3, t + h);
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

} // namespace

FlowMap FlowMap::analytic(std::shared_ptr<const SurfaceMesh> mesh, MapFn phi, MapFn phi_dt,
                          MapFn inverse, double t_final) {
    if (!mesh) throw ValidationError("flow: mesh required");
    if (!phi || !phi_dt) throw ValidationError("flow: analytic kind needs phi and phi_dt");
    if (!(t_final >= 0.0)) throw ValidationError("flow: t_final must be >= 0");
    FlowMap f;
    f.kind_ = Kind::analytic;
    f.mesh_ = std::move(mesh);
    f.t_final_ = t_final;
    f.phi_ = std::move(phi);
    f.phi_dt_ = std::move(phi_dt);
    f.phi_inverse_ = std::move(inverse);
    return f;
}

FlowMap FlowMap::integrate(std::shared_ptr<const SurfaceMesh> mesh, VelocityField field,
                           double t_final, double ode_step, OdeScheme scheme) {
    if (!mesh) throw ValidationError("flow: mesh required");
    if (!field) throw ValidationError("flow: velocity field required");
    if (!(t_final >= 0.0)) throw ValidationError("flow: t_final must be >= 0");
    if (!(ode_step > 0.0)) throw ValidationError("flow: ode_step must be positive");

    FlowMap f;
    f.kind_ = Kind::integrated;
    f.mesh_ = std::move(mesh);
    f.t_final_ = t_final;
    f.field_ = std::move(field);
    f.scheme_ = scheme;
    f.ode_step_ = ode_step;

    f.time_grid_.push_back(0.0);
    while (f.time_grid_.back() < t_final - 1e-12 * std::max(1.0, t_final)) {
        const double next = std::min(f.time_grid_.back() + ode_step, t_final);
        f.time_grid_.push_back(next);
    }

    const int nv = f.mesh_->num_vertices();
    f.trajectory_.reserve(f.time_grid_.size());
    f.trajectory_.push_back(f.mesh_->vertices);
    for (size_t s = 1; s < f.time_grid_.size(); ++s) {
        const double t0 = f.time_grid_[s - 1];
        const double h = f.time_grid_[s] - t0;
        std::vector<Vec3> level(nv);
        for (int v = 0; v < nv; ++v) {
            level[v] = ode_step_once(f.field_, f.trajectory_[s - 1][v], t0, h, f.scheme_);
            if (!is_finite(level[v]))
                throw NumericalError("flow: non-finite position for vertex " + std::to_string(v) +
                                     " at t=" + std::to_string(f.time_grid_[s]));
        }
        f.trajectory_.push_back(std::move(level));
    }
    return f;
}

bool FlowMap::has_inverse() const {
    return kind_ == Kind::integrated || static_cast<bool>(phi_inverse_);
}

void FlowMap::check_time(double t) const {
    const double slack = 1e-12 * std::max(1.0, t_final_);
    if (t < -slack || t > t_final_ + slack)
        throw ValidationError("flow: t=" + std::to_string(t) + " outside [0, " +
                              std::to_string(t_final_) + "]");
}

Vec3 FlowMap::integrate_from(const Vec3& y0, double t0, double t1) const {
    Vec3 y = y0;
    double t = t0;
    const double dir = (t1 >= t0) ? 1.0 : -1.0;
    const double span = std::abs(t1 - t0);
    const double tol = 1e-14 * std::max(1.0, t_final_);
    double covered = 0.0;
    while (span - covered > tol) {
        const double h = dir * std::min(ode_step_, span - covered);
        y = ode_step_once(field_, y, t, h, scheme_);
        if (!is_finite(y))
            throw NumericalError("flow: non-finite position while integrating from t=" +
                                 std::to_string(t0) + " to t=" + std::to_string(t1));
        t += h;
        covered += std::abs(h);
    }
    return y;
}

Vec3 FlowMap::position(const Vec3& x, double t) const {
    check_time(t);
    if (kind_ == Kind::analytic) return phi_(x, t);
    return integrate_from(x, 0.0, t);
}

Vec3 FlowMap::velocity(const Vec3& x, double t) const {
    check_time(t);
    if (kind_ == Kind::analytic) return phi_dt_(x, t);
    return field_(position(x, t), t);
}

Vec3 FlowMap::inverse(const Vec3& p, double t) const {
    check_time(t);
    if (kind_ == Kind::analytic) {
        if (!phi_inverse_) throw ValidationError("flow: analytic flow has no inverse callback");
        return phi_inverse_(p, t);
    }
    return integrate_from(p, t, 0.0);
}

Vec3 FlowMap::vertex_position(int v, double t) const {
    check_time(t);
    if (kind_ == Kind::analytic) return phi_(mesh_->vertices[v], t);
    // locate the bracketing ODE steps, interpolate linearly in time
    if (time_grid_.size() == 1) return trajectory_[0][v];
    const auto it = std::upper_bound(time_grid_.begin(), time_grid_.end(), t);
    size_t hi = std::min(static_cast<size_t>(it - time_grid_.begin()), time_grid_.size() - 1);
    if (hi == 0) hi = 1;
    const size_t lo = hi - 1;
    const double w = std::clamp((t - time_grid_[lo]) / (time_grid_[hi] - time_grid_[lo]), 0.0, 1.0);
    return (1.0 - w) * trajectory_[lo][v] + w * trajectory_[hi][v];
}

Vec3 FlowMap::vertex_velocity(int v, double t) const {
    check_time(t);
    if (kind_ == Kind::analytic) return phi_dt_(mesh_->vertices[v], t);
    return field_(vertex_position(v, t), t);
}

std::vector<Vec3> FlowMap::moved_positions(double t) const {
    check_time(t);
    std::vector<Vec3> pos(mesh_->num_vertices());
    for (int v = 0; v < mesh_->num_vertices(); ++v) pos[v] = vertex_position(v, t);
    return pos;
}

FlowMap integrate_flow(std::shared_ptr<const SurfaceMesh> mesh, VelocityField field, double t_final,
                       double ode_step, OdeScheme scheme) {
    return FlowMap::integrate(std::move(mesh), std::move(field), t_final, ode_step, scheme);
}

FlowMap identity_flow(std::shared_ptr<const SurfaceMesh> mesh, double t_final) {
    return FlowMap::analytic(
        std::move(mesh), [](const Vec3& x, double) { return x; },
        [](const Vec3&, double) { return Vec3{}; }, [](const Vec3& p, double) { return p; },
        t_final);
}

FlowMap uniform_scale_flow(std::shared_ptr<const SurfaceMesh> mesh, double alpha, double t_final) {
    return FlowMap::analytic(
        std::move(mesh), [alpha](const Vec3& x, double t) { return (1.0 + alpha * t) * x; },
        [alpha](const Vec3& x, double) { return alpha * x; },
        [alpha](const Vec3& p, double t) { return p / (1.0 + alpha * t); }, t_final);
}

FlowMap translate_flow(std::shared_ptr<const SurfaceMesh> mesh, const Vec3& direction,
                       double t_final) {
    return FlowMap::analytic(
        std::move(mesh), [direction](const Vec3& x, double t) { return x + t * direction; },
        [direction](const Vec3&, double) { return direction; },
        [direction](const Vec3& p, double t) { return p - t * direction; }, t_final);
}

FlowMap ellipsoid_axis_flow(std::shared_ptr<const SurfaceMesh> mesh, double alpha, double t_final) {
    auto a = [alpha](double t) { return 1.0 + alpha * std::sin(2.0 * M_PI * t); };
    auto a_dt = [alpha](double t) { return 2.0 * M_PI * alpha * std::cos(2.0 * M_PI * t); };
    return FlowMap::analytic(
        std::move(mesh), [a](const Vec3& x, double t) { return Vec3{a(t) * x.x, x.y, x.z}; },
        [a_dt](const Vec3& x, double t) { return Vec3{a_dt(t) * x.x, 0.0, 0.0}; },
        [a](const Vec3& p, double t) { return Vec3{p.x / a(t), p.y, p.z}; }, t_final);
}

VelocityField zero_field() {
    return [](const Vec3&, double) { return Vec3{}; };
}

VelocityField radial_field() {
    return [](const Vec3& y, double) { return y; };
}

VelocityField rotation_field() {
    return [](const Vec3& y, double) { return Vec3{-y.y, y.x, 0.0}; };
}

FlowMap exact_field_flow(const std::string& field_name, std::shared_ptr<const SurfaceMesh> mesh,
                         double t_final) {
    if (field_name == "zero") return identity_flow(std::move(mesh), t_final);
    if (field_name == "radial") {
        return FlowMap::analytic(
            std::move(mesh), [](const Vec3& x, double t) { return std::exp(t) * x; },
            [](const Vec3& x, double t) { return std::exp(t) * x; },
            [](const Vec3& p, double t) { return std::exp(-t) * p; }, t_final);
    }
    if (field_name == "rotation") {
        auto rot = [](const Vec3& x, double t) {
            const double c = std::cos(t), s = std::sin(t);
            return Vec3{c * x.x - s * x.y, s * x.x + c * x.y, x.z};
        };
        return FlowMap::analytic(
            std::move(mesh), rot,
            [](const Vec3& x, double t) {
                const double c = std::cos(t), s = std::sin(t);
                return Vec3{-s * x.x - c * x.y, c * x.x - s * x.y, 0.0};
            },
            [rot](const Vec3& p, double t) { return rot(p, -t); }, t_final);
    }
    throw ValidationError("flow: no closed form for field '" + field_name + "'");
}

} // namespace surfpde
