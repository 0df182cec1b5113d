#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "surfpde/geometry.hpp"
#include "surfpde/mesh.hpp"

namespace testutil {

// --- independent quadrature oracle over the unit sphere ---------------------
// Gauss-Legendre in cos(phi) x trapezoid in theta; spectrally accurate for the
// polynomial integrands the tests use. Deliberately shares no code with the
// mesh-based norms it checks.

struct GaussLegendre {
    std::vector<double> nodes, weights;
};

inline GaussLegendre gauss_legendre(int n) {
    GaussLegendre gl;
    gl.nodes.resize(n);
    gl.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            // Legendre P_n(x) and its derivative by recurrence
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            const double dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        const double dp = n * (x * p1 - p0) / (x * x - 1.0);
        gl.nodes[i] = x;
        gl.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return gl;
}

/// integral of f over the unit sphere
inline double sphere_integral(const std::function<double(const surfpde::Vec3&)>& f, int n_mu = 24,
                              int n_theta = 48) {
    const GaussLegendre gl = gauss_legendre(n_mu);
    double total = 0.0;
    for (int i = 0; i < n_mu; ++i) {
        const double mu = gl.nodes[i]; // cos(phi)
        const double s = std::sqrt(1.0 - mu * mu);
        double ring = 0.0;
        for (int j = 0; j < n_theta; ++j) {
            const double theta = 2.0 * M_PI * j / n_theta;
            ring += f({s * std::cos(theta), s * std::sin(theta), mu});
        }
        total += gl.weights[i] * ring * (2.0 * M_PI / n_theta);
    }
    return total;
}

/// integral of f over the unit circle (arclength)
inline double circle_integral(const std::function<double(const surfpde::Vec3&)>& f,
                              int n_theta = 4096) {
    double total = 0.0;
    for (int j = 0; j < n_theta; ++j) {
        const double theta = 2.0 * M_PI * j / n_theta;
        total += f({std::cos(theta), std::sin(theta), 0.0});
    }
    return total * (2.0 * M_PI / n_theta);
}

// --- misc -------------------------------------------------------------------

inline std::vector<double> sample_vertices(const surfpde::SurfaceMesh& mesh,
                                           const std::function<double(const surfpde::Vec3&)>& f) {
    std::vector<double> out(mesh.num_vertices());
    for (int v = 0; v < mesh.num_vertices(); ++v) out[v] = f(mesh.vertices[v]);
    return out;
}

inline std::vector<double> random_vector(int n, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> out(n);
    for (double& v : out) v = dist(rng);
    return out;
}

} // namespace testutil
