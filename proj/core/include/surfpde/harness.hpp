#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "surfpde/config.hpp"
#include "surfpde/evolution.hpp"
#include "surfpde/perturbation.hpp"

namespace surfpde {

/// Convergence table against a built-in exact solution. EOC entries are
/// log2 of the error ratio between successive levels (absent on the first row).
struct EocTable {
    struct Row {
        int level = 0;
        double h = 0.0;
        double l2_err = 0.0;
        double l2_eoc = 0.0; // valid when has_eoc
        double h1_err = 0.0;
        double h1_eoc = 0.0;
        bool has_eoc = false;
        // filled for non-identity flows: the same nodal error measured in the
        // moved-mesh L2 norm (transformation-rule check)
        double l2_err_moved = 0.0;
        bool has_moved = false;
    };
    std::vector<Row> rows;
};

/// Exact solutions the convergence experiment knows: u0 "cos_theta" on the
/// circle decays like exp(-t), u0 "harmonic_x1x2" on the sphere like exp(-6t).
/// The flow must be the identity or the isometric rotation field.
EocTable run_convergence(const RunConfig& config, std::ostream& log);

/// Solve once, report per-level diagnostics, optionally write the VTK series.
/// Returns the trajectory (also used by the CLI to write outputs).
SolutionTrajectory run_solve(const RunConfig& config, std::ostream& log);

/// Integrate the built-in field at several step sizes against its closed-form
/// flow; report max vertex position error, pairwise order, inverse round-trip
/// error, and a fitted order per scheme.
struct FlowTestReport {
    struct Row {
        std::string scheme;
        double tau_ode = 0.0;
        double max_err = 0.0;
        double eoc = 0.0;
        bool has_eoc = false;
        double roundtrip_err = 0.0;
    };
    std::vector<Row> rows;
    double fitted_order_euler = 0.0;
    double fitted_order_rk4 = 0.0;
    bool exact = false; // all errors zero (identity field)
};

FlowTestReport run_flow_test(const RunConfig& config, std::ostream& log);

/// Perturbed-coefficient study driven by a RunConfig.
PerturbationStudy run_perturb(const RunConfig& config, std::ostream& log);

// CSV emission (formats documented in the README)
void write_eoc_csv(const EocTable& table, const std::string& path);
void write_moved_l2_csv(const EocTable& table, const std::string& path);
void write_flow_test_csv(const FlowTestReport& report, const std::string& path);
void write_perturbation_csv(const PerturbationStudy& study, const std::string& path);
void write_diagnostics_csv(const SolutionTrajectory& traj, const std::string& path);

} // namespace surfpde
