// Command-line front end: solve | converge | perturb | flow-test, driven by a
// flat key=value config file with --key value overrides. Exit codes: 0 on
// success, 1 on validation/usage errors, 2 on numerical failures.

#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "surfpde/errors.hpp"
#include "surfpde/harness.hpp"
#include "surfpde/io.hpp"

namespace {

using Overrides = std::vector<std::pair<std::string, std::string>>;

// leftover "--key value" tokens become config overrides
Overrides parse_overrides(const std::vector<std::string>& extras) {
    Overrides overrides;
    for (size_t i = 0; i < extras.size(); ++i) {
        const std::string& tok = extras[i];
        if (tok.rfind("--", 0) != 0 || tok.size() <= 2)
            throw surfpde::ValidationError("cli: expected --key before '" + tok + "'");
        if (i + 1 >= extras.size())
            throw surfpde::ValidationError("cli: missing value for override '" + tok + "'");
        overrides.emplace_back(tok.substr(2), extras[++i]);
    }
    return overrides;
}

struct SubArgs {
    std::string config_path;
    std::string out_dir;
};

void add_subcommand(CLI::App& app, const std::string& name, const std::string& desc, SubArgs& args,
                    std::string& chosen) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("--config", args.config_path, "path to the key=value config file")->required();
    sub->add_option("--out", args.out_dir, "output directory (overrides the config)");
    sub->allow_extras();
    sub->callback([name, &chosen]() { chosen = name; });
}

int run(const std::string& experiment, CLI::App* sub, const SubArgs& args) {
    Overrides overrides = parse_overrides(sub->remaining());
    overrides.emplace_back("experiment", experiment);
    if (!args.out_dir.empty()) overrides.emplace_back("out", args.out_dir);

    const surfpde::RunConfig config = surfpde::parse_config_file(args.config_path, overrides);
    std::filesystem::create_directories(config.out);
    const std::string out = config.out;

    if (experiment == "solve") {
        const auto mesh = surfpde::build_mesh_from_config(config);
        const auto traj = surfpde::run_solve(config, std::cout);
        surfpde::write_diagnostics_csv(traj, out + "/diagnostics.csv");
        std::cout << "wrote " << out << "/diagnostics.csv\n";
        if (config.write_vtk) {
            const auto flow =
                surfpde::build_flow_from_config(config, mesh.mesh, config.t_final);
            surfpde::write_vtk_series(traj, *flow, *mesh.mesh, out, config.vtk_stride);
            std::cout << "wrote VTK series to " << out << "\n";
        }
    } else if (experiment == "converge") {
        const auto table = surfpde::run_convergence(config, std::cout);
        surfpde::write_eoc_csv(table, out + "/eoc.csv");
        std::cout << "wrote " << out << "/eoc.csv\n";
        if (!table.rows.empty() && table.rows.front().has_moved) {
            surfpde::write_moved_l2_csv(table, out + "/l2_moved.csv");
            std::cout << "wrote " << out << "/l2_moved.csv\n";
        }
    } else if (experiment == "perturb") {
        const auto study = surfpde::run_perturb(config, std::cout);
        surfpde::write_perturbation_csv(study, out + "/perturbation.csv");
        std::cout << "wrote " << out << "/perturbation.csv\n";
    } else { // flow-test
        const auto report = surfpde::run_flow_test(config, std::cout);
        surfpde::write_flow_test_csv(report, out + "/flow_test.csv");
        std::cout << "wrote " << out << "/flow_test.csv\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"advection-diffusion on an evolving surface, solved on a fixed mesh"};
    app.require_subcommand(1);

    SubArgs solve_args, converge_args, perturb_args, flowtest_args;
    std::string chosen;
    add_subcommand(app, "solve", "time-march one problem and write outputs", solve_args, chosen);
    add_subcommand(app, "converge", "refinement study against an exact solution", converge_args,
                   chosen);
    add_subcommand(app, "perturb", "perturbed-coefficient error study", perturb_args, chosen);
    add_subcommand(app, "flow-test", "flow integrator order study", flowtest_args, chosen);

    try {
        app.parse(argc, argv);
        if (chosen == "solve") return run("solve", app.get_subcommand("solve"), solve_args);
        if (chosen == "converge")
            return run("converge", app.get_subcommand("converge"), converge_args);
        if (chosen == "perturb") return run("perturb", app.get_subcommand("perturb"), perturb_args);
        return run("flow-test", app.get_subcommand("flow-test"), flowtest_args);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp")
            return app.exit(e);
        std::cerr << "error: cli: " << e.what() << "\n";
        return 1;
    } catch (const surfpde::ValidationError& e) {
        std::cerr << "error: validation: " << e.what() << "\n";
        return 1;
    } catch (const surfpde::NumericalError& e) {
        std::cerr << "error: numerical: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << "\n";
        return 2;
    }
}
