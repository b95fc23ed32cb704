#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "jobs.hpp"
#include "qdx/errors.hpp"
#include "qdx/expr.hpp"

namespace {

// Exit codes: 0 ok, 2 config/parse error, 3 numerical domain error,
// 4 verification failure.
constexpr int kOkExit = 0;
constexpr int kConfigExit = 2;
constexpr int kNumericExit = 3;

struct CommonArgs {
    std::string config_path;
    qdx::cli::Overrides overrides;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("config", args.config_path, "job description file (JSON)")->required();
    cmd->add_option("--grid-base", [&args](const CLI::results_t& r) {
        args.overrides.grid_base = std::stod(r[0]);
        return true;
    }, "override grid.base");
    cmd->add_option("--grid-q", [&args](const CLI::results_t& r) {
        args.overrides.grid_q = std::stod(r[0]);
        return true;
    }, "override grid.q");
    cmd->add_option("--grid-depth", [&args](const CLI::results_t& r) {
        args.overrides.grid_depth = static_cast<std::size_t>(std::stoul(r[0]));
        return true;
    }, "override grid.depth");
    cmd->add_option("--t", [&args](const CLI::results_t& r) {
        for (const auto& v : r) args.overrides.t_list.push_back(std::stod(v));
        return true;
    }, "override the transform parameter(s)")->allow_extra_args();
    cmd->add_option("--format", [&args](const CLI::results_t& r) {
        args.overrides.format = r[0];
        return true;
    }, "csv or json");
    cmd->add_option("--tolerance", [&args](const CLI::results_t& r) {
        args.overrides.tolerance = std::stod(r[0]);
        return true;
    }, "override the check tolerance");
}

qdx::cli::JobConfig load(const CommonArgs& args) {
    qdx::cli::JobConfig config = qdx::cli::load_job_config(args.config_path);
    qdx::cli::apply_overrides(config, args.overrides);
    return config;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"qdx: exact solutions of q-difference Riccati and Schrodinger equations\n"
                 "via Darboux gauge transforms and Backlund deformation chains"};
    app.require_subcommand(1);

    CommonArgs solve_args, backlund_args, verify_args;
    bool selftest = false, classic = false;

    CLI::App* solve = app.add_subcommand(
        "solve-linear", "propagate the linear system and tabulate psi, phi, u");
    add_common(solve, solve_args);

    CLI::App* backlund = app.add_subcommand(
        "backlund", "apply Backlund transforms / deformation chains and tabulate the orbit");
    add_common(backlund, backlund_args);
    backlund->add_flag("--selftest", selftest, "also run a group-law self-test");

    CLI::App* verify = app.add_subcommand(
        "verify", "run the invariant checks on the configured problem");
    add_common(verify, verify_args);
    verify->add_flag("--classic", classic,
                     "check the classical (q=1) quadrature oracles instead of the lattice");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOkExit : kConfigExit;
    }

    try {
        if (solve->parsed()) return qdx::cli::run_solve_linear(load(solve_args), std::cout, std::cerr);
        if (backlund->parsed())
            return qdx::cli::run_backlund(load(backlund_args), selftest, std::cout, std::cerr);
        return qdx::cli::run_verify(load(verify_args), classic, std::cout, std::cerr);
    } catch (const qdx::cli::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigExit;
    } catch (const qdx::expr::ParseError& e) {
        std::cerr << "expression error: " << e.what() << "\n";
        return kConfigExit;
    } catch (const qdx::DomainError& e) {
        std::cerr << "numerical domain error: " << e.what() << "\n";
        return kNumericExit;
    } catch (const qdx::ConvergenceError& e) {
        std::cerr << "convergence error: " << e.what() << "\n";
        return kNumericExit;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
