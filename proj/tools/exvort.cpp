// Batch front end for the vortex toolkit: closed-form evaluation, coupled
// solves, verification of produced fields, and field comparison.
//
// Exit codes: 0 success, 2 config error, 3 divergence, 4 tolerance violation.

#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "exvort/commands.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    double tol_override = -1.0;
    int grid_n_override = -1;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool config_required = true) {
    auto* c = cmd->add_option("--config", opts.config_path, "run configuration file");
    if (config_required) c->required();
    cmd->add_option("--out", opts.out_dir, "output directory");
    cmd->add_option("--tol", opts.tol_override, "override the configured tolerance");
    cmd->add_option("--grid-n", opts.grid_n_override, "override the grid resolution");
}

exvort::RunConfig load(const CommonOpts& opts) {
    exvort::RunConfig c = exvort::load_config(opts.config_path);
    if (opts.tol_override > 0.0) c.tol = opts.tol_override;
    if (opts.grid_n_override > 0) c.n = opts.grid_n_override;
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exvort: integrable vortex solutions and coupled solves"};
    app.require_subcommand(1);

    CommonOpts analytic_opts, solve_opts, verify_opts, compare_opts;
    auto* analytic = app.add_subcommand(
        "analytic", "evaluate a closed-form solution family on a grid");
    add_common(analytic, analytic_opts);
    auto* solve = app.add_subcommand(
        "solve", "run the damped-Newton solver on a problem config");
    add_common(solve, solve_opts);
    auto* verify = app.add_subcommand(
        "verify", "re-check residuals, fluxes and zeros of produced fields");
    add_common(verify, verify_opts);

    auto* compare =
        app.add_subcommand("compare", "compare two field files on one grid");
    add_common(compare, compare_opts, false);
    std::string cmp_a, cmp_b;
    double cmp_tol = 0.0;
    compare->add_option("--a", cmp_a, "first field file");
    compare->add_option("--b", cmp_b, "second field file");
    compare->add_option("--compare-tol", cmp_tol,
                        "fail (exit 4) when L_inf exceeds this");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exvort::kExitConfigError;
    }

    try {
        if (analytic->parsed())
            return exvort::cmd_analytic(load(analytic_opts),
                                        analytic_opts.out_dir);
        if (solve->parsed())
            return exvort::cmd_solve(load(solve_opts), solve_opts.out_dir);
        if (verify->parsed())
            return exvort::cmd_verify(load(verify_opts), verify_opts.out_dir);
        if (compare->parsed()) {
            exvort::RunConfig c;
            if (!compare_opts.config_path.empty()) c = load(compare_opts);
            if (!cmp_a.empty()) c.compare_a = cmp_a;
            if (!cmp_b.empty()) c.compare_b = cmp_b;
            if (cmp_tol > 0.0) c.compare_tol = cmp_tol;
            if (compare_opts.grid_n_override > 0) c.n = compare_opts.grid_n_override;
            return exvort::cmd_compare(c, compare_opts.out_dir);
        }
    } catch (const exvort::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exvort::kExitConfigError;
    } catch (const exvort::DivergenceError& e) {
        std::cerr << "divergence: " << e.what() << "\n";
        return exvort::kExitDivergence;
    } catch (const exvort::InvalidInputError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exvort::kExitConfigError;
    } catch (const exvort::UnsupportedInputError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exvort::kExitConfigError;
    } catch (const exvort::NoVacuumError& e) {
        std::cerr << "config error (no vacuum): " << e.what() << "\n";
        return exvort::kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return exvort::kExitConfigError;
}
