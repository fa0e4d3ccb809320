#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
    using namespace hetq::cli;

    CLI::App app{"Convergence bounds, transient solutions and Monte-Carlo checks for a\n"
                 "non-stationary two-server heterogeneous queue"};
    app.require_subcommand(1);

    RunConfig config;
    std::string out_dir;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--model", config.model, "Model configuration (JSON)")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, std::string("Output directory (default $") + kOutDirEnv + " or ./hetq_out)");
        sub->add_option("--n", config.n, "Truncation level (states); chosen by doubling when omitted");
        sub->add_option("--step", config.step, "RK4 step size");
        sub->add_option("--horizon", config.horizon, "Integration horizon");
        sub->add_option("--epsilon", config.epsilon, "Weight d2 (otherwise tuned)");
        sub->add_option("--delta1", config.delta1, "Weight d4 (otherwise tuned)");
        sub->add_option("--tol-mix", config.tol_mix, "l1 distance at which trajectories count as merged");
        sub->add_option("--tol-trunc", config.tol_trunc, "Mean tolerance for truncation doubling");
        sub->add_option("--paths", config.paths, "Monte-Carlo paths");
        sub->add_option("--seed", config.seed, "Monte-Carlo seed");
        sub->add_option("--far-state", config.far_state, "Index of the far initial state (default n - 1)");
    };

    auto* bound = app.add_subcommand("bound", "Compute the convergence certificate");
    add_common(bound);
    bound->add_flag("--measure", config.measure, "Also measure the prefactor N from two trajectories");

    auto* solve = app.add_subcommand("solve", "Integrate from X(0)=0 and a far state; extract the limit cycle");
    add_common(solve);

    auto* simulate = app.add_subcommand("simulate", "Monte-Carlo state probabilities");
    add_common(simulate);
    simulate->add_option("--times", config.times, "Sample times (default 1 5 horizon)");

    auto* compare = app.add_subcommand("compare", "ODE vs Monte-Carlo and periodic vs averaged decay");
    add_common(compare);

    auto* dump = app.add_subcommand("dump", "Print a truncated matrix with 17 significant digits");
    add_common(dump);
    dump->add_option("--matrix", config.matrix, "A, B, transformed or product")
        ->check(CLI::IsMember({"A", "B", "transformed", "product"}));
    dump->add_option("--t", config.at, "Time at which rates are evaluated");
    dump->add_option("--dim", config.dim, "Matrix dimension");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfigError;
    }
    config.out_dir = out_dir;

    const auto* sub = app.get_subcommands().front();
    return run_command(sub->get_name(), config, std::cout, std::cerr);
}
