#include <CLI11.hpp>

#include "qpscat/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Quasi-periodic grating scattering solver"};
    app.require_subcommand(1);

    std::string config_path;
    std::string output;
    std::string mode;
    int threads = 0;
    long long seed = -1;

    CLI::App* solve = app.add_subcommand(
        "solve", "Run a config-driven solve, sweep, or convergence study");
    solve->add_option("--config", config_path, "Path to the JSON run configuration")
        ->required()
        ->check(CLI::ExistingFile);
    solve->add_option("--output", output, "Output directory (overrides the config)");
    solve->add_option("--mode", mode,
                      "Mode override: solve, sweep_A, sweep_k, green_conv, make_ref");
    solve->add_option("--threads", threads, "Worker thread count (0: environment default)");
    solve->add_option("--seed", seed, "Reserved; echoed into the run report");

    CLI11_PARSE(app, argc, argv);

    qpscat::RunOverrides ov;
    if (!mode.empty()) ov.mode = mode;
    if (!output.empty()) ov.output = output;
    ov.threads = threads;
    ov.seed = seed;
    return qpscat::run(config_path, ov);
}
