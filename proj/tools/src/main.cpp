#include "tzl_cli/commands.hpp"
#include "tzl_cli/config.hpp"

#include "tzl/error.hpp"

#include <CLI11.hpp>

#include <cstring>
#include <iostream>

using namespace tzl::cli;

namespace {

// --config is read before the flags so that explicit flags override it.
std::optional<std::string> config_path(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--config") == 0 && i + 1 < argc) return std::string(argv[i + 1]);
        if (std::strncmp(argv[i], "--config=", 9) == 0) return std::string(argv[i] + 9);
    }
    return std::nullopt;
}

} // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    try {
        if (auto path = config_path(argc, argv)) cfg = load_config(*path);
    } catch (const std::exception& e) {
        std::cerr << "tzl: error: " << e.what() << '\n';
        return 1;
    }

    CLI::App app{"Zeros of random Berezin-Toeplitz sections on the Riemann sphere"};
    app.require_subcommand(0, 1);
    app.fallthrough();

    std::string config_file;
    app.add_option("--config", config_file, "JSON experiment config; explicit flags override it");
    app.add_option("--symbol", cfg.symbol, "const:c | power:k | expinv | disc:r, optionally a*...");
    app.add_option("--p", cfg.p, "degree(s)")->delimiter(',');
    std::uint64_t trials = 0, zeros = 0;
    auto* opt_trials = app.add_option("--trials,--rn", trials, "trials per degree (RN)");
    auto* opt_zeros = app.add_option("--zeros", zeros, "total-zero target, RN = zeros / p");
    app.add_option("--seed", cfg.seed, "64-bit master seed or 'random'");
    app.add_option("--bins", cfg.bins, "histogram bins");
    app.add_option("--phi", cfg.phi, "test function: bump:r[,A] | log | const:c");
    app.add_option("--g", cfg.g, "mass weight: bump:r[,A] | const:c");
    app.add_option("--radius", cfg.radius, "hole: chart radius of the disc around 0");
    app.add_option("--n-max", cfg.n_max, "mass: largest degree");
    app.add_option("--offsets", cfg.offsets, "kernel-check: c with |u| = c / sqrt(p)")->delimiter(',');
    app.add_option("--directions", cfg.directions, "kernel-check: angles of u")->delimiter(',');
    app.add_option("--base", cfg.base, "kernel-check: base point 're,im' or 'inf'");
    app.add_option("--out", cfg.out, "output directory");
    app.add_option("--format", cfg.format, "csv | json");
    app.add_option("--threads", cfg.threads, "worker threads (0: TZL_THREADS or all cores)");
    app.add_flag("--samples", cfg.samples, "sample-zeros: also write samples.csv");
    app.add_option("--criterion", cfg.criteria, "selftest: criteria to run")->delimiter(',');

    for (const auto& name : command_names()) app.add_subcommand(name, "run " + name);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    if (*opt_trials) cfg.trials = trials;
    if (*opt_zeros) cfg.zeros = zeros;
    for (const auto* sub : app.get_subcommands()) cfg.command = sub->get_name();
    if (cfg.command.empty()) {
        std::cerr << app.help();
        return 1;
    }
    return run(cfg, std::cout, std::cerr);
}
