#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "abcd/cli/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"abcd_lab: parameter atlas, simulations and property checks for the abcd Boussinesq system"};
    app.require_subcommand(1);
    app.fallthrough();

    abcd::cli::Options opt;
    std::string config, out;
    app.add_option("--config", config, "INI configuration file")->check(CLI::ExistingFile);
    app.add_option("--out", out, "output directory (default $ABCD_OUT_ROOT/<subcommand> or abcd_out/<subcommand>)");
    app.add_option("--seed", opt.seed, "seed for randomized checks")->capture_default_str();
    app.add_option("--jobs", opt.jobs, "worker threads")->capture_default_str()->check(CLI::Range(1u, 1024u));

    for (const char* name : {"atlas", "simulate", "verify", "dispersion"}) app.add_subcommand(name);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : abcd::cli::kExitConfig;
    }
    opt.subcommand = app.get_subcommands().front()->get_name();
    if (!config.empty()) opt.config = config;
    if (!out.empty()) opt.out = out;
    return abcd::cli::run_command(opt, std::cout, std::cerr);
}
