#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "mildeig/commands.hpp"

namespace {

struct CommonArgs {
    std::string config;
    std::string out_dir;
    bool out_given = false;
    unsigned long seed = 0;
    bool seed_given = false;
    bool quiet = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config, "Path to the JSON problem configuration")
        ->required();
    cmd->add_option("--out", args.out_dir, "Directory for result artifacts")
        ->each([&args](const std::string&) { args.out_given = true; });
    cmd->add_option("--seed", args.seed, "Seed for all randomized sampling")
        ->each([&args](const std::string&) { args.seed_given = true; });
    cmd->add_flag("--quiet", args.quiet, "Suppress progress output");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Positive eigenpair search for semilinear heat flow with "
                 "functional initial conditions"};
    app.require_subcommand(1);

    CommonArgs args;
    std::string certificate_path;
    std::string trajectory_path;

    CLI::App* solve = app.add_subcommand("solve", "Run the eigenpair solver at one rho");
    CLI::App* sweep = app.add_subcommand("sweep", "Solve for every rho in the config list");
    CLI::App* check = app.add_subcommand("check", "Evaluate the hypothesis checker");
    CLI::App* verify = app.add_subcommand("verify", "Re-validate a stored certificate");
    CLI::App* oracle =
        app.add_subcommand("oracle-compare", "Cross-implementation semigroup/quadrature deltas");
    for (CLI::App* cmd : {solve, sweep, check, verify, oracle}) add_common(cmd, args);
    verify->add_option("--certificate", certificate_path, "Certificate JSON to re-validate")
        ->required();
    verify->add_option("--trajectory", trajectory_path, "Companion trajectory CSV")
        ->required();

    CLI11_PARSE(app, argc, argv);

    mildeig::Command cmd = mildeig::Command::Solve;
    if (sweep->parsed()) cmd = mildeig::Command::Sweep;
    else if (check->parsed()) cmd = mildeig::Command::Check;
    else if (verify->parsed()) cmd = mildeig::Command::Verify;
    else if (oracle->parsed()) cmd = mildeig::Command::OracleCompare;

    std::optional<mildeig::ConfigDocument> doc;
    try {
        doc = mildeig::load_config(args.config);
    } catch (const mildeig::Error& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    }

    try {
        mildeig::RunOptions opts;
        if (args.out_given) opts.out_dir = args.out_dir;
        opts.quiet = args.quiet;
        if (args.seed_given) opts.seed = args.seed;
        opts.certificate_path = certificate_path;
        opts.trajectory_path = trajectory_path;
        return mildeig::run_command(cmd, *doc, opts);
    } catch (const mildeig::SchemaError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const mildeig::ValidationError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const mildeig::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
