#pragma once

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "liewave/experiments.hpp"

namespace liewave {

inline int cli_main(int argc, const char* const* argv) {
    CLI::App app{"liewave: spectral experiments for the viscoelastic damped wave equation on "
                 "tori, SU(2) and SO(3)"};
    app.require_subcommand(1);

    std::string run_path, validate_path;
    auto* run_cmd = app.add_subcommand("run", "execute the experiment described by a config file");
    run_cmd->add_option("config", run_path, "path to a JSON run configuration")->required();
    auto* validate_cmd = app.add_subcommand("validate", "parse and validate a config file");
    validate_cmd->add_option("config", validate_path, "path to a JSON run configuration")->required();
    auto* presets_cmd = app.add_subcommand("presets", "list the named initial-data presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    if (*run_cmd) return run_config_file(run_path);

    if (*validate_cmd) {
        try {
            RunConfig cfg = load_config(validate_path);
            for (const auto& w : cfg.solver.validate(cfg.group)) std::cerr << "warning: " << w << "\n";
            std::cout << "configuration OK: experiment " << experiment_name(cfg.experiment) << "\n";
            return kExitPass;
        } catch (const ConfigError& e) {
            std::cerr << "config error: " << e.what() << "\n";
            return kExitConfigError;
        }
    }

    if (*presets_cmd) {
        std::cout << "constant     f = value (one coefficient at the trivial representation);\n"
                     "             parameters: value (default 1.0)\n"
                     "single_mode  tori: sqrt(2) cos(k.theta) for index k (k = 0 gives the constant 1);\n"
                     "             SU(2)/SO(3): the character of the indexed representation\n"
                     "             (doubled spin m = 2l for su2, l for so3); unit L2 norm; parameters: index\n"
                     "random       real bandlimited field with Gaussian coefficients;\n"
                     "             parameters: seed (default 1)\n"
                     "zero         the zero field\n"
                     "file         coefficients from a CSV file (rep,k,l,re,im, as written by\n"
                     "             dump_coefficients); parameters: path\n";
        return kExitPass;
    }
    return kExitPass;
}

}  // namespace liewave
