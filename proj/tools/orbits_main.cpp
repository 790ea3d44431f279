#include <CLI11.hpp>

#include "orbits/job.hpp"

// orbits solve|verify|continue|map --config <path> [--out <dir>]

int main(int argc, char** argv) {
    CLI::App app{"variational solver for collision-regularized periodic orbits"};
    app.require_subcommand(1);

    std::string config;
    std::string out;
    std::string command;
    for (const char* name : {"solve", "verify", "continue", "map"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config, "job configuration file")->required();
        sub->add_option("--out", out, "output directory (overrides the config)");
        sub->callback([&command, name]() { command = name; });
    }

    CLI11_PARSE(app, argc, argv);
    return orbits::run_job(config, command, out);
}
