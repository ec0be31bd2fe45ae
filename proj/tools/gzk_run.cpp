#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "gzk/experiments.hpp"

int main(int argc, char** argv) {
    CLI::App app{"gzk3d: pseudo-spectral experiments for the 3D generalized "
                 "Zakharov-Kuznetsov equation"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_root;
    auto* run = app.add_subcommand("run", "run an experiment from a JSON config");
    run->add_option("config", config_path, "path to the config file")->required();
    run->add_option("--out-root", out_root, "override the output root directory");

    auto* list = app.add_subcommand("list-experiments", "list available experiments");

    CLI11_PARSE(app, argc, argv);

    if (list->parsed()) {
        std::cout << gzk::list_experiments_text();
        return 0;
    }
    return gzk::run_experiment_file(config_path, out_root);
}
