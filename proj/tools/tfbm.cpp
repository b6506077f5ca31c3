// Command line front end for the tempered fBm Fokker-Planck solver.
//
//   tfbm run <config>          solve and write msd/snapshot/particle CSVs
//   tfbm sweep <config dir>    execute every *.cfg in a directory
//   tfbm converge <config>     observed orders against the Gaussian oracle
//   tfbm steps <config>        uniform vs graded step counts
//
// Outputs land in <out>/run-<config hash>/.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "tfbm/experiment.hpp"

namespace fs = std::filesystem;
using namespace tfbm::experiment;

namespace {

void report(const fs::path& dir)
{
    std::cout << dir.string() << '\n';
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Solver for the 2D Fokker-Planck equation of tempered fractional Brownian motion"};
    app.require_subcommand(1);
    std::string out_root = "runs";
    app.add_option("-o,--out", out_root, "Root directory for run outputs")->capture_default_str();

    std::string config_path;
    auto* run_cmd = app.add_subcommand("run", "Solve one configuration");
    run_cmd->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);

    std::string sweep_dir;
    auto* sweep_cmd = app.add_subcommand("sweep", "Execute every *.cfg in a directory");
    sweep_cmd->add_option("dir", sweep_dir, "Directory of config files")->required()->check(CLI::ExistingDirectory);

    auto* converge_cmd = app.add_subcommand("converge", "Convergence study against the Gaussian oracle");
    converge_cmd->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);

    auto* steps_cmd = app.add_subcommand("steps", "Uniform vs nonuniform step counts");
    steps_cmd->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) {
            const Config config = load_config(config_path, Mode::Solve);
            const RunResult result = run_experiment(config, out_root);
            std::cerr << "law=" << tfbm::to_string(result.law) << " steps=" << result.stats.steps
                      << " cg_iterations=" << result.stats.solver_iterations;
            if (result.series.plateau_estimate) {
                std::cerr << " plateau_msd=" << *result.series.plateau_estimate;
            }
            std::cerr << '\n';
            report(result.directory);
        } else if (*sweep_cmd) {
            for (const fs::path& dir : sweep(sweep_dir, out_root)) {
                report(dir);
            }
        } else if (*converge_cmd) {
            const Config config = load_config(config_path, Mode::Converge);
            const fs::path dir = execute(config, out_root);
            std::ifstream table(dir / "converge.csv");
            std::cerr << table.rdbuf();
            report(dir);
        } else if (*steps_cmd) {
            const Config config = load_config(config_path, Mode::Steps);
            report(execute(config, out_root));
        }
    } catch (const std::exception& e) {
        std::cerr << "tfbm: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
