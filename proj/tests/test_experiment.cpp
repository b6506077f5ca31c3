#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "tfbm/experiment.hpp"

using namespace tfbm;
using namespace tfbm::experiment;
namespace fs = std::filesystem;

namespace {

Config parse(const std::string& text, std::optional<Mode> mode = std::nullopt)
{
    std::istringstream in(text);
    return parse_config(in, mode);
}

std::string slurp(const fs::path& path)
{
    std::ifstream in(path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

fs::path scratch(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / ("tfbm-test-" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

const char* kSmallRun = R"(# small solve
hurst = 0.3
lambda = 0.1
tau = 0.1
horizon = 5
domain = -10,10
mesh_m = 39
mesh_n = 39
snapshot_times = 1, 5
particles = 100
seed = 3
plot = true
)";

} // namespace

TEST_CASE("config parsing")
{
    const Config config = parse(kSmallRun);
    CHECK(config.hurst == std::vector<double>{0.3});
    CHECK(config.lambda == 0.1);
    CHECK(config.domain.x_min == -10.0);
    CHECK(config.domain.y_max == 10.0);
    CHECK(config.mesh_m == 39);
    CHECK(config.snapshot_times == std::vector<double>{1.0, 5.0});
    CHECK(config.particles == 100);
    CHECK(config.plot);
    CHECK(config.mode == Mode::Solve);
    CHECK(config.solver_tol == 1e-10);

    const Config rect = parse("hurst=0.7\nlambda=1\nhorizon=2\ndomain=0,1,-2,2\n");
    CHECK(rect.domain.x_max == 1.0);
    CHECK(rect.domain.y_min == -2.0);
}

TEST_CASE("config errors name the field")
{
    auto message = [](const std::string& text, std::optional<Mode> mode = std::nullopt) {
        try {
            parse(text, mode);
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string("no error");
    };
    CHECK(message("hurst=0.3\nlambda=0.1\nhorizon=1\ncolour=red\n").find("unknown key 'colour'") != std::string::npos);
    CHECK(message("hurst=0.5\nlambda=0.1\nhorizon=1\n").find("'hurst'") != std::string::npos);
    CHECK(message("hurst=0.3\nlambda=-1\nhorizon=1\n").find("'lambda'") != std::string::npos);
    CHECK(message("hurst=0.3\nlambda=0.1\n").find("'horizon'") != std::string::npos);
    CHECK(message("hurst=0.3\nlambda=0.1\nhorizon=1\ntau=abc\n").find("'tau'") != std::string::npos);
    CHECK(message("hurst=0.3\nlambda=0.1\nhorizon=1\ndomain=1,2,3\n").find("'domain'") != std::string::npos);
    CHECK(message("hurst=0.3\nlambda=0.1\nhorizon=1\nsnapshot_times=2\n").find("'snapshot_times'") !=
          std::string::npos);
    CHECK(message("hurst=0.3\nlambda=0.1\nhorizon=1\nhorizon=2\n").find("more than once") != std::string::npos);
    CHECK(message("hurst=0.3\nlambda=0.1\nhorizon=1\nmode=fast\n").find("'mode'") != std::string::npos);
    CHECK(message("hurst=0.2,0.3\nlambda=0.1\nhorizon=1\n").find("'hurst'") != std::string::npos);
    CHECK(message("hurst=0.2,0.3\nlambda=0.1\nhorizon=1\n", Mode::Steps) == "no error");
    CHECK(message("just words\n").find("line 1") != std::string::npos);
}

TEST_CASE("config hash is canonical")
{
    const Config a = parse(kSmallRun);
    const Config b = parse(std::string(kSmallRun) + "\n# trailing comment\n");
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a).size() == 16);
    Config c = a;
    c.seed = 4;
    CHECK(config_hash(a) != config_hash(c));
}

TEST_CASE("step-count table")
{
    const Config config = parse("hurst=0.2,0.3,0.7,0.8\nlambda=0.1\ntau=0.05\nhorizon=200\n", Mode::Steps);
    const std::vector<StepCountRow> rows = step_counts(config);
    REQUIRE(rows.size() == 40);
    for (const StepCountRow& row : rows) {
        CHECK(row.nonuniform_steps < row.uniform_steps);
    }
    CHECK(rows[9].hurst == 0.2);
    CHECK(rows[9].horizon == 200.0);
    CHECK(rows[9].nonuniform_steps == 167);
    CHECK(rows[9].uniform_steps == 4000);
    CHECK(rows[39].law == GridLaw::SplicedCaseII);
}

TEST_CASE("solve run writes deterministic outputs")
{
    const Config config = parse(kSmallRun);
    const fs::path first = scratch("run-a");
    const fs::path second = scratch("run-b");
    const RunResult a = run_experiment(config, first);
    const RunResult b = run_experiment(config, second);
    CHECK(a.directory.filename() == "run-" + config_hash(config));
    for (const char* name : {"msd.csv", "snapshot_t1.csv", "snapshot_t5.csv", "particles_t1.csv",
                             "particles_t5.csv", "plot.gp"}) {
        REQUIRE(fs::exists(a.directory / name));
        CHECK(slurp(a.directory / name) == slurp(b.directory / name));
    }
    CHECK(a.series.size() == a.stats.steps + 1);
    CHECK(slurp(a.directory / "msd.csv").rfind("t,mass,mean_x,mean_y,msd\n", 0) == 0);

    const std::string manifest = slurp(a.directory / "manifest.txt");
    for (const char* key : {"hurst=0.3", "lambda=0.1", "tau=0.1", "horizon=5", "domain=-10,10,-10,10", "mesh_m=39",
                            "seed=3", "solver_tol=1e-10", "grid_law=graded", "splice_index=none",
                            "solver_iterations=", "wall_time_seconds=", "time_steps="}) {
        CHECK(manifest.find(key) != std::string::npos);
    }
}

TEST_CASE("execute dispatches steps and converge modes")
{
    const fs::path out = scratch("exec");
    const Config steps = parse("hurst=0.2,0.7\nlambda=0.1\ntau=0.05\nhorizon=50\nmode=steps\n");
    const fs::path steps_dir = execute(steps, out);
    CHECK(slurp(steps_dir / "steps.csv").rfind("hurst,horizon,law,nonuniform_steps,uniform_steps\n", 0) == 0);

    const Config converge = parse("hurst=0.3\nlambda=0.1\ntau=0.2\nhorizon=0.5\ndomain=-8,8\nmesh_m=15\nmesh_n=15\n"
                                  "mode=converge\nlevels=2\nfine_tau=0.01\nfine_mesh=63\n");
    const fs::path conv_dir = execute(converge, out);
    const std::string table = slurp(conv_dir / "converge.csv");
    CHECK(table.rfind("axis,level,h,tau,l2_error,observed_order\n", 0) == 0);
    CHECK(table.find("fit,space") != std::string::npos);
    CHECK(slurp(conv_dir / "manifest.txt").find("spatial_order=") != std::string::npos);

    std::ostringstream first, second;
    write_convergence_csv(first, convergence_report(converge));
    write_convergence_csv(second, convergence_report(converge));
    CHECK(first.str() == second.str());
    CHECK(first.str() == table);
}

TEST_CASE("sweep runs every config in a directory")
{
    const fs::path configs = scratch("sweep-in");
    const fs::path out = scratch("sweep-out");
    {
        std::ofstream(configs / "a.cfg") << "hurst=0.3\nlambda=0.1\ntau=0.2\nhorizon=2\ndomain=-5,5\nmesh_m=9\nmesh_n=9\n";
        std::ofstream(configs / "b.cfg") << "hurst=0.7\nlambda=0.5\ntau=0.2\nhorizon=2\ndomain=-5,5\nmesh_m=9\nmesh_n=9\n";
        std::ofstream(configs / "notes.txt") << "ignored";
    }
    const std::vector<fs::path> dirs = sweep(configs, out);
    REQUIRE(dirs.size() == 2);
    CHECK(fs::exists(dirs[0] / "msd.csv"));
    CHECK(fs::exists(dirs[1] / "msd.csv"));
    CHECK(dirs[0] != dirs[1]);

    std::ofstream(configs / "c.cfg") << "hurst=0.3\nbogus=1\n";
    CHECK_THROWS_AS(sweep(configs, out), ConfigError);
}
