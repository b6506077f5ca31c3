#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tfbm/analysis.hpp"
#include "tfbm/mesh.hpp"
#include "tfbm/scheme.hpp"
#include "tfbm/time_grid.hpp"

namespace tfbm::experiment {

enum class Mode { Solve, Steps, Converge };

/// Flat key-value experiment description. One `key = value` per line, `#`
/// starts a comment, unknown keys are rejected.
///
///   hurst           H, or a comma list in steps mode
///   lambda          tempering rate
///   tau             grading parameter (coarsest tau in converge mode)
///   horizon         T
///   domain          `a,b` for (a,b)^2 or `x0,x1,y0,y1`
///   mesh_m, mesh_n  interior nodes per axis (coarsest mesh in converge mode)
///   mode            solve | steps | converge
///   snapshot_times  comma list of times for field and particle dumps
///   particles       particles drawn per snapshot (0 disables)
///   seed            sampling seed
///   solver_tol      CG relative residual tolerance
///   levels          refinement levels in converge mode
///   fine_tau        tau used while refining space in converge mode
///   fine_mesh       interior nodes per axis while refining time in converge mode
///   plot            true | false, emit a gnuplot script
struct Config {
    std::vector<double> hurst;
    double lambda = 0.0;
    double tau = 0.05;
    double horizon = 0.0;
    Rectangle domain{-100.0, 100.0, -100.0, 100.0};
    std::size_t mesh_m = 199;
    std::size_t mesh_n = 199;
    Mode mode = Mode::Solve;
    std::vector<double> snapshot_times;
    std::size_t particles = 0;
    std::uint64_t seed = 1;
    double solver_tol = 1e-10;
    std::size_t levels = 3;
    std::optional<double> fine_tau;
    std::optional<std::size_t> fine_mesh;
    bool plot = false;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parses and validates. A `mode_override` replaces the file's mode before
/// validation, as the CLI verbs do.
Config parse_config(std::istream& in, std::optional<Mode> mode_override = std::nullopt);
Config load_config(const std::filesystem::path& path, std::optional<Mode> mode_override = std::nullopt);

/// Checks cross-field constraints; throws ConfigError naming the field.
void validate(const Config& config);

/// Canonical text of every setting, one `key=value` per line.
std::string canonical(const Config& config);
/// 16 hex digits of the FNV-1a hash of canonical(config).
std::string config_hash(const Config& config);

struct RunResult {
    std::filesystem::path directory;
    GridLaw law = GridLaw::GradedCaseI;
    std::optional<std::size_t> splice_index;
    RunStats stats;
    MsdSeries series;
    double wall_seconds = 0.0;
};

/// Solves from the initial data exp(-x^2 - 2y^2) and writes msd.csv,
/// snapshot and particle CSVs, the manifest and optionally plot.gp into
/// out_root/run-<hash>.
RunResult run_experiment(const Config& config, const std::filesystem::path& out_root);

struct ConvergenceRow {
    std::string axis; ///< "space" or "time"
    std::size_t level = 0;
    double h = 0.0;
    double tau = 0.0;
    double error = 0.0;
    double order = 0.0; ///< log2 of the error ratio to the previous level; NaN on level 0
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;
    double spatial_order = 0.0;  ///< least-squares slope of log error vs log h
    double temporal_order = 0.0; ///< least-squares slope of log error vs log tau
};

/// Discrete L2 error sqrt(h l sum e^2) of the scheme against the Gaussian
/// oracle (initial variances 1/2 and 1/4) at the last grid node.
double oracle_error(const ModelParams& params, const SpatialMesh& mesh, double tau, double horizon,
                    const SolverOptions& options = {});

/// Halves h `levels - 1` times at fine_tau, then halves tau at fine_mesh.
ConvergenceTable convergence_report(const Config& config);

void write_convergence_csv(std::ostream& out, const ConvergenceTable& table);

struct StepCountRow {
    double hurst = 0.0;
    double horizon = 0.0;
    GridLaw law = GridLaw::GradedCaseI;
    std::size_t nonuniform_steps = 0;
    std::size_t uniform_steps = 0;
};

/// Nonuniform vs uniform step counts at equal tau for each H, at horizons
/// T/10, 2T/10, ..., T (horizons too short for a valid grid are skipped).
std::vector<StepCountRow> step_counts(const Config& config);

void write_step_counts_csv(std::ostream& out, const std::vector<StepCountRow>& rows);

/// Runs whichever mode the config selects and returns its output directory.
std::filesystem::path execute(const Config& config, const std::filesystem::path& out_root);

/// Executes every `*.cfg` under `directory` (sorted by name), in parallel.
std::vector<std::filesystem::path> sweep(const std::filesystem::path& directory, const std::filesystem::path& out_root);

} // namespace tfbm::experiment
