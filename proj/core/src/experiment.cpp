#include "tfbm/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <future>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>

#include "tfbm/oracle.hpp"
#include "tfbm/special_functions.hpp"

namespace tfbm::experiment {

namespace fs = std::filesystem;

namespace {

std::string trim(std::string_view text)
{
    const auto first = text.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = text.find_last_not_of(" \t\r");
    return std::string(text.substr(first, last - first + 1));
}

[[noreturn]] void fail(const std::string& key, const std::string& message)
{
    throw ConfigError("config: key '" + key + "': " + message);
}

double parse_real(const std::string& key, const std::string& text)
{
    double value = 0.0;
    const std::string token = trim(text);
    const char* begin = token.data();
    const char* end = begin + token.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end || token.empty()) {
        fail(key, "expected a real number, got '" + token + "'");
    }
    if (!std::isfinite(value)) {
        fail(key, "must be finite");
    }
    return value;
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& text)
{
    std::uint64_t value = 0;
    const std::string token = trim(text);
    const char* begin = token.data();
    const char* end = begin + token.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end || token.empty()) {
        fail(key, "expected a nonnegative integer, got '" + token + "'");
    }
    return value;
}

std::vector<double> parse_list(const std::string& key, const std::string& text)
{
    std::vector<double> values;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) {
        values.push_back(parse_real(key, item));
    }
    return values;
}

std::string format_real(double value)
{
    char buffer[32];
    const auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
    return std::string(buffer, result.ptr);
}

std::string format_list(const std::vector<double>& values)
{
    std::string text;
    for (std::size_t i = 0; i < values.size(); ++i) {
        text += (i ? "," : "") + format_real(values[i]);
    }
    return text;
}

std::string_view mode_name(Mode mode)
{
    switch (mode) {
    case Mode::Solve:
        return "solve";
    case Mode::Steps:
        return "steps";
    case Mode::Converge:
        return "converge";
    }
    return "solve";
}

std::string short_label(double value)
{
    std::ostringstream out;
    out << value;
    return out.str();
}

} // namespace

Config parse_config(std::istream& in, std::optional<Mode> mode_override)
{
    Config config;
    std::map<std::string, bool> seen;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config: line " + std::to_string(line_number) + ": expected key = value");
        }
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        if (seen[key]) {
            fail(key, "given more than once");
        }
        seen[key] = true;

        if (key == "hurst") {
            config.hurst = parse_list(key, value);
        } else if (key == "lambda") {
            config.lambda = parse_real(key, value);
        } else if (key == "tau") {
            config.tau = parse_real(key, value);
        } else if (key == "horizon") {
            config.horizon = parse_real(key, value);
        } else if (key == "domain") {
            const std::vector<double> bounds = parse_list(key, value);
            if (bounds.size() == 2) {
                config.domain = {bounds[0], bounds[1], bounds[0], bounds[1]};
            } else if (bounds.size() == 4) {
                config.domain = {bounds[0], bounds[1], bounds[2], bounds[3]};
            } else {
                fail(key, "expected 'a,b' or 'x0,x1,y0,y1'");
            }
        } else if (key == "mesh_m") {
            config.mesh_m = parse_unsigned(key, value);
        } else if (key == "mesh_n") {
            config.mesh_n = parse_unsigned(key, value);
        } else if (key == "mode") {
            if (value == "solve") {
                config.mode = Mode::Solve;
            } else if (value == "steps") {
                config.mode = Mode::Steps;
            } else if (value == "converge") {
                config.mode = Mode::Converge;
            } else {
                fail(key, "expected solve, steps or converge, got '" + value + "'");
            }
        } else if (key == "snapshot_times") {
            config.snapshot_times = value.empty() ? std::vector<double>{} : parse_list(key, value);
        } else if (key == "particles") {
            config.particles = parse_unsigned(key, value);
        } else if (key == "seed") {
            config.seed = parse_unsigned(key, value);
        } else if (key == "solver_tol") {
            config.solver_tol = parse_real(key, value);
        } else if (key == "levels") {
            config.levels = parse_unsigned(key, value);
        } else if (key == "fine_tau") {
            config.fine_tau = parse_real(key, value);
        } else if (key == "fine_mesh") {
            config.fine_mesh = parse_unsigned(key, value);
        } else if (key == "plot") {
            if (value != "true" && value != "false") {
                fail(key, "expected true or false");
            }
            config.plot = value == "true";
        } else {
            throw ConfigError("config: unknown key '" + key + "'");
        }
    }
    for (const char* required : {"hurst", "lambda", "horizon"}) {
        if (!seen[required]) {
            fail(required, "missing");
        }
    }
    if (mode_override) {
        config.mode = *mode_override;
    }
    validate(config);
    return config;
}

Config load_config(const fs::path& path, std::optional<Mode> mode_override)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("config: cannot open " + path.string());
    }
    return parse_config(in, mode_override);
}

void validate(const Config& config)
{
    if (config.hurst.empty()) {
        fail("hurst", "missing");
    }
    for (double h : config.hurst) {
        if (!(h > 0.0 && h < 1.0) || h == 0.5) {
            fail("hurst", "must lie in (0,1) and differ from 0.5");
        }
    }
    if (config.mode != Mode::Steps && config.hurst.size() != 1) {
        fail("hurst", "a list is only accepted in steps mode");
    }
    if (!(config.lambda > 0.0)) {
        fail("lambda", "must be positive");
    }
    if (!(config.tau > 0.0)) {
        fail("tau", "must be positive");
    }
    if (!(config.horizon > 0.0)) {
        fail("horizon", "must be positive");
    }
    const Rectangle& d = config.domain;
    if (!(d.x_max > d.x_min) || !(d.y_max > d.y_min)) {
        fail("domain", "needs min < max on both axes");
    }
    if (config.mesh_m < 1) {
        fail("mesh_m", "must be at least 1");
    }
    if (config.mesh_n < 1) {
        fail("mesh_n", "must be at least 1");
    }
    for (double t : config.snapshot_times) {
        if (!(t >= 0.0) || t > config.horizon) {
            fail("snapshot_times", "each time must lie in [0, horizon]");
        }
    }
    if (!(config.solver_tol > 0.0) || config.solver_tol >= 1.0) {
        fail("solver_tol", "must lie in (0,1)");
    }
    if (config.mode == Mode::Converge && config.levels < 2) {
        fail("levels", "need at least 2 refinement levels");
    }
    if (config.fine_tau && !(*config.fine_tau > 0.0)) {
        fail("fine_tau", "must be positive");
    }
    if (config.fine_mesh && *config.fine_mesh < 1) {
        fail("fine_mesh", "must be at least 1");
    }
}

std::string canonical(const Config& config)
{
    std::ostringstream out;
    const Rectangle& d = config.domain;
    out << "hurst=" << format_list(config.hurst) << '\n'
        << "lambda=" << format_real(config.lambda) << '\n'
        << "tau=" << format_real(config.tau) << '\n'
        << "horizon=" << format_real(config.horizon) << '\n'
        << "domain=" << format_list({d.x_min, d.x_max, d.y_min, d.y_max}) << '\n'
        << "mesh_m=" << config.mesh_m << '\n'
        << "mesh_n=" << config.mesh_n << '\n'
        << "mode=" << mode_name(config.mode) << '\n'
        << "snapshot_times=" << format_list(config.snapshot_times) << '\n'
        << "particles=" << config.particles << '\n'
        << "seed=" << config.seed << '\n'
        << "solver_tol=" << format_real(config.solver_tol) << '\n'
        << "levels=" << config.levels << '\n'
        << "fine_tau=" << (config.fine_tau ? format_real(*config.fine_tau) : "default") << '\n'
        << "fine_mesh=" << (config.fine_mesh ? std::to_string(*config.fine_mesh) : "default") << '\n'
        << "plot=" << (config.plot ? "true" : "false") << '\n';
    return out.str();
}

std::string config_hash(const Config& config)
{
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical(config)) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << hash;
    return out.str();
}

namespace {

fs::path run_directory(const Config& config, const fs::path& out_root)
{
    fs::path dir = out_root / ("run-" + config_hash(config));
    fs::create_directories(dir);
    return dir;
}

std::ofstream open_output(const fs::path& path)
{
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    return out;
}

void write_manifest(const fs::path& dir, const Config& config, const std::map<std::string, std::string>& extra)
{
    std::ofstream out = open_output(dir / "manifest.txt");
    out << canonical(config);
    for (const auto& [key, value] : extra) {
        out << key << '=' << value << '\n';
    }
}

void write_plot_script(const fs::path& dir, const Config& config)
{
    std::ofstream out = open_output(dir / "plot.gp");
    out << "set datafile separator ','\n"
        << "set logscale xy\n"
        << "set xlabel 't'\n"
        << "set ylabel 'MSD'\n"
        << "set key top left\n"
        << "plot 'msd.csv' using 1:5 every ::1 with lines title 'H=" << short_label(config.hurst.front())
        << ", lambda=" << short_label(config.lambda) << "'\n";
    for (double t : config.snapshot_times) {
        if (config.particles > 0) {
            out << "pause -1\nunset logscale\nset xlabel 'x'\nset ylabel 'y'\n"
                << "plot 'particles_t" << short_label(t) << ".csv' using 1:2 every ::1 with dots title 't="
                << short_label(t) << "'\n";
        }
    }
}

} // namespace

RunResult run_experiment(const Config& config, const fs::path& out_root)
{
    validate(config);
    const auto started = std::chrono::steady_clock::now();
    const ModelParams params(config.hurst.front(), config.lambda);
    const SpatialMesh mesh(config.domain, config.mesh_m, config.mesh_n);
    const TimeGrid grid = grid_for(params, config.tau, config.horizon);

    RunResult result;
    result.directory = run_directory(config, out_root);
    result.law = grid.law();
    result.splice_index = grid.splice_index();

    std::vector<double> pending = config.snapshot_times;
    std::sort(pending.begin(), pending.end());
    std::size_t next_snapshot = 0;

    auto sink = [&](std::size_t, double t, const Field& field) {
        result.series.push(t, moments(field, mesh));
        while (next_snapshot < pending.size() && t >= pending[next_snapshot]) {
            const double requested = pending[next_snapshot++];
            const std::string label = short_label(requested);
            std::ofstream snap = open_output(result.directory / ("snapshot_t" + label + ".csv"));
            write_snapshot_csv(snap, mesh, field);
            if (config.particles > 0) {
                std::ofstream cloud = open_output(result.directory / ("particles_t" + label + ".csv"));
                write_particles_csv(cloud, sample_particles(field, mesh, config.particles, config.seed));
            }
        }
    };

    SolverOptions options;
    options.tolerance = config.solver_tol;
    run(params, mesh, grid, initial_condition(mesh, gaussian_initial_data), sink, options, &result.stats);

    result.series.plateau_estimate = detect_plateau(result.series);
    {
        std::ofstream out = open_output(result.directory / "msd.csv");
        write_msd_csv(out, result.series);
    }
    if (config.plot) {
        write_plot_script(result.directory, config);
    }
    result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    const std::optional<double> onset = plateau_onset(result.series);
    write_manifest(result.directory, config,
                   {{"grid_law", std::string(to_string(grid.law()))},
                    {"splice_index", grid.splice_index() ? std::to_string(*grid.splice_index()) : "none"},
                    {"time_steps", std::to_string(grid.steps())},
                    {"final_time", format_real(grid.nodes().back())},
                    {"solver_iterations", std::to_string(result.stats.solver_iterations)},
                    {"identity_steps", std::to_string(result.stats.identity_steps)},
                    {"plateau_msd", result.series.plateau_estimate ? format_real(*result.series.plateau_estimate)
                                                                   : "none"},
                    {"plateau_onset", onset ? format_real(*onset) : "none"},
                    {"wall_time_seconds", format_real(result.wall_seconds)}});
    return result;
}

double oracle_error(const ModelParams& params, const SpatialMesh& mesh, double tau, double horizon,
                    const SolverOptions& options)
{
    constexpr double sigma2_x0 = 0.5;
    constexpr double sigma2_y0 = 0.25;
    const TimeGrid grid = grid_for(params, tau, horizon);
    const Field numeric = run(params, mesh, grid, gaussian_density(mesh, sigma2_x0, sigma2_y0), {}, options);
    const Field exact = exact_field(params, mesh, sigma2_x0, sigma2_y0, grid.nodes().back());
    Field difference(mesh);
    std::span<double> diff = difference.values();
    for (std::size_t i = 0; i < diff.size(); ++i) {
        diff[i] = numeric.flatten()[i] - exact.flatten()[i];
    }
    return l2_norm(difference, mesh);
}

namespace {

double fitted_slope(const std::vector<double>& steps, const std::vector<double>& errors)
{
    const double count = static_cast<double>(steps.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < steps.size(); ++i) {
        const double x = std::log(steps[i]);
        const double y = std::log(errors[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (count * sxy - sx * sy) / (count * sxx - sx * sx);
}

} // namespace

ConvergenceTable convergence_report(const Config& config)
{
    validate(config);
    const ModelParams params(config.hurst.front(), config.lambda);
    SolverOptions options;
    options.tolerance = config.solver_tol;
    const double fine_tau = config.fine_tau.value_or(config.tau / 64.0);
    const std::size_t fine_mesh = config.fine_mesh.value_or(8 * (config.mesh_m + 1) - 1);

    ConvergenceTable table;
    std::vector<double> hs, space_errors;
    for (std::size_t level = 0; level < config.levels; ++level) {
        const std::size_t scale = std::size_t{1} << level;
        const SpatialMesh mesh(config.domain, (config.mesh_m + 1) * scale - 1, (config.mesh_n + 1) * scale - 1);
        const double error = oracle_error(params, mesh, fine_tau, config.horizon, options);
        const double order = level ? std::log2(space_errors.back() / error) : std::numeric_limits<double>::quiet_NaN();
        table.rows.push_back({"space", level, mesh.h(), fine_tau, error, order});
        hs.push_back(mesh.h());
        space_errors.push_back(error);
    }
    const SpatialMesh fine(config.domain, fine_mesh, fine_mesh);
    std::vector<double> taus, time_errors;
    for (std::size_t level = 0; level < config.levels; ++level) {
        const double tau = config.tau / static_cast<double>(std::size_t{1} << level);
        const double error = oracle_error(params, fine, tau, config.horizon, options);
        const double order = level ? std::log2(time_errors.back() / error) : std::numeric_limits<double>::quiet_NaN();
        table.rows.push_back({"time", level, fine.h(), tau, error, order});
        taus.push_back(tau);
        time_errors.push_back(error);
    }
    table.spatial_order = fitted_slope(hs, space_errors);
    table.temporal_order = fitted_slope(taus, time_errors);
    return table;
}

void write_convergence_csv(std::ostream& out, const ConvergenceTable& table)
{
    out << "axis,level,h,tau,l2_error,observed_order\n";
    for (const ConvergenceRow& row : table.rows) {
        out << row.axis << ',' << row.level << ',' << format_real(row.h) << ',' << format_real(row.tau) << ','
            << format_real(row.error) << ',' << (std::isnan(row.order) ? "nan" : format_real(row.order)) << '\n';
    }
    out << "fit,space,,,," << format_real(table.spatial_order) << '\n';
    out << "fit,time,,,," << format_real(table.temporal_order) << '\n';
}

std::vector<StepCountRow> step_counts(const Config& config)
{
    validate(config);
    std::vector<StepCountRow> rows;
    for (double hurst : config.hurst) {
        const ModelParams params(hurst, config.lambda);
        for (int j = 1; j <= 10; ++j) {
            const double horizon = config.horizon * j / 10.0;
            if (config.tau > horizon) {
                continue;
            }
            try {
                const TimeGrid graded = grid_for(params, config.tau, horizon);
                const TimeGrid flat = uniform(config.tau, horizon);
                rows.push_back({hurst, horizon, graded.law(), graded.steps(), flat.steps()});
            } catch (const std::invalid_argument&) {
                // horizon too short for a graded grid at this tau
            }
        }
    }
    return rows;
}

void write_step_counts_csv(std::ostream& out, const std::vector<StepCountRow>& rows)
{
    out << "hurst,horizon,law,nonuniform_steps,uniform_steps\n";
    for (const StepCountRow& row : rows) {
        out << format_real(row.hurst) << ',' << format_real(row.horizon) << ',' << to_string(row.law) << ',' << row.nonuniform_steps << ','
            << row.uniform_steps << '\n';
    }
}

fs::path execute(const Config& config, const fs::path& out_root)
{
    switch (config.mode) {
    case Mode::Solve:
        return run_experiment(config, out_root).directory;
    case Mode::Steps: {
        validate(config);
        const fs::path dir = run_directory(config, out_root);
        std::ofstream out = open_output(dir / "steps.csv");
        write_step_counts_csv(out, step_counts(config));
        write_manifest(dir, config, {});
        return dir;
    }
    case Mode::Converge: {
        const auto started = std::chrono::steady_clock::now();
        const ConvergenceTable table = convergence_report(config);
        const fs::path dir = run_directory(config, out_root);
        std::ofstream out = open_output(dir / "converge.csv");
        write_convergence_csv(out, table);
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        write_manifest(dir, config,
                       {{"spatial_order", format_real(table.spatial_order)},
                        {"temporal_order", format_real(table.temporal_order)},
                        {"wall_time_seconds", format_real(seconds)}});
        return dir;
    }
    }
    throw ConfigError("config: key 'mode': unsupported");
}

std::vector<fs::path> sweep(const fs::path& directory, const fs::path& out_root)
{
    if (!fs::is_directory(directory)) {
        throw ConfigError("sweep: not a directory: " + directory.string());
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(directory)) {
        if (entry.is_regular_file() && entry.path().extension() == ".cfg") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) {
        throw ConfigError("sweep: no .cfg files in " + directory.string());
    }
    std::vector<Config> configs;
    for (const fs::path& file : files) {
        try {
            configs.push_back(load_config(file));
        } catch (const ConfigError& e) {
            throw ConfigError(file.filename().string() + ": " + e.what());
        }
    }
    std::vector<std::future<fs::path>> jobs;
    for (const Config& config : configs) {
        jobs.push_back(std::async(std::launch::async, [&config, &out_root] { return execute(config, out_root); }));
    }
    std::vector<fs::path> outputs;
    for (auto& job : jobs) {
        outputs.push_back(job.get());
    }
    return outputs;
}

} // namespace tfbm::experiment
