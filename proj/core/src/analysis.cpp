#include "tfbm/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>

namespace tfbm {

std::vector<double> normalize(const Field& field)
{
    const std::span<const double> values = field.flatten();
    double peak = 0.0;
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw std::domain_error("normalize: non-finite field value");
        }
        peak = std::max(peak, std::abs(v));
    }
    std::vector<double> pr(values.begin(), values.end());
    double total = 0.0;
    for (double& v : pr) {
        if (v < 0.0) {
            if (v < -1e-8 * peak) {
                throw std::domain_error("normalize: field has negative values");
            }
            v = 0.0;
        }
        total += v;
    }
    if (!(total > 0.0)) {
        throw std::domain_error("normalize: field has zero mass");
    }
    for (double& v : pr) {
        v /= total;
    }
    return pr;
}

Moments moments(const Field& field, const SpatialMesh& mesh)
{
    if (field.M() != mesh.M() || field.N() != mesh.N()) {
        throw std::invalid_argument("moments: field does not match the mesh");
    }
    const std::vector<double> pr = normalize(field);
    Moments result;
    for (double v : field.flatten()) {
        result.mass += v;
    }
    for (std::size_t n = 1; n <= mesh.N(); ++n) {
        const double y = mesh.y(n);
        for (std::size_t m = 1; m <= mesh.M(); ++m) {
            const double p = pr[mesh.flat_index(m, n)];
            result.mean_x += mesh.x(m) * p;
            result.mean_y += y * p;
        }
    }
    for (std::size_t n = 1; n <= mesh.N(); ++n) {
        const double y = mesh.y(n);
        const double dy = y - result.mean_y;
        for (std::size_t m = 1; m <= mesh.M(); ++m) {
            const double p = pr[mesh.flat_index(m, n)];
            const double x = mesh.x(m);
            const double dx = x - result.mean_x;
            result.msd += (dx * dx + dy * dy) * p;
            result.uncentered += (x * x + y * y) * p;
        }
    }
    return result;
}

void MsdSeries::push(double t, const Moments& m)
{
    times.push_back(t);
    mass.push_back(m.mass);
    mean_x.push_back(m.mean_x);
    mean_y.push_back(m.mean_y);
    msd.push_back(m.msd);
    uncentered.push_back(m.uncentered);
}

void write_msd_csv(std::ostream& out, const MsdSeries& series)
{
    out << "t,mass,mean_x,mean_y,msd\n" << std::setprecision(17);
    for (std::size_t i = 0; i < series.size(); ++i) {
        out << series.times[i] << ',' << series.mass[i] << ',' << series.mean_x[i] << ',' << series.mean_y[i] << ','
            << series.msd[i] << '\n';
    }
}

std::optional<double> detect_plateau(const MsdSeries& series, double window, double rel_tol)
{
    if (series.size() < 2 || !(window > 0.0) || window > 0.5) {
        return std::nullopt;
    }
    const double start = series.times.front();
    const double end = series.times.back();
    const double cutoff = end - window * (end - start);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (series.times[i] < cutoff) {
            continue;
        }
        lo = std::min(lo, series.msd[i]);
        hi = std::max(hi, series.msd[i]);
        sum += series.msd[i];
        ++count;
    }
    if (count < 2) {
        return std::nullopt;
    }
    const double mean = sum / static_cast<double>(count);
    if (!(mean > 0.0) || (hi - lo) > rel_tol * mean) {
        return std::nullopt;
    }
    return mean;
}

std::optional<double> plateau_onset(const MsdSeries& series, double rel_tol)
{
    if (series.size() == 0) {
        return std::nullopt;
    }
    const double final_value = series.msd.back();
    std::optional<double> onset;
    for (std::size_t i = series.size(); i-- > 0;) {
        if (std::abs(series.msd[i] - final_value) > rel_tol * std::abs(final_value)) {
            break;
        }
        onset = series.times[i];
    }
    return onset;
}

std::vector<Particle> sample_particles(const Field& field, const SpatialMesh& mesh, std::size_t count,
                                       std::uint64_t seed)
{
    if (count == 0) {
        throw std::invalid_argument("sample_particles: count must be positive");
    }
    const std::vector<double> pr = normalize(field);
    std::vector<double> cdf(pr.size());
    std::partial_sum(pr.begin(), pr.end(), cdf.begin());

    std::mt19937_64 engine(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Particle> particles;
    particles.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double u = unit(engine) * cdf.back();
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        std::size_t index = static_cast<std::size_t>(it - cdf.begin());
        index = std::min(index, cdf.size() - 1);
        const std::size_t m = index % mesh.M() + 1;
        const std::size_t n = index / mesh.M() + 1;
        const double jitter_x = (unit(engine) - 0.5) * mesh.h();
        const double jitter_y = (unit(engine) - 0.5) * mesh.l();
        particles.push_back({mesh.x(m) + jitter_x, mesh.y(n) + jitter_y});
    }
    return particles;
}

void write_particles_csv(std::ostream& out, const std::vector<Particle>& particles)
{
    out << "x,y\n" << std::setprecision(17);
    for (const Particle& p : particles) {
        out << p.x << ',' << p.y << '\n';
    }
}

} // namespace tfbm
