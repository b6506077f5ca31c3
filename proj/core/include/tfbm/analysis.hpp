#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "tfbm/mesh.hpp"

namespace tfbm {

/// Probability-weighted moments of one field.
struct Moments {
    double mass = 0.0;       ///< un-normalized sum of u over the nodes
    double mean_x = 0.0;
    double mean_y = 0.0;
    double msd = 0.0;        ///< <(x - <x>)^2 + (y - <y>)^2>
    double uncentered = 0.0; ///< <x^2 + y^2>
};

/// Pr = u / sum(u) in flattened order. Round-off negatives no larger than
/// 1e-8 of the peak value are zeroed; anything more negative throws, as does
/// a field with no positive mass.
std::vector<double> normalize(const Field& field);

Moments moments(const Field& field, const SpatialMesh& mesh);

/// Time series of moments along a run.
struct MsdSeries {
    std::vector<double> times;
    std::vector<double> mass;
    std::vector<double> mean_x;
    std::vector<double> mean_y;
    std::vector<double> msd;
    std::vector<double> uncentered;
    std::optional<double> plateau_estimate;

    void push(double t, const Moments& m);
    std::size_t size() const noexcept { return times.size(); }
};

/// CSV with header `t,mass,mean_x,mean_y,msd`, 17 significant digits.
void write_msd_csv(std::ostream& out, const MsdSeries& series);

/// Mean MSD over the final `window` fraction of the covered time span when
/// its relative spread (max - min) / mean stays within `rel_tol`.
std::optional<double> detect_plateau(const MsdSeries& series, double window = 0.5, double rel_tol = 0.02);

/// First time at which the MSD comes within `rel_tol` of its final value and
/// stays there.
std::optional<double> plateau_onset(const MsdSeries& series, double rel_tol = 0.02);

struct Particle {
    double x;
    double y;
};

/// Draws `count` positions from the discrete distribution of `field` by
/// inverse CDF over the flattened probabilities, jittered uniformly inside
/// the h x l cell around the chosen node. Deterministic for a fixed seed.
std::vector<Particle> sample_particles(const Field& field, const SpatialMesh& mesh, std::size_t count,
                                       std::uint64_t seed);

void write_particles_csv(std::ostream& out, const std::vector<Particle>& particles);

} // namespace tfbm
