#include "tfbm/time_grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "tfbm/special_functions.hpp"

namespace tfbm {

namespace {

// ceil() that treats values within round-off of an integer as that integer,
// so that e.g. 200 / 0.05 gives 4000 rather than 4001.
std::size_t step_count(double x)
{
    const double nearest = std::round(x);
    if (std::abs(x - nearest) <= 1e-12 * std::max(1.0, std::abs(x))) {
        return static_cast<std::size_t>(nearest);
    }
    return static_cast<std::size_t>(std::ceil(x));
}

void require_positive(const char* what, double value)
{
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw std::invalid_argument(std::string(what) + " must be positive and finite, got " + std::to_string(value));
    }
}

std::vector<double> power_law_nodes(double tau, double exponent, std::size_t first, std::size_t last)
{
    std::vector<double> nodes;
    nodes.reserve(last - first + 1);
    for (std::size_t k = first; k <= last; ++k) {
        nodes.push_back(std::pow(tau * static_cast<double>(k), exponent));
    }
    return nodes;
}

} // namespace

std::string_view to_string(GridLaw law)
{
    switch (law) {
    case GridLaw::Uniform:
        return "uniform";
    case GridLaw::GradedCaseI:
        return "graded";
    case GridLaw::SplicedCaseII:
        return "spliced";
    }
    return "unknown";
}

double TimeGrid::transform_exponent(std::size_t k_next) const
{
    if (k_next == 0 || k_next >= nodes_.size()) {
        throw std::out_of_range("TimeGrid::transform_exponent: step index out of range");
    }
    switch (law_) {
    case GridLaw::Uniform:
        return 1.0;
    case GridLaw::GradedCaseI:
        return 2.0 * hurst_;
    case GridLaw::SplicedCaseII:
        return k_next <= *splice_index_ ? 2.0 * hurst_ : hurst_;
    }
    return 1.0;
}

TimeGrid uniform(double tau_t, double horizon)
{
    require_positive("uniform: tau_t", tau_t);
    require_positive("uniform: horizon", horizon);
    if (tau_t > horizon) {
        throw std::invalid_argument("uniform: tau_t must not exceed the horizon");
    }
    TimeGrid grid;
    const std::size_t count = step_count(horizon / tau_t);
    grid.nodes_.reserve(count + 1);
    for (std::size_t k = 0; k <= count; ++k) {
        grid.nodes_.push_back(static_cast<double>(k) * tau_t);
    }
    grid.law_ = GridLaw::Uniform;
    grid.tau_ = tau_t;
    grid.horizon_ = horizon;
    return grid;
}

TimeGrid graded_case1(const ModelParams& params, double tau, double horizon)
{
    require_positive("graded_case1: tau", tau);
    require_positive("graded_case1: horizon", horizon);
    const double hurst = params.hurst();
    if (!(hurst < 0.5)) {
        throw std::invalid_argument("graded_case1: requires H < 0.5");
    }
    const double span = std::pow(horizon, 2.0 * hurst);
    if (tau >= span) {
        throw std::invalid_argument("graded_case1: tau must be smaller than T^{2H} = " + std::to_string(span));
    }
    TimeGrid grid;
    grid.nodes_ = power_law_nodes(tau, 1.0 / (2.0 * hurst), 0, step_count(span / tau));
    grid.law_ = GridLaw::GradedCaseI;
    grid.tau_ = tau;
    grid.horizon_ = horizon;
    grid.hurst_ = hurst;
    return grid;
}

TimeGrid spliced_case2(const ModelParams& params, double tau, double horizon)
{
    require_positive("spliced_case2: tau", tau);
    require_positive("spliced_case2: horizon", horizon);
    const double hurst = params.hurst();
    if (!(hurst > 0.5)) {
        throw std::invalid_argument("spliced_case2: requires H > 0.5");
    }
    const double splice_time = std::min(t_max_formula(params), horizon);
    if (!(splice_time > 0.0)) {
        throw std::invalid_argument("spliced_case2: t_max formula is not positive for these parameters");
    }
    const std::size_t k1 = step_count(std::pow(splice_time, 2.0 * hurst) / tau);

    TimeGrid grid;
    grid.tau_ = tau;
    grid.horizon_ = horizon;
    grid.hurst_ = hurst;
    grid.nodes_ = power_law_nodes(tau, 1.0 / (2.0 * hurst), 0, k1);

    const double seam = grid.nodes_.back();
    if (seam >= horizon * (1.0 - 1e-12)) {
        grid.law_ = GridLaw::GradedCaseI;
        return grid;
    }

    const std::size_t k2 = step_count(std::pow(seam, hurst) / tau);
    const std::size_t k_end = std::max(k2 + 1, step_count(std::pow(horizon, hurst) / tau));
    const std::vector<double> tail = power_law_nodes(tau, 1.0 / hurst, k2 + 1, k_end);
    if (!(tail.front() > seam)) {
        throw std::invalid_argument("spliced_case2: degenerate splice, segment B does not advance past t_max");
    }
    grid.nodes_.insert(grid.nodes_.end(), tail.begin(), tail.end());
    grid.law_ = GridLaw::SplicedCaseII;
    grid.splice_index_ = k1;
    return grid;
}

TimeGrid grid_for(const ModelParams& params, double tau, double horizon)
{
    return params.subdiffusive() ? graded_case1(params, tau, horizon) : spliced_case2(params, tau, horizon);
}

} // namespace tfbm
