#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "tfbm/params.hpp"

namespace tfbm {

enum class GridLaw {
    Uniform,       ///< t_k = k tau_t
    GradedCaseI,   ///< t_k = (tau k)^{1/(2H)}
    SplicedCaseII, ///< (tau k)^{1/(2H)} up to t_max, then (tau k)^{1/H}
};

std::string_view to_string(GridLaw law);

/// Immutable, strictly increasing time mesh starting at t = 0. The last node
/// covers the horizon and may overshoot it by at most one step.
class TimeGrid {
public:
    const std::vector<double>& nodes() const noexcept { return nodes_; }
    double node(std::size_t k) const { return nodes_.at(k); }
    std::size_t steps() const noexcept { return nodes_.size() - 1; }
    GridLaw law() const noexcept { return law_; }
    double tau() const noexcept { return tau_; }
    double horizon() const noexcept { return horizon_; }
    double hurst() const noexcept { return hurst_; }

    /// Index k1 of the last node of the (tau k)^{1/(2H)} segment. Only set
    /// for SplicedCaseII.
    std::optional<std::size_t> splice_index() const noexcept { return splice_index_; }

    /// Exponent theta of the transformed time t^theta in which the step
    /// ending at node `k_next` is uniform: 2H before the splice, H after it,
    /// 1 on a uniform grid.
    double transform_exponent(std::size_t k_next) const;

    friend TimeGrid uniform(double tau_t, double horizon);
    friend TimeGrid graded_case1(const ModelParams& params, double tau, double horizon);
    friend TimeGrid spliced_case2(const ModelParams& params, double tau, double horizon);

private:
    TimeGrid() = default;

    std::vector<double> nodes_;
    GridLaw law_ = GridLaw::Uniform;
    double tau_ = 0.0;
    double horizon_ = 0.0;
    double hurst_ = 0.5;
    std::optional<std::size_t> splice_index_;
};

/// Nodes k * tau_t, k = 0..ceil(T / tau_t).
TimeGrid uniform(double tau_t, double horizon);

/// Nodes (tau k)^{1/(2H)}, k = 0..ceil(T^{2H} / tau). Requires H < 0.5.
TimeGrid graded_case1(const ModelParams& params, double tau, double horizon);

/// Two-segment grid for 0.5 < H < 1, spliced at min(t_max, T). When the first
/// segment already reaches the horizon the grid degenerates to a single
/// (tau k)^{1/(2H)} segment and reports GradedCaseI.
TimeGrid spliced_case2(const ModelParams& params, double tau, double horizon);

/// Grid matching the parameter regime: graded for H < 0.5, spliced otherwise.
TimeGrid grid_for(const ModelParams& params, double tau, double horizon);

} // namespace tfbm
