#pragma once

#include <vector>

#include "tfbm/mesh.hpp"
#include "tfbm/params.hpp"

namespace tfbm {

/// Per-axis variance growth 2 \int_0^t D(s) ds of the separable Gaussian
/// solution. The integrable s^{2H-1} endpoint behaviour is removed by the
/// substitution w = s^{2H}.
double variance_growth(const ModelParams& params, double t, double tol = 1e-10);

/// variance_growth evaluated at each of the nondecreasing `times`, summing
/// integrals over consecutive intervals.
std::vector<double> variance_growth_series(const ModelParams& params, const std::vector<double>& times,
                                           double tol = 1e-10);

/// Cumulative variance growth with its infinite-horizon limit.
class VarianceGrowth {
public:
    explicit VarianceGrowth(const ModelParams& params, double tol = 1e-10);

    double operator()(double t) const { return variance_growth(params_, t, tol_); }
    /// 2 \int_0^inf D(s) ds, integrated up to lambda t = 1500 where D underflows.
    double total() const noexcept { return total_; }
    const ModelParams& params() const noexcept { return params_; }

private:
    ModelParams params_;
    double tol_;
    double total_;
};

/// Bivariate Gaussian density (2 pi sigma_x sigma_y)^{-1} exp(-x^2/2sigma_x^2 - y^2/2sigma_y^2)
/// sampled on the interior nodes.
Field gaussian_density(const SpatialMesh& mesh, double sigma2_x, double sigma2_y);

/// Exact solution for Gaussian initial data with variances sigma2_x0,
/// sigma2_y0: each variance grows by variance_growth(t).
Field exact_field(const ModelParams& params, const SpatialMesh& mesh, double sigma2_x0, double sigma2_y0, double t);

/// Exact centered MSD at time t: sigma2_x0 + sigma2_y0 + 2 variance_growth(t).
double exact_msd(const ModelParams& params, double sigma2_x0, double sigma2_y0, double t);

} // namespace tfbm
