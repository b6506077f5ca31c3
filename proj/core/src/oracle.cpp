#include "tfbm/oracle.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "tfbm/quadrature.hpp"
#include "tfbm/scheme.hpp"
#include "tfbm/special_functions.hpp"

namespace tfbm {

namespace {

// lambda t beyond which D(t) underflows.
constexpr double kUnderflowScale = 1500.0;

// \int_a^b D(s) ds. Below 1/lambda it is done in w = s^{2H}, where
// D ds = a(w) dw with a bounded; above, on doubling subintervals in s.
double integrate_diffusion(const ModelParams& params, double a, double b, double tol)
{
    if (!(b > a)) {
        return 0.0;
    }
    const double hurst = params.hurst();
    const double lambda = params.lambda();
    quad::Options opt;
    opt.rel_tol = tol;
    opt.abs_tol = 1e-300;

    double total = 0.0;
    const double knee = 1.0 / lambda;
    if (a < knee) {
        const double upper = std::min(b, knee);
        const double theta = 2.0 * hurst;
        auto transformed = [&params, theta](double w) {
            const double s = std::pow(w, 1.0 / theta);
            // coefficient_case1 with unit step is D(s) ds/dw.
            return coefficient_case1(params, s, 1.0);
        };
        // a(w) carries a w^{(1-H)/H} term, so panels are graded towards w = 0;
        // below 1e-13 of the range the bounded integrand is taken as constant.
        opt.initial_panels = 1;
        const double w_low = std::pow(a, theta);
        double w_high = std::pow(upper, theta);
        const double w_floor = 1e-13 * w_high;
        while (w_high > w_low) {
            const double w_mid = std::max(w_low, 0.5 * w_high);
            if (w_mid < w_floor) {
                total += transformed(w_high) * (w_high - w_low);
                break;
            }
            total += quad::integrate(transformed, w_mid, w_high, opt);
            w_high = w_mid;
        }
        opt.initial_panels = 4;
        a = upper;
    }
    auto plain = [&params](double s) { return diffusion_coefficient(params, s); };
    while (a < b) {
        const double upper = std::min(b, 2.0 * a);
        total += quad::integrate(plain, a, upper, opt);
        a = upper;
    }
    return total;
}

} // namespace

double variance_growth(const ModelParams& params, double t, double tol)
{
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw std::domain_error("variance_growth: time must be nonnegative and finite");
    }
    const double cap = kUnderflowScale / params.lambda();
    return 2.0 * integrate_diffusion(params, 0.0, std::min(t, cap), tol);
}

std::vector<double> variance_growth_series(const ModelParams& params, const std::vector<double>& times, double tol)
{
    const double cap = kUnderflowScale / params.lambda();
    std::vector<double> out;
    out.reserve(times.size());
    double previous = 0.0;
    double accumulated = 0.0;
    for (double t : times) {
        if (!(t >= previous)) {
            throw std::invalid_argument("variance_growth_series: times must be nonnegative and nondecreasing");
        }
        accumulated += 2.0 * integrate_diffusion(params, std::min(previous, cap), std::min(t, cap), tol);
        out.push_back(accumulated);
        previous = t;
    }
    return out;
}

VarianceGrowth::VarianceGrowth(const ModelParams& params, double tol)
    : params_(params), tol_(tol), total_(variance_growth(params, kUnderflowScale / params.lambda(), tol))
{
}

Field gaussian_density(const SpatialMesh& mesh, double sigma2_x, double sigma2_y)
{
    if (!(sigma2_x > 0.0) || !(sigma2_y > 0.0)) {
        throw std::invalid_argument("gaussian_density: variances must be positive");
    }
    const double norm = 1.0 / (2.0 * std::numbers::pi * std::sqrt(sigma2_x * sigma2_y));
    return initial_condition(mesh, [=](double x, double y) {
        return norm * std::exp(-0.5 * x * x / sigma2_x - 0.5 * y * y / sigma2_y);
    });
}

Field exact_field(const ModelParams& params, const SpatialMesh& mesh, double sigma2_x0, double sigma2_y0, double t)
{
    const double growth = variance_growth(params, t);
    return gaussian_density(mesh, sigma2_x0 + growth, sigma2_y0 + growth);
}

double exact_msd(const ModelParams& params, double sigma2_x0, double sigma2_y0, double t)
{
    return sigma2_x0 + sigma2_y0 + 2.0 * variance_growth(params, t);
}

} // namespace tfbm
