#include "tfbm/special_functions.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "tfbm/quadrature.hpp"

namespace tfbm {

namespace {

// Exponent at which exp(-y) underflows in double precision.
constexpr double kUnderflowExponent = 745.0;

void require_positive_argument(const char* what, double x)
{
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw std::domain_error(std::string(what) + ": argument must be positive and finite, got " +
                                std::to_string(x));
    }
}

} // namespace

double bessel_k_scaled(double nu, double x)
{
    require_positive_argument("bessel_k", x);
    if (!(std::abs(nu) <= 1.0)) {
        throw std::domain_error("bessel_k: order must satisfy |nu| <= 1, got " + std::to_string(nu));
    }
    const double order = std::abs(nu);
    // e^x K_nu(x) = \int cosh(nu v) exp(-x (cosh v - 1)) dv, with
    // cosh v - 1 = 2 sinh^2(v/2) to keep precision near v = 0.
    const double v_max = std::acosh(1.0 + kUnderflowExponent / x);
    auto integrand = [order, x](double v) {
        const double s = std::sinh(0.5 * v);
        return std::cosh(order * v) * std::exp(-2.0 * x * s * s);
    };
    quad::Options opt;
    opt.rel_tol = 1e-13;
    opt.initial_panels = 4;
    return quad::integrate(integrand, 0.0, v_max, opt);
}

double bessel_k(double nu, double x)
{
    const double scaled = bessel_k_scaled(nu, x);
    if (x > kUnderflowExponent) {
        return 0.0;
    }
    return scaled * std::exp(-x);
}

double gamma(double s)
{
    if (!(s > 0.0) || !std::isfinite(s)) {
        throw std::domain_error("gamma: argument must be positive, got " + std::to_string(s));
    }
    return std::tgamma(s);
}

double gamma_upper_incomplete(double s, double x)
{
    if (!(s > 0.0) || !std::isfinite(s)) {
        throw std::domain_error("gamma_upper_incomplete: s must be positive, got " + std::to_string(s));
    }
    if (!(x >= 0.0) || !std::isfinite(x)) {
        throw std::domain_error("gamma_upper_incomplete: x must be nonnegative, got " + std::to_string(x));
    }
    quad::Options opt;
    opt.rel_tol = 1e-13;

    double total = 0.0;
    double lower = x;
    if (x < 1.0) {
        // \int_x^1 z^{s-1} e^{-z} dz with z = u^{1/s}: (1/s) \int_{x^s}^1 exp(-u^{1/s}) du.
        const double inv_s = 1.0 / s;
        auto head = [inv_s](double u) { return std::exp(-std::pow(u, inv_s)); };
        total += inv_s * quad::integrate(head, std::pow(x, s), 1.0, opt);
        lower = 1.0;
    }
    // \int_lower^inf z^{s-1} e^{-z} dz = e^{-lower} \int_0^inf (lower + w)^{s-1} e^{-w} dw,
    // split past the peak of the integrand and cut where it is below 1e-17 of it.
    const double split = 2.0 + 2.0 * s;
    const double w_max = split + 40.0 + 4.0 * s;
    auto tail = [lower, s](double w) { return std::pow(lower + w, s - 1.0) * std::exp(-w); };
    total += std::exp(-lower) * (quad::integrate(tail, 0.0, split, opt) + quad::integrate(tail, split, w_max, opt));
    return total;
}

KBounds scaled_k_bounds(const ModelParams& params, double hurst_eff, double t)
{
    if (!(hurst_eff > 0.0 && hurst_eff < 1.0)) {
        throw std::domain_error("scaled_k_bounds: effective Hurst index must lie in (0,1)");
    }
    require_positive_argument("scaled_k_bounds", t);
    const double lambda = params.lambda();
    const double prefactor = std::pow(2.0, hurst_eff - 1.0) / std::pow(lambda, hurst_eff);
    const double half = 0.5 * lambda * t;
    return {prefactor * std::exp(-half) * gamma_upper_incomplete(hurst_eff, half), prefactor * gamma(hurst_eff)};
}

namespace {

double diffusion_prefactor(const ModelParams& params)
{
    const double hurst = params.hurst();
    return gamma(hurst + 0.5) / (std::sqrt(std::numbers::pi) * std::pow(2.0 * params.lambda(), hurst));
}

} // namespace

double diffusion_coefficient(const ModelParams& params, double t)
{
    require_positive_argument("diffusion_coefficient", t);
    const double lambda = params.lambda();
    const double hurst = params.hurst();
    const double k = bessel_k(hurst - 1.0, lambda * t);
    if (k == 0.0) {
        return 0.0;
    }
    return diffusion_prefactor(params) * lambda * std::pow(t, hurst) * k;
}

double diffusion_small_time_constant(const ModelParams& params)
{
    const double hurst = params.hurst();
    const double lambda = params.lambda();
    // lim t^{1-2H} t^H K_{H-1}(lambda t) = 2^{-H} Gamma(1-H) / lambda^{1-H}
    return diffusion_prefactor(params) * lambda * std::pow(2.0, -hurst) * gamma(1.0 - hurst) /
           std::pow(lambda, 1.0 - hurst);
}

double t_max_formula(const ModelParams& params)
{
    const double hurst = params.hurst();
    if (!(hurst > 0.5)) {
        throw std::domain_error("t_max_formula: requires 0.5 < H < 1");
    }
    return (0.7442 * hurst - 0.148 * std::pow(hurst, -1.3075)) / params.lambda();
}

} // namespace tfbm
