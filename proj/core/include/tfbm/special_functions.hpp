#pragma once

#include "tfbm/params.hpp"

namespace tfbm {

/// Modified Bessel function of the second kind K_nu(x) for real order
/// |nu| <= 1 and x > 0.
///
/// Evaluated from the integral representation
///   K_nu(x) = 1/2 \int_0^inf z^{nu-1} exp(-x (z + 1/z) / 2) dz
/// after z = e^v, i.e. \int_0^inf cosh(nu v) exp(-x cosh v) dv. The order
/// enters only through |nu|, so K_nu == K_{-nu} holds bit for bit.
/// Returns 0 once the result underflows (x beyond ~745).
double bessel_k(double nu, double x);

/// exp(x) * K_nu(x); finite for all x > 0.
double bessel_k_scaled(double nu, double x);

/// Gamma(s), s > 0.
double gamma(double s);

/// Upper incomplete gamma function Gamma(s, x) = \int_x^inf z^{s-1} e^{-z} dz.
double gamma_upper_incomplete(double s, double x);

struct KBounds {
    double lower;
    double upper;
};

/// Bracket for t^H K_H(lambda t) at H = `hurst_eff`, using lambda from
/// `params`:
///   2^{H-1} e^{-lambda t/2} Gamma(H, lambda t/2) / lambda^H
///     <= t^H K_H(lambda t) <= 2^{H-1} Gamma(H) / lambda^H.
KBounds scaled_k_bounds(const ModelParams& params, double hurst_eff, double t);

/// Time-dependent diffusion coefficient of the Fokker-Planck equation,
///   D(t) = Gamma(H+1/2) / (sqrt(pi) (2 lambda)^H) * lambda t^H K_{H-1}(lambda t).
/// Zero once K underflows.
double diffusion_coefficient(const ModelParams& params, double t);

/// Limit of t^{1-2H} D(t) as t -> 0, valid for any H (finite for H < 0.5
/// where D itself diverges).
double diffusion_small_time_constant(const ModelParams& params);

/// Fitted location of the maximum of lambda^{1-H} t^H K_{H-1}(lambda t) for
/// 0.5 < H < 1: (0.7442 H - 0.148 H^{-1.3075}) / lambda. Not clamped.
double t_max_formula(const ModelParams& params);

} // namespace tfbm
