#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>

#include "tfbm/params.hpp"

namespace tfbm::quad {

/// Fixed-order Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    static constexpr std::size_t order = 20;
    std::array<double, order> nodes;
    std::array<double, order> weights;
};

const GaussRule& gauss_legendre_rule();

struct Options {
    double rel_tol = 1e-12;
    double abs_tol = 0.0;
    std::size_t initial_panels = 4;
    std::size_t max_panels = std::size_t{1} << 14;
};

/// Composite Gauss-Legendre on [a, b] with the panel count doubled until two
/// successive refinements agree to `rel_tol`. At least two refinements are
/// made so that a coarse rule cannot agree with itself by accident.
template <class F>
double integrate(F&& f, double a, double b, const Options& opt = {})
{
    if (a == b) {
        return 0.0;
    }
    const GaussRule& rule = gauss_legendre_rule();

    auto composite = [&](std::size_t panels) {
        const double width = (b - a) / static_cast<double>(panels);
        const double half = 0.5 * width;
        double total = 0.0;
        for (std::size_t p = 0; p < panels; ++p) {
            const double mid = a + (static_cast<double>(p) + 0.5) * width;
            double panel = 0.0;
            for (std::size_t i = 0; i < GaussRule::order; ++i) {
                panel += rule.weights[i] * f(mid + half * rule.nodes[i]);
            }
            total += half * panel;
        }
        return total;
    };

    std::size_t panels = opt.initial_panels;
    double previous = composite(panels);
    int refinements = 0;
    while (panels < opt.max_panels) {
        panels *= 2;
        const double current = composite(panels);
        ++refinements;
        if (!std::isfinite(current)) {
            throw QuadratureError("integrate: non-finite integrand value");
        }
        if (refinements >= 2 &&
            std::abs(current - previous) <= opt.rel_tol * std::abs(current) + opt.abs_tol) {
            return current;
        }
        previous = current;
    }
    throw QuadratureError("integrate: no convergence within panel budget");
}

} // namespace tfbm::quad
