#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace tfbm {

/// Raised when an adaptive quadrature fails to reach its requested tolerance.
class QuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when the linear solver fails to converge. For the SPD systems the
/// schemes assemble this indicates an assembly bug, not a hard problem.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Physical parameters of the tempered fractional Brownian motion.
///
/// `hurst` is the Hurst index H in (0, 1), H != 0.5; `lambda` is the tempering
/// rate (inverse time), strictly positive.
class ModelParams {
public:
    ModelParams(double hurst, double lambda);

    double hurst() const noexcept { return hurst_; }
    double lambda() const noexcept { return lambda_; }

    /// Case I covers 0 < H < 0.5 (singular coefficient at t = 0).
    bool subdiffusive() const noexcept { return hurst_ < 0.5; }

private:
    double hurst_;
    double lambda_;
};

inline ModelParams::ModelParams(double hurst, double lambda) : hurst_(hurst), lambda_(lambda)
{
    if (!(hurst > 0.0 && hurst < 1.0) || hurst == 0.5) {
        throw std::domain_error("ModelParams: Hurst index must lie in (0,1) and differ from 0.5, got " +
                                std::to_string(hurst));
    }
    if (!(lambda > 0.0) || lambda == std::numeric_limits<double>::infinity()) {
        throw std::domain_error("ModelParams: tempering rate must be positive and finite, got " +
                                std::to_string(lambda));
    }
}

} // namespace tfbm
