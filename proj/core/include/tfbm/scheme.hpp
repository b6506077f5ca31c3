#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "tfbm/mesh.hpp"
#include "tfbm/params.hpp"
#include "tfbm/time_grid.hpp"

namespace tfbm {

/// The implicit five-point operator of one time step,
///   (1 + 2 r_x + 2 r_y) u_{m,n} - r_x (u_{m+1,n} + u_{m-1,n}) - r_y (u_{m,n+1} + u_{m,n-1}),
/// with r_x = r / h^2 and r_y = r / l^2. Applied matrix-free; the implied
/// matrix is symmetric and strictly diagonally dominant.
class StepOperator {
public:
    StepOperator(double r_x, double r_y, std::size_t interior_x, std::size_t interior_y);

    /// Operator for scheme coefficient r on `mesh`.
    static StepOperator from_coefficient(double r, const SpatialMesh& mesh);

    double r_x() const noexcept { return r_x_; }
    double r_y() const noexcept { return r_y_; }
    double diag() const noexcept { return 1.0 + 2.0 * r_x_ + 2.0 * r_y_; }
    std::size_t M() const noexcept { return m_; }
    std::size_t N() const noexcept { return n_; }
    bool is_identity() const noexcept { return r_x_ == 0.0 && r_y_ == 0.0; }

    /// out = C in, both flattened interior vectors of length M*N.
    void apply(std::span<const double> in, std::span<double> out) const;

private:
    double r_x_;
    double r_y_;
    std::size_t m_;
    std::size_t n_;
};

struct SolverOptions {
    double tolerance = 1e-10;
    /// 0 selects the default budget of 10 * M * N iterations.
    std::size_t max_iterations = 0;
};

struct StepStats {
    std::size_t iterations = 0;
    double relative_residual = 0.0;
};

/// Solves C u^{k+1} = u^k by Jacobi-preconditioned conjugate gradients,
/// starting from u^k. Stops once ||u^k - C u^{k+1}|| <= tolerance ||u^k||.
/// An identity operator returns the input unchanged.
Field step(const Field& field, const StepOperator& op, const SolverOptions& options = {}, StepStats* stats = nullptr);

/// Scheme coefficient in the t^{2H} variable,
///   r = Gamma(H+1/2) / (2H sqrt(pi) (2 lambda)^H) * lambda t^{1-H} K_{H-1}(lambda t) * dtheta,
/// where `dtheta` is the step in t^{2H}. Bounded as t -> 0.
double coefficient_case1(const ModelParams& params, double t_next, double dtheta);

/// Scheme coefficient in the t^H variable,
///   r1 = Gamma(H+1/2) / (H sqrt(pi) (2 lambda)^H) * lambda t K_{H-1}(lambda t) * dtheta.
double coefficient_case2(const ModelParams& params, double t_next, double dtheta);

/// Called after every step with (k, t_k, u^k); k = 0 is the initial state.
using StepSink = std::function<void(std::size_t, double, const Field&)>;

struct RunStats {
    std::size_t steps = 0;
    std::size_t identity_steps = 0;
    std::size_t solver_iterations = 0;
};

/// Advances `u0` through every node of `grid`. Steps ending at or before the
/// splice use coefficient_case1; later steps use coefficient_case2. Each r is
/// computed from the actual transformed difference t_{k+1}^theta - t_k^theta.
Field run(const ModelParams& params, const SpatialMesh& mesh, const TimeGrid& grid, Field u0,
          const StepSink& sink = {}, const SolverOptions& options = {}, RunStats* stats = nullptr);

} // namespace tfbm
