#include "tfbm/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "tfbm/special_functions.hpp"

namespace tfbm {

StepOperator::StepOperator(double r_x, double r_y, std::size_t interior_x, std::size_t interior_y)
    : r_x_(r_x), r_y_(r_y), m_(interior_x), n_(interior_y)
{
    if (!(r_x >= 0.0) || !(r_y >= 0.0) || !std::isfinite(r_x) || !std::isfinite(r_y)) {
        throw std::invalid_argument("StepOperator: coefficients must be finite and nonnegative");
    }
}

StepOperator StepOperator::from_coefficient(double r, const SpatialMesh& mesh)
{
    return StepOperator(r / (mesh.h() * mesh.h()), r / (mesh.l() * mesh.l()), mesh.M(), mesh.N());
}

void StepOperator::apply(std::span<const double> in, std::span<double> out) const
{
    const double d = diag();
    for (std::size_t n = 0; n < n_; ++n) {
        const std::size_t row = n * m_;
        for (std::size_t m = 0; m < m_; ++m) {
            const std::size_t i = row + m;
            const double west = m > 0 ? in[i - 1] : 0.0;
            const double east = m + 1 < m_ ? in[i + 1] : 0.0;
            const double south = n > 0 ? in[i - m_] : 0.0;
            const double north = n + 1 < n_ ? in[i + m_] : 0.0;
            out[i] = d * in[i] - r_x_ * (west + east) - r_y_ * (south + north);
        }
    }
}

namespace {

double dot(std::span<const double> a, std::span<const double> b)
{
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sum += a[i] * b[i];
    }
    return sum;
}

} // namespace

Field step(const Field& field, const StepOperator& op, const SolverOptions& options, StepStats* stats)
{
    if (field.M() != op.M() || field.N() != op.N()) {
        throw std::invalid_argument("step: field and operator shapes differ");
    }
    if (stats) {
        *stats = {};
    }
    if (op.is_identity()) {
        return field;
    }

    const std::span<const double> rhs = field.flatten();
    const std::size_t size = rhs.size();
    const double rhs_norm = std::sqrt(dot(rhs, rhs));
    Field result(field.M(), field.N());
    if (rhs_norm == 0.0) {
        return result;
    }

    const std::size_t budget = options.max_iterations ? options.max_iterations : 10 * size;
    const double target = options.tolerance * rhs_norm;
    const double inv_diag = 1.0 / op.diag();

    std::span<double> x = result.values();
    std::copy(rhs.begin(), rhs.end(), x.begin());
    // Reused across calls on the same thread.
    thread_local std::vector<double> residual, precond, direction, image;
    residual.resize(size);
    precond.resize(size);
    direction.resize(size);
    image.resize(size);

    op.apply(x, image);
    for (std::size_t i = 0; i < size; ++i) {
        residual[i] = rhs[i] - image[i];
    }
    double residual_norm = std::sqrt(dot(residual, residual));
    for (std::size_t i = 0; i < size; ++i) {
        precond[i] = inv_diag * residual[i];
    }
    direction = precond;
    double rz = dot(residual, precond);

    std::size_t iterations = 0;
    while (residual_norm > target) {
        if (iterations == budget) {
            throw SolverError("step: conjugate gradients did not converge in " + std::to_string(budget) +
                              " iterations (relative residual " + std::to_string(residual_norm / rhs_norm) + ")");
        }
        op.apply(direction, image);
        const double curvature = dot(direction, image);
        if (!(curvature > 0.0)) {
            throw SolverError("step: operator is not positive definite");
        }
        const double alpha = rz / curvature;
        for (std::size_t i = 0; i < size; ++i) {
            x[i] += alpha * direction[i];
            residual[i] -= alpha * image[i];
            precond[i] = inv_diag * residual[i];
        }
        const double rz_next = dot(residual, precond);
        const double beta = rz_next / rz;
        rz = rz_next;
        for (std::size_t i = 0; i < size; ++i) {
            direction[i] = precond[i] + beta * direction[i];
        }
        residual_norm = std::sqrt(dot(residual, residual));
        ++iterations;
    }

    if (stats) {
        stats->iterations = iterations;
        stats->relative_residual = residual_norm / rhs_norm;
    }
    return result;
}

namespace {

double scheme_prefactor(const ModelParams& params)
{
    const double hurst = params.hurst();
    return gamma(hurst + 0.5) / (hurst * std::sqrt(std::numbers::pi) * std::pow(2.0 * params.lambda(), hurst));
}

void require_step_inputs(const char* what, double t_next, double dtheta)
{
    if (!(t_next > 0.0) || !std::isfinite(t_next)) {
        throw std::domain_error(std::string(what) + ": t_next must be positive");
    }
    if (!(dtheta >= 0.0) || !std::isfinite(dtheta)) {
        throw std::domain_error(std::string(what) + ": transformed step must be nonnegative");
    }
}

} // namespace

double coefficient_case1(const ModelParams& params, double t_next, double dtheta)
{
    require_step_inputs("coefficient_case1", t_next, dtheta);
    if (dtheta == 0.0) {
        return 0.0;
    }
    const double hurst = params.hurst();
    const double lambda = params.lambda();
    const double k = bessel_k(hurst - 1.0, lambda * t_next);
    return 0.5 * scheme_prefactor(params) * lambda * std::pow(t_next, 1.0 - hurst) * k * dtheta;
}

double coefficient_case2(const ModelParams& params, double t_next, double dtheta)
{
    require_step_inputs("coefficient_case2", t_next, dtheta);
    if (params.subdiffusive()) {
        throw std::domain_error("coefficient_case2: requires H > 0.5");
    }
    if (dtheta == 0.0) {
        return 0.0;
    }
    const double lambda = params.lambda();
    const double k = bessel_k(params.hurst() - 1.0, lambda * t_next);
    return scheme_prefactor(params) * lambda * t_next * k * dtheta;
}

Field run(const ModelParams& params, const SpatialMesh& mesh, const TimeGrid& grid, Field u0, const StepSink& sink,
          const SolverOptions& options, RunStats* stats)
{
    if (u0.M() != mesh.M() || u0.N() != mesh.N()) {
        throw std::invalid_argument("run: initial field does not match the mesh");
    }
    if (grid.law() == GridLaw::Uniform) {
        throw std::invalid_argument("run: the schemes need a graded or spliced grid, not a uniform one");
    }
    if (grid.hurst() != params.hurst()) {
        throw std::invalid_argument("run: grid was built for a different Hurst index");
    }
    if (grid.law() == GridLaw::SplicedCaseII && params.subdiffusive()) {
        throw std::invalid_argument("run: spliced grid requires H > 0.5");
    }

    RunStats local;
    const std::vector<double>& nodes = grid.nodes();
    if (sink) {
        sink(0, nodes.front(), u0);
    }
    Field current = std::move(u0);
    for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
        const double t_now = nodes[k];
        const double t_next = nodes[k + 1];
        const double theta = grid.transform_exponent(k + 1);
        const double dtheta = std::pow(t_next, theta) - std::pow(t_now, theta);
        const bool second_segment = grid.law() == GridLaw::SplicedCaseII && k + 1 > *grid.splice_index();
        const double r = second_segment ? coefficient_case2(params, t_next, dtheta)
                                        : coefficient_case1(params, t_next, dtheta);
        const StepOperator op = StepOperator::from_coefficient(r, mesh);
        StepStats step_stats;
        current = step(current, op, options, &step_stats);
        local.solver_iterations += step_stats.iterations;
        local.identity_steps += op.is_identity() ? 1 : 0;
        ++local.steps;
        if (sink) {
            sink(k + 1, t_next, current);
        }
    }
    if (stats) {
        *stats = local;
    }
    return current;
}

} // namespace tfbm
