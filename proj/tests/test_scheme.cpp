#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "support/oracles.hpp"
#include "tfbm/scheme.hpp"
#include "tfbm/special_functions.hpp"

using namespace tfbm;

namespace {

double rel_err(double a, double b)
{
    return std::abs(a - b) / std::abs(b);
}

Field random_field(std::size_t M, std::size_t N, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> value(0.0, 1.0);
    Field field(M, N);
    for (double& v : field.values()) {
        v = value(rng);
    }
    return field;
}

double max_abs(const Field& field)
{
    double peak = 0.0;
    for (double v : field.flatten()) {
        peak = std::max(peak, std::abs(v));
    }
    return peak;
}

} // namespace

TEST_CASE("single interior node solves by hand")
{
    Field u(1, 1);
    u.interior(1, 1) = 2.5;
    const Field next = step(u, StepOperator(1.0, 1.0, 1, 1));
    CHECK(next.at(1, 1) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("trivial steps")
{
    const Field zero(4, 3);
    CHECK(step(zero, StepOperator(2.0, 3.0, 4, 3)) == zero);

    std::mt19937_64 rng(1);
    const Field u = random_field(4, 3, rng);
    StepStats stats;
    CHECK(step(u, StepOperator(0.0, 0.0, 4, 3), {}, &stats) == u);
    CHECK(stats.iterations == 0);
    CHECK_THROWS_AS(step(u, StepOperator(1.0, 1.0, 3, 4)), std::invalid_argument);
    CHECK_THROWS_AS(StepOperator(-1.0, 1.0, 2, 2), std::invalid_argument);
}

TEST_CASE("conjugate gradients match a dense direct solve")
{
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> coefficient(0.0, 10.0);
    for (int trial = 0; trial < 20; ++trial) {
        const double r_x = coefficient(rng);
        const double r_y = coefficient(rng);
        const Field u = random_field(3, 3, rng);
        const Field next = step(u, StepOperator(r_x, r_y, 3, 3));
        const std::vector<double> rhs(u.flatten().begin(), u.flatten().end());
        const std::vector<double> exact = tfbm::testing::dense_solve(tfbm::testing::assemble_dense(r_x, r_y, 3, 3), rhs);
        for (std::size_t i = 0; i < exact.size(); ++i) {
            CHECK(std::abs(next.flatten()[i] - exact[i]) < 1e-10);
        }
    }

    const Field u = random_field(5, 4, rng);
    StepStats stats;
    const Field next = step(u, StepOperator(0.7, 1.3, 5, 4), {1e-12, 0}, &stats);
    CHECK(stats.relative_residual <= 1e-12);
    const std::vector<double> rhs(u.flatten().begin(), u.flatten().end());
    const std::vector<double> exact = tfbm::testing::dense_solve(tfbm::testing::assemble_dense(0.7, 1.3, 5, 4), rhs);
    for (std::size_t i = 0; i < exact.size(); ++i) {
        CHECK(std::abs(next.flatten()[i] - exact[i]) < 1e-11);
    }
}

TEST_CASE("assembled operator is symmetric and matches the stencil")
{
    const std::size_t M = 4, N = 3, size = M * N;
    const StepOperator op(0.3, 1.7, M, N);
    std::vector<double> matrix(size * size);
    std::vector<double> unit(size, 0.0), column(size);
    for (std::size_t j = 0; j < size; ++j) {
        unit.assign(size, 0.0);
        unit[j] = 1.0;
        op.apply(unit, column);
        for (std::size_t i = 0; i < size; ++i) {
            matrix[i * size + j] = column[i];
        }
    }
    const std::vector<double> dense = tfbm::testing::assemble_dense(0.3, 1.7, M, N);
    for (std::size_t i = 0; i < size; ++i) {
        for (std::size_t j = 0; j < size; ++j) {
            CHECK(matrix[i * size + j] == matrix[j * size + i]);
            CHECK(matrix[i * size + j] == dense[i * size + j]);
        }
    }
}

TEST_CASE("case I coefficient")
{
    const ModelParams params(0.3, 0.1);
    const double tau = 0.05;
    const double limit = std::tgamma(0.8) / (0.6 * std::sqrt(std::numbers::pi) * std::pow(0.2, 0.3)) * 0.1 * tau *
                         std::pow(2.0, -0.3) * std::tgamma(0.7) / std::pow(0.1, 0.7);
    CHECK(rel_err(coefficient_case1(params, 1e-6, tau), limit) < 1e-3);
    CHECK(coefficient_case1(params, 1.0, 0.0) == 0.0);
    const double t = 5.0;
    const double via_d = diffusion_coefficient(params, t) * tau * std::pow(t, 1.0 - 0.6) / 0.6;
    CHECK(rel_err(coefficient_case1(params, t, tau), via_d) < 1e-13);
    // bounded approach to t = 0
    CHECK(coefficient_case1(params, 1e-12, tau) == doctest::Approx(limit).epsilon(1e-6));
}

TEST_CASE("case II coefficient")
{
    const ModelParams params(0.7, 0.01);
    const double tau = 0.05;
    CHECK(coefficient_case2(params, 600.0, tau) < coefficient_case2(params, 100.0, tau));
    CHECK(coefficient_case2(params, 50.0, 0.0) == 0.0);
    const double t = 50.0;
    const double via_d = diffusion_coefficient(params, t) * tau * std::pow(t, 0.3) / 0.7;
    CHECK(rel_err(coefficient_case2(params, t, tau), via_d) < 1e-13);
    CHECK(coefficient_case2(params, 1e6, tau) == 0.0);
    CHECK_THROWS_AS(coefficient_case2(ModelParams(0.3, 0.1), 1.0, tau), std::domain_error);
}

TEST_CASE("plane waves are damped by the amplification factor")
{
    const SpatialMesh mesh({-1.0, 3.0, 0.0, 2.0}, 20, 15);
    const double lx = 4.0, ly = 2.0;
    const StepOperator op(0.9, 2.2, mesh.M(), mesh.N());
    for (auto [p1, p2] : {std::pair{1, 1}, std::pair{3, 2}, std::pair{20, 15}}) {
        const Field mode = initial_condition(mesh, [&](double x, double y) {
            return std::sin(p1 * std::numbers::pi * (x + 1.0) / lx) * std::sin(p2 * std::numbers::pi * y / ly);
        });
        const double theta1 = p1 * std::numbers::pi * mesh.h() / lx;
        const double theta2 = p2 * std::numbers::pi * mesh.l() / ly;
        const double gain = 1.0 / (1.0 + 2.0 * op.r_x() * (1.0 - std::cos(theta1)) + 2.0 * op.r_y() * (1.0 - std::cos(theta2)));
        const Field next = step(mode, op, {1e-14, 0});
        for (std::size_t i = 0; i < mode.flatten().size(); ++i) {
            CHECK(std::abs(next.flatten()[i] - gain * mode.flatten()[i]) < 1e-10);
        }
    }
}

TEST_CASE("runs are norm-decreasing and respect the maximum principle")
{
    std::mt19937_64 rng(5);
    const SpatialMesh mesh({-5.0, 5.0, -5.0, 5.0}, 15, 12);
    for (double h : {0.3, 0.7}) {
        const ModelParams params(h, 0.1);
        const TimeGrid grid = grid_for(params, 0.2, 30.0);
        double previous_norm = INFINITY;
        double previous_max = INFINITY;
        double min_value = 0.0;
        std::size_t calls = 0;
        run(params, mesh, grid, random_field(mesh.M(), mesh.N(), rng), [&](std::size_t k, double t, const Field& u) {
            CHECK(k == calls++);
            CHECK(t == grid.node(k));
            const double norm = vector_norm(u);
            CHECK(norm <= previous_norm);
            CHECK(max_abs(u) <= previous_max * (1.0 + 1e-9));
            for (double v : u.flatten()) {
                min_value = std::min(min_value, v);
            }
            previous_norm = norm;
            previous_max = max_abs(u);
        });
        CHECK(calls == grid.nodes().size());
        CHECK(min_value >= -1e-9);
    }
}

TEST_CASE("one-step run equals a single step")
{
    const ModelParams params(0.3, 0.1);
    const SpatialMesh mesh({-3.0, 3.0, -3.0, 3.0}, 9, 9);
    const Field u0 = initial_condition(mesh, gaussian_initial_data);

    const TimeGrid single = graded_case1(params, 0.9, 1.0);
    REQUIRE(single.steps() == 2);
    Field after_first(mesh);
    run(params, mesh, single, u0, [&](std::size_t k, double, const Field& u) {
        if (k == 1) {
            after_first = u;
        }
    });
    const double r = coefficient_case1(params, single.node(1), std::pow(single.node(1), 0.6));
    const Field direct = step(u0, StepOperator::from_coefficient(r, mesh));
    CHECK(after_first == direct);
}

TEST_CASE("run rejects mismatched grids")
{
    const SpatialMesh mesh({-1.0, 1.0, -1.0, 1.0}, 3, 3);
    const Field u0(mesh);
    CHECK_THROWS_AS(run(ModelParams(0.3, 0.1), mesh, uniform(0.1, 1.0), u0), std::invalid_argument);
    CHECK_THROWS_AS(run(ModelParams(0.3, 0.1), mesh, graded_case1(ModelParams(0.2, 0.1), 0.1, 1.0), u0),
                    std::invalid_argument);
    CHECK_THROWS_AS(run(ModelParams(0.3, 0.1), mesh, graded_case1(ModelParams(0.3, 0.1), 0.1, 1.0), Field(2, 2)),
                    std::invalid_argument);
}

TEST_CASE("late case II steps underflow to identity")
{
    const ModelParams params(0.7, 1.0);
    const SpatialMesh mesh({-10.0, 10.0, -10.0, 10.0}, 9, 9);
    const TimeGrid grid = spliced_case2(params, 0.5, 2000.0);
    RunStats stats;
    run(params, mesh, grid, initial_condition(mesh, gaussian_initial_data), {}, {}, &stats);
    CHECK(stats.steps == grid.steps());
    CHECK(stats.identity_steps > 0);
}
