#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

namespace tfbm {

struct Rectangle {
    double x_min;
    double x_max;
    double y_min;
    double y_max;
};

/// Uniform tensor mesh on an axis-aligned rectangle with M x N interior nodes.
/// Node m along x sits at x_min + m h for m = 0..M+1; m = 0 and m = M+1 are
/// boundary nodes.
class SpatialMesh {
public:
    SpatialMesh(Rectangle domain, std::size_t interior_x, std::size_t interior_y);

    const Rectangle& domain() const noexcept { return domain_; }
    std::size_t M() const noexcept { return m_; }
    std::size_t N() const noexcept { return n_; }
    double h() const noexcept { return h_; }
    double l() const noexcept { return l_; }
    double x(std::size_t m) const noexcept { return domain_.x_min + static_cast<double>(m) * h_; }
    double y(std::size_t n) const noexcept { return domain_.y_min + static_cast<double>(n) * l_; }
    std::size_t interior_size() const noexcept { return m_ * n_; }

    /// Position of interior node (m, n), 1 <= m <= M, 1 <= n <= N, in the
    /// flattened vector: x index fastest.
    std::size_t flat_index(std::size_t m, std::size_t n) const noexcept { return (n - 1) * m_ + (m - 1); }

private:
    Rectangle domain_;
    std::size_t m_;
    std::size_t n_;
    double h_;
    double l_;
};

/// Solution values at one time level under homogeneous Dirichlet conditions.
/// Only interior values are stored, already in flattened order, so the
/// boundary ring is zero by construction and flatten() is a view.
class Field {
public:
    Field(std::size_t interior_x, std::size_t interior_y);
    explicit Field(const SpatialMesh& mesh) : Field(mesh.M(), mesh.N()) {}

    std::size_t M() const noexcept { return m_; }
    std::size_t N() const noexcept { return n_; }

    /// Value at node (m, n), 0 <= m <= M+1, 0 <= n <= N+1; boundary nodes read 0.
    double at(std::size_t m, std::size_t n) const;
    /// Mutable access to interior node (m, n).
    double& interior(std::size_t m, std::size_t n);

    std::span<const double> flatten() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }

    static Field unflatten(std::size_t interior_x, std::size_t interior_y, std::span<const double> flat);

    bool operator==(const Field&) const = default;

private:
    std::size_t m_;
    std::size_t n_;
    std::vector<double> values_;
};

using PointFunction = std::function<double(double, double)>;

/// Samples `expr` at the interior nodes; boundary stays zero. Throws
/// std::invalid_argument on a non-finite sample.
Field initial_condition(const SpatialMesh& mesh, const PointFunction& expr);

/// The standard initial data exp(-x^2 - 2 y^2).
double gaussian_initial_data(double x, double y);

/// delta_x^2 u = u_{m+1,n} - 2 u_{m,n} + u_{m-1,n} at interior node (m, n).
double second_difference_x(const Field& field, std::size_t m, std::size_t n);
double second_difference_y(const Field& field, std::size_t m, std::size_t n);

/// Euclidean norm of the flattened interior vector.
double vector_norm(const Field& field);

/// Discrete L2 norm sqrt(h l sum u^2).
double l2_norm(const Field& field, const SpatialMesh& mesh);

/// CSV with header `x,y,u` over all (M+2)(N+2) nodes, x fastest, 17
/// significant digits.
void write_snapshot_csv(std::ostream& out, const SpatialMesh& mesh, const Field& field);

} // namespace tfbm
