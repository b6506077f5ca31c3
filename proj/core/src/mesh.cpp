#include "tfbm/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>
#include <string>

namespace tfbm {

SpatialMesh::SpatialMesh(Rectangle domain, std::size_t interior_x, std::size_t interior_y)
    : domain_(domain), m_(interior_x), n_(interior_y)
{
    if (m_ < 1 || n_ < 1) {
        throw std::invalid_argument("SpatialMesh: need at least one interior node per axis");
    }
    if (!(domain.x_max > domain.x_min) || !(domain.y_max > domain.y_min) || !std::isfinite(domain.x_min) ||
        !std::isfinite(domain.x_max) || !std::isfinite(domain.y_min) || !std::isfinite(domain.y_max)) {
        throw std::invalid_argument("SpatialMesh: domain bounds must be finite with min < max");
    }
    h_ = (domain.x_max - domain.x_min) / static_cast<double>(m_ + 1);
    l_ = (domain.y_max - domain.y_min) / static_cast<double>(n_ + 1);
}

Field::Field(std::size_t interior_x, std::size_t interior_y)
    : m_(interior_x), n_(interior_y), values_(interior_x * interior_y, 0.0)
{
    if (m_ < 1 || n_ < 1) {
        throw std::invalid_argument("Field: need at least one interior node per axis");
    }
}

double Field::at(std::size_t m, std::size_t n) const
{
    if (m > m_ + 1 || n > n_ + 1) {
        throw std::out_of_range("Field::at: node outside mesh");
    }
    if (m == 0 || n == 0 || m == m_ + 1 || n == n_ + 1) {
        return 0.0;
    }
    return values_[(n - 1) * m_ + (m - 1)];
}

double& Field::interior(std::size_t m, std::size_t n)
{
    if (m < 1 || n < 1 || m > m_ || n > n_) {
        throw std::out_of_range("Field::interior: not an interior node");
    }
    return values_[(n - 1) * m_ + (m - 1)];
}

Field Field::unflatten(std::size_t interior_x, std::size_t interior_y, std::span<const double> flat)
{
    Field field(interior_x, interior_y);
    if (flat.size() != field.values_.size()) {
        throw std::invalid_argument("Field::unflatten: vector length does not match M*N");
    }
    std::copy(flat.begin(), flat.end(), field.values_.begin());
    return field;
}

Field initial_condition(const SpatialMesh& mesh, const PointFunction& expr)
{
    Field field(mesh);
    for (std::size_t n = 1; n <= mesh.N(); ++n) {
        for (std::size_t m = 1; m <= mesh.M(); ++m) {
            const double value = expr(mesh.x(m), mesh.y(n));
            if (!std::isfinite(value)) {
                throw std::invalid_argument("initial_condition: non-finite sample at (" + std::to_string(mesh.x(m)) +
                                            ", " + std::to_string(mesh.y(n)) + ")");
            }
            field.interior(m, n) = value;
        }
    }
    return field;
}

double gaussian_initial_data(double x, double y)
{
    return std::exp(-x * x - 2.0 * y * y);
}

double second_difference_x(const Field& field, std::size_t m, std::size_t n)
{
    return field.at(m + 1, n) - 2.0 * field.at(m, n) + field.at(m - 1, n);
}

double second_difference_y(const Field& field, std::size_t m, std::size_t n)
{
    return field.at(m, n + 1) - 2.0 * field.at(m, n) + field.at(m, n - 1);
}

double vector_norm(const Field& field)
{
    double sum = 0.0;
    for (double v : field.flatten()) {
        sum += v * v;
    }
    return std::sqrt(sum);
}

double l2_norm(const Field& field, const SpatialMesh& mesh)
{
    return std::sqrt(mesh.h() * mesh.l()) * vector_norm(field);
}

void write_snapshot_csv(std::ostream& out, const SpatialMesh& mesh, const Field& field)
{
    out << "x,y,u\n" << std::setprecision(17);
    for (std::size_t n = 0; n <= mesh.N() + 1; ++n) {
        for (std::size_t m = 0; m <= mesh.M() + 1; ++m) {
            out << mesh.x(m) << ',' << mesh.y(n) << ',' << field.at(m, n) << '\n';
        }
    }
}

} // namespace tfbm
