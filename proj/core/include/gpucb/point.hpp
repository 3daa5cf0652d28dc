#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace gpucb {

/// A location in the decision domain. Coordinates are conventionally in [0,1]^d.
class Point {
public:
    Point() = default;
    Point(std::initializer_list<double> coords);
    explicit Point(std::vector<double> coords);

    [[nodiscard]] std::size_t dimension() const noexcept { return coords_.size(); }
    [[nodiscard]] double operator[](std::size_t i) const { return coords_[i]; }
    [[nodiscard]] std::span<const double> coords() const noexcept { return coords_; }

    friend bool operator==(const Point&, const Point&) = default;

private:
    std::vector<double> coords_;
};

using Pool = std::vector<Point>;

/// Uniform tensor grid with `points_per_dim` points per axis spanning [lo, hi] (inclusive).
/// The last axis varies fastest.
Pool make_grid(std::span<const std::pair<double, double>> bounds, std::size_t points_per_dim);

/// Throws InputError unless every point in the pool has the given dimension.
void require_dimension(const Pool& pool, std::size_t dimension);

}  // namespace gpucb
