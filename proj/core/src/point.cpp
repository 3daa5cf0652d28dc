#include "gpucb/point.hpp"

#include <cmath>
#include <string>

#include "gpucb/error.hpp"

namespace gpucb {

namespace {

void require_finite(const std::vector<double>& coords) {
    for (double c : coords) {
        if (!std::isfinite(c)) { throw InputError("point coordinates must be finite"); }
    }
}

}  // namespace

Point::Point(std::initializer_list<double> coords) : coords_(coords) { require_finite(coords_); }

Point::Point(std::vector<double> coords) : coords_(std::move(coords)) { require_finite(coords_); }

Pool make_grid(std::span<const std::pair<double, double>> bounds, std::size_t points_per_dim) {
    if (bounds.empty()) { throw InputError("grid needs at least one dimension"); }
    if (points_per_dim == 0) { throw InputError("grid needs at least one point per dimension"); }

    const std::size_t d = bounds.size();
    std::size_t total = 1;
    for (std::size_t i = 0; i < d; ++i) { total *= points_per_dim; }

    auto coordinate = [&](std::size_t axis, std::size_t k) {
        const auto [lo, hi] = bounds[axis];
        if (points_per_dim == 1) { return 0.5 * (lo + hi); }
        return lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(points_per_dim - 1);
    };

    Pool pool;
    pool.reserve(total);
    std::vector<std::size_t> counter(d, 0);
    for (std::size_t n = 0; n < total; ++n) {
        std::vector<double> coords(d);
        for (std::size_t axis = 0; axis < d; ++axis) { coords[axis] = coordinate(axis, counter[axis]); }
        pool.emplace_back(std::move(coords));
        for (std::size_t axis = d; axis-- > 0;) {
            if (++counter[axis] < points_per_dim) { break; }
            counter[axis] = 0;
        }
    }
    return pool;
}

void require_dimension(const Pool& pool, std::size_t dimension) {
    for (std::size_t i = 0; i < pool.size(); ++i) {
        if (pool[i].dimension() != dimension) {
            throw InputError("point " + std::to_string(i) + " has dimension " + std::to_string(pool[i].dimension()) +
                             ", expected " + std::to_string(dimension));
        }
    }
}

}  // namespace gpucb
