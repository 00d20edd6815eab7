#include "rflow/grid.hpp"

#include "rflow/errors.hpp"

#include <cmath>

namespace rflow {

void Grid::validate() const {
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw GridError("grid spacing must be positive and finite");
    }
    for (int d : dims) {
        if (d < 0) {
            throw GridError("grid dimensions must be non-negative");
        }
    }
    if (!is_finite(origin)) {
        throw GridError("grid origin must be finite");
    }
}

Vec3 Grid::point(std::size_t n) const {
    const auto nx = static_cast<std::size_t>(dims[0]);
    const auto ny = static_cast<std::size_t>(dims[1]);
    const auto i = static_cast<int>(n % nx);
    const auto j = static_cast<int>((n / nx) % ny);
    const auto k = static_cast<int>(n / (nx * ny));
    return point(i, j, k);
}

Grid Grid::interior(int margin) const {
    Grid g = *this;
    g.origin = point(margin, margin, margin);
    for (int& d : g.dims) {
        d = d > 2 * margin ? d - 2 * margin : 0;
    }
    return g;
}

Grid Grid::refined() const {
    Grid g = *this;
    g.h = 0.5 * h;
    for (int& d : g.dims) {
        d = d > 0 ? 2 * (d - 1) + 1 : 0;
    }
    return g;
}

} // namespace rflow
