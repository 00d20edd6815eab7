#include "rflow/finite_difference.hpp"

#include "rflow/errors.hpp"
#include "rflow/parallel.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace rflow {

void require_stencil_fit(const Grid& grid, FdOrder order) {
    grid.validate();
    const int need = 2 * stencil_margin(order) + 1;
    for (int axis = 0; axis < 3; ++axis) {
        if (grid.dims[static_cast<std::size_t>(axis)] < need) {
            throw GridError("grid axis " + std::to_string(axis) + " has " +
                            std::to_string(grid.dims[static_cast<std::size_t>(axis)]) +
                            " points; order-" + std::to_string(static_cast<int>(order)) +
                            " stencils need at least " + std::to_string(need));
        }
    }
}

namespace {

// Visits every interior point of `g` for stencils of the given margin, passing the
// full-grid index and the interior index.
template <class Body>
void for_interior(const Grid& g, int m, Body&& body) {
    const Grid inner = g.interior(m);
    parallel_for(inner.size(), [&](std::size_t n) {
        const auto nx = static_cast<std::size_t>(inner.dims[0]);
        const auto ny = static_cast<std::size_t>(inner.dims[1]);
        const int i = static_cast<int>(n % nx) + m;
        const int j = static_cast<int>((n / nx) % ny) + m;
        const int k = static_cast<int>(n / (nx * ny)) + m;
        body(g.index(i, j, k), n);
    });
}

std::array<std::ptrdiff_t, 3> strides(const Grid& g) {
    return {1, g.dims[0], static_cast<std::ptrdiff_t>(g.dims[0]) * g.dims[1]};
}

template <class Get>
double first_derivative(Get&& f, std::size_t c, std::ptrdiff_t s, double h, FdOrder order) {
    const auto at = [&](std::ptrdiff_t off) { return f(static_cast<std::size_t>(static_cast<std::ptrdiff_t>(c) + off)); };
    if (order == FdOrder::Second) {
        return (at(s) - at(-s)) / (2.0 * h);
    }
    return (-at(2 * s) + 8.0 * at(s) - 8.0 * at(-s) + at(-2 * s)) / (12.0 * h);
}

template <class Get>
double second_derivative(Get&& f, std::size_t c, std::ptrdiff_t s, double h, FdOrder order) {
    const auto at = [&](std::ptrdiff_t off) { return f(static_cast<std::size_t>(static_cast<std::ptrdiff_t>(c) + off)); };
    if (order == FdOrder::Second) {
        return (at(s) - 2.0 * at(0) + at(-s)) / (h * h);
    }
    return (-at(2 * s) + 16.0 * at(s) - 30.0 * at(0) + 16.0 * at(-s) - at(-2 * s)) / (12.0 * h * h);
}

void check_shape(const Grid& g, std::size_t n) {
    if (g.size() != n) {
        throw GridError("field size does not match grid dimensions");
    }
}

} // namespace

VectorGridField fd_gradient(const ScalarGridField& f, FdOrder order) {
    require_stencil_fit(f.grid, order);
    check_shape(f.grid, f.values.size());
    const int m = stencil_margin(order);
    VectorGridField out{f.grid.interior(m), {}};
    out.values.resize(out.grid.size());
    const auto st = strides(f.grid);
    const auto get = [&](std::size_t i) { return f.values[i]; };
    for_interior(f.grid, m, [&](std::size_t c, std::size_t n) {
        for (int a = 0; a < 3; ++a) {
            out.values[n][a] = first_derivative(get, c, st[static_cast<std::size_t>(a)], f.grid.h, order);
        }
    });
    return out;
}

JacobianGridField fd_jacobian(const VectorGridField& f, FdOrder order) {
    require_stencil_fit(f.grid, order);
    check_shape(f.grid, f.values.size());
    const int m = stencil_margin(order);
    JacobianGridField out{f.grid.interior(m), {}};
    out.values.resize(out.grid.size());
    const auto st = strides(f.grid);
    for_interior(f.grid, m, [&](std::size_t c, std::size_t n) {
        for (int comp = 0; comp < 3; ++comp) {
            const auto get = [&](std::size_t i) { return f.values[i][comp]; };
            for (int a = 0; a < 3; ++a) {
                out.values[n][static_cast<std::size_t>(comp)][a] =
                    first_derivative(get, c, st[static_cast<std::size_t>(a)], f.grid.h, order);
            }
        }
    });
    return out;
}

ScalarGridField fd_divergence(const VectorGridField& f, FdOrder order) {
    require_stencil_fit(f.grid, order);
    check_shape(f.grid, f.values.size());
    const int m = stencil_margin(order);
    ScalarGridField out{f.grid.interior(m), {}};
    out.values.resize(out.grid.size());
    const auto st = strides(f.grid);
    for_interior(f.grid, m, [&](std::size_t c, std::size_t n) {
        double div = 0.0;
        for (int a = 0; a < 3; ++a) {
            const auto get = [&](std::size_t i) { return f.values[i][a]; };
            div += first_derivative(get, c, st[static_cast<std::size_t>(a)], f.grid.h, order);
        }
        out.values[n] = div;
    });
    return out;
}

VectorGridField fd_curl(const VectorGridField& f, FdOrder order) {
    const JacobianGridField j = fd_jacobian(f, order);
    VectorGridField out{j.grid, {}};
    out.values.resize(j.values.size());
    for (std::size_t n = 0; n < j.values.size(); ++n) {
        const auto& d = j.values[n];
        out.values[n] = {d[2].y - d[1].z, d[0].z - d[2].x, d[1].x - d[0].y};
    }
    return out;
}

ScalarGridField fd_laplacian(const ScalarGridField& f, FdOrder order) {
    require_stencil_fit(f.grid, order);
    check_shape(f.grid, f.values.size());
    const int m = stencil_margin(order);
    ScalarGridField out{f.grid.interior(m), {}};
    out.values.resize(out.grid.size());
    const auto st = strides(f.grid);
    const auto get = [&](std::size_t i) { return f.values[i]; };
    for_interior(f.grid, m, [&](std::size_t c, std::size_t n) {
        double lap = 0.0;
        for (int a = 0; a < 3; ++a) {
            lap += second_derivative(get, c, st[static_cast<std::size_t>(a)], f.grid.h, order);
        }
        out.values[n] = lap;
    });
    return out;
}

VectorGridField fd_laplacian(const VectorGridField& f, FdOrder order) {
    require_stencil_fit(f.grid, order);
    check_shape(f.grid, f.values.size());
    const int m = stencil_margin(order);
    VectorGridField out{f.grid.interior(m), {}};
    out.values.resize(out.grid.size());
    const auto st = strides(f.grid);
    for_interior(f.grid, m, [&](std::size_t c, std::size_t n) {
        for (int comp = 0; comp < 3; ++comp) {
            const auto get = [&](std::size_t i) { return f.values[i][comp]; };
            double lap = 0.0;
            for (int a = 0; a < 3; ++a) {
                lap += second_derivative(get, c, st[static_cast<std::size_t>(a)], f.grid.h, order);
            }
            out.values[n][comp] = lap;
        }
    });
    return out;
}

ScalarGridField restrict_to_interior(const ScalarGridField& f, int margin) {
    check_shape(f.grid, f.values.size());
    ScalarGridField out{f.grid.interior(margin), {}};
    out.values.resize(out.grid.size());
    for_interior(f.grid, margin, [&](std::size_t c, std::size_t n) { out.values[n] = f.values[c]; });
    return out;
}

VectorGridField restrict_to_interior(const VectorGridField& f, int margin) {
    check_shape(f.grid, f.values.size());
    VectorGridField out{f.grid.interior(margin), {}};
    out.values.resize(out.grid.size());
    for_interior(f.grid, margin, [&](std::size_t c, std::size_t n) { out.values[n] = f.values[c]; });
    return out;
}

ScalarGridField component(const VectorGridField& f, int axis) {
    ScalarGridField out{f.grid, {}};
    out.values.reserve(f.values.size());
    for (const Vec3& v : f.values) {
        out.values.push_back(v[axis]);
    }
    return out;
}

Norms norms_of(std::span<const double> values) {
    Norms n;
    if (values.empty()) {
        return n;
    }
    double sum_sq = 0.0;
    for (double v : values) {
        // Non-finite residuals must not be hidden by fmax.
        n.max = std::isfinite(v) ? std::fmax(n.max, std::fabs(v))
                                 : std::numeric_limits<double>::infinity();
        sum_sq += v * v;
    }
    n.l2 = std::sqrt(sum_sq / static_cast<double>(values.size()));
    return n;
}

} // namespace rflow
