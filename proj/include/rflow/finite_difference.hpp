/// @file finite_difference.hpp
/// @brief Central-difference gradient, divergence, curl and Laplacian on uniform grids.
///
/// Operators return values on the interior sub-grid only (margin 1 for second order,
/// margin 2 for fourth order); no one-sided boundary stencils are used. Second-order
/// stencils are exact on quadratics and fourth-order stencils on quartics, up to round-off.

#pragma once

#include "rflow/grid.hpp"

#include <span>

namespace rflow {

enum class FdOrder { Second = 2, Fourth = 4 };

[[nodiscard]] constexpr int stencil_margin(FdOrder order) { return static_cast<int>(order) / 2; }

/// Throws GridError unless every axis has at least 2 * margin + 1 points.
void require_stencil_fit(const Grid& grid, FdOrder order);

[[nodiscard]] VectorGridField fd_gradient(const ScalarGridField& f, FdOrder order);
[[nodiscard]] ScalarGridField fd_divergence(const VectorGridField& f, FdOrder order);
[[nodiscard]] VectorGridField fd_curl(const VectorGridField& f, FdOrder order);
[[nodiscard]] ScalarGridField fd_laplacian(const ScalarGridField& f, FdOrder order);
[[nodiscard]] VectorGridField fd_laplacian(const VectorGridField& f, FdOrder order);

/// Row i = FD gradient of component i, on the interior grid.
struct JacobianGridField {
    Grid grid;
    std::vector<std::array<Vec3, 3>> values;
};
[[nodiscard]] JacobianGridField fd_jacobian(const VectorGridField& f, FdOrder order);

/// Restriction of a full-grid field to the interior sub-grid of the given margin.
[[nodiscard]] ScalarGridField restrict_to_interior(const ScalarGridField& f, int margin);
[[nodiscard]] VectorGridField restrict_to_interior(const VectorGridField& f, int margin);

[[nodiscard]] ScalarGridField component(const VectorGridField& f, int axis);

/// Maximum absolute value and root-mean-square of a set of residual samples.
struct Norms {
    double max = 0.0;
    double l2 = 0.0;
};

/// Summation runs in index order so the result does not depend on threading.
[[nodiscard]] Norms norms_of(std::span<const double> values);

} // namespace rflow
