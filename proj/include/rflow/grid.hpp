/// @file grid.hpp
/// @brief Uniform Cartesian sampling grid and fields stored on it.
///
/// Linear index order is x fastest, then y, then z: index = i + nx (j + ny k).
/// This is C row-major order for an array declared [nz][ny][nx] and matches the point
/// order of legacy VTK structured points.

#pragma once

#include "rflow/vec3.hpp"

#include <array>
#include <cstddef>
#include <vector>

namespace rflow {

struct Grid {
    Vec3 origin;
    double h = 1.0;
    std::array<int, 3> dims{1, 1, 1};

    /// Throws GridError if h is not positive and finite or any dimension is negative.
    void validate() const;

    [[nodiscard]] std::size_t size() const {
        return static_cast<std::size_t>(dims[0]) * static_cast<std::size_t>(dims[1]) *
               static_cast<std::size_t>(dims[2]);
    }
    [[nodiscard]] bool empty() const { return size() == 0; }

    [[nodiscard]] std::size_t index(int i, int j, int k) const {
        return static_cast<std::size_t>(i) +
               static_cast<std::size_t>(dims[0]) *
                   (static_cast<std::size_t>(j) + static_cast<std::size_t>(dims[1]) *
                                                      static_cast<std::size_t>(k));
    }

    [[nodiscard]] Vec3 point(int i, int j, int k) const {
        return {origin.x + h * i, origin.y + h * j, origin.z + h * k};
    }

    [[nodiscard]] Vec3 point(std::size_t n) const;

    /// Sub-grid obtained by dropping `margin` layers on every face.
    [[nodiscard]] Grid interior(int margin) const;

    /// Same extent with spacing halved (dims become 2 (n - 1) + 1).
    [[nodiscard]] Grid refined() const;

    /// Cube of `n` points per axis with spacing h starting at `origin`.
    [[nodiscard]] static Grid cube(const Vec3& origin, double h, int n) {
        return Grid{origin, h, {n, n, n}};
    }
};

struct ScalarGridField {
    Grid grid;
    std::vector<double> values;
};

struct VectorGridField {
    Grid grid;
    std::vector<Vec3> values;
};

} // namespace rflow
