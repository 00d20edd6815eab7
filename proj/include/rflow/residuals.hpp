/// @file residuals.hpp
/// @brief Finite-difference verification of candidate solutions: residuals of continuity,
/// momentum, the vorticity heat equation, the rotation law of u_p and the curl-free
/// condition, plus grid-refinement convergence studies.
///
/// Everything here works from point samples. Time derivatives are central differences in t,
/// so the verifier never calls analytic derivative code of the solution it checks.

#pragma once

#include "rflow/assembly.hpp"
#include "rflow/finite_difference.hpp"

#include <array>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace rflow {

using VectorSampler = std::function<Vec3(const Vec3& x, double t)>;
using ScalarSampler = std::function<double(const Vec3& x, double t)>;

/// Point samplers for a velocity field and its decomposition. Empty decomposition members
/// mean the part is absent.
struct FlowFields {
    VectorSampler velocity;
    ScalarSampler pressure_over_rho;
    std::function<double(const Vec3& x)> potential;
    double nu = 0.0;

    VectorSampler irrotational;
    VectorSampler solenoidal;
    /// Vorticity that rotates u_p.
    VectorSampler driving_vorticity;
    /// Vorticity entering the forcing f = u_w x w.
    VectorSampler solenoidal_vorticity;
};

[[nodiscard]] FlowFields fields_of(const FlowSolution& sol);

using ComponentNorms = std::array<Norms, 3>;

[[nodiscard]] double max_of(const ComponentNorms& n);

/// dt_fd = 1e-4 max(1, t).
[[nodiscard]] double default_time_step(double t);

struct ResidualOptions {
    FdOrder order = FdOrder::Second;
    /// Step of the central time difference; 0 selects default_time_step(t).
    double dt_fd = 0.0;
};

struct ResidualReport {
    Norms continuity;
    ComponentNorms momentum{};
    ComponentNorms curl_free{};
    ComponentNorms heat{};
    ComponentNorms rotation{};
    Grid grid;
    double t = 0.0;
    FdOrder order = FdOrder::Second;
    double dt_fd = 0.0;
};

/// FD divergence of the sampled velocity.
[[nodiscard]] Norms continuity_residual(const FlowFields& f, const Grid& grid, double t,
                                        FdOrder order = FdOrder::Second);

/// du/dt + (u . grad) u + grad(p/rho) - nu Laplacian(u) + grad(phi), per component.
/// Throws PreconditionError when t - dt_fd < 0.
[[nodiscard]] ComponentNorms momentum_residual(const FlowFields& f, const Grid& grid, double t,
                                               double dt_fd, FdOrder order = FdOrder::Second);

struct DecompositionResiduals {
    ComponentNorms heat{};      ///< du_w/dt - nu Laplacian(u_w)
    ComponentNorms rotation{};  ///< du_p/dt - u_p x w - u_w x w_sol
    ComponentNorms curl_free{}; ///< curl u_p
};

[[nodiscard]] DecompositionResiduals decomposition_residuals(const FlowFields& f,
                                                             const Grid& grid, double t,
                                                             double dt_fd,
                                                             FdOrder order = FdOrder::Second);

[[nodiscard]] ResidualReport verify(const FlowFields& f, const Grid& grid, double t,
                                    const ResidualOptions& options = {});

struct ObservedOrder {
    std::string residual;
    std::vector<double> h;
    std::vector<double> max_norm;
    /// Least-squares slope of log(max_norm) against log(h); NaN when exact.
    double order = 0.0;
    /// Every residual in the series is at or below the round-off threshold.
    bool exact = false;
};

/// Runs `verify` on each grid and fits observed orders for continuity, momentum, heat,
/// rotation and curl_free. Throws PreconditionError for fewer than three grids.
[[nodiscard]] std::vector<ObservedOrder> convergence_study(const FlowFields& f,
                                                           std::span<const Grid> grids, double t,
                                                           const ResidualOptions& options = {},
                                                           double exact_threshold = 1e-10);

/// Least-squares slope of log(err) against log(h).
[[nodiscard]] double fit_order(std::span<const double> h, std::span<const double> err);

} // namespace rflow
