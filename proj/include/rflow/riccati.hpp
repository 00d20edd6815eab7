/// @file riccati.hpp
/// @brief Coupled real Riccati system for the stereographic coordinates (a, b) of the
/// irrotational velocity, its complex form, and a fixed-step RK4 integrator.
///
/// The irrotational velocity u_p = (U, V, W) lives on a sphere of radius gamma and is
/// rigidly rotated by the local vorticity w. Writing the rotating point in stereographic
/// coordinates eta = a + i b turns the linear rotation law into a pair of Riccati ODEs
/// that carry no spatial derivatives, so every spatial point evolves independently.

#pragma once

#include "rflow/vec3.hpp"

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

namespace rflow {

/// Real and imaginary parts of eta = a + b i at one spatial point.
struct RiccatiState {
    double a = 0.0;
    double b = 0.0;

    friend constexpr bool operator==(const RiccatiState&, const RiccatiState&) = default;
};

/// Local vorticity (w_x, w_y, w_z) driving the rotation, units 1/time.
using VorticitySample = Vec3;

/// Irrotational velocity components (U, V, W) on the sphere of radius gamma.
using PotentialVelocity = Vec3;

struct RiccatiRate {
    double da_dt = 0.0;
    double db_dt = 0.0;
};

/// Time-ordered samples of the state. `times` is strictly increasing and has the same
/// length as `states`.
struct Trajectory {
    std::vector<double> times;
    std::vector<RiccatiState> states;

    [[nodiscard]] std::size_t size() const noexcept { return times.size(); }
    [[nodiscard]] bool empty() const noexcept { return times.empty(); }
};

/// Vorticity prescribed as a function of time only.
using VorticityHistory = std::function<VorticitySample(double t)>;

/// Vorticity that may depend on the current state as well (used to maintain algebraic
/// side conditions such as w_y a - w_x b = 0 along a trajectory).
using VorticityFeedback = std::function<VorticitySample(double t, const RiccatiState& s)>;

[[nodiscard]] RiccatiRate riccati_rhs(const RiccatiState& state, const VorticitySample& w);

/// Complex form ((w_y + i w_x)/2) eta^2 - i w_z eta + (w_y - i w_x)/2.
[[nodiscard]] std::complex<double> complex_riccati_rhs(std::complex<double> eta,
                                                       const VorticitySample& w);

/// Companion coordinate xi = c + d i tied to eta by 1/eta = -conj(xi).
/// Throws DomainError for eta = 0.
[[nodiscard]] std::complex<double> xi_from_eta(std::complex<double> eta);

/// Stereographic map of (a, b) onto the sphere of radius gamma. The pole (0, 0) maps to
/// (0, 0, gamma).
[[nodiscard]] PotentialVelocity stereographic_velocity(const RiccatiState& state, double gamma);

struct IntegrationOptions {
    double dt = 1e-3;
    /// |a| or |b| above this value is treated as escape to infinity.
    double escape_bound = 1e12;
};

enum class IntegrationStatus { Completed, Escaped };

struct IntegrationResult {
    Trajectory trajectory;
    IntegrationStatus status = IntegrationStatus::Completed;
    /// Time of the first sample that exceeded the escape bound (Escaped only).
    std::optional<double> escape_time;

    [[nodiscard]] bool completed() const noexcept { return status == IntegrationStatus::Completed; }
};

/// Classical fixed-step RK4 over [t0, t1]; the final step is shortened to land on t1.
/// Throws PreconditionError for t1 <= t0, dt <= 0 or a non-finite initial state.
[[nodiscard]] IntegrationResult integrate(const RiccatiState& state0, const VorticityHistory& w,
                                          double t0, double t1,
                                          const IntegrationOptions& options = {});

[[nodiscard]] IntegrationResult integrate(const RiccatiState& state0, const VorticityFeedback& w,
                                          double t0, double t1,
                                          const IntegrationOptions& options = {});

/// max over interior samples of |d/dt(a^2+b^2+1) - (a^2+b^2+1)(w_y a - w_x b)| with the
/// time derivative taken by three-point central differences (non-uniform spacing allowed).
/// Throws PreconditionError for trajectories with fewer than three samples.
[[nodiscard]] double radius_identity_residual(const Trajectory& trajectory,
                                              const VorticityHistory& w);

} // namespace rflow
