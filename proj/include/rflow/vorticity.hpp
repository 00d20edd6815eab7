/// @file vorticity.hpp
/// @brief Closed-form vorticity fields solving the component-wise heat equation
/// dw/dt = nu Laplacian(w) through separated modes exp(-nu k^2 t) * W(x), where each
/// spatial factor solves the Helmholtz equation Laplacian(W) + k^2 W = 0.
///
/// All derivatives are analytic. Finite differences appear only in tests and in the
/// residual verifier.

#pragma once

#include "rflow/vec3.hpp"

#include <array>
#include <variant>
#include <vector>

namespace rflow {

/// w_i = A_i cos(k . x + phi_i) exp(-nu |k|^2 t).
///
/// Each component is a scalar Helmholtz mode. The mode is solenoidal only when
/// sum_i A_i k_i exp(i phi_i) = 0, e.g. amplitude perpendicular to k with equal phases.
struct HelmholtzPlaneMode {
    Vec3 wavevector;
    Vec3 amplitude;
    std::array<double, 3> phase{0.0, 0.0, 0.0};

    /// Mode with amplitude along y depending on z only: A sin(k z). Solenoidal.
    [[nodiscard]] static HelmholtzPlaneMode shear_y_of_z(double k, double amplitude);

    [[nodiscard]] double k_squared() const { return dot(wavevector, wavevector); }
    [[nodiscard]] bool is_solenoidal(double rel_tol = 1e-14) const;
};

/// Arnold-Beltrami-Childress field
///   W = (A sin kz + C cos ky, B sin kx + A cos kz, C sin ky + B cos kx),
/// an eigenfield of the curl with curl W = kappa W.
struct BeltramiABC {
    double A = 1.0;
    double B = 1.0;
    double C = 1.0;
    double kappa = 1.0;
};

using VorticityMode = std::variant<HelmholtzPlaneMode, BeltramiABC>;

/// Superposition of modes sharing one viscosity.
struct VorticityFieldSpec {
    std::vector<VorticityMode> modes;
    double nu = 0.0;

    /// True when every mode is divergence-free.
    [[nodiscard]] bool is_solenoidal() const;
    /// True for a non-empty spec made only of ABC modes with one common kappa, so that
    /// curl w = kappa w. Mixed wavenumbers leave a non-zero Lamb vector u x w.
    [[nodiscard]] bool is_helical() const;
    /// Common wavenumber of a helical spec. Throws PreconditionError otherwise.
    [[nodiscard]] double helical_wavenumber() const;
};

[[nodiscard]] Vec3 eval_field(const VorticityFieldSpec& spec, const Vec3& x, double t);
[[nodiscard]] Vec3 eval_time_derivative(const VorticityFieldSpec& spec, const Vec3& x, double t);
[[nodiscard]] Vec3 eval_laplacian(const VorticityFieldSpec& spec, const Vec3& x, double t);
[[nodiscard]] Vec3 eval_curl(const VorticityFieldSpec& spec, const Vec3& x, double t);
[[nodiscard]] double eval_divergence(const VorticityFieldSpec& spec, const Vec3& x, double t);

/// Spatial Jacobian d w_i / d x_j, row i = gradient of component i.
[[nodiscard]] std::array<Vec3, 3> eval_jacobian(const VorticityFieldSpec& spec, const Vec3& x,
                                                double t);

/// Radially symmetric Helmholtz mode amplitude * sin(k r) / r about `center`.
/// Scalar only; it is not used as a vector vorticity field.
struct SphericalMode {
    double k = 1.0;
    double amplitude = 1.0;
    Vec3 center;
};

/// amplitude sin(k r)/r, with the series amplitude k (1 - (kr)^2/6) below r = 1e-8/k.
[[nodiscard]] double spherical_value(const SphericalMode& mode, double r);
/// Value at x and time t including the decay exp(-nu k^2 t).
[[nodiscard]] double spherical_eval(const SphericalMode& mode, double nu, const Vec3& x, double t);
/// Analytic Laplacian, equal to -k^2 times the value.
[[nodiscard]] double spherical_laplacian(const SphericalMode& mode, double nu, const Vec3& x,
                                         double t);

} // namespace rflow
