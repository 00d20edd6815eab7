/// @file gamma.hpp
/// @brief Scale function gamma of the irrotational part and the constraint chain that ties
/// it to the tangent-branch Riccati state.
///
/// The supported constructive family is gamma = gamma0 exp(-k x - alpha k y), for which
/// d(gamma)/dz = 0 and d(gamma)/dx = d(gamma)/dy / alpha. Under these relations the
/// tangent-branch coordinate a depends on (z, t) only and can be read off w_y(z, t).

#pragma once

#include "rflow/closed_forms.hpp"
#include "rflow/finite_difference.hpp"
#include "rflow/vorticity.hpp"

#include <functional>

namespace rflow {

struct GammaExponential {
    double gamma0 = 1.0;
    double k = 1.0;
    /// Shared with the tangent branch b = alpha a.
    double alpha = 1.0;
};

struct GammaSample {
    double value = 0.0;
    Vec3 gradient;
};

[[nodiscard]] GammaSample gamma_eval(const GammaExponential& g, double x, double y);

/// Gradient of a from the continuity and curl-free conditions of the tangent-branch
/// velocity, for an arbitrary gamma sample:
///   da/dy = alpha/(2 (alpha^2+1) gamma) (1 + (alpha^2+1) a^2) dgamma/dz
///   da/dz = -1/(2 alpha gamma) (1 + (alpha^2+1) a^2) dgamma/dy
///   da/dx = ((1-(alpha^2+1)a^2)(dgamma/dx - dgamma/dy / alpha) + 2a dgamma/dz)
///           (1+(alpha^2+1)a^2) / (4 (alpha^2+1) a gamma)
/// Throws DomainError for gamma = 0, alpha = 0 or a = 0.
[[nodiscard]] Vec3 grad_a_general(double a, double alpha, const GammaSample& gamma);

/// Same relations specialised to the exponential family, where da/dx = da/dy = 0 and
/// da/dz = -(1 + (alpha^2+1) a^2) dgamma/dy / (2 alpha gamma). The state must lie on the
/// tangent branch (|b - alpha a| <= 1e-12 (1 + |a|)), otherwise PreconditionError.
[[nodiscard]] Vec3 grad_a_from_gamma(const RiccatiState& state, const GammaExponential& g,
                                     double x, double y);

/// X = 2 gamma (dw_y/dz) / (alpha (dgamma/dy) w_y), the sine of (alpha^2+1) times the
/// time integral of w_y. Throws DomainError for w_y = 0 or dgamma/dy = 0.
[[nodiscard]] double wy_constraint_argument(const GammaExponential& g, double x, double y,
                                            double wy, double dwy_dz);

/// a = tan(arcsin(X) / 2) / s with s = alpha^2+1 (AsPrinted) or sqrt(alpha^2+1)
/// (Corrected). Throws AdmissibilityError when |X| > 1.
[[nodiscard]] double a_from_wy(const GammaExponential& g, double x, double y, double wy,
                               double dwy_dz,
                               TangentConvention convention = TangentConvention::AsPrinted);

/// |dw_y/dz - alpha/(2 gamma) dgamma/dy sin(Theta) w_y| with Theta recovered from a through
/// the printed tangent relation Theta = 2 arctan((alpha^2+1) a).
[[nodiscard]] double wy_constraint_residual(const GammaExponential& g, double x, double y,
                                            double wy, double dwy_dz, double a);

/// a at a spatial point, with w_y and dw_y/dz taken from a vorticity mode (its y
/// component). AdmissibilityError messages carry the offending (z, t).
[[nodiscard]] double a_field(const GammaExponential& g, const HelmholtzPlaneMode& wy_mode,
                             double nu, const Vec3& x, double t,
                             TangentConvention convention = TangentConvention::AsPrinted);

/// Max-norm FD residuals of the continuity and curl-free conditions of u_p.
struct ConstraintResiduals {
    double continuity = 0.0;
    double curl_x = 0.0;
    double curl_y = 0.0;
    double curl_z = 0.0;
};

using VelocitySampler = std::function<Vec3(const Vec3& x, double t)>;

[[nodiscard]] ConstraintResiduals constraint_residuals(const VelocitySampler& u_p,
                                                       const Grid& grid, double t,
                                                       FdOrder order = FdOrder::Second);

} // namespace rflow
