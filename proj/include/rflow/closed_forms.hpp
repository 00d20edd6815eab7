/// @file closed_forms.hpp
/// @brief Special cases of the Riccati system that admit closed-form or quadrature
/// solutions: the Bernoulli reduction, the algebraic equilibrium, the circle branch,
/// the elliptic quadrature branch and the tangent (b = alpha a) branch.

#pragma once

#include "rflow/riccati.hpp"

#include <functional>

namespace rflow {

/// Coefficients of the scalar Riccati ODE a' = A a^2 + B a + D obtained by eliminating
/// b' between the two components of the system. Evaluated at one instant.
struct RiccatiCoefficients {
    double A = 0.0;
    double B = 0.0;
    double D = 0.0;
};

/// Throws DomainError when w_y = 0.
[[nodiscard]] RiccatiCoefficients riccati_coefficients(const VorticitySample& w, double b,
                                                       double db_dt);

/// Scalar function of time with an optional analytic derivative.
struct TimeFunction {
    std::function<double(double)> value;
    /// Empty means "differentiate numerically" (4th-order central differences).
    std::function<double(double)> derivative;
    bool constant = false;

    [[nodiscard]] static TimeFunction constant_value(double c);
    [[nodiscard]] double operator()(double t) const { return value(t); }
    [[nodiscard]] double rate(double t) const;
};

/// Absolute tolerance on the Bernoulli shift condition and on the algebraic-case condition
/// for constant coefficients.
inline constexpr double kConstantConditionTol = 1e-12;
/// Same, for time-varying coefficients (finite-difference derivative noise).
inline constexpr double kVaryingConditionTol = 1e-8;

/// Solves a' = A a^2 + B a + D with constant coefficients when delta^2 A + eps delta B +
/// eps^2 D = 0: a = delta/eps + s with s' = A s^2 + (2 delta A / eps + B) s integrated exactly.
/// Throws PreconditionError if the condition fails or eps = 0, AdmissibilityError if the
/// solution reaches a pole between 0 and t.
[[nodiscard]] double bernoulli_case_solve(double A, double B, double D, double delta,
                                          double epsilon, double a0, double t);

/// 4D - B^2/A + 2 (B/A)'. Zero when the algebraic equilibrium a = -B/(2A) solves the ODE.
[[nodiscard]] double condition_44_residual(const TimeFunction& A, const TimeFunction& B,
                                           const TimeFunction& D, double t);

/// Checks the residual against kConstantConditionTol when all three coefficients are
/// flagged constant, kVaryingConditionTol otherwise.
[[nodiscard]] bool check_condition_44(const TimeFunction& A, const TimeFunction& B,
                                      const TimeFunction& D, double t);

/// a(t) = -B(t) / (2 A(t)). Throws DomainError when A(t) = 0.
[[nodiscard]] double algebraic_case_solution(const TimeFunction& A, const TimeFunction& B,
                                             double t);

/// C = 1 circle branch: a = sin(Omega + phase0) with Omega = integral of w_z.
/// b continues as cos(Omega + phase0), which is the root sqrt(1 - a^2) until the first
/// turning point and stays on the trajectory of the full system beyond it.
[[nodiscard]] RiccatiState circle_solution(double wz_integral, double phase0 = 0.0);

/// Rational side condition w_z = R(a, sqrt(C^2 - a^2)) w_x of the elliptic branch.
using EllipticRational = std::function<double(double a, double root)>;

struct EllipticOptions {
    double relation_tol = 1e-10;
    double quadrature_tol = 1e-13;
};

/// Rate of the reduced scalar ODE a' = w_x F(a) on the circle a^2 + b^2 = C^2, where
/// F(a) = sqrt(C^2 - a^2) ((1 - C^2)/(2a) + R(a, sqrt(C^2 - a^2))).
[[nodiscard]] double elliptic_rate_factor(double C, const EllipticRational& R, double a);

/// Inverts  integral_{a0}^{a} da / F(a) = integral_0^t w_x dt  by quadrature and a
/// safeguarded Newton/bisection iteration. Throws AdmissibilityError when the trajectory
/// would cross a = 0 or |a| = C before t, PreconditionError for |a0| >= C or C <= 0.
[[nodiscard]] double elliptic_case_solve(double C, const EllipticRational& R,
                                         const std::function<double(double)>& wx_of_t,
                                         double a0, double t,
                                         const EllipticOptions& options = {});

/// Which inversion of the tangent-branch quadrature to use.
///  Corrected: a = tan(sqrt(alpha^2+1)/2 * I + phase0) / sqrt(alpha^2+1), which solves
///             a' = ((alpha^2+1) w_y / 2) a^2 + w_y / 2.
///  AsPrinted: a = tan((alpha^2+1)/2 * I + phase0) / (alpha^2+1), the historically printed
///             form; it does not solve that ODE unless alpha = 0.
enum class TangentConvention { Corrected, AsPrinted };

/// Tangent branch (b = alpha a, w_x = -alpha w_y, w_z = 0). `wy_integral` is the time
/// integral of w_y from the reference time. Throws AdmissibilityError within 1e-10 of a
/// tangent pole.
[[nodiscard]] double tangent_solution(double alpha, double wy_integral, double phase0 = 0.0,
                                      TangentConvention convention = TangentConvention::Corrected);

/// Right-hand side of the reduced tangent-branch ODE.
[[nodiscard]] double tangent_rate(double alpha, double wy, double a);

} // namespace rflow
