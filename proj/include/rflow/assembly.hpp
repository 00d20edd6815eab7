/// @file assembly.hpp
/// @brief Candidate Navier-Stokes solutions u = u_p + u_w with Bernoulli pressure.
///
/// u_p is the irrotational part produced by the stereographic map of the tangent-branch
/// state (a, alpha a) scaled by gamma(x, y). u_w = beta w is the solenoidal part built from
/// a decaying vorticity spec. For a helical spec (curl w = kappa w with kappa beta = 1)
/// the Lamb vector u_w x w vanishes and u_w alone is an exact solution.

#pragma once

#include "rflow/gamma.hpp"
#include "rflow/grid.hpp"
#include "rflow/vorticity.hpp"

#include <optional>
#include <string>
#include <vector>

namespace rflow {

/// How the tangent-branch coordinate a(x, t) is obtained.
enum class RiccatiSource {
    /// a from the constraint chain tying w_y(z, t) to gamma (arcsin relation).
    ConstraintChain,
    /// a from the tangent closed form driven by the time integral of w_y(z, t).
    TangentEvolution,
};

struct IrrotationalPart {
    GammaExponential gamma;
    /// Source of w_y(z, t); only its y component is used.
    HelmholtzPlaneMode wy_mode = HelmholtzPlaneMode::shear_y_of_z(1.0, 1.0);
    RiccatiSource source = RiccatiSource::ConstraintChain;
    TangentConvention convention = TangentConvention::AsPrinted;
};

struct SolenoidalPart {
    double beta = 1.0;
    VorticityFieldSpec field;
};

/// phi = c + g . x + (q_x x^2 + q_y y^2 + q_z z^2) / 2; the body force is -grad phi.
struct PolynomialPotential {
    double constant = 0.0;
    Vec3 linear;
    Vec3 quadratic;

    [[nodiscard]] double operator()(const Vec3& x) const {
        return constant + dot(linear, x) +
               0.5 * (quadratic.x * x.x * x.x + quadratic.y * x.y * x.y + quadratic.z * x.z * x.z);
    }
};

/// Bernoulli closure p/rho = -phi - |u|^2/2 (gauge constant 0). Zero is a negative
/// control that drops the closure entirely.
enum class PressureClosure { Bernoulli, Zero };

struct FlowSolution {
    std::optional<IrrotationalPart> irrotational;
    std::optional<SolenoidalPart> solenoidal;
    PolynomialPotential potential;
    double nu = 0.1;
    double rho = 1.0;
    PressureClosure closure = PressureClosure::Bernoulli;

    /// Throws PreconditionError for rho <= 0, nu <= 0, a solenoidal spec that is not
    /// helical, a viscosity mismatch, or kappa beta != 1.
    void validate() const;
};

struct PressureSample {
    double p_over_rho = 0.0;
};

[[nodiscard]] RiccatiState irrotational_state(const IrrotationalPart& part, double nu,
                                              const Vec3& x, double t);
/// (-alpha w_y, w_y, 0): the vorticity that drives the tangent-branch state.
[[nodiscard]] Vec3 driving_vorticity(const IrrotationalPart& part, double nu, const Vec3& x,
                                     double t);

[[nodiscard]] Vec3 irrotational_velocity(const FlowSolution& sol, const Vec3& x, double t);
[[nodiscard]] Vec3 solenoidal_velocity(const FlowSolution& sol, const Vec3& x, double t);
[[nodiscard]] Vec3 velocity(const FlowSolution& sol, const Vec3& x, double t);
[[nodiscard]] PressureSample pressure(const FlowSolution& sol, const Vec3& x, double t);

/// Decaying Beltrami (Trkal) flow u = beta w. Throws PreconditionError unless
/// |kappa beta - 1| <= 1e-12.
[[nodiscard]] FlowSolution trkal_solution(double beta, const BeltramiABC& abc, double nu,
                                          double rho = 1.0);

struct PointFailure {
    std::size_t index = 0;
    std::string message;
};

struct SampledFields {
    Grid grid;
    std::vector<Vec3> velocity;
    std::vector<double> pressure;
    /// Points where the solution is not admissible; their samples are NaN.
    std::vector<PointFailure> failures;
};

[[nodiscard]] SampledFields sample_grid(const FlowSolution& sol, const Grid& grid, double t);

/// (1/2) sum |u|^2 h^3 over the grid points, summed in index order.
[[nodiscard]] double kinetic_energy(const FlowSolution& sol, const Grid& grid, double t);

} // namespace rflow
