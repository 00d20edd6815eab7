#include "rflow/gamma.hpp"

#include "rflow/errors.hpp"
#include "rflow/parallel.hpp"

#include <cmath>
#include <string>

namespace rflow {

GammaSample gamma_eval(const GammaExponential& g, double x, double y) {
    const double v = g.gamma0 * std::exp(-g.k * x - g.alpha * g.k * y);
    return {v, {-g.k * v, -g.alpha * g.k * v, 0.0}};
}

Vec3 grad_a_general(double a, double alpha, const GammaSample& gamma) {
    if (gamma.value == 0.0) {
        throw DomainError("grad_a_general: gamma = 0");
    }
    if (alpha == 0.0) {
        throw DomainError("grad_a_general: alpha = 0");
    }
    if (a == 0.0) {
        throw DomainError("grad_a_general: a = 0 (x-derivative relation is singular)");
    }
    const double s = alpha * alpha + 1.0;
    const double plus = 1.0 + s * a * a;
    const double minus = 1.0 - s * a * a;
    const Vec3& dg = gamma.gradient;
    return {
        (minus * dg.x - minus / alpha * dg.y + 2.0 * a * dg.z) * plus / (4.0 * s * a * gamma.value),
        alpha / (2.0 * s * gamma.value) * plus * dg.z,
        -plus * dg.y / (2.0 * alpha * gamma.value),
    };
}

Vec3 grad_a_from_gamma(const RiccatiState& state, const GammaExponential& g, double x, double y) {
    if (!(std::fabs(state.b - g.alpha * state.a) <= 1e-12 * (1.0 + std::fabs(state.a)))) {
        throw PreconditionError("grad_a_from_gamma: state is not on the branch b = alpha a");
    }
    if (g.alpha == 0.0) {
        throw DomainError("grad_a_from_gamma: alpha = 0");
    }
    const GammaSample gs = gamma_eval(g, x, y);
    if (gs.value == 0.0) {
        throw DomainError("grad_a_from_gamma: gamma = 0");
    }
    const double s = g.alpha * g.alpha + 1.0;
    const double plus = 1.0 + s * state.a * state.a;
    return {0.0, 0.0, -plus * gs.gradient.y / (2.0 * g.alpha * gs.value)};
}

double wy_constraint_argument(const GammaExponential& g, double x, double y, double wy,
                              double dwy_dz) {
    if (wy == 0.0) {
        throw DomainError("wy_constraint_argument: w_y = 0");
    }
    const GammaSample gs = gamma_eval(g, x, y);
    const double denom = g.alpha * gs.gradient.y * wy;
    if (denom == 0.0) {
        throw DomainError("wy_constraint_argument: alpha * dgamma/dy = 0");
    }
    return 2.0 * gs.value * dwy_dz / denom;
}

double a_from_wy(const GammaExponential& g, double x, double y, double wy, double dwy_dz,
                 TangentConvention convention) {
    const double arg = wy_constraint_argument(g, x, y, wy, dwy_dz);
    if (!(std::fabs(arg) <= 1.0)) {
        throw AdmissibilityError("a_from_wy: arcsin argument " + std::to_string(arg) +
                                 " outside [-1, 1]");
    }
    const double s = g.alpha * g.alpha + 1.0;
    const double scale = convention == TangentConvention::AsPrinted ? s : std::sqrt(s);
    return std::tan(0.5 * std::asin(arg)) / scale;
}

double wy_constraint_residual(const GammaExponential& g, double x, double y, double wy,
                              double dwy_dz, double a) {
    const GammaSample gs = gamma_eval(g, x, y);
    const double s = g.alpha * g.alpha + 1.0;
    const double theta = 2.0 * std::atan(s * a);
    return std::fabs(dwy_dz - g.alpha / (2.0 * gs.value) * gs.gradient.y * std::sin(theta) * wy);
}

double a_field(const GammaExponential& g, const HelmholtzPlaneMode& wy_mode, double nu,
               const Vec3& x, double t, TangentConvention convention) {
    const VorticityFieldSpec spec{{wy_mode}, nu};
    const double wy = eval_field(spec, x, t).y;
    const double dwy_dz = eval_jacobian(spec, x, t)[1].z;
    try {
        return a_from_wy(g, x.x, x.y, wy, dwy_dz, convention);
    } catch (const Error& e) {
        const std::string where =
            " at z = " + std::to_string(x.z) + ", t = " + std::to_string(t);
        if (dynamic_cast<const AdmissibilityError*>(&e) != nullptr) {
            throw AdmissibilityError(e.what() + where);
        }
        throw DomainError(e.what() + where);
    }
}

ConstraintResiduals constraint_residuals(const VelocitySampler& u_p, const Grid& grid, double t,
                                         FdOrder order) {
    require_stencil_fit(grid, order);
    VectorGridField field{grid, std::vector<Vec3>(grid.size())};
    parallel_for(grid.size(), [&](std::size_t n) { field.values[n] = u_p(grid.point(n), t); });

    const ScalarGridField div = fd_divergence(field, order);
    const VectorGridField curl = fd_curl(field, order);
    ConstraintResiduals r;
    r.continuity = norms_of(div.values).max;
    const ScalarGridField cx = component(curl, 0);
    const ScalarGridField cy = component(curl, 1);
    const ScalarGridField cz = component(curl, 2);
    r.curl_x = norms_of(cx.values).max;
    r.curl_y = norms_of(cy.values).max;
    r.curl_z = norms_of(cz.values).max;
    return r;
}

} // namespace rflow
