#include "rflow/assembly.hpp"

#include "rflow/errors.hpp"
#include "rflow/parallel.hpp"

#include <cmath>
#include <limits>

namespace rflow {

void FlowSolution::validate() const {
    if (!(rho > 0.0)) {
        throw PreconditionError("flow solution: rho must be positive");
    }
    if (!(nu > 0.0)) {
        throw PreconditionError("flow solution: nu must be positive");
    }
    if (solenoidal) {
        if (solenoidal->field.nu != nu) {
            throw PreconditionError("flow solution: vorticity spec viscosity differs from nu");
        }
        if (!solenoidal->field.is_helical()) {
            throw PreconditionError("flow solution: solenoidal part must be helical "
                                    "(ABC modes sharing one kappa)");
        }
        const double kappa = solenoidal->field.helical_wavenumber();
        if (!(std::fabs(kappa * solenoidal->beta - 1.0) <= 1e-12)) {
            throw PreconditionError("flow solution: helical part needs kappa * beta = 1");
        }
    }
}

namespace {

struct WySample {
    double value;      // w_y(z, t)
    double integral;   // time integral of w_y from 0 to t
};

WySample wy_at(const HelmholtzPlaneMode& mode, double nu, const Vec3& x, double t) {
    const VorticityFieldSpec spec{{mode}, nu};
    const double now = eval_field(spec, x, t).y;
    const double initial = eval_field(spec, x, 0.0).y;
    const double rate = nu * mode.k_squared();
    // integral_0^t exp(-rate s) ds = -expm1(-rate t) / rate
    const double weight = rate == 0.0 ? t : -std::expm1(-rate * t) / rate;
    return {now, initial * weight};
}

} // namespace

RiccatiState irrotational_state(const IrrotationalPart& part, double nu, const Vec3& x,
                                double t) {
    double a = 0.0;
    if (part.source == RiccatiSource::ConstraintChain) {
        a = a_field(part.gamma, part.wy_mode, nu, x, t, part.convention);
    } else {
        a = tangent_solution(part.gamma.alpha, wy_at(part.wy_mode, nu, x, t).integral, 0.0,
                             part.convention);
    }
    return {a, part.gamma.alpha * a};
}

Vec3 driving_vorticity(const IrrotationalPart& part, double nu, const Vec3& x, double t) {
    const double wy = wy_at(part.wy_mode, nu, x, t).value;
    return {-part.gamma.alpha * wy, wy, 0.0};
}

Vec3 irrotational_velocity(const FlowSolution& sol, const Vec3& x, double t) {
    if (!sol.irrotational) {
        return {};
    }
    const RiccatiState s = irrotational_state(*sol.irrotational, sol.nu, x, t);
    return stereographic_velocity(s, gamma_eval(sol.irrotational->gamma, x.x, x.y).value);
}

Vec3 solenoidal_velocity(const FlowSolution& sol, const Vec3& x, double t) {
    if (!sol.solenoidal) {
        return {};
    }
    return sol.solenoidal->beta * eval_field(sol.solenoidal->field, x, t);
}

Vec3 velocity(const FlowSolution& sol, const Vec3& x, double t) {
    return irrotational_velocity(sol, x, t) + solenoidal_velocity(sol, x, t);
}

PressureSample pressure(const FlowSolution& sol, const Vec3& x, double t) {
    if (sol.closure == PressureClosure::Zero) {
        return {0.0};
    }
    const Vec3 u = velocity(sol, x, t);
    return {-sol.potential(x) - 0.5 * dot(u, u)};
}

FlowSolution trkal_solution(double beta, const BeltramiABC& abc, double nu, double rho) {
    if (!(std::fabs(abc.kappa * beta - 1.0) <= 1e-12)) {
        throw PreconditionError("trkal_solution: kappa must equal 1/beta");
    }
    FlowSolution sol;
    sol.solenoidal = SolenoidalPart{beta, VorticityFieldSpec{{abc}, nu}};
    sol.nu = nu;
    sol.rho = rho;
    sol.validate();
    return sol;
}

SampledFields sample_grid(const FlowSolution& sol, const Grid& grid, double t) {
    grid.validate();
    SampledFields out;
    out.grid = grid;
    const std::size_t n = grid.size();
    out.velocity.resize(n);
    out.pressure.resize(n);
    std::vector<std::string> errors(n);
    parallel_for(n, [&](std::size_t i) {
        const Vec3 x = grid.point(i);
        try {
            out.velocity[i] = velocity(sol, x, t);
            out.pressure[i] = pressure(sol, x, t).p_over_rho;
        } catch (const Error& e) {
            const double nan = std::numeric_limits<double>::quiet_NaN();
            out.velocity[i] = {nan, nan, nan};
            out.pressure[i] = nan;
            errors[i] = e.what();
        }
    });
    for (std::size_t i = 0; i < n; ++i) {
        if (!errors[i].empty()) {
            out.failures.push_back({i, std::move(errors[i])});
        }
    }
    return out;
}

double kinetic_energy(const FlowSolution& sol, const Grid& grid, double t) {
    grid.validate();
    std::vector<double> density(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) {
        const Vec3 u = velocity(sol, grid.point(i), t);
        density[i] = dot(u, u);
    });
    double sum = 0.0;
    for (double d : density) {
        sum += d;
    }
    return 0.5 * sum * grid.h * grid.h * grid.h;
}

} // namespace rflow
