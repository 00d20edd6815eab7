#include "rflow/residuals.hpp"

#include "rflow/errors.hpp"
#include "rflow/parallel.hpp"

#include <cmath>
#include <limits>

namespace rflow {

FlowFields fields_of(const FlowSolution& sol) {
    FlowFields f;
    f.velocity = [sol](const Vec3& x, double t) { return velocity(sol, x, t); };
    f.pressure_over_rho = [sol](const Vec3& x, double t) { return pressure(sol, x, t).p_over_rho; };
    f.potential = [p = sol.potential](const Vec3& x) { return p(x); };
    f.nu = sol.nu;
    if (sol.irrotational) {
        f.irrotational = [sol](const Vec3& x, double t) { return irrotational_velocity(sol, x, t); };
        f.driving_vorticity = [part = *sol.irrotational, nu = sol.nu](const Vec3& x, double t) {
            return driving_vorticity(part, nu, x, t);
        };
    }
    if (sol.solenoidal) {
        f.solenoidal = [sol](const Vec3& x, double t) { return solenoidal_velocity(sol, x, t); };
        f.solenoidal_vorticity = [spec = sol.solenoidal->field](const Vec3& x, double t) {
            return eval_field(spec, x, t);
        };
    }
    return f;
}

double max_of(const ComponentNorms& n) {
    return std::fmax(n[0].max, std::fmax(n[1].max, n[2].max));
}

double default_time_step(double t) { return 1e-4 * std::fmax(1.0, t); }

namespace {

VectorGridField sample(const VectorSampler& s, const Grid& g, double t) {
    VectorGridField out{g, std::vector<Vec3>(g.size())};
    parallel_for(g.size(), [&](std::size_t n) { out.values[n] = s(g.point(n), t); });
    return out;
}

ScalarGridField sample(const std::function<double(const Vec3&)>& s, const Grid& g) {
    ScalarGridField out{g, std::vector<double>(g.size())};
    parallel_for(g.size(), [&](std::size_t n) { out.values[n] = s(g.point(n)); });
    return out;
}

// Central time derivative sampled on g.
VectorGridField time_derivative(const VectorSampler& s, const Grid& g, double t, double dt) {
    VectorGridField out{g, std::vector<Vec3>(g.size())};
    parallel_for(g.size(), [&](std::size_t n) {
        const Vec3 x = g.point(n);
        out.values[n] = (s(x, t + dt) - s(x, t - dt)) * (0.5 / dt);
    });
    return out;
}

ComponentNorms component_norms(const std::vector<Vec3>& r) {
    ComponentNorms out{};
    std::vector<double> buf(r.size());
    for (int c = 0; c < 3; ++c) {
        for (std::size_t n = 0; n < r.size(); ++n) {
            buf[n] = r[n][c];
        }
        out[static_cast<std::size_t>(c)] = norms_of(buf);
    }
    return out;
}

void check_time_step(double t, double dt) {
    if (!(dt > 0.0)) {
        throw PreconditionError("time step for the central difference must be positive");
    }
    if (t - dt < 0.0) {
        throw PreconditionError("central time difference needs t - dt_fd >= 0");
    }
}

} // namespace

Norms continuity_residual(const FlowFields& f, const Grid& grid, double t, FdOrder order) {
    require_stencil_fit(grid, order);
    const ScalarGridField div = fd_divergence(sample(f.velocity, grid, t), order);
    return norms_of(div.values);
}

ComponentNorms momentum_residual(const FlowFields& f, const Grid& grid, double t, double dt_fd,
                                 FdOrder order) {
    require_stencil_fit(grid, order);
    check_time_step(t, dt_fd);
    const int m = stencil_margin(order);

    const VectorGridField u = sample(f.velocity, grid, t);
    ScalarGridField p{grid, std::vector<double>(grid.size())};
    parallel_for(grid.size(), [&](std::size_t n) { p.values[n] = f.pressure_over_rho(grid.point(n), t); });
    const ScalarGridField phi =
        f.potential ? sample(f.potential, grid) : ScalarGridField{grid, std::vector<double>(grid.size(), 0.0)};

    const Grid inner = grid.interior(m);
    const VectorGridField du_dt = time_derivative(f.velocity, inner, t, dt_fd);
    const VectorGridField u_in = restrict_to_interior(u, m);
    const JacobianGridField jac = fd_jacobian(u, order);
    const VectorGridField grad_p = fd_gradient(p, order);
    const VectorGridField grad_phi = fd_gradient(phi, order);
    const VectorGridField lap_u = fd_laplacian(u, order);

    std::vector<Vec3> r(inner.size());
    for (std::size_t n = 0; n < r.size(); ++n) {
        const Vec3& v = u_in.values[n];
        const auto& J = jac.values[n];
        const Vec3 advection{dot(J[0], v), dot(J[1], v), dot(J[2], v)};
        r[n] = du_dt.values[n] + advection + grad_p.values[n] - f.nu * lap_u.values[n] +
               grad_phi.values[n];
    }
    return component_norms(r);
}

DecompositionResiduals decomposition_residuals(const FlowFields& f, const Grid& grid, double t,
                                               double dt_fd, FdOrder order) {
    require_stencil_fit(grid, order);
    check_time_step(t, dt_fd);
    const int m = stencil_margin(order);
    const Grid inner = grid.interior(m);
    DecompositionResiduals out;

    if (f.solenoidal) {
        const VectorGridField uw = sample(f.solenoidal, grid, t);
        const VectorGridField duw_dt = time_derivative(f.solenoidal, inner, t, dt_fd);
        const VectorGridField lap = fd_laplacian(uw, order);
        std::vector<Vec3> r(inner.size());
        for (std::size_t n = 0; n < r.size(); ++n) {
            r[n] = duw_dt.values[n] - f.nu * lap.values[n];
        }
        out.heat = component_norms(r);
    }

    if (f.irrotational) {
        const VectorGridField up = sample(f.irrotational, grid, t);
        const VectorGridField dup_dt = time_derivative(f.irrotational, inner, t, dt_fd);
        const VectorGridField up_in = restrict_to_interior(up, m);
        const VectorGridField w =
            f.driving_vorticity ? sample(f.driving_vorticity, inner, t)
                                : VectorGridField{inner, std::vector<Vec3>(inner.size())};
        VectorGridField forcing{inner, std::vector<Vec3>(inner.size())};
        if (f.solenoidal && f.solenoidal_vorticity) {
            const VectorGridField uw = sample(f.solenoidal, inner, t);
            const VectorGridField ws = sample(f.solenoidal_vorticity, inner, t);
            for (std::size_t n = 0; n < forcing.values.size(); ++n) {
                forcing.values[n] = cross(uw.values[n], ws.values[n]);
            }
        }
        std::vector<Vec3> r(inner.size());
        for (std::size_t n = 0; n < r.size(); ++n) {
            r[n] = dup_dt.values[n] - cross(up_in.values[n], w.values[n]) - forcing.values[n];
        }
        out.rotation = component_norms(r);
        out.curl_free = component_norms(fd_curl(up, order).values);
    }
    return out;
}

ResidualReport verify(const FlowFields& f, const Grid& grid, double t,
                      const ResidualOptions& options) {
    ResidualReport rep;
    rep.grid = grid;
    rep.t = t;
    rep.order = options.order;
    rep.dt_fd = options.dt_fd > 0.0 ? options.dt_fd : default_time_step(t);
    rep.continuity = continuity_residual(f, grid, t, options.order);
    rep.momentum = momentum_residual(f, grid, t, rep.dt_fd, options.order);
    const DecompositionResiduals d = decomposition_residuals(f, grid, t, rep.dt_fd, options.order);
    rep.heat = d.heat;
    rep.rotation = d.rotation;
    rep.curl_free = d.curl_free;
    return rep;
}

double fit_order(std::span<const double> h, std::span<const double> err) {
    const std::size_t n = h.size();
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double lx = std::log(h[i]);
        const double ly = std::log(std::fmax(err[i], std::numeric_limits<double>::min()));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double dn = static_cast<double>(n);
    return (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
}

std::vector<ObservedOrder> convergence_study(const FlowFields& f, std::span<const Grid> grids,
                                             double t, const ResidualOptions& options,
                                             double exact_threshold) {
    if (grids.size() < 3) {
        throw PreconditionError("convergence_study: need at least three grids");
    }
    std::vector<ObservedOrder> out(5);
    out[0].residual = "continuity";
    out[1].residual = "momentum";
    out[2].residual = "heat";
    out[3].residual = "rotation";
    out[4].residual = "curl_free";

    for (const Grid& g : grids) {
        const ResidualReport rep = verify(f, g, t, options);
        const std::array<double, 5> values{rep.continuity.max, max_of(rep.momentum),
                                           max_of(rep.heat), max_of(rep.rotation),
                                           max_of(rep.curl_free)};
        for (std::size_t i = 0; i < out.size(); ++i) {
            out[i].h.push_back(g.h);
            out[i].max_norm.push_back(values[i]);
        }
    }
    for (auto& series : out) {
        bool exact = true;
        for (double e : series.max_norm) {
            exact = exact && e <= exact_threshold;
        }
        series.exact = exact;
        series.order = exact ? std::numeric_limits<double>::quiet_NaN()
                             : fit_order(series.h, series.max_norm);
    }
    return out;
}

} // namespace rflow
