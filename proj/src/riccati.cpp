#include "rflow/riccati.hpp"

#include "rflow/errors.hpp"

#include <cmath>
#include <string>

namespace rflow {

RiccatiRate riccati_rhs(const RiccatiState& s, const VorticitySample& w) {
    const double a = s.a;
    const double b = s.b;
    const double half_wx = 0.5 * w.x;
    const double half_wy = 0.5 * w.y;
    return {
        half_wy * a * a - w.x * b * a - (half_wy * (b * b - 1.0) - w.z * b),
        -half_wx * b * b + w.y * a * b + half_wx * (a * a - 1.0) - w.z * a,
    };
}

std::complex<double> complex_riccati_rhs(std::complex<double> eta, const VorticitySample& w) {
    using namespace std::complex_literals;
    const std::complex<double> lead{0.5 * w.y, 0.5 * w.x};
    const std::complex<double> constant{0.5 * w.y, -0.5 * w.x};
    return lead * eta * eta - 1i * w.z * eta + constant;
}

std::complex<double> xi_from_eta(std::complex<double> eta) {
    const double r2 = std::norm(eta);
    if (!(r2 > 0.0)) {
        throw DomainError("xi_from_eta: eta = 0 has no companion coordinate");
    }
    return {-eta.real() / r2, -eta.imag() / r2};
}

PotentialVelocity stereographic_velocity(const RiccatiState& s, double gamma) {
    const double r2 = s.a * s.a + s.b * s.b;
    const double inv = 1.0 / (1.0 + r2);
    return {
        -gamma * (2.0 * s.a) * inv,
        -gamma * (2.0 * s.b) * inv,
        gamma * (1.0 - r2) * inv,
    };
}

namespace {

template <class Rate>
IntegrationResult integrate_impl(const RiccatiState& state0, Rate&& rate, double t0, double t1,
                                 const IntegrationOptions& opt) {
    if (!(t1 > t0)) {
        throw PreconditionError("integrate: t1 must exceed t0");
    }
    if (!(opt.dt > 0.0) || !std::isfinite(opt.dt)) {
        throw PreconditionError("integrate: dt must be positive and finite");
    }
    if (!std::isfinite(state0.a) || !std::isfinite(state0.b)) {
        throw PreconditionError("integrate: initial state is not finite");
    }

    IntegrationResult out;
    const auto full_steps = static_cast<std::size_t>(std::floor((t1 - t0) / opt.dt));
    out.trajectory.times.reserve(full_steps + 2);
    out.trajectory.states.reserve(full_steps + 2);
    out.trajectory.times.push_back(t0);
    out.trajectory.states.push_back(state0);

    auto escaped = [&](const RiccatiState& s) {
        return !(std::fabs(s.a) <= opt.escape_bound) || !(std::fabs(s.b) <= opt.escape_bound);
    };

    RiccatiState s = state0;
    std::size_t n = 0;
    double t = t0;
    while (t < t1) {
        // Step times are t0 + n*dt rather than accumulated sums so the grid stays uniform.
        double t_next = t0 + static_cast<double>(n + 1) * opt.dt;
        if (t_next > t1 - 1e-9 * opt.dt) {
            t_next = t1; // absorb round-off slivers into the last step
        }
        const double h = t_next - t;
        if (!(h > 0.0)) {
            break;
        }
        const double th = t + 0.5 * h;

        const RiccatiRate k1 = rate(t, s);
        const RiccatiRate k2 = rate(th, {s.a + 0.5 * h * k1.da_dt, s.b + 0.5 * h * k1.db_dt});
        const RiccatiRate k3 = rate(th, {s.a + 0.5 * h * k2.da_dt, s.b + 0.5 * h * k2.db_dt});
        const RiccatiRate k4 = rate(t_next, {s.a + h * k3.da_dt, s.b + h * k3.db_dt});

        s.a += h / 6.0 * (k1.da_dt + 2.0 * k2.da_dt + 2.0 * k3.da_dt + k4.da_dt);
        s.b += h / 6.0 * (k1.db_dt + 2.0 * k2.db_dt + 2.0 * k3.db_dt + k4.db_dt);
        t = t_next;
        ++n;

        if (escaped(s)) {
            out.status = IntegrationStatus::Escaped;
            out.escape_time = t;
            return out;
        }
        out.trajectory.times.push_back(t);
        out.trajectory.states.push_back(s);
    }
    return out;
}

} // namespace

IntegrationResult integrate(const RiccatiState& state0, const VorticityHistory& w, double t0,
                            double t1, const IntegrationOptions& options) {
    return integrate_impl(
        state0, [&](double t, const RiccatiState& s) { return riccati_rhs(s, w(t)); }, t0, t1,
        options);
}

IntegrationResult integrate(const RiccatiState& state0, const VorticityFeedback& w, double t0,
                            double t1, const IntegrationOptions& options) {
    return integrate_impl(
        state0, [&](double t, const RiccatiState& s) { return riccati_rhs(s, w(t, s)); }, t0, t1,
        options);
}

double radius_identity_residual(const Trajectory& traj, const VorticityHistory& w) {
    const std::size_t n = traj.size();
    if (n < 3 || traj.states.size() != n) {
        throw PreconditionError("radius_identity_residual: need at least 3 samples, got " +
                                std::to_string(n));
    }
    auto q = [&](std::size_t i) {
        const RiccatiState& s = traj.states[i];
        return s.a * s.a + s.b * s.b + 1.0;
    };

    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double h1 = traj.times[i] - traj.times[i - 1];
        const double h2 = traj.times[i + 1] - traj.times[i];
        // Three-point derivative, second order on non-uniform spacing.
        const double dq = (h1 * h1 * q(i + 1) - h2 * h2 * q(i - 1) + (h2 * h2 - h1 * h1) * q(i)) /
                          (h1 * h2 * (h1 + h2));
        const RiccatiState& s = traj.states[i];
        const VorticitySample wi = w(traj.times[i]);
        const double rhs = q(i) * (wi.y * s.a - wi.x * s.b);
        worst = std::fmax(worst, std::fabs(dq - rhs));
    }
    return worst;
}

} // namespace rflow
