#include "rflow/errors.hpp"
#include "rflow/io.hpp"
#include "rflow/riccati.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

using namespace rflow;

namespace {

// ULP distance between two doubles of the same sign class.
double ulps_apart(double x, double y) {
    if (x == y) {
        return 0.0;
    }
    const double scale = std::fmax(std::fabs(x), std::fabs(y));
    return std::fabs(x - y) / (scale * std::numeric_limits<double>::epsilon());
}

} // namespace

TEST(RiccatiRhs, ZeroVorticityFreezesState) {
    const RiccatiRate r = riccati_rhs({0.7, -2.3}, {0, 0, 0});
    EXPECT_EQ(r.da_dt, 0.0);
    EXPECT_EQ(r.db_dt, 0.0);
}

TEST(RiccatiRhs, OriginReducesToConstantTerm) {
    const RiccatiRate r = riccati_rhs({0, 0}, {1, 2, 3});
    EXPECT_DOUBLE_EQ(r.da_dt, 1.0);
    EXPECT_DOUBLE_EQ(r.db_dt, -0.5);
}

TEST(RiccatiRhs, PureWzIsRotation) {
    const RiccatiRate r = riccati_rhs({1, 1}, {0, 0, 1});
    EXPECT_DOUBLE_EQ(r.da_dt, 1.0);
    EXPECT_DOUBLE_EQ(r.db_dt, -1.0);
}

TEST(ComplexRhs, ConstantTermAtZero) {
    const auto v = complex_riccati_rhs({0, 0}, {1, 2, 3});
    EXPECT_DOUBLE_EQ(v.real(), 1.0);
    EXPECT_DOUBLE_EQ(v.imag(), -0.5);
}

TEST(ComplexRhs, ImaginaryUnitUnderWz) {
    const auto v = complex_riccati_rhs({0, 1}, {0, 0, 1});
    EXPECT_DOUBLE_EQ(v.real(), 1.0);
    EXPECT_DOUBLE_EQ(v.imag(), 0.0);
}

TEST(ComplexRhs, AgreesWithRealFormOnRandomInputs) {
    std::mt19937_64 rng(20240517);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int n = 0; n < 10000; ++n) {
        const RiccatiState s{u(rng), u(rng)};
        const Vec3 w{u(rng), u(rng), u(rng)};
        const RiccatiRate r = riccati_rhs(s, w);
        const auto c = complex_riccati_rhs({s.a, s.b}, w);
        // Different evaluation orders cancel differently; compare against the magnitude of
        // the largest term rather than the (possibly tiny) result.
        const double scale = 1.0 + std::fabs(w.x) + std::fabs(w.y) + std::fabs(w.z);
        const double mag = scale * (1.0 + s.a * s.a + s.b * s.b);
        ASSERT_LE(std::fabs(r.da_dt - c.real()), 4 * std::numeric_limits<double>::epsilon() * mag);
        ASSERT_LE(std::fabs(r.db_dt - c.imag()), 4 * std::numeric_limits<double>::epsilon() * mag);
    }
}

TEST(XiFromEta, Examples) {
    EXPECT_EQ(xi_from_eta({0, 1}), std::complex<double>(0, -1));
    EXPECT_EQ(xi_from_eta({1, 0}), std::complex<double>(-1, 0));
    EXPECT_EQ(xi_from_eta({1, 1}), std::complex<double>(-0.5, -0.5));
}

TEST(XiFromEta, InverseIsMinusConjugate) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int n = 0; n < 1000; ++n) {
        const std::complex<double> eta{u(rng), u(rng)};
        const auto xi = xi_from_eta(eta);
        EXPECT_LT(std::abs(1.0 / eta + std::conj(xi)), 1e-14 * std::abs(1.0 / eta));
    }
}

TEST(XiFromEta, ZeroIsDomainError) {
    EXPECT_THROW((void)xi_from_eta({0, 0}), DomainError);
}

TEST(Stereographic, Examples) {
    EXPECT_EQ(stereographic_velocity({0, 0}, 5), (Vec3{0, 0, 5}));
    const Vec3 eq = stereographic_velocity({1, 0}, 1);
    EXPECT_DOUBLE_EQ(eq.x, -1.0);
    EXPECT_DOUBLE_EQ(eq.y, 0.0);
    EXPECT_DOUBLE_EQ(eq.z, 0.0);
    const Vec3 p = stereographic_velocity({3, 4}, 1);
    EXPECT_DOUBLE_EQ(p.x, -3.0 / 13.0);
    EXPECT_DOUBLE_EQ(p.y, -4.0 / 13.0);
    EXPECT_DOUBLE_EQ(p.z, -12.0 / 13.0);
    EXPECT_DOUBLE_EQ(norm(p), 1.0);
}

TEST(Stereographic, SphereInvariantWithinEightUlps) {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int n = 0; n < 10000; ++n) {
        const double g = u(rng);
        const Vec3 v = stereographic_velocity({u(rng), u(rng)}, g);
        ASSERT_LE(ulps_apart(dot(v, v), g * g), 8.0);
    }
}

TEST(Integrate, ZeroVorticityIsConstant) {
    const auto r = integrate({0.3, -0.4}, [](double) { return Vec3{}; }, 0.0, 2.0, {0.01});
    ASSERT_TRUE(r.completed());
    for (const auto& s : r.trajectory.states) {
        EXPECT_EQ(s, (RiccatiState{0.3, -0.4}));
    }
}

TEST(Integrate, RotationQuarterTurn) {
    const auto r = integrate({1, 0}, [](double) { return Vec3{0, 0, 1}; }, 0.0,
                             std::numbers::pi / 2, {1e-3});
    const auto& end = r.trajectory.states.back();
    EXPECT_DOUBLE_EQ(r.trajectory.times.back(), std::numbers::pi / 2);
    EXPECT_NEAR(end.a, 0.0, 1e-8);
    EXPECT_NEAR(end.b, -1.0, 1e-8);
}

TEST(Integrate, TangentBranchValueAtUnitTime) {
    const auto r = integrate({0, 0}, [](double) { return Vec3{-1, 1, 0}; }, 0.0, 1.0, {1e-4});
    const double oracle = std::tan(1.0 / std::sqrt(2.0)) / std::sqrt(2.0);
    EXPECT_NEAR(r.trajectory.states.back().a, oracle, 1e-6);
    EXPECT_NEAR(r.trajectory.states.back().b, oracle, 1e-6);
    EXPECT_NEAR(oracle, 0.6042, 5e-5);
}

TEST(Integrate, FinalPartialStepLandsOnEndpoint) {
    const auto r = integrate({0, 0}, [](double) { return Vec3{0, 1, 0}; }, 0.0, 0.105, {0.01});
    EXPECT_EQ(r.trajectory.times.back(), 0.105);
    EXPECT_EQ(r.trajectory.size(), 12u);
    for (std::size_t i = 1; i < r.trajectory.size(); ++i) {
        EXPECT_GT(r.trajectory.times[i], r.trajectory.times[i - 1]);
    }
}

TEST(Integrate, FourthOrderConvergence) {
    const VorticityHistory w = [](double t) { return Vec3{std::sin(t), 1.0 + 0.5 * std::cos(2 * t), 0.3}; };
    const auto ref = integrate({0.1, 0.2}, w, 0.0, 1.0, {1e-4}).trajectory.states.back();
    double prev = 0.0;
    for (double dt : {0.1, 0.05, 0.025}) {
        const auto s = integrate({0.1, 0.2}, w, 0.0, 1.0, {dt}).trajectory.states.back();
        const double err = std::hypot(s.a - ref.a, s.b - ref.b);
        if (prev > 0.0) {
            EXPECT_NEAR(std::log2(prev / err), 4.0, 0.3);
        }
        prev = err;
    }
}

TEST(Integrate, EscapeIsReported) {
    // b stays 0 and a' = a^2 + 1, so a = tan t escapes at pi/2.
    const auto r = integrate({0, 0}, [](double) { return Vec3{0, 2, 0}; }, 0.0, 5.0, {1e-3});
    EXPECT_FALSE(r.completed());
    ASSERT_TRUE(r.escape_time.has_value());
    EXPECT_NEAR(*r.escape_time, std::numbers::pi / 2, 1e-2);
    for (const auto& s : r.trajectory.states) {
        EXPECT_TRUE(std::isfinite(s.a) && std::isfinite(s.b));
    }
}

TEST(Integrate, RejectsBadSpan) {
    const VorticityHistory w = [](double) { return Vec3{}; };
    EXPECT_THROW((void)integrate({0, 0}, w, 1.0, 1.0), PreconditionError);
    EXPECT_THROW((void)integrate({0, 0}, w, 0.0, 1.0, {-1.0}), PreconditionError);
    EXPECT_THROW((void)integrate({NAN, 0}, w, 0.0, 1.0), PreconditionError);
}

TEST(Integrate, NormConservedOverTenUnits) {
    const VorticityHistory w = [](double t) {
        return Vec3{0.4 * std::cos(t), 0.3 + 0.2 * std::sin(1.3 * t), 0.5 * std::cos(0.7 * t)};
    };
    const auto r = integrate({0.2, -0.1}, w, 0.0, 10.0, {1e-3});
    ASSERT_TRUE(r.completed());
    const double gamma = 2.5;
    for (const auto& s : r.trajectory.states) {
        ASSERT_NEAR(norm(stereographic_velocity(s, gamma)) / gamma, 1.0, 1e-6);
    }
}

TEST(Integrate, RotationLawHoldsAlongTrajectory) {
    const VorticityHistory w = [](double t) { return Vec3{0.5 * std::sin(t), 0.8, 0.3 * std::cos(t)}; };
    const double dt = 1e-3;
    const auto r = integrate({0.3, 0.1}, w, 0.0, 2.0, {dt});
    const auto& tr = r.trajectory;
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < tr.size(); ++i) {
        const Vec3 up = stereographic_velocity(tr.states[i + 1], 1.0);
        const Vec3 um = stereographic_velocity(tr.states[i - 1], 1.0);
        const Vec3 u = stereographic_velocity(tr.states[i], 1.0);
        const Vec3 rate = (up - um) * (1.0 / (2 * dt));
        worst = std::fmax(worst, max_abs(rate - cross(u, w(tr.times[i]))));
    }
    EXPECT_LT(worst, 1e-6);
}

TEST(Integrate, FeedbackKeepsRadiusWhenConditionHolds) {
    // w_y a - w_x b = 0 makes d/dt (a^2 + b^2) vanish.
    const VorticityFeedback w = [](double t, const RiccatiState& s) {
        const double wx = 0.5 + 0.3 * std::sin(t);
        return Vec3{wx, wx * s.b / s.a, 0.4};
    };
    const RiccatiState s0{0.6, 0.3};
    const auto r = integrate(s0, w, 0.0, 1.0, {1e-4});
    ASSERT_TRUE(r.completed());
    const double r0 = s0.a * s0.a + s0.b * s0.b;
    double drift = 0.0;
    for (const auto& s : r.trajectory.states) {
        drift = std::fmax(drift, std::fabs(s.a * s.a + s.b * s.b - r0));
    }
    EXPECT_LE(drift, 1e-8);
}

TEST(RadiusIdentity, VanishesForFrozenAndRotatingStates) {
    const VorticityHistory zero = [](double) { return Vec3{}; };
    const auto frozen = integrate({0.5, 0.5}, zero, 0.0, 1.0, {0.01});
    EXPECT_LE(radius_identity_residual(frozen.trajectory, zero), 1e-12);
    const VorticityHistory spin = [](double) { return Vec3{0, 0, 1}; };
    const auto rot = integrate({1, 0}, spin, 0.0, 1.0, {1e-3});
    EXPECT_LT(radius_identity_residual(rot.trajectory, spin), 1e-10);
}

TEST(RadiusIdentity, SmallForSmoothVorticity) {
    const VorticityHistory w = [](double t) { return Vec3{0.3 * std::cos(2 * t), 0.7, -0.2 + 0.1 * t}; };
    const auto r = integrate({0.2, 0.4}, w, 0.0, 1.0, {1e-3});
    EXPECT_LE(radius_identity_residual(r.trajectory, w), 1e-5);
}

TEST(RadiusIdentity, NeedsThreeSamples) {
    Trajectory t{{0.0, 1.0}, {{0, 0}, {0, 0}}};
    EXPECT_THROW((void)radius_identity_residual(t, [](double) { return Vec3{}; }), PreconditionError);
}

TEST(Timeseries, ZeroVorticityGivesConstantColumns) {
    const auto r = integrate({0.5, 0.25}, [](double) { return Vec3{}; }, 0.0, 1.0, {0.1});
    const auto rows = timeseries_from_trajectory(r.trajectory, 2.0);
    for (const auto& row : rows) {
        EXPECT_EQ(row.velocity, rows.front().velocity);
    }
}

TEST(Timeseries, RotationColumnsArePeriodic) {
    const double period = 2 * std::numbers::pi;
    const auto r = integrate({1, 0}, [](double) { return Vec3{0, 0, 1}; }, 0.0, period, {1e-3});
    const auto rows = timeseries_from_trajectory(r.trajectory, 1.0);
    EXPECT_NEAR(rows.back().velocity.x, rows.front().velocity.x, 1e-9);
    EXPECT_NEAR(rows.back().velocity.y, rows.front().velocity.y, 1e-9);
    // Midway the point sits on the opposite side of the circle.
    const auto& half = rows[rows.size() / 2];
    EXPECT_NEAR(half.velocity.x, -rows.front().velocity.x, 1e-3);
}
