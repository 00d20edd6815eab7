#include "rflow/closed_forms.hpp"

#include "rflow/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace rflow {

RiccatiCoefficients riccati_coefficients(const VorticitySample& w, double b, double db_dt) {
    if (w.y == 0.0) {
        throw DomainError("riccati_coefficients: w_y = 0");
    }
    const double planar = w.x * w.x + w.y * w.y;
    RiccatiCoefficients c;
    c.A = planar / (2.0 * w.y);
    c.B = -(w.x * w.z) / w.y;
    c.D = -(w.x / w.y) * db_dt - planar / (2.0 * w.y) * b * b + w.z * b + 0.5 * w.y -
          (w.x * w.x) / (2.0 * w.y);
    return c;
}

TimeFunction TimeFunction::constant_value(double c) {
    TimeFunction f;
    f.value = [c](double) { return c; };
    f.derivative = [](double) { return 0.0; };
    f.constant = true;
    return f;
}

namespace {

double fd4_derivative(const std::function<double(double)>& f, double t) {
    const double h = 1e-3 * std::fmax(1.0, std::fabs(t));
    return (-f(t + 2.0 * h) + 8.0 * f(t + h) - 8.0 * f(t - h) + f(t - 2.0 * h)) / (12.0 * h);
}

// (e^{Pt} - 1) / P with the P -> 0 limit.
double expm1_over(double P, double t) {
    return P == 0.0 ? t : std::expm1(P * t) / P;
}

} // namespace

double TimeFunction::rate(double t) const {
    if (constant) {
        return 0.0;
    }
    if (derivative) {
        return derivative(t);
    }
    return fd4_derivative(value, t);
}

double bernoulli_case_solve(double A, double B, double D, double delta, double epsilon, double a0,
                            double t) {
    if (epsilon == 0.0) {
        throw PreconditionError("bernoulli_case_solve: epsilon must be non-zero");
    }
    const double condition = delta * delta * A + epsilon * delta * B + epsilon * epsilon * D;
    if (!(std::fabs(condition) <= kConstantConditionTol)) {
        throw PreconditionError("bernoulli_case_solve: delta^2 A + eps delta B + eps^2 D = " +
                                std::to_string(condition) + " is not zero");
    }
    const double shift = delta / epsilon;
    const double s0 = a0 - shift;
    if (s0 == 0.0) {
        return shift;
    }
    // s' = A s^2 + P s  =>  s(t) = s0 e^{Pt} / (1 - A s0 (e^{Pt} - 1)/P)
    const double P = 2.0 * shift * A + B;
    const double denom = 1.0 - A * s0 * expm1_over(P, t);
    // denom is monotone in t and equals 1 at t = 0, so a sign change means a pole was crossed.
    if (!(denom > 0.0)) {
        throw AdmissibilityError("bernoulli_case_solve: solution escapes to infinity before t = " +
                                 std::to_string(t));
    }
    return shift + s0 * std::exp(P * t) / denom;
}

double condition_44_residual(const TimeFunction& A, const TimeFunction& B, const TimeFunction& D,
                             double t) {
    const double a = A(t);
    if (a == 0.0) {
        throw DomainError("condition_44_residual: A(t) = 0");
    }
    const double b = B(t);
    double ratio_rate = 0.0;
    if ((A.constant || A.derivative) && (B.constant || B.derivative)) {
        ratio_rate = (B.rate(t) * a - b * A.rate(t)) / (a * a);
    } else {
        ratio_rate = fd4_derivative([&](double s) { return B(s) / A(s); }, t);
    }
    return 4.0 * D(t) - b * b / a + 2.0 * ratio_rate;
}

bool check_condition_44(const TimeFunction& A, const TimeFunction& B, const TimeFunction& D,
                        double t) {
    const bool all_constant = A.constant && B.constant && D.constant;
    const double tol = all_constant ? kConstantConditionTol : kVaryingConditionTol;
    return std::fabs(condition_44_residual(A, B, D, t)) <= tol;
}

double algebraic_case_solution(const TimeFunction& A, const TimeFunction& B, double t) {
    const double a = A(t);
    if (a == 0.0) {
        throw DomainError("algebraic_case_solution: A(t) = 0");
    }
    return -B(t) / (2.0 * a);
}

RiccatiState circle_solution(double wz_integral, double phase0) {
    const double phase = wz_integral + phase0;
    return {std::sin(phase), std::cos(phase)};
}

double elliptic_rate_factor(double C, const EllipticRational& R, double a) {
    const double root = std::sqrt(std::fmax(C * C - a * a, 0.0));
    return root * ((1.0 - C * C) / (2.0 * a) + R(a, root));
}

namespace {

struct EllipticBranch {
    double C;
    const EllipticRational& R;

    [[nodiscard]] double root(double a) const { return std::sqrt(std::fmax(C * C - a * a, 0.0)); }

    // g(a) = (1 - C^2) + 2 a R; F(a) = root * g / (2a).
    [[nodiscard]] double g(double a) const { return (1.0 - C * C) + 2.0 * a * R(a, root(a)); }

    // dG/da = 1/F = 2a / (root g). Finite at a = 0, integrably singular at |a| = C.
    [[nodiscard]] double inverse_rate(double a) const {
        const double r = root(a);
        const double gv = g(a);
        if (r == 0.0 || gv == 0.0) {
            return std::copysign(std::numeric_limits<double>::infinity(), a * gv);
        }
        return 2.0 * a / (r * gv);
    }
};

double sign_of(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

} // namespace

double elliptic_case_solve(double C, const EllipticRational& R,
                           const std::function<double(double)>& wx_of_t, double a0, double t,
                           const EllipticOptions& opt) {
    if (!(C > 0.0)) {
        throw PreconditionError("elliptic_case_solve: C must be positive");
    }
    if (!(std::fabs(a0) < C)) {
        throw PreconditionError("elliptic_case_solve: |a0| must be below C");
    }
    if (!(t >= 0.0)) {
        throw PreconditionError("elliptic_case_solve: t must be non-negative");
    }
    const EllipticBranch branch{C, R};
    if (t == 0.0 || branch.g(a0) == 0.0) {
        return a0; // stationary point of a' = w_x F(a)
    }

    const double omega =
        boost::math::quadrature::gauss_kronrod<double, 31>::integrate(wx_of_t, 0.0, t, 15, 1e-14);
    if (omega == 0.0) {
        return a0;
    }

    // G(a) = integral_{a0}^{a} 1/F. Pick the direction along which G approaches omega.
    double dir = 0.0;
    if (a0 != 0.0) {
        dir = sign_of(omega) * sign_of(branch.inverse_rate(a0));
    } else {
        // Near a = 0, G ~ a^2 / (C g(0)) on both sides; the a >= 0 side is used.
        if (sign_of(omega) != sign_of(branch.g(0.0))) {
            throw AdmissibilityError("elliptic_case_solve: trajectory cannot leave a = 0 in the "
                                     "direction required by the w_x integral");
        }
        dir = 1.0;
    }
    const double side = a0 != 0.0 ? sign_of(a0) : 1.0;
    // Branch boundary: a = 0 or |a| = C, whichever lies ahead.
    double end = (dir == side) ? side * C : 0.0;
    bool end_reachable = true;

    // An interior zero of g is an equilibrium: G diverges there and the trajectory never
    // reaches it, so it bounds the search instead.
    constexpr int kScan = 512;
    double prev_a = a0;
    double prev_g = branch.g(a0);
    for (int i = 1; i <= kScan; ++i) {
        const double a = a0 + (end - a0) * static_cast<double>(i) / kScan;
        const double ga = (i == kScan) ? branch.g(a - (end - a0) * 1e-12) : branch.g(a);
        if (sign_of(ga) != sign_of(prev_g)) {
            double lo = prev_a;
            double hi = a;
            for (int k = 0; k < 200 && std::fabs(hi - lo) > 4e-16 * C; ++k) {
                const double mid = 0.5 * (lo + hi);
                (sign_of(branch.g(mid)) == sign_of(prev_g) ? lo : hi) = mid;
            }
            end = hi;
            end_reachable = false;
            break;
        }
        prev_a = a;
        prev_g = ga;
    }

    boost::math::quadrature::tanh_sinh<double> quad;
    auto G = [&](double a) {
        if (a == a0) {
            return 0.0;
        }
        const double lo = std::fmin(a0, a);
        const double hi = std::fmax(a0, a);
        const double v = quad.integrate([&](double s) { return branch.inverse_rate(s); }, lo, hi,
                                        opt.quadrature_tol);
        return a > a0 ? v : -v;
    };

    if (end_reachable) {
        const double g_end = G(end);
        if (std::fabs(omega) > std::fabs(g_end)) {
            throw AdmissibilityError("elliptic_case_solve: trajectory reaches the branch "
                                     "boundary a = " + std::to_string(end) + " before t = " +
                                     std::to_string(t));
        }
    }

    // Safeguarded Newton on phi(a) = G(a) - omega, dphi/da = 1/F(a).
    double lo = a0;
    double hi = end;
    double a = a0 + 0.5 * (end - a0);
    double phi = G(a) - omega;
    for (int iter = 0; iter < 200; ++iter) {
        if (std::fabs(phi) <= 0.1 * opt.relation_tol) {
            return a;
        }
        // phi(a0) = -omega, so a bracket side is identified by the sign of phi.
        (sign_of(phi) == -sign_of(omega) ? lo : hi) = a;
        const double slope = branch.inverse_rate(a);
        double next = a - phi / slope;
        const bool inside = std::isfinite(next) && (next - lo) * (next - hi) < 0.0;
        if (!inside) {
            next = 0.5 * (lo + hi);
        }
        if (std::fabs(next - a) <= 1e-16 * C) {
            break;
        }
        a = next;
        phi = G(a) - omega;
    }
    if (!(std::fabs(phi) <= opt.relation_tol)) {
        throw AdmissibilityError("elliptic_case_solve: implicit relation not resolved to "
                                 "tolerance (residual " + std::to_string(phi) + ")");
    }
    return a;
}

double tangent_solution(double alpha, double wy_integral, double phase0,
                        TangentConvention convention) {
    const double s = alpha * alpha + 1.0;
    const double scale = convention == TangentConvention::Corrected ? std::sqrt(s) : s;
    const double arg = 0.5 * scale * wy_integral + phase0;
    const double to_pole = std::remainder(arg - 0.5 * std::numbers::pi, std::numbers::pi);
    if (std::fabs(to_pole) < 1e-10) {
        throw AdmissibilityError("tangent_solution: argument " + std::to_string(arg) +
                                 " is at a tangent pole");
    }
    return std::tan(arg) / scale;
}

double tangent_rate(double alpha, double wy, double a) {
    return 0.5 * (alpha * alpha + 1.0) * wy * a * a + 0.5 * wy;
}

} // namespace rflow
