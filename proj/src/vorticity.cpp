#include "rflow/vorticity.hpp"

#include "rflow/errors.hpp"

#include <cmath>
#include <complex>
#include <numbers>

namespace rflow {

HelmholtzPlaneMode HelmholtzPlaneMode::shear_y_of_z(double k, double amplitude) {
    HelmholtzPlaneMode m;
    m.wavevector = {0.0, 0.0, k};
    m.amplitude = {0.0, amplitude, 0.0};
    m.phase = {0.0, -0.5 * std::numbers::pi, 0.0};
    return m;
}

bool HelmholtzPlaneMode::is_solenoidal(double rel_tol) const {
    std::complex<double> sum{0.0, 0.0};
    for (int i = 0; i < 3; ++i) {
        sum += amplitude[i] * wavevector[i] * std::polar(1.0, phase[static_cast<std::size_t>(i)]);
    }
    return std::abs(sum) <= rel_tol * (norm(amplitude) * norm(wavevector) + 1e-300);
}

namespace {

struct ModeSample {
    Vec3 value;
    std::array<Vec3, 3> jacobian;
    double k_squared;
};

ModeSample sample(const HelmholtzPlaneMode& m, const Vec3& x, double nu, double t) {
    const double k2 = m.k_squared();
    const double decay = std::exp(-nu * k2 * t);
    const double theta = dot(m.wavevector, x);
    ModeSample out{{}, {}, k2};
    for (int i = 0; i < 3; ++i) {
        const double arg = theta + m.phase[static_cast<std::size_t>(i)];
        const double amp = m.amplitude[i] * decay;
        out.value[i] = amp * std::cos(arg);
        out.jacobian[static_cast<std::size_t>(i)] = m.wavevector * (-amp * std::sin(arg));
    }
    return out;
}

ModeSample sample(const BeltramiABC& m, const Vec3& x, double nu, double t) {
    const double k = m.kappa;
    const double decay = std::exp(-nu * k * k * t);
    const double A = m.A * decay;
    const double B = m.B * decay;
    const double C = m.C * decay;
    const double sx = std::sin(k * x.x), cx = std::cos(k * x.x);
    const double sy = std::sin(k * x.y), cy = std::cos(k * x.y);
    const double sz = std::sin(k * x.z), cz = std::cos(k * x.z);

    ModeSample out;
    out.k_squared = k * k;
    out.value = {A * sz + C * cy, B * sx + A * cz, C * sy + B * cx};
    out.jacobian[0] = {0.0, -C * k * sy, A * k * cz};
    out.jacobian[1] = {B * k * cx, 0.0, -A * k * sz};
    out.jacobian[2] = {-B * k * sx, C * k * cy, 0.0};
    return out;
}

template <class Visitor>
void for_each_mode(const VorticityFieldSpec& spec, const Vec3& x, double t, Visitor&& visit) {
    for (const auto& mode : spec.modes) {
        std::visit([&](const auto& m) { visit(sample(m, x, spec.nu, t)); }, mode);
    }
}

} // namespace

bool VorticityFieldSpec::is_solenoidal() const {
    for (const auto& mode : modes) {
        if (const auto* plane = std::get_if<HelmholtzPlaneMode>(&mode)) {
            if (!plane->is_solenoidal()) {
                return false;
            }
        }
    }
    return true;
}

bool VorticityFieldSpec::is_helical() const {
    if (modes.empty()) {
        return false;
    }
    const auto* first = std::get_if<BeltramiABC>(&modes.front());
    if (first == nullptr) {
        return false;
    }
    for (const auto& mode : modes) {
        const auto* abc = std::get_if<BeltramiABC>(&mode);
        if (abc == nullptr || abc->kappa != first->kappa) {
            return false;
        }
    }
    return true;
}

double VorticityFieldSpec::helical_wavenumber() const {
    if (!is_helical()) {
        throw PreconditionError("vorticity spec is not helical (needs ABC modes with one kappa)");
    }
    return std::get<BeltramiABC>(modes.front()).kappa;
}

Vec3 eval_field(const VorticityFieldSpec& spec, const Vec3& x, double t) {
    Vec3 w;
    for_each_mode(spec, x, t, [&](const ModeSample& s) { w += s.value; });
    return w;
}

Vec3 eval_time_derivative(const VorticityFieldSpec& spec, const Vec3& x, double t) {
    Vec3 dw;
    for_each_mode(spec, x, t, [&](const ModeSample& s) { dw += s.value * (-spec.nu * s.k_squared); });
    return dw;
}

Vec3 eval_laplacian(const VorticityFieldSpec& spec, const Vec3& x, double t) {
    Vec3 lap;
    for_each_mode(spec, x, t, [&](const ModeSample& s) { lap += s.value * (-s.k_squared); });
    return lap;
}

std::array<Vec3, 3> eval_jacobian(const VorticityFieldSpec& spec, const Vec3& x, double t) {
    std::array<Vec3, 3> jac{};
    for_each_mode(spec, x, t, [&](const ModeSample& s) {
        for (std::size_t i = 0; i < 3; ++i) {
            jac[i] += s.jacobian[i];
        }
    });
    return jac;
}

Vec3 eval_curl(const VorticityFieldSpec& spec, const Vec3& x, double t) {
    const auto j = eval_jacobian(spec, x, t);
    return {j[2].y - j[1].z, j[0].z - j[2].x, j[1].x - j[0].y};
}

double eval_divergence(const VorticityFieldSpec& spec, const Vec3& x, double t) {
    const auto j = eval_jacobian(spec, x, t);
    return j[0].x + j[1].y + j[2].z;
}

double spherical_value(const SphericalMode& mode, double r) {
    const double kr = mode.k * r;
    if (r < 1e-8 / mode.k) {
        return mode.amplitude * mode.k * (1.0 - kr * kr / 6.0);
    }
    return mode.amplitude * std::sin(kr) / r;
}

double spherical_eval(const SphericalMode& mode, double nu, const Vec3& x, double t) {
    return std::exp(-nu * mode.k * mode.k * t) * spherical_value(mode, norm(x - mode.center));
}

double spherical_laplacian(const SphericalMode& mode, double nu, const Vec3& x, double t) {
    return -mode.k * mode.k * spherical_eval(mode, nu, x, t);
}

} // namespace rflow
