#include "penning/ict.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace penning {

namespace {

bool same_parameters(const TrapParameters& a, const TrapParameters& b) {
    return a.mass == b.mass && a.charge == b.charge && a.B == b.B && a.D == b.D
        && a.hbar == b.hbar;
}

void warn_truncation(const char* what, double ratio) {
    std::fprintf(stderr, "penning: warning: %s grid truncation, boundary/peak = %.3e\n",
                 what, ratio);
}

}  // namespace

IctState::IctState(StationaryState base, Trajectory trajectory)
    : base_(std::move(base)), trajectory_(std::move(trajectory)) {
    if (!same_parameters(base_.params(), trajectory_.params()))
        throw std::invalid_argument("IctState: base state and trajectory use different traps");
}

Complex IctState::amplitude(const Vec3& r, double t) const {
    const PhaseSpacePoint c = trajectory_.at(t);
    const Vec3 rc = c.position();
    const Vec3 pc = c.momentum();
    const double hbar = base_.params().hbar;

    const double phase = (-0.5 * dot(rc, pc) + dot(r, pc)) / hbar;
    return std::polar(1.0, phase) * base_.amplitude(r - rc, t);
}

double IctState::density(const Vec3& r, double t) const {
    const Vec3 rc = trajectory_.at(t).position();
    return base_.density_current(r - rc).rho;
}

Vec3 IctState::current(const Vec3& r, double t) const {
    const Vec3 rc = trajectory_.at(t).position();
    const DensityCurrent base = base_.density_current(r - rc);
    return base.j + trajectory_.velocity_at(t) * base.rho;
}

Vec3 centroid(const IctState& state, double t, const GridSpec& grid) {
    const GridField rho = sample(
        [&state](const Vec3& r, double time) { return Complex{state.density(r, time), 0.0}; },
        grid, t);

    const IntegralResult mass = integrate(rho);
    if (!mass.boundary_ok) warn_truncation("centroid", mass.boundary_ratio);

    Vec3 c;
    c.x = integrate(rho, [](const Vec3& r) { return r.x; }).value.real();
    c.y = integrate(rho, [](const Vec3& r) { return r.y; }).value.real();
    c.z = integrate(rho, [](const Vec3& r) { return r.z; }).value.real();
    return c * (1.0 / mass.value.real());
}

double central_moment(const GridField& density_field, const Vec3& center,
                      const std::array<int, 3>& orders) {
    const IntegralResult mass = integrate(density_field);
    const IntegralResult weighted = integrate(density_field, [&](const Vec3& r) {
        return std::pow(r.x - center.x, orders[0]) * std::pow(r.y - center.y, orders[1])
             * std::pow(r.z - center.z, orders[2]);
    });
    if (!weighted.boundary_ok) warn_truncation("central_moment", weighted.boundary_ratio);
    return weighted.value.real() / mass.value.real();
}

double central_moment(const IctState& state, double t, const std::array<int, 3>& orders,
                      const GridSpec& grid) {
    if (orders[0] + orders[1] + orders[2] > 4)
        throw std::invalid_argument("central_moment: orders above total degree 4 are outside "
                                    "the validated quadrature settings");
    const GridField rho = sample(
        [&state](const Vec3& r, double time) { return Complex{state.density(r, time), 0.0}; },
        grid, t);
    return central_moment(rho, state.trajectory().at(t).position(), orders);
}

ResidualOptions default_residual_options(const QuantumNumbers& qn, const TrapParameters& params,
                                         const DerivedFrequencies& freqs) {
    ResidualOptions opt;
    opt.h_space = 1e-3 * std::min(length_perp(params, freqs), length_z(params, freqs));
    opt.h_time = 1e-4 / std::max(freqs.omega_c, freqs.omega_z);
    opt.energy_scale = energy_scale(qn, params, freqs);
    return opt;
}

double schrodinger_residual(const Evaluator& psi, const TrapParameters& params,
                            const DerivedFrequencies& freqs, const Vec3& r, double t,
                            const ResidualOptions& opt, double peak_scale) {
    const double h = opt.h_space, tau = opt.h_time;
    const double hbar = params.hbar, m = params.mass;

    const Complex center = psi(r, t);
    if (peak_scale > 0.0 && std::abs(center) < 1e-12 * peak_scale)
        throw std::domain_error("schrodinger_residual: |psi| below 1e-12 of peak, "
                                "residual is ill-conditioned here");

    const Complex xp = psi({r.x + h, r.y, r.z}, t), xm = psi({r.x - h, r.y, r.z}, t);
    const Complex yp = psi({r.x, r.y + h, r.z}, t), ym = psi({r.x, r.y - h, r.z}, t);
    const Complex zp = psi({r.x, r.y, r.z + h}, t), zm = psi({r.x, r.y, r.z - h}, t);

    const Complex laplacian = (xp + xm + yp + ym + zp + zm - 6.0 * center) / (h * h);
    const Complex dpsi_dx = (xp - xm) / (2.0 * h);
    const Complex dpsi_dy = (yp - ym) / (2.0 * h);
    const Complex dpsi_dt = (psi(r, t + tau) - psi(r, t - tau)) / (2.0 * tau);

    const double wp2 = freqs.omega_perp * freqs.omega_perp;
    const double wz2 = freqs.omega_z * freqs.omega_z;
    const double potential = 0.5 * m * (wp2 * (r.x * r.x + r.y * r.y) + wz2 * r.z * r.z);

    const Complex i_unit{0.0, 1.0};
    const Complex h_psi = -hbar * hbar / (2.0 * m) * laplacian + potential * center
                        + i_unit * hbar * 0.5 * freqs.omega_c * (r.x * dpsi_dy - r.y * dpsi_dx);

    const Complex residual = i_unit * hbar * dpsi_dt - h_psi;
    return std::abs(residual) / (opt.energy_scale * std::abs(center));
}

double continuity_residual(const IctState& state, const Vec3& r, double t,
                           double h_space, double h_time, bool drop_drift_term) {
    const double h = h_space, tau = h_time;

    auto current_at = [&](const Vec3& pos, double time) {
        if (!drop_drift_term) return state.current(pos, time);
        const Vec3 rc = state.trajectory().at(time).position();
        return state.base().density_current(pos - rc).j;
    };

    const double drho_dt = (state.density(r, t + tau) - state.density(r, t - tau)) / (2.0 * tau);
    const double div_j =
        (current_at({r.x + h, r.y, r.z}, t).x - current_at({r.x - h, r.y, r.z}, t).x) / (2.0 * h)
      + (current_at({r.x, r.y + h, r.z}, t).y - current_at({r.x, r.y - h, r.z}, t).y) / (2.0 * h)
      + (current_at({r.x, r.y, r.z + h}, t).z - current_at({r.x, r.y, r.z - h}, t).z) / (2.0 * h);

    const DerivedFrequencies& f = state.base().freqs();
    const double scale = std::max(f.omega_c, f.omega_z) * state.density(r, t);
    return std::abs(drho_dt + div_j) / scale;
}

}  // namespace penning
