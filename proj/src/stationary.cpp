#include "penning/stationary.hpp"

#include <cmath>

namespace penning {

double energy(const QuantumNumbers& qn, const TrapParameters& p, const DerivedFrequencies& f) {
    validate_quantum_numbers(qn);
    return p.hbar * (f.omega_perp * (2.0 * qn.n + qn.l + 1.0)
                     - qn.l * 0.5 * f.omega_c
                     + (qn.nz + 0.5) * f.omega_z);
}

double energy_scale(const QuantumNumbers& qn, const TrapParameters& p,
                    const DerivedFrequencies& f) {
    return p.hbar * (f.omega_perp * (2.0 * qn.n + qn.l + 1.0)
                     + qn.l * 0.5 * f.omega_c
                     + (qn.nz + 0.5) * f.omega_z);
}

StationaryState::StationaryState(const QuantumNumbers& qn, const TrapParameters& params)
    : qn_(qn),
      params_(params),
      freqs_(derive_frequencies(params)),
      log_norm_(log_normalization(qn, params, freqs_)),
      energy_(penning::energy(qn, params, freqs_)) {}

namespace {

// (x+iy)^k in polar form: exact magnitude/phase split.
Complex complex_power(double x, double y, double r_perp, int k) {
    if (k == 0) return {1.0, 0.0};
    if (r_perp == 0.0) return {0.0, 0.0};
    const double phi = std::atan2(y, x);
    return std::polar(std::pow(r_perp, k), k * phi);
}

}  // namespace

Complex StationaryState::amplitude(const Vec3& r, double t) const {
    const double m = params_.mass, hbar = params_.hbar;
    const double wp = freqs_.omega_perp, wz = freqs_.omega_z;

    const double rp2 = r.x * r.x + r.y * r.y;
    const double xi = m * wp * rp2 / hbar;
    const double zeta = std::sqrt(m * wz / hbar) * r.z;

    const double envelope = std::exp(log_norm_ - 0.5 * (m * wp * rp2 + m * wz * r.z * r.z) / hbar);
    const double radial = laguerre_assoc(qn_.n, qn_.l, xi) * hermite(qn_.nz, zeta);
    const Complex angular = complex_power(r.x, r.y, std::sqrt(rp2), qn_.l);

    return envelope * radial * angular * std::polar(1.0, -energy_ * t / hbar);
}

StationaryState::ValueGradient StationaryState::amplitude_gradient(const Vec3& r, double t) const {
    const double m = params_.mass, hbar = params_.hbar;
    const double wp = freqs_.omega_perp, wz = freqs_.omega_z;

    const double rp2 = r.x * r.x + r.y * r.y;
    const double r_perp = std::sqrt(rp2);
    const double xi = m * wp * rp2 / hbar;
    const double zeta = std::sqrt(m * wz / hbar) * r.z;

    const double g = std::exp(log_norm_ - 0.5 * (m * wp * rp2 + m * wz * r.z * r.z) / hbar);
    const double lag = laguerre_assoc(qn_.n, qn_.l, xi);
    // dL_n^l(xi)/dxi = -L_{n-1}^{l+1}(xi)
    const double dlag = (qn_.n > 0) ? -laguerre_assoc(qn_.n - 1, qn_.l + 1, xi) : 0.0;
    const double her = hermite(qn_.nz, zeta);
    const double dher = (qn_.nz > 0) ? 2.0 * qn_.nz * hermite(qn_.nz - 1, zeta) : 0.0;

    const Complex wl = complex_power(r.x, r.y, r_perp, qn_.l);
    const Complex wlm1 = (qn_.l > 0) ? complex_power(r.x, r.y, r_perp, qn_.l - 1) : Complex{0.0, 0.0};

    const Complex phase = std::polar(1.0, -energy_ * t / hbar);
    const double a_perp = m * wp / hbar;          // envelope decay rate, = d xi/d(rp2)
    const double zeta_slope = std::sqrt(m * wz / hbar);

    ValueGradient out;
    out.psi = g * lag * her * wl * phase;
    // d/dx: envelope term, (x+iy)^l term, Laguerre argument term
    out.grad[0] = phase * g * her
                * (-a_perp * r.x * lag * wl
                   + static_cast<double>(qn_.l) * lag * wlm1
                   + 2.0 * a_perp * r.x * dlag * wl);
    out.grad[1] = phase * g * her
                * (-a_perp * r.y * lag * wl
                   + static_cast<double>(qn_.l) * lag * wlm1 * Complex{0.0, 1.0}
                   + 2.0 * a_perp * r.y * dlag * wl);
    out.grad[2] = phase * g * lag * wl
                * (-m * wz * r.z / hbar * her + zeta_slope * dher);
    return out;
}

DensityCurrent StationaryState::density_current(const Vec3& r) const {
    const ValueGradient vg = amplitude_gradient(r, 0.0);
    const double rho = std::norm(vg.psi);
    const double hbar_over_m = params_.hbar / params_.mass;
    const Complex conj_psi = std::conj(vg.psi);

    // gauge term from A = (B x r)/2: -(w_c/2)(-y, x, 0) rho
    const double half_wc = 0.5 * freqs_.omega_c;
    DensityCurrent dc;
    dc.rho = rho;
    dc.j = {hbar_over_m * std::imag(conj_psi * vg.grad[0]) + half_wc * r.y * rho,
            hbar_over_m * std::imag(conj_psi * vg.grad[1]) - half_wc * r.x * rho,
            hbar_over_m * std::imag(conj_psi * vg.grad[2])};
    return dc;
}

}  // namespace penning
