#include "penning/classical.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace penning {

Trajectory::Trajectory(const TrapParameters& params, const PhaseSpacePoint& initial)
    : params_(params), freqs_(derive_frequencies(params)), initial_(initial) {}

PhaseSpacePoint Trajectory::at(double t) const {
    const double m = params_.mass;
    const double wp = freqs_.omega_perp;
    const double wz = freqs_.omega_z;

    const double cp = std::cos(wp * t), sp = std::sin(wp * t);
    const double ch = std::cos(0.5 * freqs_.omega_c * t), sh = std::sin(0.5 * freqs_.omega_c * t);

    // Transverse oscillation in the frame co-rotating at omega_c/2.
    const double u  = initial_.x * cp + initial_.px / (m * wp) * sp;
    const double v  = initial_.y * cp + initial_.py / (m * wp) * sp;
    const double pu = initial_.px * cp - m * wp * initial_.x * sp;
    const double pv = initial_.py * cp - m * wp * initial_.y * sp;

    PhaseSpacePoint s;
    s.x  = ch * u + sh * v;
    s.y  = ch * v - sh * u;
    s.px = ch * pu + sh * pv;
    s.py = ch * pv - sh * pu;

    const double cz = std::cos(wz * t), sz = std::sin(wz * t);
    s.z  = initial_.z * cz + initial_.pz / (m * wz) * sz;
    s.pz = initial_.pz * cz - m * wz * initial_.z * sz;
    return s;
}

Vec3 Trajectory::velocity_at(double t) const {
    return classical_velocity(at(t), params_, freqs_);
}

Vec3 classical_velocity(const PhaseSpacePoint& s, const TrapParameters& p,
                        const DerivedFrequencies& f) {
    const double half_wc = 0.5 * f.omega_c;
    return {s.px / p.mass + half_wc * s.y,
            s.py / p.mass - half_wc * s.x,
            s.pz / p.mass};
}

PhaseSpacePoint canonical_rhs(const PhaseSpacePoint& s, const TrapParameters& p,
                              const DerivedFrequencies& f) {
    const double half_wc = 0.5 * f.omega_c;
    const double wp2 = f.omega_perp * f.omega_perp;
    const double wz2 = f.omega_z * f.omega_z;

    PhaseSpacePoint d;
    d.x  = s.px / p.mass + half_wc * s.y;
    d.y  = s.py / p.mass - half_wc * s.x;
    d.px = -p.mass * wp2 * s.x + half_wc * s.py;
    d.py = -p.mass * wp2 * s.y - half_wc * s.px;
    d.z  = s.pz / p.mass;
    d.pz = -p.mass * wz2 * s.z;
    return d;
}

namespace {

PhaseSpacePoint axpy(const PhaseSpacePoint& s, double a, const PhaseSpacePoint& d) {
    return {s.x + a * d.x, s.y + a * d.y, s.z + a * d.z,
            s.px + a * d.px, s.py + a * d.py, s.pz + a * d.pz};
}

}  // namespace

PhaseSpacePoint integrate_rk4(const PhaseSpacePoint& initial, const TrapParameters& params,
                              double t_final, double dt) {
    const DerivedFrequencies f = derive_frequencies(params);
    const double max_omega = std::max({f.omega_c, f.omega_perp, f.omega_z});
    if (!(dt > 0.0))
        throw std::invalid_argument("integrate_rk4: dt must be positive");
    if (!(dt * max_omega < 0.1))
        throw std::invalid_argument("integrate_rk4: unstable step size, require dt*max(omega) < 0.1");

    if (t_final == 0.0)
        return initial;

    const long long n = static_cast<long long>(std::ceil(std::abs(t_final) / dt));
    const double h = t_final / static_cast<double>(n);  // signed, |h| <= dt

    PhaseSpacePoint s = initial;
    for (long long i = 0; i < n; ++i) {
        const PhaseSpacePoint k1 = canonical_rhs(s, params, f);
        const PhaseSpacePoint k2 = canonical_rhs(axpy(s, 0.5 * h, k1), params, f);
        const PhaseSpacePoint k3 = canonical_rhs(axpy(s, 0.5 * h, k2), params, f);
        const PhaseSpacePoint k4 = canonical_rhs(axpy(s, h, k3), params, f);
        s.x  += h / 6.0 * (k1.x + 2.0 * (k2.x + k3.x) + k4.x);
        s.y  += h / 6.0 * (k1.y + 2.0 * (k2.y + k3.y) + k4.y);
        s.z  += h / 6.0 * (k1.z + 2.0 * (k2.z + k3.z) + k4.z);
        s.px += h / 6.0 * (k1.px + 2.0 * (k2.px + k3.px) + k4.px);
        s.py += h / 6.0 * (k1.py + 2.0 * (k2.py + k3.py) + k4.py);
        s.pz += h / 6.0 * (k1.pz + 2.0 * (k2.pz + k3.pz) + k4.pz);
    }
    return s;
}

double hamiltonian_value(const PhaseSpacePoint& s, const TrapParameters& p,
                         const DerivedFrequencies& f) {
    const double wp2 = f.omega_perp * f.omega_perp;
    const double wz2 = f.omega_z * f.omega_z;
    const double h_perp = (s.px * s.px + s.py * s.py) / (2.0 * p.mass)
                        + 0.5 * p.mass * wp2 * (s.x * s.x + s.y * s.y)
                        - 0.5 * f.omega_c * (s.x * s.py - s.y * s.px);
    const double h_z = s.pz * s.pz / (2.0 * p.mass) + 0.5 * p.mass * wz2 * s.z * s.z;
    return h_perp + h_z;
}

double quadratic_form_q(const PhaseSpacePoint& s, const TrapParameters& p,
                        const DerivedFrequencies& f) {
    return (s.px * s.px + s.py * s.py) / (2.0 * p.mass * f.omega_perp)
         + s.pz * s.pz / (2.0 * p.mass * f.omega_z)
         + 0.5 * p.mass * f.omega_perp * (s.x * s.x + s.y * s.y)
         + 0.5 * p.mass * f.omega_z * s.z * s.z;
}

}  // namespace penning
