#include "penning/superposition.hpp"

#include <cmath>
#include <stdexcept>

namespace penning {

PhaseSpacePoint special_trajectory(const TrapParameters& params, const DerivedFrequencies& freqs,
                                   const SpecialTrajectoryParams& kicks, double t) {
    const double lp = kicks.lambda_perp(params, freqs);
    const double lz = kicks.lambda_z(params, freqs);
    const double ch = std::cos(0.5 * freqs.omega_c * t), sh = std::sin(0.5 * freqs.omega_c * t);
    const double cp = std::cos(freqs.omega_perp * t), sp = std::sin(freqs.omega_perp * t);
    const double cz = std::cos(freqs.omega_z * t), sz = std::sin(freqs.omega_z * t);

    PhaseSpacePoint s;
    s.x = lp * ch * sp;
    s.y = -lp * sh * sp;
    s.z = lz * sz;
    s.px = kicks.p * ch * cp;
    s.py = -kicks.p * sh * cp;
    s.pz = kicks.q * cz;
    return s;
}

Complex ground_ict_amplitude(const Trajectory& trajectory, const Vec3& r, double t) {
    const TrapParameters& p = trajectory.params();
    const DerivedFrequencies& f = trajectory.freqs();
    const PhaseSpacePoint c = trajectory.at(t);
    const Vec3 rc = c.position();
    const Vec3 pc = c.momentum();

    const double e0 = energy(QuantumNumbers{0, 0, 0}, p, f);
    const double log_norm = log_normalization(QuantumNumbers{0, 0, 0}, p, f);

    const double phase = -(e0 * t + 0.5 * dot(rc, pc) - dot(r, pc)) / p.hbar;
    const Vec3 s = r - rc;
    const double gauss = -0.5 * p.mass
        * (f.omega_perp * (s.x * s.x + s.y * s.y) + f.omega_z * s.z * s.z) / p.hbar;
    return std::exp(log_norm + gauss) * std::polar(1.0, phase);
}

SuperpositionState::SuperpositionState(const TrapParameters& params,
                                       const SpecialTrajectoryParams& kicks)
    : kicks_(kicks),
      plus_(StationaryState({0, 0, 0}, params), Trajectory(params, kicks.initial_state())),
      minus_(StationaryState({0, 0, 0}, params),
             Trajectory(params, PhaseSpacePoint{0.0, 0.0, 0.0, -kicks.p, 0.0, -kicks.q})) {}

Complex SuperpositionState::amplitude(const Vec3& r, double t) const {
    return plus_.amplitude(r, t) + Complex{0.0, 1.0} * minus_.amplitude(r, t);
}

GridSpec superposition_grid(const SuperpositionState& state, double sigma_multiple,
                            int points_per_axis) {
    const TrapParameters& p = state.params();
    const DerivedFrequencies& f = state.freqs();
    const double reach_perp = std::abs(state.kicks().lambda_perp(p, f));
    const double reach_z = std::abs(state.kicks().lambda_z(p, f));

    GridSpec spec = auto_grid({0, 0, 0}, p, f, Vec3{}, sigma_multiple, points_per_axis);
    spec.half_extent.x += reach_perp;
    spec.half_extent.y += reach_perp;
    spec.half_extent.z += reach_z;
    return spec;
}

namespace {

GridField sample_density(const SuperpositionState& state, double t, const GridSpec& grid) {
    return sample(
        [&state](const Vec3& r, double time) {
            return Complex{std::norm(state.amplitude(r, time)), 0.0};
        },
        grid, t);
}

}  // namespace

double superposition_norm2(const SuperpositionState& state, double t, const GridSpec& grid) {
    return integrate(sample_density(state, t, grid)).value.real();
}

Vec3 superposition_centroid(const SuperpositionState& state, double t, const GridSpec& grid) {
    const GridField rho = sample_density(state, t, grid);
    const double mass = integrate(rho).value.real();
    return Vec3{integrate(rho, [](const Vec3& r) { return r.x; }).value.real(),
                integrate(rho, [](const Vec3& r) { return r.y; }).value.real(),
                integrate(rho, [](const Vec3& r) { return r.z; }).value.real()}
         * (1.0 / mass);
}

std::array<double, 3> superposition_central_moments(const SuperpositionState& state, double t,
                                                    const GridSpec& grid) {
    const GridField rho = sample_density(state, t, grid);
    const double mass = integrate(rho).value.real();
    const Vec3 c = Vec3{integrate(rho, [](const Vec3& r) { return r.x; }).value.real(),
                        integrate(rho, [](const Vec3& r) { return r.y; }).value.real(),
                        integrate(rho, [](const Vec3& r) { return r.z; }).value.real()}
                 * (1.0 / mass);
    return {central_moment(rho, c, {2, 0, 0}),
            central_moment(rho, c, {0, 2, 0}),
            central_moment(rho, c, {0, 0, 2})};
}

std::array<double, 3> superposition_moments_closed_form(const SuperpositionState& state, double t) {
    const TrapParameters& p = state.params();
    const DerivedFrequencies& f = state.freqs();
    const double lp = state.kicks().lambda_perp(p, f);
    const double lz = state.kicks().lambda_z(p, f);

    const double overlap_sq =
        std::exp(-2.0 * p.mass * (lp * lp * f.omega_perp + lz * lz * f.omega_z) / p.hbar);

    const double ch2 = std::pow(std::cos(0.5 * f.omega_c * t), 2);
    const double sh2 = std::pow(std::sin(0.5 * f.omega_c * t), 2);
    const double sp2 = std::pow(std::sin(f.omega_perp * t), 2);
    const double cp2 = std::pow(std::cos(f.omega_perp * t), 2);
    const double sz2 = std::pow(std::sin(f.omega_z * t), 2);
    const double cz2 = std::pow(std::cos(f.omega_z * t), 2);

    const double base_perp = 0.5 * p.hbar / (p.mass * f.omega_perp);
    const double base_z = 0.5 * p.hbar / (p.mass * f.omega_z);

    return {base_perp + lp * lp * ch2 * (sp2 - overlap_sq * cp2),
            base_perp + lp * lp * sh2 * (sp2 - overlap_sq * cp2),
            base_z + lz * lz * (sz2 - overlap_sq * cz2)};
}

namespace {

void require_same_trap(const Trajectory& tr1, const Trajectory& tr2) {
    const TrapParameters& a = tr1.params();
    const TrapParameters& b = tr2.params();
    if (a.mass != b.mass || a.charge != b.charge || a.B != b.B || a.D != b.D || a.hbar != b.hbar)
        throw std::invalid_argument("fidelity: trajectories live in different traps");
}

PhaseSpacePoint difference(const PhaseSpacePoint& a, const PhaseSpacePoint& b) {
    return {a.x - b.x, a.y - b.y, a.z - b.z, a.px - b.px, a.py - b.py, a.pz - b.pz};
}

}  // namespace

double fidelity_analytic(const Trajectory& tr1, const Trajectory& tr2, double t) {
    require_same_trap(tr1, tr2);
    const double q = quadratic_form_q(difference(tr1.at(t), tr2.at(t)), tr1.params(), tr1.freqs());
    return std::exp(-q / tr1.params().hbar);
}

double fidelity_numeric(const Trajectory& tr1, const Trajectory& tr2, double t,
                        const GridSpec& grid) {
    require_same_trap(tr1, tr2);
    const GridField overlap = sample(
        [&](const Vec3& r, double time) {
            return std::conj(ground_ict_amplitude(tr1, r, time)) * ground_ict_amplitude(tr2, r, time);
        },
        grid, t);
    return std::norm(integrate(overlap).value);
}

double trajectory_distance(const Trajectory& tr1, const Trajectory& tr2) {
    require_same_trap(tr1, tr2);
    const double q = quadratic_form_q(difference(tr1.initial(), tr2.initial()),
                                      tr1.params(), tr1.freqs());
    return std::sqrt(q);
}

}  // namespace penning
