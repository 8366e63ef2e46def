#pragma once

#include "penning/trap.hpp"

namespace penning {

/// Closed-form classical orbit: the xy block is the omega_perp oscillation
/// composed with the rotation by angle (omega_c/2)*t, the z block is a 1D
/// oscillator at omega_z. Immutable after construction; evaluation is pure.
class Trajectory {
public:
    /// Derives and caches the frequencies; throws on untrapped parameters.
    Trajectory(const TrapParameters& params, const PhaseSpacePoint& initial);

    /// State at time t from the closed form.
    PhaseSpacePoint at(double t) const;

    /// Classical velocity dr/dt at time t. In the transverse plane this is
    /// p/m + (omega_c/2)*(y, -x, 0), not p/m.
    Vec3 velocity_at(double t) const;

    const TrapParameters& params() const { return params_; }
    const DerivedFrequencies& freqs() const { return freqs_; }
    const PhaseSpacePoint& initial() const { return initial_; }

private:
    TrapParameters params_;
    DerivedFrequencies freqs_;
    PhaseSpacePoint initial_;
};

/// Right-hand side of the canonical equations of motion,
///   dx/dt  =  px/m + (omega_c/2) y,      dy/dt  =  py/m - (omega_c/2) x,
///   dpx/dt = -m w_perp^2 x + (omega_c/2) py,
///   dpy/dt = -m w_perp^2 y - (omega_c/2) px,
///   dz/dt  =  pz/m,                      dpz/dt = -m w_z^2 z.
PhaseSpacePoint canonical_rhs(const PhaseSpacePoint& state, const TrapParameters& params,
                              const DerivedFrequencies& freqs);

/// Fixed-step classical RK4 integration of canonical_rhs, used as an
/// independent oracle for the closed form. Global error O(dt^4).
/// Throws std::invalid_argument unless dt > 0 and dt*max(omega) < 0.1.
PhaseSpacePoint integrate_rk4(const PhaseSpacePoint& initial, const TrapParameters& params,
                              double t_final, double dt);

/// Total energy H = H_perp + H_z with
/// H_perp = p_perp^2/2m + m w_perp^2 x_perp^2/2 - (omega_c/2)(x p_y - y p_x).
double hamiltonian_value(const PhaseSpacePoint& state, const TrapParameters& params,
                         const DerivedFrequencies& freqs);

/// Conserved positive quadratic form
/// Q = p_perp^2/(2 m w_perp) + p_z^2/(2 m w_z) + m w_perp x_perp^2/2 + m w_z z^2/2.
double quadratic_form_q(const PhaseSpacePoint& state, const TrapParameters& params,
                        const DerivedFrequencies& freqs);

/// dr/dt for a given canonical state.
Vec3 classical_velocity(const PhaseSpacePoint& state, const TrapParameters& params,
                        const DerivedFrequencies& freqs);

}  // namespace penning
