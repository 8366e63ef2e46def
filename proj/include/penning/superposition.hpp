#pragma once

#include "penning/ict.hpp"

namespace penning {

/// Two-parameter trajectory family: transverse momentum kick p and axial
/// momentum kick q applied at the origin, giving
///   x(t) =  lambda_perp cos(w_c t/2) sin(w_perp t),
///   y(t) = -lambda_perp sin(w_c t/2) sin(w_perp t),
///   z(t) =  lambda_z sin(w_z t),
/// with lambda_perp = p/(m w_perp), lambda_z = q/(m w_z).
struct SpecialTrajectoryParams {
    double p = 0.0;
    double q = 0.0;

    double lambda_perp(const TrapParameters& params, const DerivedFrequencies& freqs) const {
        return p / (params.mass * freqs.omega_perp);
    }
    double lambda_z(const TrapParameters& params, const DerivedFrequencies& freqs) const {
        return q / (params.mass * freqs.omega_z);
    }
    PhaseSpacePoint initial_state() const { return {0.0, 0.0, 0.0, p, 0.0, q}; }
};

/// Closed-form state of the kicked trajectory at time t.
PhaseSpacePoint special_trajectory(const TrapParameters& params, const DerivedFrequencies& freqs,
                                   const SpecialTrajectoryParams& kicks, double t);

/// Ground-state wave function with an injected trajectory, in closed form:
/// normalized Gaussian of widths a_perp, a_z centered at r(t), carrying the
/// phase -(E_000 t + r(t).p(t)/2 - r.p(t))/hbar.
Complex ground_ict_amplitude(const Trajectory& trajectory, const Vec3& r, double t);

/// psi_S = psi_{+traj} + i psi_{-traj} with ground-state bases. Kept
/// unnormalized: the norm is time-independent but not 1, and expectation
/// values divide by the measured norm^2.
class SuperpositionState {
public:
    SuperpositionState(const TrapParameters& params, const SpecialTrajectoryParams& kicks);

    Complex amplitude(const Vec3& r, double t) const;

    const IctState& plus() const { return plus_; }
    const IctState& minus() const { return minus_; }
    const SpecialTrajectoryParams& kicks() const { return kicks_; }
    const TrapParameters& params() const { return plus_.base().params(); }
    const DerivedFrequencies& freqs() const { return plus_.base().freqs(); }

private:
    SpecialTrajectoryParams kicks_;
    IctState plus_;
    IctState minus_;
};

/// Box centered at the origin covering both branches of the superposition.
GridSpec superposition_grid(const SuperpositionState& state, double sigma_multiple = 8.0,
                            int points_per_axis = 96);

/// Squared norm of the (unnormalized) superposition by quadrature.
double superposition_norm2(const SuperpositionState& state, double t, const GridSpec& grid);

/// Quadrature centroid of |psi_S|^2 / ||psi_S||^2.
Vec3 superposition_centroid(const SuperpositionState& state, double t, const GridSpec& grid);

/// Second central moments (about the measured centroid of the normalized
/// density) along x, y, z.
std::array<double, 3> superposition_central_moments(const SuperpositionState& state, double t,
                                                    const GridSpec& grid);

/// The three closed-form second moments, entangled through the factor
/// exp(-2m(lambda_perp^2 w_perp + lambda_z^2 w_z)/hbar).
std::array<double, 3> superposition_moments_closed_form(const SuperpositionState& state, double t);

/// f = exp(-Q(p1(t)-p2(t), r1(t)-r2(t))/hbar); time-independent because Q is
/// conserved along the difference trajectory.
double fidelity_analytic(const Trajectory& tr1, const Trajectory& tr2, double t);

/// f = |<psi_1|psi_2>|^2 by quadrature overlap of the two ground-injected
/// packets. The grid must cover both Gaussians.
double fidelity_numeric(const Trajectory& tr1, const Trajectory& tr2, double t,
                        const GridSpec& grid);

/// d(tr1, tr2) = sqrt(Q(p1-p2, r1-r2)) at t = 0; a metric on trajectories.
double trajectory_distance(const Trajectory& tr1, const Trajectory& tr2);

}  // namespace penning
