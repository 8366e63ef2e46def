#pragma once

#include <string>

#include "penning/vec3.hpp"

namespace penning {

/// Physical constants of one trap configuration, in any coherent unit system.
/// The magnetic field points along +z and the charge is taken positive; a
/// negative charge is handled by flipping the sign of B.
struct TrapParameters {
    double mass   = 1.0;  ///< particle mass, > 0
    double charge = 1.0;  ///< particle charge, > 0
    double B      = 1.0;  ///< magnetic field strength along +z, > 0
    double D      = 0.0;  ///< electric quadrupole strength
    double hbar   = 1.0;  ///< reduced Planck constant (1 = natural units)
};

/// The three characteristic frequencies of a trapped configuration:
///   omega_c    = charge*B/mass             (cyclotron)
///   omega_perp = sqrt(omega_c^2/4 - D/mass) (modified transverse)
///   omega_z    = sqrt(2*D/mass)            (axial)
struct DerivedFrequencies {
    double omega_c    = 0.0;
    double omega_perp = 0.0;
    double omega_z    = 0.0;
};

/// Classical state (x, y, z, p_x, p_y, p_z) at one instant.
struct PhaseSpacePoint {
    double x = 0.0, y = 0.0, z = 0.0;
    double px = 0.0, py = 0.0, pz = 0.0;

    Vec3 position() const { return {x, y, z}; }
    Vec3 momentum() const { return {px, py, pz}; }
};

struct StabilityReport {
    bool trapped = false;
    std::string diagnostic;  ///< which bound failed, empty when trapped
};

/// True iff 0 < 4*mass*D < charge^2*B^2. Total function: never throws on
/// finite inputs, the diagnostic names the violated bound.
StabilityReport check_stability(const TrapParameters& params);

/// Derives the three frequencies. Throws std::domain_error("untrapped
/// configuration: ...") when the stability condition fails; positive roots
/// are returned for omega_perp and omega_z.
DerivedFrequencies derive_frequencies(const TrapParameters& params);

/// Ground-state Gaussian widths sqrt(hbar/(m*omega)).
double length_perp(const TrapParameters& params, const DerivedFrequencies& freqs);
double length_z(const TrapParameters& params, const DerivedFrequencies& freqs);

/// Throws std::domain_error unless mass, charge, B and hbar are positive and
/// all fields are finite. D may be any finite value here; the trapping
/// condition is checked separately.
void validate_parameters(const TrapParameters& params);

}  // namespace penning
