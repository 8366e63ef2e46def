#pragma once

#include <iosfwd>
#include <string>

#include "penning/classical.hpp"
#include "penning/grid.hpp"

namespace penning {

/// Shortest decimal representation that round-trips the IEEE-754 value.
std::string format_double(double v);

/// Header `t,x,y,z,px,py,pz` (plus `,E` when with_energy), one row per
/// uniformly spaced sample time in [t0, t1].
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory, double t0, double t1,
                          int samples, bool with_energy = false);

/// Metadata line `# center=..., half_extent=..., points=...` followed by the
/// header `x,y,z,re,im,rho` and one row per node, z fastest.
void write_grid_csv(std::ostream& out, const GridField& field);

/// Reconstructs a field written by write_grid_csv. Throws std::runtime_error
/// on malformed input.
GridField read_grid_csv(std::istream& in);

}  // namespace penning
