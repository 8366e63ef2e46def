#pragma once

#include <array>
#include <complex>

#include "penning/specialfn.hpp"
#include "penning/trap.hpp"

namespace penning {

using Complex = std::complex<double>;

/// Energy eigenvalue E = hbar [w_perp(2n+l+1) - l w_c/2 + (nz+1/2) w_z].
double energy(const QuantumNumbers& qn, const TrapParameters& params,
              const DerivedFrequencies& freqs);

/// Positive energy scale of the same magnitude, used to normalize residuals.
/// Unlike the eigenvalue it cannot pass through zero for large l.
double energy_scale(const QuantumNumbers& qn, const TrapParameters& params,
                    const DerivedFrequencies& freqs);

struct DensityCurrent {
    double rho = 0.0;
    Vec3 j;
};

/// Stationary eigenfunction
///   psi = sqrt(N) e^{-iEt/hbar} e^{-(m w_perp x_perp^2 + m w_z z^2)/2hbar}
///         (x+iy)^l L_n^l(m w_perp x_perp^2/hbar) H_nz(sqrt(m w_z/hbar) z),
/// with (x+iy)^l evaluated in polar form. Immutable; evaluation is pure.
class StationaryState {
public:
    StationaryState(const QuantumNumbers& qn, const TrapParameters& params);

    Complex amplitude(const Vec3& r, double t) const;

    /// Amplitude together with its analytic spatial gradient.
    struct ValueGradient {
        Complex psi;
        std::array<Complex, 3> grad;
    };
    ValueGradient amplitude_gradient(const Vec3& r, double t) const;

    /// rho = |psi|^2 and the gauge-covariant probability current
    /// j = (hbar/m) Im(conj(psi) grad psi) - (w_c/2)(-y, x, 0) rho.
    /// Both are time-independent; evaluated at t = 0.
    DensityCurrent density_current(const Vec3& r) const;

    double energy() const { return energy_; }
    double log_norm() const { return log_norm_; }
    const QuantumNumbers& qn() const { return qn_; }
    const TrapParameters& params() const { return params_; }
    const DerivedFrequencies& freqs() const { return freqs_; }

private:
    QuantumNumbers qn_;
    TrapParameters params_;
    DerivedFrequencies freqs_;
    double log_norm_;
    double energy_;
};

}  // namespace penning
