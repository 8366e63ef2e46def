#pragma once

#include "penning/trap.hpp"

namespace penning {

/// Labels of a stationary state: radial n, angular momentum l, axial nz.
struct QuantumNumbers {
    int n = 0;
    int l = 0;
    int nz = 0;

    bool operator==(const QuantumNumbers&) const = default;
};

/// Associated Laguerre polynomial L_n^l(x) via the three-term upward
/// recurrence in n. Throws std::invalid_argument for negative n or l.
double laguerre_assoc(int n, int l, double x);

/// Physicists' Hermite polynomial H_n(x), recurrence
/// H_{k+1} = 2x H_k - 2k H_{k-1}. Throws for negative n.
double hermite(int n, double x);

/// (1/2) ln N_{n,l,nz} for the stationary-state normalization constant
///   N = n! (m/hbar)^{l+3/2} w_perp^{l+1} w_z^{1/2}
///       / (2^{nz} pi^{3/2} (n+l)! nz!),
/// computed through lgamma so large quantum numbers stay finite.
double log_normalization(const QuantumNumbers& qn, const TrapParameters& params,
                         const DerivedFrequencies& freqs);

void validate_quantum_numbers(const QuantumNumbers& qn);

}  // namespace penning
