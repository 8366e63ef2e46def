#include "penning/specialfn.hpp"

#include <cmath>
#include <stdexcept>

namespace penning {

void validate_quantum_numbers(const QuantumNumbers& qn) {
    if (qn.n < 0 || qn.l < 0 || qn.nz < 0)
        throw std::invalid_argument("quantum numbers must be nonnegative");
}

double laguerre_assoc(int n, int l, double x) {
    if (n < 0 || l < 0)
        throw std::invalid_argument("laguerre_assoc: n and l must be nonnegative");
    if (n == 0) return 1.0;
    double lkm1 = 1.0;           // L_0^l
    double lk = 1.0 + l - x;     // L_1^l
    for (int k = 1; k < n; ++k) {
        const double lkp1 = ((2.0 * k + l + 1.0 - x) * lk - (k + l) * lkm1) / (k + 1.0);
        lkm1 = lk;
        lk = lkp1;
    }
    return lk;
}

double hermite(int n, double x) {
    if (n < 0)
        throw std::invalid_argument("hermite: n must be nonnegative");
    if (n == 0) return 1.0;
    double hkm1 = 1.0;       // H_0
    double hk = 2.0 * x;     // H_1
    for (int k = 1; k < n; ++k) {
        const double hkp1 = 2.0 * x * hk - 2.0 * k * hkm1;
        hkm1 = hk;
        hk = hkp1;
    }
    return hk;
}

double log_normalization(const QuantumNumbers& qn, const TrapParameters& p,
                         const DerivedFrequencies& f) {
    validate_quantum_numbers(qn);
    const double log_n = std::lgamma(qn.n + 1.0)
                       + (qn.l + 1.5) * std::log(p.mass / p.hbar)
                       + (qn.l + 1.0) * std::log(f.omega_perp)
                       + 0.5 * std::log(f.omega_z)
                       - qn.nz * std::log(2.0)
                       - 1.5 * std::log(M_PI)
                       - std::lgamma(qn.n + qn.l + 1.0)
                       - std::lgamma(qn.nz + 1.0);
    return 0.5 * log_n;
}

}  // namespace penning
