#include "penning/trap.hpp"

#include <cmath>
#include <stdexcept>

namespace penning {

void validate_parameters(const TrapParameters& p) {
    auto bad = [](double v) { return !std::isfinite(v); };
    if (bad(p.mass) || bad(p.charge) || bad(p.B) || bad(p.D) || bad(p.hbar))
        throw std::domain_error("trap parameters must be finite");
    if (p.mass <= 0.0)   throw std::domain_error("mass must be positive");
    if (p.charge <= 0.0) throw std::domain_error("charge must be positive");
    if (p.B <= 0.0)      throw std::domain_error("B must be positive");
    if (p.hbar <= 0.0)   throw std::domain_error("hbar must be positive");
}

StabilityReport check_stability(const TrapParameters& p) {
    if (p.D <= 0.0)
        return {false, "axial confinement requires D>0"};
    if (p.charge * p.charge * p.B * p.B <= 4.0 * p.mass * p.D)
        return {false, "magnetic bound violated: charge^2*B^2 must exceed 4*mass*D"};
    return {true, {}};
}

DerivedFrequencies derive_frequencies(const TrapParameters& p) {
    validate_parameters(p);
    const StabilityReport stability = check_stability(p);
    if (!stability.trapped)
        throw std::domain_error("untrapped configuration: " + stability.diagnostic);

    DerivedFrequencies f;
    f.omega_c = p.charge * p.B / p.mass;
    f.omega_perp = std::sqrt(f.omega_c * f.omega_c / 4.0 - p.D / p.mass);
    f.omega_z = std::sqrt(2.0 * p.D / p.mass);
    return f;
}

double length_perp(const TrapParameters& p, const DerivedFrequencies& f) {
    return std::sqrt(p.hbar / (p.mass * f.omega_perp));
}

double length_z(const TrapParameters& p, const DerivedFrequencies& f) {
    return std::sqrt(p.hbar / (p.mass * f.omega_z));
}

}  // namespace penning
