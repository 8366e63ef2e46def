#include "penning/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "penning/classical.hpp"
#include "penning/grid.hpp"
#include "penning/ict.hpp"
#include "penning/stationary.hpp"
#include "penning/superposition.hpp"

namespace penning {

namespace {

CheckResult make_check(std::string name, int points, double residual, double tolerance,
                       bool negative_control = false) {
    CheckResult c;
    c.name = std::move(name);
    c.points_tested = points;
    c.max_residual = residual;
    c.tolerance = tolerance;
    c.negative_control = negative_control;
    c.pass = negative_control ? residual > tolerance : residual <= tolerance;
    return c;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Generic bounded initial state: positions within 0.8 ground widths,
/// momenta within 0.8 hbar/width.
PhaseSpacePoint random_initial(std::mt19937_64& rng, const TrapParameters& p,
                               const DerivedFrequencies& f) {
    const double ap = length_perp(p, f), az = length_z(p, f);
    const double pp = p.hbar / ap, pz = p.hbar / az;
    return {uniform(rng, -0.8, 0.8) * ap, uniform(rng, -0.8, 0.8) * ap,
            uniform(rng, -0.8, 0.8) * az, uniform(rng, -0.8, 0.8) * pp,
            uniform(rng, -0.8, 0.8) * pp, uniform(rng, -0.8, 0.8) * pz};
}

double max_component_diff(const PhaseSpacePoint& a, const PhaseSpacePoint& b) {
    return std::max({std::abs(a.x - b.x), std::abs(a.y - b.y), std::abs(a.z - b.z),
                     std::abs(a.px - b.px), std::abs(a.py - b.py), std::abs(a.pz - b.pz)});
}

double max_component(const PhaseSpacePoint& a) {
    return std::max({std::abs(a.x), std::abs(a.y), std::abs(a.z), std::abs(a.px),
                     std::abs(a.py), std::abs(a.pz)});
}

/// Largest |evaluator| over a coarse random probe of the box, used to anchor
/// relative floors when picking well-conditioned sample points.
double probe_peak(const Evaluator& f, const Vec3& center, const Vec3& span, double t,
                  std::mt19937_64& rng) {
    double peak = 0.0;
    for (int i = 0; i < 200; ++i) {
        const Vec3 r{center.x + uniform(rng, -1.0, 1.0) * span.x,
                     center.y + uniform(rng, -1.0, 1.0) * span.y,
                     center.z + uniform(rng, -1.0, 1.0) * span.z};
        peak = std::max(peak, std::abs(f(r, t)));
    }
    return peak;
}

/// Random point in the box where |evaluator| is at least floor_frac * peak.
Vec3 sample_point(const Evaluator& f, const Vec3& center, const Vec3& span, double t, double peak,
                  double floor_frac, std::mt19937_64& rng) {
    for (int tries = 0; tries < 2000; ++tries) {
        const Vec3 r{center.x + uniform(rng, -1.0, 1.0) * span.x,
                     center.y + uniform(rng, -1.0, 1.0) * span.y,
                     center.z + uniform(rng, -1.0, 1.0) * span.z};
        if (std::abs(f(r, t)) >= floor_frac * peak) return r;
    }
    throw std::runtime_error("sample_point: could not find a well-conditioned point");
}

Vec3 state_span(const QuantumNumbers& qn, const TrapParameters& p, const DerivedFrequencies& f,
                double widths = 1.2) {
    const double sp = widths * std::sqrt(2.0 * qn.n + qn.l + 1.0) * length_perp(p, f);
    const double sz = widths * std::sqrt(2.0 * qn.nz + 1.0) * length_z(p, f);
    return {sp, sp, sz};
}

std::vector<QuantumNumbers> states_up_to(int max_each, int max_sum) {
    std::vector<QuantumNumbers> out;
    for (int n = 0; n <= max_each; ++n)
        for (int l = 0; l <= max_each; ++l)
            for (int nz = 0; nz <= max_each; ++nz)
                if (n + l + nz <= max_sum) out.push_back({n, l, nz});
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// classical
// ---------------------------------------------------------------------------

std::vector<CheckResult> verify_classical(const TrapParameters& params, const VerifyOptions& opt) {
    std::vector<CheckResult> checks;
    const DerivedFrequencies f = derive_frequencies(params);
    const double tol = opt.tolerance_scale;

    {  // algebraic identity w_perp^2 + w_z^2/2 = (w_c/2)^2
        const double lhs = f.omega_perp * f.omega_perp + 0.5 * f.omega_z * f.omega_z;
        const double rhs = 0.25 * f.omega_c * f.omega_c;
        checks.push_back(make_check("classical.frequency_identity", 1,
                                    std::abs(lhs - rhs) / rhs, tol * 1e-14));
    }

    {  // check_stability(p) true exactly when derive_frequencies succeeds
        std::mt19937_64 rng(opt.seed ^ 0x11ULL);
        int mismatches = 0;
        const int sets = 200;
        for (int i = 0; i < sets; ++i) {
            TrapParameters p;
            p.mass = uniform(rng, 0.3, 3.0);
            p.charge = uniform(rng, 0.3, 3.0);
            p.B = uniform(rng, 0.3, 3.0);
            p.D = uniform(rng, -1.0, 2.0);
            bool derived = true;
            try {
                derive_frequencies(p);
            } catch (const std::domain_error&) {
                derived = false;
            }
            if (derived != check_stability(p).trapped) ++mismatches;
        }
        checks.push_back(make_check("classical.stability_consistency", sets,
                                    static_cast<double>(mismatches), 0.5));
    }

    {  // closed form vs RK4 oracle at t = 10, dt = 1e-4
        std::mt19937_64 rng(opt.seed ^ 0x12ULL);
        double worst = 0.0;
        const int trials = 5;
        for (int i = 0; i < trials; ++i) {
            const PhaseSpacePoint s0 = random_initial(rng, params, f);
            const Trajectory traj(params, s0);
            const PhaseSpacePoint numeric = integrate_rk4(s0, params, 10.0, 1e-4);
            worst = std::max(worst, max_component_diff(traj.at(10.0), numeric));
        }
        checks.push_back(make_check("classical.closed_form_vs_rk4", trials, worst, tol * 1e-8));
    }

    {  // measured RK4 convergence order
        std::mt19937_64 rng(opt.seed ^ 0x13ULL);
        const PhaseSpacePoint s0 = random_initial(rng, params, f);
        const Trajectory traj(params, s0);
        const PhaseSpacePoint exact = traj.at(5.0);
        const double e1 = max_component_diff(integrate_rk4(s0, params, 5.0, 0.02), exact);
        const double e2 = max_component_diff(integrate_rk4(s0, params, 5.0, 0.01), exact);
        const double order = std::log2(e1 / e2);
        checks.push_back(make_check("classical.rk4_convergence_order", 2,
                                    std::abs(order - 4.0), 0.35));
    }

    {  // closed form satisfies the canonical equations pointwise
        std::mt19937_64 rng(opt.seed ^ 0x14ULL);
        const PhaseSpacePoint s0 = random_initial(rng, params, f);
        const Trajectory traj(params, s0);
        const double h = 1e-5;
        double worst = 0.0, rate_scale = 0.0;
        const int times = 100;
        for (int i = 0; i < times; ++i) {
            const double t = uniform(rng, 0.0, 20.0);
            const PhaseSpacePoint rhs = canonical_rhs(traj.at(t), params, f);
            const PhaseSpacePoint sp = traj.at(t + h), sm = traj.at(t - h);
            const PhaseSpacePoint fd{(sp.x - sm.x) / (2 * h), (sp.y - sm.y) / (2 * h),
                                     (sp.z - sm.z) / (2 * h), (sp.px - sm.px) / (2 * h),
                                     (sp.py - sm.py) / (2 * h), (sp.pz - sm.pz) / (2 * h)};
            worst = std::max(worst, max_component_diff(fd, rhs));
            rate_scale = std::max(rate_scale, max_component(rhs));
        }
        checks.push_back(make_check("classical.canonical_equations_pointwise", times,
                                    worst / rate_scale, tol * 1e-6));
    }

    {  // H and Q conserved along the closed form over 100 slow periods
        std::mt19937_64 rng(opt.seed ^ 0x15ULL);
        const PhaseSpacePoint s0 = random_initial(rng, params, f);
        const Trajectory traj(params, s0);
        const double slowest = std::min({f.omega_perp, f.omega_z, f.omega_c});
        const double t_max = 100.0 * 2.0 * M_PI / slowest;
        const double h0 = hamiltonian_value(s0, params, f);
        const double q0 = quadratic_form_q(s0, params, f);
        const double h_scale = std::max(std::abs(h0), q0 * slowest);
        double h_lo = h0, h_hi = h0, q_lo = q0, q_hi = q0;
        const int times = 200;
        for (int i = 1; i <= times; ++i) {
            const PhaseSpacePoint s = traj.at(t_max * i / times);
            const double h = hamiltonian_value(s, params, f);
            const double q = quadratic_form_q(s, params, f);
            h_lo = std::min(h_lo, h); h_hi = std::max(h_hi, h);
            q_lo = std::min(q_lo, q); q_hi = std::max(q_hi, q);
        }
        checks.push_back(make_check("classical.hamiltonian_conservation", times,
                                    (h_hi - h_lo) / h_scale, tol * 1e-12));
        checks.push_back(make_check("classical.quadratic_form_conservation", times,
                                    (q_hi - q_lo) / q0, tol * 1e-12));
    }

    {  // trajectories superpose (the system is linear)
        std::mt19937_64 rng(opt.seed ^ 0x16ULL);
        double worst = 0.0;
        const int trials = 20;
        for (int i = 0; i < trials; ++i) {
            const PhaseSpacePoint s1 = random_initial(rng, params, f);
            const PhaseSpacePoint s2 = random_initial(rng, params, f);
            const double a = uniform(rng, -2.0, 2.0), b = uniform(rng, -2.0, 2.0);
            const double t = uniform(rng, 0.0, 10.0);
            const PhaseSpacePoint mixed{a * s1.x + b * s2.x, a * s1.y + b * s2.y,
                                        a * s1.z + b * s2.z, a * s1.px + b * s2.px,
                                        a * s1.py + b * s2.py, a * s1.pz + b * s2.pz};
            const PhaseSpacePoint via_mixed = Trajectory(params, mixed).at(t);
            const PhaseSpacePoint e1 = Trajectory(params, s1).at(t);
            const PhaseSpacePoint e2 = Trajectory(params, s2).at(t);
            const PhaseSpacePoint combined{a * e1.x + b * e2.x, a * e1.y + b * e2.y,
                                           a * e1.z + b * e2.z, a * e1.px + b * e2.px,
                                           a * e1.py + b * e2.py, a * e1.pz + b * e2.pz};
            const double scale = std::max(1e-30, max_component(combined));
            worst = std::max(worst, max_component_diff(via_mixed, combined) / scale);
        }
        checks.push_back(make_check("classical.linearity", trials, worst, tol * 1e-12));
    }

    {  // evaluate(evaluate(s, t1), t2) = evaluate(s, t1 + t2)
        std::mt19937_64 rng(opt.seed ^ 0x17ULL);
        double worst = 0.0;
        const int trials = 20;
        for (int i = 0; i < trials; ++i) {
            const PhaseSpacePoint s0 = random_initial(rng, params, f);
            const double t1 = uniform(rng, 0.0, 10.0), t2 = uniform(rng, 0.0, 10.0);
            const PhaseSpacePoint two_leg = Trajectory(params, Trajectory(params, s0).at(t1)).at(t2);
            const PhaseSpacePoint direct = Trajectory(params, s0).at(t1 + t2);
            const double scale = std::max(1e-30, max_component(direct));
            worst = std::max(worst, max_component_diff(two_leg, direct) / scale);
        }
        checks.push_back(make_check("classical.time_composition", trials, worst, tol * 1e-12));
    }

    return checks;
}

// ---------------------------------------------------------------------------
// stationary
// ---------------------------------------------------------------------------

std::vector<CheckResult> verify_stationary(const TrapParameters& params, const VerifyOptions& opt) {
    std::vector<CheckResult> checks;
    const DerivedFrequencies f = derive_frequencies(params);
    const double tol = opt.tolerance_scale;
    const double a_perp = length_perp(params, f);

    {  // finite-difference Schroedinger residual of every eigenfunction <= 2
        std::mt19937_64 rng(opt.seed ^ 0x21ULL);
        double worst = 0.0;
        int points = 0;
        for (const QuantumNumbers& qn : states_up_to(2, 1000)) {
            const StationaryState state(qn, params);
            const Evaluator psi = [&state](const Vec3& r, double t) {
                return state.amplitude(r, t);
            };
            const ResidualOptions ropt = default_residual_options(qn, params, f);
            const Vec3 span = state_span(qn, params, f);
            const double t = uniform(rng, 0.0, 5.0 / f.omega_z);
            const double peak = probe_peak(psi, Vec3{}, span, t, rng);
            // points below a few percent of peak make |residual|/|psi| an
            // ill-conditioned 0/0 and only probe finite-difference noise
            for (int i = 0; i < 50; ++i) {
                const Vec3 r = sample_point(psi, Vec3{}, span, t, peak, 3e-2, rng);
                worst = std::max(worst,
                                 schrodinger_residual(psi, params, f, r, t, ropt, peak));
                ++points;
            }
        }
        checks.push_back(make_check("stationary.eigenfunction_residual", points, worst,
                                    tol * 1e-5));
    }

    {  // orthonormality of all pairs with quantum numbers <= 2
        const std::vector<QuantumNumbers> qns = states_up_to(2, 1000);
        // common grid sized for the largest state
        const GridSpec grid = auto_grid({2, 2, 2}, params, f, Vec3{}, opt.sigma_multiple,
                                        opt.grid_points);
        std::vector<GridField> fields;
        fields.reserve(qns.size());
        for (const QuantumNumbers& qn : qns) {
            const StationaryState state(qn, params);
            fields.push_back(sample(
                [&state](const Vec3& r, double t) { return state.amplitude(r, t); }, grid, 0.0));
        }
        double worst = 0.0;
        int pairs = 0;
        for (std::size_t i = 0; i < fields.size(); ++i)
            for (std::size_t j = i; j < fields.size(); ++j) {
                const Complex braket = overlap(fields[i], fields[j]).value;
                const double expected = (i == j) ? 1.0 : 0.0;
                worst = std::max(worst, std::abs(braket - expected));
                ++pairs;
            }
        checks.push_back(make_check("stationary.orthonormality", pairs, worst, tol * 1e-6));
    }

    {  // unit norm for all quantum numbers <= 3 on the default auto grid
        double worst = 0.0;
        const std::vector<QuantumNumbers> qns = states_up_to(3, 1000);
        for (const QuantumNumbers& qn : qns) {
            const StationaryState state(qn, params);
            const GridSpec grid = auto_grid(qn, params, f, Vec3{}, opt.sigma_multiple,
                                            opt.grid_points);
            const GridField density = sample(
                [&state](const Vec3& r, double) {
                    return Complex{state.density_current(r).rho, 0.0};
                },
                grid, 0.0);
            worst = std::max(worst, std::abs(integrate(density).value.real() - 1.0));
        }
        checks.push_back(make_check("stationary.normalization",
                                    static_cast<int>(qns.size()), worst, tol * 1e-6));
    }

    {  // density invariant under rotations about z
        std::mt19937_64 rng(opt.seed ^ 0x22ULL);
        double worst = 0.0;
        int points = 0;
        for (const QuantumNumbers& qn : std::vector<QuantumNumbers>{{0, 0, 0}, {1, 2, 1}, {2, 1, 2}}) {
            const StationaryState state(qn, params);
            const Evaluator psi = [&state](const Vec3& r, double t) {
                return state.amplitude(r, t);
            };
            const Vec3 span = state_span(qn, params, f);
            const double peak = probe_peak(psi, Vec3{}, span, 0.0, rng);
            for (int i = 0; i < 30; ++i) {
                const Vec3 r = sample_point(psi, Vec3{}, span, 0.0, peak, 3e-2, rng);
                const double phi = uniform(rng, 0.0, 2.0 * M_PI);
                const Vec3 rotated{r.x * std::cos(phi) - r.y * std::sin(phi),
                                   r.x * std::sin(phi) + r.y * std::cos(phi), r.z};
                const double rho = state.density_current(r).rho;
                const double rho_rotated = state.density_current(rotated).rho;
                worst = std::max(worst, std::abs(rho_rotated - rho) / rho);
                ++points;
            }
        }
        checks.push_back(make_check("stationary.azimuthal_symmetry", points, worst, tol * 1e-12));
    }

    {  // |psi| at a fixed point does not depend on t
        std::mt19937_64 rng(opt.seed ^ 0x23ULL);
        const StationaryState state({1, 1, 1}, params);
        const Evaluator psi = [&state](const Vec3& r, double t) { return state.amplitude(r, t); };
        const Vec3 span = state_span(state.qn(), params, f);
        const double peak = probe_peak(psi, Vec3{}, span, 0.0, rng);
        double worst = 0.0;
        const int points = 50;
        for (int i = 0; i < points; ++i) {
            const Vec3 r = sample_point(psi, Vec3{}, span, 0.0, peak, 1e-3, rng);
            const double mag0 = std::abs(state.amplitude(r, 0.0));
            const double mag_t = std::abs(state.amplitude(r, uniform(rng, 0.0, 50.0)));
            worst = std::max(worst, std::abs(mag_t - mag0) / mag0);
        }
        checks.push_back(make_check("stationary.magnitude_stationarity", points, worst,
                                    tol * 1e-12));
    }

    {  // raising l at fixed n, nz lowers the energy by hbar(w_c/2 - w_perp)
        double worst = 0.0;
        int points = 0;
        const double expected = params.hbar * (f.omega_perp - 0.5 * f.omega_c);
        for (int n = 0; n <= 2; ++n)
            for (int l = 0; l <= 2; ++l)
                for (int nz = 0; nz <= 2; ++nz) {
                    const double step = energy({n, l + 1, nz}, params, f)
                                      - energy({n, l, nz}, params, f);
                    worst = std::max(worst, std::abs(step - expected)
                                                / (params.hbar * f.omega_c));
                    if (step >= 0.0) worst = std::max(worst, 1.0);
                    ++points;
                }
        checks.push_back(make_check("stationary.l_spacing_sign", points, worst, tol * 1e-12));
    }

    {  // analytic current vs central-difference gradient current
        std::mt19937_64 rng(opt.seed ^ 0x24ULL);
        double worst = 0.0;
        int points = 0;
        const double h = 1e-5 * a_perp;
        for (const QuantumNumbers& qn : std::vector<QuantumNumbers>{{0, 1, 0}, {1, 1, 1}}) {
            const StationaryState state(qn, params);
            const Evaluator psi = [&state](const Vec3& r, double t) {
                return state.amplitude(r, t);
            };
            const Vec3 span = state_span(qn, params, f);
            const double peak = probe_peak(psi, Vec3{}, span, 0.0, rng);
            for (int i = 0; i < 30; ++i) {
                const Vec3 r = sample_point(psi, Vec3{}, span, 0.0, peak, 1e-2, rng);
                const DensityCurrent dc = state.density_current(r);
                const Complex conj_psi = std::conj(state.amplitude(r, 0.0));
                auto fd_partial = [&](const Vec3& dr) {
                    return (state.amplitude(r + dr, 0.0) - state.amplitude(r - dr, 0.0))
                         / (2.0 * h);
                };
                const double hbar_over_m = params.hbar / params.mass;
                const double half_wc = 0.5 * f.omega_c;
                const Vec3 j_fd{
                    hbar_over_m * std::imag(conj_psi * fd_partial({h, 0, 0})) + half_wc * r.y * dc.rho,
                    hbar_over_m * std::imag(conj_psi * fd_partial({0, h, 0})) - half_wc * r.x * dc.rho,
                    hbar_over_m * std::imag(conj_psi * fd_partial({0, 0, h}))};
                const double scale = std::max(norm(dc.j), dc.rho * f.omega_c * a_perp);
                worst = std::max(worst, norm(dc.j - j_fd) / scale);
                ++points;
            }
        }
        checks.push_back(make_check("stationary.current_vs_fd_gradient", points, worst,
                                    tol * 1e-8));
    }

    {  // l = 0 current reduces to the pure gauge term -(w_c/2)(-y, x, 0) rho
        std::mt19937_64 rng(opt.seed ^ 0x25ULL);
        double worst = 0.0;
        const int points = 30;
        const StationaryState state({1, 0, 1}, params);
        const Evaluator psi = [&state](const Vec3& r, double t) { return state.amplitude(r, t); };
        const Vec3 span = state_span(state.qn(), params, f);
        const double peak = probe_peak(psi, Vec3{}, span, 0.0, rng);
        for (int i = 0; i < points; ++i) {
            const Vec3 r = sample_point(psi, Vec3{}, span, 0.0, peak, 1e-3, rng);
            const DensityCurrent dc = state.density_current(r);
            const Vec3 gauge{0.5 * f.omega_c * r.y * dc.rho, -0.5 * f.omega_c * r.x * dc.rho, 0.0};
            worst = std::max(worst, norm(dc.j - gauge) / (dc.rho * f.omega_c * a_perp));
        }
        checks.push_back(make_check("stationary.l0_current_shape", points, worst, tol * 1e-13));
    }

    return checks;
}

// ---------------------------------------------------------------------------
// ict
// ---------------------------------------------------------------------------

namespace {

Evaluator ict_evaluator(const IctState& state) {
    return [&state](const Vec3& r, double t) { return state.amplitude(r, t); };
}

}  // namespace

std::vector<CheckResult> verify_ict(const TrapParameters& params, const VerifyOptions& opt) {
    std::vector<CheckResult> checks;
    const DerivedFrequencies f = derive_frequencies(params);
    const double tol = opt.tolerance_scale;
    const double a_perp = length_perp(params, f);
    const double a_z = length_z(params, f);

    // base states (n, l, nz) in {0,1,2}^3 with n + l + nz <= 3
    const std::vector<QuantumNumbers> bases = states_up_to(2, 3);

    {  // the injection theorem: psi_ICT solves the Schroedinger equation
        std::mt19937_64 rng(opt.seed ^ 0x31ULL);
        double worst = 0.0;
        int points = 0;
        std::vector<Trajectory> trajectories;
        for (int i = 0; i < 5; ++i)
            trajectories.emplace_back(params, random_initial(rng, params, f));
        for (const QuantumNumbers& qn : bases) {
            const StationaryState base(qn, params);
            const ResidualOptions ropt = default_residual_options(qn, params, f);
            for (const Trajectory& traj : trajectories) {
                const IctState state(base, traj);
                const Evaluator psi = ict_evaluator(state);
                const double t = uniform(rng, 0.0, 4.0 / f.omega_z);
                const Vec3 center = traj.at(t).position();
                const Vec3 span = state_span(qn, params, f);
                const double peak = probe_peak(psi, center, span, t, rng);
                for (int i = 0; i < 10; ++i) {
                    const Vec3 r = sample_point(psi, center, span, t, peak, 2e-2, rng);
                    worst = std::max(worst,
                                     schrodinger_residual(psi, params, f, r, t, ropt, peak));
                    ++points;
                }
            }
        }
        checks.push_back(make_check("ict.injection_theorem_residual", points, worst, tol * 1e-5));
    }

    {  // corrupted-state negative control: the detector must fire
        std::mt19937_64 rng(opt.seed ^ 0x32ULL);
        const StationaryState base({1, 1, 1}, params);
        const Trajectory traj(params, random_initial(rng, params, f));
        const IctState state(base, traj);
        const double inv_a = 1.0 / a_perp;
        const Evaluator corrupted = [&state, inv_a](const Vec3& r, double t) {
            return state.amplitude(r, t) * (1.0 + 0.01 * r.x * inv_a);
        };
        const ResidualOptions ropt = default_residual_options(base.qn(), params, f);
        const double t = 1.3 / f.omega_z;
        const Vec3 center = traj.at(t).position();
        const Vec3 span = state_span(base.qn(), params, f);
        const double peak = probe_peak(corrupted, center, span, t, rng);
        double fired = 0.0;
        const int points = 20;
        for (int i = 0; i < points; ++i) {
            const Vec3 r = sample_point(corrupted, center, span, t, peak, 1e-3, rng);
            fired = std::max(fired, schrodinger_residual(corrupted, params, f, r, t, ropt, peak));
        }
        checks.push_back(make_check("ict.corrupted_state_control", points, fired, tol * 1e-3,
                                    /*negative_control=*/true));
    }

    {  // unitarity: the injected state stays normalized
        std::mt19937_64 rng(opt.seed ^ 0x33ULL);
        const StationaryState base({1, 1, 1}, params);
        const Trajectory traj(params, random_initial(rng, params, f));
        const IctState state(base, traj);
        double worst = 0.0;
        const int times = 5;
        for (int i = 0; i < times; ++i) {
            const double t = i * 3.0 / f.omega_z;
            const GridSpec grid = auto_grid(base.qn(), params, f, traj.at(t).position(),
                                            opt.sigma_multiple, opt.grid_points);
            const GridField density = sample(
                [&state](const Vec3& r, double time) {
                    return Complex{state.density(r, time), 0.0};
                },
                grid, t);
            worst = std::max(worst, std::abs(integrate(density).value.real() - 1.0));
        }
        checks.push_back(make_check("ict.unitarity", times, worst, tol * 1e-6));
    }

    // generic trajectory used for the quadrature-based laws
    const PhaseSpacePoint generic{0.5 * a_perp, -0.3 * a_perp, 0.4 * a_z,
                                  0.6 * params.hbar / a_perp, 0.2 * params.hbar / a_perp,
                                  -0.5 * params.hbar / a_z};
    const Trajectory generic_traj(params, generic);

    {  // Ehrenfest exactness: quadrature centroid tracks the classical orbit
        double worst = 0.0;
        int points = 0;
        for (const QuantumNumbers& qn : std::vector<QuantumNumbers>{{0, 0, 0}, {1, 1, 1}}) {
            const IctState state(StationaryState(qn, params), generic_traj);
            for (int i = 0; i < 20; ++i) {
                const double t = i * (20.0 / f.omega_z) / 19.0;
                const Vec3 rc = generic_traj.at(t).position();
                const GridSpec grid = auto_grid(qn, params, f, rc, opt.sigma_multiple,
                                                opt.grid_points);
                const Vec3 measured = centroid(state, t, grid);
                worst = std::max(worst, norm(measured - rc) / a_perp);
                ++points;
            }
        }
        checks.push_back(make_check("ict.ehrenfest_centroid", points, worst, tol * 1e-6));
    }

    {  // shape rigidity: central moments of order <= 4 constant in t
        double worst = 0.0;
        int points = 0;
        std::vector<std::array<int, 3>> orders;
        for (int i = 0; i <= 4; ++i)
            for (int j = 0; i + j <= 4; ++j)
                for (int k = 0; i + j + k <= 4; ++k)
                    if (i + j + k > 0) orders.push_back({i, j, k});
        for (const QuantumNumbers& qn : std::vector<QuantumNumbers>{{0, 0, 0}, {1, 1, 1}}) {
            const IctState state(StationaryState(qn, params), generic_traj);
            const double sp = std::sqrt(2.0 * qn.n + qn.l + 1.0) * a_perp;
            const double sz = std::sqrt(2.0 * qn.nz + 1.0) * a_z;
            std::vector<std::vector<double>> history(orders.size());
            for (int i = 0; i < 8; ++i) {
                const double t = i * (10.0 / f.omega_z) / 7.0;
                const Vec3 rc = generic_traj.at(t).position();
                const GridSpec grid = auto_grid(qn, params, f, rc, opt.sigma_multiple,
                                                opt.grid_points);
                const GridField density = sample(
                    [&state](const Vec3& r, double time) {
                        return Complex{state.density(r, time), 0.0};
                    },
                    grid, t);
                for (std::size_t m = 0; m < orders.size(); ++m)
                    history[m].push_back(central_moment(density, rc, orders[m]));
            }
            for (std::size_t m = 0; m < orders.size(); ++m) {
                const auto [lo, hi] = std::minmax_element(history[m].begin(), history[m].end());
                const double mean = (*lo + *hi) / 2.0;
                const double scale = std::pow(sp, orders[m][0]) * std::pow(sp, orders[m][1])
                                   * std::pow(sz, orders[m][2]);
                worst = std::max(worst, (*hi - *lo) / std::max(std::abs(mean), scale));
                points += static_cast<int>(history[m].size());
            }
        }
        checks.push_back(make_check("ict.moment_rigidity", points, worst, tol * 1e-6));
    }

    {  // |psi_ICT|^2 equals the translated stationary density pointwise
        std::mt19937_64 rng(opt.seed ^ 0x34ULL);
        const StationaryState base({1, 1, 0}, params);
        const IctState state(base, generic_traj);
        const Evaluator psi = ict_evaluator(state);
        double worst = 0.0;
        const int points = 50;
        const double peak_rho = std::pow(probe_peak(psi, Vec3{}, state_span(base.qn(), params, f),
                                                    0.0, rng), 2);
        for (int i = 0; i < points; ++i) {
            const double t = uniform(rng, 0.0, 10.0 / f.omega_z);
            const Vec3 rc = generic_traj.at(t).position();
            const Vec3 span = state_span(base.qn(), params, f);
            const Vec3 r{rc.x + uniform(rng, -1.0, 1.0) * span.x,
                         rc.y + uniform(rng, -1.0, 1.0) * span.y,
                         rc.z + uniform(rng, -1.0, 1.0) * span.z};
            const double from_amplitude = std::norm(state.amplitude(r, t));
            const double from_density = state.density(r, t);
            worst = std::max(worst, std::abs(from_amplitude - from_density) / peak_rho);
        }
        checks.push_back(make_check("ict.density_shift_identity", points, worst, tol * 1e-12));
    }

    {  // continuity equation with the velocity drift term
        std::mt19937_64 rng(opt.seed ^ 0x35ULL);
        const double h = 1e-3 * std::min(a_perp, a_z);
        const double tau = 1e-4 / std::max(f.omega_c, f.omega_z);
        double worst = 0.0, control = 0.0;
        int points = 0;
        for (const QuantumNumbers& qn :
             std::vector<QuantumNumbers>{{0, 0, 0}, {0, 1, 0}, {0, 0, 1}}) {
            const StationaryState base(qn, params);
            const IctState state(base, generic_traj);
            const Evaluator rho_eval = [&state](const Vec3& r, double t) {
                return Complex{state.density(r, t), 0.0};
            };
            for (int i = 0; i < 17; ++i) {
                const double t = uniform(rng, 0.0, 8.0 / f.omega_z);
                const Vec3 center = generic_traj.at(t).position();
                const Vec3 span = state_span(qn, params, f);
                const double peak = probe_peak(rho_eval, center, span, t, rng);
                const Vec3 r = sample_point(rho_eval, center, span, t, peak, 1e-2, rng);
                worst = std::max(worst, continuity_residual(state, r, t, h, tau));
                control = std::max(control,
                                   continuity_residual(state, r, t, h, tau,
                                                       /*drop_drift_term=*/true));
                ++points;
            }
        }
        checks.push_back(make_check("ict.continuity_residual", points, worst, tol * 1e-5));
        checks.push_back(make_check("ict.continuity_drift_term_control", points, control,
                                    tol * 1e-2, /*negative_control=*/true));
    }

    {  // ground-state injection equals the closed-form Gaussian packet
        std::mt19937_64 rng(opt.seed ^ 0x36ULL);
        const IctState state(StationaryState({0, 0, 0}, params), generic_traj);
        double worst = 0.0;
        const int points = 100;
        for (int i = 0; i < points; ++i) {
            const double t = uniform(rng, 0.0, 10.0 / f.omega_z);
            const Vec3 rc = generic_traj.at(t).position();
            const Vec3 r{rc.x + uniform(rng, -2.0, 2.0) * a_perp,
                         rc.y + uniform(rng, -2.0, 2.0) * a_perp,
                         rc.z + uniform(rng, -2.0, 2.0) * a_z};
            const Complex via_ict = state.amplitude(r, t);
            const Complex closed = ground_ict_amplitude(generic_traj, r, t);
            worst = std::max(worst, std::abs(via_ict - closed) / std::abs(closed));
        }
        checks.push_back(make_check("ict.ground_closed_form_identity", points, worst,
                                    tol * 1e-12));
    }

    return checks;
}

// ---------------------------------------------------------------------------
// superposition
// ---------------------------------------------------------------------------

std::vector<CheckResult> verify_superposition(const TrapParameters& params,
                                              const VerifyOptions& opt) {
    std::vector<CheckResult> checks;
    const DerivedFrequencies f = derive_frequencies(params);
    const double tol = opt.tolerance_scale;

    auto kicks_for = [&](double lambda_perp, double lambda_z) {
        SpecialTrajectoryParams k;
        k.p = lambda_perp * params.mass * f.omega_perp;
        k.q = lambda_z * params.mass * f.omega_z;
        return k;
    };

    {  // the superposition is itself a solution of the Schroedinger equation
        std::mt19937_64 rng(opt.seed ^ 0x41ULL);
        const SuperpositionState state(params, kicks_for(1.0, 1.0));
        const Evaluator psi = [&state](const Vec3& r, double t) { return state.amplitude(r, t); };
        ResidualOptions ropt = default_residual_options({0, 0, 0}, params, f);
        double worst = 0.0;
        const int points = 30;
        const Vec3 span{2.0 * length_perp(params, f) + 1.0, 2.0 * length_perp(params, f) + 1.0,
                        2.0 * length_z(params, f) + 1.0};
        for (int i = 0; i < points; ++i) {
            const double t = uniform(rng, 0.0, 6.0 / f.omega_z);
            const double peak = probe_peak(psi, Vec3{}, span, t, rng);
            const Vec3 r = sample_point(psi, Vec3{}, span, t, peak, 1e-2, rng);
            worst = std::max(worst, schrodinger_residual(psi, params, f, r, t, ropt, peak));
        }
        checks.push_back(make_check("superposition.schrodinger_residual", points, worst,
                                    tol * 1e-5));
    }

    {  // squared norm is conserved
        const SuperpositionState state(params, kicks_for(1.0, 1.0));
        const GridSpec grid = superposition_grid(state, opt.sigma_multiple, opt.grid_points);
        double lo = 0.0, hi = 0.0;
        const int times = 10;
        for (int i = 0; i < times; ++i) {
            const double n2 = superposition_norm2(state, i * (8.0 / f.omega_z) / 9.0, grid);
            if (i == 0) { lo = hi = n2; }
            lo = std::min(lo, n2);
            hi = std::max(hi, n2);
        }
        checks.push_back(make_check("superposition.norm_constancy", times,
                                    (hi - lo) / (0.5 * (hi + lo)), tol * 1e-8));
    }

    {  // centroid follows the trig pattern with one t-independent prefactor
        const SpecialTrajectoryParams kicks = kicks_for(1.0, 1.0);
        const SuperpositionState state(params, kicks);
        const GridSpec grid = superposition_grid(state, opt.sigma_multiple, opt.grid_points);
        const double lp = kicks.lambda_perp(params, f);
        const double lz = kicks.lambda_z(params, f);
        std::vector<double> ratios;
        int accepted_times = 0;
        for (int i = 0; i < 400 && accepted_times < 10; ++i) {
            const double t = 0.05 + i * (6.0 / f.omega_z) / 40.0;
            const double ch = std::cos(0.5 * f.omega_c * t), sh = std::sin(0.5 * f.omega_c * t);
            const double cp = std::cos(f.omega_perp * t), cz = std::cos(f.omega_z * t);
            const bool x_ok = std::abs(ch * cp) > 0.3, y_ok = std::abs(sh * cp) > 0.3;
            const bool z_ok = std::abs(cz) > 0.3;
            if (!(x_ok && y_ok && z_ok)) continue;
            const Vec3 c = superposition_centroid(state, t, grid);
            ratios.push_back(c.x / (lp * ch * cp));
            ratios.push_back(c.y / (-lp * sh * cp));
            ratios.push_back(c.z / (lz * cz));
            ++accepted_times;
        }
        double spread = std::numeric_limits<double>::infinity();
        if (!ratios.empty()) {
            const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
            spread = (*hi - *lo) / std::abs((*lo + *hi) / 2.0);
        }
        checks.push_back(make_check("superposition.centroid_prefactor_constancy",
                                    static_cast<int>(ratios.size()), spread, tol * 1e-4));
    }

    {  // quadrature moments vs the entangled closed forms, 2x2 lambda grid
        double worst = 0.0;
        int points = 0;
        const double lambdas[2] = {0.4, 1.6};
        std::vector<std::pair<double, double>> combos;
        for (double lp : lambdas)
            for (double lz : lambdas) combos.emplace_back(lp, lz);
        combos.emplace_back(1.0, 1.0);
        for (const auto& [lp, lz] : combos) {
            const SuperpositionState state(params, kicks_for(lp, lz));
            const GridSpec grid = superposition_grid(state, opt.sigma_multiple, opt.grid_points);
            for (int i = 0; i < 10; ++i) {
                const double t = i * (10.0 / f.omega_z) / 9.0;
                const std::array<double, 3> measured =
                    superposition_central_moments(state, t, grid);
                const std::array<double, 3> closed = superposition_moments_closed_form(state, t);
                for (int axis = 0; axis < 3; ++axis) {
                    worst = std::max(worst,
                                     std::abs(measured[axis] - closed[axis]) / closed[axis]);
                    ++points;
                }
            }
        }
        checks.push_back(make_check("superposition.moments_closed_form", points, worst,
                                    tol * 1e-5));
    }

    {  // zero kicks: the degenerate superposition (1+i) psi_ground
        std::mt19937_64 rng(opt.seed ^ 0x42ULL);
        const SuperpositionState state(params, kicks_for(0.0, 0.0));
        const StationaryState ground({0, 0, 0}, params);
        double worst = 0.0;
        const int points = 20;
        for (int i = 0; i < points; ++i) {
            const Vec3 r{uniform(rng, -2.0, 2.0) * length_perp(params, f),
                         uniform(rng, -2.0, 2.0) * length_perp(params, f),
                         uniform(rng, -2.0, 2.0) * length_z(params, f)};
            const double t = uniform(rng, 0.0, 5.0);
            const Complex expected = Complex{1.0, 1.0} * ground.amplitude(r, t);
            const Complex actual = state.amplitude(r, t);
            worst = std::max(worst, std::abs(actual - expected) / std::abs(expected));
        }
        const GridSpec grid = superposition_grid(state, opt.sigma_multiple, opt.grid_points);
        const std::array<double, 3> m = superposition_central_moments(state, 0.7, grid);
        const double base_perp = 0.5 * params.hbar / (params.mass * f.omega_perp);
        const double base_z = 0.5 * params.hbar / (params.mass * f.omega_z);
        worst = std::max(worst, std::abs(m[0] - base_perp) / base_perp);
        worst = std::max(worst, std::abs(m[1] - base_perp) / base_perp);
        worst = std::max(worst, std::abs(m[2] - base_z) / base_z);
        checks.push_back(make_check("superposition.zero_kick_limit", points + 3, worst,
                                    tol * 1e-8));
    }

    {  // special trajectory agrees with the general closed form
        std::mt19937_64 rng(opt.seed ^ 0x43ULL);
        const SpecialTrajectoryParams kicks = kicks_for(0.7, -1.2);
        const Trajectory traj(params, kicks.initial_state());
        const double lp = kicks.lambda_perp(params, f);
        double worst_state = 0.0, worst_radius = 0.0;
        const int points = 50;
        for (int i = 0; i < points; ++i) {
            const double t = uniform(rng, 0.0, 20.0);
            const PhaseSpacePoint special = special_trajectory(params, f, kicks, t);
            const PhaseSpacePoint general = traj.at(t);
            const double scale = std::max(1.0, max_component(general));
            worst_state = std::max(worst_state, max_component_diff(special, general) / scale);
            const double r2 = special.x * special.x + special.y * special.y;
            const double expected = lp * lp * std::pow(std::sin(f.omega_perp * t), 2);
            worst_radius = std::max(worst_radius, std::abs(r2 - expected) / (lp * lp));
        }
        checks.push_back(make_check("superposition.special_trajectory_identity", points,
                                    worst_state, tol * 1e-12));
        checks.push_back(make_check("superposition.transverse_radius_identity", points,
                                    worst_radius, tol * 1e-12));
    }

    return checks;
}

// ---------------------------------------------------------------------------
// fidelity
// ---------------------------------------------------------------------------

std::vector<CheckResult> verify_fidelity(const TrapParameters& params, const VerifyOptions& opt) {
    std::vector<CheckResult> checks;
    const DerivedFrequencies f = derive_frequencies(params);
    const double tol = opt.tolerance_scale;
    const double a_perp = length_perp(params, f);
    const double a_z = length_z(params, f);

    auto overlap_grid = [&](const Trajectory& tr1, const Trajectory& tr2, double t) {
        const Vec3 r1 = tr1.at(t).position(), r2 = tr2.at(t).position();
        GridSpec grid = auto_grid({0, 0, 0}, params, f, 0.5 * (r1 + r2), opt.sigma_multiple,
                                  opt.grid_points);
        grid.half_extent.x += 0.5 * std::abs(r1.x - r2.x);
        grid.half_extent.y += 0.5 * std::abs(r1.y - r2.y);
        grid.half_extent.z += 0.5 * std::abs(r1.z - r2.z);
        return grid;
    };

    {  // quadrature overlap vs the closed form, including a well-separated pair
        std::mt19937_64 rng(opt.seed ^ 0x51ULL);
        double worst = 0.0;
        const int trials = 5;
        for (int i = 0; i < trials; ++i) {
            const Trajectory tr1(params, random_initial(rng, params, f));
            Trajectory tr2 = (i == trials - 1)
                ? Trajectory(params, PhaseSpacePoint{3.0 * a_perp, 0.0, 2.0 * a_z, 0, 0, 0})
                : Trajectory(params, random_initial(rng, params, f));
            const double t = uniform(rng, 0.0, 10.0);
            const double analytic = fidelity_analytic(tr1, tr2, t);
            const double numeric = fidelity_numeric(tr1, tr2, t, overlap_grid(tr1, tr2, t));
            worst = std::max(worst, std::abs(analytic - numeric));
        }
        checks.push_back(make_check("fidelity.analytic_vs_numeric", trials, worst, tol * 1e-6));
    }

    {  // fidelity between two evolving packets does not change in time
        std::mt19937_64 rng(opt.seed ^ 0x52ULL);
        double worst = 0.0;
        const int trials = 10;
        for (int i = 0; i < trials; ++i) {
            const Trajectory tr1(params, random_initial(rng, params, f));
            const Trajectory tr2(params, random_initial(rng, params, f));
            worst = std::max(worst, std::abs(fidelity_analytic(tr1, tr2, 0.0)
                                             - fidelity_analytic(tr1, tr2, 7.3)));
        }
        checks.push_back(make_check("fidelity.time_independence", trials, worst, tol * 1e-12));
    }

    {  // identical trajectories: f = 1, d = 0
        std::mt19937_64 rng(opt.seed ^ 0x53ULL);
        const Trajectory tr(params, random_initial(rng, params, f));
        const double worst = std::max(std::abs(fidelity_analytic(tr, tr, 2.1) - 1.0),
                                      trajectory_distance(tr, tr));
        checks.push_back(make_check("fidelity.identity", 2, worst, tol * 1e-12));
    }

    {  // d is a metric: nonnegative, symmetric, triangle inequality
        std::mt19937_64 rng(opt.seed ^ 0x54ULL);
        double worst = 0.0;
        const int trials = 100;
        for (int i = 0; i < trials; ++i) {
            const Trajectory a(params, random_initial(rng, params, f));
            const Trajectory b(params, random_initial(rng, params, f));
            const Trajectory c(params, random_initial(rng, params, f));
            const double dab = trajectory_distance(a, b);
            const double dba = trajectory_distance(b, a);
            const double dbc = trajectory_distance(b, c);
            const double dac = trajectory_distance(a, c);
            worst = std::max(worst, -std::min({dab, dbc, dac}));          // nonnegativity
            worst = std::max(worst, std::abs(dab - dba));                 // symmetry
            worst = std::max(worst, dac - (dab + dbc));                   // triangle
        }
        checks.push_back(make_check("fidelity.metric_properties", trials, worst, tol * 1e-12));
    }

    {  // f = exp(-d^2/hbar) exactly
        std::mt19937_64 rng(opt.seed ^ 0x55ULL);
        double worst = 0.0;
        const int trials = 20;
        for (int i = 0; i < trials; ++i) {
            const Trajectory tr1(params, random_initial(rng, params, f));
            const Trajectory tr2(params, random_initial(rng, params, f));
            const double d = trajectory_distance(tr1, tr2);
            worst = std::max(worst, std::abs(fidelity_analytic(tr1, tr2, 0.0)
                                             - std::exp(-d * d / params.hbar)));
        }
        checks.push_back(make_check("fidelity.distance_relation", trials, worst, tol * 1e-12));
    }

    {  // |<psi1|psi2>|^2 is symmetric under swapping the arguments
        std::mt19937_64 rng(opt.seed ^ 0x56ULL);
        const Trajectory tr1(params, random_initial(rng, params, f));
        const Trajectory tr2(params, random_initial(rng, params, f));
        const GridSpec grid = overlap_grid(tr1, tr2, 1.7);
        const double fwd = fidelity_numeric(tr1, tr2, 1.7, grid);
        const double rev = fidelity_numeric(tr2, tr1, 1.7, grid);
        checks.push_back(make_check("fidelity.swap_symmetry", 2, std::abs(fwd - rev),
                                    tol * 1e-12));
    }

    return checks;
}

std::vector<CheckResult> run_suite(const std::string& suite, const TrapParameters& params,
                                   const VerifyOptions& opt) {
    if (suite == "classical") return verify_classical(params, opt);
    if (suite == "stationary") return verify_stationary(params, opt);
    if (suite == "ict") return verify_ict(params, opt);
    if (suite == "superposition") return verify_superposition(params, opt);
    if (suite == "fidelity") return verify_fidelity(params, opt);
    if (suite == "all") {
        std::vector<CheckResult> all;
        for (const char* name : {"classical", "stationary", "ict", "superposition", "fidelity"}) {
            const auto part = run_suite(name, params, opt);
            all.insert(all.end(), part.begin(), part.end());
        }
        return all;
    }
    throw std::invalid_argument("unknown verification suite '" + suite + "'");
}

}  // namespace penning
