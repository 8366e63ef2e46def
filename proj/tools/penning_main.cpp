// penning: classical orbits, stationary states, trajectory-injected wave
// packets and their verification battery for the Penning trap.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "penning/classical.hpp"
#include "penning/csv.hpp"
#include "penning/grid.hpp"
#include "penning/ict.hpp"
#include "penning/stationary.hpp"
#include "penning/superposition.hpp"
#include "penning/verify.hpp"

namespace {

using nlohmann::json;
using namespace penning;

TrapParameters load_config(const std::string& path) {
    TrapParameters p;
    p.mass = 1.0;
    p.charge = 1.0;
    p.B = 2.0;
    p.D = 0.5;
    p.hbar = 1.0;
    if (path.empty()) return p;

    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
    json j;
    in >> j;
    p.mass = j.value("mass", p.mass);
    p.charge = j.value("charge", p.charge);
    p.B = j.value("B", p.B);
    p.D = j.value("D", p.D);
    p.hbar = j.value("hbar", p.hbar);
    return p;
}

json config_json(const TrapParameters& p) {
    return {{"mass", p.mass}, {"charge", p.charge}, {"B", p.B}, {"D", p.D}, {"hbar", p.hbar}};
}

PhaseSpacePoint parse_traj(const std::string& spec) {
    std::vector<double> v;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) v.push_back(std::stod(item));
    if (v.size() != 6)
        throw std::runtime_error("--traj expects 6 comma-separated values x0,y0,z0,px0,py0,pz0");
    return {v[0], v[1], v[2], v[3], v[4], v[5]};
}

json traj_json(const PhaseSpacePoint& s) {
    return {{"x0", s.x}, {"y0", s.y}, {"z0", s.z}, {"px0", s.px}, {"py0", s.py}, {"pz0", s.pz}};
}

void emit(const std::string& out_path, const std::string& payload) {
    if (out_path.empty()) {
        std::cout << payload;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file '" + out_path + "'");
    out << payload;
}

struct GridFlags {
    int points = 96;
    double sigma_multiple = 8.0;
};

void add_grid_flags(CLI::App* cmd, GridFlags& flags) {
    cmd->add_option("--grid-points", flags.points, "grid points per axis")
        ->check(CLI::Range(16, 1024));
    cmd->add_option("--sigma-multiple", flags.sigma_multiple, "grid half-extent in packet widths")
        ->check(CLI::PositiveNumber);
}

int cmd_frequencies(const TrapParameters& params) {
    const StabilityReport stability = check_stability(params);
    if (!stability.trapped) {
        std::cerr << "untrapped configuration: " << stability.diagnostic << '\n';
        return 2;
    }
    const DerivedFrequencies f = derive_frequencies(params);
    std::ostringstream out;
    out << "omega_c    " << format_double(f.omega_c) << '\n'
        << "omega_perp " << format_double(f.omega_perp) << '\n'
        << "omega_z    " << format_double(f.omega_z) << '\n'
        << "a_perp     " << format_double(length_perp(params, f)) << '\n'
        << "a_z        " << format_double(length_z(params, f)) << '\n'
        << "stable     true\n";
    std::cout << out.str();
    return 0;
}

int cmd_classical(const TrapParameters& params, const PhaseSpacePoint& initial, double t0,
                  double t1, int samples, bool with_energy, const std::string& out_path) {
    if (!(t1 > t0) || samples < 2) {
        std::cerr << "classical: need t1 > t0 and samples >= 2\n";
        return 2;
    }
    const Trajectory traj(params, initial);
    std::ostringstream out;
    write_trajectory_csv(out, traj, t0, t1, samples, with_energy);
    emit(out_path, out.str());
    return 0;
}

int cmd_eigenstate(const TrapParameters& params, const QuantumNumbers& qn, double t,
                   const GridFlags& grid_flags, const std::string& out_path) {
    const StationaryState state(qn, params);
    const GridSpec grid = auto_grid(qn, params, state.freqs(), Vec3{}, grid_flags.sigma_multiple,
                                    grid_flags.points);
    const GridField field = sample(
        [&state](const Vec3& r, double time) { return state.amplitude(r, time); }, grid, t);
    std::ostringstream out;
    write_grid_csv(out, field);
    emit(out_path, out.str());
    return 0;
}

int cmd_ict(const TrapParameters& params, const QuantumNumbers& qn,
            const PhaseSpacePoint& initial, double t, const GridFlags& grid_flags,
            const std::string& out_path) {
    const IctState state(StationaryState(qn, params), Trajectory(params, initial));
    const GridSpec grid = auto_grid(qn, params, state.base().freqs(),
                                    state.trajectory().at(t).position(),
                                    grid_flags.sigma_multiple, grid_flags.points);
    const GridField field = sample(
        [&state](const Vec3& r, double time) { return state.amplitude(r, time); }, grid, t);
    std::ostringstream out;
    write_grid_csv(out, field);
    emit(out_path, out.str());
    return 0;
}

SpecialTrajectoryParams special_kicks_from(const PhaseSpacePoint& initial) {
    if (initial.x != 0.0 || initial.y != 0.0 || initial.z != 0.0 || initial.py != 0.0)
        throw std::runtime_error(
            "superposition expects the kicked trajectory family: only px0 and pz0 may be nonzero");
    SpecialTrajectoryParams kicks;
    kicks.p = initial.px;
    kicks.q = initial.pz;
    return kicks;
}

int cmd_superposition(const TrapParameters& params, const PhaseSpacePoint& initial, double t,
                      const GridFlags& grid_flags, bool report, const std::string& out_path) {
    const SpecialTrajectoryParams kicks = special_kicks_from(initial);
    const SuperpositionState state(params, kicks);
    const GridSpec grid = superposition_grid(state, grid_flags.sigma_multiple, grid_flags.points);

    if (!report) {
        const GridField field = sample(
            [&state](const Vec3& r, double time) { return state.amplitude(r, time); }, grid, t);
        std::ostringstream out;
        write_grid_csv(out, field);
        emit(out_path, out.str());
        return 0;
    }

    const DerivedFrequencies& f = state.freqs();
    const double lp = kicks.lambda_perp(params, f);
    const double lz = kicks.lambda_z(params, f);

    // measure the centroid prefactor where the trig pattern is well away from
    // its zeros, then tabulate moments against the closed forms
    std::vector<double> ratios;
    for (int i = 0; i < 40 && ratios.size() < 24; ++i) {
        const double tc = 0.05 + i * (6.0 / f.omega_z) / 40.0;
        const double ch = std::cos(0.5 * f.omega_c * tc), sh = std::sin(0.5 * f.omega_c * tc);
        const double cp = std::cos(f.omega_perp * tc), cz = std::cos(f.omega_z * tc);
        if (!(std::abs(ch * cp) > 0.3 && std::abs(sh * cp) > 0.3 && std::abs(cz) > 0.3)) continue;
        const Vec3 c = superposition_centroid(state, tc, grid);
        if (lp != 0.0) {
            ratios.push_back(c.x / (lp * ch * cp));
            ratios.push_back(c.y / (-lp * sh * cp));
        }
        if (lz != 0.0) ratios.push_back(c.z / (lz * cz));
    }
    double c_measured = 0.0;
    for (double r : ratios) c_measured += r;
    if (!ratios.empty()) c_measured /= static_cast<double>(ratios.size());

    json moment_table = json::array();
    for (int i = 0; i < 6; ++i) {
        const double tm = i * (6.0 / f.omega_z) / 5.0;
        const auto measured = superposition_central_moments(state, tm, grid);
        const auto closed = superposition_moments_closed_form(state, tm);
        moment_table.push_back({{"t", tm},
                                {"measured", {measured[0], measured[1], measured[2]}},
                                {"closed_form", {closed[0], closed[1], closed[2]}}});
    }

    const json out = {{"config", config_json(params)},
                      {"input", {{"p", kicks.p}, {"q", kicks.q}, {"lambda_perp", lp},
                                 {"lambda_z", lz}, {"t", t}}},
                      {"C_measured", c_measured},
                      {"C_samples", ratios.size()},
                      {"moment_table", moment_table}};
    emit(out_path, out.dump(2) + "\n");
    return 0;
}

int cmd_fidelity(const TrapParameters& params, const PhaseSpacePoint& initial1,
                 const PhaseSpacePoint& initial2, double t, const GridFlags& grid_flags,
                 const std::string& out_path) {
    const Trajectory tr1(params, initial1);
    const Trajectory tr2(params, initial2);
    const DerivedFrequencies f = tr1.freqs();

    const Vec3 r1 = tr1.at(t).position(), r2 = tr2.at(t).position();
    GridSpec grid = auto_grid({0, 0, 0}, params, f, 0.5 * (r1 + r2), grid_flags.sigma_multiple,
                              grid_flags.points);
    grid.half_extent.x += 0.5 * std::abs(r1.x - r2.x);
    grid.half_extent.y += 0.5 * std::abs(r1.y - r2.y);
    grid.half_extent.z += 0.5 * std::abs(r1.z - r2.z);

    const json out = {{"config", config_json(params)},
                      {"input", {{"traj1", traj_json(initial1)}, {"traj2", traj_json(initial2)},
                                 {"t", t}}},
                      {"fidelity_analytic", fidelity_analytic(tr1, tr2, t)},
                      {"fidelity_numeric", fidelity_numeric(tr1, tr2, t, grid)},
                      {"distance", trajectory_distance(tr1, tr2)}};
    emit(out_path, out.dump(2) + "\n");
    return 0;
}

int cmd_verify(const TrapParameters& params, const std::string& suite, const VerifyOptions& opt,
               const std::string& out_path) {
    const std::vector<CheckResult> checks = run_suite(suite, params, opt);
    json check_list = json::array();
    for (const CheckResult& c : checks) check_list.push_back(to_json(c));
    const bool ok = all_pass(checks);
    const json report = {{"suite", suite},
                         {"config", config_json(params)},
                         {"options", {{"grid_points", opt.grid_points},
                                      {"sigma_multiple", opt.sigma_multiple},
                                      {"tolerance_scale", opt.tolerance_scale}}},
                         {"checks", check_list},
                         {"all_pass", ok}};
    emit(out_path, report.dump(2) + "\n");
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Penning trap wave packets: classical orbits, stationary states, "
                 "trajectory-injected solutions and their verification"};
    app.require_subcommand(1);

    std::string config_path, out_path, traj_spec = "0,0,0,0,0,0", traj2_spec = "0,0,0,0,0,0";
    double t = 0.0, t0 = 0.0, t1 = 10.0, tolerance_scale = 1.0;
    int samples = 101, n = 0, l = 0, nz = 0;
    bool with_energy = false, report = false;
    std::string suite = "all";
    GridFlags grid_flags;

    app.add_option("--config", config_path, "JSON config with mass, charge, B, D, hbar");

    CLI::App* frequencies = app.add_subcommand("frequencies", "derived frequencies and stability");

    CLI::App* classical = app.add_subcommand("classical", "closed-form trajectory CSV");
    classical->add_option("--traj", traj_spec, "initial x0,y0,z0,px0,py0,pz0");
    classical->add_option("--t0", t0, "start time");
    classical->add_option("--t1", t1, "end time");
    classical->add_option("--samples", samples, "number of rows");
    classical->add_flag("--with-energy", with_energy, "append an energy column");
    classical->add_option("--out", out_path, "output path (default stdout)");

    CLI::App* eigenstate = app.add_subcommand("eigenstate", "stationary state grid CSV");
    eigenstate->add_option("--n", n, "radial quantum number")->check(CLI::NonNegativeNumber);
    eigenstate->add_option("--l", l, "angular momentum")->check(CLI::NonNegativeNumber);
    eigenstate->add_option("--nz", nz, "axial quantum number")->check(CLI::NonNegativeNumber);
    eigenstate->add_option("--t", t, "sample time");
    eigenstate->add_option("--out", out_path, "output path (default stdout)");
    add_grid_flags(eigenstate, grid_flags);

    CLI::App* ict = app.add_subcommand("ict", "trajectory-injected state grid CSV");
    ict->add_option("--n", n, "radial quantum number")->check(CLI::NonNegativeNumber);
    ict->add_option("--l", l, "angular momentum")->check(CLI::NonNegativeNumber);
    ict->add_option("--nz", nz, "axial quantum number")->check(CLI::NonNegativeNumber);
    ict->add_option("--traj", traj_spec, "injected initial x0,y0,z0,px0,py0,pz0");
    ict->add_option("--t", t, "sample time");
    ict->add_option("--out", out_path, "output path (default stdout)");
    add_grid_flags(ict, grid_flags);

    CLI::App* superposition = app.add_subcommand(
        "superposition", "two-branch kicked superposition: grid CSV or moment report");
    superposition->add_option("--traj", traj_spec, "kicked initial 0,0,0,p,0,q");
    superposition->add_option("--t", t, "sample time");
    superposition->add_flag("--report", report, "emit centroid/moment JSON instead of a grid");
    superposition->add_option("--out", out_path, "output path (default stdout)");
    add_grid_flags(superposition, grid_flags);

    CLI::App* fidelity = app.add_subcommand("fidelity",
                                            "fidelity and distance of two injected packets");
    fidelity->add_option("--traj", traj_spec, "first initial x0,y0,z0,px0,py0,pz0");
    fidelity->add_option("--traj2", traj2_spec, "second initial x0,y0,z0,px0,py0,pz0");
    fidelity->add_option("--t", t, "evaluation time");
    fidelity->add_option("--out", out_path, "output path (default stdout)");
    add_grid_flags(fidelity, grid_flags);

    CLI::App* verify = app.add_subcommand("verify", "run an invariant suite, JSON report");
    verify->add_option("--suite", suite,
                       "all | classical | stationary | ict | superposition | fidelity");
    verify->add_option("--tolerance-scale", tolerance_scale, "multiplies every tolerance")
        ->check(CLI::PositiveNumber);
    verify->add_option("--out", out_path, "output path (default stdout)");
    add_grid_flags(verify, grid_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        const TrapParameters params = load_config(config_path);
        validate_parameters(params);

        if (app.got_subcommand(frequencies)) return cmd_frequencies(params);

        // every other command needs a trapped configuration up front
        const StabilityReport stability = check_stability(params);
        if (!stability.trapped) {
            std::cerr << "untrapped configuration: " << stability.diagnostic << '\n';
            return 2;
        }

        if (app.got_subcommand(classical))
            return cmd_classical(params, parse_traj(traj_spec), t0, t1, samples, with_energy,
                                 out_path);
        if (app.got_subcommand(eigenstate))
            return cmd_eigenstate(params, {n, l, nz}, t, grid_flags, out_path);
        if (app.got_subcommand(ict))
            return cmd_ict(params, {n, l, nz}, parse_traj(traj_spec), t, grid_flags, out_path);
        if (app.got_subcommand(superposition))
            return cmd_superposition(params, parse_traj(traj_spec), t, grid_flags, report,
                                     out_path);
        if (app.got_subcommand(fidelity))
            return cmd_fidelity(params, parse_traj(traj_spec), parse_traj(traj2_spec), t,
                                grid_flags, out_path);
        if (app.got_subcommand(verify)) {
            VerifyOptions opt;
            opt.grid_points = grid_flags.points;
            opt.sigma_multiple = grid_flags.sigma_multiple;
            opt.tolerance_scale = tolerance_scale;
            return cmd_verify(params, suite, opt, out_path);
        }
    } catch (const std::exception& err) {
        std::cerr << "penning: " << err.what() << '\n';
        return 2;
    }
    return 2;
}
