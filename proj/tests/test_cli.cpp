#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "penning/csv.hpp"
#include "penning/grid.hpp"

using namespace penning;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path()
                   / ("penning_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

RunResult run_cli(const std::string& args) {
    static int counter = 0;
    const fs::path out = scratch_dir() / ("out" + std::to_string(counter));
    const fs::path err = scratch_dir() / ("err" + std::to_string(counter));
    ++counter;
    const std::string cmd = std::string(PENNING_CLI_PATH) + " " + args + " > " + out.string()
                          + " 2> " + err.string();
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

fs::path write_config(const std::string& name, const json& j) {
    const fs::path p = scratch_dir() / name;
    std::ofstream out(p);
    out << j.dump();
    return p;
}

std::vector<std::vector<double>> parse_csv_rows(const std::string& text, char skip_prefix = '#') {
    std::vector<std::vector<double>> rows;
    std::stringstream ss(text);
    std::string line;
    bool header_seen = false;
    while (std::getline(ss, line)) {
        if (line.empty() || line[0] == skip_prefix) continue;
        if (!header_seen) {  // column header
            header_seen = true;
            continue;
        }
        std::vector<double> row;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

TEST_CASE("frequencies: reference values, determinism, exit codes") {
    const RunResult r = run_cli("frequencies");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("omega_c    2\n") != std::string::npos);
    CHECK(r.out.find("omega_perp 0.7071067811865476\n") != std::string::npos);
    CHECK(r.out.find("omega_z    1\n") != std::string::npos);
    CHECK(r.out.find("stable     true") != std::string::npos);

    const RunResult again = run_cli("frequencies");
    CHECK(again.out == r.out);  // byte-for-byte deterministic

    const fs::path bad = write_config("untrapped.json",
                                      {{"mass", 1}, {"charge", 1}, {"B", 1}, {"D", 1}});
    const RunResult fail = run_cli("--config " + bad.string() + " frequencies");
    CHECK(fail.exit_code == 2);
    CHECK(fail.err.find("untrapped") != std::string::npos);
}

TEST_CASE("classical: csv layout, initial row, conserved energy column") {
    const RunResult r =
        run_cli("classical --t0 0 --t1 10 --samples 5 --traj 0.3,-0.7,1.1,0.2,-0.5,0.9 "
                "--with-energy");
    CHECK(r.exit_code == 0);
    CHECK(r.out.rfind("t,x,y,z,px,py,pz,E\n", 0) == 0);

    const auto rows = parse_csv_rows(r.out);
    REQUIRE(rows.size() == 5);
    CHECK(rows[0][0] == 0.0);
    CHECK(rows[0][1] == 0.3);
    CHECK(rows[0][2] == -0.7);
    CHECK(rows[0][3] == 1.1);
    CHECK(rows[0][4] == 0.2);
    CHECK(rows[0][5] == -0.5);
    CHECK(rows[0][6] == 0.9);
    for (const auto& row : rows)
        CHECK(row[7] == doctest::Approx(rows[0][7]).epsilon(1e-12));

    CHECK(run_cli("classical --t0 2 --t1 1").exit_code == 2);
    CHECK(run_cli("classical --samples 1").exit_code == 2);

    const std::string args = "classical --t0 0 --t1 5 --samples 40 --traj 1,0,0.5,0,0.6,0";
    CHECK(run_cli(args).out == run_cli(args).out);

    // two samples over a vanishing window: rows nearly identical
    const RunResult tiny = run_cli("classical --t0 1 --t1 1.000000001 --samples 2 "
                                   "--traj 0.3,-0.7,1.1,0.2,-0.5,0.9");
    const auto tiny_rows = parse_csv_rows(tiny.out);
    REQUIRE(tiny_rows.size() == 2);
    for (std::size_t col = 1; col < tiny_rows[0].size(); ++col)
        CHECK(tiny_rows[1][col] == doctest::Approx(tiny_rows[0][col]).epsilon(1e-7));
}

TEST_CASE("eigenstate grid export integrates to one and reconstructs") {
    const fs::path out = scratch_dir() / "ground.csv";
    const RunResult r = run_cli("eigenstate --n 0 --l 0 --nz 0 --grid-points 48 --out "
                                + out.string());
    CHECK(r.exit_code == 0);

    std::ifstream in(out);
    const GridField field = read_grid_csv(in);
    CHECK(field.spec.points[0] == 48);
    CHECK(overlap(field, field).value.real() == doctest::Approx(1.0).epsilon(1e-6));

    CHECK(run_cli("eigenstate --n -1").exit_code == 2);

    // sigma override changes the exported box
    const fs::path narrow = scratch_dir() / "narrow.csv";
    CHECK(run_cli("eigenstate --n 0 --l 0 --nz 0 --grid-points 32 --sigma-multiple 6 --out "
                  + narrow.string()).exit_code == 0);
    std::ifstream nin(narrow);
    const GridField nf = read_grid_csv(nin);
    CHECK(nf.spec.half_extent.x == doctest::Approx(0.75 * field.spec.half_extent.x)
                                       .epsilon(1e-12));
}

TEST_CASE("ict grid is the eigenstate grid rigidly shifted in density") {
    const fs::path ict_csv = scratch_dir() / "ict.csv";
    const fs::path eig_csv = scratch_dir() / "eig.csv";
    const std::string qn = "--n 0 --l 1 --nz 0 --grid-points 32";
    CHECK(run_cli("ict " + qn + " --traj 0.4,-0.2,0.3,0.1,0.2,-0.3 --t 1.7 --out "
                  + ict_csv.string()).exit_code == 0);
    CHECK(run_cli("eigenstate " + qn + " --out " + eig_csv.string()).exit_code == 0);

    std::ifstream fi(ict_csv), fe(eig_csv);
    const GridField ict = read_grid_csv(fi);
    const GridField eig = read_grid_csv(fe);
    REQUIRE(ict.values.size() == eig.values.size());
    // same node offsets, centers differ by r(t): densities agree row by row
    double peak = 0.0;
    for (const Complex& v : eig.values) peak = std::max(peak, std::norm(v));
    for (std::size_t i = 0; i < ict.values.size(); ++i)
        CHECK(std::abs(std::norm(ict.values[i]) - std::norm(eig.values[i])) < 1e-10 * peak);
}

TEST_CASE("superposition with zero kicks is twice the ground density") {
    const fs::path sup_csv = scratch_dir() / "sup.csv";
    const fs::path gnd_csv = scratch_dir() / "gnd.csv";
    CHECK(run_cli("superposition --traj 0,0,0,0,0,0 --grid-points 32 --out "
                  + sup_csv.string()).exit_code == 0);
    CHECK(run_cli("eigenstate --n 0 --l 0 --nz 0 --grid-points 32 --out "
                  + gnd_csv.string()).exit_code == 0);

    std::ifstream fs_(sup_csv), fg(gnd_csv);
    const GridField sup = read_grid_csv(fs_);
    const GridField gnd = read_grid_csv(fg);
    REQUIRE(sup.values.size() == gnd.values.size());
    double peak = 0.0;
    for (const Complex& v : gnd.values) peak = std::max(peak, std::norm(v));
    for (std::size_t i = 0; i < sup.values.size(); ++i)
        CHECK(std::abs(std::norm(sup.values[i]) - 2.0 * std::norm(gnd.values[i]))
              < 1e-12 * peak);

    // the kicked family only admits px0 and pz0
    CHECK(run_cli("superposition --traj 1,0,0,0.5,0,0.5").exit_code == 2);
}

TEST_CASE("superposition report json") {
    const RunResult r = run_cli("superposition --traj 0,0,0,0.70710678,0,1 --report "
                                "--grid-points 48");
    CHECK(r.exit_code == 0);
    const json j = json::parse(r.out);
    CHECK(j.contains("C_measured"));
    CHECK(j.contains("moment_table"));
    CHECK(j["config"]["B"] == 2.0);
    const double c = j["C_measured"];
    CHECK(c > 0.0);
    CHECK(c < 1.0);
    for (const auto& row : j["moment_table"])
        for (int axis = 0; axis < 3; ++axis) {
            const double measured = row["measured"][axis];
            const double closed = row["closed_form"][axis];
            CHECK(measured == doctest::Approx(closed).epsilon(1e-5));
        }
}

TEST_CASE("fidelity json") {
    const RunResult r = run_cli("fidelity --traj 0.4,0,-0.3,0.2,0.5,0 "
                                "--traj2 -0.2,0.3,0.1,-0.4,0,0.6 --t 2.3 --grid-points 48");
    CHECK(r.exit_code == 0);
    const json j = json::parse(r.out);
    const double fa = j["fidelity_analytic"], fn = j["fidelity_numeric"], d = j["distance"];
    CHECK(std::abs(fa - fn) < 1e-6);
    CHECK(d >= 0.0);
    CHECK(fa == doctest::Approx(std::exp(-d * d)).epsilon(1e-12));
    CHECK(j["input"]["traj1"]["x0"] == 0.4);
}

TEST_CASE("verify: report schema, exit codes, determinism") {
    const fs::path report1 = scratch_dir() / "verify1.json";
    const fs::path report2 = scratch_dir() / "verify2.json";
    CHECK(run_cli("verify --suite classical --out " + report1.string()).exit_code == 0);
    CHECK(run_cli("verify --suite classical --out " + report2.string()).exit_code == 0);
    CHECK(slurp(report1) == slurp(report2));

    const json j = json::parse(slurp(report1));
    CHECK(j["all_pass"] == true);
    CHECK(j["suite"] == "classical");
    REQUIRE(j["checks"].is_array());
    CHECK(j["checks"].size() > 0);
    for (const auto& c : j["checks"]) {
        CHECK(c.contains("check_name"));
        CHECK(c.contains("points_tested"));
        CHECK(c.contains("max_residual"));
        CHECK(c.contains("tolerance"));
        CHECK(c.contains("pass"));
    }

    CHECK(run_cli("verify --suite bogus").exit_code == 2);

    // a quadrature-heavy suite through the CLI also exits clean
    const RunResult fid = run_cli("verify --suite fidelity");
    CHECK(fid.exit_code == 0);
    CHECK(json::parse(fid.out)["all_pass"] == true);
}
