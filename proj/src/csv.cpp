#include "penning/csv.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace penning {

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory, double t0, double t1,
                          int samples, bool with_energy) {
    if (samples < 2)
        throw std::invalid_argument("trajectory csv needs at least 2 samples");
    if (!(t1 > t0))
        throw std::invalid_argument("trajectory csv needs t1 > t0");

    out << "t,x,y,z,px,py,pz";
    if (with_energy) out << ",E";
    out << '\n';

    const double dt = (t1 - t0) / (samples - 1);
    for (int i = 0; i < samples; ++i) {
        const double t = t0 + i * dt;
        const PhaseSpacePoint s = trajectory.at(t);
        out << format_double(t) << ',' << format_double(s.x) << ',' << format_double(s.y) << ','
            << format_double(s.z) << ',' << format_double(s.px) << ',' << format_double(s.py)
            << ',' << format_double(s.pz);
        if (with_energy)
            out << ',' << format_double(hamiltonian_value(s, trajectory.params(),
                                                          trajectory.freqs()));
        out << '\n';
    }
}

void write_grid_csv(std::ostream& out, const GridField& field) {
    const GridSpec& g = field.spec;
    out << "# center=" << format_double(g.center.x) << ' ' << format_double(g.center.y) << ' '
        << format_double(g.center.z) << ", half_extent=" << format_double(g.half_extent.x) << ' '
        << format_double(g.half_extent.y) << ' ' << format_double(g.half_extent.z)
        << ", points=" << g.points[0] << ' ' << g.points[1] << ' ' << g.points[2] << '\n';
    out << "x,y,z,re,im,rho\n";
    for (int i = 0; i < g.points[0]; ++i)
        for (int j = 0; j < g.points[1]; ++j)
            for (int k = 0; k < g.points[2]; ++k) {
                const Vec3 r = g.node(i, j, k);
                const Complex v = field.at(i, j, k);
                out << format_double(r.x) << ',' << format_double(r.y) << ',' << format_double(r.z)
                    << ',' << format_double(v.real()) << ',' << format_double(v.imag()) << ','
                    << format_double(std::norm(v)) << '\n';
            }
}

namespace {

double parse_double(const std::string& s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{})
        throw std::runtime_error("grid csv: bad number '" + s + "'");
    return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, sep)) parts.push_back(item);
    return parts;
}

}  // namespace

GridField read_grid_csv(std::istream& in) {
    std::string meta, header;
    if (!std::getline(in, meta) || meta.rfind("# center=", 0) != 0)
        throw std::runtime_error("grid csv: missing metadata line");
    if (!std::getline(in, header) || header != "x,y,z,re,im,rho")
        throw std::runtime_error("grid csv: missing column header");

    GridSpec spec;
    // "# center=cx cy cz, half_extent=hx hy hz, points=nx ny nz"
    const auto sections = split(meta.substr(2), ',');
    if (sections.size() != 3)
        throw std::runtime_error("grid csv: malformed metadata line");
    auto values_of = [](const std::string& section) {
        const auto eq = section.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("grid csv: malformed metadata section");
        std::vector<std::string> vals;
        std::stringstream ss(section.substr(eq + 1));
        std::string item;
        while (ss >> item) vals.push_back(item);
        if (vals.size() != 3)
            throw std::runtime_error("grid csv: metadata section needs 3 values");
        return vals;
    };
    const auto c = values_of(sections[0]);
    const auto h = values_of(sections[1]);
    const auto n = values_of(sections[2]);
    spec.center = {parse_double(c[0]), parse_double(c[1]), parse_double(c[2])};
    spec.half_extent = {parse_double(h[0]), parse_double(h[1]), parse_double(h[2])};
    spec.points = {std::stoi(n[0]), std::stoi(n[1]), std::stoi(n[2])};
    spec.validate();

    GridField field{spec, std::vector<Complex>(static_cast<std::size_t>(spec.size()))};
    std::string line;
    for (std::int64_t idx = 0; idx < spec.size(); ++idx) {
        if (!std::getline(in, line))
            throw std::runtime_error("grid csv: truncated data section");
        const auto cols = split(line, ',');
        if (cols.size() != 6)
            throw std::runtime_error("grid csv: expected 6 columns");
        field.values[idx] = {parse_double(cols[3]), parse_double(cols[4])};
    }
    return field;
}

}  // namespace penning
