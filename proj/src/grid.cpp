#include "penning/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

namespace penning {

std::int64_t GridSpec::size() const {
    return static_cast<std::int64_t>(points[0]) * points[1] * points[2];
}

Vec3 GridSpec::step() const {
    return {2.0 * half_extent.x / (points[0] - 1),
            2.0 * half_extent.y / (points[1] - 1),
            2.0 * half_extent.z / (points[2] - 1)};
}

Vec3 GridSpec::node(int i, int j, int k) const {
    const Vec3 h = step();
    return {center.x - half_extent.x + i * h.x,
            center.y - half_extent.y + j * h.y,
            center.z - half_extent.z + k * h.z};
}

void GridSpec::validate() const {
    if (!(half_extent.x > 0.0 && half_extent.y > 0.0 && half_extent.z > 0.0))
        throw std::invalid_argument("grid half_extent must be positive componentwise");
    for (int p : points)
        if (p < 16)
            throw std::invalid_argument("grid needs at least 16 points per axis");
    if (size() > (std::int64_t{1} << 27))
        throw std::invalid_argument("grid exceeds 2^27 nodes; reduce points, sigma or the "
                                    "quantum numbers");
}

Complex& GridField::at(int i, int j, int k) {
    return values[(static_cast<std::int64_t>(i) * spec.points[1] + j) * spec.points[2] + k];
}

Complex GridField::at(int i, int j, int k) const {
    return values[(static_cast<std::int64_t>(i) * spec.points[1] + j) * spec.points[2] + k];
}

namespace detail {

void parallel_for(std::int64_t n, const std::function<void(std::int64_t, std::int64_t)>& fn) {
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("PENNING_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1) threads = std::min<unsigned>(threads, static_cast<unsigned>(cap));
    }
    if (threads == 1 || n < 1024) {
        fn(0, n);
        return;
    }
    // fixed chunking, independent of the thread count
    const std::int64_t chunk = (n + threads - 1) / threads;
    std::vector<std::thread> pool;
    for (std::int64_t begin = 0; begin < n; begin += chunk) {
        const std::int64_t end = std::min(n, begin + chunk);
        pool.emplace_back(fn, begin, end);
    }
    for (auto& t : pool) t.join();
}

Complex pairwise_sum(const Complex* data, std::int64_t n) {
    if (n <= 32) {
        Complex s{0.0, 0.0};
        for (std::int64_t i = 0; i < n; ++i) s += data[i];
        return s;
    }
    const std::int64_t half = n / 2;
    return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

}  // namespace detail

GridField sample(const Evaluator& evaluator, const GridSpec& spec, double t) {
    spec.validate();
    GridField field{spec, std::vector<Complex>(static_cast<std::size_t>(spec.size()))};
    const int ny = spec.points[1], nz = spec.points[2];
    const std::int64_t plane = static_cast<std::int64_t>(ny) * nz;

    detail::parallel_for(spec.points[0], [&](std::int64_t ibegin, std::int64_t iend) {
        for (std::int64_t i = ibegin; i < iend; ++i)
            for (int j = 0; j < ny; ++j)
                for (int k = 0; k < nz; ++k)
                    field.values[i * plane + j * nz + k] =
                        evaluator(spec.node(static_cast<int>(i), j, k), t);
    });
    return field;
}

namespace {

inline double trapezoid_weight(int idx, int npts) {
    return (idx == 0 || idx == npts - 1) ? 0.5 : 1.0;
}

IntegralResult reduce(const GridField& field, const std::function<double(const Vec3&)>* weight) {
    const GridSpec& spec = field.spec;
    const int nx = spec.points[0], ny = spec.points[1], nz = spec.points[2];
    const Vec3 h = spec.step();

    std::vector<Complex> integrand(field.values.size());
    std::vector<double> max_abs(nx, 0.0), max_abs_boundary(nx, 0.0);

    detail::parallel_for(nx, [&](std::int64_t ibegin, std::int64_t iend) {
        for (std::int64_t i = ibegin; i < iend; ++i) {
            double mx = 0.0, mxb = 0.0;
            for (int j = 0; j < ny; ++j)
                for (int k = 0; k < nz; ++k) {
                    const std::int64_t idx = (i * ny + j) * nz + k;
                    Complex v = field.values[idx];
                    if (weight) v *= (*weight)(spec.node(static_cast<int>(i), j, k));
                    const double a = std::abs(v);
                    mx = std::max(mx, a);
                    const bool on_boundary = (i == 0 || i == nx - 1 || j == 0 || j == ny - 1
                                              || k == 0 || k == nz - 1);
                    if (on_boundary) mxb = std::max(mxb, a);
                    integrand[idx] = v
                        * (trapezoid_weight(static_cast<int>(i), nx)
                           * trapezoid_weight(j, ny) * trapezoid_weight(k, nz));
                }
            max_abs[i] = mx;
            max_abs_boundary[i] = mxb;
        }
    });

    const Complex total = detail::pairwise_sum(integrand.data(),
                                               static_cast<std::int64_t>(integrand.size()));
    const double peak = *std::max_element(max_abs.begin(), max_abs.end());
    const double boundary_peak = *std::max_element(max_abs_boundary.begin(), max_abs_boundary.end());

    IntegralResult out;
    out.value = total * (h.x * h.y * h.z);
    out.boundary_ratio = (peak > 0.0) ? boundary_peak / peak : 0.0;
    out.boundary_ok = out.boundary_ratio <= 1e-12;
    return out;
}

}  // namespace

IntegralResult integrate(const GridField& field) {
    return reduce(field, nullptr);
}

IntegralResult integrate(const GridField& field, const std::function<double(const Vec3&)>& weight) {
    return reduce(field, &weight);
}

namespace {

bool same_geometry(const GridSpec& a, const GridSpec& b) {
    return a.points == b.points && a.center.x == b.center.x && a.center.y == b.center.y
        && a.center.z == b.center.z && a.half_extent.x == b.half_extent.x
        && a.half_extent.y == b.half_extent.y && a.half_extent.z == b.half_extent.z;
}

}  // namespace

IntegralResult overlap(const GridField& a, const GridField& b) {
    if (!same_geometry(a.spec, b.spec))
        throw std::invalid_argument("overlap: fields sampled on different grids");
    GridField product{a.spec, std::vector<Complex>(a.values.size())};
    detail::parallel_for(static_cast<std::int64_t>(a.values.size()),
                         [&](std::int64_t begin, std::int64_t end) {
                             for (std::int64_t i = begin; i < end; ++i)
                                 product.values[i] = std::conj(a.values[i]) * b.values[i];
                         });
    return integrate(product);
}

namespace {

// The density of a size-s state oscillates on the scale a/sqrt(s); nodes
// spaced wider than ~1.1 a/sqrt(s) alias badly. Small states keep the
// requested count, large ones get upscaled to hold the stated tolerances.
int points_for_axis(int requested, double half_extent, double width, double s) {
    const double max_step = 1.1 * width / std::sqrt(s);
    const int needed = 1 + static_cast<int>(std::ceil(2.0 * half_extent / max_step));
    return std::max(requested, needed);
}

}  // namespace

GridSpec auto_grid(const QuantumNumbers& qn, const TrapParameters& params,
                   const DerivedFrequencies& freqs, const Vec3& center,
                   double sigma_multiple, int points_per_axis) {
    const double a_perp = length_perp(params, freqs);
    const double a_z = length_z(params, freqs);
    const double s_perp = 2.0 * qn.n + qn.l + 1.0;
    const double s_z = 2.0 * qn.nz + 1.0;
    const double span_perp = sigma_multiple * std::sqrt(s_perp) * a_perp;
    const double span_z = sigma_multiple * std::sqrt(s_z) * a_z;

    GridSpec spec;
    spec.center = center;
    spec.half_extent = {span_perp, span_perp, span_z};
    const int n_perp = points_for_axis(points_per_axis, span_perp, a_perp, s_perp);
    const int n_z = points_for_axis(points_per_axis, span_z, a_z, s_z);
    spec.points = {n_perp, n_perp, n_z};
    spec.validate();
    return spec;
}

}  // namespace penning
