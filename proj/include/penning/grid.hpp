#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "penning/specialfn.hpp"
#include "penning/trap.hpp"

namespace penning {

using Complex = std::complex<double>;

/// Pure map (position, time) -> complex amplitude. Residual checkers and the
/// sampler work uniformly on stationary, injected and superposition states
/// through this signature.
using Evaluator = std::function<Complex(const Vec3&, double)>;

/// Uniform tensor-product sampling box, endpoints included.
struct GridSpec {
    Vec3 center;
    Vec3 half_extent;                       // componentwise > 0
    std::array<int, 3> points = {96, 96, 96};  // per axis, each >= 16

    std::int64_t size() const;
    Vec3 step() const;                      // node spacing per axis
    Vec3 node(int i, int j, int k) const;

    /// Throws std::invalid_argument on nonpositive extents or points < 16.
    void validate() const;
};

/// Sampled complex field, row-major with z fastest:
/// values[(i*ny + j)*nz + k] = f(node(i,j,k)).
struct GridField {
    GridSpec spec;
    std::vector<Complex> values;

    Complex& at(int i, int j, int k);
    Complex at(int i, int j, int k) const;
};

/// Tensor-product sampling of the evaluator at time t. Deterministic:
/// two samplings of the same pure evaluator are bitwise identical.
GridField sample(const Evaluator& evaluator, const GridSpec& spec, double t);

struct IntegralResult {
    Complex value;
    double boundary_ratio = 0.0;  ///< max |integrand| on the boundary / overall
    bool boundary_ok = true;      ///< boundary_ratio <= 1e-12
};

/// Trapezoidal tensor-product quadrature of the sampled field, error O(h^2)
/// per axis. The reduction is a fixed pairwise summation so results are
/// reproducible bit for bit. boundary_ok reports the decay precondition.
IntegralResult integrate(const GridField& field);

/// Same, with a per-node real weight applied to the integrand (moments,
/// centroids). The boundary check applies to the weighted integrand.
IntegralResult integrate(const GridField& field, const std::function<double(const Vec3&)>& weight);

/// <a|b> = integral of conj(a) * b over the shared grid. Both fields must be
/// sampled on the same spec.
IntegralResult overlap(const GridField& a, const GridField& b);

/// Box sized for a Gaussian-damped state: half-extent
/// sigma_multiple*sqrt(2n+l+1)*a_perp transversally and
/// sigma_multiple*sqrt(2nz+1)*a_z axially, centered where the packet sits.
GridSpec auto_grid(const QuantumNumbers& qn, const TrapParameters& params,
                   const DerivedFrequencies& freqs, const Vec3& center,
                   double sigma_multiple = 8.0, int points_per_axis = 96);

namespace detail {
/// Runs fn(begin..end) chunks on up to PENNING_THREADS threads (hardware
/// concurrency by default). Chunks partition disjoint index ranges, so the
/// computed values never depend on the thread count.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t, std::int64_t)>& fn);

Complex pairwise_sum(const Complex* data, std::int64_t n);
}  // namespace detail

}  // namespace penning
