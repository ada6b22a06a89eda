#pragma once

// Seeded random configurations. Every sample index owns an independent
// substream derived from (seed, index), so batches give identical results
// regardless of evaluation order or partitioning.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>

#include "ratiolab/cubic_model.hpp"
#include "ratiolab/numeric_kernel.hpp"

namespace ratiolab {

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

class Substream {
public:
    Substream(std::uint64_t seed, std::uint64_t index)
        : engine_(splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL))) {}

    /// Uniform on [0, 1) from the top 53 bits.
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

    double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }

    bool coin(double p = 0.5) { return unit() < p; }

private:
    std::mt19937_64 engine_;
};

/// A random admissible configuration placed at a random scale and offset.
struct AdmissibleSample {
    OrderedCubic cubic;
    NormalizedCubic normalized;
    AdmissibilityReport report;
    bool boundary_family = false;
};

struct SamplerOptions {
    double boundary_fraction = 0.2;
    double min_log10_scale = -3.0;
    double max_log10_scale = 3.0;
    double t_max = 1e3;  // boundary family: sqrt 3 <= |t| <= t_max
};

namespace detail {

inline std::optional<AdmissibleSample> try_place(Complex w2, Complex w3, bool boundary, Substream& rng,
                                                 const SamplerOptions& opt, const ToleranceConfig& tol)
{
    if (!assess_admissibility(w2, w3, tol).admissible)
        return std::nullopt;
    const double scale = std::pow(10.0, rng.uniform(opt.min_log10_scale, opt.max_log10_scale));
    const Complex offset = scale * Complex{rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0)};
    AdmissibleSample s;
    try {
        s.cubic = order_roots(offset - scale * w3, offset + scale * w2, offset + scale * w3, tol);
    } catch (const Error&) {
        return std::nullopt;
    }
    s.normalized = normalize(s.cubic);
    s.report = assess_admissibility(s.normalized.w2n, s.normalized.w3n, tol);
    if (!s.report.admissible || s.report.on_boundary != boundary || s.report.coincident != s.cubic.coincident)
        return std::nullopt;
    s.boundary_family = boundary;
    return s;
}

}  // namespace detail

/// Interior draws take Re w3 in (0, 10], Im w3 in [-10, 10] and w2 uniform
/// in [-10, 10]^2; boundary draws take w2 = i t w3 with log-uniform |t|.
/// Non-admissible draws are rejected.
inline AdmissibleSample draw_admissible(std::uint64_t seed, std::uint64_t index, const ToleranceConfig& tol = {},
                                        const SamplerOptions& opt = {})
{
    Substream rng(seed, index);
    for (;;) {
        const bool boundary = rng.coin(opt.boundary_fraction);
        const Complex w3{10.0 * (1.0 - rng.unit()), rng.uniform(-10.0, 10.0)};
        Complex w2;
        if (boundary) {
            const double t = rng.log_uniform(kSqrt3, opt.t_max) * (rng.coin() ? 1.0 : -1.0);
            w2 = Complex{0.0, t} * w3;
        } else {
            w2 = Complex{rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0)};
        }
        if (auto s = detail::try_place(w2, w3, boundary, rng, opt, tol))
            return *s;
    }
}

/// Vertices of a random equilateral triangle with no vertical side.
inline OrderedCubic draw_equilateral(std::uint64_t seed, std::uint64_t index, const ToleranceConfig& tol = {})
{
    Substream rng(seed, index);
    for (;;) {
        const Complex center{rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0)};
        const double radius = std::pow(10.0, rng.uniform(-2.0, 2.0));
        const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
        std::array<Complex, 3> v;
        for (int k = 0; k < 3; ++k)
            v[k] = center + std::polar(radius, phase + 2.0 * std::numbers::pi * k / 3.0);
        try {
            return order_roots(v[0], v[1], v[2], tol);
        } catch (const Error&) {
        }
    }
}

/// Three distinct points on a random non-vertical line.
inline OrderedCubic draw_collinear(std::uint64_t seed, std::uint64_t index, const ToleranceConfig& tol = {})
{
    Substream rng(seed, index);
    for (;;) {
        const Complex base{rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0)};
        const double angle = rng.uniform(-1.5, 1.5);
        const Complex dir = std::polar(1.0, angle);
        std::array<Complex, 3> v;
        for (auto& p : v)
            p = base + rng.uniform(-10.0, 10.0) * dir;
        try {
            return order_roots(v[0], v[1], v[2], tol);
        } catch (const Error&) {
        }
    }
}

/// Three distinct real roots in [-10, 10].
inline OrderedCubic draw_hyperbolic(std::uint64_t seed, std::uint64_t index, const ToleranceConfig& tol = {})
{
    Substream rng(seed, index);
    for (;;) {
        try {
            return order_roots(rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0), tol);
        } catch (const Error&) {
        }
    }
}

}  // namespace ratiolab
