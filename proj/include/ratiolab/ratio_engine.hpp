#pragma once

// The ratio vector (sigma1, sigma2) of a cubic, computed three ways: from
// the definition on labeled critical points, from closed forms in
// w = w2 / w3 on the normalized configuration, and from the boundary
// parameterization w = i t, |t| >= sqrt 3.

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <utility>

#include "ratiolab/cubic_model.hpp"
#include "ratiolab/numeric_kernel.hpp"

namespace ratiolab {

/// Which formula produced a ratio vector.
enum class RatioPath {
    Direct,             // definition on the labeled critical points
    Coincident,         // z1 == z2
    Interior,           // f, g with sqrt(3 + w^2) on the sheet of the labeled roots
    InteriorAlternate,  // f, g with the opposite sign of sqrt(3 + w^2)
    Boundary,           // w = i t, Im w3 > 0: the boundary formula in t
    BoundaryMirrored,   // w = i t, Im w3 < 0: conjugate of the formula at -t
    Extension,          // value of f or g at a removable singularity, not a ratio
    Excluded,           // w on the excluded set; no value
};

inline const char* to_string(RatioPath p)
{
    switch (p) {
    case RatioPath::Direct: return "direct";
    case RatioPath::Coincident: return "coincident";
    case RatioPath::Interior: return "interior";
    case RatioPath::InteriorAlternate: return "interior_alternate";
    case RatioPath::Boundary: return "boundary";
    case RatioPath::BoundaryMirrored: return "boundary_mirrored";
    case RatioPath::Extension: return "extension";
    case RatioPath::Excluded: return "excluded";
    }
    return "unknown";
}

struct RatioVector {
    Complex sigma1;
    Complex sigma2;
    RatioPath path = RatioPath::Direct;
};

/// Parameter of a point w = i t on the boundary of the domain of f and g.
class BoundaryPoint {
public:
    explicit BoundaryPoint(double t, const ToleranceConfig& tol = {}) : t_(t)
    {
        if (!std::isfinite(t) || std::abs(t) < kSqrt3 - tol.eq_tol)
            throw Error(ErrorKind::BadParameter, "boundary parameter requires |t| >= sqrt(3)");
    }

    double t() const { return t_; }

    /// sqrt(t^2 - 3), clamped at zero inside the tolerance band.
    double root() const { return std::sqrt(std::max(0.0, (t_ - kSqrt3) * (t_ + kSqrt3))); }

private:
    double t_;
};

struct BoundaryUV {
    double u1, u2, v1, v2;
};

struct BoundaryModulus {
    double a, b;  // 9 |u1 + i v1|^2 and 9 |u2 + i v2|^2
};

namespace detail {

inline constexpr double kRemovableBand = 1e-7;

// t^2 + 3 + t s and t^2 + 3 - t s, whose product is 9 (t^2 + 1). The
// cancelling one is recovered from that product.
inline std::pair<double, double> boundary_numerators(double t, double s)
{
    const double base = t * t + 3.0;
    const double prod = 9.0 * (t * t + 1.0);
    if (t >= 0.0) {
        const double plus = base + t * s;
        return {plus, prod / plus};
    }
    const double minus = base - t * s;
    return {prod / minus, minus};
}

// t + s without cancellation for t < 0: (s^2 - t^2) / (s - t) = -3 / (s - t).
inline double t_plus_root(double t, double s)
{
    return t >= 0.0 ? t + s : -3.0 / (s - t);
}

// sqrt(3 + w^2), taken as zero when 3 + w^2 is below the rounding floor so
// that the double nearest +-i sqrt 3 evaluates as the branch tip itself.
inline Complex closed_root(Complex w)
{
    const Complex z = 3.0 + w * w;
    if (std::abs(z) <= kDiscriminantFloor * (3.0 + std::norm(w)))
        return 0.0;
    return principal_sqrt(z);
}

inline Complex f_closed(Complex w, Complex root)
{
    if (std::abs(w + 1.0) < kRemovableBand)
        return 0.5;
    return (w + 3.0 - root) / (3.0 * (w + 1.0));
}

inline Complex g_closed(Complex w, Complex root)
{
    if (std::abs(w - 1.0) < kRemovableBand)
        return 0.5;
    return (-2.0 * w + root) / (3.0 * (1.0 - w));
}

}  // namespace detail

/// Distance from w to the excluded set {Re w = 0, |Im w| >= sqrt 3}.
inline double excluded_set_distance(Complex w)
{
    const double y = std::abs(w.imag());
    if (y >= kSqrt3)
        return std::abs(w.real());
    return std::hypot(w.real(), kSqrt3 - y);
}

inline bool in_excluded_set(Complex w, const ToleranceConfig& tol = {})
{
    return excluded_set_distance(w) <= tol.boundary_tol;
}

namespace detail {

// The closed forms are discontinuous across the excluded set except at its
// endpoints +-i sqrt 3, where sqrt(3 + w^2) vanishes.
inline void require_off_excluded_set(Complex w, const ToleranceConfig& tol)
{
    require_finite(w, "w");
    if (!in_excluded_set(w, tol))
        return;
    if (std::abs(3.0 + w * w) <= kDiscriminantFloor * (3.0 + std::norm(w)))
        return;
    throw Error(ErrorKind::OutsideDomain, "w lies on the excluded set; use the boundary formula");
}

}  // namespace detail

/// Analytic extension of sigma1: (w + 3 - sqrt(3 + w^2)) / (3 (w + 1)), and
/// 1/2 at the removable singularity w = -1.
inline Complex f_extension(Complex w, const ToleranceConfig& tol = {})
{
    detail::require_off_excluded_set(w, tol);
    return detail::f_closed(w, detail::closed_root(w));
}

/// Analytic extension of sigma2: (-2 w + sqrt(3 + w^2)) / (3 (1 - w)), and
/// 1/2 at the removable singularity w = 1.
inline Complex g_extension(Complex w, const ToleranceConfig& tol = {})
{
    detail::require_off_excluded_set(w, tol);
    return detail::g_closed(w, detail::closed_root(w));
}

/// The companion branches with +sqrt in f and -sqrt in g. These give the
/// ratios when w3 sqrt(3 + w^2) has negative real part.
inline Complex f_alternate(Complex w, const ToleranceConfig& tol = {})
{
    detail::require_off_excluded_set(w, tol);
    if (std::abs(w + 1.0) < detail::kRemovableBand)
        throw Error(ErrorKind::OutsideDomain, "alternate branch has a pole at w = -1");
    return (w + 3.0 + detail::closed_root(w)) / (3.0 * (w + 1.0));
}

inline Complex g_alternate(Complex w, const ToleranceConfig& tol = {})
{
    detail::require_off_excluded_set(w, tol);
    if (std::abs(w - 1.0) < detail::kRemovableBand)
        throw Error(ErrorKind::OutsideDomain, "alternate branch has a pole at w = 1");
    return (-2.0 * w - detail::closed_root(w)) / (3.0 * (1.0 - w));
}

inline BoundaryUV boundary_uv(double t, const ToleranceConfig& tol = {})
{
    const BoundaryPoint b(t, tol);
    const double s = b.root();
    const auto [plus, minus] = detail::boundary_numerators(t, s);
    const double den = 3.0 * (t * t + 1.0);
    return {plus / den, minus / den, (-2.0 * t + s) / den, (-2.0 * t - s) / den};
}

/// sigma1 on the boundary, (i t + i sqrt(t^2 - 3) + 3) / (3 (i t + 1)).
/// Valid for configurations with Im w3 > 0.
inline Complex boundary_sigma1(const BoundaryPoint& b)
{
    const double t = b.t();
    const Complex num{3.0, detail::t_plus_root(t, b.root())};
    return num / (3.0 * Complex{1.0, t});
}

inline Complex boundary_sigma1(double t, const ToleranceConfig& tol = {})
{
    return boundary_sigma1(BoundaryPoint(t, tol));
}

/// a(t) = 2 (t^2 + 3 + t sqrt(t^2 - 3)) / (t^2 + 1), b(t) likewise with the
/// opposite sign; both stay below 4.
inline BoundaryModulus boundary_modulus_sq(double t, const ToleranceConfig& tol = {})
{
    const BoundaryPoint b(t, tol);
    const auto [plus, minus] = detail::boundary_numerators(t, b.root());
    const double den = t * t + 1.0;
    return {2.0 * plus / den, 2.0 * minus / den};
}

/// sigma2 - sigma1 on the boundary: (3 - t^2 + 2 i sqrt(t^2 - 3)) / (3 (-t^2 - 1)).
inline Complex boundary_sigma_diff(double t, const ToleranceConfig& tol = {})
{
    const BoundaryPoint b(t, tol);
    const double s = b.root();
    return Complex{3.0 - t * t, 2.0 * s} / (3.0 * (-t * t - 1.0));
}

inline double identity_residual(const RatioVector& r)
{
    return std::abs((1.0 - r.sigma1) * r.sigma2 - 1.0 / 3.0);
}

/// sigma1 = (z1 - w1) / (w2 - w1), sigma2 = (z2 - w2) / (w3 - w2).
inline RatioVector ratios_direct(const OrderedCubic& c)
{
    return {(c.z1 - c.w1) / (c.w2 - c.w1), (c.z2 - c.w2) / (c.w3 - c.w2),
            c.coincident ? RatioPath::Coincident : RatioPath::Direct};
}

/// True when sqrt(3 w3^2 + w2^2) = w3 sqrt(3 + w^2), i.e. f and g as written
/// give the ratios. Only meaningful off the boundary.
inline bool on_principal_sheet(const NormalizedCubic& n)
{
    return (n.w3n * principal_sqrt(3.0 + n.w * n.w)).real() > 0.0;
}

/// Closed-form ratios of an admissible normalized configuration. The
/// dispatch between interior and boundary formulas follows the report.
inline RatioVector ratios_via_w(const NormalizedCubic& n, const AdmissibilityReport& report, const ToleranceConfig& tol = {})
{
    if (!report.admissible)
        throw Error(ErrorKind::NotAdmissible, "configuration is not admissible");
    const Complex w = n.w;

    if (report.coincident) {
        const Complex s = (w + 3.0) / (3.0 * (w + 1.0));
        return {s, s, RatioPath::Coincident};
    }

    if (report.on_boundary) {
        const double t = w.imag();
        RatioVector r;
        if (n.w3n.imag() > 0.0) {
            r.sigma1 = boundary_sigma1(t, tol);
            r.path = RatioPath::Boundary;
        } else {
            r.sigma1 = std::conj(boundary_sigma1(-t, tol));
            r.path = RatioPath::BoundaryMirrored;
        }
        r.sigma2 = 1.0 / (3.0 * (1.0 - r.sigma1));
        return r;
    }

    const Complex root = principal_sqrt(3.0 + w * w);
    if ((n.w3n * root).real() > 0.0)
        return {detail::f_closed(w, root), detail::g_closed(w, root), RatioPath::Interior};
    return {(w + 3.0 + root) / (3.0 * (w + 1.0)), (-2.0 * w - root) / (3.0 * (1.0 - w)), RatioPath::InteriorAlternate};
}

/// The closed forms exactly as stated: f and g everywhere in the interior,
/// the boundary formula in t on the boundary, regardless of the sheet or the
/// sign of Im w3. Used to measure where that identification breaks down.
inline RatioVector ratios_principal_formulas(const NormalizedCubic& n, const AdmissibilityReport& report, const ToleranceConfig& tol = {})
{
    if (!report.admissible)
        throw Error(ErrorKind::NotAdmissible, "configuration is not admissible");
    const Complex w = n.w;
    if (report.on_boundary) {
        const Complex s1 = boundary_sigma1(w.imag(), tol);
        return {s1, 1.0 / (3.0 * (1.0 - s1)), RatioPath::Boundary};
    }
    const Complex root = principal_sqrt(3.0 + w * w);
    return {detail::f_closed(w, root), detail::g_closed(w, root),
            report.coincident ? RatioPath::Coincident : RatioPath::Interior};
}

}  // namespace ratiolab
