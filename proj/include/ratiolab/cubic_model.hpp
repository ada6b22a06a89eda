#pragma once

// Root ordering, translation normalization, critical points and
// admissibility of cubics p(z) = (z - w1)(z - w2)(z - w3) given by roots.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "ratiolab/numeric_kernel.hpp"

namespace ratiolab {

/// Roots sorted by real part together with the labeled critical points.
/// Either coincident (z1 == z2) or Re z1 < Re z2.
struct OrderedCubic {
    Complex w1, w2, w3;
    Complex z1, z2;
    bool coincident = false;

    std::array<Complex, 3> roots() const { return {w1, w2, w3}; }
};

/// Translated configuration with w1 + w3 = 0. The first root is -w3n.
struct NormalizedCubic {
    Complex w2n, w3n;
    Complex offset;
    Complex w;  // w2n / w3n
};

enum class Violation {
    DiscriminantOnCut,   // 3 w3^2 + w2^2 on the nonpositive real axis
    RootsCoincide,       // w2 = -w3 or w2 = w3
    W2NotLeftOfW3,       // Re w2 < Re w3 fails
    W3NotRightOfOrigin,  // 0 < Re w3 fails
    W1NotLeftOfW2,       // Re w1 < Re w2 fails (w1 = -w3)
};

inline const char* to_string(Violation v)
{
    switch (v) {
    case Violation::DiscriminantOnCut: return "discriminant_on_cut";
    case Violation::RootsCoincide: return "roots_coincide";
    case Violation::W2NotLeftOfW3: return "re_w2_not_less_than_re_w3";
    case Violation::W3NotRightOfOrigin: return "re_w3_not_positive";
    case Violation::W1NotLeftOfW2: return "re_w1_not_less_than_re_w2";
    }
    return "unknown";
}

struct AdmissibilityReport {
    bool admissible = false;
    bool on_boundary = false;  // w on the excluded set {Re w = 0, |Im w| >= sqrt 3}
    bool coincident = false;   // 3 + w^2 = 0: both critical points equal w2 / 3
    std::vector<Violation> reasons;
};

enum class Configuration { Generic, Collinear, Equilateral };

inline const char* to_string(Configuration c)
{
    switch (c) {
    case Configuration::Generic: return "generic";
    case Configuration::Collinear: return "collinear";
    case Configuration::Equilateral: return "equilateral";
    }
    return "unknown";
}

namespace detail {

// Rounding floor for a discriminant that should vanish: anything below this
// relative size is indistinguishable from zero in double precision.
inline constexpr double kDiscriminantFloor = 64.0 * std::numeric_limits<double>::epsilon();

struct CenteredDiscriminant {
    Complex centroid;
    Complex q;         // w1^2 + w2^2 + w3^2 - w1 w2 - w1 w3 - w2 w3
    double magnitude;  // bound on the rounding carried into q, in units of epsilon
};

// Evaluates the discriminant on roots shifted to their centroid, where it
// reduces to (3/2) * sum u_k^2. Each u_k inherits an absolute rounding error
// of order eps (|w_k| + |c|) from the inputs, which the magnitude accounts
// for: small triangles far from the origin cannot resolve a tiny q.
inline CenteredDiscriminant centered_discriminant(Complex w1, Complex w2, Complex w3)
{
    const Complex c = (w1 + w2 + w3) / 3.0;
    const Complex u1 = w1 - c, u2 = w2 - c, u3 = w3 - c;
    const Complex q = 1.5 * (u1 * u1 + u2 * u2 + u3 * u3);
    const double ac = std::abs(c);
    const double mag = 1.5 * (std::abs(u1) * (std::abs(u1) + std::abs(w1) + ac) +
                              std::abs(u2) * (std::abs(u2) + std::abs(w2) + ac) +
                              std::abs(u3) * (std::abs(u3) + std::abs(w3) + ac));
    return {c, q, mag};
}

}  // namespace detail

/// Both zeros of p'(z) from the radical formula
/// (w1 + w2 + w3 -/+ sqrt(w1^2 + w2^2 + w3^2 - w1 w3 - w1 w2 - w2 w3)) / 3,
/// minus branch first. Unlabeled; distinctness is not required.
inline std::pair<Complex, Complex> critical_points_direct(Complex w1, Complex w2, Complex w3)
{
    const auto disc = detail::centered_discriminant(w1, w2, w3);
    const Complex d = principal_sqrt(disc.q) / 3.0;
    return {disc.centroid - d, disc.centroid + d};
}

/// Sorts the roots by real part, computes and labels the critical points.
/// Throws when the ratios are undefined for these roots.
inline OrderedCubic order_roots(Complex r1, Complex r2, Complex r3, const ToleranceConfig& tol = {})
{
    require_finite(r1, "root");
    require_finite(r2, "root");
    require_finite(r3, "root");

    std::array<Complex, 3> w{r1, r2, r3};
    const double sep = std::min({std::abs(r1 - r2), std::abs(r1 - r3), std::abs(r2 - r3)});
    if (sep <= tol.eq_tol)
        throw Error(ErrorKind::RootsNotDistinct, "roots are not distinct");

    const double mag = std::max({std::abs(r1), std::abs(r2), std::abs(r3)});
    if (mag > 1e100 || sep < 1e-12 * mag)
        throw Error(ErrorKind::ScaleOutOfRange, "root magnitudes or separations out of supported range");

    std::sort(w.begin(), w.end(), [](Complex a, Complex b) { return a.real() < b.real(); });
    if (w[0].real() + tol.eq_tol >= w[1].real() || w[1].real() + tol.eq_tol >= w[2].real())
        throw Error(ErrorKind::RootRealPartsEqual, "roots have equal real parts");

    OrderedCubic c;
    c.w1 = w[0];
    c.w2 = w[1];
    c.w3 = w[2];

    const auto disc = detail::centered_discriminant(c.w1, c.w2, c.w3);
    const Complex d = principal_sqrt(disc.q) / 3.0;
    c.z1 = disc.centroid - d;
    c.z2 = disc.centroid + d;

    if (std::abs(disc.q) <= detail::kDiscriminantFloor * disc.magnitude || std::abs(c.z2 - c.z1) <= tol.eq_tol) {
        c.coincident = true;
        c.z1 = c.z2 = disc.centroid;
    } else if (c.z1.real() + tol.eq_tol >= c.z2.real()) {
        throw Error(ErrorKind::CriticalRealPartsEqual, "critical points have equal real parts");
    }
    return c;
}

inline NormalizedCubic normalize(const OrderedCubic& c)
{
    NormalizedCubic n;
    n.offset = (c.w1 + c.w3) * 0.5;
    n.w3n = (c.w3 - c.w1) * 0.5;
    n.w2n = c.w2 - n.offset;
    n.w = n.w2n / n.w3n;
    return n;
}

/// Inverse of normalize: the roots (w1, w2, w3) in original coordinates.
inline std::array<Complex, 3> denormalize(const NormalizedCubic& n)
{
    return {n.offset - n.w3n, n.offset + n.w2n, n.offset + n.w3n};
}

/// Checks whether (w2, w3) with w1 = -w3 is an admissible pair. The ordering
/// Re w1 < Re w2 is enforced in addition to the four listed conditions.
inline AdmissibilityReport assess_admissibility(Complex w2n, Complex w3n, const ToleranceConfig& tol = {})
{
    require_finite(w2n, "w2");
    require_finite(w3n, "w3");

    AdmissibilityReport r;
    if (!(w3n.real() > 0.0)) {
        r.reasons.push_back(Violation::W3NotRightOfOrigin);
        if (w3n == Complex{})
            return r;
    }
    if (!(w2n.real() + tol.eq_tol < w3n.real()))
        r.reasons.push_back(Violation::W2NotLeftOfW3);
    if (!(-w3n.real() + tol.eq_tol < w2n.real()))
        r.reasons.push_back(Violation::W1NotLeftOfW2);
    if (std::abs(w2n + w3n) <= tol.eq_tol || std::abs(w2n - w3n) <= tol.eq_tol)
        r.reasons.push_back(Violation::RootsCoincide);

    const Complex w = w2n / w3n;
    const Complex shifted = 3.0 + w * w;
    if (std::abs(shifted) <= detail::kDiscriminantFloor * (3.0 + std::norm(w))) {
        r.coincident = true;
    } else {
        // 3 w3^2 + w2^2 = w3^2 (3 + w^2); test its direction at unit scale.
        const Complex phase = w3n / std::abs(w3n);
        if (in_gamma(shifted * phase * phase, tol))
            r.reasons.push_back(Violation::DiscriminantOnCut);
        r.on_boundary = std::abs(w.real()) <= tol.boundary_tol && std::abs(w.imag()) >= kSqrt3 - tol.boundary_tol;
    }
    r.admissible = r.reasons.empty();
    return r;
}

inline Configuration classify_configuration(const OrderedCubic& c, const ToleranceConfig& tol = {})
{
    const double a = std::abs(c.w2 - c.w1);
    const double b = std::abs(c.w3 - c.w2);
    const double d = std::abs(c.w3 - c.w1);
    const double scale = std::max({a, b, d});
    const double shortest = std::min({a, b, d});
    if (scale - shortest <= tol.eq_tol * scale)
        return Configuration::Equilateral;
    const double area = std::abs(((c.w2 - c.w1) * std::conj(c.w3 - c.w1)).imag()) * 0.5;
    if (area <= tol.eq_tol * scale * scale)
        return Configuration::Collinear;
    return Configuration::Generic;
}

}  // namespace ratiolab
