#pragma once

// Complex scalar utilities shared by every ratiolab module: the strict
// principal-branch square root, cut membership, and the tolerance policy.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace ratiolab {

using Complex = std::complex<double>;

enum class ErrorKind {
    NonFinite,
    BadTolerance,
    RootsNotDistinct,
    RootRealPartsEqual,
    CriticalRealPartsEqual,
    ScaleOutOfRange,
    OutsideDomain,
    BadParameter,
    NotAdmissible,
    BadRange,
    ConstraintViolated,
    NotHyperbolic,
    DegenerateTriangle,
    IoFailure,
};

inline const char* to_string(ErrorKind k)
{
    switch (k) {
    case ErrorKind::NonFinite: return "non_finite";
    case ErrorKind::BadTolerance: return "bad_tolerance";
    case ErrorKind::RootsNotDistinct: return "roots_not_distinct";
    case ErrorKind::RootRealPartsEqual: return "root_real_parts_equal";
    case ErrorKind::CriticalRealPartsEqual: return "critical_real_parts_equal";
    case ErrorKind::ScaleOutOfRange: return "scale_out_of_range";
    case ErrorKind::OutsideDomain: return "outside_domain";
    case ErrorKind::BadParameter: return "bad_parameter";
    case ErrorKind::NotAdmissible: return "not_admissible";
    case ErrorKind::BadRange: return "bad_range";
    case ErrorKind::ConstraintViolated: return "constraint_violated";
    case ErrorKind::NotHyperbolic: return "not_hyperbolic";
    case ErrorKind::DegenerateTriangle: return "degenerate_triangle";
    case ErrorKind::IoFailure: return "io_failure";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Tolerance policy. eq_tol is the absolute equality band used for ordering
/// and distinctness, boundary_tol the distance-to-cut band, identity_tol the
/// residual bound for the ratio identity.
struct ToleranceConfig {
    double eq_tol = 1e-9;
    double boundary_tol = 1e-9;
    double identity_tol = 1e-10;

    void validate() const
    {
        if (!(eq_tol > 0) || !(boundary_tol > 0) || !(identity_tol > 0))
            throw Error(ErrorKind::BadTolerance, "tolerances must be strictly positive");
        if (eq_tol > boundary_tol)
            throw Error(ErrorKind::BadTolerance, "eq_tol must not exceed boundary_tol");
    }
};

inline bool is_finite(Complex z)
{
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

inline void require_finite(Complex z, const char* what)
{
    if (!is_finite(z))
        throw Error(ErrorKind::NonFinite, std::string(what) + " is not finite");
}

/// Principal square root: Re r >= 0, and on the nonpositive real axis the
/// value is taken as the limit from the upper half-plane, so sqrt(-4) = 2i
/// regardless of the sign of the zero imaginary part.
inline Complex principal_sqrt(Complex z)
{
    const double x = z.real();
    const double y = z.imag();
    if (y == 0.0) {
        if (x >= 0.0)
            return {std::sqrt(x), 0.0};
        return {0.0, std::sqrt(-x)};
    }
    // t = sqrt((|x| + |z|) / 2) without intermediate overflow.
    const double t = std::sqrt((std::abs(x) + std::hypot(x, y)) * 0.5);
    if (x >= 0.0)
        return {t, y / (2.0 * t)};
    return {std::abs(y) / (2.0 * t), std::copysign(t, y)};
}

/// Membership in the nonpositive real axis, with boundary_tol as the band.
inline bool in_gamma(Complex z, const ToleranceConfig& tol)
{
    return std::abs(z.imag()) <= tol.boundary_tol && z.real() <= tol.boundary_tol;
}

inline bool approx_eq(Complex a, Complex b, double tol)
{
    return std::abs(a - b) <= tol;
}

inline constexpr double kSqrt3 = 1.7320508075688772935274463415058723669428;

}  // namespace ratiolab
