#pragma once

// Executable checks of the bounds, sharpness families, equivalences and
// auxiliary lemmas for complex ratio vectors of cubics. Every check yields a
// TheoremReport; a failed report always carries a witness record.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ratiolab/cubic_model.hpp"
#include "ratiolab/json_writer.hpp"
#include "ratiolab/numeric_kernel.hpp"
#include "ratiolab/ratio_engine.hpp"
#include "ratiolab/sample_record.hpp"
#include "ratiolab/sampling.hpp"

namespace ratiolab {

enum class ClaimId { L1A, L1B, L2A, L2B, T1A, T1B, T1C, T1D, T1E, T2A, T2B, T2C, T2D, T2E, T3, T4, T5, HYP };

inline const char* to_string(ClaimId c)
{
    switch (c) {
    case ClaimId::L1A: return "L1A";
    case ClaimId::L1B: return "L1B";
    case ClaimId::L2A: return "L2A";
    case ClaimId::L2B: return "L2B";
    case ClaimId::T1A: return "T1A";
    case ClaimId::T1B: return "T1B";
    case ClaimId::T1C: return "T1C";
    case ClaimId::T1D: return "T1D";
    case ClaimId::T1E: return "T1E";
    case ClaimId::T2A: return "T2A";
    case ClaimId::T2B: return "T2B";
    case ClaimId::T2C: return "T2C";
    case ClaimId::T2D: return "T2D";
    case ClaimId::T2E: return "T2E";
    case ClaimId::T3: return "T3";
    case ClaimId::T4: return "T4";
    case ClaimId::T5: return "T5";
    case ClaimId::HYP: return "HYP";
    }
    return "unknown";
}

struct TheoremReport {
    ClaimId claim = ClaimId::T1A;
    bool passed = true;
    std::optional<SampleRecord> witness;
    double margin = 0.0;  // signed distance to the bound; negative when violated
    std::size_t samples = 0;
    std::string detail;
};

// ---------------------------------------------------------------------------
// Bounds on a single ratio vector
// ---------------------------------------------------------------------------

/// Slack for the closed (non-strict) bounds and for Re sigma2 >= Re sigma1.
inline constexpr double kBoundSlack = 1e-12;

inline constexpr std::array<ClaimId, 7> kBoundClaims{ClaimId::T1A, ClaimId::T1B, ClaimId::T1E, ClaimId::T2A,
                                                     ClaimId::T2B, ClaimId::T2E, ClaimId::T3};

/// Signed margins in kBoundClaims order.
inline std::array<double, 7> bound_margins(const RatioVector& r)
{
    const Complex s1 = r.sigma1, s2 = r.sigma2;
    return {
        std::min(s1.real(), 2.0 / 3.0 - s1.real()),
        1.0 / 3.0 - std::abs(s1.imag()),
        2.0 / 3.0 - std::abs(s1),
        std::min(s2.real() - 1.0 / 3.0, 1.0 - s2.real()),
        1.0 / 3.0 - std::abs(s2.imag()),
        1.0 - std::abs(s2),
        s2.real() - s1.real(),
    };
}

inline bool margin_passes(ClaimId claim, double margin)
{
    // Re bounds are strict inequalities; the others are closed.
    if (claim == ClaimId::T1A || claim == ClaimId::T2A)
        return margin > 0.0;
    return margin >= -kBoundSlack;
}

inline bool bounds_hold(const RatioVector& r)
{
    const auto m = bound_margins(r);
    for (std::size_t i = 0; i < kBoundClaims.size(); ++i)
        if (!margin_passes(kBoundClaims[i], m[i]))
            return false;
    return true;
}

inline SampleRecord make_record(const OrderedCubic& c, const RatioVector& r, const ToleranceConfig& tol = {})
{
    SampleRecord rec;
    rec.w = normalize(c).w;
    rec.sigma1 = r.sigma1;
    rec.sigma2 = r.sigma2;
    rec.path = r.path;
    rec.classification = classify_configuration(c, tol);
    rec.reachable = true;
    rec.bounds_ok = bounds_hold(r);
    rec.roots = c.roots();
    return rec;
}

/// One report per bound claim (T1A, T1B, T1E, T2A, T2B, T2E, T3).
inline std::vector<TheoremReport> check_bounds(const RatioVector& r, const std::optional<SampleRecord>& context = {})
{
    SampleRecord witness = context.value_or(SampleRecord{});
    witness.sigma1 = r.sigma1;
    witness.sigma2 = r.sigma2;
    witness.path = r.path;
    witness.bounds_ok = bounds_hold(r);

    const auto m = bound_margins(r);
    std::vector<TheoremReport> out;
    for (std::size_t i = 0; i < kBoundClaims.size(); ++i) {
        TheoremReport rep;
        rep.claim = kBoundClaims[i];
        rep.margin = m[i];
        rep.passed = margin_passes(rep.claim, m[i]);
        rep.samples = 1;
        if (!rep.passed)
            rep.witness = witness;
        out.push_back(std::move(rep));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Lemma scans
// ---------------------------------------------------------------------------

/// Positive half of a scan grid: `steps` evenly spaced points on
/// [t_min, t_max], then `tail_steps` log-spaced points out to tail_max.
struct ScanRange {
    double t_min = kSqrt3;
    double t_max = 1e3;
    std::size_t steps = 1'000'000;
    double tail_max = 1e9;
    std::size_t tail_steps = 1000;
};

namespace detail {

inline void validate_scan(const ScanRange& r)
{
    if (!(r.t_min >= kSqrt3 - 1e-9) || !(r.t_max > r.t_min) || r.steps < 1000 || !std::isfinite(r.t_max))
        throw Error(ErrorKind::BadRange, "scan requires sqrt(3) <= t_min < t_max and at least 1000 steps");
    if (r.tail_steps > 0 && !(r.tail_max > r.t_max))
        throw Error(ErrorKind::BadRange, "log tail must extend beyond t_max");
}

inline std::vector<double> positive_grid(const ScanRange& r)
{
    std::vector<double> g;
    g.reserve(r.steps + r.tail_steps);
    for (std::size_t k = 0; k < r.steps; ++k)
        g.push_back(r.t_min + (r.t_max - r.t_min) * static_cast<double>(k) / static_cast<double>(r.steps - 1));
    const double l0 = std::log(r.t_max), l1 = std::log(r.tail_max);
    for (std::size_t k = 1; k <= r.tail_steps; ++k)
        g.push_back(std::exp(l0 + (l1 - l0) * static_cast<double>(k) / static_cast<double>(r.tail_steps)));
    return g;
}

inline double root_t2m3(double t)
{
    return std::sqrt(std::max(0.0, (std::abs(t) - kSqrt3) * (std::abs(t) + kSqrt3)));
}

inline SampleRecord boundary_witness(double t)
{
    SampleRecord rec;
    rec.w = Complex{0.0, t};
    rec.path = RatioPath::Boundary;
    rec.bounds_ok = false;
    return rec;
}

// Bisection for a sign change of f on [a, b].
inline double bisect(const std::function<double(double)>& f, double a, double b)
{
    double fa = f(a);
    for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if (fm == 0.0)
            return m;
        if ((fm < 0) == (fa < 0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

// Half-lines t >= t_min and t <= -t_min, each in ascending order of t.
inline std::array<std::vector<double>, 2> signed_grids(const ScanRange& r)
{
    const auto pos = positive_grid(r);
    std::vector<double> neg(pos.rbegin(), pos.rend());
    for (auto& t : neg)
        t = -t;
    return {std::move(neg), pos};
}

}  // namespace detail

/// Lemma 1: 4t sqrt(t^2-3) -+ (5t^2 - 3) has no real zero. The squared
/// identity 16t^2(t^2-3) - (5t^2-3)^2 = -9(t^2+1)^2 is checked on the grid.
inline std::array<TheoremReport, 2> scan_lemma1(const ScanRange& range = {})
{
    detail::validate_scan(range);
    const auto grids = detail::signed_grids(range);

    std::array<TheoremReport, 2> out;
    for (int branch = 0; branch < 2; ++branch) {
        const double sign = branch == 0 ? -1.0 : 1.0;
        auto expr = [sign](double t) { return 4.0 * t * detail::root_t2m3(t) + sign * (5.0 * t * t - 3.0); };

        double min_abs = std::numeric_limits<double>::infinity(), at = 0.0;
        double max_rel = 0.0;
        std::size_t sign_changes = 0, count = 0;
        std::optional<double> bad_t;
        for (const auto& grid : grids) {
            double prev = std::numeric_limits<double>::quiet_NaN();
            for (double t : grid) {
                const double v = expr(t);
                ++count;
                if (std::abs(v) < min_abs) {
                    min_abs = std::abs(v);
                    at = t;
                }
                if (v == 0.0 || (!std::isnan(prev) && (v < 0) != (prev < 0))) {
                    ++sign_changes;
                    if (!bad_t)
                        bad_t = t;
                }
                prev = v;

                const double t2 = t * t;
                const double a = 16.0 * t2 * (t2 - 3.0), b = (5.0 * t2 - 3.0) * (5.0 * t2 - 3.0);
                const double rhs = -9.0 * (t2 + 1.0) * (t2 + 1.0);
                const double rel = std::abs((a - b) - rhs) / (std::abs(a) + std::abs(b));
                if (rel > max_rel) {
                    max_rel = rel;
                    if (rel > 1e-6 && !bad_t)
                        bad_t = t;
                }
            }
        }

        TheoremReport& rep = out[branch];
        rep.claim = branch == 0 ? ClaimId::L1A : ClaimId::L1B;
        rep.samples = count;
        rep.margin = min_abs;
        rep.passed = sign_changes == 0 && min_abs > 0.0 && max_rel <= 1e-6;
        rep.detail = "min |lhs| = " + format_double(min_abs) + " at t = " + format_double(at) +
                     "; sign changes = " + std::to_string(sign_changes) +
                     "; squared identity max rel err = " + format_double(max_rel);
        if (!rep.passed)
            rep.witness = detail::boundary_witness(bad_t.value_or(at));
    }
    return out;
}

inline std::array<TheoremReport, 2> scan_lemma1(double t_min, double t_max, std::size_t steps)
{
    return scan_lemma1(ScanRange{t_min, t_max, steps, 0.0, 0});
}

/// Lemma 2: t^3 - 7t -+ 2(t^2-1) sqrt(t^2-3) has exactly one real zero,
/// at t = -2 (minus sign) and t = 2 (plus sign). Also checks the squared
/// factorization (t^3-7t)^2 - 4(t^2-1)^2(t^2-3) = -3(t-2)(t+2)(t^2+1)^2.
inline std::array<TheoremReport, 2> scan_lemma2(const ScanRange& range = {})
{
    detail::validate_scan(range);
    const auto grids = detail::signed_grids(range);

    std::array<TheoremReport, 2> out;
    for (int branch = 0; branch < 2; ++branch) {
        const double sign = branch == 0 ? -1.0 : 1.0;
        const double expected = branch == 0 ? -2.0 : 2.0;
        std::function<double(double)> expr = [sign](double t) {
            return t * t * t - 7.0 * t + sign * 2.0 * (t * t - 1.0) * detail::root_t2m3(t);
        };

        std::vector<double> roots;
        double max_rel = 0.0, rel_at = 0.0;
        std::size_t count = 0;
        for (const auto& grid : grids) {
            double prev_t = 0.0, prev_v = std::numeric_limits<double>::quiet_NaN();
            for (double t : grid) {
                const double v = expr(t);
                ++count;
                if (v == 0.0)
                    roots.push_back(t);
                else if (!std::isnan(prev_v) && prev_v != 0.0 && (v < 0) != (prev_v < 0))
                    roots.push_back(detail::bisect(expr, prev_t, t));
                prev_t = t;
                prev_v = v;

                const double t2 = t * t;
                const double a = (t * t2 - 7.0 * t) * (t * t2 - 7.0 * t);
                const double b = 4.0 * (t2 - 1.0) * (t2 - 1.0) * (t2 - 3.0);
                const double rhs = -3.0 * (t - 2.0) * (t + 2.0) * (t2 + 1.0) * (t2 + 1.0);
                const double rel = std::abs((a - b) - rhs) / (std::abs(a) + std::abs(b));
                if (rel > max_rel) {
                    max_rel = rel;
                    rel_at = t;
                }
            }
        }

        TheoremReport& rep = out[branch];
        rep.claim = branch == 0 ? ClaimId::L2A : ClaimId::L2B;
        rep.samples = count;
        const double err = roots.size() == 1 ? std::abs(roots[0] - expected) : std::numeric_limits<double>::infinity();
        rep.margin = 1e-9 - err;
        rep.passed = roots.size() == 1 && err <= 1e-9 && max_rel <= 1e-6;
        std::string located;
        for (double r : roots)
            located += (located.empty() ? "" : ", ") + format_double(r);
        rep.detail = "sign-change roots: [" + located + "]; expected " + format_double(expected) +
                     "; factorization max rel err = " + format_double(max_rel);
        if (!rep.passed) {
            const double wt = roots.empty() ? (max_rel > 1e-6 ? rel_at : expected)
                                            : (roots.size() == 1 ? roots[0] : roots[1]);
            rep.witness = detail::boundary_witness(wt);
        }
    }
    return out;
}

inline std::array<TheoremReport, 2> scan_lemma2(double t_min, double t_max, std::size_t steps)
{
    return scan_lemma2(ScanRange{t_min, t_max, steps, 0.0, 0});
}

// ---------------------------------------------------------------------------
// Extremal families
// ---------------------------------------------------------------------------

/// Roots with w = i t whose ratio sigma1 = u1(t) + i v1(t). For t > sqrt 3:
/// (-2t - i, -t + 2t^2 i, 2t + i); for t < -sqrt 3: (2t - i, -t - 2t^2 i, -2t + i).
/// Both keep Im w3 > 0, the side on which the boundary formula applies.
inline std::array<Complex, 3> sharpness_family_roots(double t)
{
    if (t > 0)
        return {Complex{-2.0 * t, -1.0}, Complex{-t, 2.0 * t * t}, Complex{2.0 * t, 1.0}};
    return {Complex{2.0 * t, -1.0}, Complex{-t, -2.0 * t * t}, Complex{-2.0 * t, 1.0}};
}

struct ProbeResult {
    OrderedCubic cubic;
    RatioVector ratios;
};

inline ProbeResult sharpness_probe_re(double t, const ToleranceConfig& tol = {})
{
    if (!std::isfinite(t) || !(std::abs(t) > kSqrt3))
        throw Error(ErrorKind::BadParameter, "sharpness family requires |t| > sqrt(3)");
    const auto r = sharpness_family_roots(t);
    const OrderedCubic c = order_roots(r[0], r[1], r[2], tol);
    return {c, ratios_direct(c)};
}

enum class ImSign { Upper, Lower };  // Im sigma1 = +1/3 or -1/3

/// Roots C + i z0, C - i z0, C + 2 z0 (a translate of +-i z0, 2 z0).
inline std::array<Complex, 3> extremal_family_roots(Complex z0, Complex shift)
{
    const Complex i{0.0, 1.0};
    return {shift + i * z0, shift - i * z0, shift + 2.0 * z0};
}

inline bool extremal_constraint_holds(Complex z0, ImSign sign)
{
    const double x = z0.real(), y = z0.imag();
    if (sign == ImSign::Upper)
        return y < 0.0 && 0.0 < x && x < -0.5 * y;
    return y > 0.0 && 0.0 < x && x < 0.5 * y;
}

inline ProbeResult extremal_family_im(Complex z0, Complex shift, ImSign sign, const ToleranceConfig& tol = {})
{
    require_finite(z0, "z0");
    require_finite(shift, "C");
    if (!extremal_constraint_holds(z0, sign))
        throw Error(ErrorKind::ConstraintViolated, "z0 lies outside the half-strip of the extremal family");
    const auto r = extremal_family_roots(z0, shift);
    const OrderedCubic c = order_roots(r[0], r[1], r[2], tol);
    return {c, ratios_direct(c)};
}

// ---------------------------------------------------------------------------
// Equivalences and the real-root case
// ---------------------------------------------------------------------------

/// sigma1 = sigma2 exactly on equilateral configurations; there the
/// normalized w is +-i sqrt 3.
inline TheoremReport check_equivalence_t4(const OrderedCubic& c, const ToleranceConfig& tol = {})
{
    const RatioVector r = ratios_direct(c);
    const double gap = std::abs(r.sigma1 - r.sigma2);
    const bool equal = gap <= tol.identity_tol;
    const bool equilateral = classify_configuration(c, tol) == Configuration::Equilateral;

    TheoremReport rep;
    rep.claim = ClaimId::T4;
    rep.samples = 1;
    rep.margin = gap;
    rep.passed = equal == equilateral;
    if (equilateral) {
        const Complex w = normalize(c).w;
        const double witness_gap = std::min(std::abs(w - Complex{0.0, kSqrt3}), std::abs(w + Complex{0.0, kSqrt3}));
        if (witness_gap > 1e-6)
            rep.passed = false;
        rep.detail = "equilateral; |w -+ i sqrt3| = " + format_double(witness_gap);
    }
    if (!rep.passed)
        rep.witness = make_record(c, r, tol);
    return rep;
}

/// A ratio is real exactly on collinear configurations.
inline TheoremReport check_equivalence_t5(const OrderedCubic& c, const ToleranceConfig& tol, double real_tol)
{
    const RatioVector r = ratios_direct(c);
    const double im = std::min(std::abs(r.sigma1.imag()), std::abs(r.sigma2.imag()));
    const bool real = im <= real_tol;
    const bool collinear = classify_configuration(c, tol) == Configuration::Collinear;

    TheoremReport rep;
    rep.claim = ClaimId::T5;
    rep.samples = 1;
    rep.margin = im;
    rep.passed = real == collinear;
    if (!rep.passed)
        rep.witness = make_record(c, r, tol);
    return rep;
}

inline TheoremReport check_equivalence_t5(const OrderedCubic& c, const ToleranceConfig& tol = {})
{
    return check_equivalence_t5(c, tol, tol.eq_tol);
}

/// On the boundary a real sigma1 would need -2t + sqrt(t^2 - 3) = 0; scans
/// the grid for the minimum of its magnitude.
inline TheoremReport scan_t5_boundary(const ScanRange& range = {})
{
    detail::validate_scan(range);
    double min_abs = std::numeric_limits<double>::infinity(), at = 0.0;
    std::size_t count = 0;
    for (const auto& grid : detail::signed_grids(range)) {
        for (double t : grid) {
            const double v = std::abs(-2.0 * t + detail::root_t2m3(t));
            ++count;
            if (v < min_abs) {
                min_abs = v;
                at = t;
            }
        }
    }
    TheoremReport rep;
    rep.claim = ClaimId::T5;
    rep.samples = count;
    rep.margin = min_abs;
    rep.passed = min_abs > 0.0;
    rep.detail = "min |-2t + sqrt(t^2-3)| = " + format_double(min_abs) + " at t = " + format_double(at);
    if (!rep.passed)
        rep.witness = detail::boundary_witness(at);
    return rep;
}

/// Real roots: 1/3 < sigma1 < 1/2 < sigma2 < 2/3.
inline TheoremReport check_hyperbolic(const OrderedCubic& c, const ToleranceConfig& tol = {})
{
    for (Complex w : c.roots())
        if (std::abs(w.imag()) > tol.eq_tol)
            throw Error(ErrorKind::NotHyperbolic, "roots are not all real");
    const RatioVector r = ratios_direct(c);
    const double s1 = r.sigma1.real(), s2 = r.sigma2.real();

    TheoremReport rep;
    rep.claim = ClaimId::HYP;
    rep.samples = 1;
    rep.margin = std::min({s1 - 1.0 / 3.0, 0.5 - s1, s2 - 0.5, 2.0 / 3.0 - s2});
    const bool real = std::abs(r.sigma1.imag()) <= tol.eq_tol && std::abs(r.sigma2.imag()) <= tol.eq_tol;
    rep.passed = real && rep.margin > 0.0;
    if (!rep.passed)
        rep.witness = make_record(c, r, tol);
    return rep;
}

// ---------------------------------------------------------------------------
// Monte Carlo over admissible configurations
// ---------------------------------------------------------------------------

struct ClaimTally {
    double min_margin = std::numeric_limits<double>::infinity();
    std::size_t failures = 0;
    std::optional<SampleRecord> worst;
};

struct MonteCarloSummary {
    std::size_t samples = 0;
    std::size_t boundary_samples = 0;
    std::array<std::size_t, 8> path_counts{};  // closed-form path, indexed by RatioPath

    double max_identity_residual = 0.0;  // direct ratios
    double max_identity_residual_closed = 0.0;
    std::optional<SampleRecord> identity_witness;

    double max_oracle_diff = 0.0;  // ratios_via_w against ratios_direct
    std::optional<SampleRecord> oracle_witness;

    // f, g and the boundary formula taken literally, against ratios_direct.
    double stated_tol = 1e-9;
    double max_stated_diff = 0.0;
    std::size_t stated_mismatches = 0;
    std::size_t stated_mismatches_boundary = 0;
    std::optional<SampleRecord> stated_witness;

    std::array<ClaimTally, 7> bounds;            // all samples, direct ratios
    std::array<ClaimTally, 7> bounds_principal;  // samples on which f, g as written apply

    std::size_t im_extremal_hits = 0;
    std::size_t im_extremal_off_family = 0;
    std::optional<SampleRecord> im_extremal_witness;

    const ClaimTally& tally(ClaimId c) const { return bounds[bound_index(c)]; }
    const ClaimTally& tally_principal(ClaimId c) const { return bounds_principal[bound_index(c)]; }

    static std::size_t bound_index(ClaimId c)
    {
        for (std::size_t i = 0; i < kBoundClaims.size(); ++i)
            if (kBoundClaims[i] == c)
                return i;
        throw Error(ErrorKind::BadParameter, "not a bound claim");
    }
};

namespace detail {

inline double ratio_distance(const RatioVector& a, const RatioVector& b)
{
    return std::max(std::abs(a.sigma1 - b.sigma1), std::abs(a.sigma2 - b.sigma2));
}

inline void tally_bounds(std::array<ClaimTally, 7>& tallies, const std::array<double, 7>& m, const SampleRecord& rec)
{
    for (std::size_t i = 0; i < kBoundClaims.size(); ++i) {
        ClaimTally& t = tallies[i];
        if (!margin_passes(kBoundClaims[i], m[i]))
            ++t.failures;
        if (m[i] < t.min_margin) {
            t.min_margin = m[i];
            t.worst = rec;
        }
    }
}

}  // namespace detail

inline MonteCarloSummary run_monte_carlo(std::size_t samples, std::uint64_t seed, const ToleranceConfig& tol = {},
                                         const SamplerOptions& opt = {})
{
    MonteCarloSummary s;
    s.samples = samples;
    for (std::size_t k = 0; k < samples; ++k) {
        const AdmissibleSample a = draw_admissible(seed, k, tol, opt);
        const RatioVector direct = ratios_direct(a.cubic);
        const RatioVector closed = ratios_via_w(a.normalized, a.report, tol);
        const RatioVector stated = ratios_principal_formulas(a.normalized, a.report, tol);
        SampleRecord rec = make_record(a.cubic, direct, tol);
        rec.path = closed.path;

        s.boundary_samples += a.boundary_family ? 1 : 0;
        ++s.path_counts[static_cast<std::size_t>(closed.path)];

        const double res = identity_residual(direct);
        if (res > s.max_identity_residual) {
            s.max_identity_residual = res;
            s.identity_witness = rec;
        }
        s.max_identity_residual_closed = std::max(s.max_identity_residual_closed, identity_residual(closed));

        const double diff = detail::ratio_distance(closed, direct);
        if (diff > s.max_oracle_diff) {
            s.max_oracle_diff = diff;
            s.oracle_witness = rec;
        }

        const double sdiff = detail::ratio_distance(stated, direct);
        if (sdiff > s.stated_tol) {
            ++s.stated_mismatches;
            s.stated_mismatches_boundary += a.boundary_family ? 1 : 0;
        }
        if (sdiff > s.max_stated_diff) {
            s.max_stated_diff = sdiff;
            s.stated_witness = rec;
        }

        const auto m = bound_margins(direct);
        detail::tally_bounds(s.bounds, m, rec);
        if (closed.path != RatioPath::InteriorAlternate && closed.path != RatioPath::BoundaryMirrored)
            detail::tally_bounds(s.bounds_principal, m, rec);

        if (std::abs(std::abs(direct.sigma1.imag()) - 1.0 / 3.0) <= 1e-9) {
            ++s.im_extremal_hits;
            const Complex expected{0.0, direct.sigma1.imag() > 0 ? -2.0 : 2.0};
            if (std::abs(a.normalized.w - expected) > 1e-6) {
                ++s.im_extremal_off_family;
                s.im_extremal_witness = rec;
            }
        }
    }
    return s;
}

// ---------------------------------------------------------------------------
// Suite runner
// ---------------------------------------------------------------------------

enum class Selector { All, L1, L2, T1, T2, T3, T4, T5, HYP };

inline std::optional<Selector> parse_selector(std::string_view s)
{
    if (s == "all") return Selector::All;
    if (s == "L1") return Selector::L1;
    if (s == "L2") return Selector::L2;
    if (s == "T1") return Selector::T1;
    if (s == "T2") return Selector::T2;
    if (s == "T3") return Selector::T3;
    if (s == "T4") return Selector::T4;
    if (s == "T5") return Selector::T5;
    if (s == "HYP") return Selector::HYP;
    return std::nullopt;
}

struct SuiteOptions {
    std::size_t samples = 10'000;              // Monte Carlo admissible samples
    std::size_t equivalence_samples = 10'000;  // per family for T4, T5, HYP
    std::uint64_t seed = 20'240'607;
    ToleranceConfig tol{};
    ScanRange scan{};
};

namespace detail {

inline TheoremReport bound_report(ClaimId claim, const MonteCarloSummary& mc)
{
    const ClaimTally& t = mc.tally(claim);
    const ClaimTally& p = mc.tally_principal(claim);
    TheoremReport rep;
    rep.claim = claim;
    rep.samples = mc.samples;
    rep.margin = t.min_margin;
    rep.passed = t.failures == 0;
    rep.detail = "violations = " + std::to_string(t.failures) + " of " + std::to_string(mc.samples) +
                 "; violations where f, g apply as written = " + std::to_string(p.failures) +
                 " (min margin " + format_double(p.min_margin) + ")";
    if (!rep.passed)
        rep.witness = t.worst;
    return rep;
}

inline void append(TheoremReport& rep, bool ok, const std::string& note, const std::optional<SampleRecord>& w)
{
    rep.detail += (rep.detail.empty() ? "" : "; ") + note;
    if (!ok) {
        rep.passed = false;
        if (!rep.witness)
            rep.witness = w;
    }
}

// Re sigma1 and Re sigma2 along the sharpness family at t = +-10, ..., +-1e4.
inline void add_sharpness(TheoremReport& t1a, TheoremReport& t2a, const ToleranceConfig& tol)
{
    std::vector<double> up1, dn1, up2, dn2;
    std::optional<SampleRecord> last_pos, last_neg;
    for (double t : {1e1, 1e2, 1e3, 1e4}) {
        const auto pos = sharpness_probe_re(t, tol);
        const auto neg = sharpness_probe_re(-t, tol);
        up1.push_back(pos.ratios.sigma1.real());
        dn1.push_back(neg.ratios.sigma1.real());
        up2.push_back(pos.ratios.sigma2.real());
        dn2.push_back(neg.ratios.sigma2.real());
        last_pos = make_record(pos.cubic, pos.ratios, tol);
        last_neg = make_record(neg.cubic, neg.ratios, tol);
    }
    const bool up1_ok = std::is_sorted(up1.begin(), up1.end()) && up1[2] > 0.666 && up1.back() < 2.0 / 3.0;
    const bool dn1_ok = std::is_sorted(dn1.rbegin(), dn1.rend()) && dn1[2] < 1e-4 && dn1.back() > 0.0;
    append(t1a, up1_ok, "sup Re sigma1 at t=1e3: " + format_double(up1[2]), last_pos);
    append(t1a, dn1_ok, "inf Re sigma1 at t=-1e3: " + format_double(dn1[2]), last_neg);

    const bool up2_ok = std::is_sorted(up2.begin(), up2.end()) && up2[2] > 0.999 && up2.back() < 1.0;
    const bool dn2_ok = std::is_sorted(dn2.rbegin(), dn2.rend()) && dn2[2] < 1.0 / 3.0 + 1e-4 && dn2.back() > 1.0 / 3.0;
    append(t2a, up2_ok, "sup Re sigma2 at t=1e3: " + format_double(up2[2]), last_pos);
    append(t2a, dn2_ok, "inf Re sigma2 at t=-1e3: " + format_double(dn2[2]), last_neg);
}

// Draws z0 in the half-strip of the requested sign.
inline Complex draw_strip_point(Substream& rng, ImSign sign)
{
    const double depth = rng.uniform(0.1, 10.0);
    const double x = rng.uniform(0.02, 0.98) * 0.5 * depth;
    return {x, sign == ImSign::Upper ? -depth : depth};
}

// Checks Im sigma_k = +-1/3 on the root family +-i z0 + C, 2 z0 + C.
inline TheoremReport im_family_report(ClaimId claim, ImSign sign, bool second_ratio, const SuiteOptions& opt)
{
    TheoremReport rep;
    rep.claim = claim;
    const double target = sign == ImSign::Upper ? 1.0 / 3.0 : -1.0 / 3.0;
    const std::size_t n = std::max<std::size_t>(1, opt.equivalence_samples / 10);
    double worst = 0.0;
    std::optional<SampleRecord> worst_rec;
    Substream rng(opt.seed ^ 0xc3a5c85c97cb3127ULL, static_cast<std::uint64_t>(claim));
    for (std::size_t k = 0; k < n; ++k) {
        const Complex z0 = k == 0 ? Complex{1.0, sign == ImSign::Upper ? -4.0 : 4.0} : draw_strip_point(rng, sign);
        const Complex shift = k == 0 ? Complex{} : Complex{rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0)};
        const auto probe = extremal_family_im(z0, shift, sign, opt.tol);
        const Complex s = second_ratio ? probe.ratios.sigma2 : probe.ratios.sigma1;
        const double err = std::abs(s.imag() - target);
        if (err >= worst) {
            worst = err;
            worst_rec = make_record(probe.cubic, probe.ratios, opt.tol);
        }
    }
    rep.samples = n;
    rep.margin = 1e-12 - worst;
    rep.passed = worst <= 1e-12;
    const std::string which = second_ratio ? "sigma2" : "sigma1";
    rep.detail = "family +-i z0 + C, 2 z0 + C: max |Im " + which + " - (" + format_double(target) +
                 ")| = " + format_double(worst);
    if (worst_rec && worst_rec->sigma2 && second_ratio)
        rep.detail += " (Im sigma2 on family = " + format_double(worst_rec->sigma2->imag()) + ")";
    if (!rep.passed)
        rep.witness = worst_rec;
    return rep;
}

}  // namespace detail

inline std::vector<TheoremReport> run_suite(Selector sel, const SuiteOptions& opt = {})
{
    opt.tol.validate();
    std::vector<TheoremReport> out;
    const bool all = sel == Selector::All;

    if (all || sel == Selector::L1)
        for (auto& r : scan_lemma1(opt.scan))
            out.push_back(std::move(r));
    if (all || sel == Selector::L2)
        for (auto& r : scan_lemma2(opt.scan))
            out.push_back(std::move(r));

    std::optional<MonteCarloSummary> mc;
    auto monte_carlo = [&]() -> const MonteCarloSummary& {
        if (!mc)
            mc = run_monte_carlo(opt.samples, opt.seed, opt.tol);
        return *mc;
    };

    if (all || sel == Selector::T1 || sel == Selector::T2) {
        const auto& s = monte_carlo();
        TheoremReport t1a = detail::bound_report(ClaimId::T1A, s);
        TheoremReport t2a = detail::bound_report(ClaimId::T2A, s);
        detail::add_sharpness(t1a, t2a, opt.tol);

        if (all || sel == Selector::T1) {
            TheoremReport t1c = detail::im_family_report(ClaimId::T1C, ImSign::Upper, false, opt);
            TheoremReport t1d = detail::im_family_report(ClaimId::T1D, ImSign::Lower, false, opt);
            const std::string uniq = "Monte Carlo |Im sigma1| = 1/3 hits = " + std::to_string(s.im_extremal_hits) +
                                     ", off family = " + std::to_string(s.im_extremal_off_family);
            detail::append(t1c, s.im_extremal_off_family == 0, uniq, s.im_extremal_witness);
            detail::append(t1d, s.im_extremal_off_family == 0, uniq, s.im_extremal_witness);
            out.push_back(std::move(t1a));
            out.push_back(detail::bound_report(ClaimId::T1B, s));
            out.push_back(std::move(t1c));
            out.push_back(std::move(t1d));
            out.push_back(detail::bound_report(ClaimId::T1E, s));
        }
        if (all || sel == Selector::T2) {
            out.push_back(std::move(t2a));
            out.push_back(detail::bound_report(ClaimId::T2B, s));
            out.push_back(detail::im_family_report(ClaimId::T2C, ImSign::Upper, true, opt));
            out.push_back(detail::im_family_report(ClaimId::T2D, ImSign::Lower, true, opt));
            out.push_back(detail::bound_report(ClaimId::T2E, s));
        }
    }

    if (all || sel == Selector::T3)
        out.push_back(detail::bound_report(ClaimId::T3, monte_carlo()));

    if (all || sel == Selector::T4) {
        TheoremReport agg;
        agg.claim = ClaimId::T4;
        agg.margin = std::numeric_limits<double>::infinity();
        std::size_t n = 0, failures = 0;
        auto fold = [&](const TheoremReport& r, bool want_equal) {
            ++n;
            const bool ok = r.passed && ((r.margin <= opt.tol.identity_tol) == want_equal);
            if (!ok) {
                ++failures;
                if (!agg.witness)
                    agg.witness = r.witness ? r.witness : std::optional<SampleRecord>{};
            }
        };
        double min_gap_near = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < opt.equivalence_samples; ++k) {
            fold(check_equivalence_t4(draw_admissible(opt.seed, k, opt.tol).cubic, opt.tol), false);
            const OrderedCubic eq = draw_equilateral(opt.seed ^ 0x4eULL, k, opt.tol);
            fold(check_equivalence_t4(eq, opt.tol), true);

            // Move one vertex by a relative 1e-6 .. 1e-3 off the equilateral shape.
            Substream rng(opt.seed ^ 0x4e4eULL, k);
            const double size = std::abs(eq.w3 - eq.w1);
            const Complex kick = std::polar(size * std::pow(10.0, rng.uniform(-6.0, -3.0)), rng.uniform(0.0, 6.283185307179586));
            try {
                const OrderedCubic near = order_roots(eq.w1 + kick, eq.w2, eq.w3, opt.tol);
                const TheoremReport r = check_equivalence_t4(near, opt.tol);
                min_gap_near = std::min(min_gap_near, r.margin);
                fold(r, false);
            } catch (const Error&) {
            }
        }
        agg.samples = n;
        agg.passed = failures == 0;
        agg.margin = min_gap_near;
        agg.detail = "biconditional failures = " + std::to_string(failures) + " of " + std::to_string(n) +
                     "; min |sigma1 - sigma2| on near-equilateral = " + format_double(min_gap_near);
        if (!agg.passed && !agg.witness)
            agg.witness = SampleRecord{};
        out.push_back(std::move(agg));
    }

    if (all || sel == Selector::T5) {
        TheoremReport agg;
        agg.claim = ClaimId::T5;
        std::size_t n = 0, failures = 0;
        double max_im_collinear = 0.0, min_im_generic = std::numeric_limits<double>::infinity();
        auto fold = [&](const TheoremReport& r, bool want_real) {
            ++n;
            if (want_real)
                max_im_collinear = std::max(max_im_collinear, r.margin);
            else
                min_im_generic = std::min(min_im_generic, r.margin);
            if (!r.passed || (r.margin <= opt.tol.identity_tol) != want_real) {
                ++failures;
                if (!agg.witness)
                    agg.witness = r.witness;
            }
        };
        for (std::size_t k = 0; k < opt.equivalence_samples; ++k) {
            fold(check_equivalence_t5(draw_admissible(opt.seed, k, opt.tol).cubic, opt.tol, opt.tol.identity_tol), false);
            const OrderedCubic line = draw_collinear(opt.seed ^ 0x5eULL, k, opt.tol);
            fold(check_equivalence_t5(line, opt.tol, opt.tol.identity_tol), true);

            // Lift the middle root off the line by a relative 1e-6 .. 1e-3.
            Substream rng(opt.seed ^ 0x5e5eULL, k);
            const Complex dir = (line.w3 - line.w1) / std::abs(line.w3 - line.w1);
            const double lift = std::abs(line.w3 - line.w1) * std::pow(10.0, rng.uniform(-6.0, -3.0));
            try {
                const OrderedCubic off = order_roots(line.w1, line.w2 + Complex{0.0, 1.0} * dir * lift, line.w3, opt.tol);
                fold(check_equivalence_t5(off, opt.tol, opt.tol.identity_tol), false);
            } catch (const Error&) {
            }
        }
        const TheoremReport scan = scan_t5_boundary(opt.scan);
        agg.samples = n + scan.samples;
        agg.margin = scan.margin;
        agg.passed = failures == 0 && scan.passed;
        agg.detail = "biconditional failures = " + std::to_string(failures) + " of " + std::to_string(n) +
                     "; max |Im sigma| collinear = " + format_double(max_im_collinear) +
                     "; min |Im sigma| non-collinear = " + format_double(min_im_generic) + "; " + scan.detail;
        if (!agg.passed && !agg.witness)
            agg.witness = scan.witness ? scan.witness : std::optional<SampleRecord>{SampleRecord{}};
        out.push_back(std::move(agg));
    }

    if (all || sel == Selector::HYP) {
        TheoremReport agg;
        agg.claim = ClaimId::HYP;
        agg.margin = std::numeric_limits<double>::infinity();
        std::size_t failures = 0;
        for (std::size_t k = 0; k < opt.equivalence_samples; ++k) {
            const TheoremReport r = check_hyperbolic(draw_hyperbolic(opt.seed ^ 0x4879ULL, k, opt.tol), opt.tol);
            if (r.margin < agg.margin)
                agg.margin = r.margin;
            if (!r.passed) {
                ++failures;
                if (!agg.witness)
                    agg.witness = r.witness;
            }
        }
        agg.samples = opt.equivalence_samples;
        agg.passed = failures == 0;
        agg.detail = "failures = " + std::to_string(failures) + "; min margin to (1/3, 1/2, 2/3) = " + format_double(agg.margin);
        out.push_back(std::move(agg));
    }
    return out;
}

inline std::string report_json(const TheoremReport& r)
{
    JsonObject o;
    o.add("claim", to_string(r.claim)).add("passed", r.passed).add("margin", r.margin).add("samples", r.samples);
    o.add("detail", r.detail);
    if (r.witness)
        o.add_raw("witness", record_json(*r.witness));
    else
        o.add_null("witness");
    return o.str();
}

}  // namespace ratiolab
