#pragma once

// Command-line front end. run_cli takes the arguments after the program name
// and writes to the given streams, so it can be driven in-process by tests.
//
// Exit codes: 0 success, 1 usage or parse error, 2 undefined ratio for the
// given roots, 3 a verified claim failed, 4 I/O failure.

#include <CLI11.hpp>

#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ratiolab/cubic_model.hpp"
#include "ratiolab/json_writer.hpp"
#include "ratiolab/numeric_kernel.hpp"
#include "ratiolab/ratio_engine.hpp"
#include "ratiolab/region_mapper.hpp"
#include "ratiolab/theorem_suite.hpp"

namespace ratiolab {

inline constexpr std::uint64_t kDefaultSeed = 20'240'607;

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitUndefined = 2, kExitClaimFailed = 3, kExitIo = 4 };

namespace detail {

inline std::optional<double> parse_real(std::string_view s)
{
    if (!s.empty() && s.front() == '+')
        s.remove_prefix(1);
    if (s.empty() || s.front() == '+')
        return std::nullopt;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v))
        return std::nullopt;
    return v;
}

// "", "+" and "-" before a trailing i stand for 1, 1 and -1.
inline std::optional<double> parse_imag_coefficient(std::string_view s)
{
    if (s.empty() || s == "+")
        return 1.0;
    if (s == "-")
        return -1.0;
    return parse_real(s);
}

}  // namespace detail

/// Parses "a", "a+bi", "a-bi", "bi", "i", "-i" with decimal or exponent
/// notation and no spaces.
inline std::optional<Complex> parse_complex(std::string_view s)
{
    if (s.empty())
        return std::nullopt;
    if (s.back() != 'i') {
        const auto re = detail::parse_real(s);
        return re ? std::optional<Complex>(Complex{*re, 0.0}) : std::nullopt;
    }
    s.remove_suffix(1);

    // The sign that starts the imaginary part; exponent signs do not count.
    std::size_t split = std::string_view::npos;
    for (std::size_t k = s.size(); k-- > 1;) {
        if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    if (split == std::string_view::npos) {
        const auto im = detail::parse_imag_coefficient(s);
        return im ? std::optional<Complex>(Complex{0.0, *im}) : std::nullopt;
    }
    const auto re = detail::parse_real(s.substr(0, split));
    const auto im = detail::parse_imag_coefficient(s.substr(split));
    if (!re || !im)
        return std::nullopt;
    return Complex{*re, *im};
}

namespace detail {

struct CliState {
    ToleranceConfig tol;
    std::optional<std::uint64_t> seed;
    std::size_t samples = 10'000;
    std::size_t steps = 0;
    double tmin = kSqrt3, tmax = 100.0;
    std::vector<double> re_range{-2.0, 2.0}, im_range{-2.0, 2.0};
    std::size_t resolution = 201;
    std::string out;
    std::string format = "csv";
    std::vector<std::string> roots;
    std::string selector = "all";
    double t = 1000.0;
    std::string z0 = "1-4i", shift = "0", sign = "+";
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline Complex require_complex(const std::string& text)
{
    const auto z = parse_complex(text);
    if (!z)
        throw UsageError("cannot parse complex literal '" + text + "'");
    return *z;
}

inline std::array<Complex, 3> three_roots(const std::vector<std::string>& texts)
{
    if (texts.size() != 3)
        throw UsageError("expected exactly three roots");
    return {require_complex(texts[0]), require_complex(texts[1]), require_complex(texts[2])};
}

inline std::uint64_t resolve_seed(const CliState& st)
{
    if (st.seed)
        return *st.seed;
    if (const char* env = std::getenv("RATIOLAB_SEED"); env && *env) {
        std::uint64_t v = 0;
        const std::string_view s(env);
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size())
            throw UsageError("RATIOLAB_SEED is not an unsigned integer");
        return v;
    }
    return kDefaultSeed;
}

inline std::string complex_list(const std::array<Complex, 3>& z)
{
    return "[" + JsonObject::complex_json(z[0]) + "," + JsonObject::complex_json(z[1]) + "," +
           JsonObject::complex_json(z[2]) + "]";
}

inline int cmd_compute(const CliState& st, std::ostream& out)
{
    const auto r = three_roots(st.roots);
    const OrderedCubic c = order_roots(r[0], r[1], r[2], st.tol);
    const RatioVector v = ratios_direct(c);
    const NormalizedCubic n = normalize(c);
    const AdmissibilityReport rep = assess_admissibility(n.w2n, n.w3n, st.tol);

    JsonObject o;
    o.add_raw("roots", complex_list(c.roots()));
    o.add_raw("critical_points", "[" + JsonObject::complex_json(c.z1) + "," + JsonObject::complex_json(c.z2) + "]");
    o.add("sigma1", v.sigma1).add("sigma2", v.sigma2).add("w", n.w);
    o.add("classification", to_string(classify_configuration(c, st.tol)));
    o.add("admissible", rep.admissible).add("on_boundary", rep.on_boundary).add("coincident", c.coincident);
    if (rep.admissible)
        o.add("closed_form_path", to_string(ratios_via_w(n, rep, st.tol).path));
    o.add("identity_residual", identity_residual(v));
    o.add("bounds_ok", bounds_hold(v));
    out << o.str() << '\n';
    return kExitOk;
}

inline int cmd_verify(const CliState& st, std::ostream& out, std::ostream& err)
{
    const auto sel = parse_selector(st.selector);
    if (!sel)
        throw UsageError("unknown selector '" + st.selector + "'");
    SuiteOptions opt;
    opt.samples = st.samples;
    opt.equivalence_samples = st.samples;
    opt.seed = resolve_seed(st);
    opt.tol = st.tol;
    if (st.steps > 0)
        opt.scan.steps = st.steps;

    const auto reports = run_suite(*sel, opt);
    std::ostringstream body;
    std::size_t failed = 0;
    for (const auto& r : reports) {
        body << report_json(r) << '\n';
        failed += r.passed ? 0 : 1;
    }
    if (st.out.empty()) {
        out << body.str();
    } else {
        std::ofstream f(st.out, std::ios::binary | std::ios::trunc);
        f << body.str();
        f.close();
        if (!f)
            throw Error(ErrorKind::IoFailure, "cannot write " + st.out);
    }
    err << reports.size() - failed << " of " << reports.size() << " claims passed (seed " << opt.seed << ")\n";
    return failed == 0 ? kExitOk : kExitClaimFailed;
}

inline DatasetFormat dataset_format(const std::string& f)
{
    if (f == "csv")
        return DatasetFormat::Csv;
    if (f == "jsonl")
        return DatasetFormat::Jsonl;
    throw UsageError("unknown format '" + f + "'");
}

// Writes the dataset to --out (summary on stdout) or to stdout (summary on stderr).
inline int write_dataset(const CliState& st, const std::vector<SampleRecord>& rows, JsonObject summary,
                         std::ostream& out, std::ostream& err)
{
    const DatasetFormat fmt = dataset_format(st.format);
    std::size_t violations = 0;
    for (const auto& r : rows)
        violations += (r.reachable && !r.bounds_ok) ? 1 : 0;
    std::size_t n = 0;
    if (st.out.empty())
        n = emit_dataset(rows, out, fmt);
    else
        n = emit_dataset(rows, std::filesystem::path(st.out), fmt);
    summary.add("rows", n).add("bounds_violations", violations);
    if (!st.out.empty())
        summary.add("out", st.out);
    (st.out.empty() ? err : out) << summary.str() << '\n';
    return kExitOk;
}

inline int cmd_sweep(const CliState& st, std::ostream& out, std::ostream& err)
{
    if (st.re_range.size() != 2 || st.im_range.size() != 2)
        throw UsageError("ranges take two values: lo,hi");
    const auto rows = sweep_w_grid({st.re_range[0], st.re_range[1]}, {st.im_range[0], st.im_range[1]},
                                   st.resolution, st.tol);
    std::size_t excluded = 0, unreachable = 0;
    for (const auto& r : rows) {
        excluded += r.path == RatioPath::Excluded ? 1 : 0;
        unreachable += r.reachable ? 0 : 1;
    }
    JsonObject s;
    s.add("excluded", excluded).add("unreachable", unreachable);
    return write_dataset(st, rows, std::move(s), out, err);
}

inline int cmd_boundary(const CliState& st, std::ostream& out, std::ostream& err)
{
    const auto rows = trace_boundary(st.tmin, st.tmax, st.steps > 0 ? st.steps : 10'000, st.tol);
    const SampleRecord* top = &rows.front();
    for (const auto& r : rows)
        if (r.sigma1->imag() > top->sigma1->imag())
            top = &r;
    JsonObject s;
    s.add("max_im_sigma1", top->sigma1->imag()).add("max_im_sigma1_t", top->w.imag());
    return write_dataset(st, rows, std::move(s), out, err);
}

inline int cmd_ellipse(const CliState& st, std::ostream& out)
{
    const auto r = three_roots(st.roots);
    const OrderedCubic c = order_roots(r[0], r[1], r[2], st.tol);
    const InEllipse e = steiner_inellipse(c, st.tol);
    const double diameter = std::max({std::abs(c.w2 - c.w1), std::abs(c.w3 - c.w2), std::abs(c.w1 - c.w3)});

    // Critical points sorted the same way as the foci.
    Complex lo = c.z1, hi = c.z2;
    if (hi.real() < lo.real() || (hi.real() == lo.real() && hi.imag() < lo.imag()))
        std::swap(lo, hi);
    const double err_rel = std::max(std::abs(e.focus1 - lo), std::abs(e.focus2 - hi)) / diameter;
    const auto [th1, th2] = ratio_angles(c);

    JsonObject o;
    o.add_raw("roots", complex_list(c.roots()));
    o.add("center", e.center).add("focus1", e.focus1).add("focus2", e.focus2);
    o.add("semi_major", e.semi_major).add("semi_minor", e.semi_minor);
    o.add_raw("tangency_points", complex_list(e.tangency_points));
    o.add_raw("critical_points", "[" + JsonObject::complex_json(c.z1) + "," + JsonObject::complex_json(c.z2) + "]");
    o.add("focus_error_rel", err_rel);
    o.add("theta1", th1).add("theta2", th2);
    out << o.str() << '\n';
    return kExitOk;
}

inline int cmd_probe_re(const CliState& st, std::ostream& out)
{
    const ProbeResult p = sharpness_probe_re(st.t, st.tol);
    JsonObject o;
    o.add("t", st.t).add_raw("roots", complex_list(p.cubic.roots()));
    o.add("sigma1", p.ratios.sigma1).add("sigma2", p.ratios.sigma2);
    o.add("re_sigma1", p.ratios.sigma1.real()).add("re_sigma2", p.ratios.sigma2.real());
    out << o.str() << '\n';
    return kExitOk;
}

inline int cmd_probe_im(const CliState& st, std::ostream& out)
{
    ImSign sign;
    if (st.sign == "+" || st.sign == "upper")
        sign = ImSign::Upper;
    else if (st.sign == "-" || st.sign == "lower")
        sign = ImSign::Lower;
    else
        throw UsageError("--sign takes + or -");
    const ProbeResult p = extremal_family_im(require_complex(st.z0), require_complex(st.shift), sign, st.tol);
    JsonObject o;
    o.add_raw("roots", complex_list(p.cubic.roots()));
    o.add("sigma1", p.ratios.sigma1).add("sigma2", p.ratios.sigma2);
    o.add("im_sigma1", p.ratios.sigma1.imag()).add("im_sigma2", p.ratios.sigma2.imag());
    out << o.str() << '\n';
    return kExitOk;
}

inline int exit_code_for(ErrorKind k)
{
    switch (k) {
    case ErrorKind::RootsNotDistinct:
    case ErrorKind::RootRealPartsEqual:
    case ErrorKind::CriticalRealPartsEqual:
    case ErrorKind::ScaleOutOfRange:
    case ErrorKind::DegenerateTriangle:
        return kExitUndefined;
    case ErrorKind::IoFailure:
        return kExitIo;
    default:
        return kExitUsage;
    }
}

}  // namespace detail

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    detail::CliState st;
    CLI::App app{"Ratio vectors of cubic polynomials with distinct complex roots", "ratiolab"};
    app.require_subcommand(1);
    app.footer(
        "Complex literals: optional sign, decimal real part, optional +-<decimal>i imaginary part, no spaces.\n"
        "Examples: 1, -4-1i, 2.5e-3+7i, 1.7320508i, -i. Pass a leading-minus literal to an option as --z0=-1-4i.\n"
        "Exit codes: 0 ok, 1 usage, 2 undefined ratio, 3 claim failed, 4 I/O.");

    auto add_tolerances = [&st](CLI::App* sub) {
        sub->add_option("--eq-tol", st.tol.eq_tol, "equality tolerance");
        sub->add_option("--boundary-tol", st.tol.boundary_tol, "distance tolerance to the excluded set");
        sub->add_option("--identity-tol", st.tol.identity_tol, "tolerance for identity checks");
    };
    auto add_output = [&st](CLI::App* sub) {
        sub->add_option("--out", st.out, "output file (default: stdout)");
        sub->add_option("--format", st.format, "dataset format")->check(CLI::IsMember({"csv", "jsonl"}));
    };

    auto* compute = app.add_subcommand("compute", "ratio vector of the cubic with the given roots");
    compute->add_option("roots", st.roots, "three complex roots")->expected(3)->required();
    add_tolerances(compute);

    auto* verify = app.add_subcommand("verify", "run theorem and lemma checks; one JSON report per claim");
    verify->add_option("selector", st.selector, "all, L1, L2, T1, T2, T3, T4, T5 or HYP");
    verify->add_option("--samples", st.samples, "random samples per check");
    verify->add_option("--seed", st.seed, "random seed (default: RATIOLAB_SEED or 20240607)");
    verify->add_option("--steps", st.steps, "lemma scan grid points per half-line");
    verify->add_option("--out", st.out, "report file (default: stdout)");
    add_tolerances(verify);

    auto* sweep = app.add_subcommand("sweep", "closed forms f and g over a grid in the w-plane");
    sweep->add_option("--re-range", st.re_range, "lo,hi")->delimiter(',')->expected(2);
    sweep->add_option("--im-range", st.im_range, "lo,hi")->delimiter(',')->expected(2);
    sweep->add_option("--resolution", st.resolution, "grid points per axis");
    add_output(sweep);
    add_tolerances(sweep);

    auto* boundary = app.add_subcommand("boundary", "ratios along the boundary w = i t, |t| in [tmin, tmax]");
    boundary->add_option("--tmin", st.tmin, "smallest |t|, at least sqrt(3)");
    boundary->add_option("--tmax", st.tmax, "largest |t|");
    boundary->add_option("--steps", st.steps, "points per sign of t");
    add_output(boundary);
    add_tolerances(boundary);

    auto* ellipse = app.add_subcommand("ellipse", "Steiner inellipse of the root triangle");
    ellipse->add_option("roots", st.roots, "three complex roots")->expected(3)->required();
    add_tolerances(ellipse);

    auto* probe = app.add_subcommand("probe", "evaluate an extremal family");
    probe->require_subcommand(1);
    auto* probe_re = probe->add_subcommand("re-sharpness", "family approaching the bounds on Re sigma");
    probe_re->add_option("--t", st.t, "family parameter, |t| > sqrt(3)");
    auto* probe_im = probe->add_subcommand("im-extremal", "family with Im sigma1 = +-1/3");
    probe_im->add_option("--z0", st.z0, "complex parameter in the admissible half-strip");
    probe_im->add_option("--c", st.shift, "complex translation");
    probe_im->add_option("--sign", st.sign, "+ for Im sigma1 = 1/3, - for -1/3");
    add_tolerances(probe);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        st.tol.validate();
        if (*compute) return detail::cmd_compute(st, out);
        if (*verify) return detail::cmd_verify(st, out, err);
        if (*sweep) return detail::cmd_sweep(st, out, err);
        if (*boundary) return detail::cmd_boundary(st, out, err);
        if (*ellipse) return detail::cmd_ellipse(st, out);
        if (*probe_re) return detail::cmd_probe_re(st, out);
        if (*probe_im) return detail::cmd_probe_im(st, out);
    } catch (const detail::UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << to_string(e.kind()) << ": " << e.what() << '\n';
        return detail::exit_code_for(e.kind());
    }
    return kExitUsage;
}

}  // namespace ratiolab
