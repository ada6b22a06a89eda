#pragma once

// Datasets over the w-plane and along the boundary w = i t, and the Steiner
// inellipse computed from the triangle alone (a conic fit through the side
// midpoints, tangent to the sides).

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ratiolab/cubic_model.hpp"
#include "ratiolab/json_writer.hpp"
#include "ratiolab/numeric_kernel.hpp"
#include "ratiolab/ratio_engine.hpp"
#include "ratiolab/sample_record.hpp"
#include "ratiolab/theorem_suite.hpp"

namespace ratiolab {

/// Whether some admissible pair (w w3, w3) has ratio w. With w3 = 1 + i y
/// the ordering -Re w3 < Re w2 < Re w3 reads |Re w - y Im w| < 1, solvable
/// unless Im w = 0 and |Re w| >= 1.
inline bool is_reachable(Complex w, const ToleranceConfig& tol = {})
{
    if (!is_finite(w))
        return false;
    if (std::abs(w - 1.0) <= tol.eq_tol || std::abs(w + 1.0) <= tol.eq_tol)
        return false;
    return std::abs(w.imag()) > tol.eq_tol || std::abs(w.real()) < 1.0 - tol.eq_tol;
}

/// Shape class of the triangle (-1, w, 1), which is similar to the roots.
inline Configuration classify_w(Complex w, const ToleranceConfig& tol = {})
{
    const double scale = std::max(1.0, std::abs(w));
    if (std::abs(w.imag()) <= tol.eq_tol * scale)
        return Configuration::Collinear;
    if (std::abs(std::abs(w.imag()) - kSqrt3) <= tol.eq_tol && std::abs(w.real()) <= tol.eq_tol)
        return Configuration::Equilateral;
    return Configuration::Generic;
}

struct Interval {
    double lo = -2.0;
    double hi = 2.0;
};

/// f and g on a resolution x resolution grid, rows ordered by Im w then Re w.
/// Points of the excluded set carry no values; w = +-1 carry the removable
/// values of f or g and are marked as extensions.
inline std::vector<SampleRecord> sweep_w_grid(Interval re, Interval im, std::size_t resolution,
                                              const ToleranceConfig& tol = {})
{
    if (resolution < 2 || !std::isfinite(re.lo) || !std::isfinite(re.hi) || !std::isfinite(im.lo) ||
        !std::isfinite(im.hi) || !(re.lo <= re.hi) || !(im.lo <= im.hi))
        throw Error(ErrorKind::BadRange, "sweep requires finite ordered ranges and resolution >= 2");

    auto node = [resolution](Interval r, std::size_t k) {
        return r.lo + (r.hi - r.lo) * static_cast<double>(k) / static_cast<double>(resolution - 1);
    };

    std::vector<SampleRecord> out;
    out.reserve(resolution * resolution);
    for (std::size_t j = 0; j < resolution; ++j) {
        for (std::size_t i = 0; i < resolution; ++i) {
            SampleRecord rec;
            rec.w = Complex{node(re, i), node(im, j)};
            rec.classification = classify_w(rec.w, tol);
            rec.reachable = is_reachable(rec.w, tol);

            const bool tip = std::abs(3.0 + rec.w * rec.w) <= detail::kDiscriminantFloor * (3.0 + std::norm(rec.w));
            if (in_excluded_set(rec.w, tol) && !tip) {
                rec.path = RatioPath::Excluded;
                rec.reachable = false;
                rec.bounds_ok = true;
                out.push_back(rec);
                continue;
            }

            const Complex root = detail::closed_root(rec.w);
            const RatioVector r{detail::f_closed(rec.w, root), detail::g_closed(rec.w, root), RatioPath::Interior};
            rec.sigma1 = r.sigma1;
            rec.sigma2 = r.sigma2;
            const bool removable = std::abs(rec.w - 1.0) < detail::kRemovableBand ||
                                   std::abs(rec.w + 1.0) < detail::kRemovableBand;
            rec.path = removable ? RatioPath::Extension : RatioPath::Interior;
            rec.bounds_ok = bounds_hold(r);
            out.push_back(rec);
        }
    }
    return out;
}

/// sigma1 from the boundary formula and sigma2 = 1 / (3 (1 - sigma1)) at
/// `steps` values of t on [-t_max, -t_min], then `steps` on [t_min, t_max].
inline std::vector<SampleRecord> trace_boundary(double t_min, double t_max, std::size_t steps,
                                                const ToleranceConfig& tol = {})
{
    if (!std::isfinite(t_min) || !std::isfinite(t_max) || !(t_min >= kSqrt3 - tol.eq_tol) || !(t_min < t_max) ||
        steps < 2)
        throw Error(ErrorKind::BadRange, "boundary trace requires sqrt(3) <= t_min < t_max and steps >= 2");

    std::vector<double> ts;
    ts.reserve(2 * steps);
    for (std::size_t k = 0; k < steps; ++k)
        ts.push_back(-(t_max - (t_max - t_min) * static_cast<double>(k) / static_cast<double>(steps - 1)));
    for (std::size_t k = 0; k < steps; ++k)
        ts.push_back(t_min + (t_max - t_min) * static_cast<double>(k) / static_cast<double>(steps - 1));

    std::vector<SampleRecord> out;
    out.reserve(ts.size());
    for (double t : ts) {
        const Complex s1 = boundary_sigma1(t, tol);
        const RatioVector r{s1, 1.0 / (3.0 * (1.0 - s1)), RatioPath::Boundary};
        SampleRecord rec;
        rec.w = Complex{0.0, t};
        rec.sigma1 = r.sigma1;
        rec.sigma2 = r.sigma2;
        rec.path = RatioPath::Boundary;
        rec.classification = classify_w(rec.w, tol);
        rec.reachable = true;
        rec.bounds_ok = bounds_hold(r);
        out.push_back(rec);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Steiner inellipse
// ---------------------------------------------------------------------------

/// Conic A x^2 + B x y + C y^2 + D x + E y + F in the frame q = W (p - origin),
/// where origin is the centroid and W whitens the vertex covariance. Every
/// triangle is equilateral in that frame, so the fit stays well conditioned
/// however thin the triangle is.
struct ConicFit {
    std::array<double, 6> coeff{};  // A, B, C, D, E, F
    Complex origin;
    std::array<double, 4> frame{1.0, 0.0, 0.0, 1.0};  // W, row major
    double lsq_residual = 0.0;
};

struct InEllipse {
    Complex center;
    Complex focus1, focus2;  // sorted by real part
    double semi_major = 0.0;
    double semi_minor = 0.0;
    std::array<Complex, 3> tangency_points;  // midpoints of w1w2, w2w3, w3w1
    ConicFit conic;
};

namespace detail {

inline Complex to_frame(const ConicFit& c, Complex p)
{
    const Complex u = p - c.origin;
    const auto& W = c.frame;
    return {W[0] * u.real() + W[1] * u.imag(), W[2] * u.real() + W[3] * u.imag()};
}

}  // namespace detail

/// Value of the fitted conic at p, in frame coordinates.
inline double conic_value(const ConicFit& c, Complex p)
{
    const Complex q = detail::to_frame(c, p);
    const double x = q.real(), y = q.imag();
    const auto& k = c.coeff;
    return k[0] * x * x + k[1] * x * y + k[2] * y * y + k[3] * x + k[4] * y + k[5];
}

/// Gradient of the conic at p with respect to the original coordinates.
inline Complex conic_gradient(const ConicFit& c, Complex p)
{
    const Complex q = detail::to_frame(c, p);
    const double x = q.real(), y = q.imag();
    const auto& k = c.coeff;
    const auto& W = c.frame;
    const double gx = 2.0 * k[0] * x + k[1] * y + k[3], gy = k[1] * x + 2.0 * k[2] * y + k[4];
    return {W[0] * gx + W[2] * gy, W[1] * gx + W[3] * gy};
}

inline InEllipse steiner_inellipse(const OrderedCubic& c, const ToleranceConfig& tol = {})
{
    const std::array<Complex, 3> v{c.w1, c.w2, c.w3};
    const Complex centroid = (v[0] + v[1] + v[2]) / 3.0;
    const double scale = std::max({std::abs(v[1] - v[0]), std::abs(v[2] - v[1]), std::abs(v[0] - v[2])});
    const double area = 0.5 * std::abs(((v[1] - v[0]) * std::conj(v[2] - v[0])).imag());
    if (!(scale > 0.0) || area <= tol.eq_tol * scale * scale)
        throw Error(ErrorKind::DegenerateTriangle, "triangle is degenerate");

    InEllipse e;
    e.conic.origin = centroid;

    // Whitening W = L^-1 with L L^T the vertex covariance, scaled by the
    // longest side first so the covariance stays O(1).
    Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
    for (const Complex& p : v) {
        const Eigen::Vector2d u((p - centroid).real() / scale, (p - centroid).imag() / scale);
        cov += u * u.transpose() / 3.0;
    }
    const Eigen::LLT<Eigen::Matrix2d> llt(cov);
    if (llt.info() != Eigen::Success)
        throw Error(ErrorKind::DegenerateTriangle, "triangle is degenerate");
    const Eigen::Matrix2d L = scale * Eigen::Matrix2d(llt.matrixL());
    const Eigen::Matrix2d W = L.inverse();
    e.conic.frame = {W(0, 0), W(0, 1), W(1, 0), W(1, 1)};

    // Unknowns A..E with F = -1: the centroid lies inside, so F != 0.
    Eigen::Matrix<double, 6, 5> M;
    Eigen::Matrix<double, 6, 1> rhs;
    for (int k = 0; k < 3; ++k) {
        const Complex a = v[k], b = v[(k + 1) % 3];
        e.tangency_points[k] = 0.5 * (a + b);
        const Complex m = detail::to_frame(e.conic, e.tangency_points[k]);
        const Complex d = detail::to_frame(e.conic, b) - detail::to_frame(e.conic, a);
        const double x = m.real(), y = m.imag();
        M.row(2 * k) << x * x, x * y, y * y, x, y;
        rhs(2 * k) = 1.0;
        M.row(2 * k + 1) << 2.0 * x * d.real(), y * d.real() + x * d.imag(), 2.0 * y * d.imag(), d.real(), d.imag();
        rhs(2 * k + 1) = 0.0;
    }
    const Eigen::Matrix<double, 5, 1> sol = M.colPivHouseholderQr().solve(rhs);
    e.conic.lsq_residual = (M * sol - rhs).norm();
    const double A = sol(0), B = sol(1), C = sol(2), D = sol(3), E = sol(4), F = -1.0;
    e.conic.coeff = {A, B, C, D, E, F};

    Eigen::Matrix2d Qf;
    Qf << A, 0.5 * B, 0.5 * B, C;
    const Eigen::Vector2d ctr = (2.0 * Qf).colPivHouseholderQr().solve(Eigen::Vector2d(-D, -E));
    const double Fc = F + 0.5 * (D * ctr(0) + E * ctr(1));
    const double det_f = A * C - 0.25 * B * B;
    if (!(A > 0.0) || !(det_f > 0.0) || !(Fc < 0.0))
        throw Error(ErrorKind::DegenerateTriangle, "fitted conic is not an ellipse");

    const Eigen::Vector2d ctr_p = L * ctr;
    e.center = centroid + Complex{ctr_p(0), ctr_p(1)};

    // Quadratic part in original coordinates. Its determinant is taken as a
    // product: for thin triangles A C - B^2/4 would cancel.
    const Eigen::Matrix2d Q = W.transpose() * Qf * W;
    const double det = det_f * W.determinant() * W.determinant();
    const double hi = 0.5 * (Q(0, 0) + Q(1, 1)) + std::hypot(0.5 * (Q(0, 0) - Q(1, 1)), Q(0, 1));
    const double lo = det / hi;
    e.semi_major = std::sqrt(-Fc / lo);
    e.semi_minor = std::sqrt(-Fc / hi);

    // Squared focal offset from the center, -Fc (1/lo - 1/hi) along the
    // major axis, written without the eigenvectors.
    const Complex f2 = Fc * Complex{Q(0, 0) - Q(1, 1), 2.0 * Q(0, 1)} / det;
    Complex off;
    if (std::abs(f2) > detail::kDiscriminantFloor * e.semi_major * e.semi_major)
        off = std::sqrt(f2);
    const Complex p = e.center + off, q = e.center - off;
    if (p.real() < q.real() || (p.real() == q.real() && p.imag() < q.imag())) {
        e.focus1 = p;
        e.focus2 = q;
    } else {
        e.focus1 = q;
        e.focus2 = p;
    }
    return e;
}

/// Signed angles from w2 - w1 to z1 - w1 and from w3 - w2 to z2 - w2, in (-pi, pi].
inline std::pair<double, double> ratio_angles(const OrderedCubic& c)
{
    auto angle = [](Complex from, Complex to) {
        const Complex p = std::conj(from) * to;
        const double th = std::atan2(p.imag(), p.real());
        return th == -std::numbers::pi ? std::numbers::pi : th;
    };
    return {angle(c.w2 - c.w1, c.z1 - c.w1), angle(c.w3 - c.w2, c.z2 - c.w2)};
}

// ---------------------------------------------------------------------------
// Dataset emission
// ---------------------------------------------------------------------------

enum class DatasetFormat { Csv, Jsonl };

inline constexpr std::string_view kCsvHeader =
    "w_re,w_im,sigma1_re,sigma1_im,sigma2_re,sigma2_im,path,classification,reachable,bounds_ok";

namespace detail {

inline std::string csv_number(double x)
{
    return std::isfinite(x) ? format_double(x) : std::string();
}

inline std::string csv_row(const SampleRecord& r)
{
    std::string row = csv_number(r.w.real()) + ',' + csv_number(r.w.imag()) + ',';
    row += r.sigma1 ? csv_number(r.sigma1->real()) + ',' + csv_number(r.sigma1->imag()) : std::string(",");
    row += ',';
    row += r.sigma2 ? csv_number(r.sigma2->real()) + ',' + csv_number(r.sigma2->imag()) : std::string(",");
    row += ',';
    row += to_string(r.path);
    row += ',';
    row += to_string(r.classification);
    row += r.reachable ? ",true" : ",false";
    row += r.bounds_ok ? ",true" : ",false";
    return row;
}

inline SampleRecord without_roots(SampleRecord r)
{
    r.roots.reset();
    return r;
}

}  // namespace detail

inline std::size_t emit_dataset(const std::vector<SampleRecord>& records, std::ostream& out, DatasetFormat format)
{
    if (format == DatasetFormat::Csv)
        out << kCsvHeader << '\n';
    for (const auto& r : records) {
        if (format == DatasetFormat::Csv)
            out << detail::csv_row(r) << '\n';
        else
            out << record_json(detail::without_roots(r)) << '\n';
    }
    out.flush();
    if (!out)
        throw Error(ErrorKind::IoFailure, "failed writing dataset");
    return records.size();
}

inline std::size_t emit_dataset(const std::vector<SampleRecord>& records, const std::filesystem::path& path,
                                DatasetFormat format)
{
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file)
        throw Error(ErrorKind::IoFailure, "cannot open " + path.string() + " for writing");
    const std::size_t n = emit_dataset(records, file, format);
    file.close();
    if (!file)
        throw Error(ErrorKind::IoFailure, "failed closing " + path.string());
    return n;
}

}  // namespace ratiolab
