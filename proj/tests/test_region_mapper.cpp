#include <gtest/gtest.h>

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "oracles.hpp"
#include "ratiolab/region_mapper.hpp"

using namespace ratiolab;

namespace {

const Complex I{0.0, 1.0};

const SampleRecord* at(const std::vector<SampleRecord>& rows, Complex w)
{
    for (const auto& r : rows)
        if (std::abs(r.w - w) < 1e-12)
            return &r;
    return nullptr;
}

std::size_t count_lines(const std::string& s)
{
    return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

}  // namespace

TEST(Sweep, GridSpecialPoints)
{
    const auto rows = sweep_w_grid({-2.0, 2.0}, {-2.0, 2.0}, 5);
    ASSERT_EQ(rows.size(), 25u);

    const SampleRecord* origin = at(rows, 0.0);
    ASSERT_NE(origin, nullptr);
    EXPECT_NEAR(std::abs(*origin->sigma1 - (1.0 - kSqrt3 / 3.0)), 0.0, 1e-15);
    EXPECT_TRUE(origin->reachable);
    EXPECT_EQ(origin->path, RatioPath::Interior);

    const SampleRecord* cut = at(rows, 2.0 * I);
    ASSERT_NE(cut, nullptr);
    EXPECT_EQ(cut->path, RatioPath::Excluded);
    EXPECT_FALSE(cut->sigma1.has_value());
    EXPECT_FALSE(cut->sigma2.has_value());

    const SampleRecord* minus_one = at(rows, -1.0);
    ASSERT_NE(minus_one, nullptr);
    EXPECT_EQ(minus_one->path, RatioPath::Extension);
    EXPECT_EQ(*minus_one->sigma1, Complex(0.5));
    EXPECT_FALSE(minus_one->reachable);

    const SampleRecord* two = at(rows, 2.0);
    ASSERT_NE(two, nullptr);
    EXPECT_FALSE(two->reachable);
}

TEST(Sweep, BoundsOkMirrorsCheckBounds)
{
    for (const auto& r : sweep_w_grid({-6.0, 6.0}, {-6.0, 6.0}, 41)) {
        if (!r.sigma1)
            continue;
        bool all = true;
        for (const auto& rep : check_bounds({*r.sigma1, *r.sigma2, r.path}))
            all = all && rep.passed;
        ASSERT_EQ(all, r.bounds_ok);
    }
}

TEST(Sweep, BadArguments)
{
    EXPECT_THROW(sweep_w_grid({-1.0, 1.0}, {-1.0, 1.0}, 1), Error);
    EXPECT_THROW(sweep_w_grid({-1.0, std::nan("")}, {-1.0, 1.0}, 3), Error);
}

TEST(Reachability, ClosedFormAgreesWithSearch)
{
    // Search over w3 = 1 + i y for an admissible pair with ratio w.
    auto found = [](Complex w) {
        for (double y = -200.0; y <= 200.0; y += 0.01) {
            const Complex w3{1.0, y};
            if (assess_admissibility(w * w3, w3).admissible)
                return true;
        }
        return false;
    };
    for (Complex w : {Complex(0.0), Complex(3.0, 0.5), Complex(-4.0, -1.0), Complex(0.5, 0.0), Complex(2.0, 0.0),
                      Complex(-1.5, 0.0), Complex(0.0, 1.0), Complex(0.3, 3.0)})
        EXPECT_EQ(is_reachable(w), found(w)) << w;
}

TEST(Boundary, TraceValues)
{
    const auto rows = trace_boundary(kSqrt3, 1e3, 2001);
    ASSERT_EQ(rows.size(), 4002u);
    EXPECT_LT(rows.front().w.imag(), rows.back().w.imag());

    const SampleRecord* tip = at(rows, kSqrt3 * I);
    ASSERT_NE(tip, nullptr);
    EXPECT_NEAR(std::abs(*tip->sigma1 - (0.5 - kSqrt3 / 6.0 * I)), 0.0, 1e-15);

    const SampleRecord& far = rows.back();
    EXPECT_NEAR(far.sigma1->real(), 2.0 / 3.0, 1e-5);

    for (const auto& r : rows) {
        ASSERT_TRUE(r.bounds_ok);
        ASSERT_LE(identity_residual({*r.sigma1, *r.sigma2}), 1e-12);
    }
    EXPECT_NEAR(boundary_sigma1(-2.0).imag(), 1.0 / 3.0, 1e-15);
}

TEST(Boundary, TraceBadRange)
{
    try {
        trace_boundary(1.0, 10.0, 100);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::BadRange);
    }
    EXPECT_THROW(trace_boundary(5.0, 2.0, 100), Error);
}

TEST(InEllipseFit, Equilateral)
{
    const InEllipse e = steiner_inellipse(order_roots(-1.0, kSqrt3 * I, 1.0));
    EXPECT_NEAR(std::abs(e.center - I / kSqrt3), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(e.focus1 - I / kSqrt3), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(e.focus2 - I / kSqrt3), 0.0, 1e-14);
    EXPECT_NEAR(e.semi_major, e.semi_minor, 1e-12);
}

TEST(InEllipseFit, CollinearRejected)
{
    try {
        steiner_inellipse(order_roots(-1.0, 0.0, 1.0));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::DegenerateTriangle);
    }
}

TEST(InEllipseFit, KnownFoci)
{
    const OrderedCubic c = order_roots(Complex{-4, -1}, Complex{-2, 8}, Complex{4, 1});
    const InEllipse e = steiner_inellipse(c);
    EXPECT_NEAR(std::abs(e.focus1 - Complex(-1, 4)), 0.0, 1e-8);
    EXPECT_NEAR(std::abs(e.focus2 - Complex(-1, 4) / 3.0), 0.0, 1e-8);
}

TEST(InEllipseFit, PropertiesOnRandomTriangles)
{
    for (std::uint64_t k = 0; k < 10000; ++k) {
        const OrderedCubic c = draw_admissible(31, k).cubic;
        if (classify_configuration(c) == Configuration::Collinear)
            continue;
        const InEllipse e = steiner_inellipse(c);
        const double diam = std::max({std::abs(c.w2 - c.w1), std::abs(c.w3 - c.w2), std::abs(c.w3 - c.w1)});
        const Complex centroid = (c.w1 + c.w2 + c.w3) / 3.0;
        ASSERT_LE(std::abs(e.center - centroid), 1e-10 * std::max(1.0, std::abs(centroid))) << k;
        ASSERT_GE(e.semi_major, e.semi_minor);
        ASSERT_GT(e.semi_minor, 0.0);

        // Foci against the long-double critical points.
        auto [o1, o2] = oracle::critical_points(c.w1, c.w2, c.w3);
        Complex a(o1), b(o2);
        if (b.real() < a.real() || (b.real() == a.real() && b.imag() < a.imag()))
            std::swap(a, b);
        const double err = std::max(std::abs(e.focus1 - a), std::abs(e.focus2 - b));
        const double mag = std::max({std::abs(c.w1), std::abs(c.w2), std::abs(c.w3)});
        ASSERT_LE(err, 1e-8 * diam + 1e-12 * mag) << k;

        const std::array<Complex, 3> v{c.w1, c.w2, c.w3};
        for (int s = 0; s < 3; ++s) {
            const Complex m = e.tangency_points[s];
            ASSERT_EQ(m, 0.5 * (v[s] + v[(s + 1) % 3]));
            ASSERT_LT(std::abs(conic_value(e.conic, m)), 1e-10);
            // Gradient parallel to the side normal.
            const Complex g = conic_gradient(e.conic, m);
            const Complex side = v[(s + 1) % 3] - v[s];
            const double cross = std::abs((std::conj(side) * g).real()) / (std::abs(side) * std::abs(g));
            ASSERT_LT(cross, 1e-8);
        }
    }
}

TEST(RatioAngles, MatchArguments)
{
    auto [t1, t2] = ratio_angles(order_roots(-1.0, 0.0, 1.0));
    EXPECT_EQ(t1, 0.0);
    EXPECT_EQ(t2, 0.0);

    const OrderedCubic eq = order_roots(-1.0, kSqrt3 * I, 1.0);
    std::tie(t1, t2) = ratio_angles(eq);
    EXPECT_NEAR(t1, std::arg(ratios_direct(eq).sigma1), 1e-15);

    const OrderedCubic g = order_roots(Complex{-4, -1}, Complex{-2, 8}, Complex{4, 1});
    std::tie(t1, t2) = ratio_angles(g);
    EXPECT_NEAR(t1, std::arg(Complex(0.6, -0.2)), 1e-15);

    for (std::uint64_t k = 0; k < 10000; ++k) {
        const OrderedCubic c = draw_admissible(8, k).cubic;
        const RatioVector r = ratios_direct(c);
        std::tie(t1, t2) = ratio_angles(c);
        ASSERT_GT(t1, -std::numbers::pi);
        ASSERT_NEAR(t1, std::arg(r.sigma1), 1e-10);
        ASSERT_NEAR(t2, std::arg(r.sigma2), 1e-10);
    }
}

TEST(Emit, CsvRowCounts)
{
    auto rows = sweep_w_grid({-1.0, 1.0}, {0.5, 0.5}, 3);
    rows.resize(3);
    std::ostringstream os;
    EXPECT_EQ(emit_dataset(rows, os, DatasetFormat::Csv), 3u);
    EXPECT_EQ(count_lines(os.str()), 4u);
    EXPECT_EQ(os.str().substr(0, kCsvHeader.size()), kCsvHeader);

    std::ostringstream empty;
    EXPECT_EQ(emit_dataset({}, empty, DatasetFormat::Csv), 0u);
    EXPECT_EQ(empty.str(), std::string(kCsvHeader) + "\n");
}

TEST(Emit, CsvMissingValuesAreEmpty)
{
    const auto rows = sweep_w_grid({0.0, 1.0}, {2.0, 3.0}, 2);
    std::ostringstream os;
    emit_dataset(rows, os, DatasetFormat::Csv);
    EXPECT_NE(os.str().find("\n0,2,,,,,excluded,generic,false,true\n"), std::string::npos) << os.str();
}

TEST(Emit, JsonlRoundTrip)
{
    const auto rows = sweep_w_grid({-3.0, 3.0}, {-3.0, 3.0}, 7);
    std::ostringstream os;
    emit_dataset(rows, os, DatasetFormat::Jsonl);
    std::istringstream in(os.str());
    std::string line;
    std::size_t k = 0;
    while (std::getline(in, line)) {
        const auto j = nlohmann::json::parse(line);
        const SampleRecord& r = rows[k++];
        EXPECT_EQ(j["w_re"].get<double>(), r.w.real());
        EXPECT_EQ(j["w_im"].get<double>(), r.w.imag());
        if (r.sigma1) {
            EXPECT_EQ(j["sigma1_re"].get<double>(), r.sigma1->real());
            EXPECT_EQ(j["sigma1_im"].get<double>(), r.sigma1->imag());
            EXPECT_EQ(j["sigma2_re"].get<double>(), r.sigma2->real());
            EXPECT_EQ(j["sigma2_im"].get<double>(), r.sigma2->imag());
        } else {
            EXPECT_TRUE(j["sigma1_re"].is_null());
        }
        EXPECT_EQ(j["path"], to_string(r.path));
        EXPECT_EQ(j["reachable"].get<bool>(), r.reachable);
        EXPECT_EQ(j["bounds_ok"].get<bool>(), r.bounds_ok);
    }
    EXPECT_EQ(k, rows.size());
}

TEST(Emit, DeterministicBytes)
{
    std::ostringstream a, b;
    emit_dataset(sweep_w_grid({-2.0, 2.0}, {-2.0, 2.0}, 33), a, DatasetFormat::Csv);
    emit_dataset(sweep_w_grid({-2.0, 2.0}, {-2.0, 2.0}, 33), b, DatasetFormat::Csv);
    EXPECT_EQ(a.str(), b.str());
}

TEST(Emit, IoFailure)
{
    try {
        emit_dataset({}, std::filesystem::path("/nonexistent-dir/x.csv"), DatasetFormat::Csv);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::IoFailure);
    }
}
