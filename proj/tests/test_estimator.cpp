#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "cifs/cifs.hpp"

using namespace cifs;

namespace {

/// Minimum cover by closed intervals of length 2r, by dynamic programming over
/// every placement with a cloud point as left end (any cover can be shifted
/// to such a placement without uncovering a point).
std::size_t exhaustive_cover(std::vector<double> xs, double center, double R, double r) {
    xs.erase(std::remove_if(xs.begin(), xs.end(), [&](double x) { return x < center - R || x > center + R; }), xs.end());
    std::sort(xs.begin(), xs.end());
    const std::size_t n = xs.size();
    // best[j]: fewest intervals covering xs[j..n)
    std::vector<std::size_t> best(n + 1, std::numeric_limits<std::size_t>::max());
    best[n] = 0;
    for (std::size_t j = n; j-- > 0;) {
        for (std::size_t i = 0; i <= j; ++i) {
            const double a = xs[i], b = xs[i] + 2.0 * r;
            if (!(a <= xs[j] && xs[j] <= b)) continue;
            std::size_t next = j;
            while (next < n && xs[next] <= b) ++next;
            if (best[next] != std::numeric_limits<std::size_t>::max()) best[j] = std::min(best[j], best[next] + 1);
        }
    }
    return best[0];
}

PointCloud quarter_cantor(double delta) {
    CifsSpec s;
    s.explicit_maps = {Similarity{0.25, 0.0}, Similarity{0.25, 0.75}};
    return build_limit_cloud(s, delta);
}

PointCloud uniform_points(double spacing) {
    std::vector<double> xs;
    for (double x = 0.0; x <= 1.0; x += spacing) xs.push_back(x);
    return PointCloud::from_points_1d(xs, spacing);
}

}  // namespace

TEST(Cover, GreedyMatchesExhaustiveOnRandomClouds) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::uniform_int_distribution<int> size(1, 40);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<double> xs(static_cast<std::size_t>(size(rng)));
        for (auto& x : xs) x = U(rng);
        const PointCloud c = PointCloud::from_points_1d(xs);
        const double r = 0.005 + 0.1 * U(rng), center = U(rng), R = 0.1 + 0.5 * U(rng);
        EXPECT_EQ(cover_count_1d(c, center, R, r), exhaustive_cover(c.coords, center, R, r)) << trial;
    }
}

TEST(Cover, SimpleCounts) {
    const PointCloud c = PointCloud::from_points_1d({0.0, 0.1, 0.2, 0.3, 0.4});
    EXPECT_EQ(cover_count_1d(c, 0.2, 1.0, 0.05), 3u);   // [0,.1] [.2,.3] [.4]
    EXPECT_EQ(cover_count_1d(c, 0.2, 1.0, 0.2), 1u);
    EXPECT_EQ(cover_count_1d(c, 0.0, 0.05, 0.01), 1u);  // only 0 is in range
    EXPECT_EQ(cover_count_1d(c, 5.0, 1.0, 0.01), 0u);
    EXPECT_THROW(cover_count_1d(c, 0.0, 1.0, 0.0), DomainError);
    EXPECT_EQ(global_count(c, 0.05), 3u);
}

TEST(Cover, PlanarCellCounts) {
    std::vector<Complex> zs;
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j) zs.emplace_back(0.1 * i + 0.05, 0.1 * j + 0.05);
    const PointCloud c = PointCloud::from_points_2d(zs);
    // cells of side 2r
    EXPECT_EQ(global_count(c, 0.05), 100u);
    EXPECT_EQ(global_count(c, 0.1), 25u);
    EXPECT_EQ(cover_count_2d(c, Complex(0.05, 0.05), 1e-3, 0.005), 1u);
    // grid offsets (i, j) >= 0 with i^2 + j^2 <= 6.25, one cell each
    EXPECT_EQ(cover_count_2d(c, Complex(0.05, 0.05), 0.25, 0.05), 8u);
    EXPECT_THROW(cover_count_1d(c, 0.0, 1.0, 0.1), DomainError);
}

TEST(Cover, CenterNetCoversCloud) {
    const PointCloud c = quarter_cantor(1e-4);
    for (const double R : {0.5, 0.05, 0.003}) {
        const auto centers = center_net(c, R);
        for (std::size_t i = 0; i < c.size(); ++i) {
            double d = kInf;
            for (const auto& z : centers) d = std::min(d, std::abs(z - c.z(i)));
            EXPECT_LE(d, 0.5 * R + 1e-15);
        }
    }
}

TEST(Ladder, RatiosAreAdmissible) {
    const ScalePolicy pol;
    for (const double th : {0.05, 0.3, 0.6, 0.9}) {
        const auto ks = detail::ratio_ladder(th, 1e-7, pol);
        ASSERT_FALSE(ks.empty()) << th;
        EXPECT_GE(ks.front(), 2);
        for (std::size_t i = 1; i < ks.size(); ++i) EXPECT_GT(ks[i], ks[i - 1]);
        for (const auto k : ks) {
            const double r = std::pow(static_cast<double>(k), -1.0 / (1.0 - th));
            EXPECT_GE(r, pol.guard * 1e-7 * (1 - 1e-9));
            EXPECT_LE(static_cast<double>(k) * r, pol.max_R + 1e-12);
            // R = r^theta
            EXPECT_NEAR(std::log(static_cast<double>(k) * r), th * std::log(r), 1e-9);
        }
    }
    // coarse clouds leave too few rungs near theta = 1
    EXPECT_LT(detail::ratio_ladder(0.95, 1e-3, pol).size(), pol.min_rungs);
}

TEST(Spectrum, SelfSimilarSetHasFlatSpectrum) {
    const PointCloud c = quarter_cantor(1e-7);
    const auto grid = uniform_grid(0.1, 0.8, 8);
    const auto a = assouad_spectrum_estimate(c, grid);
    const auto l = lower_spectrum_estimate(c, grid);
    ASSERT_TRUE(a.all_valid());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        EXPECT_NEAR(a.curve.values[i], 0.5, 0.05) << grid[i];
        EXPECT_NEAR(l.curve.values[i], 0.5, 0.05) << grid[i];
        EXPECT_LE(l.curve.values[i], a.curve.values[i] + 1e-12);
    }
    EXPECT_NEAR(box_dimension_estimate(c).value, 0.5, 0.05);
    EXPECT_NEAR(assouad_dimension_estimate(c).value, 0.5, 0.1);
}

TEST(Spectrum, IntervalIsOneDimensional) {
    const PointCloud c = uniform_points(1e-5);
    const auto a = assouad_spectrum_estimate(c, uniform_grid(0.1, 0.7, 4));
    // finite ladders bias interval counts low by about log 2 / log k_max
    for (const double v : a.curve.values) EXPECT_NEAR(v, 1.0, 0.03);
    EXPECT_NEAR(box_dimension_estimate(c).value, 1.0, 0.03);
}

TEST(Spectrum, PolynomialSequenceMatchesClosedForm) {
    std::vector<double> xs{0.0};
    const double delta = 1e-7;
    // keep 1/i while its gap to 1/(i-1) exceeds delta
    for (int i = 1; static_cast<double>(i) * (i - 1) <= 1.0 / delta; ++i) xs.push_back(1.0 / i);
    const PointCloud c = PointCloud::from_points_1d(xs, delta);
    const auto grid = uniform_grid(0.05, 0.85, 9);
    const auto a = assouad_spectrum_estimate(c, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_NEAR(a.curve.values[i], fp_spectrum(1.0, grid[i]), 0.07) << grid[i];
    EXPECT_NEAR(assouad_dimension_estimate(c).value, 1.0, 0.05);
}

TEST(Spectrum, SinglePointHasDimensionZero) {
    const PointCloud c = PointCloud::from_points_1d({0.3}, 1e-6);
    const auto a = assouad_spectrum_estimate(c, {0.5});
    EXPECT_DOUBLE_EQ(a.curve.values[0], 0.0);
    EXPECT_DOUBLE_EQ(box_dimension_estimate(c).value, 0.0);
}

TEST(Spectrum, DiagnosticsAreRecorded) {
    const PointCloud c = quarter_cantor(1e-6);
    const auto a = assouad_spectrum_estimate(c, {0.4});
    const auto& d = a.diagnostics.front();
    EXPECT_TRUE(d.valid);
    ASSERT_GE(d.samples.size(), 3u);
    EXPECT_DOUBLE_EQ(d.value, d.samples.back().exponent);
    EXPECT_GE(d.sup_exponent, d.value);
    EXPECT_GE(a.guard_ratio, ScalePolicy{}.guard * (1 - 1e-9));
}

TEST(Spectrum, InvalidNodesAreNaN) {
    const PointCloud c = quarter_cantor(1e-3);
    const auto a = assouad_spectrum_estimate(c, {0.95});
    EXPECT_FALSE(a.all_valid());
    EXPECT_TRUE(std::isnan(a.curve.values[0]));
}

TEST(Spectrum, ThreadCountDoesNotChangeResult) {
    const PointCloud c = build_limit_cloud(build_sharp_family(1.8, 3.6, 0.5), 1e-6);
    const auto grid = uniform_grid(0.05, 0.9, 12);
    ScalePolicy one, many;
    many.threads = 3;
    const auto a = assouad_spectrum_estimate(c, grid, one);
    const auto b = assouad_spectrum_estimate(c, grid, many);
    ASSERT_EQ(a.curve.size(), b.curve.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (std::isnan(a.curve.values[i])) EXPECT_TRUE(std::isnan(b.curve.values[i]));
        else EXPECT_EQ(a.curve.values[i], b.curve.values[i]);
    }
}

TEST(Spectrum, ResolutionIsRequired) {
    const PointCloud c = PointCloud::from_points_1d({0.1, 0.2});
    EXPECT_THROW(assouad_spectrum_estimate(c, {0.5}), DomainError);
    EXPECT_THROW(assouad_spectrum_estimate(PointCloud{}, {0.5}), DomainError);
    EXPECT_THROW(assouad_spectrum_estimate(quarter_cantor(1e-3), {1.5}), ConfigError);
}

TEST(Spectrum, PlanarCloudFollowsComplexContinuedFractionFormula) {
    const PointCloud c = build_limit_cloud(complex_gauss_system(), 3e-3);
    const auto a = assouad_spectrum_estimate(c, {0.2, 0.4});
    // h from the known bracket [1.85574, 1.85589]
    for (std::size_t i = 0; i < 2; ++i) EXPECT_NEAR(a.curve.values[i], complex_cf_spectrum(1.8558, a.curve.thetas[i]), 0.07);
}
