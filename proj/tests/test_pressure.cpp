#include <gtest/gtest.h>

#include <cmath>

#include "cifs/cifs.hpp"

using namespace cifs;

TEST(Pressure, EqualRatioSimilarities) {
    CifsSpec s;
    s.explicit_maps = {Similarity{0.25, 0.0}, Similarity{0.25, 0.75}};
    const auto d = hausdorff_dimension(s);
    EXPECT_EQ(d.method, DimensionMethod::exact_similarity);
    EXPECT_NEAR(d.value, 0.5, 1e-9);

    CifsSpec cantor;
    cantor.explicit_maps = {Similarity{1.0 / 3.0, 0.0}, Similarity{1.0 / 3.0, 2.0 / 3.0}};
    EXPECT_NEAR(hausdorff_dimension(cantor).value, std::log(2.0) / std::log(3.0), 1e-9);
}

TEST(Pressure, MixedRatiosSolveMoranEquation) {
    CifsSpec s;
    s.explicit_maps = {Similarity{0.5, 0.0}, Similarity{0.25, 0.75}};
    // 2^-s + 4^-s = 1  =>  2^-s = (sqrt 5 - 1) / 2
    const double expect = -std::log2((std::sqrt(5.0) - 1.0) / 2.0);
    EXPECT_NEAR(hausdorff_dimension(s).value, expect, 1e-9);
}

TEST(Pressure, GeometricTails) {
    CifsSpec s;
    s.tails.push_back(GeometricTail{4.0, 1.0, 1, GeometricTail::Offsets::packed});
    // sum 4^-is = 1 / (4^s - 1) = 1
    EXPECT_NEAR(hausdorff_dimension(s).value, 0.5, 1e-6);

    CifsSpec g;
    g.tails.push_back(GeometricTail{2.0, 1.0, 2});
    // sum_{i>=2} 2^-is = x^2 / (1 - x) = 1 with x = 2^-s
    const double x = (std::sqrt(5.0) - 1.0) / 2.0;
    EXPECT_NEAR(hausdorff_dimension(g).value, -std::log2(x), 1e-6);
}

TEST(Pressure, GaussPairBracketsKnownValue) {
    CifsSpec s;
    s.explicit_maps = {GaussBranch{2}, GaussBranch{3}};
    const auto d = hausdorff_dimension(s, 1e-4);
    EXPECT_EQ(d.method, DimensionMethod::bracketed_conformal);
    // dimension of continued fractions with digits in {2, 3}
    const double known = 0.3374367808;
    EXPECT_LE(d.lo, known);
    EXPECT_GE(d.hi, known);
    EXPECT_TRUE(d.converged);
}

TEST(Pressure, GaussDigitsOneTwoViaRecoding) {
    const auto d = hausdorff_dimension(gauss_system({1, 2}), 1e-4);
    // dimension of continued fractions with digits in {1, 2}
    const double known = 0.5312805062;
    EXPECT_LE(d.lo, known + 1e-9);
    EXPECT_GE(d.hi, known - 1e-9);
    EXPECT_TRUE(d.converged);
}

TEST(Pressure, InfiniteDigitSetExceedsTruncations) {
    CifsSpec s;
    s.tails.push_back(GaussTail{DigitSet(FullDigits{2}), false});
    const auto full = hausdorff_dimension(s, 1e-4);
    std::vector<std::int64_t> digits;
    for (std::int64_t b = 2; b <= 12; ++b) digits.push_back(b);
    const auto part = hausdorff_dimension(gauss_system(digits), 1e-4);
    EXPECT_GT(full.lo, part.hi);
    EXPECT_GT(full.lo, 0.5);
    EXPECT_LT(full.hi, 1.0);
}

TEST(Pressure, FinitenessParameter) {
    EXPECT_DOUBLE_EQ(finiteness_parameter(build_sharp_family(1.0, 3.0, 0.6)), 1.0 / 3.0);
    CifsSpec finite;
    finite.explicit_maps = {Similarity{0.5, 0.0}};
    EXPECT_DOUBLE_EQ(finiteness_parameter(finite), 0.0);
    CifsSpec gauss;
    gauss.tails.push_back(GaussTail{DigitSet(FullDigits{2}), false});
    EXPECT_DOUBLE_EQ(finiteness_parameter(gauss), 0.5);
}

TEST(Pressure, SharpFamilyRoundTrip) {
    for (const double p : {0.5, 1.0, 2.0})
        for (const double extra : {1.0, 1.7}) {
            const double t = p + extra;
            const double h = 0.5 * (1.0 / t + 1.0) + 0.1 * (1.0 - 1.0 / t);
            const auto s = build_sharp_family(p, t, h);
            EXPECT_NEAR(hausdorff_dimension(s).value, h, 1e-6) << "p=" << p << " t=" << t;
        }
}

TEST(Pressure, SharpFamilyGeometry) {
    const double p = 1.8;
    const auto s = build_sharp_family(p, 2.8, 0.5);
    // explicit maps fill the gaps between i^-p, tail maps have ratio p i^-t
    for (std::size_t j = 0; j < s.explicit_maps.size(); ++j) {
        const auto i = static_cast<double>(s.explicit_label(j));
        const auto& m = std::get<Similarity>(s.explicit_maps[j].kind);
        EXPECT_NEAR(m.offset, std::pow(i, -p), 1e-15);
        EXPECT_LE(m.offset + m.ratio, std::pow(i - 1.0, -p) + 1e-15);
    }
    const auto& tail = std::get<PolynomialTail>(s.tails.front());
    EXPECT_DOUBLE_EQ(tail.ratio(tail.first), p * std::pow(static_cast<double>(tail.first), -2.8));
    EXPECT_TRUE(validate_cifs(s).cifs_ok());
}

TEST(Pressure, SharpFamilyDomain) {
    EXPECT_THROW(build_sharp_family(1.0, 1.5, 0.7), ConfigError);
    EXPECT_THROW(build_sharp_family(1.0, 2.0, 0.4), ConfigError);
    EXPECT_THROW(build_sharp_family(-1.0, 2.0, 0.7), ConfigError);
}

TEST(Pressure, PsiBoundsAreOrdered) {
    CifsSpec s;
    s.explicit_maps = {GaussBranch{2}, GaussBranch{3}, GaussBranch{4}};
    for (int n = 1; n <= 3; ++n)
        for (const double t : {0.3, 0.5, 0.8}) {
            const auto pr = psi(s, t, n);
            EXPECT_LE(pr.lower, pr.upper) << n << " " << t;
        }
}

TEST(Pressure, BracketWidthShrinksWithTolerance) {
    const auto s = renyi_parabolic_spec({2, 3});
    const auto d = hausdorff_dimension(s, 1e-4);
    EXPECT_TRUE(d.converged);
    EXPECT_LE(d.hi - d.lo, 1e-4);
    EXPECT_GE(d.lo, 0.5);  // at least the finiteness parameter q / (1 + q)
    EXPECT_LT(d.hi, 1.0);
}

TEST(Pressure, ComplexGaussBracketIsConsistent) {
    const auto d = hausdorff_dimension(complex_gauss_system(), 1e-3);
    EXPECT_LE(d.lo, d.hi);
    EXPECT_GE(d.lo, 1.0);
    EXPECT_LE(d.hi, 2.0);
}

TEST(Pressure, RejectsEmptySystemAndBadTolerance) {
    EXPECT_THROW(hausdorff_dimension(CifsSpec{}), ConfigError);
    CifsSpec s;
    s.explicit_maps = {Similarity{0.5, 0.0}};
    EXPECT_THROW(hausdorff_dimension(s, 0.0), ConfigError);
}
