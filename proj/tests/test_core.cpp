#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "cifs/cifs.hpp"

using namespace cifs;

namespace {

CifsSpec quarter_pair() {
    CifsSpec s;
    s.explicit_maps = {Similarity{0.25, 0.0}, Similarity{0.25, 0.75}};
    return s;
}

}  // namespace

TEST(Words, ApplyComposesLastLetterFirst) {
    const CifsSpec s = quarter_pair();
    const Word w{{0, 1}, {0, 0}};
    // S_2(S_1(x)) = 0.25 (0.25 x) + 0.75
    EXPECT_DOUBLE_EQ(apply_word(s, w, 1.0), 0.25 * 0.25 + 0.75);
    EXPECT_DOUBLE_EQ(transform_of(s, w)(1.0), 0.25 * 0.25 + 0.75);
    EXPECT_DOUBLE_EQ(apply_word(s, Word{}, 0.3), 0.3);
}

TEST(Words, SimilarityCylinderDiameterIsProductOfRatios) {
    const CifsSpec s = quarter_pair();
    const Word w{{0, 0}, {0, 1}, {0, 1}};
    EXPECT_NEAR(cylinder_of(s, w).diameter, std::pow(0.25, 3), 1e-15);
}

TEST(Words, GaussCylinderEndpoints) {
    CifsSpec s;
    s.explicit_maps = {GaussBranch{2}, GaussBranch{3}};
    s.explicit_labels = {2, 3};
    const Cylinder c = cylinder_of(s, word_from_labels(s, {2, 3}));
    // [0; 2, 3 + x] for x in [0, 1]: 3/7 and 4/9
    const auto& iv = std::get<Interval>(c.region);
    EXPECT_NEAR(iv.lo, 3.0 / 7.0, 1e-15);
    EXPECT_NEAR(iv.hi, 4.0 / 9.0, 1e-15);
}

TEST(Words, LabelsResolveThroughTails) {
    const CifsSpec s = build_sharp_family(1.0, 2.0, 0.7);
    const auto last_explicit = s.explicit_label(s.explicit_maps.size() - 1);
    const Word w = word_from_labels(s, {2, last_explicit + 1});
    ASSERT_EQ(w.size(), 2u);
    EXPECT_EQ(w[0].stream, 0);
    EXPECT_EQ(w[1].stream, 1);
    EXPECT_EQ(w[1].k, 0);
    EXPECT_THROW(word_from_labels(s, {1}), DomainError);
    EXPECT_THROW(resolve(s, Letter{0, 100000}), DomainError);
    EXPECT_THROW(resolve(s, Letter{3, 0}), DomainError);
}

TEST(Words, TransformMatchesChainOnNonMoebiusMaps) {
    const MapKind par = ParabolicBranch{0.5, 1};
    const MapKind sim = Similarity{0.3, 0.6};
    const Transform t = Transform{}.then(sim).then(par).then(sim);
    const double x = 0.4;
    EXPECT_NEAR(t(x), apply_map(sim, apply_map(par, apply_map(sim, x))), 1e-15);
    const Interval img = t.image(Interval{0.0, 1.0});
    EXPECT_LE(img.lo, t(0.0) + 1e-15);
    EXPECT_GE(img.hi, t(1.0) - 1e-15);
}

TEST(Maps, ParabolicPowerIsIterate) {
    for (const double q : {0.5, 1.0, 2.0}) {
        const ParabolicBranch one{q, 1};
        double x = 0.8;
        for (std::int64_t n = 1; n <= 20; ++n) {
            x = apply_map(one, x);
            EXPECT_NEAR(apply_map(ParabolicBranch{q, n}, 0.8), x, 1e-13) << "q=" << q << " n=" << n;
        }
    }
}

TEST(Maps, RenyiDigitTwoIsParabolicOrderOne) {
    for (const double x : {0.0, 0.1, 0.5, 1.0})
        EXPECT_NEAR(apply_map(RenyiBranch{2}, x), apply_map(ParabolicBranch{1.0, 1}, x), 1e-15);
}

TEST(Recoding, DigitOneIsReplacedByPairs) {
    const CifsSpec s = gauss_system({1, 2});
    // S_2, S_1 o S_1, S_1 o S_2
    ASSERT_EQ(s.explicit_maps.size(), 3u);
    EXPECT_EQ(s.explicit_label(0), 2);
    EXPECT_EQ(s.explicit_label(1), -1);
    EXPECT_EQ(s.explicit_label(2), -2);
    EXPECT_NEAR(apply_map(s.explicit_maps[2], 0.0), 1.0 / (1.0 + 1.0 / 2.0), 1e-15);
    const auto rep = validate_cifs(s);
    EXPECT_TRUE(rep.cifs_ok());
    EXPECT_LE(rep.xi, 0.25 + 1e-12);
}

TEST(Recoding, InfiniteDigitSetWithOne) {
    const CifsSpec s = gauss_system({}, DigitSet(FullDigits{1}));
    ASSERT_EQ(s.tails.size(), 2u);
    const auto& plain = std::get<GaussTail>(s.tails[0]);
    EXPECT_FALSE(plain.via_one);
    EXPECT_EQ(plain.digits.at(0), 2);
    EXPECT_TRUE(std::get<GaussTail>(s.tails[1]).via_one);
    EXPECT_TRUE(validate_cifs(s).cifs_ok());
}

TEST(Recoding, NoDigitOneLeavesSystemAlone) {
    const CifsSpec s = gauss_system({3, 2, 3});
    ASSERT_EQ(s.explicit_maps.size(), 2u);
    EXPECT_EQ(s.explicit_label(0), 2);
    EXPECT_EQ(s.explicit_label(1), 3);
    EXPECT_THROW(gauss_system({}), ConfigError);
    EXPECT_THROW(gauss_system({0, 2}), ConfigError);
}

TEST(Validate, RenyiAndSharpSystemsPassEveryAxiom) {
    for (const CifsSpec& s : {renyi_parabolic_spec({2, 3}), build_sharp_family(1.8, 2.8, 0.5)}) {
        const auto rep = validate_cifs(s);
        for (const auto& c : rep.checks) EXPECT_TRUE(c.passed) << s.name << ": " << c.axiom << " " << c.detail;
    }
}

TEST(Validate, GaussPairHasOscButNoSeparatingNeighbourhood) {
    CifsSpec s;
    s.explicit_maps = {GaussBranch{2}, GaussBranch{3}};
    const auto rep = validate_cifs(s);
    EXPECT_TRUE(rep.osc);
    EXPECT_TRUE(rep.cifs_ok());
    EXPECT_FALSE(rep.separation);
}

TEST(Validate, FailuresAreReported) {
    CifsSpec neutral;
    neutral.explicit_maps = {GaussBranch{1}, GaussBranch{2}};
    EXPECT_FALSE(validate_cifs(neutral).check("uniform_contraction").passed);

    CifsSpec overlap;
    overlap.explicit_maps = {Similarity{0.6, 0.0}, Similarity{0.6, 0.4}};
    EXPECT_FALSE(validate_cifs(overlap).check("open_set_condition").passed);

    CifsSpec outside;
    outside.explicit_maps = {Similarity{0.5, 0.7}};
    EXPECT_FALSE(validate_cifs(outside).check("maps_into_seed").passed);
}

TEST(Validate, MalformedTailsRaise) {
    CifsSpec s;
    s.tails.push_back(PolynomialTail{1.0, 1.5, 1.0, 2});
    EXPECT_THROW(validate_cifs(s), ConfigError);
    CifsSpec g;
    g.tails.push_back(GeometricTail{0.5, 1.0, 1});
    EXPECT_THROW(validate_cifs(g), ConfigError);
    EXPECT_THROW(validate_cifs(CifsSpec{}), ConfigError);
}

TEST(Parabolic, InductionErrors) {
    EXPECT_THROW(induce_parabolic(1.0, {Similarity{0.2, 0.5}}), ConfigError);
    EXPECT_THROW(induce_parabolic(1.0, {ParabolicBranch{1.0, 1}, ParabolicBranch{1.0, 1}, Similarity{0.1, 0.8}}), ConfigError);
    EXPECT_THROW(induce_parabolic(2.0, {ParabolicBranch{1.0, 1}, Similarity{0.1, 0.8}}), ConfigError);
    EXPECT_THROW(induce_parabolic(1.0, {ParabolicBranch{1.0, 1}}), ConfigError);
    EXPECT_THROW(renyi_parabolic_spec({3, 4}), ConfigError);
    EXPECT_THROW(renyi_branches({1, 2}), ConfigError);
}

TEST(Parabolic, InducedMapsAreIteratesOfTheNeutralBranch) {
    const CifsSpec s = renyi_parabolic_spec({2, 3, 5});
    const auto& tail = std::get<InducedParabolicTail>(s.tails.front());
    ASSERT_EQ(tail.inner.size(), 2u);
    // inner branches sorted by image of 0, descending
    EXPECT_GT(apply_map(tail.inner[0], 0.0), apply_map(tail.inner[1], 0.0));
    const double x = 0.37;
    for (std::int64_t n = 0; n < 5; ++n) {
        for (std::size_t r = 0; r < 2; ++r) {
            double y = apply_map(tail.inner[r], x);
            for (std::int64_t j = 0; j < n; ++j) y = apply_map(RenyiBranch{2}, y);
            EXPECT_NEAR(apply_map(tail_map(s.tails.front(), n * 2 + static_cast<std::int64_t>(r)), x), y, 1e-13);
        }
    }
    EXPECT_TRUE(validate_cifs(s).cifs_ok());
}

TEST(Parabolic, GenericSystemIsValid) {
    for (const double q : {0.5, 1.0, 2.0}) EXPECT_TRUE(validate_cifs(parabolic_system(q)).cifs_ok()) << q;
}

TEST(Cloud, QuarterCantorCloud) {
    const CifsSpec s = quarter_pair();
    const double delta = 1e-3;
    const PointCloud c = build_limit_cloud(s, delta);
    // Cylinders of diameter 4^-n are expanded while > delta: n = 5 leaves 4^-5 < 1e-3.
    EXPECT_EQ(c.size(), 32u);
    for (std::size_t i = 0; i < c.size(); ++i) {
        // every point has a base-4 expansion in digits {0, 3}
        double x = c.x(i);
        for (int d = 0; d < 5; ++d) {
            x *= 4.0;
            const double digit = std::floor(x + 1e-9);
            EXPECT_TRUE(digit == 0.0 || digit == 3.0) << c.x(i);
            x -= digit;
        }
    }
    EXPECT_TRUE(std::is_sorted(c.coords.begin(), c.coords.end()));
}

TEST(Cloud, FixedPointCloudOfSharpFamilyIsPolynomialSequence) {
    const double p = 1.0;
    const CifsSpec s = build_sharp_family(p, 2.0, 0.75);
    const PointCloud c = build_fixed_point_cloud(s, 1e-4);
    ASSERT_GT(c.size(), 10u);
    // Points are 0 and i^-p: the largest ones are 1/2, 1/3, 1/4.
    const auto n = c.size();
    EXPECT_NEAR(c.x(n - 1), 0.5, 1e-15);
    EXPECT_NEAR(c.x(n - 2), 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(c.x(n - 3), 0.25, 1e-15);
    EXPECT_EQ(c.label, CloudLabel::fixed_points);
}

TEST(Cloud, PointsLieInTheirCylinders) {
    const CifsSpec s = renyi_parabolic_spec({2, 3});
    const PointCloud c = build_limit_cloud(s, 1e-4);
    EXPECT_GT(c.size(), 100u);
    for (std::size_t i = 0; i < c.size(); ++i) {
        EXPECT_GE(c.x(i), -1e-12);
        EXPECT_LE(c.x(i), 1.0 + 1e-12);
    }
}

TEST(Cloud, CapAndResolutionErrors) {
    CloudOptions o;
    o.cap = 10;
    EXPECT_THROW(build_limit_cloud(quarter_pair(), 1e-4, o), CapacityError);
    EXPECT_THROW(build_limit_cloud(quarter_pair(), 0.0), DomainError);
    EXPECT_THROW(build_limit_cloud(quarter_pair(), 2.0), DomainError);
}

TEST(Cloud, ComplexGaussCloudStaysInSeedDisc) {
    const CifsSpec s = complex_gauss_system();
    const PointCloud c = build_limit_cloud(s, 2e-2);
    ASSERT_EQ(c.ambient_dim, 2);
    EXPECT_GT(c.size(), 20u);
    for (std::size_t i = 0; i < c.size(); ++i) EXPECT_LE(std::abs(c.z(i) - Complex(0.5, 0.0)), 0.5 + 1e-12);
}
