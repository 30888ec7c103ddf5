#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "cifs/cifs.hpp"

using namespace cifs;
namespace fs = std::filesystem;

namespace {

std::size_t count_of(const std::string& s, const std::string& needle) {
    std::size_t n = 0;
    for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
    return n;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::vector<std::string> polyline_points(const std::string& svg) {
    std::vector<std::string> out;
    const std::regex re("points=\"([^\"]*)\"");
    for (auto it = std::sregex_iterator(svg.begin(), svg.end(), re); it != std::sregex_iterator(); ++it) out.push_back((*it)[1]);
    return out;
}

}  // namespace

TEST(Svg, EmptyListIsAnError) {
    EXPECT_THROW(emit_svg({}), DomainError);
    EXPECT_THROW(emit_svg({SpectrumCurve{}}), DomainError);
}

TEST(Svg, ConstantCurveIsOneHorizontalPolyline) {
    const SpectrumCurve c = sample_curve(uniform_grid(0.1, 0.9, 9), [](double) { return 0.5; });
    const std::string svg = emit_svg({c});
    ASSERT_EQ(count_of(svg, "<polyline"), 1u);
    const auto pts = polyline_points(svg).front();
    std::set<std::string> ys;
    std::stringstream ss(pts);
    std::string xy;
    while (ss >> xy) ys.insert(xy.substr(xy.find(',') + 1));
    EXPECT_EQ(ys.size(), 1u);
    EXPECT_NE(svg.find(">formula<"), std::string::npos);  // legend from provenance
}

TEST(Svg, MismatchedGridsUseTheUnionGrid) {
    const SpectrumCurve a = sample_curve({0.1, 0.5, 0.9}, [](double th) { return th; });
    SpectrumCurve b = sample_curve({0.2, 0.4}, [](double) { return 0.3; }, Provenance::estimate);
    const std::string svg = emit_svg({a, b});
    const auto pls = polyline_points(svg);
    ASSERT_EQ(pls.size(), 2u);
    for (const auto& p : pls) EXPECT_EQ(count_of(p, ","), 5u);
}

TEST(Svg, UndefinedValuesAreSkippedAndOutputIsDeterministic) {
    SpectrumCurve c = sample_curve({0.1, 0.2, 0.3}, [](double th) { return th; });
    c.values[1] = std::nan("");
    const std::string s1 = emit_svg({c});
    EXPECT_EQ(count_of(polyline_points(s1).front(), ","), 2u);
    EXPECT_EQ(s1, emit_svg({c}));
}

TEST(Svg, PlanarCurvesUseTwoDimensionalAxis) {
    auto f = formula_curve(make_family("complex-cf", {{"h", 1.8558}}), uniform_grid(0.1, 0.9, 5));
    f.metadata["ambient_dim"] = "2";
    const std::string svg = emit_svg({f});
    EXPECT_NE(svg.find(">2</text>"), std::string::npos);
}

TEST(Comparison, PassFlagRequiresToleranceAndSandwich) {
    const std::vector<double> g{0.2, 0.4, 0.6, 0.8};
    const SpectrumCurve formula = sample_curve(g, [](double) { return 0.5; });
    BoundEnvelope env{sample_curve(g, [](double) { return 0.45; }, Provenance::lower_bound),
                      sample_curve(g, [](double) { return 0.52; }, Provenance::upper_bound)};
    SpectrumCurve est = sample_curve(g, [](double) { return 0.5; }, Provenance::estimate);
    est.values = {0.5, 0.56, 0.3, std::nan("")};
    const auto t = compare_curves(formula, env, est, 0.07);
    EXPECT_TRUE(t.rows[0].pass);
    EXPECT_TRUE(t.rows[1].pass);   // 0.06 off and 0.04 above the upper bound
    EXPECT_FALSE(t.rows[2].pass);  // 0.2 off
    EXPECT_FALSE(t.rows[3].pass);  // undefined
    EXPECT_FALSE(t.all_pass());
    EXPECT_NEAR(t.max_deviation, 0.2, 1e-15);
    EXPECT_EQ(t.passed(), 2u);
    const std::string csv = comparison_csv(t);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "theta,formula,lower,upper,estimate,pass");
    EXPECT_NE(csv.find("0.8,0.5,0.45,0.52,nan,0"), std::string::npos);
}

TEST(Comparison, CurvesCsvResamplesToUnionGrid) {
    const SpectrumCurve a = sample_curve({0.25, 0.75}, [](double th) { return th; });
    const SpectrumCurve b = sample_curve({0.5}, [](double) { return 1.0; });
    EXPECT_EQ(curves_csv({a, b}, {"a", "b"}), "theta,a,b\n0.25,0.25,1\n0.5,0.5,1\n0.75,0.75,1\n");
    EXPECT_THROW(curves_csv({a}, {"a", "b"}), DomainError);
}

TEST(Pipeline, PolynomialSequenceWithinTolerance) {
    RunConfig cfg;
    cfg.family = "fp";
    cfg.params = {{"p", 1.0}};
    cfg.delta = 1e-6;
    cfg.out_dir = fs::temp_directory_path() / "cifs_test_pipeline" / "fp";
    const auto r = run_pipeline(cfg);
    EXPECT_LE(r.table.max_deviation, 0.07);
    EXPECT_EQ(r.h_source, "supplied");
    for (const char* k : {"cloud", "curves", "overlay", "summary"}) EXPECT_TRUE(fs::exists(r.files.at(k))) << k;
    const std::string csv1 = slurp(r.files.at("curves")), svg1 = slurp(r.files.at("overlay"));
    run_pipeline(cfg);
    EXPECT_EQ(slurp(r.files.at("curves")), csv1);
    EXPECT_EQ(slurp(r.files.at("overlay")), svg1);
    const auto j = nlohmann::json::parse(slurp(r.files.at("summary")));
    EXPECT_EQ(j.at("family"), "fp");
    EXPECT_EQ(j.at("rows_total"), cfg.grid_size);
}

TEST(Pipeline, StageErrorsCarryTheStageName) {
    RunConfig cfg;
    cfg.out_dir = fs::temp_directory_path() / "cifs_test_pipeline" / "err";
    cfg.family = "nope";
    try {
        run_pipeline(cfg);
        FAIL() << "expected a StageError";
    } catch (const StageError& e) {
        EXPECT_EQ(e.stage(), "config");
        EXPECT_TRUE(e.config());
    }
    cfg.family = "sharp";
    cfg.params = {{"p", 1.8}, {"t", 3.6}};
    try {
        run_pipeline(cfg);
        FAIL() << "expected a StageError";
    } catch (const StageError& e) {
        EXPECT_EQ(e.stage(), "spec");
        EXPECT_TRUE(e.config());
    }
    cfg.params = {{"p", 1.8}, {"t", 3.6}, {"h", 0.5}};
    cfg.delta = 1e-13;
    try {
        run_pipeline(cfg);
        FAIL() << "expected a StageError";
    } catch (const StageError& e) {
        EXPECT_EQ(e.stage(), "cloud");
        EXPECT_TRUE(e.config());
    }
}
