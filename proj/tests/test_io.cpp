#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "cifs/cifs.hpp"

using namespace cifs;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / "cifs_test_io";
    fs::create_directories(d);
    return d / name;
}

}  // namespace

TEST(CloudIo, BinaryRoundTrip) {
    const PointCloud c = build_limit_cloud(renyi_parabolic_spec({2, 3}), 1e-4);
    const auto path = scratch("renyi.bin");
    write_cloud(path, c);
    EXPECT_FALSE(fs::exists(path.string() + ".tmp"));
    const PointCloud back = read_cloud(path);
    EXPECT_EQ(back.ambient_dim, 1);
    EXPECT_EQ(back.delta, c.delta);
    EXPECT_EQ(back.label, CloudLabel::limit_set);
    EXPECT_EQ(back.coords, c.coords);
    EXPECT_EQ(fs::file_size(path), 40u + 8u * c.coords.size());
}

TEST(CloudIo, PlanarRoundTripKeepsLabel) {
    PointCloud c = PointCloud::from_points_2d({{0.1, 0.2}, {0.3, -0.4}}, 1e-3);
    c.label = CloudLabel::fixed_points;
    const PointCloud back = decode_cloud(encode_cloud(c));
    EXPECT_EQ(back.ambient_dim, 2);
    EXPECT_EQ(back.label, CloudLabel::fixed_points);
    EXPECT_EQ(back.coords, c.coords);
}

TEST(CloudIo, HeaderIsLittleEndian) {
    const std::string b = encode_cloud(PointCloud::from_points_1d({0.5}, 0.25));
    ASSERT_EQ(b.size(), 48u);
    EXPECT_EQ(b.substr(0, 6), "CIFSPC");
    EXPECT_EQ(static_cast<unsigned char>(b[8]), 1u);   // version
    EXPECT_EQ(static_cast<unsigned char>(b[12]), 1u);  // dimension
    EXPECT_EQ(static_cast<unsigned char>(b[32]), 1u);  // one point
}

TEST(CloudIo, CorruptFilesAreRejected) {
    const std::string good = encode_cloud(PointCloud::from_points_1d({0.1, 0.2}, 1e-3));
    EXPECT_THROW(decode_cloud("nonsense"), ConfigError);
    EXPECT_THROW(decode_cloud(good.substr(0, good.size() - 3)), ConfigError);
    std::string v2 = good;
    v2[8] = 2;
    EXPECT_THROW(decode_cloud(v2), ConfigError);
    EXPECT_THROW(read_cloud(scratch("missing.bin")), ConfigError);
}

TEST(CloudIo, CsvHasHeader) {
    const std::string csv = cloud_csv(PointCloud::from_points_1d({0.25, 0.5}));
    EXPECT_EQ(csv, "x\n0.25\n0.5\n");
    EXPECT_EQ(cloud_csv(PointCloud::from_points_2d({{0.5, 1.0}})), "x,y\n0.5,1\n");
}

TEST(SpecJson, ShippedSamplesLoad) {
    std::size_t n = 0;
    for (const auto& e : fs::directory_iterator(fs::path(CIFS_DOCS_DIR) / "specs")) {
        if (e.path().extension() != ".json") continue;
        ++n;
        EXPECT_NO_THROW(load_spec_file(e.path().string())) << e.path();
    }
    EXPECT_GE(n, 10u);
}

TEST(SpecJson, SimilarityListDimension) {
    const auto s = load_spec_file((fs::path(CIFS_DOCS_DIR) / "specs" / "similarity_pair.json").string());
    EXPECT_EQ(s.spec.name, "quarter-pair");
    EXPECT_NEAR(hausdorff_dimension(s.spec).value, 0.5, 1e-9);
}

TEST(SpecJson, KindsBuildExpectedSystems) {
    const auto g = spec_from_json_text(R"({"kind": "gauss_digits", "digits": [1, 3]})");
    EXPECT_EQ(g.spec.explicit_maps.size(), 3u);  // S_3, S_1 o S_1, S_1 o S_3
    const auto sp = spec_from_json_text(R"({"kind": "gauss_digits", "infinite": {"type": "spaced", "p": 2}})");
    ASSERT_EQ(sp.spec.tails.size(), 1u);
    EXPECT_EQ(std::get<GaussTail>(sp.spec.tails[0]).digits.at(0), 4);
    const auto fp = spec_from_json_text(R"({"kind": "sharp_family", "p": 1, "t": 2, "h": 0.7, "cloud": "fixed_points"})");
    EXPECT_EQ(fp.cloud, CloudKind::fixed_points);
    const auto par = spec_from_json_text(R"({"kind": "parabolic", "q": 1, "maps": [{"ratio": 0.2, "offset": 0.7}]})");
    EXPECT_EQ(std::get<InducedParabolicTail>(par.spec.tails[0]).inner.size(), 1u);
    const auto pt = spec_from_json_text(R"({"kind": "polynomial_tail", "tail": {"p": 1, "t": 2.5, "coef": 0.5}})");
    EXPECT_DOUBLE_EQ(std::get<PolynomialTail>(pt.spec.tails[0]).coef, 0.5);
    EXPECT_EQ(spec_from_json_text(R"({"kind": "complex_gauss"})").spec.ambient_dim, 2);
}

TEST(SpecJson, ErrorsAreConfigErrors) {
    const char* bad[] = {
        "{not json",
        "[1, 2]",
        R"({"maps": []})",
        R"({"kind": "mystery"})",
        R"({"kind": "similarity_list"})",
        R"({"kind": "similarity_list", "maps": []})",
        R"({"kind": "similarity_list", "maps": [{"ratio": "half", "offset": 0}]})",
        R"({"kind": "sharp_family", "p": 1, "t": 1.5, "h": 0.7})",
        R"({"kind": "polynomial_tail", "tail": {"p": 1, "t": 1.5}})",
        R"({"kind": "gauss_digits", "infinite": {"type": "odd"}})",
        R"({"kind": "gauss_digits", "digits": [2.5]})",
        R"({"kind": "renyi_parabolic", "digits": [3, 4]})",
        R"({"kind": "parabolic", "q": -1})",
        R"({"kind": "complex_gauss", "cloud": "everything"})",
        R"({"kind": "complex_gauss", "name": 5})",
    };
    for (const char* text : bad) EXPECT_THROW(spec_from_json_text(text), ConfigError) << text;
    EXPECT_THROW(load_spec_file(scratch("absent.json").string()), ConfigError);
}

TEST(AtomicWrite, ReplacesExistingFile) {
    const auto path = scratch("sub/dir/out.txt");
    atomic_write(path, "first");
    atomic_write(path, "second");
    std::ifstream in(path);
    std::string s;
    std::getline(in, s);
    EXPECT_EQ(s, "second");
    EXPECT_FALSE(fs::exists(path.string() + ".tmp"));
}
