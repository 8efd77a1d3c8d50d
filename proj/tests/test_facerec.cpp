#include <doctest.h>

#include <cmath>
#include <random>

#include "moto/facerec.hpp"
#include "moto/imaging.hpp"
#include "test_util.hpp"

using namespace moto;
using facerec::FaceDb;
using facerec::FaceTemplate;
using facerec::Histogram;
using facerec::Rect;
using imaging::GrayImage;

namespace {

// Literal transcription of the LBP bit definition, kept independent of the
// library implementation.
std::uint8_t ref_lbp_code(const GrayImage& img, int x, int y) {
    auto sample = [&](int sx, int sy) {
        if (sx < 0) sx = 0;
        if (sx >= img.width) sx = img.width - 1;
        if (sy < 0) sy = 0;
        if (sy >= img.height) sy = img.height - 1;
        return img.at(sx, sy);
    };
    std::uint8_t center = img.at(x, y);
    unsigned code = 0;
    if (sample(x - 1, y - 1) >= center) code += 128; // top-left
    if (sample(x, y - 1) >= center) code += 64;      // top
    if (sample(x + 1, y - 1) >= center) code += 32;  // top-right
    if (sample(x + 1, y) >= center) code += 16;      // right
    if (sample(x + 1, y + 1) >= center) code += 8;   // bottom-right
    if (sample(x, y + 1) >= center) code += 4;       // bottom
    if (sample(x - 1, y + 1) >= center) code += 2;   // bottom-left
    if (sample(x - 1, y) >= center) code += 1;       // left
    return static_cast<std::uint8_t>(code);
}

// Reference template pipeline built from scratch: literal floor-mapped
// resize, the reference LBP, per-cell counting, /256 normalization.
std::vector<std::vector<double>> ref_template_grid(const GrayImage& img) {
    GrayImage scaled{128, 128, std::vector<std::uint8_t>(128 * 128)};
    for (int y = 0; y < 128; ++y)
        for (int x = 0; x < 128; ++x)
            scaled.at(x, y) = img.at(static_cast<int>(std::floor(x * double(img.width) / 128.0)),
                                     static_cast<int>(std::floor(y * double(img.height) / 128.0)));
    std::vector<std::vector<double>> grid;
    for (int gy = 0; gy < 8; ++gy) {
        for (int gx = 0; gx < 8; ++gx) {
            std::vector<double> hist(256, 0.0);
            for (int y = gy * 16; y < gy * 16 + 16; ++y)
                for (int x = gx * 16; x < gx * 16 + 16; ++x)
                    hist[ref_lbp_code(scaled, x, y)] += 1.0 / 256.0;
            grid.push_back(hist);
        }
    }
    return grid;
}

double ref_grid_distance(const std::vector<std::vector<double>>& a,
                         const std::vector<std::vector<double>>& b) {
    double total = 0.0;
    for (std::size_t cell = 0; cell < a.size(); ++cell)
        for (std::size_t bin = 0; bin < a[cell].size(); ++bin) {
            double sum = a[cell][bin] + b[cell][bin];
            if (sum > 0.0)
                total += (a[cell][bin] - b[cell][bin]) * (a[cell][bin] - b[cell][bin]) / sum;
        }
    return total;
}

Histogram unit_bin(int bin) {
    Histogram h(256, 0.0);
    h[static_cast<std::size_t>(bin)] = 1.0;
    return h;
}

FaceTemplate uniform_template(const std::string& label, int bin) {
    FaceTemplate tpl;
    tpl.label = label;
    tpl.grid.assign(64, unit_bin(bin));
    return tpl;
}

} // namespace

TEST_CASE("detect_face defaults to the whole frame") {
    CHECK(facerec::detect_face(testutil::constant_image(128, 128, 5)) == Rect{0, 0, 128, 128});
    CHECK(facerec::detect_face(testutil::constant_image(64, 32, 5)) == Rect{0, 0, 64, 32});
    CHECK(facerec::detect_face(testutil::constant_image(1, 1, 5)) == Rect{0, 0, 1, 1});
}

TEST_CASE("lbp_map on a constant image is all 255") {
    auto lbp = facerec::lbp_map(testutil::constant_image(5, 4, 17));
    CHECK(lbp.width == 5);
    CHECK(lbp.height == 4);
    for (auto code : lbp.codes) CHECK(code == 255);
}

TEST_CASE("lbp_map center codes") {
    GrayImage cross{3, 3, {9, 1, 1, 1, 5, 1, 1, 1, 9}};
    CHECK(facerec::lbp_map(cross).at(1, 1) == 136);

    GrayImage peak{3, 3, {1, 1, 1, 1, 9, 1, 1, 1, 1}};
    CHECK(facerec::lbp_map(peak).at(1, 1) == 0);
}

TEST_CASE("lbp_map matches the brute-force reference on random images") {
    std::mt19937 rng(1234);
    std::uniform_int_distribution<int> dim(1, 16);
    for (int i = 0; i < 100; ++i) {
        GrayImage img = testutil::random_image(rng, dim(rng), dim(rng));
        auto lbp = facerec::lbp_map(img);
        REQUIRE(lbp.width == img.width);
        REQUIRE(lbp.height == img.height);
        for (int y = 0; y < img.height; ++y)
            for (int x = 0; x < img.width; ++x)
                CHECK(lbp.at(x, y) == ref_lbp_code(img, x, y));
    }
}

TEST_CASE("extract_template of a constant image concentrates on bin 255") {
    auto tpl = facerec::extract_template(testutil::constant_image(128, 128, 80),
                                         Rect{0, 0, 128, 128}, "owner");
    REQUIRE(tpl.grid.size() == 64);
    for (const auto& hist : tpl.grid) {
        CHECK(hist[255] == doctest::Approx(1.0));
        double sum = 0.0;
        for (double b : hist) sum += b;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("extract_template histograms sum to 1") {
    std::mt19937 rng(99);
    GrayImage img = testutil::random_image(rng, 37, 61);
    auto tpl = facerec::extract_template(img, facerec::detect_face(img), "x");
    for (const auto& hist : tpl.grid) {
        double sum = 0.0;
        for (double b : hist) sum += b;
        CHECK(std::abs(sum - 1.0) <= 1e-9);
    }
}

TEST_CASE("template of a crop equals template of the pre-cropped image") {
    std::mt19937 rng(5);
    GrayImage img = testutil::random_image(rng, 40, 30);
    Rect face{8, 4, 20, 22};

    GrayImage cropped{face.w, face.h, {}};
    for (int y = 0; y < face.h; ++y)
        for (int x = 0; x < face.w; ++x)
            cropped.data.push_back(img.at(face.x + x, face.y + y));

    auto a = facerec::extract_template(img, face, "a");
    auto b = facerec::extract_template(cropped, Rect{0, 0, face.w, face.h}, "a");
    CHECK(facerec::template_distance(a, b) == doctest::Approx(0.0));
}

TEST_CASE("extract_template rejects empty labels") {
    GrayImage img = testutil::constant_image(4, 4, 1);
    CHECK_THROWS_AS(facerec::extract_template(img, Rect{0, 0, 4, 4}, ""), Error);
}

TEST_CASE("chi_square") {
    Histogram h = unit_bin(3);
    CHECK(facerec::chi_square(h, h) == 0.0);
    CHECK(facerec::chi_square(unit_bin(0), unit_bin(1)) == doctest::Approx(2.0));

    Histogram a(256, 0.0), b(256, 0.0);
    a[0] = 0.5;
    a[1] = 0.5;
    b[0] = 0.25;
    b[1] = 0.75;
    double expected = 0.0625 / 0.75 + 0.0625 / 1.25;
    CHECK(facerec::chi_square(a, b) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(facerec::chi_square(a, b) == doctest::Approx(0.13333).epsilon(1e-4));
    CHECK(facerec::chi_square(a, b) == facerec::chi_square(b, a));

    CHECK_THROWS_AS(facerec::chi_square(Histogram(256, 0.0), Histogram(255, 0.0)), Error);
}

TEST_CASE("template_distance") {
    auto t0 = uniform_template("a", 0);
    CHECK(facerec::template_distance(t0, t0) == 0.0);

    auto t1 = uniform_template("b", 1);
    CHECK(facerec::template_distance(t0, t1) == doctest::Approx(128.0));
    CHECK(facerec::template_distance(t0, t1) == facerec::template_distance(t1, t0));
}

TEST_CASE("template_distance agrees with the reference pipeline") {
    GrayImage a = testutil::horizontal_gradient(32, 32);
    GrayImage b = testutil::vertical_gradient(32, 32);
    auto ta = facerec::extract_template(a, facerec::detect_face(a), "a");
    auto tb = facerec::extract_template(b, facerec::detect_face(b), "b");
    double ref = ref_grid_distance(ref_template_grid(a), ref_template_grid(b));
    CHECK(facerec::template_distance(ta, tb) == doctest::Approx(ref).epsilon(1e-9));
}

TEST_CASE("enroll") {
    GrayImage img = testutil::horizontal_gradient(16, 16);
    FaceDb db = facerec::enroll(FaceDb{}, "alice", img);
    CHECK(db.templates.size() == 1);

    CHECK_THROWS_AS(facerec::enroll(db, "alice", img), Error);

    db = facerec::enroll(db, "bob", testutil::vertical_gradient(16, 16));
    REQUIRE(db.templates.size() == 2);
    CHECK(db.templates[0].label == "alice");
    CHECK(db.templates[1].label == "bob");
}

TEST_CASE("identify an enrolled image matches at distance zero") {
    GrayImage img = testutil::horizontal_gradient(24, 24);
    FaceDb db = facerec::enroll(FaceDb{}, "owner", img);
    auto result = facerec::identify(db, img, 1.0);
    CHECK(result.matched);
    CHECK(result.label == "owner");
    CHECK(*result.distance == 0.0);
}

TEST_CASE("identify against an empty database is NoMatch") {
    auto result = facerec::identify(FaceDb{}, testutil::constant_image(8, 8, 3), 1.0);
    CHECK_FALSE(result.matched);
    CHECK_FALSE(result.distance.has_value());
}

TEST_CASE("identify rejects a different texture at threshold 0.5") {
    GrayImage a = testutil::horizontal_gradient(64, 64);
    GrayImage b = testutil::vertical_gradient(64, 64);
    double ref = ref_grid_distance(ref_template_grid(a), ref_template_grid(b));
    REQUIRE(ref > 0.5); // independent reference confirms the gap
    FaceDb db = facerec::enroll(FaceDb{}, "owner", a);
    auto result = facerec::identify(db, b, 0.5);
    CHECK_FALSE(result.matched);
    REQUIRE(result.distance.has_value());
    CHECK(*result.distance == doctest::Approx(ref).epsilon(1e-9));
}

TEST_CASE("identify ties break toward earliest enrollment") {
    GrayImage img = testutil::horizontal_gradient(16, 16);
    FaceDb db = facerec::enroll(FaceDb{}, "first", img);
    db = facerec::enroll(db, "second", img);
    auto result = facerec::identify(db, img, 1.0);
    CHECK(result.matched);
    CHECK(result.label == "first");
}

TEST_CASE("identify match is monotone in the threshold") {
    std::mt19937 rng(31337);
    FaceDb db = facerec::enroll(FaceDb{}, "a", testutil::random_image(rng, 16, 16));
    db = facerec::enroll(db, "b", testutil::random_image(rng, 16, 16));
    for (int i = 0; i < 10; ++i) {
        GrayImage probe = testutil::random_image(rng, 16, 16);
        auto wide = facerec::identify(db, probe, 1e9);
        REQUIRE(wide.matched);
        double d = *wide.distance;
        auto below = facerec::identify(db, probe, d * 0.999);
        auto at = facerec::identify(db, probe, d);
        auto above = facerec::identify(db, probe, d * 1.001);
        CHECK_FALSE(below.matched);
        CHECK(at.matched);
        CHECK(above.matched);
        CHECK(at.label == wide.label);
        CHECK(above.label == wide.label);
    }
}
