#include "wshrink/wavelet.hpp"

#include "wshrink/errors.hpp"
#include "support.hpp"

#include "doctest.h"

#include <filesystem>
#include <fstream>

using namespace wshrink;
using testsupport::random_image;

TEST_CASE("constant image has zero details and constant scaling") {
    const WaveletPyramid pyr = analyze(Image(20, 12, 128.0), 3);
    REQUIRE(pyr.levels() == 3);
    for (const auto& t : pyr.detail) {
        for (double v : t.x.pixels) CHECK(v == 0.0);
        for (double v : t.y.pixels) CHECK(v == 0.0);
        for (double v : t.xy.pixels) CHECK(v == 0.0);
    }
    for (double v : pyr.scaling.pixels) CHECK(v == 128.0);
}

TEST_CASE("vertical stripes against the periodic-convolution oracle") {
    Image img(16, 8);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) img.at(x, y) = (x % 2 == 0) ? 0.0 : 200.0;

    const WaveletPyramid pyr = analyze(img, 1);
    const auto oracle = testsupport::haar_level_oracle(img, 1);
    CHECK(max_abs_diff(pyr.scaling, oracle.approx) == 0.0);
    CHECK(max_abs_diff(pyr.detail[0].x, oracle.wx) == 0.0);
    CHECK(max_abs_diff(pyr.detail[0].y, oracle.wy) == 0.0);
    CHECK(max_abs_diff(pyr.detail[0].xy, oracle.wxy) == 0.0);

    // hand values: a1 = 100, w_x alternates -100/+100 with x parity
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            CHECK(pyr.scaling.at(x, y) == 100.0);
            CHECK(pyr.detail[0].x.at(x, y) == (x % 2 == 0 ? -100.0 : 100.0));
            CHECK(pyr.detail[0].y.at(x, y) == 0.0);
            CHECK(pyr.detail[0].xy.at(x, y) == 0.0);
        }
}

TEST_CASE("every analysis level matches the direct oracle") {
    const Image img = random_image(24, 20, 31);
    const int levels = 3;
    const WaveletPyramid pyr = analyze(img, levels);
    Image a = img;
    for (int l = 1; l <= levels; ++l) {
        const auto oracle = testsupport::haar_level_oracle(a, 1 << (l - 1));
        CHECK(max_abs_diff(pyr.detail[l - 1].x, oracle.wx) < 1e-12);
        CHECK(max_abs_diff(pyr.detail[l - 1].y, oracle.wy) < 1e-12);
        CHECK(max_abs_diff(pyr.detail[l - 1].xy, oracle.wxy) < 1e-12);
        a = oracle.approx;
    }
    CHECK(max_abs_diff(pyr.scaling, a) < 1e-12);
}

TEST_CASE("perfect reconstruction on assorted sizes") {
    int cases = 0;
    for (auto [w, h] : {std::pair{32, 32}, {96, 64}, {7, 5}, {33, 17}, {81, 47}}) {
        for (int levels = 1; levels <= 4; ++levels) {
            const Image img = random_image(w, h, 100 + static_cast<std::uint64_t>(cases++));
            const Image back = synthesize(analyze(img, levels));
            CHECK(max_abs_diff(img, back) <= 1e-10);
        }
    }
}

TEST_CASE("zeroed details reproduce the lowpass branch of the round trip") {
    const Image img = random_image(40, 24, 8);
    WaveletPyramid pyr = analyze(img, 3);
    for (auto& t : pyr.detail) {
        t.x = Image(img.width, img.height, 0.0);
        t.y = Image(img.width, img.height, 0.0);
        t.xy = Image(img.width, img.height, 0.0);
    }
    const Image result = synthesize(pyr);
    const Image expected = testsupport::lowpass_roundtrip_oracle(img, 3);
    CHECK(max_abs_diff(result, expected) <= 1e-10);
}

TEST_CASE("shift equivariance is exact") {
    const Image img = random_image(21, 14, 55);
    for (auto [dx, dy] : {std::pair{1, 0}, {0, 3}, {5, 9}, {-2, 4}}) {
        const WaveletPyramid base = analyze(img, 3);
        const WaveletPyramid shifted = analyze(testsupport::shift_image(img, dx, dy), 3);
        for (int l = 0; l < 3; ++l) {
            CHECK(max_abs_diff(shifted.detail[l].x,
                               testsupport::shift_image(base.detail[l].x, dx, dy)) == 0.0);
            CHECK(max_abs_diff(shifted.detail[l].y,
                               testsupport::shift_image(base.detail[l].y, dx, dy)) == 0.0);
            CHECK(max_abs_diff(shifted.detail[l].xy,
                               testsupport::shift_image(base.detail[l].xy, dx, dy)) == 0.0);
        }
        CHECK(max_abs_diff(shifted.scaling, testsupport::shift_image(base.scaling, dx, dy)) == 0.0);
    }
}

TEST_CASE("grey shift moves only the scaling plane") {
    const Image img = random_image(18, 18, 4);
    Image shifted = img;
    for (double& v : shifted.pixels) v += 40.0;
    const WaveletPyramid a = analyze(img, 3);
    const WaveletPyramid b = analyze(shifted, 3);
    for (int l = 0; l < 3; ++l) {
        CHECK(max_abs_diff(a.detail[l].x, b.detail[l].x) <= 1e-10);
        CHECK(max_abs_diff(a.detail[l].y, b.detail[l].y) <= 1e-10);
        CHECK(max_abs_diff(a.detail[l].xy, b.detail[l].xy) <= 1e-10);
    }
    for (std::size_t i = 0; i < a.scaling.size(); ++i)
        CHECK(b.scaling.pixels[i] - a.scaling.pixels[i] == doctest::Approx(40.0).epsilon(1e-13));
}

TEST_CASE("analysis is linear") {
    const Image f = random_image(16, 12, 71);
    const Image g = random_image(16, 12, 72);
    const double a = 0.7, b = -1.3;
    Image combo(16, 12);
    for (std::size_t i = 0; i < combo.size(); ++i)
        combo.pixels[i] = a * f.pixels[i] + b * g.pixels[i];

    const WaveletPyramid pf = analyze(f, 3);
    const WaveletPyramid pg = analyze(g, 3);
    const WaveletPyramid pc = analyze(combo, 3);
    double worst = 0.0;
    const auto track = [&](const Image& c, const Image& pa, const Image& pb) {
        for (std::size_t i = 0; i < c.size(); ++i)
            worst = std::max(worst,
                             std::abs(c.pixels[i] - (a * pa.pixels[i] + b * pb.pixels[i])));
    };
    for (int l = 0; l < 3; ++l) {
        track(pc.detail[l].x, pf.detail[l].x, pg.detail[l].x);
        track(pc.detail[l].y, pf.detail[l].y, pg.detail[l].y);
        track(pc.detail[l].xy, pf.detail[l].xy, pg.detail[l].xy);
    }
    track(pc.scaling, pf.scaling, pg.scaling);
    CHECK(worst <= 1e-12);
}

TEST_CASE("coefficients of [0,255] images stay in [-255, 255]") {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const Image img = random_image(33, 21, 200 + seed);
        const WaveletPyramid pyr = analyze(img, 4);
        const auto in_range = [](const Image& p) {
            for (double v : p.pixels)
                if (v < -255.0 || v > 255.0) return false;
            return true;
        };
        for (const auto& t : pyr.detail) {
            CHECK(in_range(t.x));
            CHECK(in_range(t.y));
            CHECK(in_range(t.xy));
        }
        CHECK(in_range(pyr.scaling));
        for (double v : pyr.scaling.pixels) CHECK(v >= 0.0);
    }
}

TEST_CASE("analyze validates levels") {
    CHECK_THROWS_AS(analyze(Image(8, 8, 0.0), 0), ValidationError);
    CHECK_THROWS_AS(analyze(Image(8, 8, 0.0), -3), ValidationError);
}

TEST_CASE("default_levels follows image size") {
    CHECK(default_levels(256, 256) == 8);
    CHECK(default_levels(128, 128) == 7);
    CHECK(default_levels(481, 321) == 8);
    CHECK(default_levels(48, 700) == 5);
}

TEST_CASE("synthesize rejects inconsistent pyramids") {
    WaveletPyramid pyr = analyze(random_image(16, 16, 1), 2);
    pyr.detail[1].y = Image(8, 8, 0.0);
    CHECK_THROWS_AS(synthesize(pyr), ValidationError);
}

TEST_CASE("dump_pyramid writes planes and a manifest") {
    const auto dir = std::filesystem::temp_directory_path() / "wshrink_dump";
    std::filesystem::remove_all(dir);
    const WaveletPyramid pyr = analyze(random_image(16, 16, 9), 2);
    dump_pyramid(pyr, dir.string());
    CHECK(std::filesystem::exists(dir / "wx_1.pgm"));
    CHECK(std::filesystem::exists(dir / "wxy_2.pgm"));
    CHECK(std::filesystem::exists(dir / "scaling.pgm"));
    std::ifstream manifest(dir / "manifest.txt");
    REQUIRE(manifest.good());
    std::string line;
    int lines = 0;
    while (std::getline(manifest, line)) {
        ++lines;
        CHECK(line.find("min=") != std::string::npos);
        CHECK(line.find("max=") != std::string::npos);
    }
    CHECK(lines == 7); // 3 planes x 2 levels + scaling
    std::filesystem::remove_all(dir);
}
