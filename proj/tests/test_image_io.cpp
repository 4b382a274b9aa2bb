#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "membench/error.hpp"
#include "membench/image_io.hpp"

using namespace membench;

namespace {

void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("image construction and addressing") {
    Image img = Image::make(4, 3, 3, 0.25f);
    CHECK(img.data.size() == 36);
    img.at(2, 1, 2) = 0.5f;
    CHECK(img.data[(2 * 4 + 1) * 3 + 2] == 0.5f);

    CHECK_THROWS_AS(Image::make(0, 2, 1), ParameterError);
    CHECK_THROWS_AS(Image::make(2, 0, 1), ParameterError);
    CHECK_THROWS_AS(Image::make(2, 2, 2), ParameterError);
    CHECK_THROWS_AS(Image::make(100000000, 100000000, 3), ResourceError);
}

TEST_CASE("synthetic patterns") {
    const Image c = synth_image(SynthPattern::Constant, 4, 4, 1);
    for (float v : c.data) CHECK(v == 0.5f);

    const Image imp = synth_image(SynthPattern::Impulse, 5, 5, 1);
    for (std::size_t i = 0; i < 5; ++i) {
        for (std::size_t j = 0; j < 5; ++j) {
            CHECK(imp.at(i, j, 0) == (i == 2 && j == 2 ? 1.0f : 0.0f));
        }
    }

    const Image g = synth_image(SynthPattern::Gradient, 5, 4, 1);
    CHECK(g.at(0, 0, 0) == 0.0f);
    CHECK(g.at(3, 4, 0) == 1.0f);
    CHECK(g.at(0, 4, 0) > g.at(0, 1, 0));

    const Image r1 = synth_image(SynthPattern::Random, 8, 8, 3, 7);
    const Image r2 = synth_image(SynthPattern::Random, 8, 8, 3, 7);
    CHECK(r1.data == r2.data);
    const Image r3 = synth_image(SynthPattern::Random, 8, 8, 3, 8);
    CHECK(r1.data != r3.data);
    for (float v : r1.data) {
        CHECK(v >= 0.0f);
        CHECK(v < 1.0f);
    }

    CHECK(synth_pattern_from_name("impulse") == SynthPattern::Impulse);
    CHECK(std::string(synth_pattern_name(SynthPattern::Random)) == "random");
    CHECK_THROWS_AS(synth_pattern_from_name("noise"), ParameterError);
}

TEST_CASE("ppm decode of a known file") {
    const std::string path = "tmp_decode.ppm";
    std::string bytes = "P6\n2 1\n255\n";
    const unsigned char px[6] = {255, 0, 0, 0, 0, 255};
    bytes.append(reinterpret_cast<const char*>(px), 6);
    write_file(path, bytes);

    const Image img = load_ppm(path);
    CHECK(img.w == 2);
    CHECK(img.h == 1);
    CHECK(img.c == 3);
    const float expect[6] = {255.0f, 0.0f, 0.0f, 0.0f, 0.0f, 255.0f};
    for (std::size_t k = 0; k < 6; ++k) CHECK(img.data[k] == expect[k]);
    std::remove(path.c_str());
}

TEST_CASE("ppm header comments are skipped") {
    const std::string path = "tmp_comment.ppm";
    std::string bytes = "P6 # a comment\n# another\n2 1 # sizes\n255\n";
    bytes.append(6, '\x40');
    write_file(path, bytes);
    const Image img = load_ppm(path);
    CHECK(img.w == 2);
    CHECK(img.data[0] == 64.0f);
    std::remove(path.c_str());
}

TEST_CASE("ppm round trip is byte-identical") {
    Image img = Image::make(7, 5, 3);
    for (std::size_t k = 0; k < img.data.size(); ++k) {
        img.data[k] = static_cast<float>((k * 37) % 256);
    }
    const std::string p1 = "tmp_rt1.ppm";
    const std::string p2 = "tmp_rt2.ppm";
    save_ppm(img, p1);
    const Image back = load_ppm(p1);
    CHECK(back.data == img.data);
    save_ppm(back, p2);
    CHECK(read_file(p1) == read_file(p2));
    std::remove(p1.c_str());
    std::remove(p2.c_str());
}

TEST_CASE("ppm rejects what it cannot represent") {
    const std::string path = "tmp_bad.ppm";

    write_file(path, "P5\n2 1\n255\n@@");
    CHECK_THROWS_AS(load_ppm(path), FormatError);

    write_file(path, "P6\n2 1\n65535\n@@@@@@");
    try {
        load_ppm(path);
        FAIL("expected FormatError");
    } catch (const FormatError& e) {
        CHECK(std::string(e.what()).find("byte") != std::string::npos);
    }

    write_file(path, "P6\n2 1\n255\n@@@");  // 3 of 6 payload bytes
    CHECK_THROWS_AS(load_ppm(path), FormatError);

    write_file(path, "P6\n2 1\n255\n@@@@@@@@");  // trailing junk
    CHECK_THROWS_AS(load_ppm(path), FormatError);

    write_file(path, "P6\n0 1\n255\n");
    CHECK_THROWS_AS(load_ppm(path), FormatError);

    std::remove(path.c_str());
    CHECK_THROWS_AS(load_ppm("no_such_image.ppm"), ResourceError);

    const Image gray = Image::make(2, 2, 1);
    CHECK_THROWS_AS(save_ppm(gray, "tmp_gray.ppm"), FormatError);
}

TEST_CASE("save clamps and rounds to 8 bits") {
    Image img = Image::make(2, 1, 3);
    img.data = {-5.0f, 0.4f, 0.6f, 254.6f, 255.0f, 300.0f};
    const std::string path = "tmp_clamp.ppm";
    save_ppm(img, path);
    const Image back = load_ppm(path);
    const float expect[6] = {0.0f, 0.0f, 1.0f, 255.0f, 255.0f, 255.0f};
    for (std::size_t k = 0; k < 6; ++k) CHECK(back.data[k] == expect[k]);
    std::remove(path.c_str());
}

TEST_CASE("image diff helpers") {
    Image a = synth_image(SynthPattern::Random, 6, 6, 1, 3);
    Image b = a;
    b.at(0, 0, 0) += 0.5f;  // border-only difference
    CHECK(max_abs_diff(a, b) == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(interior_max_abs_diff(a, b, 1) == 0.0f);

    b = a;
    b.at(3, 3, 0) += 0.25f;
    CHECK(interior_max_abs_diff(a, b, 1) == doctest::Approx(0.25).epsilon(1e-6));

    const Image other = Image::make(5, 6, 1);
    CHECK_THROWS_AS(max_abs_diff(a, other), ParameterError);
    // Margin swallowing the whole image: nothing to compare.
    CHECK(interior_max_abs_diff(a, a, 3) == 0.0f);
}
