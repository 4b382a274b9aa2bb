#include "membench/image_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <new>
#include <random>

#include "membench/error.hpp"

namespace membench {

Image Image::make(std::size_t w, std::size_t h, std::size_t c, float fill) {
    if (w == 0 || h == 0) throw ParameterError("image dimensions must be positive");
    if (c != 1 && c != 3) throw ParameterError("channel count must be 1 or 3");
    const std::size_t limit = std::numeric_limits<std::size_t>::max();
    if (h > limit / w || h * w > limit / c) {
        throw ResourceError("cannot allocate " + std::to_string(w) + "x" + std::to_string(h) +
                            "x" + std::to_string(c) + " image");
    }
    Image img;
    img.w = w;
    img.h = h;
    img.c = c;
    try {
        img.data.assign(w * h * c, fill);
    } catch (const std::bad_alloc&) {
        throw ResourceError("cannot allocate " + std::to_string(w) + "x" + std::to_string(h) +
                            "x" + std::to_string(c) + " image");
    } catch (const std::length_error&) {
        throw ResourceError("cannot allocate " + std::to_string(w) + "x" + std::to_string(h) +
                            "x" + std::to_string(c) + " image");
    }
    return img;
}

SynthPattern synth_pattern_from_name(const std::string& name) {
    if (name == "constant") return SynthPattern::Constant;
    if (name == "impulse") return SynthPattern::Impulse;
    if (name == "gradient") return SynthPattern::Gradient;
    if (name == "random") return SynthPattern::Random;
    throw ParameterError("unknown synthetic pattern: " + name +
                         " (expected constant|impulse|gradient|random)");
}

const char* synth_pattern_name(SynthPattern pattern) {
    switch (pattern) {
        case SynthPattern::Constant: return "constant";
        case SynthPattern::Impulse: return "impulse";
        case SynthPattern::Gradient: return "gradient";
        case SynthPattern::Random: return "random";
    }
    throw ParameterError("unknown synthetic pattern");
}

Image synth_image(SynthPattern pattern, std::size_t w, std::size_t h, std::size_t c,
                  std::uint64_t seed, float value) {
    switch (pattern) {
        case SynthPattern::Constant: return Image::make(w, h, c, value);
        case SynthPattern::Impulse: {
            Image img = Image::make(w, h, c, 0.0f);
            for (std::size_t ch = 0; ch < c; ++ch) img.at(h / 2, w / 2, ch) = 1.0f;
            return img;
        }
        case SynthPattern::Gradient: {
            Image img = Image::make(w, h, c);
            const double denom = std::max<std::size_t>(1, (h - 1) + (w - 1));
            for (std::size_t i = 0; i < h; ++i) {
                for (std::size_t j = 0; j < w; ++j) {
                    const float v = static_cast<float>(static_cast<double>(i + j) / denom);
                    for (std::size_t ch = 0; ch < c; ++ch) img.at(i, j, ch) = v;
                }
            }
            return img;
        }
        case SynthPattern::Random: {
            Image img = Image::make(w, h, c);
            // mt19937 output is pinned by the standard, and the 24-bit
            // conversion below avoids distribution objects, so the same
            // seed gives the same image on every platform.
            std::mt19937 rng(static_cast<std::uint32_t>(seed));
            for (float& v : img.data) {
                v = static_cast<float>(rng() >> 8) * 0x1.0p-24f;
            }
            return img;
        }
    }
    throw ParameterError("unknown synthetic pattern");
}

namespace {

struct PpmParser {
    const std::string& bytes;
    std::size_t pos = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw FormatError("malformed PPM at byte " + std::to_string(pos) + ": " + what);
    }

    bool at_end() const { return pos >= bytes.size(); }

    // Whitespace between header tokens; '#' starts a comment to end of line.
    void skip_separators() {
        while (!at_end()) {
            const char ch = bytes[pos];
            if (ch == '#') {
                while (!at_end() && bytes[pos] != '\n') ++pos;
            } else if (ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n') {
                ++pos;
            } else {
                break;
            }
        }
    }

    std::uint64_t parse_uint(const char* field) {
        skip_separators();
        if (at_end() || bytes[pos] < '0' || bytes[pos] > '9') {
            fail(std::string("expected ") + field);
        }
        std::uint64_t v = 0;
        while (!at_end() && bytes[pos] >= '0' && bytes[pos] <= '9') {
            v = v * 10 + static_cast<std::uint64_t>(bytes[pos] - '0');
            if (v > 1000000000ull) fail(std::string(field) + " out of range");
            ++pos;
        }
        return v;
    }
};

}  // namespace

Image load_ppm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ResourceError("cannot open image file: " + path);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    PpmParser p{bytes};
    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '6') {
        std::string magic = bytes.substr(0, std::min<std::size_t>(2, bytes.size()));
        throw FormatError("malformed PPM at byte 0: expected magic 'P6', got '" + magic + "'");
    }
    p.pos = 2;
    const std::uint64_t w = p.parse_uint("width");
    const std::uint64_t h = p.parse_uint("height");
    const std::uint64_t maxval = p.parse_uint("maxval");
    if (w == 0 || h == 0) p.fail("zero image dimension");
    if (maxval != 255) p.fail("unsupported maxval " + std::to_string(maxval) + " (only 255)");
    // Exactly one whitespace byte separates the header from the payload.
    if (p.at_end() || !(bytes[p.pos] == '\n' || bytes[p.pos] == ' ' || bytes[p.pos] == '\t' ||
                        bytes[p.pos] == '\r')) {
        p.fail("expected whitespace before pixel payload");
    }
    ++p.pos;
    const std::size_t expect = static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * 3;
    const std::size_t have = bytes.size() - p.pos;
    if (have < expect) {
        throw FormatError("truncated PPM payload at byte " + std::to_string(bytes.size()) +
                          ": need " + std::to_string(expect) + " pixel bytes, have " +
                          std::to_string(have));
    }
    if (have > expect) {
        p.pos += expect;
        p.fail("trailing bytes after pixel payload");
    }

    Image img = Image::make(w, h, 3);
    for (std::size_t k = 0; k < expect; ++k) {
        img.data[k] = static_cast<float>(static_cast<unsigned char>(bytes[p.pos + k]));
    }
    return img;
}

void save_ppm(const Image& img, const std::string& path) {
    if (img.c != 3) throw FormatError("PPM P6 output requires a 3-channel image");
    if (img.w == 0 || img.h == 0) throw ParameterError("cannot save an empty image");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ResourceError("cannot open output file: " + path);
    out << "P6\n" << img.w << " " << img.h << "\n255\n";
    std::string payload(img.w * img.h * 3, '\0');
    for (std::size_t k = 0; k < payload.size(); ++k) {
        const float clamped = std::min(255.0f, std::max(0.0f, img.data[k]));
        payload[k] = static_cast<char>(static_cast<unsigned char>(std::lround(clamped)));
    }
    out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    if (!out) throw ResourceError("failed writing image file: " + path);
}

namespace {

void require_same_shape(const Image& a, const Image& b) {
    if (a.w != b.w || a.h != b.h || a.c != b.c) {
        throw ParameterError("image shape mismatch: " + std::to_string(a.w) + "x" +
                             std::to_string(a.h) + "x" + std::to_string(a.c) + " vs " +
                             std::to_string(b.w) + "x" + std::to_string(b.h) + "x" +
                             std::to_string(b.c));
    }
}

}  // namespace

float max_abs_diff(const Image& a, const Image& b) {
    require_same_shape(a, b);
    float worst = 0.0f;
    for (std::size_t k = 0; k < a.data.size(); ++k) {
        worst = std::max(worst, std::abs(a.data[k] - b.data[k]));
    }
    return worst;
}

float interior_max_abs_diff(const Image& a, const Image& b, std::size_t margin) {
    require_same_shape(a, b);
    if (2 * margin >= a.h || 2 * margin >= a.w) return 0.0f;
    float worst = 0.0f;
    for (std::size_t i = margin; i < a.h - margin; ++i) {
        for (std::size_t j = margin; j < a.w - margin; ++j) {
            for (std::size_t ch = 0; ch < a.c; ++ch) {
                worst = std::max(worst, std::abs(a.at(i, j, ch) - b.at(i, j, ch)));
            }
        }
    }
    return worst;
}

}  // namespace membench
