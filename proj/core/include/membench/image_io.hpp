#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace membench {

/// Interleaved row-major float image: value(i,j,ch) = data[(i*w + j)*c + ch].
/// Intensities are carried as-is: 0-255 after a PPM load, typically [0,1]
/// for synthetic inputs. Nothing downstream assumes a particular scale.
struct Image {
    std::size_t w = 0;
    std::size_t h = 0;
    std::size_t c = 1;
    std::vector<float> data;

    static Image make(std::size_t w, std::size_t h, std::size_t c, float fill = 0.0f);

    float& at(std::size_t i, std::size_t j, std::size_t ch) {
        return data[(i * w + j) * c + ch];
    }
    const float& at(std::size_t i, std::size_t j, std::size_t ch) const {
        return data[(i * w + j) * c + ch];
    }
};

enum class SynthPattern { Constant, Impulse, Gradient, Random };

SynthPattern synth_pattern_from_name(const std::string& name);
const char* synth_pattern_name(SynthPattern pattern);

/// Deterministic test images. constant fills with `value`; impulse puts 1.0
/// in every channel of the center pixel (h/2, w/2) over zeros; gradient
/// ramps (i+j) linearly to 1 at the far corner; random draws [0,1) floats
/// from a seeded mt19937 so any two runs with the same seed agree exactly.
Image synth_image(SynthPattern pattern, std::size_t w, std::size_t h, std::size_t c,
                  std::uint64_t seed = 0, float value = 0.5f);

/// Binary PPM (P6, maxval 255) loader. Pixel bytes become floats 0-255.
/// Throws FormatError naming the byte offset on malformed input.
Image load_ppm(const std::string& path);

/// Writes a 3-channel image as binary PPM, clamping to [0,255] and rounding
/// to nearest. 8-bit payloads round-trip bit-exactly through load/save.
void save_ppm(const Image& img, const std::string& path);

/// Largest |a-b| over all pixels. Images must have identical dimensions.
float max_abs_diff(const Image& a, const Image& b);

/// Largest |a-b| over the doubly-interior region [margin, h-margin) x
/// [margin, w-margin) — the pixels every blur variant actually filters.
/// Returns 0 when the margin leaves no interior.
float interior_max_abs_diff(const Image& a, const Image& b, std::size_t margin);

}  // namespace membench
