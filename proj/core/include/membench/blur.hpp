#pragma once

#include <string>
#include <vector>

#include "membench/image_io.hpp"

namespace membench {

/// Normalized odd-length Gaussian filter. Weights are 32-bit floats,
/// exactly symmetric about the middle tap, every weight positive, and the
/// sum is within 1e-6 of 1.
struct Gaussian1DKernel {
    int f = 1;            // odd tap count
    double sigma = 1.0;   // standard deviation in pixels
    int middle = 0;       // (f-1)/2
    std::vector<float> weights;
};

/// Outer product of a 1D kernel with itself, f x f row-major.
struct Gaussian2DKernel {
    int f = 1;
    std::vector<float> weights;
};

/// Default standard deviation for a given filter size, the common
/// convention sigma = 0.3*((f-1)*0.5 - 1) + 0.8.
double default_sigma(int f);

Gaussian1DKernel make_gaussian_kernel(int f, double sigma);
Gaussian2DKernel make_gaussian_2d(const Gaussian1DKernel& k1);

/// The blur optimization ladder. All variants share one border policy:
/// pixels closer than middle to any edge carry input values unchanged, and
/// the doubly-interior region [middle, h-middle) x [middle, w-middle) is
/// fully filtered, so outputs are comparable everywhere.
enum class BlurVariant { Naive, UnitStride, Separable, SeparableMem, Parallel };

const char* blur_variant_name(BlurVariant v);
BlurVariant blur_variant_from_name(const std::string& name);
const std::vector<BlurVariant>& all_blur_variants();

/// Full 2D convolution, O(W*H*C*F^2), with the kernel row index innermost:
/// each tap step jumps a whole image row, the canonical cache-hostile walk.
Image blur_naive(const Image& src, const Gaussian2DKernel& k2);

/// Same 2D convolution, loops reordered so the innermost loop streams
/// contiguous pixels of one image row per kernel tap.
Image blur_unit_stride(const Image& src, const Gaussian2DKernel& k2);

/// Separable blur, O(W*H*C*F): per-pixel vertical pass into a temporary,
/// then per-pixel horizontal pass.
Image blur_separable(const Image& src, const Gaussian1DKernel& k1);

/// Separable blur with both passes restructured so each kernel tap streams
/// and accumulates an entire contiguous row of length w*c.
Image blur_separable_mem(const Image& src, const Gaussian1DKernel& k1);

/// blur_separable_mem with the row loop of each pass statically partitioned
/// over workers (disjoint output rows, barrier between passes). Bit-exact
/// against blur_separable_mem for any thread count.
Image blur_parallel(const Image& src, const Gaussian1DKernel& k1, int threads);

/// Dispatch by variant; builds the 2D kernel internally where needed.
/// threads is ignored by the single-threaded variants.
Image run_blur(BlurVariant v, const Image& src, const Gaussian1DKernel& k1, int threads);

}  // namespace membench
