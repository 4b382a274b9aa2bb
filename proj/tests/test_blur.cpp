#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "membench/blur.hpp"
#include "membench/error.hpp"
#include "membench/image_io.hpp"

using namespace membench;

namespace {

// Independent quadruple-loop 2D convolution accumulating in double; the
// reference every variant is judged against.
Image oracle_blur(const Image& src, const Gaussian2DKernel& k2) {
    const std::size_t f = static_cast<std::size_t>(k2.f);
    const std::size_t m = (f - 1) / 2;
    Image dst = src;
    for (std::size_t i = m; i < src.h - m; ++i) {
        for (std::size_t j = m; j < src.w - m; ++j) {
            for (std::size_t ch = 0; ch < src.c; ++ch) {
                double acc = 0.0;
                for (std::size_t fi = 0; fi < f; ++fi) {
                    for (std::size_t fj = 0; fj < f; ++fj) {
                        acc += static_cast<double>(src.at(i + fi - m, j + fj - m, ch)) *
                               static_cast<double>(k2.weights[fi * f + fj]);
                    }
                }
                dst.at(i, j, ch) = static_cast<float>(acc);
            }
        }
    }
    return dst;
}

double kernel_sum(const Gaussian1DKernel& k) {
    double s = 0.0;
    for (float w : k.weights) s += static_cast<double>(w);
    return s;
}

}  // namespace

TEST_CASE("gaussian kernel properties") {
    const Gaussian1DKernel unit = make_gaussian_kernel(1, 2.0);
    REQUIRE(unit.weights.size() == 1);
    CHECK(unit.weights[0] == 1.0f);

    const Gaussian1DKernel k3 = make_gaussian_kernel(3, 0.8);
    CHECK(k3.middle == 1);
    CHECK(k3.weights[0] == k3.weights[2]);
    CHECK(k3.weights[1] > k3.weights[0]);
    CHECK(std::abs(kernel_sum(k3) - 1.0) < 1e-6);

    const Gaussian1DKernel k19 = make_gaussian_kernel(19, default_sigma(19));
    REQUIRE(k19.weights.size() == 19);
    CHECK(std::abs(kernel_sum(k19) - 1.0) < 1e-6);
    for (int i = 0; i < 19; ++i) {
        // Symmetry is exact by construction, not approximate.
        CHECK(k19.weights[static_cast<std::size_t>(i)] ==
              k19.weights[static_cast<std::size_t>(18 - i)]);
        CHECK(k19.weights[static_cast<std::size_t>(i)] > 0.0f);
    }

    CHECK(default_sigma(19) == doctest::Approx(3.2));

    CHECK_THROWS_AS(make_gaussian_kernel(4, 1.0), ParameterError);
    CHECK_THROWS_AS(make_gaussian_kernel(0, 1.0), ParameterError);
    CHECK_THROWS_AS(make_gaussian_kernel(-3, 1.0), ParameterError);
    CHECK_THROWS_AS(make_gaussian_kernel(3, 0.0), ParameterError);
    CHECK_THROWS_AS(make_gaussian_kernel(3, -1.0), ParameterError);
    // Far tail taps underflow to zero for a needle-thin sigma.
    CHECK_THROWS_AS(make_gaussian_kernel(19, 1e-4), ParameterError);
}

TEST_CASE("2d kernel is the exact outer product") {
    const Gaussian1DKernel k1 = make_gaussian_kernel(5, 1.1);
    const Gaussian2DKernel k2 = make_gaussian_2d(k1);
    REQUIRE(k2.weights.size() == 25);
    double sum = 0.0;
    for (std::size_t fi = 0; fi < 5; ++fi) {
        for (std::size_t fj = 0; fj < 5; ++fj) {
            CHECK(k2.weights[fi * 5 + fj] == k1.weights[fi] * k1.weights[fj]);
            sum += static_cast<double>(k2.weights[fi * 5 + fj]);
        }
    }
    CHECK(std::abs(sum - 1.0) < 1e-6);
}

TEST_CASE("variant names round trip") {
    for (BlurVariant v : all_blur_variants()) {
        CHECK(blur_variant_from_name(blur_variant_name(v)) == v);
    }
    CHECK(std::string(blur_variant_name(BlurVariant::Separable)) == "1d_kernels");
    CHECK(std::string(blur_variant_name(BlurVariant::SeparableMem)) == "memory");
    CHECK_THROWS_AS(blur_variant_from_name("fast"), ParameterError);
}

TEST_CASE("constant image interiors are preserved by every variant") {
    const Image src = synth_image(SynthPattern::Constant, 12, 10, 3);
    const Gaussian1DKernel k1 = make_gaussian_kernel(5, default_sigma(5));
    for (BlurVariant v : all_blur_variants()) {
        const Image out = run_blur(v, src, k1, 2);
        CHECK(max_abs_diff(out, src) < 1e-5f);
    }
}

TEST_CASE("impulse imprints the kernel weights") {
    const Image src = synth_image(SynthPattern::Impulse, 9, 9, 1);
    const Gaussian1DKernel k1 = make_gaussian_kernel(3, 0.9);
    const Gaussian2DKernel k2 = make_gaussian_2d(k1);

    const Image naive = blur_naive(src, k2);
    for (std::size_t i = 3; i <= 5; ++i) {
        for (std::size_t j = 3; j <= 5; ++j) {
            CHECK(naive.at(i, j, 0) == k2.weights[(i - 3) * 3 + (j - 3)]);
        }
    }
    CHECK(naive.at(1, 1, 0) == 0.0f);

    // A single nonzero term is order-independent: reordered loops and the
    // separable factorization agree to the last bit / within 1e-6.
    const Image unit = blur_unit_stride(src, k2);
    CHECK(unit.data == naive.data);
    const Image sep = blur_separable(src, k1);
    CHECK(max_abs_diff(sep, naive) < 1e-6f);
}

TEST_CASE("naive matches the double-precision oracle") {
    const Image src = synth_image(SynthPattern::Random, 32, 32, 3, 11);
    const Gaussian1DKernel k1 = make_gaussian_kernel(5, default_sigma(5));
    const Gaussian2DKernel k2 = make_gaussian_2d(k1);
    const Image expect = oracle_blur(src, k2);
    CHECK(max_abs_diff(blur_naive(src, k2), expect) < 1e-5f);
    CHECK(max_abs_diff(blur_unit_stride(src, k2), expect) < 1e-5f);
}

TEST_CASE("separable ladder matches the 2d oracle within 1e-4") {
    const Image src = synth_image(SynthPattern::Random, 64, 64, 3, 5);
    const Gaussian1DKernel k1 = make_gaussian_kernel(19, default_sigma(19));
    const Gaussian2DKernel k2 = make_gaussian_2d(k1);
    const Image expect = oracle_blur(src, k2);
    const std::size_t m = static_cast<std::size_t>(k1.middle);

    CHECK(interior_max_abs_diff(blur_separable(src, k1), expect, m) < 1e-4f);
    CHECK(interior_max_abs_diff(blur_separable_mem(src, k1), expect, m) < 1e-4f);
    CHECK(interior_max_abs_diff(blur_parallel(src, k1, 4), expect, m) < 1e-4f);
}

TEST_CASE("row-streaming pass equals the per-pixel pass within 1e-5") {
    const Image src = synth_image(SynthPattern::Random, 48, 40, 3, 9);
    for (int f : {3, 5, 19}) {
        const Gaussian1DKernel k1 = make_gaussian_kernel(f, default_sigma(f));
        const Image plain = blur_separable(src, k1);
        const Image mem = blur_separable_mem(src, k1);
        CHECK(max_abs_diff(mem, plain) < 1e-5f);
    }
}

TEST_CASE("parallel blur is bit-exact against its single-threaded twin") {
    const Image src = synth_image(SynthPattern::Random, 64, 48, 3, 21);
    const Gaussian1DKernel k1 = make_gaussian_kernel(5, default_sigma(5));
    const Image mem = blur_separable_mem(src, k1);
    for (int threads : {1, 2, 4, 7, 64}) {
        const Image par = blur_parallel(src, k1, threads);
        CHECK_MESSAGE(par.data == mem.data, "threads=", threads);
    }
}

TEST_CASE("borders carry input values unchanged in every variant") {
    const Image src = synth_image(SynthPattern::Random, 20, 16, 3, 2);
    const Gaussian1DKernel k1 = make_gaussian_kernel(5, default_sigma(5));
    const std::size_t m = static_cast<std::size_t>(k1.middle);
    for (BlurVariant v : all_blur_variants()) {
        const Image out = run_blur(v, src, k1, 3);
        for (std::size_t i = 0; i < src.h; ++i) {
            for (std::size_t j = 0; j < src.w; ++j) {
                const bool border = i < m || i >= src.h - m || j < m || j >= src.w - m;
                if (!border) continue;
                for (std::size_t ch = 0; ch < src.c; ++ch) {
                    REQUIRE(out.at(i, j, ch) == src.at(i, j, ch));
                }
            }
        }
    }
}

TEST_CASE("outputs stay inside the input range") {
    const Image src = synth_image(SynthPattern::Random, 32, 24, 1, 13);
    const float lo = *std::min_element(src.data.begin(), src.data.end());
    const float hi = *std::max_element(src.data.begin(), src.data.end());
    const Gaussian1DKernel k1 = make_gaussian_kernel(7, default_sigma(7));
    for (BlurVariant v : all_blur_variants()) {
        const Image out = run_blur(v, src, k1, 2);
        for (float x : out.data) {
            CHECK(x >= lo - 1e-5f);
            CHECK(x <= hi + 1e-5f);
        }
    }
}

TEST_CASE("blur is linear within 1e-4") {
    const Image a = synth_image(SynthPattern::Random, 24, 24, 1, 1);
    const Image b = synth_image(SynthPattern::Random, 24, 24, 1, 2);
    Image combo = a;
    for (std::size_t k = 0; k < combo.data.size(); ++k) {
        combo.data[k] = 0.25f * a.data[k] + 0.5f * b.data[k];
    }
    const Gaussian1DKernel k1 = make_gaussian_kernel(5, default_sigma(5));
    const Image left = blur_separable(combo, k1);
    const Image ba = blur_separable(a, k1);
    const Image bb = blur_separable(b, k1);
    Image right = ba;
    for (std::size_t k = 0; k < right.data.size(); ++k) {
        right.data[k] = 0.25f * ba.data[k] + 0.5f * bb.data[k];
    }
    CHECK(max_abs_diff(left, right) < 1e-4f);
}

TEST_CASE("oversized filters are rejected") {
    const Image src = synth_image(SynthPattern::Constant, 8, 8, 1);
    const Gaussian1DKernel k9 = make_gaussian_kernel(9, default_sigma(9));
    CHECK_THROWS_AS(blur_separable(src, k9), ParameterError);
    const Gaussian1DKernel k7 = make_gaussian_kernel(7, default_sigma(7));
    CHECK_NOTHROW(blur_separable(src, k7));
    CHECK_THROWS_AS(blur_parallel(src, k7, 0), ParameterError);
}

TEST_CASE("filter size equal to the image still works") {
    const Image src = synth_image(SynthPattern::Random, 5, 5, 1, 4);
    const Gaussian1DKernel k1 = make_gaussian_kernel(5, default_sigma(5));
    const Gaussian2DKernel k2 = make_gaussian_2d(k1);
    const Image expect = oracle_blur(src, k2);
    const Image out = blur_naive(src, k2);
    CHECK(max_abs_diff(out, expect) < 1e-5f);
    // Exactly one filtered pixel: the center.
    CHECK(out.at(0, 0, 0) == src.at(0, 0, 0));
    CHECK(out.at(2, 2, 0) != src.at(2, 2, 0));
}
