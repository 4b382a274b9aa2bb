#include "membench/blur.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "membench/error.hpp"

namespace membench {

double default_sigma(int f) { return 0.3 * ((f - 1) * 0.5 - 1.0) + 0.8; }

Gaussian1DKernel make_gaussian_kernel(int f, double sigma) {
    if (f < 1 || f % 2 == 0) {
        throw ParameterError("filter size must be odd and positive, got " + std::to_string(f));
    }
    if (!(sigma > 0.0)) throw ParameterError("sigma must be positive");
    const int m = (f - 1) / 2;

    std::vector<double> wd(static_cast<std::size_t>(f));
    double sum = 0.0;
    for (int i = 0; i <= m; ++i) {
        const double x = static_cast<double>(i - m);
        const double v = std::exp(-(x * x) / (2.0 * sigma * sigma));
        wd[static_cast<std::size_t>(i)] = v;
        wd[static_cast<std::size_t>(f - 1 - i)] = v;
        sum += i == m ? v : 2.0 * v;
    }
    for (double& v : wd) v /= sum;

    Gaussian1DKernel k;
    k.f = f;
    k.sigma = sigma;
    k.middle = m;
    k.weights.resize(static_cast<std::size_t>(f));
    // Mirror the float conversion so symmetry is exact, then absorb the
    // rounding residue into the center tap so the float weights sum to 1
    // as tightly as a single rounding allows.
    for (int i = 0; i <= m; ++i) {
        const float v = static_cast<float>(wd[static_cast<std::size_t>(i)]);
        k.weights[static_cast<std::size_t>(i)] = v;
        k.weights[static_cast<std::size_t>(f - 1 - i)] = v;
    }
    double others = 0.0;
    for (int i = 0; i < f; ++i) {
        if (i != m) others += static_cast<double>(k.weights[static_cast<std::size_t>(i)]);
    }
    k.weights[static_cast<std::size_t>(m)] = static_cast<float>(1.0 - others);

    for (float w : k.weights) {
        if (!(w > 0.0f) || !std::isfinite(w)) {
            throw ParameterError("sigma " + std::to_string(sigma) + " is too narrow for f=" +
                                 std::to_string(f) + ": tap weights underflow to zero");
        }
    }
    return k;
}

Gaussian2DKernel make_gaussian_2d(const Gaussian1DKernel& k1) {
    Gaussian2DKernel k2;
    k2.f = k1.f;
    const std::size_t f = static_cast<std::size_t>(k1.f);
    k2.weights.resize(f * f);
    for (std::size_t fi = 0; fi < f; ++fi) {
        for (std::size_t fj = 0; fj < f; ++fj) {
            k2.weights[fi * f + fj] = k1.weights[fi] * k1.weights[fj];
        }
    }
    return k2;
}

const char* blur_variant_name(BlurVariant v) {
    switch (v) {
        case BlurVariant::Naive: return "naive";
        case BlurVariant::UnitStride: return "unit_stride";
        case BlurVariant::Separable: return "1d_kernels";
        case BlurVariant::SeparableMem: return "memory";
        case BlurVariant::Parallel: return "parallel";
    }
    throw ParameterError("unknown blur variant");
}

BlurVariant blur_variant_from_name(const std::string& name) {
    for (BlurVariant v : all_blur_variants()) {
        if (name == blur_variant_name(v)) return v;
    }
    throw ParameterError("unknown blur variant name: " + name);
}

const std::vector<BlurVariant>& all_blur_variants() {
    static const std::vector<BlurVariant> variants{BlurVariant::Naive, BlurVariant::UnitStride,
                                                   BlurVariant::Separable, BlurVariant::SeparableMem,
                                                   BlurVariant::Parallel};
    return variants;
}

namespace {

std::size_t check_filter_fits(const Image& src, int f) {
    if (f < 1 || f % 2 == 0) {
        throw ParameterError("filter size must be odd and positive, got " + std::to_string(f));
    }
    if (static_cast<std::size_t>(f) > std::min(src.w, src.h)) {
        throw ParameterError("filter size " + std::to_string(f) + " exceeds image " +
                             std::to_string(src.w) + "x" + std::to_string(src.h));
    }
    return static_cast<std::size_t>((f - 1) / 2);
}

// Vertical pass rows [i_begin, i_end) within [m, h-m): each output row is
// zeroed, then every kernel tap streams one contiguous source row into it.
void vertical_rows(const float* src, float* tmp, std::size_t w, std::size_t c, const float* k,
                   std::size_t f, std::size_t m, std::size_t i_begin, std::size_t i_end) {
    const std::size_t wc = w * c;
    for (std::size_t i = i_begin; i < i_end; ++i) {
        float* out = tmp + i * wc;
        std::fill(out, out + wc, 0.0f);
        for (std::size_t fi = 0; fi < f; ++fi) {
            const float wgt = k[fi];
            const float* in = src + (i - m + fi) * wc;
            for (std::size_t x = 0; x < wc; ++x) out[x] += in[x] * wgt;
        }
    }
}

// Horizontal pass rows [i_begin, i_end) within [m, h-m): the interior
// columns of each output row accumulate shifted copies of the temporary
// row, one contiguous stream per kernel tap. Border columns keep whatever
// dst already holds (the input copy).
void horizontal_rows(const float* tmp, float* dst, std::size_t w, std::size_t c, const float* k,
                     std::size_t f, std::size_t m, std::size_t i_begin, std::size_t i_end) {
    const std::size_t wc = w * c;
    const std::size_t span = (w - 2 * m) * c;
    for (std::size_t i = i_begin; i < i_end; ++i) {
        const float* in = tmp + i * wc;
        float* out = dst + i * wc + m * c;
        std::fill(out, out + span, 0.0f);
        for (std::size_t fj = 0; fj < f; ++fj) {
            const float wgt = k[fj];
            const float* shifted = in + fj * c;
            for (std::size_t x = 0; x < span; ++x) out[x] += shifted[x] * wgt;
        }
    }
}

// Contiguous chunk [begin, end) of `total` items for worker `tid` of `nt`.
void static_chunk(std::size_t total, int tid, int nt, std::size_t& begin, std::size_t& end) {
    const std::size_t base = total / static_cast<std::size_t>(nt);
    const std::size_t rem = total % static_cast<std::size_t>(nt);
    const std::size_t t = static_cast<std::size_t>(tid);
    begin = t * base + std::min<std::size_t>(t, rem);
    end = begin + base + (t < rem ? 1 : 0);
}

}  // namespace

Image blur_naive(const Image& src, const Gaussian2DKernel& k2) {
    const std::size_t m = check_filter_fits(src, k2.f);
    const std::size_t f = static_cast<std::size_t>(k2.f);
    Image dst = src;  // border pixels carry input values
    const std::size_t w = src.w, h = src.h, c = src.c;
    for (std::size_t i = m; i < h - m; ++i) {
        for (std::size_t j = m; j < w - m; ++j) {
            for (std::size_t ch = 0; ch < c; ++ch) {
                float acc = 0.0f;
                // Kernel row index innermost: consecutive taps are a full
                // image row apart in memory.
                for (std::size_t fj = 0; fj < f; ++fj) {
                    for (std::size_t fi = 0; fi < f; ++fi) {
                        acc += src.at(i + fi - m, j + fj - m, ch) * k2.weights[fi * f + fj];
                    }
                }
                dst.at(i, j, ch) = acc;
            }
        }
    }
    return dst;
}

Image blur_unit_stride(const Image& src, const Gaussian2DKernel& k2) {
    const std::size_t m = check_filter_fits(src, k2.f);
    const std::size_t f = static_cast<std::size_t>(k2.f);
    Image dst = src;
    const std::size_t w = src.w, h = src.h, c = src.c;
    const std::size_t wc = w * c;
    const std::size_t span = (w - 2 * m) * c;
    for (std::size_t i = m; i < h - m; ++i) {
        float* out = dst.data.data() + i * wc + m * c;
        std::fill(out, out + span, 0.0f);
        for (std::size_t fi = 0; fi < f; ++fi) {
            const float* srow = src.data.data() + (i + fi - m) * wc;
            for (std::size_t fj = 0; fj < f; ++fj) {
                const float wgt = k2.weights[fi * f + fj];
                const float* shifted = srow + fj * c;
                for (std::size_t x = 0; x < span; ++x) out[x] += shifted[x] * wgt;
            }
        }
    }
    return dst;
}

Image blur_separable(const Image& src, const Gaussian1DKernel& k1) {
    const std::size_t m = check_filter_fits(src, k1.f);
    const std::size_t f = static_cast<std::size_t>(k1.f);
    const std::size_t w = src.w, h = src.h, c = src.c;
    // Vertical pass filters every column (the horizontal pass needs
    // vertically filtered values under the side borders too).
    Image tmp = src;
    for (std::size_t i = m; i < h - m; ++i) {
        for (std::size_t j = 0; j < w; ++j) {
            for (std::size_t ch = 0; ch < c; ++ch) {
                float acc = 0.0f;
                for (std::size_t fi = 0; fi < f; ++fi) {
                    acc += src.at(i + fi - m, j, ch) * k1.weights[fi];
                }
                tmp.at(i, j, ch) = acc;
            }
        }
    }
    Image dst = src;
    for (std::size_t i = m; i < h - m; ++i) {
        for (std::size_t j = m; j < w - m; ++j) {
            for (std::size_t ch = 0; ch < c; ++ch) {
                float acc = 0.0f;
                for (std::size_t fj = 0; fj < f; ++fj) {
                    acc += tmp.at(i, j + fj - m, ch) * k1.weights[fj];
                }
                dst.at(i, j, ch) = acc;
            }
        }
    }
    return dst;
}

Image blur_separable_mem(const Image& src, const Gaussian1DKernel& k1) {
    const std::size_t m = check_filter_fits(src, k1.f);
    const std::size_t f = static_cast<std::size_t>(k1.f);
    Image tmp = src;
    Image dst = src;
    vertical_rows(src.data.data(), tmp.data.data(), src.w, src.c, k1.weights.data(), f, m, m,
                  src.h - m);
    horizontal_rows(tmp.data.data(), dst.data.data(), src.w, src.c, k1.weights.data(), f, m, m,
                    src.h - m);
    return dst;
}

Image blur_parallel(const Image& src, const Gaussian1DKernel& k1, int threads) {
    if (threads < 1) throw ParameterError("thread count must be at least 1");
    const std::size_t m = check_filter_fits(src, k1.f);
    const std::size_t f = static_cast<std::size_t>(k1.f);
    Image tmp = src;
    Image dst = src;
    const std::size_t rows = src.h - 2 * m;
    const float* sp = src.data.data();
    float* tp = tmp.data.data();
    float* dp = dst.data.data();
    // Both passes hand each worker a contiguous run of output rows through
    // the same row workers the single-threaded variant uses, so results are
    // identical for every thread count. The barrier keeps the horizontal
    // pass from reading rows still being written.
#pragma omp parallel if (threads > 1) num_threads(threads)
    {
        int tid = 0, nt = 1;
#ifdef _OPENMP
        tid = omp_get_thread_num();
        nt = omp_get_num_threads();
#endif
        std::size_t begin = 0, end = 0;
        static_chunk(rows, tid, nt, begin, end);
        vertical_rows(sp, tp, src.w, src.c, k1.weights.data(), f, m, m + begin, m + end);
#pragma omp barrier
        horizontal_rows(tp, dp, src.w, src.c, k1.weights.data(), f, m, m + begin, m + end);
    }
    return dst;
}

Image run_blur(BlurVariant v, const Image& src, const Gaussian1DKernel& k1, int threads) {
    switch (v) {
        case BlurVariant::Naive: return blur_naive(src, make_gaussian_2d(k1));
        case BlurVariant::UnitStride: return blur_unit_stride(src, make_gaussian_2d(k1));
        case BlurVariant::Separable: return blur_separable(src, k1);
        case BlurVariant::SeparableMem: return blur_separable_mem(src, k1);
        case BlurVariant::Parallel: return blur_parallel(src, k1, threads);
    }
    throw ParameterError("unknown blur variant");
}

}  // namespace membench
