#include "membench/transpose.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <new>
#include <utility>

#include "membench/error.hpp"

namespace membench {

SquareMatrix SquareMatrix::make(std::size_t n) {
    SquareMatrix m;
    m.n = n;
    if (n != 0 && n > std::numeric_limits<std::size_t>::max() / n) {
        throw ResourceError("cannot allocate " + std::to_string(n) + "x" + std::to_string(n) +
                            " matrix");
    }
    try {
        m.data.assign(n * n, 0.0);
    } catch (const std::bad_alloc&) {
        throw ResourceError("cannot allocate " + std::to_string(n) + "x" + std::to_string(n) +
                            " matrix");
    } catch (const std::length_error&) {
        throw ResourceError("cannot allocate " + std::to_string(n) + "x" + std::to_string(n) +
                            " matrix");
    }
    return m;
}

SquareMatrix SquareMatrix::indexed(std::size_t n) {
    SquareMatrix m = make(n);
    for (std::size_t k = 0; k < n * n; ++k) m.data[k] = static_cast<double>(k);
    return m;
}

SquareMatrix SquareMatrix::random(std::size_t n, std::uint64_t seed) {
    SquareMatrix m = make(n);
    // xorshift-style splitmix64: reproducible regardless of platform.
    std::uint64_t state = seed;
    for (std::size_t k = 0; k < n * n; ++k) {
        state += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        z ^= z >> 31;
        m.data[k] = static_cast<double>(z >> 11) * 0x1.0p-53;
    }
    return m;
}

const char* transpose_variant_name(TransposeVariant v) {
    switch (v) {
        case TransposeVariant::Naive: return "naive";
        case TransposeVariant::Parallel: return "parallel";
        case TransposeVariant::Blocking: return "blocking";
        case TransposeVariant::ManualBlocking: return "manual_blocking";
        case TransposeVariant::Dynamic: return "dynamic";
    }
    throw ParameterError("unknown transpose variant");
}

TransposeVariant transpose_variant_from_name(const std::string& name) {
    for (TransposeVariant v : all_transpose_variants()) {
        if (name == transpose_variant_name(v)) return v;
    }
    throw ParameterError("unknown transpose variant name: " + name);
}

const std::vector<TransposeVariant>& all_transpose_variants() {
    static const std::vector<TransposeVariant> variants{
        TransposeVariant::Naive, TransposeVariant::Parallel, TransposeVariant::Blocking,
        TransposeVariant::ManualBlocking, TransposeVariant::Dynamic};
    return variants;
}

void transpose_naive(SquareMatrix& m) {
    const std::size_t n = m.n;
    double* mat = m.data.data();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            std::swap(mat[i * n + j], mat[j * n + i]);
        }
    }
}

void transpose_parallel(SquareMatrix& m, int threads) {
    if (threads < 1) throw ParameterError("thread count must be at least 1");
    const std::int64_t n = static_cast<std::int64_t>(m.n);
    double* mat = m.data.data();
    // Row i swaps only pairs (i,j) with j > i, so rows never collide.
#pragma omp parallel for if (threads > 1) num_threads(threads) schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        for (std::int64_t j = i + 1; j < n; ++j) {
            std::swap(mat[i * n + j], mat[j * n + i]);
        }
    }
}

void transpose_blocking(SquareMatrix& m, std::size_t blk) {
    if (blk == 0) throw ParameterError("block size must be positive");
    const std::size_t n = m.n;
    blk = std::min(blk, std::max<std::size_t>(n, 1));
    double* mat = m.data.data();
    for (std::size_t i_blk = 0; i_blk < n; i_blk += blk) {
        for (std::size_t j_blk = i_blk; j_blk < n; j_blk += blk) {
            const std::size_t i_end = std::min(i_blk + blk, n);
            const std::size_t j_end = std::min(j_blk + blk, n);
            for (std::size_t i = i_blk; i < i_end; ++i) {
                // Diagonal tiles stay above the diagonal; off-diagonal tiles
                // are entirely above it already.
                const std::size_t j_start = i_blk == j_blk ? i + 1 : j_blk;
                for (std::size_t j = j_start; j < j_end; ++j) {
                    std::swap(mat[i * n + j], mat[j * n + i]);
                }
            }
        }
    }
}

namespace {

// Handles the tile pair (ib,jb)/(jb,ib) of a blk x blk tiling: transposes a
// diagonal tile in place, or routes an off-diagonal tile through scratch so
// both tiles are read and written in row order. scratch holds blk * blk
// doubles. On return scratch contents are unspecified.
void transpose_tile_pair(double* mat, std::size_t n, std::size_t blk, std::size_t ib,
                         std::size_t jb, double* scratch) {
    const std::size_t bi = std::min(blk, n - ib);
    const std::size_t bj = std::min(blk, n - jb);
    if (ib == jb) {
        for (std::size_t x = 0; x < bi; ++x) {
            for (std::size_t y = x + 1; y < bi; ++y) {
                std::swap(mat[(ib + x) * n + ib + y], mat[(ib + y) * n + ib + x]);
            }
        }
        return;
    }
    // Stage the upper tile.
    for (std::size_t x = 0; x < bi; ++x) {
        for (std::size_t y = 0; y < bj; ++y) {
            scratch[x * bj + y] = mat[(ib + x) * n + jb + y];
        }
    }
    // Write it transposed over the mirror tile while capturing the mirror
    // tile, transposed, into scratch.
    for (std::size_t r = 0; r < bj; ++r) {
        for (std::size_t c = 0; c < bi; ++c) {
            std::swap(mat[(jb + r) * n + ib + c], scratch[c * bj + r]);
        }
    }
    // scratch[x*bj+y] now holds the old mirror element (jb+y, ib+x).
    for (std::size_t x = 0; x < bi; ++x) {
        for (std::size_t y = 0; y < bj; ++y) {
            mat[(ib + x) * n + jb + y] = scratch[x * bj + y];
        }
    }
}

void transpose_tile_row(double* mat, std::size_t n, std::size_t blk, std::size_t row_index,
                        double* scratch) {
    const std::size_t ib = row_index * blk;
    for (std::size_t jb = ib; jb < n; jb += blk) {
        transpose_tile_pair(mat, n, blk, ib, jb, scratch);
    }
}

}  // namespace

void transpose_manual_blocking(SquareMatrix& m, std::size_t blk) {
    if (blk == 0) throw ParameterError("block size must be positive");
    const std::size_t n = m.n;
    blk = std::min(blk, std::max<std::size_t>(n, 1));
    std::vector<double> scratch(blk * blk);
    const std::size_t n_rows = n == 0 ? 0 : (n + blk - 1) / blk;
    for (std::size_t row = 0; row < n_rows; ++row) {
        transpose_tile_row(m.data.data(), n, blk, row, scratch.data());
    }
}

void transpose_dynamic(SquareMatrix& m, std::size_t blk, int threads) {
    if (blk == 0) throw ParameterError("block size must be positive");
    if (threads < 1) throw ParameterError("thread count must be at least 1");
    const std::size_t n = m.n;
    blk = std::min(blk, std::max<std::size_t>(n, 1));
    const std::size_t n_rows = n == 0 ? 0 : (n + blk - 1) / blk;
    double* mat = m.data.data();
    std::atomic<std::size_t> next{0};
    // One tile row per grab keeps the chunk small: rows near the diagonal
    // shrink, and the counter rebalances the tail automatically. Distinct
    // tile rows touch disjoint tile pairs, so no locking beyond the counter.
#pragma omp parallel if (threads > 1) num_threads(threads)
    {
        std::vector<double> scratch(blk * blk);
        for (;;) {
            const std::size_t row = next.fetch_add(1, std::memory_order_relaxed);
            if (row >= n_rows) break;
            transpose_tile_row(mat, n, blk, row, scratch.data());
        }
    }
}

void run_transpose(TransposeVariant v, SquareMatrix& m, std::size_t blk, int threads) {
    switch (v) {
        case TransposeVariant::Naive: transpose_naive(m); return;
        case TransposeVariant::Parallel: transpose_parallel(m, threads); return;
        case TransposeVariant::Blocking: transpose_blocking(m, blk); return;
        case TransposeVariant::ManualBlocking: transpose_manual_blocking(m, blk); return;
        case TransposeVariant::Dynamic: transpose_dynamic(m, blk, threads); return;
    }
    throw ParameterError("unknown transpose variant");
}

}  // namespace membench
