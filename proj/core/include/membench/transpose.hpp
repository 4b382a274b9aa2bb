#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace membench {

/// Row-major square matrix of doubles.
struct SquareMatrix {
    std::size_t n = 0;
    std::vector<double> data;  // n * n elements

    static SquareMatrix make(std::size_t n);                         // zeros
    static SquareMatrix indexed(std::size_t n);                      // data[k] = k
    static SquareMatrix random(std::size_t n, std::uint64_t seed);   // uniform [0,1)

    double& at(std::size_t i, std::size_t j) { return data[i * n + j]; }
    const double& at(std::size_t i, std::size_t j) const { return data[i * n + j]; }
};

/// The in-place transposition ladder, ordered from baseline to most tuned.
enum class TransposeVariant { Naive, Parallel, Blocking, ManualBlocking, Dynamic };

const char* transpose_variant_name(TransposeVariant v);
TransposeVariant transpose_variant_from_name(const std::string& name);
const std::vector<TransposeVariant>& all_transpose_variants();

/// Upper-triangle swap walk. Touches each off-diagonal pair once.
void transpose_naive(SquareMatrix& m);

/// Same swap walk with the outer row loop split across threads. Rows own
/// disjoint swap pairs, so the result is identical to the serial walk.
void transpose_parallel(SquareMatrix& m, int threads);

/// Tiled swap walk: both sides of each swap stay inside one blk x blk tile
/// pair, so the working set per tile pair fits in cache. blk is clamped to n.
void transpose_blocking(SquareMatrix& m, std::size_t blk);

/// Tiled walk that stages one tile in a worker-local scratch buffer,
/// exchanges it with its mirror tile, and writes it back transposed.
void transpose_manual_blocking(SquareMatrix& m, std::size_t blk);

/// Manual-blocking work items (one block row each) handed out through a
/// shared atomic counter, one index per grab, so fast workers take more.
void transpose_dynamic(SquareMatrix& m, std::size_t blk, int threads);

/// Dispatch by variant. blk is ignored by naive/parallel, threads by the
/// serial variants.
void run_transpose(TransposeVariant v, SquareMatrix& m, std::size_t blk, int threads);

}  // namespace membench
