#include <doctest.h>

#include <string>
#include <vector>

#include "membench/error.hpp"
#include "membench/transpose.hpp"

using namespace membench;

namespace {

// Independent out-of-place reference: the mirror image by construction.
SquareMatrix oracle_transpose(const SquareMatrix& m) {
    SquareMatrix t = SquareMatrix::make(m.n);
    for (std::size_t i = 0; i < m.n; ++i) {
        for (std::size_t j = 0; j < m.n; ++j) {
            t.data[j * m.n + i] = m.data[i * m.n + j];
        }
    }
    return t;
}

}  // namespace

TEST_CASE("matrix constructors") {
    const SquareMatrix z = SquareMatrix::make(3);
    CHECK(z.data == std::vector<double>(9, 0.0));

    const SquareMatrix idx = SquareMatrix::indexed(3);
    CHECK(idx.at(0, 0) == 0.0);
    CHECK(idx.at(1, 2) == 5.0);
    CHECK(idx.at(2, 2) == 8.0);

    const SquareMatrix r1 = SquareMatrix::random(5, 42);
    const SquareMatrix r2 = SquareMatrix::random(5, 42);
    CHECK(r1.data == r2.data);
    const SquareMatrix r3 = SquareMatrix::random(5, 43);
    CHECK(r1.data != r3.data);
    for (double v : r1.data) {
        CHECK(v >= 0.0);
        CHECK(v < 1.0);
    }

    CHECK_THROWS_AS(SquareMatrix::make(1ull << 32), ResourceError);
}

TEST_CASE("variant names round trip") {
    for (TransposeVariant v : all_transpose_variants()) {
        CHECK(transpose_variant_from_name(transpose_variant_name(v)) == v);
    }
    CHECK(std::string(transpose_variant_name(TransposeVariant::ManualBlocking)) ==
          "manual_blocking");
    CHECK_THROWS_AS(transpose_variant_from_name("bogus"), ParameterError);
}

TEST_CASE("every variant equals the out-of-place oracle bit-exact") {
    for (TransposeVariant v : all_transpose_variants()) {
        for (std::size_t n : {1u, 2u, 3u, 5u, 7u, 8u, 16u, 33u}) {
            for (std::size_t blk : {1u, 2u, 3u, 8u, 16u}) {
                for (int threads : {1, 2, 4}) {
                    SquareMatrix m = SquareMatrix::random(n, 1000 + n);
                    const SquareMatrix expect = oracle_transpose(m);
                    run_transpose(v, m, blk, threads);
                    const bool ok = m.data == expect.data;
                    CHECK_MESSAGE(ok, "variant ", transpose_variant_name(v), " n=", n,
                                  " blk=", blk, " threads=", threads);
                }
            }
        }
    }
}

TEST_CASE("transposing twice restores the matrix bit-exact") {
    const SquareMatrix original = SquareMatrix::random(33, 7);
    for (TransposeVariant v : all_transpose_variants()) {
        SquareMatrix m = original;
        run_transpose(v, m, 8, 3);
        run_transpose(v, m, 8, 3);
        CHECK(m.data == original.data);
    }
}

TEST_CASE("block sizes larger than the matrix are clamped") {
    SquareMatrix m = SquareMatrix::random(7, 3);
    const SquareMatrix expect = oracle_transpose(m);
    transpose_manual_blocking(m, 64);
    CHECK(m.data == expect.data);
}

TEST_CASE("parameter validation") {
    SquareMatrix m = SquareMatrix::random(4, 1);
    CHECK_THROWS_AS(transpose_blocking(m, 0), ParameterError);
    CHECK_THROWS_AS(transpose_manual_blocking(m, 0), ParameterError);
    CHECK_THROWS_AS(transpose_dynamic(m, 0, 2), ParameterError);
    CHECK_THROWS_AS(transpose_dynamic(m, 2, 0), ParameterError);
    CHECK_THROWS_AS(transpose_parallel(m, 0), ParameterError);
}

TEST_CASE("single element and empty-ish sizes are no-ops") {
    for (TransposeVariant v : all_transpose_variants()) {
        SquareMatrix m = SquareMatrix::make(1);
        m.data[0] = 7.5;
        run_transpose(v, m, 4, 2);
        CHECK(m.data[0] == 7.5);
    }
}
