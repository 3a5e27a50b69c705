#pragma once

// Data-parallel inner loops. Each kernel has a serial reference and an OpenMP
// version producing bit-identical output; `*_auto` picks by problem size.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "iwasawa/context.hpp"

namespace iwasawa::kernels {

/// Dense coefficient vector indexed by monomial. A zero residue means the
/// coefficient is an exact zero; prec/val are only meaningful otherwise.
struct DenseSeries {
    std::vector<std::uint64_t> residue;
    std::vector<std::int16_t> prec;
    std::vector<std::int16_t> val;

    // Entries start as exact zeros: residue 0 known to the full precision `cap`.
    // A zero residue with prec < cap is a coefficient only known mod p^prec.
    explicit DenseSeries(std::size_t n = 0, int cap = 0)
        : residue(n, 0), prec(n, static_cast<std::int16_t>(cap)), val(n, static_cast<std::int16_t>(cap)) {}
    std::size_t size() const { return residue.size(); }
};

struct Modulus {
    std::uint64_t p;
    int cap;                              // N
    std::span<const std::uint64_t> powers; // p^0 .. p^N
};

void convolve_serial(const ConvolutionTable& table, const Modulus& mod, const DenseSeries& a,
                     const DenseSeries& b, DenseSeries& out);
void convolve_parallel(const ConvolutionTable& table, const Modulus& mod, const DenseSeries& a,
                       const DenseSeries& b, DenseSeries& out);
void convolve_auto(const ConvolutionTable& table, const Modulus& mod, const DenseSeries& a,
                   const DenseSeries& b, DenseSeries& out);

/// Row-major matrix over Z/p^level.
struct ModMatrix {
    std::uint64_t p = 3;
    int level = 1;
    std::uint64_t modulus = 3;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::uint64_t> a;

    ModMatrix() = default;
    ModMatrix(std::uint64_t p, int level, std::size_t rows, std::size_t cols);

    std::uint64_t& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
    std::uint64_t at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }
};

/// Clears column `pcol` in every row other than `prow`, using the pivot entry
/// at (prow, pcol). The pivot must have minimal valuation in that column.
void eliminate_column_serial(ModMatrix& m, std::size_t prow, std::size_t pcol);
void eliminate_column_parallel(ModMatrix& m, std::size_t prow, std::size_t pcol);
void eliminate_column_auto(ModMatrix& m, std::size_t prow, std::size_t pcol);

/// Number of OpenMP threads available (1 when built without OpenMP).
int max_threads();

} // namespace iwasawa::kernels
