#include "iwasawa/kernels.hpp"

#include <algorithm>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "iwasawa/padic.hpp"

namespace iwasawa::kernels {

namespace {

constexpr std::size_t convolve_parallel_threshold = 20000;  // table pairs
constexpr std::size_t eliminate_parallel_threshold = 16384; // matrix entries

inline void convolve_one(const ConvolutionTable& t, const Modulus& mod, const DenseSeries& a,
                         const DenseSeries& b, DenseSeries& out, std::size_t k) {
    const std::uint64_t full = mod.powers[static_cast<std::size_t>(mod.cap)];
    std::uint64_t acc = 0;
    int prec = mod.cap;
    bool any = false;
    for (std::uint32_t q = t.offsets[k]; q < t.offsets[k + 1]; ++q) {
        const std::uint32_t i = t.left[q];
        const std::uint32_t j = t.right[q];
        if ((a.residue[i] == 0 && a.prec[i] >= mod.cap) || (b.residue[j] == 0 && b.prec[j] >= mod.cap)) continue;
        any = true;
        acc = modarith::add(acc, modarith::mul(a.residue[i], b.residue[j], full), full);
        prec = std::min({prec, a.prec[i] + b.val[j], b.prec[j] + a.val[i]});
    }
    if (!any) {
        out.residue[k] = 0;
        out.prec[k] = static_cast<std::int16_t>(mod.cap);
        out.val[k] = static_cast<std::int16_t>(mod.cap);
        return;
    }
    const std::uint64_t r = acc % mod.powers[static_cast<std::size_t>(prec)];
    out.residue[k] = r;
    out.prec[k] = static_cast<std::int16_t>(prec);
    out.val[k] = static_cast<std::int16_t>(r == 0 ? prec : modarith::valuation(r, mod.p, prec));
}

inline void eliminate_row(ModMatrix& m, std::size_t prow, std::size_t pcol, std::size_t r,
                          std::uint64_t unit_inv, std::uint64_t scale) {
    const std::uint64_t x = m.at(r, pcol);
    if (x == 0) return;
    // factor * pivot == x  (mod p^level)
    const std::uint64_t factor = modarith::mul(x / scale, unit_inv, m.modulus);
    const std::uint64_t* src = &m.a[prow * m.cols];
    std::uint64_t* dst = &m.a[r * m.cols];
    for (std::size_t c = 0; c < m.cols; ++c)
        if (src[c] != 0) dst[c] = modarith::sub(dst[c], modarith::mul(factor, src[c], m.modulus), m.modulus);
}

struct PivotData {
    int val;
    std::uint64_t unit_inv;
    std::uint64_t scale;
};

PivotData pivot_data(const ModMatrix& m, std::size_t prow, std::size_t pcol) {
    const std::uint64_t piv = m.at(prow, pcol);
    if (piv == 0) throw std::invalid_argument("zero pivot");
    const int v = modarith::valuation(piv, m.p, m.level);
    std::uint64_t scale = 1;
    for (int i = 0; i < v; ++i) scale *= m.p;
    const std::uint64_t unit = piv / scale;
    return {v, modarith::inverse(unit % m.modulus, m.modulus), scale};
}

} // namespace

void convolve_serial(const ConvolutionTable& t, const Modulus& mod, const DenseSeries& a, const DenseSeries& b,
                     DenseSeries& out) {
    const std::size_t n = t.offsets.size() - 1;
    out = DenseSeries(n, mod.cap);
    for (std::size_t k = 0; k < n; ++k) convolve_one(t, mod, a, b, out, k);
}

void convolve_parallel(const ConvolutionTable& t, const Modulus& mod, const DenseSeries& a, const DenseSeries& b,
                       DenseSeries& out) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(t.offsets.size() - 1);
    out = DenseSeries(static_cast<std::size_t>(n), mod.cap);
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t k = 0; k < n; ++k) convolve_one(t, mod, a, b, out, static_cast<std::size_t>(k));
}

void convolve_auto(const ConvolutionTable& t, const Modulus& mod, const DenseSeries& a, const DenseSeries& b,
                   DenseSeries& out) {
    if (t.left.size() >= convolve_parallel_threshold && max_threads() > 1)
        convolve_parallel(t, mod, a, b, out);
    else
        convolve_serial(t, mod, a, b, out);
}

ModMatrix::ModMatrix(std::uint64_t p_, int level_, std::size_t rows_, std::size_t cols_)
    : p(p_), level(level_), modulus(1), rows(rows_), cols(cols_), a(rows_ * cols_, 0) {
    for (int i = 0; i < level; ++i) modulus *= p;
}

void eliminate_column_serial(ModMatrix& m, std::size_t prow, std::size_t pcol) {
    const auto pd = pivot_data(m, prow, pcol);
    for (std::size_t r = 0; r < m.rows; ++r)
        if (r != prow) eliminate_row(m, prow, pcol, r, pd.unit_inv, pd.scale);
}

void eliminate_column_parallel(ModMatrix& m, std::size_t prow, std::size_t pcol) {
    const auto pd = pivot_data(m, prow, pcol);
    const std::ptrdiff_t rows = static_cast<std::ptrdiff_t>(m.rows);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t r = 0; r < rows; ++r)
        if (static_cast<std::size_t>(r) != prow)
            eliminate_row(m, prow, pcol, static_cast<std::size_t>(r), pd.unit_inv, pd.scale);
}

void eliminate_column_auto(ModMatrix& m, std::size_t prow, std::size_t pcol) {
    if (m.rows * m.cols >= eliminate_parallel_threshold && max_threads() > 1)
        eliminate_column_parallel(m, prow, pcol);
    else
        eliminate_column_serial(m, prow, pcol);
}

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

} // namespace iwasawa::kernels
