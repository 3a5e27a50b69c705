#include "iwasawa/oracle.hpp"

#include <algorithm>
#include <sstream>

namespace iwasawa {

using kernels::ModMatrix;

namespace {

std::uint64_t reduce(const PadicScalar& c, std::uint64_t modulus) { return c.residue() % modulus; }

int valuation_of(std::uint64_t x, const ModMatrix& m) {
    return x == 0 ? m.level : modarith::valuation(x, m.p, m.level);
}

struct Elimination {
    std::vector<int> pivot_valuations; // one per pivot, each < level
    std::vector<std::size_t> pivot_cols;
    ModMatrix transform; // column operations, when tracked
};

// Smith form over Z/p^level. Each step takes an entry of least valuation in
// the remaining block (first in row-major order), clears its column by row
// operations and its row by column operations. The valuation multiset is the
// only output that matters and does not depend on the choices.
Elimination smith(ModMatrix a, bool track_columns) {
    Elimination out;
    if (track_columns) {
        out.transform = ModMatrix(a.p, a.level, a.cols, a.cols);
        for (std::size_t i = 0; i < a.cols; ++i) out.transform.at(i, i) = 1;
    }
    std::vector<bool> row_done(a.rows, false), col_done(a.cols, false);
    for (;;) {
        int best = a.level;
        std::size_t pr = 0, pc = 0;
        for (std::size_t r = 0; r < a.rows && best > 0; ++r) {
            if (row_done[r]) continue;
            for (std::size_t c = 0; c < a.cols; ++c) {
                if (col_done[c] || a.at(r, c) == 0) continue;
                const int v = valuation_of(a.at(r, c), a);
                if (v < best) {
                    best = v;
                    pr = r;
                    pc = c;
                    if (v == 0) break;
                }
            }
        }
        if (best >= a.level) break;
        kernels::eliminate_column_auto(a, pr, pc);
        // every entry of row pr is divisible by the pivot: clear it with
        // column operations, which only touch row pr of `a`
        const std::uint64_t piv = a.at(pr, pc);
        std::uint64_t scale = 1;
        for (int i = 0; i < best; ++i) scale *= a.p;
        const std::uint64_t unit_inv = modarith::inverse((piv / scale) % a.modulus, a.modulus);
        for (std::size_t c = 0; c < a.cols; ++c) {
            if (c == pc || a.at(pr, c) == 0) continue;
            const std::uint64_t q = modarith::mul(a.at(pr, c) / scale, unit_inv, a.modulus);
            a.at(pr, c) = 0;
            if (track_columns)
                for (std::size_t r = 0; r < out.transform.rows; ++r)
                    if (out.transform.at(r, pc) != 0)
                        out.transform.at(r, c) = modarith::sub(out.transform.at(r, c),
                                                               modarith::mul(q, out.transform.at(r, pc), a.modulus), a.modulus);
        }
        row_done[pr] = col_done[pc] = true;
        out.pivot_valuations.push_back(best);
        out.pivot_cols.push_back(pc);
    }
    return out;
}

// log_p of the subgroup generated by the columns of `a`.
int log_image(const ModMatrix& a) {
    int s = 0;
    for (int v : smith(a, false).pivot_valuations) s += a.level - v;
    return s;
}

struct Level {
    RingContext ctx;
    int n;
    int d;
    std::size_t basis; // monomials of degree < d
};

Level make_level(const RingContext& ctx, int n, int d) {
    if (n < 1 || n > ctx.precision()) throw std::invalid_argument("oracle: need 1 <= n <= precision");
    if (d < 1 || d > ctx.degree_cap()) throw std::invalid_argument("oracle: need 1 <= d <= degree cap");
    return {ctx, n, d, MonomialTable::count_below(ctx.vars(), d)};
}

void guard(std::size_t rows, std::size_t cols, std::size_t max_dim) {
    if (rows > max_dim || cols > max_dim)
        throw UnsupportedError("finite quotient of size " + std::to_string(rows) + "x" + std::to_string(cols) +
                               " exceeds the oracle limit " + std::to_string(max_dim));
}

// Column block for f * W^nu, nu running over the basis; rows offset by
// `row0`. Terms landing at degree >= d are cut.
void multiply_into(ModMatrix& a, const Level& lv, const PowerSeries& f, std::size_t row0, std::size_t col0) {
    const auto& table = lv.ctx.monomials();
    for (const auto& [k, c] : f.terms()) {
        const int deg = table.degree(k);
        if (deg >= lv.d) continue;
        if (c.precision() < lv.n)
            throw IndeterminateError("oracle: coefficient of degree " + std::to_string(deg) + " known only to p^" +
                                     std::to_string(c.precision()));
        const std::uint64_t r = reduce(c, a.modulus);
        if (r == 0) continue;
        for (std::size_t nu = 0; nu < lv.basis; ++nu) {
            if (deg + table.degree(nu) >= lv.d) break; // basis is graded
            const std::size_t t = table.product(k, nu);
            auto& cell = a.at(row0 + t, col0 + nu);
            cell = modarith::add(cell, r, a.modulus);
        }
    }
}

ModMatrix relation_matrix(const Presentation& p, const Level& lv, std::size_t max_dim) {
    const std::size_t rows = static_cast<std::size_t>(p.rows) * lv.basis;
    const std::size_t cols = static_cast<std::size_t>(p.cols) * lv.basis;
    guard(rows, cols, max_dim);
    ModMatrix a(lv.ctx.prime(), lv.n, rows, cols);
    for (int r = 0; r < p.rows; ++r)
        for (int c = 0; c < p.cols; ++c)
            multiply_into(a, lv, p.at(r, c), static_cast<std::size_t>(r) * lv.basis, static_cast<std::size_t>(c) * lv.basis);
    return a;
}

ModMatrix hconcat(const ModMatrix& x, const ModMatrix& y) {
    ModMatrix z(x.p, x.level, x.rows, x.cols + y.cols);
    for (std::size_t r = 0; r < x.rows; ++r) {
        std::copy_n(&x.a[r * x.cols], x.cols, &z.a[r * z.cols]);
        if (y.cols) std::copy_n(&y.a[r * y.cols], y.cols, &z.a[r * z.cols + x.cols]);
    }
    return z;
}

} // namespace

int FiniteQuotient::log_cardinality() const {
    int s = 0;
    for (int e : invariants) s += e;
    return s;
}

std::string FiniteQuotient::to_string() const {
    std::ostringstream out;
    if (invariants.empty()) return "0";
    // group equal exponents: (Z/p^e)^k
    for (std::size_t i = 0; i < invariants.size();) {
        std::size_t j = i;
        while (j < invariants.size() && invariants[j] == invariants[i]) ++j;
        if (i) out << " + ";
        out << "(Z/" << context.prime() << "^" << invariants[i] << ")";
        if (j - i > 1) out << "^" << (j - i);
        i = j;
    }
    return out.str();
}

FiniteQuotient finite_quotient(const IwasawaModule& m, int n, int d, std::size_t max_dim) {
    const Level lv = make_level(m.context(), n, d);
    const Presentation p = m.to_presentation();
    FiniteQuotient q{m.context(), n, d, lv.basis, p.rows, relation_matrix(p, lv, max_dim), {}};
    const auto piv = smith(q.relations, false).pivot_valuations;
    const std::size_t free = q.relations.rows - piv.size();
    for (std::size_t i = 0; i < free; ++i) q.invariants.push_back(n);
    for (int v : piv)
        if (v > 0) q.invariants.push_back(v);
    std::sort(q.invariants.begin(), q.invariants.end());
    return q;
}

RankProbe oracle_rank_probe(const IwasawaModule& m, const std::vector<std::pair<int, int>>& grid, std::size_t max_dim) {
    RankProbe out;
    for (auto [n, d] : grid) out.samples.push_back({n, d, finite_quotient(m, n, d, max_dim).log_cardinality()});
    out.note = "advisory: finite-level growth fit, not a proof";
    std::vector<int> ns, ds;
    for (const auto& s : out.samples) {
        ns.push_back(s.n);
        ds.push_back(s.d);
    }
    std::sort(ns.begin(), ns.end());
    std::sort(ds.begin(), ds.end());
    const int n1 = ns.front(), n2 = ns.back(), d1 = ds.front(), d2 = ds.back();
    auto at = [&](int n, int d) -> std::optional<int> {
        for (const auto& s : out.samples)
            if (s.n == n && s.d == d) return s.log_cardinality;
        return std::nullopt;
    };
    if (n1 == n2 || d1 == d2 || !at(n1, d1) || !at(n1, d2) || !at(n2, d1) || !at(n2, d2)) {
        out.note += "; the grid needs two n and two d values for a fit";
        return out;
    }
    const int vars = m.context().vars();
    const double c1 = static_cast<double>(MonomialTable::count_below(vars, d1));
    const double c2 = static_cast<double>(MonomialTable::count_below(vars, d2));
    const double mixed = *at(n2, d2) - *at(n2, d1) - *at(n1, d2) + *at(n1, d1);
    out.rank = mixed / ((n2 - n1) * (c2 - c1));
    if (vars == 1) {
        out.mu = (*at(n1, d2) - *at(n1, d1)) / (c2 - c1) - *out.rank * n1;
        out.lambda = static_cast<double>(*at(n2, d1) - *at(n1, d1)) / (n2 - n1) - *out.rank * c1;
    }
    return out;
}

std::pair<int, int> interior_level(int n, int d) {
    const int depth = (n + 1) / 2;
    return {depth, d - depth - 1};
}

namespace {

// log_p of the image of ker(l) at level (n, d) inside the interior quotient.
struct KernelImage {
    int log_kernel;
    int log_interior;
};

KernelImage kernel_image(const Presentation& p, const PowerSeries& l, const Level& lv, const Level& inner,
                         std::size_t max_dim) {
    const ModMatrix rel = relation_matrix(p, lv, max_dim);
    const std::size_t rows = rel.rows;
    guard(rows, rows + rel.cols, max_dim);
    // x lies in the kernel iff (x, y) solves [L | -Rel] (x, y) = 0
    ModMatrix mul(rel.p, rel.level, rows, rows);
    for (int g = 0; g < p.rows; ++g) {
        const std::size_t off = static_cast<std::size_t>(g) * lv.basis;
        ModMatrix block(rel.p, rel.level, lv.basis, lv.basis);
        multiply_into(block, lv, l, 0, 0);
        for (std::size_t r = 0; r < lv.basis; ++r)
            for (std::size_t c = 0; c < lv.basis; ++c) mul.at(off + r, off + c) = block.at(r, c);
    }
    ModMatrix neg = rel;
    for (auto& x : neg.a) x = x == 0 ? 0 : neg.modulus - x;
    const ModMatrix sys = hconcat(mul, neg);
    const Elimination e = smith(sys, true);
    const std::size_t total = sys.cols;
    std::vector<int> col_val(total, -1);
    for (std::size_t i = 0; i < e.pivot_cols.size(); ++i) col_val[e.pivot_cols[i]] = e.pivot_valuations[i];

    // kernel generators, x part only
    std::vector<std::vector<std::uint64_t>> gens;
    for (std::size_t c = 0; c < total; ++c) {
        std::uint64_t scale = 1;
        if (col_val[c] >= 0)
            for (int i = 0; i < rel.level - col_val[c]; ++i) scale *= rel.p;
        if (col_val[c] == 0) continue; // scale = p^level = 0
        std::vector<std::uint64_t> x(rows);
        bool nonzero = false;
        for (std::size_t r = 0; r < rows; ++r) {
            x[r] = modarith::mul(e.transform.at(r, c), scale % rel.modulus, rel.modulus);
            nonzero = nonzero || x[r] != 0;
        }
        if (nonzero) gens.push_back(std::move(x));
    }
    // |ker| = |image of the generators + Rel| / |Rel|
    ModMatrix kx(rel.p, rel.level, rows, gens.size());
    for (std::size_t j = 0; j < gens.size(); ++j)
        for (std::size_t r = 0; r < rows; ++r) kx.at(r, j) = gens[j][r];
    const int log_kernel = log_image(hconcat(kx, rel)) - log_image(rel);

    const ModMatrix rel_in = relation_matrix(p, inner, max_dim);
    ModMatrix proj(rel_in.p, rel_in.level, rel_in.rows, gens.size());
    for (int g = 0; g < p.rows; ++g)
        for (std::size_t nu = 0; nu < inner.basis; ++nu)
            for (std::size_t j = 0; j < gens.size(); ++j)
                proj.at(static_cast<std::size_t>(g) * inner.basis + nu, j) =
                    gens[j][static_cast<std::size_t>(g) * lv.basis + nu] % rel_in.modulus;
    const int log_interior = log_image(hconcat(proj, rel_in)) - log_image(rel_in);
    return {log_kernel, log_interior};
}

} // namespace

TorsionSubProbe oracle_torsion_sub(const IwasawaModule& m, const LinearElement& l, int n, int d, std::size_t max_dim) {
    m.context().require_same(l.context());
    const auto [ni, di] = interior_level(n, d);
    if (di < 1) throw std::invalid_argument("oracle_torsion_sub: d too small for an interior (need d > ceil(n/2) + 1)");
    const Level lv = make_level(m.context(), n, d);
    const Level inner = make_level(m.context(), ni, di);
    const Presentation p = m.to_presentation();
    const PowerSeries ls = l.as_series();
    TorsionSubProbe out;
    out.n = n;
    out.d = d;
    out.interior_n = ni;
    out.interior_d = di;
    const KernelImage k = kernel_image(p, ls, lv, inner, max_dim);
    out.log_kernel = k.log_kernel;
    out.log_interior = k.log_interior;
    if (d + 1 <= m.context().degree_cap()) {
        const KernelImage k2 = kernel_image(p, ls, make_level(m.context(), n, d + 1), inner, max_dim);
        out.stable = k2.log_interior == k.log_interior;
        out.note = out.stable ? "interior kernel stable from d to d+1" : "interior kernel still shrinking at d+1";
    } else {
        out.note = "d at the degree cap: stability not checked";
    }
    return out;
}

} // namespace iwasawa
