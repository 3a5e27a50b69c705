#pragma once

// Shared test helpers: random generators and an independent integer
// polynomial oracle that never touches the library's arithmetic.

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "iwasawa/linear.hpp"
#include "iwasawa/parse.hpp"
#include "iwasawa/series.hpp"

namespace testing_support {

using namespace iwasawa;

/// Polynomial over Z with exponent-vector keys, __int128 coefficients.
struct IntPoly {
    int vars = 0;
    std::map<std::vector<int>, __int128> c;

    static IntPoly constant(int vars, __int128 v) {
        IntPoly r{vars, {}};
        if (v != 0) r.c[std::vector<int>(static_cast<std::size_t>(vars), 0)] = v;
        return r;
    }
    static IntPoly var(int vars, int i) {
        IntPoly r{vars, {}};
        std::vector<int> e(static_cast<std::size_t>(vars), 0);
        e[static_cast<std::size_t>(i)] = 1;
        r.c[e] = 1;
        return r;
    }
    IntPoly operator+(const IntPoly& o) const {
        IntPoly r = *this;
        for (auto& [e, v] : o.c) r.c[e] += v;
        r.prune();
        return r;
    }
    IntPoly operator-(const IntPoly& o) const { return *this + o * constant(vars, -1); }
    IntPoly operator*(const IntPoly& o) const {
        IntPoly r{vars, {}};
        for (auto& [e1, v1] : c)
            for (auto& [e2, v2] : o.c) {
                auto e = e1;
                for (std::size_t i = 0; i < e.size(); ++i) e[i] += e2[i];
                r.c[e] += v1 * v2;
            }
        r.prune();
        return r;
    }
    void prune() {
        for (auto it = c.begin(); it != c.end();) it = it->second == 0 ? c.erase(it) : std::next(it);
    }
    /// Substitute variable j by `s` (a polynomial in the target variable set),
    /// dropping variable j from the exponent vectors.
    IntPoly eliminate(int j, const IntPoly& s) const {
        IntPoly r{vars - 1, {}};
        for (auto& [e, v] : c) {
            std::vector<int> rest;
            for (int i = 0; i < vars; ++i)
                if (i != j) rest.push_back(e[static_cast<std::size_t>(i)]);
            IntPoly term{vars - 1, {{rest, v}}};
            for (int k = 0; k < e[static_cast<std::size_t>(j)]; ++k) term = term * s;
            r = r + term;
        }
        return r;
    }
    /// Reduce into the library ring (mod p^N, degree < D).
    PowerSeries to_series(const RingContext& ctx) const {
        PowerSeries s(ctx);
        const __int128 m = ctx.modulus();
        bool dropped = false;
        for (auto& [e, v] : c) {
            auto idx = ctx.monomials().index_of(e);
            if (idx == MonomialTable::npos) {
                dropped = true;
                continue;
            }
            __int128 r = v % m;
            if (r < 0) r += m;
            s.set_coeff(idx, PadicScalar::from_residue(ctx.prime(), ctx.precision(), ctx.precision(),
                                                       static_cast<std::uint64_t>(r)));
        }
        if (dropped) s.mark_truncated();
        return s;
    }
};

inline PowerSeries random_series(const RingContext& ctx, std::mt19937_64& rng, int terms, int max_degree,
                                 std::int64_t coeff_range = 50) {
    PowerSeries s(ctx);
    const auto& table = ctx.monomials();
    std::size_t limit = MonomialTable::count_below(ctx.vars(), std::min(max_degree + 1, ctx.degree_cap()));
    std::uniform_int_distribution<std::size_t> pick(0, limit - 1);
    std::uniform_int_distribution<std::int64_t> coef(-coeff_range, coeff_range);
    for (int t = 0; t < terms; ++t) s = s + PowerSeries::monomial(ctx, table.exponents(pick(rng)), PadicScalar::from_int(ctx, coef(rng)));
    return s;
}

inline PowerSeries random_unit(const RingContext& ctx, std::mt19937_64& rng, int terms, int max_degree) {
    PowerSeries s = random_series(ctx, rng, terms, max_degree);
    std::uniform_int_distribution<std::int64_t> c(1, static_cast<std::int64_t>(ctx.prime()) - 1);
    PadicScalar c0 = PadicScalar::from_int(ctx, c(rng));
    return s - PowerSeries::scalar(ctx, s.constant_term()) + PowerSeries::scalar(ctx, c0);
}

/// Monic in W_var of the given degree, lower coefficients in (p, other vars).
inline PowerSeries random_distinguished(const RingContext& ctx, std::mt19937_64& rng, int var, int degree) {
    const std::int64_t p = static_cast<std::int64_t>(ctx.prime());
    std::uniform_int_distribution<std::int64_t> c(-5, 5);
    std::vector<int> e(static_cast<std::size_t>(ctx.vars()), 0);
    e[static_cast<std::size_t>(var)] = degree;
    PowerSeries P = PowerSeries::monomial(ctx, e, PadicScalar::one(ctx));
    for (int k = 0; k < degree; ++k) {
        e.assign(static_cast<std::size_t>(ctx.vars()), 0);
        e[static_cast<std::size_t>(var)] = k;
        P = P + PowerSeries::monomial(ctx, e, PadicScalar::from_int(ctx, p * c(rng)));
        if (ctx.vars() > 1) {
            int other = (var + 1) % ctx.vars();
            e[static_cast<std::size_t>(other)] = 1;
            P = P + PowerSeries::monomial(ctx, e, PadicScalar::from_int(ctx, c(rng)));
        }
    }
    return P;
}

inline PowerSeries S(const RingContext& ctx, const char* text) { return parse_series(ctx, text); }

} // namespace testing_support

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace testing_support {

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

#ifdef FIXTURE_DIR
inline std::filesystem::path fixture(const std::string& name) { return std::filesystem::path(FIXTURE_DIR) / name; }

/// Every golden module file, sorted by name.
inline std::vector<std::filesystem::path> fixture_files() {
    std::vector<std::filesystem::path> out;
    for (const auto& e : std::filesystem::directory_iterator(FIXTURE_DIR))
        if (e.path().extension() == ".mod") out.push_back(e.path());
    std::sort(out.begin(), out.end());
    return out;
}
#endif

} // namespace testing_support
