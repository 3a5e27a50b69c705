#pragma once

// Closed-form log_p |M (x) R/(p^n, degree >= d)| for the module shapes in the
// golden fixture set. Independent of the elimination oracle.

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "iwasawa/module.hpp"

namespace testing_support {

using namespace iwasawa;

// Binomial count of monomials in `vars` variables of degree exactly e.
inline long exactly(int vars, int e) {
    if (vars == 0) return e == 0 ? 1 : 0;
    long r = 1;
    for (int k = 1; k < vars; ++k) r = r * (e + k) / k;
    return r;
}
inline long below(int vars, int d) {
    long s = 0;
    for (int e = 0; e < d; ++e) s += exactly(vars, e);
    return s;
}

// log_p |R/(g) / (p^n, degree >= d)| for the cyclic shapes used in the
// golden set: c*p^v, W_j^k, and a + u*W_j. R/(a + u W_j) is Z_p[[the other
// variables]] with W_j = -a/u, so a monomial of degree e in the others
// contributes Z/(p^n, a^(d-e)).
inline std::optional<long> cyclic_count(const PowerSeries& g, int n, int d) {
    const RingContext& ctx = g.context();
    const int m = ctx.vars();
    const auto& table = ctx.monomials();
    std::vector<std::pair<std::vector<int>, PadicScalar>> t;
    for (const auto& [k, c] : g.terms()) {
        auto e = table.exponents(k);
        t.emplace_back(std::vector<int>(e.begin(), e.end()), c);
    }
    auto is_const = [](const std::vector<int>& e) { return std::all_of(e.begin(), e.end(), [](int x) { return x == 0; }); };
    auto single_var = [&](const std::vector<int>& e) -> int {
        int j = -1;
        for (int i = 0; i < m; ++i)
            if (e[static_cast<std::size_t>(i)]) {
                if (j >= 0) return -2;
                j = i;
            }
        return j;
    };
    if (t.size() == 1 && is_const(t[0].first)) return std::min(t[0].second.valuation(), n) * below(m, d);
    if (t.size() == 1 && t[0].second.is_unit()) {
        const int j = single_var(t[0].first);
        if (j < 0) return std::nullopt;
        const int k = t[0].first[static_cast<std::size_t>(j)];
        // monomials of degree < d with W_j-exponent < k
        long s = 0;
        for (int ej = 0; ej < k && ej < d; ++ej) s += below(m - 1, d - ej);
        return s * n;
    }
    if (t.size() == 2 && is_const(t[0].first) && !t[0].second.is_unit()) {
        const int j = single_var(t[1].first);
        if (j < 0 || t[1].first[static_cast<std::size_t>(j)] != 1 || !t[1].second.is_unit()) return std::nullopt;
        const int s = t[0].second.valuation();
        long total = 0;
        for (int e = 0; e < d; ++e) total += exactly(m - 1, e) * std::min<long>(n, static_cast<long>(s) * (d - e));
        return total;
    }
    return std::nullopt;
}

// R/(p, W_j) from a 1x2 null block [p, W_j].
inline std::optional<long> null_count(const Presentation& p, int n, int d) {
    if (p.rows != 1 || p.cols != 2 || n < 1) return std::nullopt;
    if (!p.at(0, 0).agrees_with(PowerSeries::constant(p.context, static_cast<std::int64_t>(p.context.prime()))))
        return std::nullopt;
    for (int j = 0; j < p.context.vars(); ++j)
        if (p.at(0, 1).agrees_with(PowerSeries::variable(p.context, j))) return below(p.context.vars() - 1, d);
    return std::nullopt;
}

inline std::optional<long> symbolic_count(const IwasawaModule& m, int n, int d) {
    const auto& s = m.standard_form();
    long total = static_cast<long>(s.free_rank) * n * below(m.context().vars(), d);
    for (const auto& g : s.cyclics) {
        auto c = cyclic_count(g, n, d);
        if (!c) return std::nullopt;
        total += *c;
    }
    if (s.pseudo_null_part) {
        auto c = null_count(*s.pseudo_null_part, n, d);
        if (!c) return std::nullopt;
        total += *c;
    }
    return total;
}

} // namespace testing_support
