#include "iwasawa/weierstrass.hpp"

#include <string>
#include <vector>

#include "iwasawa/errors.hpp"

namespace iwasawa {

namespace {

// Terms with W_var-exponent < lambda.
PowerSeries low_part(const PowerSeries& x, int var, int lambda) {
    PowerSeries r(x.context());
    const auto& table = x.context().monomials();
    for (const auto& [k, c] : x.terms())
        if (table.exponents(k)[static_cast<std::size_t>(var)] < lambda) r.set_coeff(k, c);
    return r;
}

// (x - low_part(x)) / W_var^lambda.
PowerSeries shifted_high_part(const PowerSeries& x, int var, int lambda) {
    const auto& table = x.context().monomials();
    PowerSeries r(x.context());
    std::vector<int> e;
    for (const auto& [k, c] : x.terms()) {
        auto ex = table.exponents(k);
        if (ex[static_cast<std::size_t>(var)] < lambda) continue;
        e.assign(ex.begin(), ex.end());
        e[static_cast<std::size_t>(var)] -= lambda;
        r.set_coeff(table.index_of(e), c);
    }
    if (!x.is_polynomial()) r.mark_truncated();
    return r;
}

bool same_series(const PowerSeries& a, const PowerSeries& b) {
    return a.term_count() == b.term_count() && a.agrees_with(b);
}

// Copy into a context that differs only in the degree cap.
PowerSeries recast(const PowerSeries& x, const RingContext& to) {
    if (x.context() == to) return x;
    const auto& from = x.context().monomials();
    PowerSeries r(to);
    bool dropped = false;
    for (const auto& [k, c] : x.terms()) {
        auto idx = to.monomials().index_of(from.exponents(k));
        if (idx == MonomialTable::npos)
            dropped = true;
        else
            r.set_coeff(idx, c);
    }
    if (!x.is_polynomial() || dropped) r.mark_truncated();
    return r;
}

// Dense rounds cost about (monomials)^2 / vars!; one variable is always cheap.
constexpr std::size_t working_monomial_budget = 480;

// Truncation noise in the fixed point below sits at weight
// lambda*(v + a) + e >= cap - lambda (a = degree in the other variables,
// e = degree in W_var, v = p-adic valuation), and the weight never drops
// under q -> tau(q h) since h lies in (p, other variables). Exact inputs
// may therefore be divided at a wider cap to push that noise past p^N.
int working_cap(const RingContext& ctx, int lambda) {
    const int n = ctx.precision(), d = ctx.degree_cap();
    int want = lambda * (n + 1) + d - 1;
    if (ctx.vars() > 1) want = std::max(want, lambda * (n + d));
    int cap = d;
    while (cap < want && (ctx.vars() == 1 || MonomialTable::count_below(ctx.vars(), cap + 1) <= working_monomial_budget)) ++cap;
    return cap;
}

// Digits that survive truncation noise of weight >= floor at monomial k.
int noise_bound(const MonomialTable& table, std::size_t k, int var, int lambda, int floor) {
    const int e = table.exponents(k)[static_cast<std::size_t>(var)];
    const int a = table.degree(k) - e;
    return (floor - e + lambda - 1) / lambda - a;
}

struct WorkingDivision {
    PowerSeries quotient;  // in the working context
    PowerSeries remainder; // in the working context
    int cap;
};

WorkingDivision divide_working(const PowerSeries& x, const PowerSeries& f, int var, int lambda) {
    const RingContext& ctx = f.context();
    const bool exact = x.is_polynomial() && f.is_polynomial();
    const int cap = exact ? working_cap(ctx, lambda) : ctx.degree_cap();
    const RingContext wctx = RingContext::make(ctx.prime(), ctx.vars(), ctx.precision(), cap);
    const PowerSeries wx = recast(x, wctx);
    const PowerSeries wf = recast(f, wctx);

    const PowerSeries unit_inv = shifted_high_part(wf, var, lambda).inverse();
    const PowerSeries h = unit_inv * low_part(wf, var, lambda);
    const PowerSeries top = shifted_high_part(wx, var, lambda);

    // q~ = tau(x) - tau(q~ h); each round raises the (p, other variables)-adic
    // order of the correction, so N + cap rounds reach the fixed point.
    PowerSeries qt = top;
    const int rounds = ctx.precision() + cap + 2;
    for (int i = 0; i < rounds; ++i) {
        PowerSeries next = top - shifted_high_part(qt * h, var, lambda);
        bool done = same_series(next, qt);
        qt = std::move(next);
        if (done) break;
    }
    PowerSeries remainder = low_part(wx - qt * h, var, lambda);
    PowerSeries quotient = qt * unit_inv;
    quotient.mark_truncated();
    return {std::move(quotient), std::move(remainder), cap};
}

// Back to the caller's ring with the precision the truncation justifies.
PowerSeries settle(const PowerSeries& w, const RingContext& ctx, int var, int lambda, int floor, bool low_only) {
    PowerSeries r = recast(w, ctx);
    const MonomialTable& table = ctx.monomials();
    r.cap_precision([&](std::size_t k) {
        if (low_only && table.exponents(k)[static_cast<std::size_t>(var)] >= lambda) return ctx.precision();
        return noise_bound(table, k, var, lambda, floor);
    });
    return r;
}

WeierstrassDivision divide_regular(const PowerSeries& x, const PowerSeries& f, int var, int lambda) {
    const RingContext& ctx = f.context();
    if (lambda == 0) {
        PowerSeries q = x * f.inverse();
        q.mark_truncated();
        return {std::move(q), PowerSeries(ctx)};
    }
    auto w = divide_working(x, f, var, lambda);
    PowerSeries q = settle(w.quotient, ctx, var, lambda, w.cap - lambda, false);
    PowerSeries r = settle(w.remainder, ctx, var, lambda, w.cap, true);
    q.mark_truncated();
    if (x.is_polynomial() && f.is_polynomial() && ctx.vars() == 1) r.mark_polynomial();
    return {std::move(q), std::move(r)};
}

} // namespace

int weierstrass_degree(const PowerSeries& f, int var) {
    if (f.is_zero()) return -1;
    const int mu = f.content_valuation();
    const auto& ctx = f.context();
    std::vector<int> e(static_cast<std::size_t>(ctx.vars()), 0);
    for (int k = 0; k < ctx.degree_cap(); ++k) {
        e[static_cast<std::size_t>(var)] = k;
        const PadicScalar c = f.coeff(e);
        if (!c.is_zero() && c.valuation() == mu && c.precision() > mu) return k;
    }
    return -1;
}

WeierstrassData weierstrass_prepare(const PowerSeries& f, int var) {
    const RingContext& ctx = f.context();
    if (var < 0 || var >= ctx.vars()) throw std::out_of_range("weierstrass_prepare: variable index out of range");
    if (f.is_zero()) throw std::invalid_argument("weierstrass_prepare: zero series");

    const int mu = f.content_valuation();
    const PowerSeries g = f.divide_by_p_power(mu);
    const int lambda = weierstrass_degree(g, var);
    if (lambda < 0)
        throw NotPreparable("mu-dominated or insufficient degree cap: " + f.to_string() + " is not regular in " +
                            variable_name(var, ctx.vars()));

    if (lambda == 0) {
        PowerSeries one = PowerSeries::constant(ctx, 1);
        return {var, mu, 0, one, g};
    }

    std::vector<int> e(static_cast<std::size_t>(ctx.vars()), 0);
    e[static_cast<std::size_t>(var)] = lambda;
    const PowerSeries w_lambda = PowerSeries::monomial(ctx, e, PadicScalar::one(ctx));
    auto w = divide_working(w_lambda, g, var, lambda);
    if (!w.quotient.is_unit()) throw PrecisionExhausted("Weierstrass quotient lost its unit constant term");
    const RingContext wctx = w.quotient.context();
    PowerSeries unit = w.quotient.inverse();
    std::vector<int> we(static_cast<std::size_t>(ctx.vars()), 0);
    we[static_cast<std::size_t>(var)] = lambda;
    PowerSeries distinguished = PowerSeries::monomial(wctx, we, PadicScalar::one(wctx)) - w.remainder;

    WeierstrassData out{var, mu, lambda, settle(distinguished, ctx, var, lambda, w.cap, true),
                        settle(unit, ctx, var, lambda, w.cap - lambda, false)};
    out.unit.mark_truncated();
    if (ctx.vars() == 1)
        out.distinguished.mark_polynomial();
    else
        out.distinguished.mark_truncated();
    return out;
}

WeierstrassDivision weierstrass_divide(const PowerSeries& g, const PowerSeries& f, int var) {
    g.context().require_same(f.context());
    if (var < 0 || var >= f.context().vars()) throw std::out_of_range("weierstrass_divide: variable index out of range");
    if (f.is_zero() || f.content_valuation() != 0)
        throw NotPreparable("divisor must have p-content 0: " + f.to_string());
    const int lambda = weierstrass_degree(f, var);
    if (lambda < 0) throw NotPreparable("divisor not regular in " + variable_name(var, f.context().vars()));
    return divide_regular(g, f, var, lambda);
}

} // namespace iwasawa
