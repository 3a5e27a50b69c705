#include "iwasawa/linear.hpp"

#include <algorithm>
#include <stdexcept>

#include "iwasawa/errors.hpp"

namespace iwasawa {

LinearElement LinearElement::make(const RingContext& ctx, std::vector<PadicScalar> a) {
    if (ctx.vars() < 1) throw std::invalid_argument("linear element needs at least one variable");
    if (a.size() != static_cast<std::size_t>(ctx.vars()) + 1)
        throw std::invalid_argument("linear element needs " + std::to_string(ctx.vars() + 1) + " coefficients");
    if (a[0].is_unit()) throw std::invalid_argument("linear element: constant term must be divisible by p");
    if (std::none_of(a.begin() + 1, a.end(), [](const PadicScalar& c) { return c.is_unit(); }))
        throw std::invalid_argument("linear element: some variable coefficient must be a unit");
    return LinearElement(ctx, std::move(a));
}

LinearElement LinearElement::make(const RingContext& ctx, std::span<const std::int64_t> coefficients) {
    std::vector<PadicScalar> a;
    for (auto c : coefficients) a.push_back(PadicScalar::from_int(ctx, c));
    return make(ctx, std::move(a));
}

LinearElement LinearElement::from_series(const PowerSeries& f) {
    const RingContext& ctx = f.context();
    if (f.total_degree() > 1 || !f.is_polynomial())
        throw std::invalid_argument("linear element must have total degree <= 1: " + f.to_string());
    std::vector<PadicScalar> a{f.constant_term()};
    std::vector<int> e(static_cast<std::size_t>(ctx.vars()), 0);
    for (int i = 0; i < ctx.vars(); ++i) {
        e[static_cast<std::size_t>(i)] = 1;
        a.push_back(f.coeff(e));
        e[static_cast<std::size_t>(i)] = 0;
    }
    return make(ctx, std::move(a));
}

int LinearElement::pivot() const {
    for (int i = static_cast<int>(a_.size()) - 1; i >= 1; --i)
        if (a_[static_cast<std::size_t>(i)].is_unit()) return i - 1;
    throw std::logic_error("linear element without unit coefficient");
}

PowerSeries LinearElement::as_series() const {
    PowerSeries s = PowerSeries::scalar(ctx_, a_[0]);
    for (int i = 0; i < ctx_.vars(); ++i)
        s = s + PowerSeries::variable(ctx_, i).scaled(a_[static_cast<std::size_t>(i) + 1]);
    return s;
}

bool linear_ideal_equal(const LinearElement& l, const LinearElement& l2) {
    l.context().require_same(l2.context());
    const std::size_t j = static_cast<std::size_t>(l2.pivot()) + 1;
    const auto& a = l.coefficients();
    const auto& b = l2.coefficients();
    if (!a[j].is_unit()) return false;
    const PadicScalar u = a[j] * b[j].inverse();
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!a[i].agrees_with(u * b[i])) return false;
    return true;
}

LinearElement random_linear_element(const RingContext& ctx, std::mt19937_64& rng, int used_vars) {
    if (used_vars < 0) used_vars = ctx.vars();
    if (used_vars < 1 || used_vars > ctx.vars()) throw std::invalid_argument("linear elements need at least one variable");
    std::uniform_int_distribution<std::int64_t> small(-9, 9);
    const auto p = static_cast<std::int64_t>(ctx.prime());
    std::vector<std::int64_t> a(static_cast<std::size_t>(ctx.vars()) + 1);
    a[0] = p * small(rng);
    bool unit = false;
    for (std::size_t i = 1; i <= static_cast<std::size_t>(used_vars); ++i) {
        a[i] = small(rng);
        unit = unit || a[i] % p != 0;
    }
    if (!unit) {
        std::uniform_int_distribution<std::size_t> pick(1, static_cast<std::size_t>(used_vars));
        a[pick(rng)] = 1;
    }
    return LinearElement::make(ctx, std::span<const std::int64_t>(a));
}

PowerSeries eliminate_variable(const PowerSeries& f, const LinearElement& l) {
    const RingContext& ctx = f.context();
    ctx.require_same(l.context());
    const int m = ctx.vars();
    const int j = l.pivot();
    const RingContext target = ctx.with_vars(m - 1);
    const auto& a = l.coefficients();

    // W_j <- s = -a_j^{-1} (a0 + sum_{i != j} a_i W_i), written in the target ring.
    const PadicScalar neg_inv = -a[static_cast<std::size_t>(j) + 1].inverse();
    PowerSeries s = PowerSeries::scalar(target, a[0] * neg_inv);
    for (int i = 0; i < m; ++i) {
        if (i == j) continue;
        const int ti = i < j ? i : i - 1;
        s = s + PowerSeries::variable(target, ti).scaled(a[static_cast<std::size_t>(i) + 1] * neg_inv);
    }

    // Slice f by the exponent of W_j.
    const MonomialTable& src = ctx.monomials();
    const int cap = ctx.degree_cap();
    std::vector<PowerSeries> slices(static_cast<std::size_t>(cap), PowerSeries(target));
    std::vector<int> reduced(static_cast<std::size_t>(m - 1));
    int top = -1;
    for (const auto& [k, c] : f.terms()) {
        auto e = src.exponents(k);
        int ej = e[static_cast<std::size_t>(j)];
        for (int i = 0, t = 0; i < m; ++i)
            if (i != j) reduced[static_cast<std::size_t>(t++)] = e[static_cast<std::size_t>(i)];
        slices[static_cast<std::size_t>(ej)].set_coeff(target.monomials().index_of(reduced), c);
        top = std::max(top, ej);
    }

    PowerSeries result(target);
    for (int e = top; e >= 0; --e) result = result * s + slices[static_cast<std::size_t>(e)];

    if (!f.is_polynomial()) {
        // Discarded terms of degree >= D land in p^(v*(D-b)) at degree b.
        const PadicScalar c0 = a[0] * neg_inv;
        if (!c0.is_exact_zero()) {
            const int v = c0.valuation();
            const MonomialTable& dst = target.monomials();
            result.cap_precision([&](std::size_t k) { return v * (cap - dst.degree(k)); });
        }
        result.mark_truncated();
    }
    return result;
}

} // namespace iwasawa
