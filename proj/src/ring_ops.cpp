#include "iwasawa/ring_ops.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <vector>

namespace iwasawa {

PowerSeries substitute(const PowerSeries& f, int var, const PowerSeries& s) {
    const RingContext& ctx = f.context();
    ctx.require_same(s.context());
    const auto& table = ctx.monomials();
    const int cap = ctx.degree_cap();

    std::vector<PowerSeries> slices(static_cast<std::size_t>(cap), PowerSeries(ctx));
    std::vector<int> e;
    int top = -1;
    for (const auto& [k, c] : f.terms()) {
        auto ex = table.exponents(k);
        e.assign(ex.begin(), ex.end());
        const int ev = e[static_cast<std::size_t>(var)];
        e[static_cast<std::size_t>(var)] = 0;
        slices[static_cast<std::size_t>(ev)].set_coeff(table.index_of(e), c);
        top = std::max(top, ev);
    }
    PowerSeries result(ctx);
    for (int k = top; k >= 0; --k) result = result * s + slices[static_cast<std::size_t>(k)];

    const PadicScalar c0 = s.constant_term();
    if (!f.is_polynomial() && !c0.is_exact_zero()) {
        const int v = c0.valuation();
        if (v == 0) throw std::invalid_argument("substitution with a unit constant term does not converge");
        result.cap_precision([&](std::size_t k) { return v * (cap - table.degree(k)); });
    }
    if (!f.is_polynomial()) result.mark_truncated();
    return result;
}

PowerSeries inverted_group_variable(const RingContext& ctx, int var) {
    PowerSeries s(ctx);
    std::vector<int> e(static_cast<std::size_t>(ctx.vars()), 0);
    for (int k = 1; k < ctx.degree_cap(); ++k) {
        e[static_cast<std::size_t>(var)] = k;
        s.set_coeff(ctx.monomials().index_of(e), PadicScalar::from_int(ctx, k % 2 ? -1 : 1));
    }
    s.mark_truncated();
    return s;
}

PowerSeries involution(const PowerSeries& f, int var) {
    if (var < 0 || var >= f.context().vars()) throw std::out_of_range("involution: variable index out of range");
    bool touches = std::any_of(f.terms().begin(), f.terms().end(), [&](const auto& t) {
        return f.context().monomials().exponents(t.first)[static_cast<std::size_t>(var)] != 0;
    });
    if (!touches) return f;
    PowerSeries r = substitute(f, var, inverted_group_variable(f.context(), var));
    r.mark_truncated();
    return r;
}

namespace {

void require_one_var(const PowerSeries& f, const char* what) {
    if (f.context().vars() != 1) throw std::invalid_argument(std::string(what) + " needs the one-variable ring Z_p[[W]]");
}

PowerSeries p_power(const RingContext& ctx, int k) {
    return PowerSeries::scalar(ctx, PadicScalar::from_residue(ctx.prime(), ctx.precision(), ctx.precision(),
                                                              k >= ctx.precision() ? 0 : ctx.power(k)));
}

PowerSeries assemble(const RingContext& ctx, int mu, const PowerSeries& distinguished) {
    if (mu >= ctx.precision()) throw PrecisionExhausted("p-power exponent reaches the precision");
    PowerSeries r = distinguished * p_power(ctx, mu);
    if (distinguished.is_polynomial()) r.mark_polynomial();
    return r;
}

} // namespace

PowerSeries normalize_one_var(const PowerSeries& f) {
    require_one_var(f, "normalize_one_var");
    auto w = weierstrass_prepare(f, 0);
    return assemble(f.context(), w.mu, w.distinguished);
}

PowerSeries gcd_one_var(const PowerSeries& f, const PowerSeries& g) {
    require_one_var(f, "gcd_one_var");
    f.context().require_same(g.context());
    if (f.is_zero() && g.is_zero()) throw std::invalid_argument("gcd of two zero series");
    if (f.is_zero()) return normalize_one_var(g);
    if (g.is_zero()) return normalize_one_var(f);

    const RingContext& ctx = f.context();
    auto wf = weierstrass_prepare(f, 0);
    auto wg = weierstrass_prepare(g, 0);
    const int mu = std::min(wf.mu, wg.mu);

    PowerSeries a = wf.distinguished;
    PowerSeries b = wg.distinguished;
    if (a.total_degree() < b.total_degree()) std::swap(a, b);
    // Euclid on distinguished polynomials; each remainder is re-prepared so the
    // divisor stays monic. p-power factors are coprime to distinguished ones.
    for (;;) {
        if (b.total_degree() <= 0) return p_power(ctx, mu);
        PowerSeries r = weierstrass_divide(a, b, 0).remainder;
        // A remainder that vanishes at its tracked precision counts as zero.
        if (r.vanishes()) return assemble(ctx, mu, b);
        if (r.content_valuation() >= r.min_precision())
            throw PrecisionExhausted("gcd: remainder " + r.to_string() + " has no significant digits left");
        auto wr = weierstrass_prepare(r, 0);
        if (wr.distinguished.min_precision() < 1)
            throw PrecisionExhausted("gcd: precision exhausted after extracting p^" + std::to_string(wr.mu));
        a = std::move(b);
        b = std::move(wr.distinguished);
    }
}

PowerSeries exact_quotient_one_var(const PowerSeries& a, const PowerSeries& b) {
    require_one_var(a, "exact_quotient_one_var");
    auto wa = weierstrass_prepare(a, 0);
    auto wb = weierstrass_prepare(b, 0);
    if (wa.mu < wb.mu || wa.lambda < wb.lambda)
        throw IndeterminateError("exact_quotient_one_var: " + b.to_string() + " does not divide " + a.to_string());
    auto [q, r] = weierstrass_divide(wa.distinguished, wb.distinguished, 0);
    if (!r.vanishes())
        throw IndeterminateError("exact_quotient_one_var: nonzero remainder " + r.to_string());
    return assemble(a.context(), wa.mu - wb.mu, weierstrass_prepare(q, 0).distinguished);
}

namespace {

using Substitution = std::function<PowerSeries(const PowerSeries&)>;

struct NamedSubstitution {
    std::string name;
    Substitution apply;
};

std::vector<NamedSubstitution> candidate_substitutions(const RingContext& ctx) {
    std::vector<NamedSubstitution> out;
    out.push_back({"none", [](const PowerSeries& f) { return f; }});
    const int m = ctx.vars();
    if (m < 2) return out;
    const int last = m - 1;
    const PowerSeries w_last = PowerSeries::variable(ctx, last);
    for (int t = 1; t <= 8; ++t) {
        std::string name;
        std::vector<PowerSeries> images;
        for (int i = 0; i < last; ++i) {
            const int c = t + i;
            images.push_back(PowerSeries::variable(ctx, i) + w_last.scaled(PadicScalar::from_int(ctx, c)));
            name += (i ? ", " : "") + variable_name(i, m) + " <- " + variable_name(i, m) + " + " + std::to_string(c) + "*" +
                    variable_name(last, m);
        }
        out.push_back({name, [images](const PowerSeries& f) {
                           PowerSeries r = f;
                           for (int i = 0; i < static_cast<int>(images.size()); ++i) r = substitute(r, i, images[static_cast<std::size_t>(i)]);
                           return r;
                       }});
    }
    std::string name;
    std::vector<PowerSeries> images;
    for (int i = 0; i < last; ++i) {
        images.push_back(PowerSeries::variable(ctx, i) + w_last.pow(static_cast<unsigned>(i + 2)));
        name += (i ? ", " : "") + variable_name(i, m) + " <- " + variable_name(i, m) + " + " + variable_name(last, m) + "^" +
                std::to_string(i + 2);
    }
    out.push_back({name, [images](const PowerSeries& f) {
                       PowerSeries r = f;
                       for (int i = 0; i < static_cast<int>(images.size()); ++i) r = substitute(r, i, images[static_cast<std::size_t>(i)]);
                       return r;
                   }});
    return out;
}

std::optional<WeierstrassData> try_prepare(const PowerSeries& f, int var) {
    try {
        return weierstrass_prepare(f, var);
    } catch (const NotPreparable&) {
        return std::nullopt;
    }
}

} // namespace

UnitEqualResult unit_equal_detailed(const PowerSeries& f, const PowerSeries& g) {
    f.context().require_same(g.context());
    UnitEqualResult res;
    if (f.is_zero() || g.is_zero()) {
        res.verdict = truth_of(f.is_zero() && g.is_zero());
        return res;
    }
    const RingContext& ctx = f.context();
    if (ctx.vars() == 0) {
        res.mu_f = f.content_valuation();
        res.mu_g = g.content_valuation();
        res.lambda_f = res.lambda_g = 0;
        res.verdict = truth_of(res.mu_f == res.mu_g);
        return res;
    }

    const int last = ctx.vars() - 1;
    for (const auto& sub : candidate_substitutions(ctx)) {
        const PowerSeries fs = sub.apply(f);
        const PowerSeries gs = sub.apply(g);
        auto wf = try_prepare(fs, last);
        auto wg = try_prepare(gs, last);
        if (!wf && !wg) continue;
        res.substitution = sub.name;
        if (!wf || !wg) {
            // Regularity is invariant under unit multiples.
            res.verdict = Truth::False;
            return res;
        }
        res.mu_f = wf->mu;
        res.mu_g = wg->mu;
        res.lambda_f = wf->lambda;
        res.lambda_g = wg->lambda;
        if (wf->mu != wg->mu || wf->lambda != wg->lambda) {
            res.verdict = Truth::False;
            return res;
        }
        // The pure W^e coefficients (e < lambda) carry the verdict; without a
        // single significant digit there, agreement says nothing.
        std::vector<int> e(static_cast<std::size_t>(ctx.vars()), 0);
        for (int k = 0; k < wf->lambda; ++k) {
            e[static_cast<std::size_t>(last)] = k;
            if (wf->distinguished.coeff(e).precision() < 1 || wg->distinguished.coeff(e).precision() < 1) {
                res.verdict = Truth::Indeterminate;
                return res;
            }
        }
        res.verdict = truth_of(wf->distinguished.agrees_with(wg->distinguished));
        return res;
    }
    return res;
}

} // namespace iwasawa
