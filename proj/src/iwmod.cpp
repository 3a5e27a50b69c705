#include "iwasawa/iwmod.hpp"

#include <algorithm>
#include <random>

#include "minors.hpp"

namespace iwasawa {

using detail::Block;

PowerSeries embed_series(const PowerSeries& f, const RingContext& target) {
    const RingContext& src = f.context();
    if (src.prime() != target.prime() || src.precision() != target.precision() ||
        src.degree_cap() != target.degree_cap() || target.vars() < src.vars())
        throw ContextMismatch("cannot embed " + src.describe() + " into " + target.describe());
    if (src == target) return f;
    PowerSeries r(target);
    std::vector<int> e(static_cast<std::size_t>(target.vars()), 0);
    for (const auto& [k, c] : f.terms()) {
        auto ex = src.monomials().exponents(k);
        std::copy(ex.begin(), ex.end(), e.begin());
        r.set_coeff(target.monomials().index_of(e), c);
    }
    if (!f.is_polynomial()) r.mark_truncated();
    return r;
}

namespace {

PowerSeries one(const RingContext& ctx) { return PowerSeries::constant(ctx, 1); }

Presentation map_entries(const Presentation& p, const RingContext& target,
                         const std::function<PowerSeries(const PowerSeries&)>& f) {
    std::vector<PowerSeries> e;
    e.reserve(p.entries.size());
    for (const auto& x : p.entries) e.push_back(f(x));
    return {target, p.rows, p.cols, std::move(e)};
}

std::vector<PowerSeries> maximal_minors(const Presentation& b) {
    std::vector<PowerSeries> out;
    detail::for_each_minor(b, b.rows, [&](const PowerSeries& m) {
        if (!m.vanishes()) out.push_back(m);
        return true;
    });
    return out;
}

// g = u * x^a with x = p (var < 0) or x = W_var.
bool is_power_of(const PowerSeries& g, int var) {
    if (var < 0) return g.divide_by_p_power(g.content_valuation()).is_unit();
    const auto& table = g.context().monomials();
    int a = g.context().degree_cap();
    for (const auto& [k, c] : g.terms())
        if (!c.is_zero()) a = std::min(a, table.exponents(k)[static_cast<std::size_t>(var)]);
    std::vector<int> e(static_cast<std::size_t>(g.context().vars()), 0);
    e[static_cast<std::size_t>(var)] = a;
    const PadicScalar lead = g.coeff(e);
    return lead.is_unit();
}

// x does not divide g.
bool not_divisible_by(const PowerSeries& g, int var) {
    if (var < 0) return g.content_valuation() == 0 && !g.vanishes();
    const auto& table = g.context().monomials();
    for (const auto& [k, c] : g.terms())
        if (!c.is_zero() && table.exponents(k)[static_cast<std::size_t>(var)] == 0) return true;
    return false;
}

// The ideal generated by `gens` is the unit ideal up to height >= 2, i.e.
// the generators have no common prime factor, shown by an explicit
// certificate: a unit generator, or g1 = u*x^a with x prime and x not
// dividing g2 for x in {p, W_1, ..., W_m}.
bool coprime_certificate(const std::vector<PowerSeries>& gens) {
    for (const auto& g : gens)
        if (g.is_unit()) return true;
    if (gens.empty()) return false;
    const int m = gens.front().context().vars();
    for (int x = -1; x < m; ++x)
        for (const auto& g1 : gens) {
            if (!is_power_of(g1, x)) continue;
            for (const auto& g2 : gens)
                if (not_divisible_by(g2, x)) return true;
        }
    return false;
}

PowerSeries gcd_all_one_var(const std::vector<PowerSeries>& gens) {
    if (gens.empty()) throw std::invalid_argument("gcd of an empty list");
    PowerSeries g = normalize_one_var(gens.front());
    for (std::size_t i = 1; i < gens.size() && !g.is_unit(); ++i) g = gcd_one_var(g, gens[i]);
    return g;
}

// Zp: the gcd of constants is p^(min valuation).
PowerSeries gcd_all_constants(const std::vector<PowerSeries>& gens) {
    int v = gens.front().context().precision();
    for (const auto& g : gens) v = std::min(v, g.content_valuation());
    const RingContext& ctx = gens.front().context();
    return PowerSeries::scalar(ctx, PadicScalar::from_residue(ctx.prime(), ctx.precision(), ctx.precision(),
                                                              v >= ctx.precision() ? 0 : ctx.power(v)));
}

// Divisorial hull of the ideal of maximal minors: the characteristic ideal
// of a torsion block.
PowerSeries char_of_block(const Presentation& b) {
    const RingContext& ctx = b.context;
    if (b.rows == 0) return one(ctx);
    if (b.rows == b.cols) return detail::determinant(b);
    auto minors = maximal_minors(b);
    if (minors.empty()) throw IndeterminateError("all maximal minors vanish at truncation");
    if (ctx.vars() == 0) return gcd_all_constants(minors);
    if (ctx.vars() == 1) return gcd_all_one_var(minors);
    if (coprime_certificate(minors)) return one(ctx);
    throw UnsupportedError("characteristic ideal of a non-square " + std::to_string(b.rows) + "x" +
                           std::to_string(b.cols) + " block in " + std::to_string(ctx.vars()) +
                           " variables needs a multivariate gcd");
}

int presentation_rank(const Presentation& p) {
    int r = p.rows;
    for (const auto& blk : detail::blocks_of(p)) {
        if (blk.cols.empty()) continue;
        r -= detail::generic_rank(detail::restrict(p, blk.rows, blk.cols));
    }
    return r;
}

} // namespace

int rank(const IwasawaModule& m) {
    if (m.is_standard()) return m.standard_form().free_rank;
    return presentation_rank(m.presentation_data());
}

bool is_torsion(const IwasawaModule& m) { return rank(m) == 0; }

PowerSeries char_ideal(const IwasawaModule& m) {
    const RingContext& ctx = m.context();
    if (m.is_standard()) {
        const auto& s = m.standard_form();
        if (s.free_rank > 0) return PowerSeries(ctx);
        PowerSeries c = one(ctx);
        for (const auto& g : s.cyclics) c = c * g;
        return c;
    }
    const Presentation& p = m.presentation_data();
    if (presentation_rank(p) > 0) return PowerSeries(ctx);
    PowerSeries c = one(ctx);
    for (const auto& blk : detail::blocks_of(p)) c = c * char_of_block(detail::restrict(p, blk.rows, blk.cols));
    return c;
}

namespace {

// StandardForm when the null part is (still) pseudo-null, otherwise the
// equivalent block presentation.
IwasawaModule assemble(const RingContext& ctx, std::vector<PowerSeries> cyclics, int free_rank,
                       std::optional<Presentation> null_part) {
    if (null_part) {
        // Rows with a unit entry can be pivoted away; keep it simple and only
        // drop a null part that presents zero.
        auto v = is_pseudo_null(IwasawaModule::presentation(*null_part));
        if (v.verdict != Truth::True) {
            Presentation p = Presentation::diagonal(ctx, cyclics);
            if (free_rank > 0) p = Presentation::block_sum(p, Presentation{ctx, free_rank, 0, {}});
            p = Presentation::block_sum(p, *null_part);
            return IwasawaModule::presentation(std::move(p));
        }
    }
    return unchecked_standard(ctx, StandardForm{std::move(cyclics), free_rank, std::move(null_part)});
}

} // namespace

IwasawaModule quotient_by(const IwasawaModule& m, const LinearElement& l) {
    m.context().require_same(l.context());
    const RingContext target = m.context().with_vars(m.context().vars() - 1);
    auto elim = [&](const PowerSeries& f) { return eliminate_variable(f, l); };
    if (!m.is_standard()) return IwasawaModule::presentation(map_entries(m.presentation_data(), target, elim));

    const auto& s = m.standard_form();
    std::vector<PowerSeries> cyclics;
    int free_rank = s.free_rank;
    for (const auto& g : s.cyclics) {
        PowerSeries h = elim(g);
        if (h.vanishes())
            ++free_rank; // R/(g, l) = R/(l)
        else if (!h.is_unit())
            cyclics.push_back(std::move(h));
    }
    std::optional<Presentation> null_part;
    if (s.pseudo_null_part) null_part = map_entries(*s.pseudo_null_part, target, elim);
    return assemble(target, std::move(cyclics), free_rank, std::move(null_part));
}

IwasawaModule torsion_sub(const IwasawaModule& m, const LinearElement& l) {
    m.context().require_same(l.context());
    if (!m.is_standard()) throw UnsupportedError("torsion_sub needs a standard-form module; use the oracle for presentations");
    const auto& s = m.standard_form();
    const RingContext target = m.context().with_vars(m.context().vars() - 1);
    // (R/(l^k h))[l] = l^(k-1) h R / (l^k h) ~ R/(l); zero when l does not divide g.
    int count = 0;
    for (const auto& g : s.cyclics)
        if (eliminate_variable(g, l).vanishes()) ++count;
    // M_null[l] and M_null/l have the same characteristic ideal and rank over
    // R/(l), so the latter stands in for the former.
    std::optional<Presentation> null_part;
    if (s.pseudo_null_part)
        null_part = map_entries(*s.pseudo_null_part, target, [&](const PowerSeries& f) { return eliminate_variable(f, l); });
    return assemble(target, {}, count, std::move(null_part));
}

RankFormulaReport rank_formula_check(const IwasawaModule& m, const LinearElement& l) {
    RankFormulaReport r;
    r.rank_m = rank(m);
    r.rank_quotient = rank(quotient_by(m, l));
    r.rank_torsion_sub = rank(torsion_sub(m, l));
    r.holds = r.rank_m == r.rank_quotient - r.rank_torsion_sub;
    return r;
}

namespace {

PseudoNullVerdict pseudo_null_block(const Presentation& b, int samples, std::mt19937_64& rng);

PseudoNullVerdict pseudo_null_presentation(const Presentation& p, int samples, std::mt19937_64& rng) {
    PseudoNullVerdict out{Truth::True, false, "no relations needed"};
    for (const auto& blk : detail::blocks_of(p)) {
        auto v = pseudo_null_block(detail::restrict(p, blk.rows, blk.cols), samples, rng);
        if (v.verdict == Truth::False) return v;
        if (v.verdict == Truth::Indeterminate) out = v;
        else if (out.verdict == Truth::True) {
            out.probabilistic = out.probabilistic || v.probabilistic;
            out.method = v.method;
        }
    }
    return out;
}

PseudoNullVerdict pseudo_null_block(const Presentation& b, int samples, std::mt19937_64& rng) {
    const RingContext& ctx = b.context;
    if (b.cols == 0) return {Truth::False, false, "free generator"};
    int r;
    try {
        r = detail::generic_rank(b);
    } catch (const IndeterminateError& e) {
        return {Truth::Indeterminate, false, e.what()};
    }
    if (r < b.rows) return {Truth::False, false, "not torsion"};
    auto minors = maximal_minors(b);
    if (ctx.vars() == 0)
        return {truth_of(std::any_of(minors.begin(), minors.end(), [](const auto& g) { return g.is_unit(); })), false,
                "Fitting ideal over Zp"};
    if (ctx.vars() == 1) {
        try {
            return {truth_of(gcd_all_one_var(minors).is_unit()), false, "gcd of maximal minors"};
        } catch (const IndeterminateError& e) {
            return {Truth::Indeterminate, false, e.what()};
        }
    }
    if (coprime_certificate(minors)) return {Truth::True, false, "coprime maximal minors"};
    // A non-pseudo-null M has F_0(M) inside a height-one prime (g), and then
    // F_0(M/l) sits inside (g mod l) for every l: one pseudo-null
    // specialization is a proof, failures are only evidence.
    bool indeterminate = false;
    const IwasawaModule mod = IwasawaModule::presentation(b);
    for (int i = 0; i < samples; ++i) {
        const LinearElement l = random_linear_element(ctx, rng);
        auto v = pseudo_null_presentation(quotient_by(mod, l).presentation_data(), samples, rng);
        if (v.verdict == Truth::True) return {Truth::True, false, "pseudo-null specialization at " + l.to_string()};
        if (v.verdict == Truth::Indeterminate) indeterminate = true;
    }
    if (indeterminate) return {Truth::Indeterminate, true, "sampled specializations inconclusive"};
    return {Truth::False, true, std::to_string(samples) + " sampled specializations are not pseudo-null"};
}

} // namespace

PseudoNullVerdict is_pseudo_null(const IwasawaModule& m, int samples, std::uint64_t seed) {
    if (m.is_standard()) {
        const auto& s = m.standard_form();
        if (s.free_rank > 0) return {Truth::False, false, "free summand"};
        for (const auto& g : s.cyclics)
            if (!g.is_unit()) return {Truth::False, false, "cyclic summand R/(" + g.to_string() + ") has height one"};
        return {Truth::True, false, "only the declared pseudo-null part"};
    }
    std::mt19937_64 rng(seed);
    return pseudo_null_presentation(m.presentation_data(), samples, rng);
}

namespace {

// Image in k[[W]] = R[[W]] / m_R, with W the last variable.
Truth reduces_to_nonzero(const PowerSeries& g) {
    const RingContext& ctx = g.context();
    const int last = ctx.vars() - 1;
    const auto& table = ctx.monomials();
    for (const auto& [k, c] : g.terms()) {
        if (c.precision() < 1 || c.residue() % ctx.prime() == 0) continue;
        auto e = table.exponents(k);
        bool pure = true;
        for (int i = 0; i < last; ++i) pure = pure && e[static_cast<std::size_t>(i)] == 0;
        if (pure) return Truth::True;
    }
    return g.is_polynomial() ? Truth::False : Truth::Indeterminate;
}

} // namespace

Truth is_fg_over_subring(const IwasawaModule& m) {
    if (m.context().vars() < 1) throw std::invalid_argument("is_fg_over_subring needs a variable W");
    if (m.is_standard() && m.standard_form().free_rank > 0) return Truth::False;
    Truth verdict = Truth::True;
    if (m.is_standard()) {
        for (const auto& g : m.standard_form().cyclics) verdict = verdict && reduces_to_nonzero(g);
        if (!m.standard_form().pseudo_null_part) return verdict;
    }
    const Presentation p = m.is_standard() ? *m.standard_form().pseudo_null_part : m.presentation_data();
    for (const auto& blk : detail::blocks_of(p)) {
        const Presentation b = detail::restrict(p, blk.rows, blk.cols);
        Truth any = Truth::False;
        detail::for_each_minor(b, b.rows, [&](const PowerSeries& g) {
            Truth t = reduces_to_nonzero(g);
            if (t == Truth::True) any = Truth::True;
            else if (t == Truth::Indeterminate) any = Truth::Indeterminate;
            return any != Truth::True;
        });
        verdict = verdict && any;
    }
    return verdict;
}

IwasawaModule with_trivial_action(const IwasawaModule& m) {
    const RingContext& ctx = m.context();
    const RingContext big = ctx.with_vars(ctx.vars() + 1);
    const Presentation p = m.to_presentation();
    const int cols = p.cols + p.rows;
    std::vector<PowerSeries> e(static_cast<std::size_t>(p.rows * cols), PowerSeries(big));
    const PowerSeries w = PowerSeries::variable(big, ctx.vars());
    for (int r = 0; r < p.rows; ++r) {
        for (int c = 0; c < p.cols; ++c) e[static_cast<std::size_t>(r * cols + c)] = embed_series(p.at(r, c), big);
        e[static_cast<std::size_t>(r * cols + p.cols + r)] = w;
    }
    return IwasawaModule::presentation(Presentation::make(big, p.rows, cols, std::move(e)));
}

namespace {

void require_one_var(const IwasawaModule& m, const char* what) {
    if (m.context().vars() != 1) throw std::invalid_argument(std::string(what) + " needs the one-variable ring Z_p[[W]]");
}

} // namespace

MuLambda mu_lambda(const IwasawaModule& m) {
    require_one_var(m, "mu_lambda");
    const PowerSeries f = char_ideal(m);
    if (f.is_zero()) throw std::invalid_argument("mu_lambda: module is not torsion");
    auto w = weierstrass_prepare(f, 0);
    return {w.mu, w.lambda};
}

namespace {

// Delta_0 .. Delta_rank of one block; Delta_k = gcd of the k x k minors.
std::vector<PowerSeries> fitting_hulls(const Presentation& b, int block_rank, bool& complete) {
    std::vector<PowerSeries> delta{one(b.context)};
    for (int k = 1; k <= block_rank; ++k) {
        std::vector<PowerSeries> minors;
        bool dropped = false;
        detail::for_each_minor(b, k, [&](const PowerSeries& m) {
            if (!m.vanishes()) minors.push_back(m);
            else dropped = true;
            return true;
        });
        // a minor lost to truncation could still change the gcd
        if (dropped && !detail::vanishing_is_exact(b, k)) complete = false;
        delta.push_back(gcd_all_one_var(minors));
    }
    return delta;
}

} // namespace

StructureData structure_one_var(const IwasawaModule& m) {
    require_one_var(m, "structure_one_var");
    const RingContext& ctx = m.context();
    StructureData out(ctx);
    out.rank = rank(m);
    out.char_gen = out.rank == 0 ? char_ideal(m) : PowerSeries(ctx);
    out.complete = true;

    // Delta_k of a block sum is gcd over i + j = k of Delta_i(A) Delta_j(B).
    const Presentation p = m.to_presentation();
    std::vector<PowerSeries> delta{one(ctx)};
    try {
        for (const auto& blk : detail::blocks_of(p)) {
            if (blk.cols.empty()) continue;
            const Presentation b = detail::restrict(p, blk.rows, blk.cols);
            auto d = fitting_hulls(b, detail::generic_rank(b), out.complete);
            std::vector<std::optional<PowerSeries>> merged(delta.size() + d.size() - 1);
            for (std::size_t i = 0; i < delta.size(); ++i)
                for (std::size_t j = 0; j < d.size(); ++j) {
                    PowerSeries t = delta[i] * d[j];
                    auto& slot = merged[i + j];
                    slot = slot ? gcd_one_var(*slot, t) : normalize_one_var(t);
                }
            delta.clear();
            for (auto& x : merged) delta.push_back(*x);
        }
        if (out.rank > 0) out.char_gen = delta.back();
        for (std::size_t k = 1; k < delta.size(); ++k) {
            PowerSeries dk = exact_quotient_one_var(delta[k], delta[k - 1]);
            if (!dk.is_unit()) out.elementary_divisors.push_back(std::move(dk));
        }
    } catch (const IndeterminateError& e) {
        out.complete = false;
        out.elementary_divisors.clear();
        out.note = e.what();
    }
    auto w = weierstrass_prepare(out.char_gen.is_zero() ? one(ctx) : out.char_gen, 0);
    out.mu = w.mu;
    out.lambda = w.lambda;
    if (!out.complete && out.note.empty()) out.note = "a vanishing minor could not be certified at truncation";
    return out;
}

IwasawaModule involute_module(const IwasawaModule& m, int var, bool allow_presentation) {
    const RingContext& ctx = m.context();
    auto iota = [&](const PowerSeries& f) { return involution(f, var); };
    if (!m.is_standard()) {
        if (!allow_presentation)
            throw UnsupportedError("involute_module: presentations are twisted entrywise only on request (experimental)");
        return IwasawaModule::presentation(map_entries(m.presentation_data(), ctx, iota));
    }
    const auto& s = m.standard_form();
    StandardForm t{{}, s.free_rank, std::nullopt};
    for (const auto& g : s.cyclics) t.cyclics.push_back(iota(g));
    // iota is a ring automorphism, so the twisted null part stays pseudo-null.
    if (s.pseudo_null_part) t.pseudo_null_part = map_entries(*s.pseudo_null_part, ctx, iota);
    return unchecked_standard(ctx, std::move(t));
}

TorTransferReport tor_transfer_check(const IwasawaModule& m, const LinearElement& l) {
    TorTransferReport r;
    r.precondition = is_torsion(quotient_by(m, l));
    if (!r.precondition) {
        r.note = "precondition violated: M/l is not torsion over R/(l)";
        return r;
    }
    r.m_torsion = truth_of(is_torsion(m));
    r.tor1_torsion = truth_of(is_torsion(torsion_sub(m, l)));
    r.note = "Tor_j vanish for j >= 2: R/(l) has projective dimension one";
    return r;
}

const char* to_string(PseudoVerdict v) {
    switch (v) {
    case PseudoVerdict::PseudoIsomorphic: return "pseudo_isomorphic";
    case PseudoVerdict::CharEqualOnly: return "char_equal_only";
    case PseudoVerdict::Different: return "different";
    case PseudoVerdict::Indeterminate: return "indeterminate";
    }
    return "?";
}

PseudoCompareReport pseudo_compare(const IwasawaModule& m, const IwasawaModule& n) {
    require_one_var(m, "pseudo_compare");
    m.context().require_same(n.context());
    std::optional<StructureData> om, on;
    try {
        om = structure_one_var(m);
        on = structure_one_var(n);
    } catch (const IndeterminateError& e) {
        return {PseudoVerdict::Indeterminate, e.what()};
    }
    const StructureData& sm = *om;
    const StructureData& sn = *on;
    if (sm.rank != sn.rank)
        return {PseudoVerdict::Different, "ranks " + std::to_string(sm.rank) + " vs " + std::to_string(sn.rank)};
    const Truth chars = unit_equal(sm.char_gen, sn.char_gen);
    if (chars == Truth::False)
        return {PseudoVerdict::Different, "characteristic ideals differ: (" + sm.char_gen.to_string() + ") vs (" +
                                              sn.char_gen.to_string() + ")"};
    if (chars == Truth::Indeterminate) return {PseudoVerdict::Indeterminate, "characteristic ideals undecided at precision"};
    if (!sm.complete || !sn.complete)
        return {PseudoVerdict::CharEqualOnly, "elementary divisors incomplete at precision"};
    if (sm.elementary_divisors.size() != sn.elementary_divisors.size())
        return {PseudoVerdict::CharEqualOnly, "different numbers of elementary divisors"};
    for (std::size_t i = 0; i < sm.elementary_divisors.size(); ++i) {
        Truth t = unit_equal(sm.elementary_divisors[i], sn.elementary_divisors[i]);
        if (t == Truth::False) return {PseudoVerdict::CharEqualOnly, "elementary divisor " + std::to_string(i + 1) + " differs"};
        if (t == Truth::Indeterminate)
            return {PseudoVerdict::CharEqualOnly, "elementary divisor " + std::to_string(i + 1) + " undecided"};
    }
    return {PseudoVerdict::PseudoIsomorphic, "ranks, characteristic ideals and elementary divisors agree"};
}

} // namespace iwasawa
