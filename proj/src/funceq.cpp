#include "iwasawa/funceq.hpp"

#include <random>

#include "iwasawa/parse.hpp"

namespace iwasawa {

std::int64_t corank_formula(int module_rank, std::span<const int> a, int deg_f, int n) {
    const int theta = static_cast<int>(a.size());
    if (n < 1 || n > theta) throw std::invalid_argument("corank_formula: need 1 <= n <= theta");
    if (module_rank < 0 || deg_f < 1) throw std::invalid_argument("corank_formula: need rank >= 0 and deg_f >= 1");
    std::int64_t s = static_cast<std::int64_t>(n) * module_rank;
    for (int i = 1; i <= theta; ++i) s += static_cast<std::int64_t>(std::min(i, n)) * a[static_cast<std::size_t>(i - 1)];
    return s * deg_f;
}

std::vector<int> reconstruct_multiplicities(const ReconstructionProblem& prob) {
    const int theta = prob.theta;
    if (theta < 1 || static_cast<int>(prob.ranks.size()) != theta)
        throw std::invalid_argument("reconstruct: expected theta >= 1 coranks r_1..r_theta");
    if (prob.module_rank < 0 || prob.deg_f < 1) throw std::invalid_argument("reconstruct: need rank >= 0 and deg_f >= 1");
    // s_n = r_n / deg - n*rank = sum_i min(i, n) a_i. The min matrix has a
    // tridiagonal inverse: t_n = s_n - s_(n-1) = a_n + ... + a_theta and
    // a_n = t_n - t_(n+1).
    std::vector<std::int64_t> s(static_cast<std::size_t>(theta) + 1, 0);
    for (int n = 1; n <= theta; ++n) {
        const std::int64_t r = prob.ranks[static_cast<std::size_t>(n - 1)];
        if (r % prob.deg_f != 0)
            throw InconsistentInput("r_" + std::to_string(n) + " = " + std::to_string(r) + " is not divisible by deg f = " +
                                    std::to_string(prob.deg_f) + " (non-integral solution)");
        s[static_cast<std::size_t>(n)] = r / prob.deg_f - static_cast<std::int64_t>(n) * prob.module_rank;
    }
    std::vector<std::int64_t> t(static_cast<std::size_t>(theta) + 2, 0);
    for (int n = 1; n <= theta; ++n) t[static_cast<std::size_t>(n)] = s[static_cast<std::size_t>(n)] - s[static_cast<std::size_t>(n - 1)];
    std::vector<int> a;
    for (int n = 1; n <= theta; ++n) {
        const std::int64_t v = t[static_cast<std::size_t>(n)] - t[static_cast<std::size_t>(n + 1)];
        if (v < 0) throw InconsistentInput("a_" + std::to_string(n) + " = " + std::to_string(v) + " is negative");
        a.push_back(static_cast<int>(v));
    }
    return a;
}

Truth in_L_class(const IwasawaModule& m, const LinearElement& l) {
    try {
        const IwasawaModule q = quotient_by(m, l);
        if (!is_torsion(q)) return Truth::False;
        const PowerSeries c = char_ideal(m);
        if (c.is_zero()) throw std::invalid_argument("in_L_class: module is not torsion");
        return unit_equal(eliminate_variable(c, l), char_ideal(q));
    } catch (const IndeterminateError&) {
        return Truth::Indeterminate;
    }
}

LClassSufficientReport l_class_sufficient(const IwasawaModule& m, const LinearElement& l) {
    if (!m.is_standard()) throw UnsupportedError("l_class_sufficient needs a standard-form module");
    LClassSufficientReport r;
    r.extended = m.context().vars() < 2;
    try {
        r.quotient_torsion = truth_of(is_torsion(quotient_by(m, l)));
    } catch (const IndeterminateError&) {
        r.quotient_torsion = Truth::Indeterminate;
    }
    const auto& s = m.standard_form();
    if (!s.pseudo_null_part) {
        r.null_torsion_pseudo_null = Truth::True;
    } else {
        // M_null[l] and M_null/l share rank and characteristic ideal over R/(l).
        const IwasawaModule null = IwasawaModule::presentation(*s.pseudo_null_part);
        r.null_torsion_pseudo_null = is_pseudo_null(quotient_by(null, l)).verdict;
    }
    r.hypotheses_hold = r.quotient_torsion == Truth::True && r.null_torsion_pseudo_null == Truth::True;
    if (r.hypotheses_hold) {
        r.membership = in_L_class(m, l);
        r.note = r.membership == Truth::True ? "hypotheses hold; membership confirmed"
                                              : "hypotheses hold but membership is not confirmed";
    } else {
        r.note = r.quotient_torsion != Truth::True ? "M/l is not torsion" : "M_null[l] is not pseudo-null";
    }
    if (r.extended) r.note += " (extended class: fewer than two variables)";
    return r;
}

std::vector<LinearElement> sample_linear_ideals(const RingContext& ctx, const std::vector<PowerSeries>& avoid, int count,
                                                std::uint64_t seed) {
    if (ctx.vars() < 2) throw std::invalid_argument("sample_linear_ideals needs a variable besides the last one");
    if (count < 0) throw std::invalid_argument("sample_linear_ideals: negative count");
    for (const auto& g : avoid) ctx.require_same(g.context());
    std::mt19937_64 rng(seed);
    std::vector<LinearElement> out;
    const int budget = 1000 + 200 * count;
    for (int draw = 0; draw < budget && static_cast<int>(out.size()) < count; ++draw) {
        LinearElement l = random_linear_element(ctx, rng, ctx.vars() - 1);
        bool ok = true;
        for (const auto& g : avoid)
            if (eliminate_variable(g, l).vanishes()) {
                ok = false;
                break;
            }
        for (std::size_t i = 0; ok && i < out.size(); ++i) ok = !linear_ideal_equal(l, out[i]);
        if (ok) out.push_back(std::move(l));
    }
    if (static_cast<int>(out.size()) < count)
        throw SamplingExhausted("found only " + std::to_string(out.size()) + " of " + std::to_string(count) +
                                " admissible linear elements");
    return out;
}

const char* to_string(Conclusion c) {
    switch (c) {
    case Conclusion::Consistent: return "consistent";
    case Conclusion::Refuted: return "refuted";
    case Conclusion::Indeterminate: return "indeterminate";
    }
    return "?";
}

namespace {

Truth ideals_equal(const PowerSeries& a, const PowerSeries& b) {
    if (a.is_zero() || b.is_zero()) return truth_of(a.is_zero() && b.is_zero());
    return unit_equal(a, b);
}

Truth guarded(const std::function<Truth()>& f) {
    try {
        return f();
    } catch (const IndeterminateError&) {
        return Truth::Indeterminate;
    } catch (const UnsupportedError&) {
        return Truth::Indeterminate;
    }
}

void evaluate(IdealCheck& c, const IwasawaModule& m, const IwasawaModule& n) {
    try {
        c.m_in_class = in_L_class(m, c.l);
        c.n_in_class = in_L_class(n, c.l);
        const PowerSeries cm = char_ideal(quotient_by(m, c.l));
        const PowerSeries cn = char_ideal(quotient_by(n, c.l));
        c.char_m = cm.is_zero() ? "0" : cm.to_string();
        c.char_n = cn.is_zero() ? "0" : cn.to_string();
        c.specialized_equal = ideals_equal(cm, cn);
    } catch (const std::exception& e) {
        c.error = e.what();
    }
}

} // namespace

SpecializationReport verify_char_equality_by_specialization(const IwasawaModule& m, const IwasawaModule& n,
                                                            const std::vector<LinearElement>& ideals) {
    m.context().require_same(n.context());
    if (m.context().vars() < 2) throw std::invalid_argument("specialization needs R[[W]] with R of dimension >= 1");
    SpecializationReport r;
    r.m_torsion = guarded([&] { return truth_of(is_torsion(m)); });
    r.n_torsion = guarded([&] { return truth_of(is_torsion(n)); });
    r.m_fg = guarded([&] { return is_fg_over_subring(m); });
    r.n_fg = guarded([&] { return is_fg_over_subring(n); });
    r.global_equal = guarded([&] { return ideals_equal(char_ideal(m), char_ideal(n)); });

    for (const auto& l : ideals) r.checks.emplace_back(l);
    const auto count = static_cast<std::ptrdiff_t>(r.checks.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < count; ++i) evaluate(r.checks[static_cast<std::size_t>(i)], m, n);

    bool all_pass = !r.checks.empty();
    bool refuted = false;
    for (const auto& c : r.checks) {
        const bool both_in = c.m_in_class == Truth::True && c.n_in_class == Truth::True;
        all_pass = all_pass && c.error.empty() && both_in && c.specialized_equal == Truth::True;
        refuted = refuted || (both_in && c.specialized_equal == Truth::False);
    }
    r.conclusion = refuted ? Conclusion::Refuted : all_pass ? Conclusion::Consistent : Conclusion::Indeterminate;

    const bool hyp_a = r.m_fg == Truth::True && r.n_fg == Truth::True;
    const bool torsion = r.m_torsion == Truth::True && r.n_torsion == Truth::True;
    r.contradiction = hyp_a && torsion && all_pass && r.global_equal == Truth::False;
    const std::string sample = " (" + std::to_string(r.checks.size()) + " sampled ideals stand in for infinitely many)";
    if (r.contradiction)
        r.summary = "CONTRADICTION: every hypothesis holds on the sample but the global ideals differ";
    else if (!torsion)
        r.summary = "modules are not both torsion; the comparison does not apply";
    else if (!hyp_a && r.conclusion == Conclusion::Consistent && r.global_equal == Truth::False)
        r.summary = "hypothesis (a) violated; no contradiction with the proposition";
    else if (hyp_a && r.conclusion == Conclusion::Consistent && r.global_equal == Truth::True)
        r.summary = "hypotheses hold on the sample and the global ideals agree";
    else if (r.conclusion == Conclusion::Refuted)
        r.summary = "a specialization in both classes separates the modules; the global ideals differ";
    else
        r.summary = std::string("hypotheses ") + (hyp_a ? "(a) hold" : "(a) fail") + ", specializations " +
                    to_string(r.conclusion) + ", global equality " + iwasawa::to_string(r.global_equal);
    r.summary += sample;
    return r;
}

FunceqReport funceq_verdict(const IwasawaModule& m, const IwasawaModule& n) {
    if (m.context().vars() != 1) throw std::invalid_argument("funceq_verdict needs the one-variable ring Z_p[[W]]");
    m.context().require_same(n.context());
    FunceqReport r;
    try {
        r.rank_m = rank(m);
        r.rank_n = rank(n);
    } catch (const IndeterminateError& e) {
        r.reason = e.what();
        return r;
    }
    if (r.rank_m != r.rank_n) {
        r.verdict = PseudoVerdict::Different;
        r.reason = "ranks " + std::to_string(r.rank_m) + " vs " + std::to_string(r.rank_n);
        return r;
    }
    // twisting a presentation entrywise presents the twisted module
    auto cmp = pseudo_compare(m, involute_module(n, 0, true));
    r.verdict = cmp.verdict;
    r.reason = "M vs N^iota: " + cmp.reason;
    return r;
}

CounterexampleReport counterexample_suite(std::uint64_t prime, int i_from, int i_to, int precision, int degree_cap) {
    if (i_from < 1 || i_to < i_from) throw std::invalid_argument("counterexample: need 1 <= i_from <= i_to");
    if (i_to + 1 >= precision) throw std::invalid_argument("counterexample: p^(i+1) must stay below the precision");
    const RingContext ctx = RingContext::make(prime, 2, precision, degree_cap);
    const RingContext base = ctx.with_vars(1);
    CounterexampleReport rep;
    rep.prime = prime;
    auto S = [&](const std::string& t) { return parse_series(ctx, t); };
    auto check = [&](std::string name, bool ok, std::string detail) {
        rep.checks.push_back({std::move(name), ok, std::move(detail)});
    };
    auto ell = [&](int k) { return LinearElement::from_series(S("W1 - p^" + std::to_string(k))); };

    // Part 1: M = R/(W1-p)^{+2}, N = R/(W1-p^2).
    const IwasawaModule M = IwasawaModule::standard(ctx, {S("W1 - p"), S("W1 - p")}, 0);
    const IwasawaModule N = IwasawaModule::standard(ctx, {S("W1 - p^2")}, 0);
    const PowerSeries cM = char_ideal(M);
    const PowerSeries cN = char_ideal(N);
    check("char(M) = (W1-p)^2", unit_equal(cM, S("(W1 - p)^2")) == Truth::True, cM.to_string());
    check("char(N) = (W1-p^2)", unit_equal(cN, S("W1 - p^2")) == Truth::True, cN.to_string());
    check("char(M) != char(N)", unit_equal(cM, cN) == Truth::False, "unit_equal false");

    const PowerSeries p2 = parse_series(base, "p^2");
    std::vector<LinearElement> ideals;
    for (int i = i_from; i <= i_to; ++i) {
        const LinearElement l = ell(i + 1);
        ideals.push_back(l);
        const std::string tag = "l_" + std::to_string(i) + " = " + l.to_string();
        const IwasawaModule qM = quotient_by(M, l);
        const IwasawaModule qN = quotient_by(N, l);
        const bool tors = is_torsion(qM) && is_torsion(qN);
        const PowerSeries sM = tors ? char_ideal(qM) : PowerSeries(base);
        const PowerSeries sN = tors ? char_ideal(qN) : PowerSeries(base);
        check(tag + ": char(M/l) = (p^2)", tors && unit_equal(sM, p2) == Truth::True, tors ? sM.to_string() : "not torsion");
        check(tag + ": char(N/l) = (p^2)", tors && unit_equal(sN, p2) == Truth::True, tors ? sN.to_string() : "not torsion");
        check(tag + ": both in the L-class", in_L_class(M, l) == Truth::True && in_L_class(N, l) == Truth::True, "");
    }
    {
        const LinearElement l1 = ell(2);
        const bool degenerate = !is_torsion(quotient_by(N, l1));
        rep.notes.push_back("l_1 = " + l1.to_string() + ": N/l_1 " +
                            (degenerate ? "is not torsion (p^2 - p^2 = 0); excluded" : "unexpectedly torsion"));
    }
    const SpecializationReport sr = verify_char_equality_by_specialization(M, N, ideals);
    check("hypothesis (a) fails for M and N", sr.m_fg == Truth::False && sr.n_fg == Truth::False, sr.summary);
    check("all sampled specializations agree", sr.conclusion == Conclusion::Consistent, to_string(sr.conclusion));
    check("no contradiction with the proposition", !sr.contradiction && sr.global_equal == Truth::False, sr.summary);

    // Part 2: the image of char(R/(W1-p)) at W1 - p^i is (p^i - p) = (p), not (p^i).
    const PowerSeries c1 = char_ideal(IwasawaModule::standard(ctx, {S("W1 - p")}, 0));
    const PowerSeries p1 = parse_series(base, "p");
    for (int i = i_from; i <= i_to; ++i) {
        const PowerSeries img = eliminate_variable(c1, ell(i));
        const PowerSeries naive = parse_series(base, "p^" + std::to_string(i));
        check("image of (W1-p) at W1-p^" + std::to_string(i) + " is (p), not (p^" + std::to_string(i) + ")",
              unit_equal(img, p1) == Truth::True && unit_equal(img, naive) == Truth::False, img.to_string());
    }

    rep.all_passed = std::all_of(rep.checks.begin(), rep.checks.end(), [](const SuiteCheck& c) { return c.passed; });
    return rep;
}

} // namespace iwasawa
