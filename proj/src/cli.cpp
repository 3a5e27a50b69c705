#include "iwasawa/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "iwasawa/funceq.hpp"
#include "iwasawa/oracle.hpp"
#include "iwasawa/parse.hpp"
#include "iwasawa/weierstrass.hpp"

namespace iwasawa::cli {
namespace {

struct Options {
    std::optional<std::uint64_t> prime;
    std::optional<int> prec;
    std::optional<int> deg;
    int vars = 1;
    std::uint64_t seed = 0x5eed;
    int samples = 6;
    bool oracle = false;
    int oracle_n = 4;
    int oracle_d = 8;
    std::string format = "text";
    std::vector<std::string> ideals;
    std::vector<std::string> inputs;
    // verb specific
    std::optional<int> var;
    bool experimental = false;
    bool pseudo_null = false;
    bool fg = false;
    bool trivial_action = false;
    std::vector<std::int64_t> ranks;
    std::vector<int> multiplicities;
    int module_rank = 0;
    int deg_f = 1;
    int i_from = 2;
    int i_to = 6;
    std::string grid = "4:4,4:8,8:4,8:8";
};

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Ordered key/value report. Text renders "key = value" (or the bare value),
// kv renders "key=value" with newlines escaped.
class Report {
public:
    void add(std::string key, std::string value, bool bare = false) {
        fields_.push_back({std::move(key), std::move(value), bare});
    }
    void add(std::string key, Truth t) { add(std::move(key), std::string(to_string(t))); }
    void add(std::string key, bool b) { add(std::move(key), std::string(b ? "true" : "false")); }
    void add(std::string key, long long v) { add(std::move(key), std::to_string(v)); }

    void write(std::ostream& out, const std::string& format) const {
        for (const auto& f : fields_) {
            if (format == "kv") {
                std::string v;
                for (char c : f.value) v += c == '\n' ? std::string("\\n") : std::string(1, c);
                out << f.key << '=' << v << '\n';
            } else if (f.bare) {
                out << f.value << '\n';
            } else if (f.value.find('\n') != std::string::npos) {
                out << f.key << ":\n";
                std::istringstream in(f.value);
                for (std::string line; std::getline(in, line);) out << "  " << line << '\n';
            } else {
                out << f.key << " = " << f.value << '\n';
            }
        }
    }

private:
    struct Field {
        std::string key;
        std::string value;
        bool bare;
    };
    std::vector<Field> fields_;
};

std::string trim_newline(std::string s) {
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
    return s;
}

std::string fixed3(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", x);
    return buf;
}

template <class T> std::string join(const std::vector<T>& v, const char* sep = ",") {
    std::ostringstream o;
    for (std::size_t i = 0; i < v.size(); ++i) o << (i ? sep : "") << v[i];
    return o.str();
}

ContextOverrides overrides(const Options& o) { return {o.prime, o.prec, o.deg}; }

// A path to a module file, or the module text itself. Inline text without a
// ring header gets one from --prime and --vars; ';' separates lines.
IwasawaModule load_module(const std::string& arg, const Options& o) {
    std::error_code ec;
    if (std::filesystem::is_regular_file(arg, ec)) {
        std::ifstream in(arg);
        std::stringstream ss;
        ss << in.rdbuf();
        return parse_module(ss.str(), overrides(o));
    }
    std::string text = arg;
    auto first = text.find_first_not_of(" \t");
    if (first == std::string::npos) throw UsageError("empty module argument");
    if (text.compare(first, 4, "ring") != 0) {
        if (!o.prime) throw UsageError("'" + arg + "' is not a file; inline modules need --prime or a ring header");
        text = "ring p=" + std::to_string(*o.prime) + " vars=" + std::to_string(o.vars) + "\n" + text;
    } else if (auto semi = text.find(';'); semi != std::string::npos && text.find('\n') == std::string::npos) {
        // "ring ...; standard: ..." on one line
        text[semi] = '\n';
    }
    return parse_module(text, overrides(o));
}

LinearElement load_ideal(const std::string& text, const RingContext& ctx) {
    return LinearElement::from_series(parse_series(ctx, text));
}

const std::string& single_ideal(const Options& o) {
    if (o.ideals.size() != 1) throw UsageError("expected exactly one --ideal");
    return o.ideals.front();
}

int worse(int a, int b) {
    // failure outranks indeterminate outranks success
    auto rankof = [](int c) { return c == Failure ? 2 : c == Indeterminate ? 1 : 0; };
    return rankof(a) >= rankof(b) ? a : b;
}

int of_truth(Truth t) { return t == Truth::Indeterminate ? Indeterminate : Success; }

std::string char_text(const IwasawaModule& m) {
    try {
        return char_ideal(m).to_string();
    } catch (const UnsupportedError& e) {
        return std::string("unsupported (") + e.what() + ")";
    } catch (const IndeterminateError& e) {
        return std::string("indeterminate (") + e.what() + ")";
    }
}

// ---- verbs ----

int do_char(const Options& o, Report& r) {
    auto m = load_module(o.inputs.at(0), o);
    r.add("char", char_ideal(m).to_string(), true);
    return Success;
}

int do_rank(const Options& o, Report& r) {
    auto m = load_module(o.inputs.at(0), o);
    if (o.trivial_action) m = with_trivial_action(m);
    r.add("rank", std::to_string(rank(m)), true);
    int code = Success;
    if (o.pseudo_null) {
        auto v = is_pseudo_null(m, o.samples, o.seed);
        r.add("pseudo_null", v.verdict);
        r.add("pseudo_null_method", v.method + (v.probabilistic ? " (probabilistic)" : ""));
        code = worse(code, of_truth(v.verdict));
    }
    if (o.fg) {
        auto t = is_fg_over_subring(m);
        r.add("fg_over_subring", t);
        code = worse(code, of_truth(t));
    }
    if (o.oracle) {
        std::vector<std::pair<int, int>> grid{{o.oracle_n, o.oracle_d / 2}, {o.oracle_n, o.oracle_d},
                                              {2 * o.oracle_n, o.oracle_d / 2}, {2 * o.oracle_n, o.oracle_d}};
        auto p = oracle_rank_probe(m, grid);
        r.add("oracle_rank", p.rank ? fixed3(*p.rank) : "n/a");
        r.add("oracle_note", p.note);
    }
    return code;
}

int do_mu_lambda(const Options& o, Report& r) {
    auto m = load_module(o.inputs.at(0), o);
    auto ml = mu_lambda(m);
    r.add("mu", static_cast<long long>(ml.mu));
    r.add("lambda", static_cast<long long>(ml.lambda));
    auto c = char_ideal(m);
    r.add("char", c.to_string());
    if (!c.vanishes() && !c.is_unit()) r.add("distinguished", weierstrass_prepare(c, 0).distinguished.to_string());
    return Success;
}

int do_structure(const Options& o, Report& r) {
    auto m = load_module(o.inputs.at(0), o);
    auto s = structure_one_var(m);
    r.add("rank", static_cast<long long>(s.rank));
    r.add("mu", static_cast<long long>(s.mu));
    r.add("lambda", static_cast<long long>(s.lambda));
    r.add("char", s.char_gen.to_string());
    std::vector<std::string> ds;
    for (const auto& d : s.elementary_divisors) ds.push_back(d.to_string());
    r.add("divisors", ds.empty() ? std::string("none") : join(ds, "; "));
    r.add("complete", s.complete);
    if (!s.note.empty()) r.add("note", s.note);
    return s.complete ? Success : Indeterminate;
}

int do_specialize(const Options& o, Report& r) {
    auto m = load_module(o.inputs.at(0), o);
    auto l = load_ideal(single_ideal(o), m.context());
    auto q = quotient_by(m, l);
    r.add("ideal", l.to_string());
    r.add("module", trim_newline(q.to_text()));
    r.add("rank", static_cast<long long>(rank(q)));
    r.add("char", char_text(q));
    if (o.oracle) {
        auto fq = finite_quotient(q, o.oracle_n, std::min(o.oracle_d, q.context().degree_cap()));
        r.add("oracle_level", std::to_string(fq.n) + "," + std::to_string(fq.d));
        r.add("oracle_quotient", fq.to_string());
    }
    return Success;
}

int do_torsion_sub(const Options& o, Report& r) {
    auto m = load_module(o.inputs.at(0), o);
    auto l = load_ideal(single_ideal(o), m.context());
    r.add("ideal", l.to_string());
    int code = Success;
    if (m.is_standard()) {
        auto t = torsion_sub(m, l);
        r.add("module", trim_newline(t.to_text()));
        auto rf = rank_formula_check(m, l);
        r.add("rank_m", static_cast<long long>(rf.rank_m));
        r.add("rank_quotient", static_cast<long long>(rf.rank_quotient));
        r.add("rank_torsion_sub", static_cast<long long>(rf.rank_torsion_sub));
        r.add("rank_formula", rf.holds);
        if (!rf.holds) code = Failure;
        auto tt = tor_transfer_check(m, l);
        r.add("quotient_torsion", tt.precondition);
        r.add("m_torsion", tt.m_torsion);
        r.add("tor1_torsion", tt.tor1_torsion);
        if (!tt.note.empty()) r.add("tor_note", tt.note);
        if (tt.precondition && tt.m_torsion != tt.tor1_torsion) code = worse(code, Indeterminate);
    } else {
        r.add("module", std::string("unsupported for presentations"));
        if (!o.oracle) code = Indeterminate;
    }
    if (o.oracle) {
        auto p = oracle_torsion_sub(m, l, o.oracle_n, o.oracle_d);
        r.add("oracle_level", std::to_string(p.n) + "," + std::to_string(p.d));
        r.add("oracle_interior", std::to_string(p.interior_n) + "," + std::to_string(p.interior_d));
        r.add("oracle_log_kernel", static_cast<long long>(p.log_kernel));
        r.add("oracle_log_interior", static_cast<long long>(p.log_interior));
        r.add("oracle_stable", p.stable);
        if (!p.note.empty()) r.add("oracle_note", p.note);
    }
    return code;
}

int do_involute(const Options& o, Report& r) {
    auto m = load_module(o.inputs.at(0), o);
    const int var = o.var ? *o.var - 1 : m.context().vars() - 1;
    if (var < 0 || var >= m.context().vars()) throw UsageError("--var out of range");
    auto t = involute_module(m, var, o.experimental);
    r.add("module", trim_newline(t.to_text()), true);
    return Success;
}

int do_l_class(const Options& o, Report& r) {
    auto m = load_module(o.inputs.at(0), o);
    auto l = load_ideal(single_ideal(o), m.context());
    r.add("ideal", l.to_string());
    auto in = in_L_class(m, l);
    r.add("in_class", in);
    int code = of_truth(in);
    if (m.is_standard()) {
        auto s = l_class_sufficient(m, l);
        r.add("quotient_torsion", s.quotient_torsion);
        r.add("null_torsion_pseudo_null", s.null_torsion_pseudo_null);
        r.add("hypotheses_hold", s.hypotheses_hold);
        r.add("membership", s.membership);
        r.add("extended", s.extended);
        if (!s.note.empty()) r.add("note", s.note);
        // sufficient conditions hold, so membership is asserted
        if (s.hypotheses_hold && s.membership == Truth::False) code = Failure;
        else if (s.hypotheses_hold && s.membership == Truth::Indeterminate) code = worse(code, Indeterminate);
    }
    return code;
}

int do_verify_funceq(const Options& o, Report& r) {
    if (o.inputs.size() != 2) throw UsageError("verify-funceq takes two modules");
    auto m = load_module(o.inputs[0], o);
    auto n = load_module(o.inputs[1], o);
    auto f = funceq_verdict(m, n);
    r.add("verdict", std::string(to_string(f.verdict)), true);
    r.add("rank_m", static_cast<long long>(f.rank_m));
    r.add("rank_n", static_cast<long long>(f.rank_n));
    r.add("reason", f.reason);
    auto direct = pseudo_compare(m, n);
    r.add("direct_comparison", std::string(to_string(direct.verdict)));
    switch (f.verdict) {
    case PseudoVerdict::PseudoIsomorphic: return Success;
    case PseudoVerdict::Different: return Failure;
    default: return Indeterminate;
    }
}

int do_verify_specialization(const Options& o, Report& r) {
    if (o.inputs.size() != 2) throw UsageError("verify-specialization takes two modules");
    auto m = load_module(o.inputs[0], o);
    auto n = load_module(o.inputs[1], o);
    std::vector<LinearElement> ideals;
    if (!o.ideals.empty()) {
        for (const auto& s : o.ideals) ideals.push_back(load_ideal(s, m.context()));
    } else {
        std::vector<PowerSeries> avoid;
        for (const auto* x : {&m, &n}) try {
                auto c = char_ideal(*x);
                if (!c.vanishes()) avoid.push_back(c);
            } catch (const std::exception&) {
            }
        ideals = sample_linear_ideals(m.context(), avoid, o.samples, o.seed);
    }
    auto s = verify_char_equality_by_specialization(m, n, ideals);
    r.add("m_torsion", s.m_torsion);
    r.add("n_torsion", s.n_torsion);
    r.add("m_fg", s.m_fg);
    r.add("n_fg", s.n_fg);
    for (std::size_t i = 0; i < s.checks.size(); ++i) {
        const auto& c = s.checks[i];
        std::string v = c.l.to_string();
        if (!c.error.empty()) v += " error: " + c.error;
        else
            v += " | m_in_class " + std::string(to_string(c.m_in_class)) + ", n_in_class " + to_string(c.n_in_class) +
                 ", char(M/l) " + c.char_m + ", char(N/l) " + c.char_n + ", equal " + to_string(c.specialized_equal);
        r.add("check" + std::to_string(i + 1), v);
    }
    r.add("global_equal", s.global_equal);
    r.add("conclusion", std::string(to_string(s.conclusion)));
    r.add("contradiction", s.contradiction);
    r.add("summary", s.summary);
    if (s.contradiction || s.conclusion == Conclusion::Refuted) return Failure;
    return s.conclusion == Conclusion::Consistent ? Success : Indeterminate;
}

int do_counterexample(const Options& o, Report& r) {
    auto rep = counterexample_suite(o.prime.value_or(3), o.i_from, o.i_to, o.prec.value_or(20), o.deg.value_or(16));
    r.add("prime", static_cast<long long>(rep.prime));
    for (const auto& c : rep.checks)
        r.add("check", std::string(c.passed ? "PASS " : "FAIL ") + c.name + (c.detail.empty() ? "" : " [" + c.detail + "]"), true);
    for (const auto& note : rep.notes) r.add("note", note);
    r.add("result", std::string(rep.all_passed ? "all checks passed" : "some checks failed"));
    return rep.all_passed ? Success : Failure;
}

int do_reconstruct(const Options& o, Report& r) {
    if (o.ranks.empty() == o.multiplicities.empty()) throw UsageError("give exactly one of --ranks and --multiplicities");
    if (!o.ranks.empty()) {
        ReconstructionProblem prob{static_cast<int>(o.ranks.size()), o.ranks, o.module_rank, o.deg_f};
        try {
            r.add("a", join(reconstruct_multiplicities(prob)));
        } catch (const InconsistentInput& e) {
            r.add("inconsistent", std::string(e.what()));
            return Failure;
        }
        return Success;
    }
    std::vector<std::int64_t> ranks;
    for (int k = 1; k <= static_cast<int>(o.multiplicities.size()); ++k)
        ranks.push_back(corank_formula(o.module_rank, o.multiplicities, o.deg_f, k));
    r.add("ranks", join(ranks));
    return Success;
}

int do_oracle_probe(const Options& o, Report& r) {
    auto m = load_module(o.inputs.at(0), o);
    std::vector<std::pair<int, int>> grid;
    std::istringstream in(o.grid);
    for (std::string item; std::getline(in, item, ',');) {
        int n = 0, d = 0;
        char colon = 0;
        std::istringstream is(item);
        if (!(is >> n >> colon >> d) || colon != ':') throw UsageError("bad --grid entry '" + item + "', want n:d");
        grid.emplace_back(n, d);
    }
    for (auto [n, d] : grid) {
        auto q = finite_quotient(m, n, d);
        r.add("Q(" + std::to_string(n) + "," + std::to_string(d) + ")",
              q.to_string() + " (log " + std::to_string(q.log_cardinality()) + ")");
    }
    auto p = oracle_rank_probe(m, grid);
    r.add("rank_estimate", p.rank ? fixed3(*p.rank) : "n/a");
    if (m.context().vars() == 1) {
        r.add("mu_estimate", p.mu ? fixed3(*p.mu) : "n/a");
        r.add("lambda_estimate", p.lambda ? fixed3(*p.lambda) : "n/a");
    }
    r.add("note", p.note);
    return Success;
}

using Handler = std::function<int(const Options&, Report&)>;

struct Verb {
    VerbInfo info;
    Handler handler;
};

const std::vector<Verb>& verb_table() {
    static const std::vector<Verb> table{
        {{"char", "generator of the characteristic ideal", {"char_ideal"}}, do_char},
        {{"rank",
          "generic rank; --pseudo-null, --fg, --trivial-action, --oracle add detail",
          {"rank", "is_pseudo_null", "is_fg_over_subring", "with_trivial_action", "oracle_rank_probe"}},
         do_rank},
        {{"mu-lambda", "mu and lambda over Z_p[[W]]", {"mu_lambda", "char_ideal", "weierstrass_prepare"}}, do_mu_lambda},
        {{"structure", "elementary divisors over Z_p[[W]]", {"structure_one_var"}}, do_structure},
        {{"specialize", "M/lM over R/(l)", {"quotient_by", "rank", "char_ideal", "finite_quotient"}}, do_specialize},
        {{"torsion-sub",
          "l-torsion M[l] with the rank formula and Tor transfer",
          {"torsion_sub", "rank_formula_check", "tor_transfer_check", "oracle_torsion_sub"}},
         do_torsion_sub},
        {{"involute", "twist by the involution of one variable", {"involute_module"}}, do_involute},
        {{"l-class", "membership in the class of good linear ideals", {"in_L_class", "l_class_sufficient"}},
         do_l_class},
        {{"verify-funceq", "M pseudo-isomorphic to the involuted N", {"funceq_verdict", "pseudo_compare"}},
         do_verify_funceq},
        {{"verify-specialization",
          "compare char(M), char(N) through linear specializations",
          {"verify_char_equality_by_specialization", "sample_linear_ideals"}},
         do_verify_specialization},
        {{"counterexample", "reproduce the two-part counterexample", {"counterexample_suite"}}, do_counterexample},
        {{"reconstruct",
          "multiplicities from corank data (or the reverse)",
          {"reconstruct_multiplicities", "corank_formula"}},
         do_reconstruct},
        {{"oracle-probe", "brute-force finite quotients and growth fit", {"finite_quotient", "oracle_rank_probe"}},
         do_oracle_probe},
    };
    return table;
}

void add_common(CLI::App* sub, Options& o, bool context_flags = true) {
    sub->add_option("--format", o.format, "output format")->check(CLI::IsMember({"text", "kv"}));
    if (context_flags) {
        sub->add_option("--prime", o.prime, "p (must match the file header if it sets one)");
        sub->add_option("--prec", o.prec, "p-adic precision N");
        sub->add_option("--deg", o.deg, "degree cap D");
        sub->add_option("--vars", o.vars, "variable count for inline modules without a header");
    }
}

} // namespace

const std::vector<VerbInfo>& verbs() {
    static const std::vector<VerbInfo> infos = [] {
        std::vector<VerbInfo> v;
        for (const auto& verb : verb_table()) v.push_back(verb.info);
        return v;
    }();
    return infos;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Modules over truncated Iwasawa algebras", "iwasawa"};
    app.require_subcommand(1, 1);
    std::vector<std::pair<CLI::App*, const Verb*>> subs;

    for (const auto& verb : verb_table()) {
        const auto& name = verb.info.name;
        auto* sub = app.add_subcommand(name, verb.info.summary);
        subs.emplace_back(sub, &verb);
        if (name == "reconstruct") {
            add_common(sub, o, false);
            sub->add_option("--ranks", o.ranks, "corank sequence r_1..r_theta")->delimiter(',');
            sub->add_option("--multiplicities", o.multiplicities, "a_1..a_theta (computes the ranks)")->delimiter(',');
            sub->add_option("--rank", o.module_rank, "module rank");
            sub->add_option("--deg", o.deg_f, "degree of f")->check(CLI::PositiveNumber);
            continue;
        }
        add_common(sub, o);
        if (name == "counterexample") {
            sub->add_option("--from", o.i_from, "first i");
            sub->add_option("--to", o.i_to, "last i");
            continue;
        }
        const bool two = name == "verify-funceq" || name == "verify-specialization";
        sub->add_option("inputs", o.inputs, two ? "two module files or inline modules" : "module file or inline module")
            ->required()
            ->expected(two ? 2 : 1);
        if (name == "specialize" || name == "torsion-sub" || name == "l-class" || name == "verify-specialization")
            sub->add_option("--ideal", o.ideals, "linear element, e.g. 'W1 - p^3' (comma-separated list allowed)")
                ->delimiter(',');
        if (name == "rank" || name == "verify-specialization") {
            sub->add_option("--seed", o.seed, "sampling seed");
            sub->add_option("--samples", o.samples, "number of sampled specializations")->check(CLI::PositiveNumber);
        }
        if (name == "rank" || name == "specialize" || name == "torsion-sub") {
            sub->add_flag("--oracle", o.oracle, "cross-check with the brute-force finite quotient");
            sub->add_option("--oracle-n", o.oracle_n, "oracle p-adic level")->check(CLI::PositiveNumber);
            sub->add_option("--oracle-d", o.oracle_d, "oracle degree level")->check(CLI::PositiveNumber);
        }
        if (name == "rank") {
            sub->add_flag("--pseudo-null", o.pseudo_null, "also decide pseudo-nullity");
            sub->add_flag("--fg", o.fg, "also decide finite generation over the subring without the last variable");
            sub->add_flag("--trivial-action", o.trivial_action, "view M over R[[W]] with W acting by zero");
        }
        if (name == "involute") {
            sub->add_option("--var", o.var, "1-based variable index (default: the last)");
            sub->add_flag("--experimental", o.experimental, "allow entrywise twisting of a presentation");
        }
        if (name == "oracle-probe") sub->add_option("--grid", o.grid, "levels n:d, comma separated");
    }

    std::vector<const char*> argv{"iwasawa"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? Success : Usage;
    }

    const Verb* verb = nullptr;
    for (auto [sub, v] : subs)
        if (sub->parsed()) verb = v;

    Report report;
    int code = Success;
    try {
        code = verb->handler(o, report);
    } catch (const iwasawa::ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return Usage;
    } catch (const ContextMismatch& e) {
        err << "context mismatch: " << e.what() << '\n';
        return Usage;
    } catch (const UsageError& e) {
        err << "usage: " << e.what() << '\n';
        return Usage;
    } catch (const IndeterminateError& e) {
        err << "indeterminate: " << e.what() << '\n';
        return Indeterminate;
    } catch (const UnsupportedError& e) {
        err << "unsupported: " << e.what() << '\n';
        return Indeterminate;
    } catch (const NotPreparable& e) {
        err << "indeterminate: " << e.what() << '\n';
        return Indeterminate;
    } catch (const SamplingExhausted& e) {
        err << "indeterminate: " << e.what() << '\n';
        return Indeterminate;
    } catch (const std::invalid_argument& e) {
        err << "invalid input: " << e.what() << '\n';
        return Usage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return Failure;
    }
    report.write(out, o.format);
    return code;
}

} // namespace iwasawa::cli
