#include "iwasawa/module.hpp"

#include <cctype>
#include <sstream>

#include "iwasawa/errors.hpp"
#include "iwasawa/iwmod.hpp"
#include "iwasawa/parse.hpp"

namespace iwasawa {

Presentation Presentation::make(const RingContext& ctx, int rows, int cols, std::vector<PowerSeries> entries) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("presentation: negative dimension");
    if (entries.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols))
        throw std::invalid_argument("presentation: expected " + std::to_string(rows * cols) + " entries, got " +
                                    std::to_string(entries.size()));
    for (const auto& e : entries) ctx.require_same(e.context());
    return {ctx, rows, cols, std::move(entries)};
}

Presentation Presentation::diagonal(const RingContext& ctx, const std::vector<PowerSeries>& diag) {
    const int n = static_cast<int>(diag.size());
    std::vector<PowerSeries> e(static_cast<std::size_t>(n * n), PowerSeries(ctx));
    for (int i = 0; i < n; ++i) e[static_cast<std::size_t>(i * n + i)] = diag[static_cast<std::size_t>(i)];
    return make(ctx, n, n, std::move(e));
}

Presentation Presentation::block_sum(const Presentation& a, const Presentation& b) {
    a.context.require_same(b.context);
    const int rows = a.rows + b.rows, cols = a.cols + b.cols;
    std::vector<PowerSeries> e(static_cast<std::size_t>(rows * cols), PowerSeries(a.context));
    for (int r = 0; r < a.rows; ++r)
        for (int c = 0; c < a.cols; ++c) e[static_cast<std::size_t>(r * cols + c)] = a.at(r, c);
    for (int r = 0; r < b.rows; ++r)
        for (int c = 0; c < b.cols; ++c) e[static_cast<std::size_t>((a.rows + r) * cols + a.cols + c)] = b.at(r, c);
    return {a.context, rows, cols, std::move(e)};
}

IwasawaModule unchecked_standard(const RingContext& ctx, StandardForm s) { return IwasawaModule(ctx, std::move(s)); }

IwasawaModule IwasawaModule::standard(const RingContext& ctx, std::vector<PowerSeries> cyclics, int free_rank,
                                      std::optional<Presentation> pseudo_null_part) {
    if (free_rank < 0) throw std::invalid_argument("negative free rank");
    for (const auto& g : cyclics) {
        ctx.require_same(g.context());
        if (g.is_zero()) throw std::invalid_argument("cyclic generator must be nonzero (use the free rank)");
    }
    if (pseudo_null_part) {
        ctx.require_same(pseudo_null_part->context);
        if (is_pseudo_null(presentation(*pseudo_null_part)).verdict == Truth::False)
            throw std::invalid_argument("declared pseudo-null part is not pseudo-null");
    }
    return IwasawaModule(ctx, StandardForm{std::move(cyclics), free_rank, std::move(pseudo_null_part)});
}

IwasawaModule IwasawaModule::presentation(Presentation p) {
    RingContext ctx = p.context;
    return IwasawaModule(std::move(ctx), std::move(p));
}

const StandardForm& IwasawaModule::standard_form() const {
    if (auto* s = std::get_if<StandardForm>(&shape_)) return *s;
    throw UnsupportedError("module is given by a presentation, not in standard form");
}

const Presentation& IwasawaModule::presentation_data() const {
    if (auto* p = std::get_if<Presentation>(&shape_)) return *p;
    throw UnsupportedError("module is in standard form, not given by a presentation");
}

Presentation IwasawaModule::to_presentation() const {
    if (auto* p = std::get_if<Presentation>(&shape_)) return *p;
    const auto& s = std::get<StandardForm>(shape_);
    Presentation out = Presentation::diagonal(ctx_, s.cyclics);
    if (s.free_rank > 0) out = Presentation::block_sum(out, Presentation{ctx_, s.free_rank, 0, {}});
    if (s.pseudo_null_part) out = Presentation::block_sum(out, *s.pseudo_null_part);
    return out;
}

namespace {

std::string matrix_text(const Presentation& p) {
    std::ostringstream out;
    out << "rows=" << p.rows << " cols=" << p.cols << "; [";
    for (int r = 0; r < p.rows; ++r) {
        if (r) out << "; ";
        for (int c = 0; c < p.cols; ++c) out << (c ? ", " : "") << p.at(r, c).to_string();
    }
    out << "]";
    return out.str();
}

} // namespace

std::string IwasawaModule::to_text() const {
    std::ostringstream out;
    out << ctx_.describe() << "\n";
    if (auto* p = std::get_if<Presentation>(&shape_)) {
        out << "presentation: " << matrix_text(*p) << "\n";
        return out.str();
    }
    const auto& s = std::get<StandardForm>(shape_);
    out << "standard: ";
    for (const auto& g : s.cyclics) out << "cyclic (" << g.to_string() << "); ";
    out << "free " << s.free_rank;
    if (s.pseudo_null_part) out << "; null " << matrix_text(*s.pseudo_null_part);
    out << "\n";
    return out.str();
}

IwasawaModule direct_sum(const IwasawaModule& a, const IwasawaModule& b) {
    a.context().require_same(b.context());
    if (a.is_standard() && b.is_standard()) {
        const auto& x = a.standard_form();
        const auto& y = b.standard_form();
        StandardForm s{x.cyclics, x.free_rank + y.free_rank, x.pseudo_null_part};
        s.cyclics.insert(s.cyclics.end(), y.cyclics.begin(), y.cyclics.end());
        if (y.pseudo_null_part)
            s.pseudo_null_part = s.pseudo_null_part ? Presentation::block_sum(*s.pseudo_null_part, *y.pseudo_null_part)
                                                    : *y.pseudo_null_part;
        return unchecked_standard(a.context(), std::move(s));
    }
    return IwasawaModule::presentation(Presentation::block_sum(a.to_presentation(), b.to_presentation()));
}

// ---------------------------------------------------------------------------
// Module description files.

namespace {

class Source {
public:
    explicit Source(const std::string& text) : text_(text) {
        // Comments run from '#' to the end of the line; blank them in place so
        // offsets keep pointing at the original text.
        bool comment = false;
        for (char& ch : text_) {
            if (ch == '\n')
                comment = false;
            else if (ch == '#')
                comment = true;
            if (comment) ch = ' ';
        }
    }

    const std::string& text() const { return text_; }

    std::pair<int, int> position(std::size_t offset) const {
        int line = 1, col = 1;
        for (std::size_t i = 0; i < offset && i < text_.size(); ++i) {
            if (text_[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        return {line, col};
    }

    [[noreturn]] void fail(const std::string& msg, std::size_t offset) const {
        auto [l, c] = position(offset);
        throw ParseError(msg, l, c);
    }

private:
    std::string text_;
};

struct Span {
    std::size_t begin;
    std::size_t end;
};

Span trim(const std::string& s, Span sp) {
    while (sp.begin < sp.end && std::isspace(static_cast<unsigned char>(s[sp.begin]))) ++sp.begin;
    while (sp.end > sp.begin && std::isspace(static_cast<unsigned char>(s[sp.end - 1]))) --sp.end;
    return sp;
}

// Splits at `sep` outside parentheses and brackets.
std::vector<Span> split_top(const Source& src, Span sp, char sep) {
    const std::string& s = src.text();
    std::vector<Span> out;
    int depth = 0;
    std::size_t start = sp.begin;
    for (std::size_t i = sp.begin; i < sp.end; ++i) {
        char ch = s[i];
        if (ch == '(' || ch == '[') ++depth;
        if (ch == ')' || ch == ']') {
            if (--depth < 0) src.fail("unbalanced '" + std::string(1, ch) + "'", i);
        }
        if (ch == sep && depth == 0) {
            out.push_back(trim(s, {start, i}));
            start = i + 1;
        }
    }
    if (depth != 0) src.fail("unclosed bracket", sp.end);
    out.push_back(trim(s, {start, sp.end}));
    return out;
}

std::string text_of(const Source& src, Span sp) { return src.text().substr(sp.begin, sp.end - sp.begin); }

PowerSeries series_at(const Source& src, const RingContext& ctx, Span sp) {
    if (sp.begin == sp.end) src.fail("empty series", sp.begin);
    auto [l, c] = src.position(sp.begin);
    return parse_series(ctx, text_of(src, sp), l, c);
}

int parse_count(const Source& src, Span sp, const std::string& what) {
    const std::string t = text_of(src, sp);
    if (t.empty() || t.size() > 6 || !std::all_of(t.begin(), t.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); }))
        src.fail("expected a nonnegative integer for " + what + ", got '" + t + "'", sp.begin);
    return std::stoi(t);
}

// "rows=R cols=C"
std::pair<int, int> parse_dims(const Source& src, Span sp) {
    const std::string& s = src.text();
    int rows = -1, cols = -1;
    std::size_t i = sp.begin;
    while (i < sp.end) {
        while (i < sp.end && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        if (i >= sp.end) break;
        std::size_t j = i;
        while (j < sp.end && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
        const std::string word = s.substr(i, j - i);
        auto eq = word.find('=');
        if (eq == std::string::npos) src.fail("expected key=value, got '" + word + "'", i);
        const std::string key = word.substr(0, eq);
        const Span val{i + eq + 1, j};
        if (key == "rows")
            rows = parse_count(src, val, "rows");
        else if (key == "cols")
            cols = parse_count(src, val, "cols");
        else
            src.fail("unknown key '" + key + "'", i);
        i = j;
    }
    if (rows < 0 || cols < 0) src.fail("matrix needs rows= and cols=", sp.begin);
    return {rows, cols};
}

Presentation parse_matrix(const Source& src, const RingContext& ctx, Span dims, Span body) {
    auto [rows, cols] = parse_dims(src, dims);
    const std::string& s = src.text();
    if (body.end - body.begin < 2 || s[body.begin] != '[' || s[body.end - 1] != ']')
        src.fail("expected a bracketed matrix", body.begin);
    const Span inner = trim(s, {body.begin + 1, body.end - 1});
    std::vector<PowerSeries> entries;
    if (inner.begin != inner.end) {
        auto row_spans = split_top(src, inner, ';');
        if (static_cast<int>(row_spans.size()) != rows)
            src.fail("expected " + std::to_string(rows) + " rows, got " + std::to_string(row_spans.size()), inner.begin);
        for (const auto& rs : row_spans) {
            auto cells = split_top(src, rs, ',');
            if (static_cast<int>(cells.size()) != cols)
                src.fail("expected " + std::to_string(cols) + " entries in this row, got " + std::to_string(cells.size()),
                         rs.begin);
            for (const auto& c : cells) entries.push_back(series_at(src, ctx, c));
        }
    } else if (rows * cols != 0) {
        src.fail("empty matrix body for a nonempty shape", body.begin);
    }
    return Presentation::make(ctx, rows, cols, std::move(entries));
}

bool starts_with_word(const std::string& s, Span sp, const std::string& word) {
    if (sp.end - sp.begin < word.size() || s.compare(sp.begin, word.size(), word) != 0) return false;
    return sp.begin + word.size() == sp.end || !std::isalnum(static_cast<unsigned char>(s[sp.begin + word.size()]));
}

} // namespace

RingContext parse_ring_header(const std::string& line, const ContextOverrides& overrides, int line_no) {
    std::istringstream in(line);
    std::string word;
    in >> word;
    if (word != "ring") throw ParseError("module file must start with a 'ring' header", line_no, 1);
    std::optional<std::uint64_t> p;
    std::optional<int> vars, prec, deg;
    while (in >> word) {
        const auto col = static_cast<int>(line.find(word)) + 1;
        auto eq = word.find('=');
        if (eq == std::string::npos) throw ParseError("expected key=value, got '" + word + "'", line_no, col);
        const std::string key = word.substr(0, eq), val = word.substr(eq + 1);
        long long v;
        try {
            std::size_t used = 0;
            v = std::stoll(val, &used);
            if (used != val.size() || v < 0) throw std::invalid_argument(val);
        } catch (const std::exception&) {
            throw ParseError("bad value for " + key + ": '" + val + "'", line_no, col);
        }
        if (key == "p")
            p = static_cast<std::uint64_t>(v);
        else if (key == "vars")
            vars = static_cast<int>(v);
        else if (key == "prec")
            prec = static_cast<int>(v);
        else if (key == "deg")
            deg = static_cast<int>(v);
        else
            throw ParseError("unknown header key '" + key + "'", line_no, col);
    }
    auto merge = [&](auto& field, const auto& over, const char* name) {
        if (over && field && static_cast<long long>(*field) != static_cast<long long>(*over))
            throw ParseError(std::string("header ") + name + " conflicts with the command line", line_no, 1);
        if (!field && over) field = *over;
    };
    merge(p, overrides.prime, "p");
    merge(prec, overrides.precision, "prec");
    merge(deg, overrides.degree_cap, "deg");
    if (!p) throw ParseError("header needs p=", line_no, 1);
    if (!vars) throw ParseError("header needs vars=", line_no, 1);
    try {
        return RingContext::make(*p, *vars, prec.value_or(RingContext::default_precision),
                                 deg.value_or(RingContext::default_degree_cap));
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what(), line_no, 1);
    }
}

IwasawaModule parse_module(const std::string& text, const ContextOverrides& overrides) {
    const Source src(text);
    const std::string& s = src.text();

    // Header: first non-blank line.
    std::size_t pos = 0;
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == s.size()) throw ParseError("empty module description", 1, 1);
    std::size_t eol = s.find('\n', pos);
    if (eol == std::string::npos) eol = s.size();
    const RingContext ctx = parse_ring_header(s.substr(pos, eol - pos), overrides, src.position(pos).first);

    Span body = trim(s, {eol, s.size()});
    if (body.begin == body.end) src.fail("missing module body ('standard:' or 'presentation:')", body.begin);
    const std::size_t colon = s.find(':', body.begin);
    if (colon == std::string::npos || colon >= body.end) src.fail("expected 'standard:' or 'presentation:'", body.begin);
    const std::string kind = text_of(src, trim(s, {body.begin, colon}));
    auto items = split_top(src, {colon + 1, body.end}, ';');
    // A trailing ';' leaves an empty item.
    if (!items.empty() && items.back().begin == items.back().end) items.pop_back();

    if (kind == "presentation") {
        if (items.size() != 2) src.fail("presentation expects 'rows=R cols=C; [ ... ]'", colon + 1);
        return IwasawaModule::presentation(parse_matrix(src, ctx, items[0], items[1]));
    }
    if (kind != "standard") src.fail("unknown module kind '" + kind + "'", body.begin);

    std::vector<PowerSeries> cyclics;
    int free_rank = 0;
    bool saw_free = false;
    std::optional<Presentation> null_part;
    for (std::size_t i = 0; i < items.size(); ++i) {
        const Span it = items[i];
        if (starts_with_word(s, it, "cyclic")) {
            cyclics.push_back(series_at(src, ctx, trim(s, {it.begin + 6, it.end})));
            if (cyclics.back().is_zero()) src.fail("cyclic generator is zero (use 'free')", it.begin);
        } else if (starts_with_word(s, it, "free")) {
            if (saw_free) src.fail("duplicate 'free'", it.begin);
            saw_free = true;
            free_rank = parse_count(src, trim(s, {it.begin + 4, it.end}), "free");
        } else if (starts_with_word(s, it, "null")) {
            if (null_part) src.fail("duplicate 'null'", it.begin);
            if (i + 1 >= items.size()) src.fail("'null' needs a matrix after its dimensions", it.begin);
            null_part = parse_matrix(src, ctx, trim(s, {it.begin + 4, it.end}), items[i + 1]);
            ++i;
        } else {
            src.fail("expected 'cyclic', 'free' or 'null', got '" + text_of(src, it) + "'", it.begin);
        }
    }
    try {
        return IwasawaModule::standard(ctx, std::move(cyclics), free_rank, std::move(null_part));
    } catch (const std::invalid_argument& e) {
        src.fail(e.what(), body.begin);
    }
}

} // namespace iwasawa
