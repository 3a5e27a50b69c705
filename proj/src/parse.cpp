#include "iwasawa/parse.hpp"

#include <cctype>
#include <string>

#include "iwasawa/errors.hpp"

namespace iwasawa {

namespace {

class SeriesParser {
public:
    SeriesParser(const RingContext& ctx, std::string_view text, int line, int column)
        : ctx_(ctx), text_(text), line_(line), col0_(column) {}

    PowerSeries parse() {
        PowerSeries r = expr();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return r;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg, line_, col0_ + static_cast<int>(pos_));
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    PowerSeries expr() {
        PowerSeries acc = term();
        for (;;) {
            if (accept('+'))
                acc = acc + term();
            else if (accept('-'))
                acc = acc - term();
            else
                return acc;
        }
    }

    PowerSeries term() {
        PowerSeries acc = factor();
        while (accept('*')) acc = acc * factor();
        return acc;
    }

    PowerSeries factor() {
        if (accept('-')) return -factor();
        if (accept('+')) return factor();
        PowerSeries base = atom();
        if (accept('^')) {
            skip_ws();
            if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
                fail("expected exponent after '^'");
            unsigned e = 0;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                e = e * 10 + static_cast<unsigned>(text_[pos_] - '0');
                if (e > 10000) fail("exponent too large");
                ++pos_;
            }
            return base.pow(e);
        }
        return base;
    }

    PowerSeries atom() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            PowerSeries r = expr();
            if (!accept(')')) fail("expected ')'");
            return r;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            const std::uint64_t m = ctx_.modulus();
            unsigned __int128 v = 0;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                v = (v * 10 + static_cast<unsigned>(text_[pos_] - '0')) % m;
                ++pos_;
            }
            return PowerSeries::scalar(ctx_, PadicScalar::from_residue(ctx_.prime(), ctx_.precision(),
                                                                       ctx_.precision(), static_cast<std::uint64_t>(v)));
        }
        if (c == 'p') {
            ++pos_;
            return PowerSeries::constant(ctx_, static_cast<std::int64_t>(ctx_.prime()));
        }
        if (c == 'W') {
            ++pos_;
            if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                int idx = 0;
                std::size_t start = pos_;
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                    idx = idx * 10 + (text_[pos_] - '0');
                    if (idx > 1000) break;
                    ++pos_;
                }
                if (idx < 1 || idx > ctx_.vars()) {
                    pos_ = start - 1;
                    fail("variable W" + std::to_string(idx) + " outside W1..W" + std::to_string(ctx_.vars()));
                }
                return PowerSeries::variable(ctx_, idx - 1);
            }
            if (ctx_.vars() == 0) {
                --pos_;
                fail("W used in a ring with no variables");
            }
            return PowerSeries::variable(ctx_, ctx_.vars() - 1);
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    const RingContext& ctx_;
    std::string_view text_;
    std::size_t pos_ = 0;
    int line_;
    int col0_;
};

} // namespace

PowerSeries parse_series(const RingContext& ctx, std::string_view text, int line, int column) {
    return SeriesParser(ctx, text, line, column).parse();
}

} // namespace iwasawa
