#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "iwasawa/series.hpp"

namespace iwasawa {

/// Module R^rows / (column span of a rows x cols matrix).
struct Presentation {
    RingContext context;
    int rows = 0;
    int cols = 0;
    std::vector<PowerSeries> entries; // row-major

    static Presentation make(const RingContext& ctx, int rows, int cols, std::vector<PowerSeries> entries);
    static Presentation diagonal(const RingContext& ctx, const std::vector<PowerSeries>& diag);
    const PowerSeries& at(int r, int c) const { return entries[static_cast<std::size_t>(r * cols + c)]; }
    /// Block sum: generators of `b` after those of `a`.
    static Presentation block_sum(const Presentation& a, const Presentation& b);
};

/// (+) R/(g_i)  (+)  R^free_rank  (+)  pseudo-null part.
struct StandardForm {
    std::vector<PowerSeries> cyclics;
    int free_rank = 0;
    std::optional<Presentation> pseudo_null_part;
};

class IwasawaModule {
public:
    /// Rejects zero cyclic generators and a declared pseudo-null part that is
    /// provably not pseudo-null.
    static IwasawaModule standard(const RingContext& ctx, std::vector<PowerSeries> cyclics, int free_rank,
                                  std::optional<Presentation> pseudo_null_part = std::nullopt);
    static IwasawaModule presentation(Presentation p);
    static IwasawaModule free(const RingContext& ctx, int rank) { return standard(ctx, {}, rank); }
    static IwasawaModule zero(const RingContext& ctx) { return standard(ctx, {}, 0); }

    const RingContext& context() const { return ctx_; }
    bool is_standard() const { return std::holds_alternative<StandardForm>(shape_); }
    const StandardForm& standard_form() const;
    const Presentation& presentation_data() const;
    /// Presentation of the same module (block diagonal for StandardForm).
    Presentation to_presentation() const;

    /// Module-file text (round-trips through parse_module).
    std::string to_text() const;

private:
    IwasawaModule(RingContext ctx, std::variant<StandardForm, Presentation> shape)
        : ctx_(std::move(ctx)), shape_(std::move(shape)) {}
    friend IwasawaModule unchecked_standard(const RingContext&, StandardForm);

    RingContext ctx_;
    std::variant<StandardForm, Presentation> shape_;
};

/// StandardForm without the pseudo-null validation (for callers that have
/// already decided it).
IwasawaModule unchecked_standard(const RingContext& ctx, StandardForm s);

IwasawaModule direct_sum(const IwasawaModule& a, const IwasawaModule& b);

struct ContextOverrides {
    std::optional<std::uint64_t> prime;
    std::optional<int> precision;
    std::optional<int> degree_cap;
};

/// Parses a module description file. `overrides` fill in header keys that the
/// file leaves out; a conflicting explicit value is a parse error.
IwasawaModule parse_module(const std::string& text, const ContextOverrides& overrides = {});
/// Header line for a context, e.g. "ring p=3 vars=2 prec=20 deg=16".
RingContext parse_ring_header(const std::string& line, const ContextOverrides& overrides = {}, int line_no = 1);

} // namespace iwasawa
