#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "iwasawa/series.hpp"

namespace iwasawa {

/// a0 + a1*W1 + ... + am*Wm with p | a0 and some ai (i >= 1) a unit.
/// Generates a height-one prime whose quotient ring is again a power series
/// ring in one variable fewer.
class LinearElement {
public:
    /// Throws std::invalid_argument when the coefficients violate the shape.
    static LinearElement make(const RingContext& ctx, std::vector<PadicScalar> coefficients);
    static LinearElement make(const RingContext& ctx, std::span<const std::int64_t> coefficients);
    /// Accepts a polynomial of total degree <= 1.
    static LinearElement from_series(const PowerSeries& f);

    const RingContext& context() const { return ctx_; }
    const std::vector<PadicScalar>& coefficients() const { return a_; }
    /// Index (0-based variable) eliminated by the quotient map: the largest
    /// index whose coefficient is a unit.
    int pivot() const;
    PowerSeries as_series() const;
    std::string to_string() const { return as_series().to_string(); }

private:
    LinearElement(RingContext ctx, std::vector<PadicScalar> a) : ctx_(std::move(ctx)), a_(std::move(a)) {}

    RingContext ctx_;
    std::vector<PadicScalar> a_;
};

/// Random linear element with small coefficients: a0 in p*[-9, 9], the others
/// in [-9, 9], at least one of them a unit. Only W_1..W_used_vars appear
/// (all variables when negative).
LinearElement random_linear_element(const RingContext& ctx, std::mt19937_64& rng, int used_vars = -1);

/// (l) == (l2), i.e. l = u*l2 for a unit u of Z_p, decided at precision N.
bool linear_ideal_equal(const LinearElement& l, const LinearElement& l2);

/// Image of f under R -> R/(l) ~ Z_p[[m-1 variables]], obtained by solving l = 0
/// for the pivot variable. Remaining variables keep their order.
PowerSeries eliminate_variable(const PowerSeries& f, const LinearElement& l);

} // namespace iwasawa
