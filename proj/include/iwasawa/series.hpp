#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "iwasawa/context.hpp"
#include "iwasawa/kernels.hpp"
#include "iwasawa/padic.hpp"

namespace iwasawa {

/// Element of Z_p[[W1..Wm]] modulo (p^N, total degree >= D). Sparse: only
/// nonzero coefficients are stored, keyed by monomial index. Arithmetic is
/// exact in that quotient ring.
class PowerSeries {
public:
    explicit PowerSeries(RingContext ctx) : ctx_(std::move(ctx)) {}

    static PowerSeries constant(const RingContext& ctx, std::int64_t c);
    static PowerSeries scalar(const RingContext& ctx, const PadicScalar& c);
    /// W_{var+1}; var is 0-based.
    static PowerSeries variable(const RingContext& ctx, int var);
    static PowerSeries monomial(const RingContext& ctx, std::span<const int> exponents, const PadicScalar& c);

    const RingContext& context() const { return ctx_; }
    const std::map<std::uint32_t, PadicScalar>& terms() const { return terms_; }
    std::size_t term_count() const { return terms_.size(); }
    /// Exactly zero. Coefficients only known to be 0 mod p^k (k < N) are kept as
    /// terms, so a series can vanish at its precision without being zero.
    bool is_zero() const { return terms_.empty(); }
    bool vanishes() const;

    /// True when the value is known to be a polynomial of degree < D, i.e. the
    /// degree cap has not discarded anything.
    bool is_polynomial() const { return polynomial_; }
    PowerSeries& mark_truncated() {
        polynomial_ = false;
        return *this;
    }
    PowerSeries& mark_polynomial() {
        polynomial_ = true;
        return *this;
    }

    PadicScalar coeff(std::span<const int> exponents) const;
    PadicScalar coeff_at(std::size_t index) const;
    PadicScalar constant_term() const;

    /// -1 for zero.
    int total_degree() const;
    /// Lowest total degree present; -1 for zero.
    int order() const;
    int degree_in(int var) const;
    /// min v_p over coefficients (the p-content); 0 for zero.
    int content_valuation() const;
    int min_precision() const;
    bool is_unit() const { return constant_term().is_unit(); }

    PowerSeries operator-() const;
    friend PowerSeries operator+(const PowerSeries& a, const PowerSeries& b);
    friend PowerSeries operator-(const PowerSeries& a, const PowerSeries& b);
    friend PowerSeries operator*(const PowerSeries& a, const PowerSeries& b);
    PowerSeries scaled(const PadicScalar& c) const;
    PowerSeries pow(unsigned k) const;

    /// Multiplicative inverse of a unit (Newton iteration).
    PowerSeries inverse() const;
    /// Exact division by p^k; requires content_valuation() >= k.
    PowerSeries divide_by_p_power(int k) const;
    /// Terms of total degree < d only.
    PowerSeries below_degree(int d) const;

    /// Coefficientwise agreement at the common precision; when `below` >= 0
    /// only monomials of total degree < below are compared.
    bool agrees_with(const PowerSeries& o, int below = -1) const;

    kernels::DenseSeries to_dense() const;
    static PowerSeries from_dense(const RingContext& ctx, const kernels::DenseSeries& d);

    /// Lowers the precision of every monomial k to at most bound(k); absent
    /// monomials become O(p^bound) zeros when bound < N.
    PowerSeries& cap_precision(const std::function<int(std::size_t)>& bound);

    /// Sets (or clears, for an exact zero) a coefficient.
    void set_coeff(std::size_t index, const PadicScalar& c);

    std::string to_string() const;

private:
    RingContext ctx_;
    std::map<std::uint32_t, PadicScalar> terms_;
    bool polynomial_ = true;
};

/// Name of variable `var` (0-based) in a context with `vars` variables. The
/// single variable of a one-variable ring prints as W.
std::string variable_name(int var, int vars);

} // namespace iwasawa
