#pragma once

#include <cstdint>
#include <string>

#include "iwasawa/context.hpp"

namespace iwasawa {

namespace modarith {

inline std::uint64_t mul(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}
inline std::uint64_t add(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    std::uint64_t s = a + b;
    return s >= m ? s - m : s;
}
inline std::uint64_t sub(std::uint64_t a, std::uint64_t b, std::uint64_t m) { return a >= b ? a - b : a + m - b; }

/// Inverse of a modulo m; a must be coprime to m.
std::uint64_t inverse(std::uint64_t a, std::uint64_t m);

/// p-adic valuation of a nonzero residue, capped at `cap`.
int valuation(std::uint64_t a, std::uint64_t p, int cap);

} // namespace modarith

/// Element of Z_p known modulo p^precision. The residue is kept in
/// [0, p^precision); precision never exceeds the context's N.
class PadicScalar {
public:
    PadicScalar() = default;

    static PadicScalar from_int(const RingContext& ctx, std::int64_t value);
    /// Residue is reduced modulo p^precision.
    static PadicScalar from_residue(std::uint64_t p, int cap, int precision, std::uint64_t residue);
    static PadicScalar zero(const RingContext& ctx) { return from_int(ctx, 0); }
    static PadicScalar one(const RingContext& ctx) { return from_int(ctx, 1); }

    std::uint64_t residue() const { return residue_; }
    std::uint64_t prime() const { return p_; }
    int precision() const { return prec_; }
    int cap() const { return cap_; }

    /// Zero at the stated precision.
    bool is_zero() const { return residue_ == 0; }
    /// Zero to the full ring precision N (as opposed to O(p^k), k < N).
    bool is_exact_zero() const { return residue_ == 0 && prec_ >= cap_; }
    bool is_unit() const { return prec_ > 0 && residue_ % p_ != 0; }
    /// v_p of the residue; equals precision() for a zero residue.
    int valuation() const { return residue_ == 0 ? prec_ : modarith::valuation(residue_, p_, prec_); }

    PadicScalar operator-() const;
    friend PadicScalar operator+(const PadicScalar& a, const PadicScalar& b);
    friend PadicScalar operator-(const PadicScalar& a, const PadicScalar& b);
    friend PadicScalar operator*(const PadicScalar& a, const PadicScalar& b);

    /// Requires a unit.
    PadicScalar inverse() const;
    /// Exact division by p^k; requires valuation() >= k. Loses k digits.
    PadicScalar divide_by_p_power(int k) const;
    /// Same value with precision lowered to at most `prec`.
    PadicScalar with_precision(int prec) const;

    /// Equal modulo p^min(precisions).
    bool agrees_with(const PadicScalar& o) const;
    /// Representative in (-p^prec/2, p^prec/2].
    std::int64_t signed_value() const;
    std::string to_string() const;

private:
    std::uint64_t residue_ = 0;
    std::uint64_t modulus_ = 1;
    std::uint64_t p_ = 3;
    int prec_ = 0;
    int cap_ = 0;
};

} // namespace iwasawa
