#include "iwasawa/padic.hpp"

#include <algorithm>
#include <stdexcept>

#include "iwasawa/errors.hpp"

namespace iwasawa {

namespace modarith {

std::uint64_t inverse(std::uint64_t a, std::uint64_t m) {
    if (m == 1) return 0;
    __int128 t = 0, new_t = 1;
    __int128 r = m, new_r = a % m;
    while (new_r != 0) {
        __int128 q = r / new_r;
        __int128 tmp = t - q * new_t;
        t = new_t;
        new_t = tmp;
        tmp = r - q * new_r;
        r = new_r;
        new_r = tmp;
    }
    if (r != 1) throw std::domain_error("modular inverse of a non-unit");
    if (t < 0) t += m;
    return static_cast<std::uint64_t>(t);
}

int valuation(std::uint64_t a, std::uint64_t p, int cap) {
    if (a == 0) return cap;
    int v = 0;
    while (a % p == 0 && v < cap) {
        a /= p;
        ++v;
    }
    return v;
}

} // namespace modarith

namespace {

std::uint64_t pow_u64(std::uint64_t p, int k) {
    std::uint64_t r = 1;
    for (int i = 0; i < k; ++i) r *= p;
    return r;
}

void require_compatible(const PadicScalar& a, const PadicScalar& b) {
    if (a.prime() != b.prime() || a.cap() != b.cap()) throw ContextMismatch("p-adic scalars from different contexts");
}

} // namespace

PadicScalar PadicScalar::from_int(const RingContext& ctx, std::int64_t value) {
    const std::uint64_t m = ctx.modulus();
    __int128 v = value % static_cast<__int128>(m);
    if (v < 0) v += m;
    PadicScalar s;
    s.residue_ = static_cast<std::uint64_t>(v);
    s.modulus_ = m;
    s.p_ = ctx.prime();
    s.prec_ = ctx.precision();
    s.cap_ = ctx.precision();
    return s;
}

PadicScalar PadicScalar::from_residue(std::uint64_t p, int cap, int precision, std::uint64_t residue) {
    PadicScalar s;
    s.p_ = p;
    s.cap_ = cap;
    s.prec_ = std::clamp(precision, 0, cap);
    s.modulus_ = pow_u64(p, s.prec_);
    s.residue_ = residue % s.modulus_;
    return s;
}

PadicScalar PadicScalar::operator-() const {
    PadicScalar r = *this;
    r.residue_ = residue_ == 0 ? 0 : modulus_ - residue_;
    return r;
}

PadicScalar operator+(const PadicScalar& a, const PadicScalar& b) {
    require_compatible(a, b);
    const PadicScalar& lo = a.prec_ <= b.prec_ ? a : b;
    PadicScalar r = lo;
    r.residue_ = modarith::add(a.residue_ % lo.modulus_, b.residue_ % lo.modulus_, lo.modulus_);
    return r;
}

PadicScalar operator-(const PadicScalar& a, const PadicScalar& b) { return a + (-b); }

PadicScalar operator*(const PadicScalar& a, const PadicScalar& b) {
    require_compatible(a, b);
    // x = a + O(p^pa), y = b + O(p^pb)  =>  xy = ab + O(p^min(pa + v(b), pb + v(a)))
    int prec = std::min({a.cap_, a.prec_ + b.valuation(), b.prec_ + a.valuation()});
    std::uint64_t full = pow_u64(a.p_, a.cap_);
    std::uint64_t prod = modarith::mul(a.residue_, b.residue_, full);
    return PadicScalar::from_residue(a.p_, a.cap_, prec, prod);
}

PadicScalar PadicScalar::inverse() const {
    if (!is_unit()) throw std::domain_error("inverse of a non-unit p-adic scalar");
    PadicScalar r = *this;
    r.residue_ = modarith::inverse(residue_, modulus_);
    return r;
}

PadicScalar PadicScalar::divide_by_p_power(int k) const {
    if (k == 0) return *this;
    if (residue_ != 0 && valuation() < k) throw std::domain_error("scalar not divisible by requested p-power");
    if (k > prec_) throw PrecisionExhausted("dividing by p^" + std::to_string(k) + " exhausts precision " + std::to_string(prec_));
    return from_residue(p_, cap_, prec_ - k, residue_ / pow_u64(p_, k));
}

PadicScalar PadicScalar::with_precision(int prec) const {
    if (prec >= prec_) return *this;
    return from_residue(p_, cap_, prec, residue_);
}

bool PadicScalar::agrees_with(const PadicScalar& o) const {
    std::uint64_t m = std::min(modulus_, o.modulus_);
    return residue_ % m == o.residue_ % m;
}

std::int64_t PadicScalar::signed_value() const {
    if (residue_ > modulus_ / 2) return -static_cast<std::int64_t>(modulus_ - residue_);
    return static_cast<std::int64_t>(residue_);
}

std::string PadicScalar::to_string() const {
    std::string s = std::to_string(signed_value());
    if (prec_ < cap_) s += " + O(p^" + std::to_string(prec_) + ")";
    return s;
}

} // namespace iwasawa
