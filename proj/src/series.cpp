#include "iwasawa/series.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "iwasawa/errors.hpp"

namespace iwasawa {

namespace {

kernels::Modulus modulus_of(const RingContext& ctx, std::vector<std::uint64_t>& powers) {
    powers.clear();
    for (int k = 0; k <= ctx.precision(); ++k) powers.push_back(ctx.power(k));
    return {ctx.prime(), ctx.precision(), powers};
}

// Dense path pays off once the pair count approaches the convolution table.
constexpr std::size_t sparse_pair_limit = 4096;

} // namespace

PowerSeries PowerSeries::constant(const RingContext& ctx, std::int64_t c) {
    return scalar(ctx, PadicScalar::from_int(ctx, c));
}

PowerSeries PowerSeries::scalar(const RingContext& ctx, const PadicScalar& c) {
    PowerSeries s(ctx);
    s.set_coeff(0, c);
    return s;
}

PowerSeries PowerSeries::variable(const RingContext& ctx, int var) {
    if (var < 0 || var >= ctx.vars()) throw std::out_of_range("variable index out of range");
    std::vector<int> e(static_cast<std::size_t>(ctx.vars()), 0);
    e[static_cast<std::size_t>(var)] = 1;
    return monomial(ctx, e, PadicScalar::one(ctx));
}

PowerSeries PowerSeries::monomial(const RingContext& ctx, std::span<const int> exponents, const PadicScalar& c) {
    PowerSeries s(ctx);
    auto idx = ctx.monomials().index_of(exponents);
    if (idx == MonomialTable::npos) {
        s.polynomial_ = c.is_zero();
        return s;
    }
    s.set_coeff(idx, c);
    return s;
}

void PowerSeries::set_coeff(std::size_t index, const PadicScalar& c) {
    auto key = static_cast<std::uint32_t>(index);
    if (c.is_exact_zero())
        terms_.erase(key);
    else
        terms_[key] = c;
}

PowerSeries& PowerSeries::cap_precision(const std::function<int(std::size_t)>& bound) {
    const std::size_t n = ctx_.monomials().size();
    for (std::size_t k = 0; k < n; ++k) {
        const int b = std::max(0, bound(k));
        if (b >= ctx_.precision()) continue;
        auto key = static_cast<std::uint32_t>(k);
        auto it = terms_.find(key);
        if (it == terms_.end())
            terms_.emplace(key, PadicScalar::from_residue(ctx_.prime(), ctx_.precision(), b, 0));
        else
            it->second = it->second.with_precision(b);
    }
    return *this;
}

bool PowerSeries::vanishes() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.second.is_zero(); });
}

PadicScalar PowerSeries::coeff_at(std::size_t index) const {
    auto it = terms_.find(static_cast<std::uint32_t>(index));
    return it == terms_.end() ? PadicScalar::zero(ctx_) : it->second;
}

PadicScalar PowerSeries::coeff(std::span<const int> exponents) const {
    auto idx = ctx_.monomials().index_of(exponents);
    if (idx == MonomialTable::npos) return PadicScalar::zero(ctx_);
    return coeff_at(idx);
}

PadicScalar PowerSeries::constant_term() const { return coeff_at(0); }

int PowerSeries::total_degree() const {
    int d = -1;
    for (const auto& [k, c] : terms_) d = std::max(d, ctx_.monomials().degree(k));
    return d;
}

int PowerSeries::order() const {
    return terms_.empty() ? -1 : ctx_.monomials().degree(terms_.begin()->first);
}

int PowerSeries::degree_in(int var) const {
    int d = -1;
    for (const auto& [k, c] : terms_) d = std::max(d, ctx_.monomials().exponents(k)[static_cast<std::size_t>(var)]);
    return d;
}

int PowerSeries::content_valuation() const {
    if (terms_.empty()) return 0;
    int v = ctx_.precision();
    for (const auto& [k, c] : terms_) v = std::min(v, c.valuation());
    return v;
}

int PowerSeries::min_precision() const {
    int v = ctx_.precision();
    for (const auto& [k, c] : terms_) v = std::min(v, c.precision());
    return v;
}

PowerSeries PowerSeries::operator-() const {
    PowerSeries r = *this;
    for (auto& [k, c] : r.terms_) c = -c;
    return r;
}

PowerSeries operator+(const PowerSeries& a, const PowerSeries& b) {
    a.ctx_.require_same(b.ctx_);
    PowerSeries r = a;
    for (const auto& [k, c] : b.terms_) {
        auto it = r.terms_.find(k);
        if (it == r.terms_.end()) {
            r.terms_.emplace(k, c);
        } else {
            auto s = it->second + c;
            if (s.is_exact_zero())
                r.terms_.erase(it);
            else
                it->second = s;
        }
    }
    r.polynomial_ = a.polynomial_ && b.polynomial_;
    return r;
}

PowerSeries operator-(const PowerSeries& a, const PowerSeries& b) { return a + (-b); }

PowerSeries operator*(const PowerSeries& a, const PowerSeries& b) {
    a.ctx_.require_same(b.ctx_);
    const RingContext& ctx = a.ctx_;
    const MonomialTable& table = ctx.monomials();
    PowerSeries r(ctx);
    r.polynomial_ = a.polynomial_ && b.polynomial_ &&
                    (a.is_zero() || b.is_zero() || a.total_degree() + b.total_degree() < ctx.degree_cap());
    if (a.is_zero() || b.is_zero()) return r;

    if (a.terms_.size() * b.terms_.size() > sparse_pair_limit) {
        std::vector<std::uint64_t> powers;
        auto mod = modulus_of(ctx, powers);
        kernels::DenseSeries out;
        kernels::convolve_auto(table.convolution(), mod, a.to_dense(), b.to_dense(), out);
        PowerSeries d = PowerSeries::from_dense(ctx, out);
        d.polynomial_ = r.polynomial_;
        return d;
    }

    struct Acc {
        std::uint64_t sum = 0;
        int prec;
    };
    const std::uint64_t full = ctx.modulus();
    const int cap = ctx.degree_cap();
    std::unordered_map<std::uint32_t, Acc> acc;
    for (const auto& [i, ci] : a.terms_) {
        const int di = table.degree(i);
        const int vi = ci.valuation();
        for (const auto& [j, cj] : b.terms_) {
            if (di + table.degree(j) >= cap) continue;
            auto k = static_cast<std::uint32_t>(table.index_of_key(table.key_at(i) + table.key_at(j)));
            auto [it, fresh] = acc.try_emplace(k, Acc{0, ctx.precision()});
            it->second.sum = modarith::add(it->second.sum, modarith::mul(ci.residue(), cj.residue(), full), full);
            it->second.prec = std::min({it->second.prec, ci.precision() + cj.valuation(), cj.precision() + vi});
        }
    }
    for (const auto& [k, v] : acc)
        r.set_coeff(k, PadicScalar::from_residue(ctx.prime(), ctx.precision(), v.prec, v.sum));
    return r;
}

PowerSeries PowerSeries::scaled(const PadicScalar& c) const {
    PowerSeries r(ctx_);
    r.polynomial_ = polynomial_;
    for (const auto& [k, x] : terms_) r.set_coeff(k, x * c);
    return r;
}

PowerSeries PowerSeries::pow(unsigned k) const {
    PowerSeries result = constant(ctx_, 1);
    PowerSeries base = *this;
    while (k) {
        if (k & 1u) result = result * base;
        k >>= 1u;
        if (k) base = base * base;
    }
    return result;
}

PowerSeries PowerSeries::inverse() const {
    const PadicScalar c0 = constant_term();
    if (!c0.is_unit()) throw std::domain_error("inverse of a non-unit power series");
    PowerSeries x = scalar(ctx_, c0.inverse());
    if (terms_.size() == 1) return x;
    const PowerSeries two = constant(ctx_, 2);
    // Each step doubles the (p, W)-adic accuracy; N + D bounds what is visible.
    for (int iter = 0; iter < 64; ++iter) {
        PowerSeries next = x * (two - (*this) * x);
        bool same = next.terms_.size() == x.terms_.size() && next.agrees_with(x);
        x = std::move(next);
        if (same && iter > 0) break;
    }
    x.polynomial_ = false;
    return x;
}

PowerSeries PowerSeries::divide_by_p_power(int k) const {
    if (k == 0) return *this;
    PowerSeries r(ctx_);
    r.polynomial_ = polynomial_;
    for (const auto& [idx, c] : terms_) {
        auto q = c.divide_by_p_power(k);
        if (q.is_exact_zero()) continue;
        r.terms_.emplace(idx, q);
    }
    return r;
}

PowerSeries PowerSeries::below_degree(int d) const {
    PowerSeries r(ctx_);
    r.polynomial_ = polynomial_;
    for (const auto& [k, c] : terms_)
        if (ctx_.monomials().degree(k) < d) r.terms_.emplace(k, c);
        else r.polynomial_ = false;
    return r;
}

bool PowerSeries::agrees_with(const PowerSeries& o, int below) const {
    ctx_.require_same(o.ctx_);
    const MonomialTable& table = ctx_.monomials();
    auto in_range = [&](std::uint32_t k) { return below < 0 || table.degree(k) < below; };
    for (const auto& [k, c] : terms_) {
        if (!in_range(k)) continue;
        auto it = o.terms_.find(k);
        if (it == o.terms_.end()) {
            if (!c.with_precision(c.precision()).agrees_with(PadicScalar::zero(ctx_))) return false;
        } else if (!c.agrees_with(it->second)) {
            return false;
        }
    }
    for (const auto& [k, c] : o.terms_) {
        if (!in_range(k) || terms_.count(k)) continue;
        if (!c.agrees_with(PadicScalar::zero(ctx_))) return false;
    }
    return true;
}

kernels::DenseSeries PowerSeries::to_dense() const {
    kernels::DenseSeries d(ctx_.monomials().size(), ctx_.precision());
    for (const auto& [k, c] : terms_) {
        d.residue[k] = c.residue();
        d.prec[k] = static_cast<std::int16_t>(c.precision());
        d.val[k] = static_cast<std::int16_t>(c.valuation());
    }
    return d;
}

PowerSeries PowerSeries::from_dense(const RingContext& ctx, const kernels::DenseSeries& d) {
    PowerSeries r(ctx);
    for (std::size_t k = 0; k < d.size(); ++k)
        if (d.residue[k] != 0 || d.prec[k] < ctx.precision())
            r.terms_.emplace(static_cast<std::uint32_t>(k),
                             PadicScalar::from_residue(ctx.prime(), ctx.precision(), d.prec[k], d.residue[k]));
    r.polynomial_ = false;
    return r;
}

std::string variable_name(int var, int vars) {
    if (vars == 1) return "W";
    return "W" + std::to_string(var + 1);
}

std::string PowerSeries::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    const int m = ctx_.vars();
    for (const auto& [k, c] : terms_) {
        std::int64_t v = c.signed_value();
        auto e = ctx_.monomials().exponents(k);
        bool has_mono = std::any_of(e.begin(), e.end(), [](int x) { return x != 0; });
        if (v == 0) {
            out << (first ? "" : " + ") << "O(p^" << c.precision() << ")";
            for (int i = 0; i < m; ++i)
                if (int x = e[static_cast<std::size_t>(i)]) out << "*" << variable_name(i, m) << (x > 1 ? "^" + std::to_string(x) : "");
            first = false;
            continue;
        }
        if (first) {
            if (v < 0) out << "-";
        } else {
            out << (v < 0 ? " - " : " + ");
        }
        std::uint64_t mag = v < 0 ? static_cast<std::uint64_t>(-v) : static_cast<std::uint64_t>(v);
        bool wrote = false;
        if (mag != 1 || !has_mono) {
            out << mag;
            wrote = true;
        }
        for (int i = 0; i < m; ++i) {
            int x = e[static_cast<std::size_t>(i)];
            if (x == 0) continue;
            if (wrote) out << "*";
            out << variable_name(i, m);
            if (x > 1) out << "^" << x;
            wrote = true;
        }
        if (c.precision() < ctx_.precision()) out << "[+O(p^" << c.precision() << ")]";
        first = false;
    }
    return out.str();
}

} // namespace iwasawa
