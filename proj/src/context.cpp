#include "iwasawa/context.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "iwasawa/errors.hpp"

namespace iwasawa {

namespace {

constexpr std::uint64_t max_modulus = std::uint64_t{1} << 62;
constexpr std::uint64_t dense_key_limit = std::uint64_t{1} << 22;

void enumerate_degree(int vars, int remaining, int pos, std::vector<int>& cur, std::vector<int>& out) {
    if (pos == vars - 1) {
        cur[static_cast<std::size_t>(pos)] = remaining;
        out.insert(out.end(), cur.begin(), cur.end());
        return;
    }
    for (int e = remaining; e >= 0; --e) {
        cur[static_cast<std::size_t>(pos)] = e;
        enumerate_degree(vars, remaining - e, pos + 1, cur, out);
    }
}

} // namespace

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

MonomialTable::MonomialTable(int vars, int degree_cap) : vars_(vars), cap_(degree_cap) {
    if (vars < 0 || degree_cap < 1) throw std::invalid_argument("MonomialTable: bad shape");
    if (vars == 0) {
        degree_.push_back(0);
    } else {
        std::vector<int> cur(static_cast<std::size_t>(vars), 0);
        for (int d = 0; d < cap_; ++d) {
            std::size_t before = exps_.size();
            enumerate_degree(vars, d, 0, cur, exps_);
            degree_.insert(degree_.end(), (exps_.size() - before) / static_cast<std::size_t>(vars), d);
        }
    }

    std::uint64_t span = 1;
    for (int v = 0; v < vars_ && dense_keys_; ++v) {
        span *= static_cast<std::uint64_t>(cap_);
        if (span > dense_key_limit) dense_keys_ = false;
    }
    if (dense_keys_) by_key_.assign(span, -1);
    for (std::size_t i = 0; i < size(); ++i) {
        auto k = key(exponents(i));
        keys_.push_back(k);
        if (dense_keys_)
            by_key_[k] = static_cast<std::int32_t>(i);
        else
            sparse_keys_.emplace(k, static_cast<std::uint32_t>(i));
    }
}

std::uint64_t MonomialTable::key(std::span<const int> e) const {
    std::uint64_t k = 0;
    for (int v = vars_ - 1; v >= 0; --v) k = k * static_cast<std::uint64_t>(cap_) + static_cast<std::uint64_t>(e[static_cast<std::size_t>(v)]);
    return k;
}

std::size_t MonomialTable::index_of(std::span<const int> e) const {
    int deg = 0;
    for (int x : e) {
        if (x < 0) throw std::invalid_argument("negative exponent");
        deg += x;
    }
    if (deg >= cap_) return npos;
    auto k = key(e);
    if (dense_keys_) return static_cast<std::size_t>(by_key_[k]);
    return sparse_keys_.at(k);
}

std::size_t MonomialTable::index_of_key(std::uint64_t k) const {
    if (dense_keys_) return static_cast<std::size_t>(by_key_[k]);
    return sparse_keys_.at(k);
}

std::size_t MonomialTable::product(std::size_t i, std::size_t j) const {
    if (degree_[i] + degree_[j] >= cap_) return npos;
    auto a = exponents(i);
    auto b = exponents(j);
    std::vector<int> s(a.begin(), a.end());
    for (std::size_t v = 0; v < s.size(); ++v) s[v] += b[v];
    return index_of(s);
}

std::size_t MonomialTable::count_below(int vars, int d) {
    // C(d - 1 + vars, vars)
    if (d <= 0) return 0;
    std::size_t r = 1;
    for (int k = 1; k <= vars; ++k) r = r * static_cast<std::size_t>(d - 1 + k) / static_cast<std::size_t>(k);
    return r;
}

const ConvolutionTable& MonomialTable::convolution() const {
    std::call_once(conv_once_, [this] {
        auto t = std::make_unique<ConvolutionTable>();
        const std::size_t n = size();
        std::vector<std::uint32_t> counts(n + 1, 0);
        std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
        std::vector<std::uint32_t> target;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (degree_[i] + degree_[j] >= cap_) continue;
                auto k = product(i, j);
                ++counts[k + 1];
                pairs.emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
                target.push_back(static_cast<std::uint32_t>(k));
            }
        }
        for (std::size_t k = 0; k < n; ++k) counts[k + 1] += counts[k];
        t->offsets = counts;
        t->left.resize(pairs.size());
        t->right.resize(pairs.size());
        std::vector<std::uint32_t> fill(counts.begin(), counts.end() - 1);
        for (std::size_t q = 0; q < pairs.size(); ++q) {
            auto slot = fill[target[q]]++;
            t->left[slot] = pairs[q].first;
            t->right[slot] = pairs[q].second;
        }
        conv_ = std::move(t);
    });
    return *conv_;
}

RingContext RingContext::make(std::uint64_t p, int vars, int precision, int degree_cap) {
    if (p == 2 || !is_prime(p)) throw std::invalid_argument("p must be an odd prime, got " + std::to_string(p));
    if (vars < 0) throw std::invalid_argument("number of variables must be >= 0");
    if (precision < 1) throw std::invalid_argument("precision must be >= 1");
    if (degree_cap < 1) throw std::invalid_argument("degree cap must be >= 1");

    std::vector<std::uint64_t> powers{1};
    for (int k = 0; k < precision; ++k) {
        if (powers.back() > max_modulus / p)
            throw std::invalid_argument("p^N does not fit in 62 bits; lower the precision");
        powers.push_back(powers.back() * p);
    }

    static std::mutex mu;
    static std::map<std::tuple<std::uint64_t, int, int, int>, std::shared_ptr<const Data>> cache;
    static std::map<std::pair<int, int>, std::shared_ptr<const MonomialTable>> tables;

    std::lock_guard lock(mu);
    auto key = std::make_tuple(p, vars, precision, degree_cap);
    if (auto it = cache.find(key); it != cache.end()) return RingContext(it->second);

    auto& table = tables[{vars, degree_cap}];
    if (!table) table = std::make_shared<const MonomialTable>(vars, degree_cap);
    auto data = std::make_shared<const Data>(Data{p, vars, precision, degree_cap, std::move(powers), table});
    cache.emplace(key, data);
    return RingContext(std::move(data));
}

void RingContext::require_same(const RingContext& o) const {
    if (!(*this == o)) throw ContextMismatch("context mismatch: " + describe() + " vs " + o.describe());
}

std::string RingContext::describe() const {
    std::ostringstream s;
    s << "ring p=" << prime() << " vars=" << vars() << " prec=" << precision() << " deg=" << degree_cap();
    return s.str();
}

} // namespace iwasawa
