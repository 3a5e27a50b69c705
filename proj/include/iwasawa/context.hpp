#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace iwasawa {

/// For every output monomial k, the list of (i, j) with x^i * x^j = x^k below
/// the degree cap. Stored in CSR form so the convolution kernel can walk one
/// output at a time.
struct ConvolutionTable {
    std::vector<std::uint32_t> offsets;
    std::vector<std::uint32_t> left;
    std::vector<std::uint32_t> right;
};

/// Monomials in `vars` variables of total degree < degree_cap, graded order
/// (degree first, then lexicographically decreasing in W1, W2, ...).
class MonomialTable {
public:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    MonomialTable(int vars, int degree_cap);

    int vars() const { return vars_; }
    int degree_cap() const { return cap_; }
    std::size_t size() const { return degree_.size(); }

    std::span<const int> exponents(std::size_t index) const {
        return {exps_.data() + index * static_cast<std::size_t>(vars_), static_cast<std::size_t>(vars_)};
    }
    int degree(std::size_t index) const { return degree_[index]; }

    /// npos when the total degree reaches the cap.
    std::size_t index_of(std::span<const int> e) const;
    std::size_t product(std::size_t i, std::size_t j) const;

    /// Count of monomials of total degree < d (d may differ from the cap).
    static std::size_t count_below(int vars, int d);

    /// Radix-D encoding of the exponent vector; keys add when monomials
    /// multiply below the cap.
    std::uint64_t key_at(std::size_t index) const { return keys_[index]; }
    std::size_t index_of_key(std::uint64_t k) const;

    const ConvolutionTable& convolution() const;

private:
    std::uint64_t key(std::span<const int> e) const;

    int vars_;
    int cap_;
    std::vector<int> exps_;
    std::vector<int> degree_;
    std::vector<std::uint64_t> keys_;
    bool dense_keys_ = true;
    std::vector<std::int32_t> by_key_;
    std::unordered_map<std::uint64_t, std::uint32_t> sparse_keys_;

    mutable std::once_flag conv_once_;
    mutable std::unique_ptr<ConvolutionTable> conv_;
};

/// Ambient ring Z_p[[W1..Wm]] truncated at p-adic precision N and total
/// degree < D. Cheap to copy; equal contexts share their tables.
class RingContext {
public:
    static constexpr int default_precision = 20;
    static constexpr int default_degree_cap = 16;

    static RingContext make(std::uint64_t p, int vars, int precision = default_precision,
                            int degree_cap = default_degree_cap);

    std::uint64_t prime() const { return data_->p; }
    int vars() const { return data_->vars; }
    int precision() const { return data_->precision; }
    int degree_cap() const { return data_->cap; }
    std::uint64_t modulus() const { return data_->powers.back(); }
    std::uint64_t power(int k) const { return data_->powers.at(static_cast<std::size_t>(k)); }
    const MonomialTable& monomials() const { return *data_->table; }

    RingContext with_vars(int vars) const { return make(prime(), vars, precision(), degree_cap()); }

    bool operator==(const RingContext& o) const {
        return data_ == o.data_ || (prime() == o.prime() && vars() == o.vars() &&
                                    precision() == o.precision() && degree_cap() == o.degree_cap());
    }

    /// Throws ContextMismatch.
    void require_same(const RingContext& o) const;
    std::string describe() const;

private:
    struct Data {
        std::uint64_t p;
        int vars;
        int precision;
        int cap;
        std::vector<std::uint64_t> powers;
        std::shared_ptr<const MonomialTable> table;
    };
    explicit RingContext(std::shared_ptr<const Data> d) : data_(std::move(d)) {}

    std::shared_ptr<const Data> data_;
};

bool is_prime(std::uint64_t n);

} // namespace iwasawa
