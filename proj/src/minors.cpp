#include "minors.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <unordered_map>

#include "iwasawa/errors.hpp"

namespace iwasawa::detail {

std::vector<Block> blocks_of(const Presentation& p) {
    // union-find over rows [0, rows) and columns [rows, rows + cols)
    std::vector<int> parent(static_cast<std::size_t>(p.rows + p.cols));
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
        return x;
    };
    std::vector<bool> col_used(static_cast<std::size_t>(p.cols), false);
    for (int r = 0; r < p.rows; ++r)
        for (int c = 0; c < p.cols; ++c)
            if (!p.at(r, c).is_zero()) {
                parent[static_cast<std::size_t>(find(r))] = find(p.rows + c);
                col_used[static_cast<std::size_t>(c)] = true;
            }
    std::vector<Block> out;
    std::vector<int> slot(static_cast<std::size_t>(p.rows + p.cols), -1);
    auto block_for = [&](int x) -> Block& {
        int root = find(x);
        if (slot[static_cast<std::size_t>(root)] < 0) {
            slot[static_cast<std::size_t>(root)] = static_cast<int>(out.size());
            out.emplace_back();
        }
        return out[static_cast<std::size_t>(slot[static_cast<std::size_t>(root)])];
    };
    for (int r = 0; r < p.rows; ++r) block_for(r).rows.push_back(r);
    for (int c = 0; c < p.cols; ++c)
        if (col_used[static_cast<std::size_t>(c)]) block_for(p.rows + c).cols.push_back(c);
    return out;
}

Presentation restrict(const Presentation& p, const std::vector<int>& rows, const std::vector<int>& cols) {
    std::vector<PowerSeries> e;
    e.reserve(rows.size() * cols.size());
    for (int r : rows)
        for (int c : cols) e.push_back(p.at(r, c));
    return {p.context, static_cast<int>(rows.size()), static_cast<int>(cols.size()), std::move(e)};
}

namespace {

void guard(const Presentation& p) {
    if (p.rows > max_minor_dimension || p.cols > max_minor_dimension)
        throw UnsupportedError("presentation too large for minor enumeration (" + std::to_string(p.rows) + "x" +
                               std::to_string(p.cols) + ")");
}

// All minors on rows `rs` (size k) against every k-subset of columns, by
// expansion along the last row with memoized column subsets.
template <class F>
bool minors_for_rows(const Presentation& p, const std::vector<int>& rs, F&& visit) {
    const int k = static_cast<int>(rs.size());
    std::unordered_map<std::uint32_t, PowerSeries> level{{0u, PowerSeries::constant(p.context, 1)}};
    for (int j = 1; j <= k; ++j) {
        std::unordered_map<std::uint32_t, PowerSeries> next;
        const int r = rs[static_cast<std::size_t>(j - 1)];
        for (const auto& [mask, sub] : level) {
            if (sub.is_zero()) continue;
            for (int c = 0; c < p.cols; ++c) {
                if (mask & (1u << c)) continue;
                const PowerSeries& a = p.at(r, c);
                if (a.is_zero()) continue;
                const std::uint32_t full = mask | (1u << c);
                // c sits at position pos among the columns of `full`; the
                // expansion along row j of the j x j minor gives (-1)^(j-1+pos).
                const int pos = std::popcount(full & ((1u << c) - 1u));
                PowerSeries term = a * sub;
                if ((j - 1 + pos) % 2) term = -term;
                auto it = next.find(full);
                if (it == next.end())
                    next.emplace(full, std::move(term));
                else
                    it->second = it->second + term;
            }
        }
        level = std::move(next);
    }
    std::vector<std::uint32_t> keys;
    for (const auto& [mask, v] : level) keys.push_back(mask);
    std::sort(keys.begin(), keys.end());
    for (auto mask : keys)
        if (!visit(level.at(mask))) return false;
    return true;
}

} // namespace

void for_each_minor(const Presentation& p, int k, const std::function<bool(const PowerSeries&)>& visit) {
    if (k == 0) {
        visit(PowerSeries::constant(p.context, 1));
        return;
    }
    if (k > p.rows || k > p.cols) return;
    guard(p);
    std::vector<int> pick(static_cast<std::size_t>(k));
    std::iota(pick.begin(), pick.end(), 0);
    for (;;) {
        if (!minors_for_rows(p, pick, visit)) return;
        int i = k - 1;
        while (i >= 0 && pick[static_cast<std::size_t>(i)] == p.rows - k + i) --i;
        if (i < 0) return;
        ++pick[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j) pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
    }
}

PowerSeries determinant(const Presentation& p) {
    if (p.rows != p.cols) throw std::invalid_argument("determinant of a non-square matrix");
    PowerSeries det = PowerSeries::constant(p.context, p.rows == 0 ? 1 : 0);
    if (p.rows == 0) return det;
    for_each_minor(p, p.rows, [&](const PowerSeries& m) {
        det = m;
        return false;
    });
    return det;
}

bool vanishing_is_exact(const Presentation& p, int k) {
    const RingContext& ctx = p.context;
    std::vector<int> row_deg;
    for (int r = 0; r < p.rows; ++r) {
        int d = 0;
        for (int c = 0; c < p.cols; ++c) {
            const PowerSeries& a = p.at(r, c);
            if (a.is_zero()) continue;
            if (!a.is_polynomial() || a.min_precision() < ctx.precision()) return false;
            d = std::max(d, a.total_degree());
        }
        row_deg.push_back(d);
    }
    std::sort(row_deg.rbegin(), row_deg.rend());
    int bound = 0;
    for (int i = 0; i < k && i < static_cast<int>(row_deg.size()); ++i) bound += row_deg[static_cast<std::size_t>(i)];
    return bound < ctx.degree_cap();
}

int generic_rank(const Presentation& p) {
    for (int k = std::min(p.rows, p.cols); k >= 1; --k) {
        bool found = false;
        for_each_minor(p, k, [&](const PowerSeries& m) {
            found = !m.vanishes();
            return !found;
        });
        if (found) return k;
        if (!vanishing_is_exact(p, k))
            throw IndeterminateError("every " + std::to_string(k) + "x" + std::to_string(k) +
                                     " minor vanishes at truncation, but the degree cap hides the rest");
    }
    return 0;
}

} // namespace iwasawa::detail
