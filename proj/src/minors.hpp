#pragma once

// Internal: determinants, minors and block structure of presentations.

#include <functional>
#include <vector>

#include "iwasawa/module.hpp"

namespace iwasawa::detail {

/// Connected components of the bipartite row/column graph of the nonzero
/// entries. Rows with no entry form their own (free) blocks; all-zero columns
/// are dropped.
struct Block {
    std::vector<int> rows;
    std::vector<int> cols;
};
std::vector<Block> blocks_of(const Presentation& p);

/// Submatrix on the given rows and columns.
Presentation restrict(const Presentation& p, const std::vector<int>& rows, const std::vector<int>& cols);

/// Calls visit(minor) for every k x k minor; stops early when visit returns
/// false. k = 0 yields the single minor 1.
void for_each_minor(const Presentation& p, int k, const std::function<bool(const PowerSeries&)>& visit);

PowerSeries determinant(const Presentation& p);

/// True when a k x k minor that vanishes at truncation is provably zero:
/// exact polynomial entries whose determinant degree stays below the cap.
bool vanishing_is_exact(const Presentation& p, int k);

/// Largest k with a k x k minor not vanishing at truncation. Throws
/// IndeterminateError when a vanishing level cannot be trusted.
int generic_rank(const Presentation& p);

constexpr int max_minor_dimension = 16;

} // namespace iwasawa::detail
