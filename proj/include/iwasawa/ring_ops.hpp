#pragma once

#include <string>

#include "iwasawa/errors.hpp"
#include "iwasawa/series.hpp"
#include "iwasawa/weierstrass.hpp"

namespace iwasawa {

/// f with W_var replaced by s (same ring). s may involve W_var itself.
PowerSeries substitute(const PowerSeries& f, int var, const PowerSeries& s);

/// (1 + W)^{-1} - 1 = -W + W^2 - ... in variable `var`, up to the cap.
PowerSeries inverted_group_variable(const RingContext& ctx, int var);

/// The twist W_var -> (1 + W_var)^{-1} - 1 induced by g -> g^{-1}.
PowerSeries involution(const PowerSeries& f, int var);

/// p^mu * P for a nonzero series of Z_p[[W]]: the canonical generator of (f).
PowerSeries normalize_one_var(const PowerSeries& f);

/// gcd up to unit in Z_p[[W]], returned normalized (p^mu * distinguished).
/// Throws PrecisionExhausted when the Euclidean chain runs out of digits.
PowerSeries gcd_one_var(const PowerSeries& f, const PowerSeries& g);

/// a / b up to unit in Z_p[[W]] when b divides a; result normalized.
/// Throws IndeterminateError when divisibility fails at truncation.
PowerSeries exact_quotient_one_var(const PowerSeries& a, const PowerSeries& b);

struct UnitEqualResult {
    Truth verdict = Truth::Indeterminate;
    std::string substitution = "none"; // change of variables applied before preparing
    int mu_f = -1, mu_g = -1;
    int lambda_f = -1, lambda_g = -1;
};

/// (f) == (g) at truncation, via Weierstrass normalization in the last
/// variable after a recorded change of variables when needed.
UnitEqualResult unit_equal_detailed(const PowerSeries& f, const PowerSeries& g);
inline Truth unit_equal(const PowerSeries& f, const PowerSeries& g) { return unit_equal_detailed(f, g).verdict; }

/// (f) == (1).
inline bool is_unit_ideal(const PowerSeries& f) { return f.is_unit(); }

} // namespace iwasawa
