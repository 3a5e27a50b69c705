#pragma once

#include <stdexcept>

#include "iwasawa/series.hpp"

namespace iwasawa {

/// The series is not regular in the chosen variable at this degree cap: either
/// it vanishes modulo (p, other variables) or its first unit coefficient lies
/// beyond the cap.
struct NotPreparable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// f = p^mu * unit * distinguished, with `distinguished` monic in W_var of
/// degree lambda and all lower coefficients in the maximal ideal of the
/// coefficient ring Z_p[[other variables]].
struct WeierstrassData {
    int var = 0;
    int mu = 0;
    int lambda = 0;
    PowerSeries distinguished;
    PowerSeries unit;
};

/// Smallest k such that W_var^k has a unit coefficient in f / p^content, or -1.
int weierstrass_degree(const PowerSeries& f, int var);

/// Throws std::invalid_argument for f = 0 and NotPreparable when f/p^mu
/// vanishes modulo (p, other variables) below the degree cap.
WeierstrassData weierstrass_prepare(const PowerSeries& f, int var);

struct WeierstrassDivision {
    PowerSeries quotient;
    PowerSeries remainder; // W_var-degree < lambda(f)
};

/// g = q*f + r. f must have p-content 0 and be regular in W_var. In the
/// truncated ring q and r are unique on total degree < D - lambda.
WeierstrassDivision weierstrass_divide(const PowerSeries& g, const PowerSeries& f, int var);

} // namespace iwasawa
