#pragma once

// Brute-force reference: M (x) R/(p^n, monomials of degree >= d) as a finite
// abelian p-group, by elimination over Z/p^n.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "iwasawa/iwmod.hpp"
#include "iwasawa/kernels.hpp"

namespace iwasawa {

constexpr std::size_t default_oracle_dim = 3000;

struct FiniteQuotient {
    RingContext context;
    int n = 0;
    int d = 0;
    std::size_t basis_size = 0; // monomials of degree < d
    int generators = 0;
    /// Rows: generator x basis monomial; columns: relation x basis monomial.
    kernels::ModMatrix relations;
    /// Exponents e of the Z/p^e summands, ascending. Independent of pivot order.
    std::vector<int> invariants;

    int log_cardinality() const;
    std::string to_string() const;
};

/// Throws UnsupportedError past the size guard (rows or columns > max_dim)
/// and IndeterminateError when an entry is not known to p^n below degree d.
FiniteQuotient finite_quotient(const IwasawaModule& m, int n, int d, std::size_t max_dim = default_oracle_dim);

struct ProbeSample {
    int n = 0;
    int d = 0;
    int log_cardinality = 0;
};
struct RankProbe {
    std::vector<ProbeSample> samples;
    /// Fitted from log|Q| ~ rank*n*C(d) (+ mu*d + lambda*n in one variable);
    /// present only when the grid has two n and two d values.
    std::optional<double> rank;
    std::optional<double> mu;
    std::optional<double> lambda;
    std::string note;
};
/// Advisory growth fit, not authoritative.
RankProbe oracle_rank_probe(const IwasawaModule& m, const std::vector<std::pair<int, int>>& grid,
                            std::size_t max_dim = default_oracle_dim);

struct TorsionSubProbe {
    int n = 0;
    int d = 0;
    int interior_n = 0; // the kernel is projected to R/(p^interior_n, degree >= interior_d)
    int interior_d = 0;
    int log_kernel = 0;   // all of ker(l) on the level (n, d) quotient
    int log_interior = 0; // its image on the interior
    bool stable = false;  // the level (n, d + 1) kernel has the same interior image
    std::string note;
};
/// Kernel of multiplication by l on the finite quotient. Kernel elements that
/// only exist because l*x was truncated sit at high degree or high p-power and
/// vanish on the interior.
TorsionSubProbe oracle_torsion_sub(const IwasawaModule& m, const LinearElement& l, int n, int d,
                                   std::size_t max_dim = default_oracle_dim);

/// Interior level used by oracle_torsion_sub: p-adic depth ceil(n/2) and
/// degree d - ceil(n/2) - 1, so that truncation noise in l*x, which decays by
/// at least p per degree, misses it.
std::pair<int, int> interior_level(int n, int d);

} // namespace iwasawa
