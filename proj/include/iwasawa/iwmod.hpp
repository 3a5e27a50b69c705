#pragma once

#include <optional>
#include <string>
#include <vector>

#include "iwasawa/linear.hpp"
#include "iwasawa/module.hpp"
#include "iwasawa/ring_ops.hpp"

namespace iwasawa {

/// Generic rank over R. Throws IndeterminateError when every candidate minor
/// vanishes at truncation but could be nonzero beyond it.
int rank(const IwasawaModule& m);
bool is_torsion(const IwasawaModule& m);

/// Generator of the characteristic ideal, up to unit. Zero for a module that
/// is not torsion. Throws UnsupportedError for a non-square block in two or
/// more variables whose maximal minors have no coprimality certificate.
PowerSeries char_ideal(const IwasawaModule& m);

/// M / l M over R/(l), in the context with one variable fewer.
IwasawaModule quotient_by(const IwasawaModule& m, const LinearElement& l);

/// The l-torsion M[l] as a module over R/(l). StandardForm only.
IwasawaModule torsion_sub(const IwasawaModule& m, const LinearElement& l);

struct RankFormulaReport {
    int rank_m = 0;
    int rank_quotient = 0;
    int rank_torsion_sub = 0;
    bool holds = false; // rank_m == rank_quotient - rank_torsion_sub
};
RankFormulaReport rank_formula_check(const IwasawaModule& m, const LinearElement& l);

struct PseudoNullVerdict {
    Truth verdict = Truth::Indeterminate;
    /// Set when the verdict rests on sampled specializations (two or more
    /// variables and no exact certificate).
    bool probabilistic = false;
    std::string method;
};
/// Annihilator of height >= 2. Samples `samples` linear specializations
/// (seeded) when no exact certificate exists.
PseudoNullVerdict is_pseudo_null(const IwasawaModule& m, int samples = 6, std::uint64_t seed = 0x5eed);

/// For M over R[[W]] (W = last variable): M finitely generated over R,
/// decided by some 0th Fitting generator being nonzero mod (p, W1..W_{m-1}).
Truth is_fg_over_subring(const IwasawaModule& m);

/// M over R viewed over R[[W]] (one new last variable acting by zero).
IwasawaModule with_trivial_action(const IwasawaModule& m);

struct MuLambda {
    int mu = 0;
    int lambda = 0;
};
/// Torsion module over Z_p[[W]].
MuLambda mu_lambda(const IwasawaModule& m);

struct StructureData {
    explicit StructureData(const RingContext& ctx) : char_gen(ctx) {}
    int rank = 0;
    int mu = 0;
    int lambda = 0;
    PowerSeries char_gen;
    /// Invariant factors d_1 | d_2 | ... of the torsion part (units dropped),
    /// from the divisorial hulls of the Fitting ideals.
    std::vector<PowerSeries> elementary_divisors;
    bool complete = false;
    std::string note;
};
/// Over Z_p[[W]]; a module that is not torsion reports its torsion part.
StructureData structure_one_var(const IwasawaModule& m);

/// Applies the involution in `var` to every generator. A presentation is
/// twisted entrywise only when `allow_presentation` is set.
IwasawaModule involute_module(const IwasawaModule& m, int var, bool allow_presentation = false);

struct TorTransferReport {
    bool precondition = false; // M/l torsion over R/(l)
    Truth m_torsion = Truth::Indeterminate;
    Truth tor1_torsion = Truth::Indeterminate;
    bool higher_tor_vanish = true;
    std::string note;
};
TorTransferReport tor_transfer_check(const IwasawaModule& m, const LinearElement& l);

enum class PseudoVerdict { PseudoIsomorphic, CharEqualOnly, Different, Indeterminate };
const char* to_string(PseudoVerdict v);

struct PseudoCompareReport {
    PseudoVerdict verdict = PseudoVerdict::Indeterminate;
    std::string reason;
};
PseudoCompareReport pseudo_compare(const IwasawaModule& m, const IwasawaModule& n);

/// Copies f into a context with at least as many variables (same p, N, D);
/// the new variables come last.
PowerSeries embed_series(const PowerSeries& f, const RingContext& target);

} // namespace iwasawa
