#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "iwasawa/iwmod.hpp"

namespace iwasawa {

/// Corank sequence data did not come from any multiplicity vector.
struct InconsistentInput : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// r_n = deg_f * (n * module_rank + sum_i min(i, n) a_i), for 1 <= n <= theta.
std::int64_t corank_formula(int module_rank, std::span<const int> a, int deg_f, int n);

struct ReconstructionProblem {
    int theta = 0;
    std::vector<std::int64_t> ranks; // r_1 .. r_theta
    int module_rank = 0;
    int deg_f = 1;
};
/// Inverts the min(i, j) system exactly. Throws InconsistentInput for a
/// non-integral or negative solution.
std::vector<int> reconstruct_multiplicities(const ReconstructionProblem& prob);

/// M/l torsion and the image of char(M) equal to char(M/l). With fewer than
/// two ambient variables this is the "extended" class.
Truth in_L_class(const IwasawaModule& m, const LinearElement& l);

struct LClassSufficientReport {
    Truth quotient_torsion = Truth::Indeterminate;
    Truth null_torsion_pseudo_null = Truth::Indeterminate; // M_null[l] over R/(l)
    bool hypotheses_hold = false;
    Truth membership = Truth::Indeterminate; // in_L_class, only when hypotheses hold
    bool extended = false;
    std::string note;
};
/// StandardForm only: checks that M_null[l] is pseudo-null and M/l torsion,
/// then evaluates membership, which must come out true.
LClassSufficientReport l_class_sufficient(const IwasawaModule& m, const LinearElement& l);

/// Thrown when the sampler cannot find enough admissible elements.
struct SamplingExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};
/// Pairwise non-associate linear elements of O[[W_1..W_{m-1}]] (the last
/// variable never appears), none dividing a series in `avoid`. Deterministic
/// in `seed`.
std::vector<LinearElement> sample_linear_ideals(const RingContext& ctx, const std::vector<PowerSeries>& avoid, int count,
                                                std::uint64_t seed);

struct IdealCheck {
    explicit IdealCheck(LinearElement x) : l(std::move(x)) {}
    LinearElement l;
    Truth m_in_class = Truth::Indeterminate;
    Truth n_in_class = Truth::Indeterminate;
    std::string char_m; // char(M/l), printed
    std::string char_n;
    Truth specialized_equal = Truth::Indeterminate;
    std::string error; // set when the check could not be evaluated
};

enum class Conclusion { Consistent, Refuted, Indeterminate };
const char* to_string(Conclusion c);

struct SpecializationReport {
    Truth m_torsion = Truth::Indeterminate;
    Truth n_torsion = Truth::Indeterminate;
    Truth m_fg = Truth::Indeterminate; // hypothesis (a)
    Truth n_fg = Truth::Indeterminate;
    std::vector<IdealCheck> checks;
    Truth global_equal = Truth::Indeterminate;
    /// Consistent: every sampled ideal passes both membership checks and the
    /// specialized ideals agree. Refuted: some ideal in both classes shows a
    /// provable disagreement, so the global ideals differ.
    Conclusion conclusion = Conclusion::Indeterminate;
    /// True when all hypotheses hold on the sample yet the global ideals
    /// provably differ: a contradiction that must never happen.
    bool contradiction = false;
    std::string summary;
};
/// Hypotheses (a) and (b) on a finite sample of linear ideals, together with
/// the global comparison. Ideals are checked concurrently; the report does not
/// depend on the schedule.
SpecializationReport verify_char_equality_by_specialization(const IwasawaModule& m, const IwasawaModule& n,
                                                            const std::vector<LinearElement>& ideals);

struct FunceqReport {
    PseudoVerdict verdict = PseudoVerdict::Indeterminate;
    int rank_m = 0;
    int rank_n = 0;
    std::string reason;
};
/// Over O[[W]]: equal ranks and M pseudo-isomorphic to N^iota.
FunceqReport funceq_verdict(const IwasawaModule& m, const IwasawaModule& n);

struct SuiteCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};
struct CounterexampleReport {
    std::uint64_t prime = 3;
    std::vector<SuiteCheck> checks;
    std::vector<std::string> notes; // degenerate cases, recorded not asserted
    bool all_passed = false;
};
/// The two-part counterexample over Z_p[[W1, W]] with l_i = W1 - p^(i+1),
/// i in [i_from, i_to].
CounterexampleReport counterexample_suite(std::uint64_t prime = 3, int i_from = 2, int i_to = 6, int precision = 20,
                                          int degree_cap = 16);

} // namespace iwasawa
