#include "doctest.h"

#include <optional>

#include "iwasawa/oracle.hpp"
#include "support.hpp"
#include "symbolic_count.hpp"

using namespace iwasawa;
using testing_support::S;
using testing_support::below;
using testing_support::symbolic_count;

namespace {
const RingContext R1 = RingContext::make(3, 1);
const RingContext R2 = RingContext::make(3, 2);

IwasawaModule load(const std::string& name) {
    return parse_module(testing_support::read_file(testing_support::fixture(name)));
}
} // namespace

TEST_CASE("finite_quotient examples") {
    for (int n : {2, 4})
        for (int d : {3, 6}) {
            CHECK(finite_quotient(IwasawaModule::free(R2, 1), n, d).log_cardinality() == n * below(2, d));
            CHECK(finite_quotient(IwasawaModule::standard(R1, {S(R1, "p")}, 0), n, d).log_cardinality() == d);
        }
    for (int n : {2, 4, 6}) CHECK(finite_quotient(IwasawaModule::standard(R1, {S(R1, "W - p")}, 0), n, 8).log_cardinality() == n);
    auto q = finite_quotient(IwasawaModule::standard(R1, {S(R1, "p"), S(R1, "p^2")}, 1), 3, 2);
    CHECK(q.invariants == std::vector<int>{1, 1, 2, 2, 3, 3});
    CHECK(q.to_string() == "(Z/3^1)^2 + (Z/3^2)^2 + (Z/3^3)^2");
    // coker [[p, W], [0, W]] = R/(p) + R/(W): d + n
    auto pw = load("p_w.mod");
    for (int n : {4, 8})
        for (int d : {4, 8}) CHECK(finite_quotient(pw, n, d).log_cardinality() == n + d);
}

TEST_CASE("oracle agrees with the symbolic count on the golden set") {
    int covered = 0;
    for (const auto& path : testing_support::fixture_files()) {
        auto m = parse_module(testing_support::read_file(path));
        if (!m.is_standard()) continue;
        for (int n : {4, 8})
            for (int d : {4, 8}) {
                auto expected = symbolic_count(m, n, d);
                REQUIRE_MESSAGE(expected.has_value(), path.filename().string() << " has no closed form");
                CHECK_MESSAGE(finite_quotient(m, n, d).log_cardinality() == *expected,
                              path.filename().string() << " at n=" << n << " d=" << d);
            }
        ++covered;
    }
    CHECK(covered >= 10);
}

TEST_CASE("finite_quotient output does not depend on generator order") {
    auto a = IwasawaModule::standard(R2, {S(R2, "W1 - p"), S(R2, "p^2"), S(R2, "W2^2")}, 1);
    auto b = IwasawaModule::standard(R2, {S(R2, "W2^2"), S(R2, "W1 - p"), S(R2, "p^2")}, 1);
    CHECK(finite_quotient(a, 4, 6).invariants == finite_quotient(b, 4, 6).invariants);
    // same module, mixed presentation
    auto c = IwasawaModule::presentation(Presentation::make(R1, 2, 2, {S(R1, "W"), S(R1, "p"), S(R1, "W"), S(R1, "0")}));
    auto d = IwasawaModule::presentation(Presentation::make(R1, 2, 2, {S(R1, "W"), S(R1, "0"), S(R1, "W"), S(R1, "p")}));
    CHECK(finite_quotient(c, 5, 7).invariants == finite_quotient(d, 5, 7).invariants);
}

TEST_CASE("finite_quotient guards") {
    CHECK_THROWS_AS(finite_quotient(IwasawaModule::free(R2, 3), 4, 16, 100), UnsupportedError);
    CHECK_THROWS_AS(finite_quotient(IwasawaModule::free(R1, 1), 0, 4), std::invalid_argument);
    CHECK_THROWS_AS(finite_quotient(IwasawaModule::free(R1, 1), 4, 17), std::invalid_argument);
    PowerSeries rough(R1);
    rough.set_coeff(1, PadicScalar::from_residue(3, 20, 2, 1)); // W known to p^2
    CHECK_THROWS_AS(finite_quotient(IwasawaModule::standard(R1, {rough}, 0), 4, 4), IndeterminateError);
    CHECK_NOTHROW(finite_quotient(IwasawaModule::standard(R1, {rough}, 0), 2, 4));
}

TEST_CASE("oracle_rank_probe examples") {
    const std::vector<std::pair<int, int>> grid{{4, 4}, {4, 8}, {8, 4}, {8, 8}};
    auto f = oracle_rank_probe(IwasawaModule::free(R1, 1), grid);
    REQUIRE(f.rank);
    CHECK(*f.rank == doctest::Approx(1.0));
    auto f2 = oracle_rank_probe(IwasawaModule::free(R2, 2), grid);
    CHECK(*f2.rank == doctest::Approx(2.0));
    auto mu = oracle_rank_probe(IwasawaModule::standard(R1, {S(R1, "p^3")}, 0), grid);
    CHECK(*mu.rank == doctest::Approx(0.0));
    CHECK(*mu.mu == doctest::Approx(3.0));
    CHECK(*mu.lambda == doctest::Approx(0.0));
    auto pw = oracle_rank_probe(load("p_w.mod"), grid);
    CHECK(*pw.rank == doctest::Approx(0.0));
    CHECK(*pw.mu == doctest::Approx(1.0));
    CHECK(*pw.lambda == doctest::Approx(1.0));
    CHECK(pw.note.find("advisory") != std::string::npos);
    auto thin = oracle_rank_probe(IwasawaModule::free(R1, 1), {{4, 4}});
    CHECK_FALSE(thin.rank);
}

TEST_CASE("oracle_torsion_sub examples") {
    auto m = IwasawaModule::standard(R2, {S(R2, "W1 - p")}, 0);
    auto full = oracle_torsion_sub(m, LinearElement::from_series(S(R2, "W1 - p")), 4, 8);
    auto [ni, di] = interior_level(4, 8);
    CHECK(full.log_interior == finite_quotient(m, ni, di).log_cardinality());
    CHECK(full.log_kernel == finite_quotient(m, 4, 8).log_cardinality());
    CHECK(full.stable);

    auto fr = oracle_torsion_sub(IwasawaModule::free(R2, 1), LinearElement::from_series(S(R2, "W2 + 2*W1 + 3")), 4, 8);
    CHECK(fr.log_kernel > 0); // truncation artifacts
    CHECK(fr.log_interior == 0);
    CHECK(fr.stable);

    auto none = oracle_torsion_sub(m, LinearElement::from_series(S(R2, "W1 - p^2")), 4, 8);
    CHECK(none.log_kernel > 0); // p^(n-1) is killed by p(1 - p) at level n
    CHECK(none.log_interior == 0);
}

TEST_CASE("oracle torsion agrees with torsion_sub on standard forms") {
    std::vector<std::pair<const char*, const char*>> cases{{"W1 - p", "W1 - p"},        {"W1 - p", "W1 - p^2"},
                                                           {"(W1 - p)*(W2 + p)", "W1 - p"}, {"W2 - p", "W1 + p"},
                                                           {"p", "W2 + W1"},             {"W2^2", "W2 + 3"}};
    for (auto [g, l] : cases) {
        auto m = IwasawaModule::standard(R2, {S(R2, g)}, 0);
        auto le = LinearElement::from_series(S(R2, l));
        const bool exact = rank(torsion_sub(m, le)) > 0;
        auto probe = oracle_torsion_sub(m, le, 4, 8);
        CHECK_MESSAGE(exact == (probe.log_interior > 0), g << " / " << l);
    }
}

TEST_CASE("property: interior kernel never shrinks as d grows") {
    std::vector<std::pair<IwasawaModule, const char*>> cases{
        {IwasawaModule::standard(R2, {S(R2, "W1 - p")}, 0), "W1 - p"},
        {IwasawaModule::standard(R2, {S(R2, "W1 - p")}, 1), "W2 + 3"},
        {load("p_w.mod"), nullptr},
        {load("finite_pres.mod"), "W1 + 2*W2"},
    };
    for (auto& [m, l] : cases) {
        const RingContext& ctx = m.context();
        auto le = l ? LinearElement::from_series(S(ctx, l)) : LinearElement::from_series(S(ctx, "W - p"));
        int prev = -1;
        for (int d = 5; d <= 9; ++d) {
            const int cur = oracle_torsion_sub(m, le, 4, d).log_interior;
            CHECK(cur >= prev);
            prev = cur;
        }
    }
}
