/**
 * Brace calculus on twisted Hochschild cochains: elementary brace facts,
 * hand-computed circle products, the construction guard rails, the full
 * randomized identity suite at reduced sample counts, the comparison map
 * into the crossed product, and cohomology dimensions checked against the
 * standard truncated-polynomial answers.
 */
#include <catch2/catch_amalgamated.hpp>

#include "orbifrob/bracelab.hpp"

using namespace orbifrob;

namespace {

FiniteAlgebra trunc(unsigned n, unsigned m) {
    return FiniteAlgebra::truncated_polynomial(n, m, std::nullopt);
}

FiniteAlgebra trunc_curved(unsigned n, unsigned m, unsigned w) {
    return FiniteAlgebra::truncated_polynomial(n, m, w);
}

/// Arity-1 identity-sector cochain sending basis i to the vector cols[i].
TwistedCochain linear_cochain(const FiniteAlgebra& A, const std::vector<AlgebraVec>& cols) {
    TwistedCochain phi(A, 1, A.group_identity());
    for (unsigned i = 0; i < A.dim(); ++i) phi.at(i) = cols[i];
    return phi;
}

} // namespace

TEST_CASE("multiplication braces itself to zero by associativity") {
    for (unsigned n : {2u, 3u, 4u}) {
        FiniteAlgebra A = trunc(n, 1);
        TwistedCochain m2 = TwistedCochain::product_cochain(A);
        TwistedCochain assoc = brace(m2, {m2});
        INFO("dim " << n);
        CHECK(assoc.is_zero());
    }
}

TEST_CASE("brace with no arguments is the cochain itself; oversized braces vanish") {
    FiniteAlgebra A = trunc(3, 3);
    TwistedCochain m2 = TwistedCochain::product_cochain(A);
    CHECK(cochains_equal(brace(m2, {}), m2));
    TwistedCochain big = brace(m2, {m2, m2, m2});
    CHECK(big.is_zero());
}

TEST_CASE("arity-1 brace is twisted composition") {
    FiniteAlgebra A = trunc(3, 1);
    // phi: multiplication by x;  psi: multiplication by x^2
    std::vector<AlgebraVec> mulx(3, AlgebraVec(3, Cyclotomic()));
    std::vector<AlgebraVec> mulx2(3, AlgebraVec(3, Cyclotomic()));
    for (unsigned i = 0; i < 3; ++i) {
        if (i + 1 < 3) mulx[i][i + 1] = Cyclotomic(1);
        if (i + 2 < 3) mulx2[i][i + 2] = Cyclotomic(1);
    }
    TwistedCochain phi = linear_cochain(A, mulx);
    TwistedCochain psi = linear_cochain(A, mulx2);
    // composition of x. and x^2. is x^3. = 0
    CHECK(brace(phi, {psi}).is_zero());
    // composition of x. with itself is x^2.
    CHECK(cochains_equal(brace(phi, {phi}), psi));
}

TEST_CASE("construction rejects an action that moves the curving") {
    CHECK_THROWS_AS(trunc_curved(4, 4, 3), NotInvariantError);
    // the same algebra with the cube-root action is fine
    CHECK_NOTHROW(trunc_curved(4, 3, 3));
    // power >= dim truncates to the zero curving, invariant under anything
    CHECK_NOTHROW(trunc_curved(3, 3, 5));
}

TEST_CASE("algebra constructor validates shapes and laws") {
    // non-associative table: x*x = 1 on a two-dimensional algebra with unit
    std::vector<std::vector<AlgebraVec>> prod(2, std::vector<AlgebraVec>(2, AlgebraVec(2)));
    prod[0][0] = {Cyclotomic(1), Cyclotomic(0)};
    prod[0][1] = {Cyclotomic(0), Cyclotomic(1)};
    prod[1][0] = {Cyclotomic(0), Cyclotomic(1)};
    prod[1][1] = {Cyclotomic(0), Cyclotomic(1)}; // x*x = x breaks associativity with unit? no:
    // make it genuinely broken: (x*x)*x = x*x = x but x*(x*x) = x*x = x - fine;
    // break the unit law instead
    prod[0][1] = {Cyclotomic(0), Cyclotomic(0)};
    AlgebraMat id = {{Cyclotomic(1), Cyclotomic(0)}, {Cyclotomic(0), Cyclotomic(1)}};
    CHECK_THROWS_AS(FiniteAlgebra(2, prod, {Cyclotomic(1), Cyclotomic(0)}, std::nullopt, {id}),
                    ValidationError);
}

TEST_CASE("identity suite passes on both reference algebras") {
    SuiteBounds bounds;
    bounds.sample_count = 15;
    SECTION("uncurved Q[x]/(x^3) with the cube-root action") {
        SuiteReport rep = identity_suite(trunc(3, 3), bounds);
        for (const auto& r : rep.results) {
            INFO(r.identity);
            CHECK(r.failures == 0);
        }
        CHECK(rep.all_passed());
    }
    SECTION("curved Q[x]/(x^4) with W = x^3 and the cube-root action") {
        SuiteReport rep = identity_suite(trunc_curved(4, 3, 3), bounds);
        for (const auto& r : rep.results) {
            INFO(r.identity);
            CHECK(r.failures == 0);
        }
        CHECK(rep.all_passed());
    }
}

TEST_CASE("comparison map carries multiplication to the crossed product") {
    FiniteAlgebra A = trunc(3, 3);
    CrossedProduct cp = crossed_product(A);
    CHECK(cp.algebra.dim() == 9);
    TwistedCochain image = psi_map(cp, TwistedCochain::product_cochain(A));
    TwistedCochain direct = TwistedCochain::product_cochain(cp.algebra);
    CHECK(cochains_equal(image, direct));
}

TEST_CASE("cohomology of truncated polynomial algebras matches the standard answer") {
    // HH^0(Q[x]/(x^n)) = n; HH^p = n - 1 for p >= 1 (characteristic zero)
    auto d2 = hochschild_cohomology_dims(trunc(2, 1), 2);
    CHECK(d2 == std::vector<std::size_t>{2, 1, 1});
    auto d3 = hochschild_cohomology_dims(trunc(3, 1), 2);
    CHECK(d3 == std::vector<std::size_t>{3, 2, 2});
}

TEST_CASE("invariant and crossed cohomology dimensions agree on the orbifold instances") {
    for (auto [n, m] : {std::pair<unsigned, unsigned>{2, 2}, {3, 3}}) {
        INFO("Q[x]/(x^" << n << ") with Z/" << m);
        FiniteAlgebra A = trunc(n, m);
        auto inv = hochschild_cohomology_dims(A, 2);
        auto crossed = hochschild_cohomology_dims(crossed_product(A).algebra, 2);
        CHECK(inv == crossed);
        CHECK(inv == std::vector<std::size_t>{1, 1, 1});
    }
}
