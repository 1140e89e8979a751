/**
 * Classification of invertible polynomials: atomic decomposition, weight
 * systems, maximal symmetry group, subgroup specs, and transposition.
 *
 * Group orders are checked against |det E| computed by hand for each
 * instance, and weights against the defining linear system.
 */
#include <catch2/catch_amalgamated.hpp>

#include "orbifrob/invertible.hpp"

using namespace orbifrob;

namespace {

struct Instance {
    const char* text;
    Atom::Type type;
    std::vector<unsigned> exps;
    long group_order; // |det E|, computed by hand
};

const std::vector<Instance> kAtoms = {
    {"x1^2", Atom::Type::Fermat, {2}, 2},
    {"x1^3", Atom::Type::Fermat, {3}, 3},
    {"x1^4", Atom::Type::Fermat, {4}, 4},
    {"x1^5", Atom::Type::Fermat, {5}, 5},
    {"x1^6", Atom::Type::Fermat, {6}, 6},
    {"x1^2*x2 + x2^2*x1", Atom::Type::Loop, {2, 2}, 3},
    {"x1^2*x2 + x2^3*x1", Atom::Type::Loop, {2, 3}, 5},
    {"x1^3*x2 + x2^3*x1", Atom::Type::Loop, {3, 3}, 8},
    {"x1^2*x2 + x2^2*x3 + x3^2*x1", Atom::Type::Loop, {2, 2, 2}, 9},
    {"x1^2*x2 + x2^2", Atom::Type::Chain, {2, 2}, 4},
    {"x1^3*x2 + x2^4", Atom::Type::Chain, {3, 4}, 12},
    {"x1^2*x2 + x2^2*x3 + x3^2", Atom::Type::Chain, {2, 2, 2}, 8},
};

} // namespace

TEST_CASE("single-atom instances classify with the expected shape") {
    for (const auto& inst : kAtoms) {
        INFO(inst.text);
        InvertiblePolynomial ip{Polynomial::parse(inst.text)};
        REQUIRE(ip.atoms().size() == 1);
        const Atom& a = ip.atoms()[0];
        CHECK(a.type == inst.type);
        CHECK(a.exps == inst.exps);
        CHECK(ip.det_magnitude() == mpz_class(inst.group_order));
    }
}

TEST_CASE("weights solve the defining system E q = 1") {
    for (const auto& inst : kAtoms) {
        INFO(inst.text);
        InvertiblePolynomial ip{Polynomial::parse(inst.text)};
        const auto& q = ip.weights();
        for (const auto& row : ip.exponents()) {
            Rational s(0);
            for (unsigned i = 0; i < ip.nvars(); ++i)
                s += q[i] * Rational(static_cast<long>(row[i]));
            CHECK(s == Rational(1));
        }
        for (const auto& qi : q) {
            CHECK(qi > Rational(0));
            CHECK(qi < Rational(1));
        }
    }
}

TEST_CASE("hand-solved weights for chosen instances") {
    CHECK(InvertiblePolynomial{Polynomial::parse("x1^3")}.weights() ==
          std::vector<Rational>{Rational(1, 3)});
    CHECK(InvertiblePolynomial{Polynomial::parse("x1^2*x2 + x2^3*x1")}.weights() ==
          (std::vector<Rational>{Rational(2, 5), Rational(1, 5)}));
    CHECK(InvertiblePolynomial{Polynomial::parse("x1^2*x2 + x2^2")}.weights() ==
          (std::vector<Rational>{Rational(1, 4), Rational(1, 2)}));
    CHECK(InvertiblePolynomial{Polynomial::parse("x1^2*x2 + x2^2*x3 + x3^2")}.weights() ==
          (std::vector<Rational>{Rational(3, 8), Rational(1, 4), Rational(1, 2)}));
}

TEST_CASE("direct sums decompose into atoms") {
    InvertiblePolynomial ip{Polynomial::parse("x1^3 + x2^3")};
    REQUIRE(ip.atoms().size() == 2);
    CHECK(ip.atoms()[0].type == Atom::Type::Fermat);
    CHECK(ip.atoms()[1].type == Atom::Type::Fermat);
    CHECK(ip.det_magnitude() == mpz_class(9));
    CHECK(ip.atom_of(0) != ip.atom_of(1));

    // Decomposition lists Fermat and chain atoms first (in variable order),
    // then loops, so the x3^4 summand precedes the loop on x1, x2.
    InvertiblePolynomial mixed{Polynomial::parse("x1^2*x2 + x2^2*x1 + x3^4")};
    REQUIRE(mixed.atoms().size() == 2);
    CHECK(mixed.atoms()[0].type == Atom::Type::Fermat);
    CHECK(mixed.atoms()[0].vars == std::vector<unsigned>({2}));
    CHECK(mixed.atoms()[1].type == Atom::Type::Loop);
    CHECK(mixed.atoms()[1].vars == std::vector<unsigned>({0, 1}));
    CHECK(mixed.det_magnitude() == mpz_class(12));
}

TEST_CASE("invalid polynomials are rejected") {
    CHECK_THROWS_AS(InvertiblePolynomial{Polynomial::parse("x1^2 + x1*x2")}, ValidationError);
    CHECK_THROWS_AS(InvertiblePolynomial{Polynomial::parse("2*x1^3")}, ValidationError);
    CHECK_THROWS_AS(InvertiblePolynomial{Polynomial::parse("x1^3 + x1^2")}, ValidationError);
    CHECK_THROWS_AS(InvertiblePolynomial{Polynomial::parse("x1^3 + x2^3 + x1*x2^2")},
                    ValidationError);
    // a variable that appears in no term leaves the matrix singular
    CHECK_THROWS_AS(InvertiblePolynomial{Polynomial::parse("x1^3", 2)}, ValidationError);
}

TEST_CASE("maximal symmetry group has order |det E| and preserves W") {
    for (const auto& inst : kAtoms) {
        INFO(inst.text);
        InvertiblePolynomial ip{Polynomial::parse(inst.text)};
        auto G = ip.symmetry_group();
        CHECK(G.size() == static_cast<size_t>(inst.group_order));
        for (const auto& g : G) {
            CHECK(ip.admits(g));
            CHECK(group_action(g, ip.poly()) == ip.poly());
        }
    }
}

TEST_CASE("elements outside the symmetry group are rejected") {
    InvertiblePolynomial ip{Polynomial::parse("x1^3")};
    CHECK_FALSE(ip.admits(GroupElement::parse("1/2")));
    CHECK(ip.admits(GroupElement::parse("2/3")));
}

TEST_CASE("subgroup specs") {
    InvertiblePolynomial ip{Polynomial::parse("x1^4")};
    CHECK(ip.subgroup_from_spec("full").size() == 4);
    CHECK(ip.subgroup_from_spec("SL").size() == 1); // only the identity has integral phase sum
    CHECK(ip.subgroup_from_spec("gens:1/2").size() == 2);
    CHECK(ip.subgroup_from_spec("gens:").size() == 1); // trivial group
    CHECK_THROWS_AS(ip.subgroup_from_spec("gens:1/3"), ValidationError);

    InvertiblePolynomial sum{Polynomial::parse("x1^2 + x2^2")};
    auto sl = sum.subgroup_from_spec("SL");
    CHECK(sl.size() == 2); // (0,0) and (1/2,1/2)
    for (const auto& g : sl) CHECK(g.det().is_one());
}

TEST_CASE("transpose flips the exponent matrix") {
    InvertiblePolynomial chain{Polynomial::parse("x1^3*x2 + x2^4")};
    InvertiblePolynomial t = chain.transpose();
    REQUIRE(t.atoms().size() == 1);
    CHECK(t.atoms()[0].type == Atom::Type::Chain);
    // Rows of E follow the canonical (sorted) term order of
    // x1^3*x2 + x2^4, i.e. E = [[0,4],[3,1]]; the transpose [[0,3],[4,1]]
    // is the chain running the other way: x2^3 + x1^4*x2.
    CHECK(t.poly() == Polynomial::parse("x2^3 + x1^4*x2"));
    CHECK(t.atoms()[0].exps == std::vector<unsigned>({4, 3}));
    CHECK(t.det_magnitude() == chain.det_magnitude());
    CHECK(t.transpose().poly() == chain.poly());

    // Fermat and loop atoms are self-transpose up to nothing at all
    InvertiblePolynomial loopP{Polynomial::parse("x1^2*x2 + x2^3*x1")};
    InvertiblePolynomial lt = loopP.transpose();
    CHECK(lt.atoms()[0].type == Atom::Type::Loop);
    CHECK(lt.det_magnitude() == mpz_class(5));
}

TEST_CASE("moving length of group elements per atom") {
    InvertiblePolynomial chain{Polynomial::parse("x1^2*x2 + x2^2")};
    const Atom& a = chain.atoms()[0];
    CHECK(chain.moving_length(GroupElement::parse("1/2,0"), a) == 1);
    CHECK(chain.moving_length(GroupElement::parse("1/4,1/2"), a) == 2);
    CHECK(chain.moving_length(GroupElement::identity(2), a) == 0);

    InvertiblePolynomial loopP{Polynomial::parse("x1^2*x2 + x2^2*x1")};
    const Atom& la = loopP.atoms()[0];
    CHECK(loopP.moving_length(GroupElement::parse("1/3,1/3"), la) == 2);
}

TEST_CASE("exponent-matrix constructor round trips") {
    InvertiblePolynomial ip = InvertiblePolynomial::from_exponents({{2, 1, 0}, {0, 2, 1}, {1, 0, 2}});
    REQUIRE(ip.atoms().size() == 1);
    CHECK(ip.atoms()[0].type == Atom::Type::Loop);
    CHECK(ip.poly() == Polynomial::parse("x1^2*x2 + x2^2*x3 + x3^2*x1"));
    CHECK_THROWS_AS(InvertiblePolynomial::from_exponents({{2, 1}, {1, 2}, {0, 1}}),
                    ValidationError);
}
