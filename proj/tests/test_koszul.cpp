/**
 * Koszul-side machinery: exterior algebra signs, the two anticommuting
 * differentials, canonical twisted-sector representatives, second-order
 * quantum operators, the word rewriting engine, and the independent cup
 * oracles cross-checked against each other and the closed twisted-Hessian
 * formula.
 */
#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "orbifrob/invertible.hpp"
#include "orbifrob/milnor.hpp"
#include "orbifrob/exterior.hpp"
#include "orbifrob/koszul.hpp"
#include "orbifrob/orbifold.hpp"

using namespace orbifrob;

namespace {

KoszulElement random_koszul(std::mt19937_64& rng, unsigned nvars,
                            const std::vector<GroupElement>& G) {
    KoszulElement c(nvars);
    for (int t = 0; t < 4; ++t) {
        std::vector<unsigned> raw;
        for (unsigned i = 0; i < nvars; ++i)
            if (rng() % 2) raw.push_back(i);
        auto [sign, word] = ExteriorWord::normalized(raw);
        (void)sign;
        Monomial m(nvars, 0);
        for (unsigned i = 0; i < nvars; ++i) m[i] = static_cast<unsigned>(rng() % 3);
        long coeff = static_cast<long>(rng() % 7) - 3;
        if (coeff == 0) continue;
        c.add_term(Polynomial::monomial(nvars, m, Cyclotomic(coeff)), word,
                   G[rng() % G.size()]);
    }
    return c;
}

} // namespace

TEST_CASE("exterior word normalization counts transpositions") {
    auto [s1, w1] = ExteriorWord::normalized({2, 1});
    CHECK(s1 == -1);
    CHECK(w1.indices() == std::vector<unsigned>{1, 2});
    auto [s2, w2] = ExteriorWord::normalized({2, 0, 1});
    CHECK(s2 == 1); // cyclic shift of three letters is even
    CHECK(w2.indices() == std::vector<unsigned>{0, 1, 2});
    auto [s3, w3] = ExteriorWord::normalized({1, 1});
    CHECK(s3 == 0);
    CHECK(w3.empty());
    CHECK_THROWS_AS(ExteriorWord({2, 1}), ValidationError);
}

TEST_CASE("wedge product is graded anticommutative and associative") {
    ExteriorWord a({0}), b({1}), c({2});
    auto [sab, ab] = exterior_product(a, b);
    auto [sba, ba] = exterior_product(b, a);
    CHECK(ab == ba);
    CHECK(sab == -sba);
    auto [saa, aa] = exterior_product(a, a);
    CHECK(saa == 0);
    CHECK(aa.empty());
    // (a ^ b) ^ c == a ^ (b ^ c) including signs
    auto [s1, left] = exterior_product(ab, c);
    auto [s2, bc] = exterior_product(b, c);
    auto [s3, right] = exterior_product(a, bc);
    CHECK(left == right);
    CHECK(sab * s1 == s2 * s3);
}

TEST_CASE("koszul differentials square to zero and anticommute") {
    std::mt19937_64 rng(99001);
    for (const char* text : {"x1^3", "x1^2*x2 + x2^2*x1", "x1^2*x2 + x2^2"}) {
        INFO(text);
        InvertiblePolynomial ip{Polynomial::parse(text)};
        auto G = ip.symmetry_group();
        for (int trial = 0; trial < 8; ++trial) {
            KoszulElement c = random_koszul(rng, ip.nvars(), G);
            CHECK(koszul_d(koszul_d(c)).is_zero());
            CHECK(koszul_curving(koszul_curving(c, ip.poly()), ip.poly()).is_zero());
            KoszulElement anti = koszul_d(koszul_curving(c, ip.poly())) +
                                 koszul_curving(koszul_d(c), ip.poly());
            CHECK(anti.is_zero());
        }
    }
}

TEST_CASE("canonical twisted representatives are closed") {
    // all loop and chain atoms with N <= 3 and exponents <= 3 (the
    // acceptance suite extends this to N = 4)
    std::vector<std::string> polys = {"x1^3", "x1^4"};
    for (unsigned n1 = 2; n1 <= 3; ++n1)
        for (unsigned n2 = 2; n2 <= 3; ++n2) {
            polys.push_back("x1^" + std::to_string(n1) + "*x2 + x2^" + std::to_string(n2) +
                            "*x1");
            polys.push_back("x1^" + std::to_string(n1) + "*x2 + x2^" + std::to_string(n2));
        }
    for (const auto& text : polys) {
        INFO(text);
        InvertiblePolynomial ip{Polynomial::parse(text)};
        for (const auto& g : ip.symmetry_group()) {
            if (g.is_identity()) continue;
            KoszulElement k = kappa_representative(ip, g);
            CHECK_FALSE(k.is_zero());
            ClosednessReport rep = check_closed(k, ip.poly());
            INFO("g = " << g.str());
            CHECK(rep.closed);
            CHECK(rep.residual.is_zero());
        }
    }
}

TEST_CASE("fermat representative is the single-letter generator") {
    InvertiblePolynomial ip{Polynomial::parse("x1^3")};
    GroupElement g = GroupElement::parse("1/3");
    KoszulElement k = kappa_representative(ip, g);
    REQUIRE(k.terms().size() == 1);
    const auto& [key, poly] = *k.terms().begin();
    CHECK(key.first == ExteriorWord({0}));
    CHECK(key.second == g);
    CHECK(poly == Polynomial::parse("1", 1));
}

TEST_CASE("second-order operators") {
    GroupElement g = GroupElement::parse("1/3,1/4");
    GroupElement h = GroupElement::parse("2/3,1/2");
    Polynomial f = Polynomial::parse("x1^3*x2^2 + x1*x2^4 + x2", 2);
    // mixed indices: plain composition of the two quantum partials
    CHECK(second_order_value(g, h, 0, 1, f) ==
          quantum_partial(g, 0, quantum_partial(h, 1, f)));
    CHECK(second_order_value(g, h, 1, 0, f) ==
          quantum_partial(g, 1, quantum_partial(h, 0, f)));
    // the pure case degenerates when the first eigenvalue is 1
    GroupElement e = GroupElement::identity(2);
    CHECK_THROWS_AS(second_order_value(e, h, 0, 0, f), SingularTwistError);
    // low powers vanish under the pure operator
    CHECK(second_order_value(g, h, 1, 1, Polynomial::parse("x2", 2)).is_zero());
    // sector marker multiplies only the touched components
    auto [val, marker] = second_order_apply(g, h, 0, 1, f);
    (void)val;
    CHECK(marker == GroupElement::parse("1/3,1/2"));
}

TEST_CASE("word engine inverts the resolution comparison map") {
    std::mt19937_64 rng(99002);
    InvertiblePolynomial ip{Polynomial::parse("x1^2*x2 + x2^2*x1")};
    auto G = ip.symmetry_group();
    for (int trial = 0; trial < 12; ++trial) {
        Monomial m(2, 0);
        m[0] = static_cast<unsigned>(rng() % 3);
        m[1] = static_cast<unsigned>(rng() % 3);
        Polynomial a = Polynomial::monomial(2, m, Cyclotomic(static_cast<long>(rng() % 5) - 2));
        if (a.is_zero()) continue;
        std::vector<unsigned> raw;
        for (unsigned i = 0; i < 2; ++i)
            if (rng() % 2) raw.push_back(i);
        ExteriorWord I(raw);
        const GroupElement& g = G[rng() % G.size()];
        Word w = upsilon_word(a, I, g);
        UpsilonPreimage back = phi_projection(w, 2);
        CHECK(back.a == a);
        CHECK(back.word == I);
        CHECK(back.g == g);
    }
}

TEST_CASE("cup oracles agree with the closed formula on the frozen loop example") {
    InvertiblePolynomial ip{Polynomial::parse("x1^2*x2 + x2^2*x1")};
    JacobianRing ring(ip.poly(), ip.weights());
    GroupElement g = GroupElement::parse("1/3,1/3");
    Polynomial expected =
        Cyclotomic(Rational(1, 2)) * (Cyclotomic(1) + Cyclotomic::root_of_unity(Rational(1, 3))) *
        Polynomial::parse("x1^2", 2);
    KoszulElement ka = kappa_representative(ip, g);
    KoszulElement kb = kappa_representative(ip, g.inverse());
    CHECK(graph_sum_cup(ka, kb, ip, ring) == expected);
    CHECK(retract_cup_oracle(ka, kb, ip, ring) == expected);
    CHECK(det_quantum_hess(ip, g, ring) == expected);
}

TEST_CASE("oracle guard rails") {
    InvertiblePolynomial ip{Polynomial::parse("x1^2*x2 + x2^2*x1")};
    JacobianRing ring(ip.poly(), ip.weights());
    GroupElement e = GroupElement::identity(2);
    CHECK_THROWS_AS(det_quantum_hess(ip, e, ring), IdentityElementError);
    CHECK_THROWS_AS(quantum_hessian_matrix(ip, GroupElement::parse("1/2,1/2")),
                    ValidationError);
    // the retraction oracle only lands in the identity sector
    GroupElement g = GroupElement::parse("1/3,1/3");
    KoszulElement ka = kappa_representative(ip, g);
    CHECK_THROWS_AS(retract_cup_oracle(ka, ka, ip, ring), NonIdentityTargetError);
    // the word oracles require a single atomic polynomial
    InvertiblePolynomial sum{Polynomial::parse("x1^3 + x2^3")};
    CHECK_THROWS_AS(kappa_representative(sum, GroupElement::parse("1/3,2/3")),
                    ValidationError);
    CHECK_THROWS_AS(kappa_representative(ip, e), IdentityElementError);
}
