/**
 * Polynomials over the cyclotomic tower and diagonal group elements.
 *
 * The quantum (twisted) partial derivative is checked against the classical
 * derivative at the identity twist and against an independently coded
 * twisted Leibniz rule on random polynomials.
 */
#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "orbifrob/polynomial.hpp"
#include "orbifrob/group.hpp"

using namespace orbifrob;

namespace {

Polynomial random_poly(std::mt19937_64& rng, unsigned nvars, unsigned max_deg,
                       unsigned nterms) {
    Polynomial p(nvars);
    for (unsigned t = 0; t < nterms; ++t) {
        Monomial m(nvars, 0);
        for (unsigned i = 0; i < nvars; ++i) m[i] = static_cast<unsigned>(rng() % (max_deg + 1));
        long c = static_cast<long>(rng() % 9) - 4;
        p = p + Polynomial::monomial(nvars, m, Cyclotomic(c));
    }
    return p;
}

/// Scale each monomial by lambda_i^{m_i}: the twist that appears in the
/// Leibniz rule of the quantum partial in direction i.
Polynomial twist_in_direction(const GroupElement& g, unsigned i, const Polynomial& f) {
    Polynomial r(f.nvars());
    const Cyclotomic lam = g.eigenvalue(i);
    for (const auto& [m, c] : f.terms())
        r = r + Polynomial::monomial(f.nvars(), m, lam.pow(static_cast<long>(m[i])) * c);
    return r;
}

/// Classical partial derivative, written directly from the definition.
Polynomial classical_partial(unsigned i, const Polynomial& f) {
    Polynomial r(f.nvars());
    for (const auto& [m, c] : f.terms()) {
        if (m[i] == 0) continue;
        Monomial d = m;
        d[i] -= 1;
        r = r + Polynomial::monomial(f.nvars(), d, Cyclotomic(static_cast<long>(m[i])) * c);
    }
    return r;
}

} // namespace

TEST_CASE("polynomial parse handles the expression grammar") {
    Polynomial p = Polynomial::parse("x1^3 + 2*x1*x2^2");
    CHECK(p.nvars() == 2);
    CHECK(p.terms().size() == 2);
    CHECK(Polynomial::parse("x1^2*x2 + x2^2*x1").nvars() == 2);
    // highest variable index fixes the ambient arity
    CHECK(Polynomial::parse("x1*x3").nvars() == 3);
    // explicit arity widens the ambient space
    CHECK(Polynomial::parse("x1^2", 4).nvars() == 4);
    CHECK_THROWS_AS(Polynomial::parse("x0^2"), ParseError);
    CHECK_THROWS_AS(Polynomial::parse("x1^" ), ParseError);
    CHECK_THROWS_AS(Polynomial::parse("a + 1"), ParseError);
    // x/y/z/w are aliases for x1..x4
    CHECK(Polynomial::parse("y + 1") == Polynomial::parse("x2 + 1"));
    CHECK(Polynomial::parse("x*z") == Polynomial::parse("x1*x3"));
    CHECK(Polynomial::parse("w^2").nvars() == 4);
}

TEST_CASE("polynomial display round trips through the parser") {
    std::mt19937_64 rng(77001);
    for (int trial = 0; trial < 20; ++trial) {
        Polynomial p = random_poly(rng, 3, 4, 5);
        if (p.is_zero()) continue;
        CHECK(Polynomial::parse(p.str(), 3) == p);
    }
}

TEST_CASE("polynomial ring operations") {
    Polynomial x = Polynomial::variable(2, 0);
    Polynomial y = Polynomial::variable(2, 1);
    CHECK((x + y) * (x - y) == x * x - y * y);
    CHECK((x * y).compressed({0, 1}) == x * y);
    Polynomial c = (x * x * y).compressed({0, 1});
    CHECK(c == x * x * y);
    // embedding into a larger ambient space and compressing back
    Polynomial e = Polynomial::embedded(Polynomial::parse("x1^2*x2"), 4, {1, 3});
    CHECK(e == Polynomial::parse("x2^2*x4", 4));
    CHECK(e.compressed({1, 3}) == Polynomial::parse("x1^2*x2"));
    CHECK_THROWS_AS((x * y).compressed({0}), ValidationError);
}

TEST_CASE("group elements parse, multiply, and invert") {
    GroupElement g = GroupElement::parse("1/3,2/3");
    CHECK(g.nvars() == 2);
    CHECK(g.order() == 3);
    CHECK((g * g * g) == GroupElement::identity(2));
    CHECK(g.inverse() == g * g);
    CHECK(g.pow(5) == g * g);
    CHECK(g.pow(-1) == g.inverse());
    GroupElement h = GroupElement::parse("1/2,0");
    CHECK((g * h).phase(0) == Rational(5, 6));
    CHECK(h.order() == 2);
    CHECK_THROWS_AS(GroupElement::parse(""), ParseError);
}

TEST_CASE("moving and fixed variable sets") {
    GroupElement g = GroupElement::parse("0,1/2,2/3");
    CHECK(g.fixed() == std::vector<unsigned>{0});
    CHECK(g.moving() == std::vector<unsigned>{1, 2});
    CHECK(GroupElement::identity(3).fixed() == std::vector<unsigned>{0, 1, 2});
}

TEST_CASE("determinant character multiplies phases") {
    GroupElement g = GroupElement::parse("1/3,1/3");
    CHECK(g.det() == Cyclotomic::root_of_unity(Rational(2, 3)));
    CHECK(GroupElement::identity(4).det().is_one());
    GroupElement s = GroupElement::parse("1/2,1/2");
    CHECK(s.det().is_one()); // phases sum to an integer: an SL element
}

TEST_CASE("group action is multiplicative and respects composition") {
    std::mt19937_64 rng(77002);
    GroupElement g = GroupElement::parse("1/3,1/4");
    GroupElement h = GroupElement::parse("2/3,1/2");
    for (int trial = 0; trial < 10; ++trial) {
        Polynomial f = random_poly(rng, 2, 3, 4);
        Polynomial p = random_poly(rng, 2, 3, 4);
        CHECK(group_action(g, f * p) == group_action(g, f) * group_action(g, p));
        CHECK(group_action(g, group_action(h, f)) == group_action(g * h, f));
        CHECK(group_action(GroupElement::identity(2), f) == f);
    }
}

TEST_CASE("quantum partial reduces to the classical derivative at trivial twist") {
    std::mt19937_64 rng(77003);
    GroupElement e = GroupElement::identity(3);
    for (int trial = 0; trial < 10; ++trial) {
        Polynomial f = random_poly(rng, 3, 4, 5);
        for (unsigned i = 0; i < 3; ++i)
            CHECK(quantum_partial(e, i, f) == classical_partial(i, f));
    }
}

TEST_CASE("quantum partial satisfies the twisted Leibniz rule") {
    std::mt19937_64 rng(77004);
    GroupElement g = GroupElement::parse("1/3,1/4,1/6");
    for (int trial = 0; trial < 10; ++trial) {
        Polynomial f = random_poly(rng, 3, 3, 4);
        Polynomial p = random_poly(rng, 3, 3, 4);
        for (unsigned i = 0; i < 3; ++i) {
            INFO("direction " << i);
            CHECK(quantum_partial(g, i, f * p) ==
                  quantum_partial(g, i, f) * p +
                      twist_in_direction(g, i, f) * quantum_partial(g, i, p));
        }
    }
}

TEST_CASE("prefix scaling only sees earlier variables") {
    GroupElement g = GroupElement::parse("1/3,1/4,1/5");
    Polynomial f = Polynomial::parse("x1*x2*x3", 3);
    CHECK(rho_prefix(g, 0, f) == f);
    CHECK(rho_prefix(g, 1, f) == Cyclotomic::root_of_unity(Rational(1, 3)) * f);
    CHECK(rho_prefix(g, 2, f) ==
          Cyclotomic::root_of_unity(Rational(1, 3) + Rational(1, 4)) * f);
}

TEST_CASE("group closure generates the expected cyclic groups") {
    auto c = group_closure({GroupElement::parse("1/4")});
    CHECK(c.size() == 4);
    auto c2 = group_closure({GroupElement::parse("1/6,0"), GroupElement::parse("0,1/2")});
    CHECK(c2.size() == 12);
}
