/**
 * End-to-end acceptance suite: twelve exact-arithmetic checks covering the
 * closed cup-product formulas, the independent product oracles, sector
 * inventories, the full axiom verification, tensor factorization, subgroup
 * embedding, the operator-identity laboratory, the comparison of the two
 * cohomology complexes, and independence of products from the choice of
 * ambient lift.
 *
 * Every check prints exactly one line:  [PASS] name (elapsed ms)  or
 * [FAIL] name (elapsed ms): detail.  The process exit status is the number
 * of failed checks.  All comparisons are literal equality of exact
 * cyclotomic-coefficient data; no tolerances appear anywhere.
 */
#include <chrono>
#include <cstdint>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "orbifrob/bracelab.hpp"
#include "orbifrob/invertible.hpp"
#include "orbifrob/koszul.hpp"
#include "orbifrob/milnor.hpp"
#include "orbifrob/orbifold.hpp"

using namespace orbifrob;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

int g_failures = 0;

/// Run one named check, timing it; an optional budget (milliseconds) turns a
/// slow pass into a failure.
void run(const std::string& name, const std::function<Outcome()>& body,
         std::optional<long> budget_ms = std::nullopt) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const auto t1 = std::chrono::steady_clock::now();
    const long ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
    if (o.pass && budget_ms && ms > *budget_ms) {
        o.pass = false;
        o.detail = "time budget exceeded (" + std::to_string(ms) + " ms > " +
                   std::to_string(*budget_ms) + " ms)";
    }
    if (o.pass) {
        std::cout << "[PASS] " << name << " (" << ms << " ms)\n";
    } else {
        std::cout << "[FAIL] " << name << " (" << ms << " ms): " << o.detail << "\n";
        ++g_failures;
    }
    std::cout.flush();
}

OrbifoldAlgebra full_orbifold(const std::string& text) {
    InvertiblePolynomial ip{Polynomial::parse(text)};
    return OrbifoldAlgebra(ip, ip.symmetry_group());
}

/// x1^{n_1} x2 + x2^{n_2} x3 + ... + xN^{n_N} x1
std::string loop_poly(const std::vector<unsigned>& n) {
    const size_t N = n.size();
    std::ostringstream os;
    for (size_t i = 0; i < N; ++i) {
        if (i) os << " + ";
        os << "x" << (i + 1) << "^" << n[i] << "*x" << ((i + 1) % N + 1);
    }
    return os.str();
}

/// x1^{n_1} x2 + ... + x{N-1}^{n_{N-1}} xN + xN^{n_N}
std::string chain_poly(const std::vector<unsigned>& n) {
    const size_t N = n.size();
    std::ostringstream os;
    for (size_t i = 0; i < N; ++i) {
        if (i) os << " + ";
        os << "x" << (i + 1) << "^" << n[i];
        if (i + 1 < N) os << "*x" << (i + 2);
    }
    return os.str();
}

/// All tuples over {2,3} of the given length.
std::vector<std::vector<unsigned>> exponent_tuples(unsigned len) {
    std::vector<std::vector<unsigned>> out;
    const unsigned total = 1u << len;
    for (unsigned mask = 0; mask < total; ++mask) {
        std::vector<unsigned> t(len);
        for (unsigned i = 0; i < len; ++i) t[i] = ((mask >> i) & 1u) ? 3u : 2u;
        out.push_back(std::move(t));
    }
    return out;
}

/// Four-way product comparison on a single-atom polynomial: the signed
/// closed formula, the quantum-Hessian determinant, the graph summation, and
/// the retraction oracle must agree as Jacobian-ring classes for every
/// nontrivial sector.  Also verifies kappa-closedness of both representative
/// cocycles.  Appends the moving lengths it saw to `lengths_seen`.
Outcome four_way_cross_check(const std::string& text,
                             std::vector<unsigned>* lengths_seen = nullptr) {
    InvertiblePolynomial ip{Polynomial::parse(text)};
    if (ip.atoms().size() != 1) return {false, "expected a single atom: " + text};
    const Atom& atom = ip.atoms()[0];
    JacobianRing ring(ip.poly(), ip.weights());
    for (const auto& g : ip.symmetry_group()) {
        if (g.is_identity()) continue;
        const unsigned l = ip.moving_length(g, atom);
        if (lengths_seen) lengths_seen->push_back(l);
        Polynomial closed = ring.normal_form(atom_twisted_hessian(ip, atom, g));
        if ((l * (l - 1) / 2) % 2) closed = -closed;
        const Polynomial det_route = det_quantum_hess(ip, g, ring);
        const KoszulElement ka = kappa_representative(ip, g);
        const KoszulElement kb = kappa_representative(ip, g.inverse());
        const Polynomial graph_route = graph_sum_cup(ka, kb, ip, ring);
        const Polynomial retract_route = retract_cup_oracle(ka, kb, ip, ring);
        if (!check_closed(ka, ip.poly()).closed || !check_closed(kb, ip.poly()).closed)
            return {false, text + ", g = " + g.str() + ": kappa representative not closed"};
        if (!(closed == det_route && det_route == graph_route &&
              graph_route == retract_route)) {
            std::ostringstream os;
            os << text << ", g = " << g.str() << ": closed = " << closed.str()
               << ", hessian det = " << det_route.str() << ", graph = "
               << graph_route.str() << ", retraction = " << retract_route.str();
            return {false, os.str()};
        }
    }
    return {};
}

// ---------------------------------------------------------------------------
// 01: Fermat cup products against the closed scalar n/(1 - lambda).
// ---------------------------------------------------------------------------
Outcome fermat_cup() {
    for (unsigned n = 2; n <= 6; ++n) {
        OrbifoldAlgebra O = full_orbifold("x1^" + std::to_string(n));
        const GroupElement e = GroupElement::identity(1);
        for (unsigned k = 1; k < n; ++k) {
            const GroupElement g = GroupElement::parse(
                std::to_string(k) + "/" + std::to_string(n));
            const SectorClass cup = O.cup_general(O.generator(g), O.generator(g.inverse()));
            const Cyclotomic lam = Cyclotomic::root_of_unity(g.phase(0));
            const Cyclotomic scale =
                Cyclotomic(static_cast<long>(n)) * (Cyclotomic(1) - lam).inverse();
            Monomial m(1, 0);
            m[0] = n - 2;
            const SectorClass expect = O.make_class(e, Polynomial::monomial(1, m, scale));
            if (!(cup == expect)) {
                std::ostringstream os;
                os << "n = " << n << ", k = " << k << ": got " << cup.str()
                   << ", expected " << expect.str();
                return {false, os.str()};
            }
        }
    }
    return {};
}

// ---------------------------------------------------------------------------
// 02 / 03: loop and chain four-way cross-checks.
// ---------------------------------------------------------------------------
Outcome loop_cross_check() {
    for (const auto& n : {std::vector<unsigned>{2, 2}, {2, 3}, {3, 3}, {2, 2, 2}}) {
        Outcome o = four_way_cross_check(loop_poly(n));
        if (!o.pass) return o;
    }
    return {};
}

Outcome chain_cross_check() {
    bool saw_partial = false, saw_full = false;
    for (const auto& n : {std::vector<unsigned>{2, 2}, {3, 4}, {2, 2, 2}}) {
        std::vector<unsigned> lengths;
        Outcome o = four_way_cross_check(chain_poly(n), &lengths);
        if (!o.pass) return o;
        for (unsigned l : lengths) {
            if (l < n.size()) saw_partial = true;
            if (l == n.size()) saw_full = true;
        }
    }
    if (!saw_partial || !saw_full)
        return {false, "the suite must exercise both moving-length branches "
                       "(partial and full), but one never occurred"};
    return {};
}

// ---------------------------------------------------------------------------
// 04: closedness of every twisted-sector representative under the combined
// differential, for all loop and chain atoms with N <= 4 and exponents <= 3.
// ---------------------------------------------------------------------------
Outcome kappa_closedness() {
    unsigned checked = 0;
    for (unsigned N = 2; N <= 4; ++N) {
        for (const auto& exps : exponent_tuples(N)) {
            for (const bool is_loop : {true, false}) {
                const std::string text = is_loop ? loop_poly(exps) : chain_poly(exps);
                InvertiblePolynomial ip{Polynomial::parse(text)};
                for (const auto& g : ip.symmetry_group()) {
                    if (g.is_identity()) continue;
                    const KoszulElement k = kappa_representative(ip, g);
                    if (!check_closed(k, ip.poly()).closed)
                        return {false, text + ": representative of sector " + g.str() +
                                           " is not closed"};
                    ++checked;
                }
            }
        }
    }
    // The summed element over all twisted sectors is closed as well (each
    // group component is, and the differential preserves the group label);
    // verify the literal sum once per atom type on the smallest instances.
    for (const char* text : {"x1^2*x2 + x2^2*x1", "x1^2*x2 + x2^2"}) {
        InvertiblePolynomial ip{Polynomial::parse(text)};
        KoszulElement total(ip.nvars());
        for (const auto& g : ip.symmetry_group()) {
            if (g.is_identity()) continue;
            total = total + kappa_representative(ip, g);
        }
        if (!check_closed(total, ip.poly()).closed)
            return {false, std::string(text) + ": summed representative is not closed"};
    }
    if (checked == 0) return {false, "no sectors were checked"};
    return {};
}

// ---------------------------------------------------------------------------
// 05: Milnor numbers match the weight formula prod (1/q_i - 1).
// ---------------------------------------------------------------------------
Outcome milnor_dimensions() {
    const std::vector<const char*> suite = {
        "x1^2", "x1^3", "x1^4", "x1^5", "x1^6",                        // Fermat
        "x1^2*x2 + x2^2*x1", "x1^2*x2 + x2^3*x1", "x1^3*x2 + x2^3*x1", // loops
        "x1^2*x2 + x2^2*x3 + x3^2*x1",
        "x1^2*x2 + x2^2", "x1^3*x2 + x2^4", "x1^2*x2 + x2^2*x3 + x3^2", // chains
        "x1^3 + x2^3",                                                  // direct sum
    };
    for (const char* text : suite) {
        InvertiblePolynomial ip{Polynomial::parse(text)};
        JacobianRing ring(ip.poly(), ip.weights());
        Rational expected(1);
        for (const auto& q : ip.weights()) expected *= (Rational(1) / q - Rational(1));
        if (Rational(static_cast<long>(ring.mu())) != expected)
            return {false, std::string(text) + ": dim Jac = " + std::to_string(ring.mu()) +
                               ", weight formula gives " + expected.str()};
    }
    return {};
}

// ---------------------------------------------------------------------------
// 06: sector inventory per atom type.
// ---------------------------------------------------------------------------
Outcome sector_inventory() {
    // Fermat: every twisted sector is one-dimensional of odd parity.
    for (unsigned n = 2; n <= 6; ++n) {
        OrbifoldAlgebra O = full_orbifold("x1^" + std::to_string(n));
        for (const auto& g : O.group()) {
            if (g.is_identity()) continue;
            const Sector& s = O.sector(g);
            if (s.dim() != 1 || s.parity != 1)
                return {false, "x1^" + std::to_string(n) + ", g = " + g.str() +
                                   ": expected a one-dimensional odd sector, got dim " +
                                   std::to_string(s.dim()) + " parity " +
                                   std::to_string(s.parity)};
        }
    }
    // Loop: every twisted sector is one-dimensional with parity N mod 2.
    for (const auto& n : {std::vector<unsigned>{2, 2}, {2, 3}, {3, 3}, {2, 2, 2}}) {
        OrbifoldAlgebra O = full_orbifold(loop_poly(n));
        const unsigned want_parity = static_cast<unsigned>(n.size() % 2);
        for (const auto& g : O.group()) {
            if (g.is_identity()) continue;
            const Sector& s = O.sector(g);
            if (s.dim() != 1 || s.parity != want_parity)
                return {false, loop_poly(n) + ", g = " + g.str() + ": expected dim 1 parity " +
                                   std::to_string(want_parity) + ", got dim " +
                                   std::to_string(s.dim()) + " parity " +
                                   std::to_string(s.parity)};
        }
    }
    // Chain: the sector of g with moving length l is the Jacobian ring of the
    // truncated chain on the fixed tail, with parity l mod 2.
    for (const auto& n : {std::vector<unsigned>{2, 2}, {3, 4}, {2, 2, 2}}) {
        const std::string text = chain_poly(n);
        InvertiblePolynomial ip{Polynomial::parse(text)};
        OrbifoldAlgebra O(ip, ip.symmetry_group());
        const unsigned N = static_cast<unsigned>(n.size());
        for (const auto& g : O.group()) {
            if (g.is_identity()) continue;
            const unsigned l = ip.moving_length(g, ip.atoms()[0]);
            const Sector& s = O.sector(g);
            unsigned want_dim = 1;
            if (l < N) {
                std::vector<unsigned> tail(n.begin() + l, n.end());
                InvertiblePolynomial trunc{Polynomial::parse(chain_poly(tail))};
                want_dim = JacobianRing(trunc.poly(), trunc.weights()).mu();
            }
            if (s.dim() != want_dim || s.parity != l % 2)
                return {false, text + ", g = " + g.str() + " (moving length " +
                                   std::to_string(l) + "): expected dim " +
                                   std::to_string(want_dim) + " parity " +
                                   std::to_string(l % 2) + ", got dim " +
                                   std::to_string(s.dim()) + " parity " +
                                   std::to_string(s.parity)};
        }
    }
    return {};
}

// ---------------------------------------------------------------------------
// 07: the complete axiom verification on five reference orbifolds.
// ---------------------------------------------------------------------------
Outcome frobenius_axioms() {
    struct Case {
        const char* text;
        const char* group_spec; // nullptr = full symmetry group
    };
    const std::vector<Case> cases = {
        {"x1^3", nullptr},
        {"x1^2*x2 + x2^2*x1", nullptr},
        {"x1^2*x2 + x2^2", nullptr},
        {"x1^3 + x2^3", nullptr},   // product group of the two factors
        {"x1^4", "gens:1/2"},       // proper subgroup of order 2 inside Z/4
    };
    for (const auto& c : cases) {
        InvertiblePolynomial ip{Polynomial::parse(c.text)};
        const std::vector<GroupElement> G =
            c.group_spec ? ip.subgroup_from_spec(c.group_spec) : ip.symmetry_group();
        OrbifoldAlgebra O(ip, G);
        const FrobeniusReport rep = O.check_g_frobenius();
        if (!rep.all_pass()) {
            for (const auto& a : rep.axioms)
                if (!a.pass)
                    return {false, std::string(c.text) + ": axiom '" + a.axiom +
                                       "' failed, witness: " + a.witness};
        }
    }
    return {};
}

// ---------------------------------------------------------------------------
// 08: structure constants of the double cubic factor as the Koszul-signed
// tensor product of the single-cubic structure constants, on all 16 x 16
// basis pairs.
// ---------------------------------------------------------------------------
Outcome kunneth_double_cubic() {
    OrbifoldAlgebra P = full_orbifold("x1^3 + x2^3");
    OrbifoldAlgebra F = full_orbifold("x1^3");
    if (P.total_dim() != 16 || F.total_dim() != 4)
        return {false, "unexpected algebra dimensions"};

    const auto pair_elt = [](const GroupElement& a, const GroupElement& b) {
        return GroupElement::parse(a.phase(0).str() + "," + b.phase(0).str());
    };
    // Embed a pair of factor classes u (on x1) and v (on x2) as a class of P.
    const auto embed = [&](const SectorClass& u, const SectorClass& v) {
        Polynomial cu = Polynomial::embedded(
            u.coeff(), 2, std::vector<unsigned>(F.sector(u.sector()).fixed_vars));
        std::vector<unsigned> shifted;
        for (unsigned x : F.sector(v.sector()).fixed_vars) shifted.push_back(x + 1);
        Polynomial cv = Polynomial::embedded(v.coeff(), 2, shifted);
        return P.class_from_ambient(pair_elt(u.sector(), v.sector()), cu * cv);
    };

    const std::vector<SectorClass> fb = F.basis(); // 4 classes: the 16 pairs span P
    unsigned pairs = 0;
    for (const auto& u : fb)
        for (const auto& v : fb)
            for (const auto& up : fb)
                for (const auto& vp : fb) {
                    const SectorClass left = P.cup_general(embed(u, v), embed(up, vp));
                    const SectorClass c1 = F.cup_general(u, up);
                    const SectorClass c2 = F.cup_general(v, vp);
                    const long sign =
                        ((v.parity() * up.parity()) % 2) ? -1 : 1;
                    SectorClass right = embed(c1, c2);
                    if (sign < 0) right = right.scaled(Cyclotomic(-1));
                    if (!(left == right)) {
                        std::ostringstream os;
                        os << "(" << u.str() << " (x) " << v.str() << ") cup ("
                           << up.str() << " (x) " << vp.str() << "): got "
                           << left.str() << ", tensor rule gives " << right.str();
                        return {false, os.str()};
                    }
                    ++pairs;
                }
    if (pairs != 256) return {false, "expected 256 basis pairs, saw " + std::to_string(pairs)};
    return {};
}

// ---------------------------------------------------------------------------
// 09: the order-2 subgroup orbifold of the quartic embeds in the full one.
// ---------------------------------------------------------------------------
Outcome subgroup_embedding() {
    InvertiblePolynomial ip{Polynomial::parse("x1^4")};
    OrbifoldAlgebra full(ip, ip.symmetry_group());
    OrbifoldAlgebra half(ip, ip.subgroup_from_spec("gens:1/2"));
    if (half.group().size() != 2)
        return {false, "subgroup spec gens:1/2 should give a group of order 2"};
    for (const auto& g : half.group())
        for (const auto& h : half.group())
            for (const auto& a : half.sector_basis(g))
                for (const auto& b : half.sector_basis(h)) {
                    if (!(half.cup_general(a, b) == full.cup_general(a, b)))
                        return {false, a.str() + " cup " + b.str() +
                                           ": subgroup and full products differ"};
                    if (!(half.pairing_eta(a, b) == full.pairing_eta(a, b)))
                        return {false, a.str() + " , " + b.str() +
                                           ": subgroup and full pairings differ"};
                }
    return {};
}

// ---------------------------------------------------------------------------
// 10: the operator-identity suite on the two reference algebras, 100 random
// cochains per identity at the fixed seed.
// ---------------------------------------------------------------------------
Outcome bracelab_identities() {
    const SuiteBounds bounds{}; // arity 2, 100 samples, seed 12345
    {
        const FiniteAlgebra A = FiniteAlgebra::truncated_polynomial(3, 3, std::nullopt);
        const SuiteReport rep = identity_suite(A, bounds);
        if (!rep.all_passed())
            for (const auto& r : rep.results)
                if (r.failures)
                    return {false, "Q[x]/(x^3) with Z/3: identity '" + r.identity +
                                       "' failed " + std::to_string(r.failures) + " of " +
                                       std::to_string(r.instances) + " instances: " +
                                       r.witnesses.front().detail};
    }
    {
        const FiniteAlgebra A = FiniteAlgebra::truncated_polynomial(4, 3, 3);
        const SuiteReport rep = identity_suite(A, bounds);
        if (!rep.all_passed())
            for (const auto& r : rep.results)
                if (r.failures)
                    return {false, "Q[x]/(x^4) curved by x^3: identity '" + r.identity +
                                       "' failed " + std::to_string(r.failures) + " of " +
                                       std::to_string(r.instances) + " instances: " +
                                       r.witnesses.front().detail};
    }
    // The curving x^3 is only a fixed point of group orders dividing 3; the
    // constructor must reject the incompatible order-4 action.
    try {
        FiniteAlgebra::truncated_polynomial(4, 4, 3);
        return {false, "an order-4 action on a curving of degree 3 must be rejected"};
    } catch (const NotInvariantError&) {
        // expected
    }
    return {};
}

// ---------------------------------------------------------------------------
// 11: cohomology dimensions of the invariant complex and of the crossed
// product complex agree in degrees 0..2 on the desk-scale instances.
// ---------------------------------------------------------------------------
Outcome psi_comparison() {
    for (const auto& [n, m] : {std::pair<unsigned, unsigned>{2, 2}, {3, 3}}) {
        const FiniteAlgebra A = FiniteAlgebra::truncated_polynomial(n, m, std::nullopt);
        const auto inv = hochschild_cohomology_dims(A, 2);
        const auto crossed = hochschild_cohomology_dims(crossed_product(A).algebra, 2);
        if (inv != crossed) {
            std::ostringstream os;
            os << "Q[x]/(x^" << n << ") with Z/" << m << ": invariant complex gives (";
            for (size_t i = 0; i < inv.size(); ++i) os << (i ? "," : "") << inv[i];
            os << "), crossed product gives (";
            for (size_t i = 0; i < crossed.size(); ++i) os << (i ? "," : "") << crossed[i];
            os << ")";
            return {false, os.str()};
        }
    }
    return {};
}

// ---------------------------------------------------------------------------
// 12: products are unchanged when the canonical ambient lifts are perturbed
// by random elements of the ambient Jacobian ideal (20 per test case).
// ---------------------------------------------------------------------------
Outcome lift_independence() {
    std::mt19937_64 rng(424242);
    for (const char* text : {"x1^3", "x1^2*x2 + x2^2*x1", "x1^2*x2 + x2^2", "x1^4"}) {
        InvertiblePolynomial ip{Polynomial::parse(text)};
        OrbifoldAlgebra O(ip, ip.symmetry_group());
        const unsigned n = ip.nvars();
        std::vector<Polynomial> dW;
        for (unsigned i = 0; i < n; ++i) {
            Polynomial d(n);
            for (const auto& [m, c] : ip.poly().terms()) {
                if (m[i] == 0) continue;
                Monomial e = m;
                e[i] -= 1;
                d = d + Polynomial::monomial(n, e, Cyclotomic(static_cast<long>(m[i])) * c);
            }
            dW.push_back(d);
        }
        std::vector<Polynomial> perturbations;
        for (int trial = 0; trial < 20; ++trial) {
            Polynomial pert(n);
            for (unsigned i = 0; i < n; ++i) {
                Monomial m(n, 0);
                for (unsigned v = 0; v < n; ++v)
                    m[v] = static_cast<unsigned>(rng() % 3);
                long numer = static_cast<long>(rng() % 7) - 3;
                Rational coeff(numer, 1 + static_cast<long>(rng() % 2));
                pert = pert + dW[i] * Polynomial::monomial(n, m, Cyclotomic(coeff));
            }
            perturbations.push_back(std::move(pert));
        }
        const std::vector<SectorClass> basis = O.basis();
        for (const auto& a : basis)
            for (const auto& b : basis) {
                const SectorClass base = O.cup_general(a, b);
                for (const auto& pert : perturbations) {
                    if (!(O.cup_with_lift(a, b, O.lift(a) + pert, O.lift(b)) == base))
                        return {false, std::string(text) + ": " + a.str() + " cup " +
                                           b.str() + " changed under a left-lift perturbation"};
                    if (!(O.cup_with_lift(a, b, O.lift(a), O.lift(b) + pert) == base))
                        return {false, std::string(text) + ": " + a.str() + " cup " +
                                           b.str() + " changed under a right-lift perturbation"};
                }
            }
    }
    return {};
}

} // namespace

int main() {
    run("01-fermat-cup", fermat_cup, 1000);
    run("02-loop-cross-check", loop_cross_check, 60000);
    run("03-chain-cross-check", chain_cross_check, 60000);
    run("04-kappa-closedness", kappa_closedness);
    run("05-milnor-dimensions", milnor_dimensions);
    run("06-sector-inventory", sector_inventory);
    run("07-frobenius-axioms", frobenius_axioms);
    run("08-kunneth-double-cubic", kunneth_double_cubic);
    run("09-subgroup-embedding", subgroup_embedding);
    run("10-bracelab-identities", bracelab_identities, 120000);
    run("11-psi-comparison", psi_comparison);
    run("12-lift-independence", lift_independence);
    if (g_failures == 0)
        std::cout << "all 12 acceptance checks passed\n";
    else
        std::cout << g_failures << " acceptance check(s) failed\n";
    return g_failures;
}
