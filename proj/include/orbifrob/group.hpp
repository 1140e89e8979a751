/**
 * @file group.hpp
 * @brief Diagonal symmetry group elements and group-twisted calculus.
 *
 * A diagonal group element g acts on coordinates by x_i -> lambda_i x_i with
 * lambda_i = e^{2 pi i g_i}; it is stored as the phase vector (g_1, ..., g_N)
 * of rationals taken mod 1.  The helpers at the bottom implement the twisted
 * calculus used throughout:
 *
 *   - action: (g . f)(x) = f(lambda_1 x_1, ..., lambda_N x_N), so a monomial
 *     x^gamma is scaled by prod_i lambda_i^{gamma_i};
 *   - quantum partial d^g_i: x^gamma -> [gamma_i]_{lambda_i} x^{gamma - e_i};
 *   - prefix scaling rho_i(g): x^gamma -> (prod_{j<i} lambda_j^{gamma_j}) x^gamma.
 */
#ifndef ORBIFROB_GROUP_HPP
#define ORBIFROB_GROUP_HPP

#include <set>
#include <sstream>
#include <vector>

#include "orbifrob/polynomial.hpp"

namespace orbifrob {

class GroupElement {
public:
    GroupElement() = default;
    explicit GroupElement(std::vector<Rational> phases) : p_(std::move(phases)) {
        for (auto& x : p_) x = x.mod1();
    }

    static GroupElement identity(unsigned n) {
        return GroupElement(std::vector<Rational>(n, Rational(0)));
    }

    /// Parse "1/3,2/3,0".
    static GroupElement parse(const std::string& s, unsigned nvars = 0) {
        std::vector<Rational> ph;
        std::string cur;
        std::istringstream is(s);
        while (std::getline(is, cur, ',')) {
            // strip whitespace
            std::string t;
            for (char c : cur)
                if (!std::isspace(static_cast<unsigned char>(c))) t += c;
            if (t.empty()) throw ParseError("empty phase in group element '" + s + "'");
            ph.push_back(Rational::parse(t));
        }
        if (ph.empty()) throw ParseError("empty group element '" + s + "'");
        if (nvars && ph.size() != nvars)
            throw ParseError("group element '" + s + "' has " + std::to_string(ph.size()) +
                             " phases, expected " + std::to_string(nvars));
        return GroupElement(std::move(ph));
    }

    unsigned nvars() const { return static_cast<unsigned>(p_.size()); }
    const std::vector<Rational>& phases() const { return p_; }
    const Rational& phase(unsigned i) const { return p_.at(i); }

    bool is_identity() const {
        for (const auto& x : p_)
            if (!x.is_zero()) return false;
        return true;
    }

    /// lambda_i as an exact root of unity.
    Cyclotomic eigenvalue(unsigned i) const { return Cyclotomic::root_of_unity(p_.at(i)); }

    friend GroupElement operator*(const GroupElement& a, const GroupElement& b) {
        if (a.p_.size() != b.p_.size()) throw ValidationError("group element arity mismatch");
        std::vector<Rational> r(a.p_.size());
        for (size_t i = 0; i < r.size(); ++i) r[i] = (a.p_[i] + b.p_[i]).mod1();
        return GroupElement(std::move(r));
    }

    GroupElement inverse() const {
        std::vector<Rational> r(p_.size());
        for (size_t i = 0; i < r.size(); ++i) r[i] = (-p_[i]).mod1();
        return GroupElement(std::move(r));
    }

    GroupElement pow(long k) const {
        std::vector<Rational> r(p_.size());
        for (size_t i = 0; i < r.size(); ++i) r[i] = (p_[i] * Rational(k)).mod1();
        return GroupElement(std::move(r));
    }

    /// Element keeping only the i-th component: (1,...,lambda_i,...,1).
    GroupElement component(unsigned i) const {
        std::vector<Rational> r(p_.size(), Rational(0));
        r.at(i) = p_.at(i);
        return GroupElement(std::move(r));
    }

    /// Product of components i..j inclusive (empty, hence identity, if i > j).
    GroupElement component_range(unsigned i, unsigned j) const {
        std::vector<Rational> r(p_.size(), Rational(0));
        for (unsigned k = i; k <= j && k < p_.size(); ++k) r[k] = p_[k];
        return GroupElement(std::move(r));
    }

    unsigned order() const {
        unsigned long o = 1;
        for (const auto& x : p_) {
            if (!x.is_zero()) o = std::lcm(o, x.den().get_ui());
        }
        return static_cast<unsigned>(o);
    }

    /// Indices with nonzero phase (the moving variables of g).
    std::vector<unsigned> moving() const {
        std::vector<unsigned> idx;
        for (unsigned i = 0; i < p_.size(); ++i)
            if (!p_[i].is_zero()) idx.push_back(i);
        return idx;
    }

    /// Indices with zero phase (the fixed variables of g).
    std::vector<unsigned> fixed() const {
        std::vector<unsigned> idx;
        for (unsigned i = 0; i < p_.size(); ++i)
            if (p_[i].is_zero()) idx.push_back(i);
        return idx;
    }

    /// det(g) = prod_i lambda_i.
    Cyclotomic det() const {
        Rational s(0);
        for (const auto& x : p_) s += x;
        return Cyclotomic::root_of_unity(s.mod1());
    }

    /// Scalar by which g multiplies the monomial x^gamma.
    Cyclotomic action_scalar(const Monomial& m) const {
        Rational s(0);
        for (size_t i = 0; i < p_.size(); ++i)
            if (m[i]) s += p_[i] * Rational(static_cast<long>(m[i]));
        return Cyclotomic::root_of_unity(s.mod1());
    }

    friend bool operator==(const GroupElement& a, const GroupElement& b) { return a.p_ == b.p_; }
    friend bool operator!=(const GroupElement& a, const GroupElement& b) { return !(a == b); }
    friend bool operator<(const GroupElement& a, const GroupElement& b) {
        if (a.p_.size() != b.p_.size()) return a.p_.size() < b.p_.size();
        for (size_t i = 0; i < a.p_.size(); ++i) {
            if (a.p_[i] != b.p_[i]) return a.p_[i] < b.p_[i];
        }
        return false;
    }

    std::string str() const {
        std::ostringstream os;
        for (size_t i = 0; i < p_.size(); ++i) {
            if (i) os << ",";
            os << p_[i];
        }
        return os.str();
    }

    friend std::ostream& operator<<(std::ostream& os, const GroupElement& g) {
        return os << g.str();
    }

private:
    std::vector<Rational> p_;
};

/// (g . f): every monomial scaled by its action scalar.
inline Polynomial group_action(const GroupElement& g, const Polynomial& f) {
    Polynomial r(f.nvars());
    for (const auto& [m, c] : f.terms()) r.add_term(m, g.action_scalar(m) * c);
    return r;
}

/// Quantum partial derivative d^g_{x_i}:
///   x^gamma -> [gamma_i]_{lambda_i} x^gamma / x_i   (zero when gamma_i = 0).
inline Polynomial quantum_partial(const GroupElement& g, unsigned i, const Polynomial& f) {
    Polynomial r(f.nvars());
    const Cyclotomic lam = g.eigenvalue(i);
    for (const auto& [m, c] : f.terms()) {
        if (m[i] == 0) continue;
        Monomial d = m;
        d[i] -= 1;
        r.add_term(d, quantum_bracket(m[i], lam) * c);
    }
    return r;
}

/// Prefix scaling rho_i(g): x^gamma -> (prod_{j<i} lambda_j^{gamma_j}) x^gamma.
inline Polynomial rho_prefix(const GroupElement& g, unsigned i, const Polynomial& f) {
    Polynomial r(f.nvars());
    for (const auto& [m, c] : f.terms()) {
        Rational s(0);
        for (unsigned j = 0; j < i; ++j)
            if (m[j]) s += g.phase(j) * Rational(static_cast<long>(m[j]));
        r.add_term(m, Cyclotomic::root_of_unity(s.mod1()) * c);
    }
    return r;
}

/// Closure of a generating set under multiplication (sizes here are small;
/// the library guards against runaway orders).
inline std::vector<GroupElement> group_closure(const std::vector<GroupElement>& gens,
                                               size_t max_order = 100000) {
    if (gens.empty()) throw ValidationError("group closure of an empty generating set");
    const unsigned n = gens[0].nvars();
    std::set<GroupElement> seen;
    std::vector<GroupElement> queue{GroupElement::identity(n)};
    seen.insert(queue[0]);
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        for (const auto& g : gens) {
            GroupElement h = queue[qi] * g;
            if (seen.insert(h).second) {
                queue.push_back(h);
                if (queue.size() > max_order)
                    throw ValidationError("group closure exceeds size bound");
            }
        }
    }
    std::vector<GroupElement> out(seen.begin(), seen.end());
    return out;
}

} // namespace orbifrob

#endif
