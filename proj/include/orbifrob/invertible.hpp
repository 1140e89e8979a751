/**
 * @file invertible.hpp
 * @brief Invertible quasihomogeneous polynomials and their diagonal symmetries.
 *
 * An invertible polynomial in N variables has exactly N monomials, unit
 * coefficients, a nonsingular exponent matrix E, and decomposes (after
 * matching monomials to their lead variables) into the three atomic types
 *
 *   Fermat:  x^n
 *   Loop:    x1^{n1} x2 + x2^{n2} x3 + ... + xk^{nk} x1
 *   Chain:   x1^{n1} x2 + x2^{n2} x3 + ... + xk^{nk}
 *
 * The maximal diagonal symmetry group G_W = { g : E g = 0 mod Z^N } is
 * computed exactly from the Smith normal form of E.
 */
#ifndef ORBIFROB_INVERTIBLE_HPP
#define ORBIFROB_INVERTIBLE_HPP

#include <array>
#include <optional>

#include "orbifrob/group.hpp"

namespace orbifrob {

namespace detail {

/// Smith normal form over Z.  Returns (diag, V) with U * M * V = diag(s_1..s_n)
/// for some unimodular U (not returned); V is unimodular, diag entries are
/// nonnegative and each divides the next.
inline std::pair<std::vector<mpz_class>, std::vector<std::vector<mpz_class>>>
smith_normal_form(std::vector<std::vector<mpz_class>> M) {
    const size_t n = M.size();
    std::vector<std::vector<mpz_class>> V(n, std::vector<mpz_class>(n, 0));
    for (size_t i = 0; i < n; ++i) V[i][i] = 1;

    auto col_swap = [&](size_t a, size_t b) {
        for (size_t i = 0; i < n; ++i) std::swap(M[i][a], M[i][b]);
        for (size_t i = 0; i < n; ++i) std::swap(V[i][a], V[i][b]);
    };
    auto col_addmul = [&](size_t dst, size_t src, const mpz_class& q) {
        for (size_t i = 0; i < n; ++i) M[i][dst] += q * M[i][src];
        for (size_t i = 0; i < n; ++i) V[i][dst] += q * V[i][src];
    };
    auto col_negate = [&](size_t a) {
        for (size_t i = 0; i < n; ++i) M[i][a] = -M[i][a];
        for (size_t i = 0; i < n; ++i) V[i][a] = -V[i][a];
    };
    auto row_swap = [&](size_t a, size_t b) { std::swap(M[a], M[b]); };
    auto row_addmul = [&](size_t dst, size_t src, const mpz_class& q) {
        for (size_t j = 0; j < n; ++j) M[dst][j] += q * M[src][j];
    };

    for (size_t k = 0; k < n; ++k) {
        for (;;) {
            // locate the entry of smallest nonzero magnitude in the trailing block
            size_t pi = n, pj = n;
            for (size_t i = k; i < n; ++i) {
                for (size_t j = k; j < n; ++j) {
                    if (M[i][j] == 0) continue;
                    if (pi == n || abs(M[i][j]) < abs(M[pi][pj])) { pi = i; pj = j; }
                }
            }
            if (pi == n) { pi = pj = k; break; } // trailing block is zero
            if (pi != k) row_swap(pi, k);
            if (pj != k) col_swap(pj, k);

            bool clean = true;
            for (size_t i = k + 1; i < n; ++i) {
                if (M[i][k] == 0) continue;
                mpz_class q;
                mpz_fdiv_q(q.get_mpz_t(), M[i][k].get_mpz_t(), M[k][k].get_mpz_t());
                row_addmul(i, k, -q);
                if (M[i][k] != 0) clean = false;
            }
            for (size_t j = k + 1; j < n; ++j) {
                if (M[k][j] == 0) continue;
                mpz_class q;
                mpz_fdiv_q(q.get_mpz_t(), M[k][j].get_mpz_t(), M[k][k].get_mpz_t());
                col_addmul(j, k, -q);
                if (M[k][j] != 0) clean = false;
            }
            if (!clean) continue;

            // divisibility repair: M[k][k] must divide the trailing block
            bool fixed = true;
            for (size_t i = k + 1; i < n && fixed; ++i) {
                for (size_t j = k + 1; j < n && fixed; ++j) {
                    if (M[i][j] % M[k][k] != 0) {
                        row_addmul(k, i, 1);
                        fixed = false;
                    }
                }
            }
            if (fixed) break;
        }
        if (M[k][k] < 0) col_negate(k);
    }

    std::vector<mpz_class> diag(n);
    for (size_t k = 0; k < n; ++k) diag[k] = M[k][k];
    return {diag, V};
}

} // namespace detail

/// One atomic summand of an invertible polynomial.
struct Atom {
    enum class Type { Fermat, Loop, Chain };
    Type type;
    /// Variables in structural order: Fermat {i}; Loop cyclic order starting
    /// at the smallest index; Chain from head to tail.
    std::vector<unsigned> vars;
    /// exps[k] is the self-exponent of vars[k].
    std::vector<unsigned> exps;

    std::string str() const {
        std::ostringstream os;
        switch (type) {
            case Type::Fermat: os << "fermat"; break;
            case Type::Loop: os << "loop"; break;
            case Type::Chain: os << "chain"; break;
        }
        os << "(";
        for (size_t k = 0; k < exps.size(); ++k) os << (k ? "," : "") << exps[k];
        os << ") on [";
        for (size_t k = 0; k < vars.size(); ++k) os << (k ? "," : "") << "x" << vars[k] + 1;
        os << "]";
        return os.str();
    }
};

class InvertiblePolynomial {
public:
    /// Validate and classify.  Coefficients must all be 1: an invertible
    /// polynomial can always be brought to that form by rescaling the
    /// variables, and the caller is asked to do so rather than have the
    /// library guess a rescaling.
    explicit InvertiblePolynomial(const Polynomial& w) : n_(w.nvars()), poly_(w) {
        if (n_ == 0) throw ValidationError("invertible polynomial needs at least one variable");
        if (w.term_count() != n_)
            throw ValidationError("invertible polynomial in " + std::to_string(n_) +
                                  " variables must have exactly " + std::to_string(n_) +
                                  " monomials, got " + std::to_string(w.term_count()));
        for (const auto& [m, c] : w.terms()) {
            if (!c.is_one())
                throw ValidationError("monomial coefficient " + c.str() +
                                      " is not 1; rescale the variables so every "
                                      "coefficient becomes 1 before passing W in");
        }
        E_.reserve(n_);
        for (const auto& [m, c] : w.terms()) E_.push_back(m);
        classify();
        solve_weights();
    }

    /// Build W from an exponent matrix (rows = monomials).
    static InvertiblePolynomial from_exponents(const std::vector<std::vector<unsigned>>& E) {
        if (E.empty()) throw ValidationError("empty exponent matrix");
        const unsigned n = static_cast<unsigned>(E.size());
        Polynomial w(n);
        for (const auto& row : E) {
            if (row.size() != n) throw ValidationError("exponent matrix must be square");
            w.add_term(row, Cyclotomic(Rational(1)));
        }
        return InvertiblePolynomial(w);
    }

    static InvertiblePolynomial parse(const std::string& text) {
        return InvertiblePolynomial(Polynomial::parse(text));
    }

    unsigned nvars() const { return n_; }
    const Polynomial& poly() const { return poly_; }
    const std::vector<Monomial>& exponents() const { return E_; }
    const std::vector<Atom>& atoms() const { return atoms_; }
    const std::vector<Rational>& weights() const { return q_; }

    /// Index of the atom containing variable i.
    unsigned atom_of(unsigned i) const { return atom_of_.at(i); }

    /// |det E| = order of the maximal diagonal symmetry group.
    mpz_class det_magnitude() const { return abs(detE_); }

    /// Berglund--Huebsch transpose: W^T has exponent matrix E^T.
    InvertiblePolynomial transpose() const {
        std::vector<std::vector<unsigned>> ET(n_, std::vector<unsigned>(n_, 0));
        for (unsigned r = 0; r < n_; ++r)
            for (unsigned c = 0; c < n_; ++c) ET[c][r] = E_[r][c];
        return from_exponents(ET);
    }

    /// Is g a diagonal symmetry of W, i.e. E g integral?
    bool admits(const GroupElement& g) const {
        if (g.nvars() != n_) return false;
        for (unsigned r = 0; r < n_; ++r) {
            Rational s(0);
            for (unsigned c = 0; c < n_; ++c)
                if (E_[r][c]) s += g.phase(c) * Rational(static_cast<long>(E_[r][c]));
            if (!s.mod1().is_zero()) return false;
        }
        return true;
    }

    /// Independent generators of G_W with their orders (from the Smith form).
    std::vector<std::pair<GroupElement, unsigned>> symmetry_generators() const {
        std::vector<std::vector<mpz_class>> M(n_, std::vector<mpz_class>(n_));
        for (unsigned r = 0; r < n_; ++r)
            for (unsigned c = 0; c < n_; ++c) M[r][c] = static_cast<long>(E_[r][c]);
        auto [diag, V] = detail::smith_normal_form(std::move(M));
        std::vector<std::pair<GroupElement, unsigned>> gens;
        for (unsigned k = 0; k < n_; ++k) {
            if (diag[k] <= 1) continue;
            std::vector<Rational> ph(n_);
            for (unsigned i = 0; i < n_; ++i)
                ph[i] = Rational(mpq_class(V[i][k]) / mpq_class(diag[k])).mod1();
            GroupElement g{std::move(ph)};
            gens.emplace_back(g, static_cast<unsigned>(diag[k].get_ui()));
        }
        if (gens.empty()) gens.emplace_back(GroupElement::identity(n_), 1u);
        return gens;
    }

    /// Every element of G_W.
    std::vector<GroupElement> symmetry_group() const {
        std::vector<GroupElement> gens;
        for (auto& [g, o] : symmetry_generators()) gens.push_back(g);
        auto all = group_closure(gens);
        if (mpz_class(static_cast<long>(all.size())) != det_magnitude())
            throw ValidationError("symmetry group size disagrees with |det E|");
        return all;
    }

    /// Subgroup of G_W from a textual spec: "full", "SL", or
    /// "gens:1/3,2/3;0,1/2" (semicolon-separated elements).
    std::vector<GroupElement> subgroup_from_spec(const std::string& spec) const {
        if (spec == "full") return symmetry_group();
        if (spec == "SL") {
            std::vector<GroupElement> sl;
            for (const auto& g : symmetry_group()) {
                Rational s(0);
                for (const auto& p : g.phases()) s += p;
                if (s.mod1().is_zero()) sl.push_back(g);
            }
            return sl;
        }
        const std::string prefix = "gens:";
        if (spec.rfind(prefix, 0) == 0) {
            std::vector<GroupElement> gens;
            std::istringstream is(spec.substr(prefix.size()));
            std::string elem;
            while (std::getline(is, elem, ';')) {
                GroupElement g = GroupElement::parse(elem, n_);
                if (!admits(g))
                    throw ValidationError("group element " + g.str() +
                                          " is not a diagonal symmetry of W");
                gens.push_back(g);
            }
            if (gens.empty()) return {GroupElement::identity(n_)};
            return group_closure(gens);
        }
        throw ParseError("unknown group spec '" + spec + "' (use full, SL, or gens:...)");
    }

    /// W with the moving variables of g set to zero (in ambient variables).
    Polynomial fixed_polynomial(const GroupElement& g) const {
        return poly_.restricted_to_zero(g.moving());
    }

    /**
     * The moving length of g on a chain/loop/fermat atom: the number of
     * moving variables of the atom, validated to be a structural prefix for
     * chains (a diagonal symmetry of a chain always moves a prefix; this is
     * double-checked rather than assumed).
     */
    unsigned moving_length(const GroupElement& g, const Atom& a) const {
        unsigned l = 0;
        for (unsigned k = 0; k < a.vars.size(); ++k) {
            if (!g.phase(a.vars[k]).is_zero()) ++l;
        }
        if (a.type == Atom::Type::Chain) {
            for (unsigned k = 0; k < l; ++k)
                if (g.phase(a.vars[k]).is_zero())
                    throw ValidationError("chain symmetry does not move a prefix: " + g.str());
        } else if (a.type == Atom::Type::Loop) {
            if (l != 0 && l != a.vars.size())
                throw ValidationError("loop symmetry moves a proper subset: " + g.str());
        }
        return l;
    }

private:
    void classify() {
        // Match each monomial to its lead variable and orient passenger edges.
        std::vector<int> lead_monomial(n_, -1);   // variable -> monomial index it leads
        std::vector<int> successor(n_, -1);       // lead variable -> passenger variable
        std::vector<int> indegree(n_, 0);
        mpz_class det;

        for (unsigned k = 0; k < n_; ++k) {
            const Monomial& m = E_[k];
            std::vector<unsigned> support;
            for (unsigned i = 0; i < n_; ++i)
                if (m[i]) support.push_back(i);
            unsigned lead = 0;
            int passenger = -1;
            if (support.size() == 1) {
                lead = support[0];
                if (m[lead] < 2)
                    throw ValidationError("linear monomial x" + std::to_string(lead + 1) +
                                          " is not allowed in an invertible polynomial");
            } else if (support.size() == 2) {
                unsigned a = support[0], b = support[1];
                if (m[a] >= 2 && m[b] == 1) {
                    lead = a;
                    passenger = static_cast<int>(b);
                } else if (m[b] >= 2 && m[a] == 1) {
                    lead = b;
                    passenger = static_cast<int>(a);
                } else if (m[a] == 1 && m[b] == 1) {
                    throw ValidationError("quadratic cross term x" + std::to_string(a + 1) + "*x" +
                                          std::to_string(b + 1) + " is excluded");
                } else {
                    throw ValidationError("monomial " + Polynomial::monomial(n_, m).str() +
                                          " does not have the shape x_i^n * x_j");
                }
            } else {
                throw ValidationError("monomial " + Polynomial::monomial(n_, m).str() +
                                      " involves more than two variables");
            }
            if (lead_monomial[lead] != -1)
                throw ValidationError("two monomials share the lead variable x" +
                                      std::to_string(lead + 1));
            lead_monomial[lead] = static_cast<int>(k);
            successor[lead] = passenger;
            if (passenger >= 0 && ++indegree[passenger] > 1)
                throw ValidationError("variable x" + std::to_string(passenger + 1) +
                                      " is a passenger of two monomials");
        }
        for (unsigned i = 0; i < n_; ++i) {
            if (lead_monomial[i] == -1)
                throw ValidationError("variable x" + std::to_string(i + 1) +
                                      " does not lead any monomial");
        }

        // det E (exact), to certify invertibility and |G_W|.
        {
            std::vector<std::vector<mpq_class>> A(n_, std::vector<mpq_class>(n_));
            for (unsigned r = 0; r < n_; ++r)
                for (unsigned c = 0; c < n_; ++c) A[r][c] = static_cast<long>(E_[r][c]);
            mpq_class d = 1;
            for (unsigned k = 0; k < n_; ++k) {
                unsigned piv = k;
                while (piv < n_ && A[piv][k] == 0) ++piv;
                if (piv == n_) { d = 0; break; }
                if (piv != k) { std::swap(A[piv], A[k]); d = -d; }
                d *= A[k][k];
                for (unsigned r = k + 1; r < n_; ++r) {
                    if (A[r][k] == 0) continue;
                    mpq_class f = A[r][k] / A[k][k];
                    for (unsigned c = k; c < n_; ++c) A[r][c] -= f * A[k][c];
                }
            }
            d.canonicalize();
            if (d == 0) throw ValidationError("exponent matrix is singular");
            detE_ = d.get_num();
        }

        // Walk the functional graph: cycles are loops, maximal paths are
        // chains, isolated vertices are Fermat summands.
        atom_of_.assign(n_, 0u);
        std::vector<bool> seen(n_, false);
        auto exp_of = [&](unsigned v) { return E_[lead_monomial[v]][v]; };

        for (unsigned i = 0; i < n_; ++i) {
            if (seen[i]) continue;
            if (indegree[i] == 0 && successor[i] == -1) {
                // Fermat
                seen[i] = true;
                Atom a{Atom::Type::Fermat, {i}, {exp_of(i)}};
                atom_of_[i] = static_cast<unsigned>(atoms_.size());
                atoms_.push_back(std::move(a));
                continue;
            }
            if (indegree[i] == 0) {
                // chain head: follow to the tail
                Atom a{Atom::Type::Chain, {}, {}};
                int v = static_cast<int>(i);
                while (v != -1) {
                    if (seen[v]) throw ValidationError("malformed chain through x" +
                                                       std::to_string(v + 1));
                    seen[v] = true;
                    a.vars.push_back(static_cast<unsigned>(v));
                    a.exps.push_back(exp_of(static_cast<unsigned>(v)));
                    v = successor[v];
                }
                for (unsigned x : a.vars) atom_of_[x] = static_cast<unsigned>(atoms_.size());
                atoms_.push_back(std::move(a));
            }
        }
        for (unsigned i = 0; i < n_; ++i) {
            if (seen[i]) continue;
            // remaining components are cycles; normalise to start at min index
            std::vector<unsigned> cyc;
            unsigned v = i;
            do {
                if (seen[v]) throw ValidationError("malformed loop through x" + std::to_string(v + 1));
                seen[v] = true;
                cyc.push_back(v);
                v = static_cast<unsigned>(successor[v]);
            } while (v != i);
            Atom a{Atom::Type::Loop, {}, {}};
            size_t start = 0;
            for (size_t k = 1; k < cyc.size(); ++k)
                if (cyc[k] < cyc[start]) start = k;
            for (size_t k = 0; k < cyc.size(); ++k) {
                unsigned x = cyc[(start + k) % cyc.size()];
                a.vars.push_back(x);
                a.exps.push_back(exp_of(x));
            }
            for (unsigned x : a.vars) atom_of_[x] = static_cast<unsigned>(atoms_.size());
            atoms_.push_back(std::move(a));
        }
    }

    void solve_weights() {
        // Solve E q = (1,...,1) exactly.
        std::vector<std::vector<mpq_class>> A(n_, std::vector<mpq_class>(n_ + 1));
        for (unsigned r = 0; r < n_; ++r) {
            for (unsigned c = 0; c < n_; ++c) A[r][c] = static_cast<long>(E_[r][c]);
            A[r][n_] = 1;
        }
        for (unsigned k = 0; k < n_; ++k) {
            unsigned piv = k;
            while (piv < n_ && A[piv][k] == 0) ++piv;
            if (piv == n_) throw ValidationError("exponent matrix is singular");
            if (piv != k) std::swap(A[piv], A[k]);
            mpq_class inv = 1 / A[k][k];
            for (unsigned c = k; c <= n_; ++c) A[k][c] *= inv;
            for (unsigned r = 0; r < n_; ++r) {
                if (r == k || A[r][k] == 0) continue;
                mpq_class f = A[r][k];
                for (unsigned c = k; c <= n_; ++c) A[r][c] -= f * A[k][c];
            }
        }
        q_.resize(n_);
        for (unsigned i = 0; i < n_; ++i) {
            A[i][n_].canonicalize();
            q_[i] = Rational(A[i][n_]);
            if (!(q_[i] > Rational(0)) || q_[i] > Rational(1, 2))
                throw ValidationError("weight q_" + std::to_string(i + 1) + " = " + q_[i].str() +
                                      " outside (0, 1/2]");
        }
    }

    unsigned n_;
    Polynomial poly_;
    std::vector<Monomial> E_;
    std::vector<Atom> atoms_;
    std::vector<unsigned> atom_of_;
    std::vector<Rational> q_;
    mpz_class detE_;
};

} // namespace orbifrob

#endif
