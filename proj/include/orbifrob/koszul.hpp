#ifndef ORBIFROB_KOSZUL_HPP
#define ORBIFROB_KOSZUL_HPP

/**
 * The twisted Koszul model and the independent cup-product oracles.
 *
 * This header provides, for a single-atom invertible polynomial W and a
 * diagonal symmetry g:
 *
 *   - the Koszul differential and the curving differential on sums of
 *     terms a * e_I * g, together with a closedness checker;
 *   - distinguished closed representatives ("kappa") of the generator of
 *     each twisted sector;
 *   - second-order twisted difference operators;
 *   - a rewriting engine for operator words built from first- and
 *     second-order twisted partials interleaved with group markers, with
 *     the side map (hstar), the potential-insertion differential (dW),
 *     and the comparison map between the two resolutions (ups_phi);
 *   - three mutually independent evaluations of the product of two
 *     twisted sector generators landing in the untwisted sector:
 *       retract_cup_oracle  (full homotopy-retraction pipeline),
 *       graph_sum_cup       (closed summation over matching diagrams),
 *       det_quantum_hess    (determinant of the quantum Hessian matrix).
 */

#include <algorithm>
#include <cstddef>
#include <functional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cyclotomic.hpp"
#include "error.hpp"
#include "exterior.hpp"
#include "group.hpp"
#include "invertible.hpp"
#include "milnor.hpp"
#include "polynomial.hpp"

namespace orbifrob {

/// A Koszul element regarded as a cochain of the twisted complex.
using KoszulCochain = KoszulElement;

// --------------------------------------------------------------------------
// Koszul and curving differentials
// --------------------------------------------------------------------------

/// d_K(a e_I g) = sum_i (x_i - g.x_i) e_i ^ (a e_I) g
///             = sum_{i moving for g} (1 - lambda_i) x_i a (e_i ^ e_I) g.
inline KoszulElement koszul_d(const KoszulElement& c) {
    const unsigned nv = c.nvars();
    KoszulElement out(nv);
    const Cyclotomic one(1);
    for (const auto& [key, a] : c.terms()) {
        const ExteriorWord& I = key.first;
        const GroupElement& g = key.second;
        for (unsigned i : g.moving()) {
            auto [sg, word] = exterior_product(ExteriorWord({i}), I);
            if (sg == 0) continue;
            Cyclotomic coef = (one - g.eigenvalue(i)) * Cyclotomic(sg);
            out.add_term(coef * (Polynomial::variable(nv, i) * a), word, g);
        }
    }
    return out;
}

/// Curving differential: contraction against the twisted partials of W,
///   dW~(a e_{i_1}...e_{i_p} g)
///     = sum_k (-1)^{k-1} a * rho_{i_k}(g)(d^g_{x_{i_k}} W) e_{I \ i_k} g.
inline KoszulElement koszul_curving(const KoszulElement& c, const Polynomial& W) {
    const unsigned nv = c.nvars();
    if (W.nvars() != nv) throw ValidationError("koszul_curving: variable count mismatch");
    KoszulElement out(nv);
    for (const auto& [key, a] : c.terms()) {
        const ExteriorWord& I = key.first;
        const GroupElement& g = key.second;
        const auto& idx = I.indices();
        for (size_t k = 0; k < idx.size(); ++k) {
            Polynomial val = rho_prefix(g, idx[k], quantum_partial(g, idx[k], W));
            if (val.is_zero()) continue;
            if (k % 2 == 1) val = -val;
            out.add_term(a * val, I.without_position(k), g);
        }
    }
    return out;
}

struct ClosednessReport {
    bool closed;
    KoszulElement residual; // d_K(c) + dW~(c)
};

/// Checks (d_K + dW~)(c) = 0 and reports the residual.
inline ClosednessReport check_closed(const KoszulElement& c, const Polynomial& W) {
    KoszulElement r = koszul_d(c) + koszul_curving(c, W);
    return {r.is_zero(), r};
}

// --------------------------------------------------------------------------
// Kappa representatives of twisted sector generators
// --------------------------------------------------------------------------

namespace detail {

/// The single atom of W, with its variable list required to be ascending
/// (the closed summation formulas are stated for that presentation).
inline const Atom& single_ascending_atom(const InvertiblePolynomial& ip,
                                         const char* who) {
    if (ip.atoms().size() != 1)
        throw ValidationError(std::string(who) + " requires a single-atom polynomial");
    const Atom& a = ip.atoms()[0];
    for (size_t k = 1; k < a.vars.size(); ++k)
        if (a.vars[k - 1] >= a.vars[k])
            throw ValidationError(std::string(who) +
                                  " requires the atom variables in ascending order");
    return a;
}

/// All subsets {t_1 < ... < t_s} of {1..m} whose members are pairwise
/// non-adjacent; for cyclic = true adjacency additionally wraps around a
/// circle of size `period` (so t_1 + period - t_s >= 2 must hold as well).
/// The empty subset is included.
inline std::vector<std::vector<unsigned>> sparse_subsets(unsigned m, bool cyclic,
                                                         unsigned period) {
    std::vector<std::vector<unsigned>> out;
    std::vector<unsigned> cur;
    // iterative stack-free recursion over the choice of the next element
    std::function<void(unsigned)> rec = [&](unsigned next) {
        out.push_back(cur);
        for (unsigned t = next; t <= m; ++t) {
            if (!cur.empty() && t - cur.back() < 2) continue;
            cur.push_back(t);
            bool ok = !cyclic || cur.front() + period - cur.back() >= 2;
            if (ok) rec(t + 2);
            cur.pop_back();
        }
    };
    rec(1);
    return out;
}

} // namespace detail

/**
 * The distinguished closed representative of the generator of the sector
 * twisted by g, for a single-atom W acted on by g != e.  The top term is
 * e_{I_g} g over the moving variables; lower exterior degrees carry the
 * correction coefficients required for closedness under d_K + dW~.
 */
inline KoszulElement kappa_representative(const InvertiblePolynomial& ip,
                                          const GroupElement& g) {
    const unsigned nv = ip.nvars();
    if (g.nvars() != nv) throw ValidationError("kappa representative: arity mismatch");
    if (g.is_identity())
        throw IdentityElementError("kappa representative of the untwisted sector");
    if (!ip.admits(g))
        throw ValidationError("kappa representative: group element does not preserve W");
    const Atom& atom = detail::single_ascending_atom(ip, "kappa representative");

    KoszulElement out(nv);
    const Cyclotomic one(1);

    if (atom.type == Atom::Type::Fermat) {
        out.add_term(Polynomial::constant(nv, one), ExteriorWord({atom.vars[0]}), g);
        return out;
    }

    const unsigned Na = static_cast<unsigned>(atom.vars.size());
    const unsigned l = ip.moving_length(g, atom); // validates the moving pattern
    const bool loop = atom.type == Atom::Type::Loop;

    // Side coefficients b_t (atom positions are 1-based here).
    auto side = [&](unsigned t) -> Polynomial {
        const unsigned v = atom.vars[t - 1];
        const unsigned n = atom.exps[t - 1];
        const Cyclotomic lam = g.eigenvalue(v);
        Cyclotomic c = (loop && t == Na) ? Cyclotomic((Na % 2) ? 1 : -1) * (one - lam).inverse()
                                         : lam.pow(n) * (one - lam).inverse();
        return c * Polynomial::variable(nv, v, n - 1);
    };

    // Loop: subsets of {1..Na}, cyclically sparse; chain: subsets of
    // {1..l-1}, sparse (so every chosen pair {t, t+1} stays within 1..l).
    const unsigned m = loop ? Na : (l >= 1 ? l - 1 : 0);
    const auto subsets = detail::sparse_subsets(m, loop, Na);

    for (const auto& sub : subsets) {
        Polynomial coeff = Polynomial::constant(nv, one);
        std::vector<bool> covered(Na + 1, false);
        for (unsigned t : sub) {
            coeff = coeff * side(t);
            covered[t] = true;
            covered[loop ? (t % Na) + 1 : t + 1] = true;
        }
        std::vector<unsigned> word;
        const unsigned top = loop ? Na : l;
        for (unsigned t = 1; t <= top; ++t)
            if (!covered[t]) word.push_back(atom.vars[t - 1]);
        out.add_term(coeff, ExteriorWord(std::move(word)), g);
    }
    return out;
}

// --------------------------------------------------------------------------
// Second-order twisted difference operators
// --------------------------------------------------------------------------

/**
 * Value of the second-order operator with labels (g, h) and variable pair
 * (i, j) on the polynomial f.  For i != j it is the composite of the two
 * first-order twisted partials; for i == j it is the pure-type operator
 *   x_i^n  ->  (e1^{n-1} [n]_{e2} - [n]_{e1 e2}) / (e1 - 1) * x_i^{n-2},
 * with e1, e2 the eigenvalues of g, h at i (other variables untouched).
 */
inline Polynomial second_order_value(const GroupElement& g, const GroupElement& h,
                                     unsigned i, unsigned j, const Polynomial& f) {
    if (i != j) return quantum_partial(g, i, quantum_partial(h, j, f));
    const Cyclotomic e1 = g.eigenvalue(i);
    const Cyclotomic e2 = h.eigenvalue(i);
    if (e1.is_one())
        throw SingularTwistError("pure second-order operator with unit eigenvalue at x" +
                                 std::to_string(i + 1));
    const Cyclotomic dinv = (e1 - Cyclotomic(1)).inverse();
    Polynomial r(f.nvars());
    for (const auto& [m, c] : f.terms()) {
        const unsigned n = m[i];
        if (n < 2) continue;
        Cyclotomic num =
            e1.pow(static_cast<long>(n) - 1) * quantum_bracket(n, e2) - quantum_bracket(n, e1 * e2);
        Monomial d = m;
        d[i] -= 2;
        r.add_term(d, dinv * num * c);
    }
    return r;
}

/// Value together with the sector marker g^{(i)} h^{(j)} carried by the
/// operator.
inline std::pair<Polynomial, GroupElement> second_order_apply(const GroupElement& g,
                                                              const GroupElement& h,
                                                              unsigned i, unsigned j,
                                                              const Polynomial& f) {
    return {second_order_value(g, h, i, j, f), g.component(i) * h.component(j)};
}

// --------------------------------------------------------------------------
// Operator words
// --------------------------------------------------------------------------

/**
 * One letter of an operator word: either a coefficient a*s of the crossed
 * product (polynomial times group marker), a first-order twisted partial
 * with label t at variable i, or a second-order operator with labels (g,h)
 * at variables (i,j).
 */
struct WordAtom {
    enum class Kind { Scalar, Op1, Op2 };
    Kind kind;
    Polynomial poly;  // Scalar payload (ignored for operators)
    GroupElement t1;  // Scalar marker / first operator label
    GroupElement t2;  // second operator label (Op2 only)
    unsigned i = 0;
    unsigned j = 0;

    static WordAtom scalar(Polynomial p, GroupElement s) {
        return WordAtom{Kind::Scalar, std::move(p), std::move(s), GroupElement(), 0, 0};
    }
    static WordAtom op1(unsigned nvars, GroupElement t, unsigned i) {
        return WordAtom{Kind::Op1, Polynomial::constant(nvars, Cyclotomic(1)), std::move(t),
                        GroupElement(), i, 0};
    }
    static WordAtom op2(unsigned nvars, GroupElement g, GroupElement h, unsigned i, unsigned j) {
        return WordAtom{Kind::Op2, Polynomial::constant(nvars, Cyclotomic(1)), std::move(g),
                        std::move(h), i, j};
    }

    bool is_op() const { return kind != Kind::Scalar; }

    /// Group content the letter contributes to the sector, in word order.
    GroupElement content() const {
        switch (kind) {
            case Kind::Scalar: return t1;
            case Kind::Op1: return t1.component(i);
            case Kind::Op2: return t1.component(i) * t2.component(j);
        }
        return t1; // unreachable
    }

    std::string str() const {
        std::ostringstream os;
        switch (kind) {
            case Kind::Scalar:
                os << "(" << poly.str() << ")[" << t1.str() << "]";
                break;
            case Kind::Op1:
                os << "D[" << t1.str() << "]_x" << (i + 1);
                break;
            case Kind::Op2:
                os << "D2[" << t1.str() << ";" << t2.str() << "]_x" << (i + 1) << ",x" << (j + 1);
                break;
        }
        return os.str();
    }
};

/// A scalar multiple of a product of word letters.
struct Word {
    Cyclotomic coeff;
    std::vector<WordAtom> atoms;

    unsigned arity() const {
        unsigned p = 0;
        for (const auto& a : atoms)
            if (a.is_op()) ++p;
        return p;
    }

    std::string str() const {
        std::ostringstream os;
        os << "(" << coeff.str() << ")";
        for (const auto& a : atoms) os << " . " << a.str();
        return os.str();
    }
};

/// A formal sum of words.
using WordCochain = std::vector<Word>;

inline bool word_is_zero(const Word& w) { return w.coeff.is_zero() && w.atoms.empty(); }

/**
 * Normal form of a word: all polynomial content is commuted to a single
 * front coefficient (picking up the crossed-product twist by the group
 * content it passes), group markers are split into single-variable
 * components and merged within each run between operators, and operators
 * stay in place.
 */
inline Word normalize_word(const Word& w, unsigned nvars) {
    const Cyclotomic one(1);
    Polynomial front = Polynomial::constant(nvars, one);
    GroupElement cum = GroupElement::identity(nvars);
    GroupElement seg = GroupElement::identity(nvars);
    std::vector<WordAtom> body;

    auto flush = [&]() {
        for (unsigned c = 0; c < nvars; ++c)
            if (!seg.phase(c).is_zero())
                body.push_back(
                    WordAtom::scalar(Polynomial::constant(nvars, one), seg.component(c)));
        seg = GroupElement::identity(nvars);
    };

    for (const auto& at : w.atoms) {
        if (at.kind == WordAtom::Kind::Scalar) {
            front = front * group_action(cum, at.poly);
            seg = seg * at.t1;
            cum = cum * at.t1;
        } else {
            flush();
            body.push_back(at);
            cum = cum * at.content();
        }
    }
    flush();

    Word r;
    r.coeff = w.coeff;
    if (r.coeff.is_zero() || front.is_zero()) {
        r.coeff = Cyclotomic(0);
        return r;
    }
    r.atoms.reserve(body.size() + 1);
    r.atoms.push_back(WordAtom::scalar(std::move(front), GroupElement::identity(nvars)));
    r.atoms.insert(r.atoms.end(), body.begin(), body.end());
    return r;
}

/// The operator word representing a * e_I * g: the coefficient in front,
/// then for each variable position either the twisted partial (at indices
/// of I) or the group marker of g at that position.
inline Word upsilon_word(const Polynomial& a, const ExteriorWord& I, const GroupElement& g) {
    const unsigned nv = a.nvars();
    Word w;
    w.coeff = Cyclotomic(1);
    w.atoms.push_back(WordAtom::scalar(a, GroupElement::identity(nv)));
    for (unsigned c = 0; c < nv; ++c) {
        if (I.contains(c)) {
            w.atoms.push_back(WordAtom::op1(nv, g, c));
        } else if (!g.phase(c).is_zero()) {
            w.atoms.push_back(
                WordAtom::scalar(Polynomial::constant(nv, Cyclotomic(1)), g.component(c)));
        }
    }
    return w;
}

/// The triple (a, I, g) a word in the image of upsilon_word came from.
struct UpsilonPreimage {
    Polynomial a;
    ExteriorWord word;
    GroupElement g;
};

/**
 * Reads a word of the standard shape back into its Koszul triple: the
 * inverse of upsilon_word on its image (used as the round-trip check
 * between the two resolutions).  Throws UnsupportedWordError when the word
 * is not of that shape.
 */
inline UpsilonPreimage phi_projection(const Word& input, unsigned nvars) {
    Word w = normalize_word(input, nvars);
    if (word_is_zero(w))
        return {Polynomial::zero(nvars), ExteriorWord(), GroupElement::identity(nvars)};

    GroupElement total = GroupElement::identity(nvars);
    std::vector<unsigned> ops;
    std::vector<unsigned> markers;
    for (size_t k = 1; k < w.atoms.size(); ++k) {
        const WordAtom& at = w.atoms[k];
        if (at.kind == WordAtom::Kind::Op2)
            throw UnsupportedWordError("second-order letter in projection: " + w.str());
        if (at.kind == WordAtom::Kind::Op1) {
            ops.push_back(at.i);
        } else {
            const auto mov = at.t1.moving();
            if (mov.size() != 1)
                throw UnsupportedWordError("non-elementary marker in projection: " + w.str());
            markers.push_back(mov[0]);
        }
        total = total * at.content();
    }
    for (size_t k = 1; k < ops.size(); ++k)
        if (ops[k - 1] >= ops[k])
            throw UnsupportedWordError("projection of a non-ascending word: " + w.str());

    // Validate the standard shape against the total group element.
    std::vector<bool> is_op(nvars, false);
    for (unsigned c : ops) is_op[c] = true;
    size_t mk = 0;
    for (size_t k = 1, o = 0; k < w.atoms.size(); ++k) {
        const WordAtom& at = w.atoms[k];
        if (at.kind == WordAtom::Kind::Op1) {
            if (at.i != ops[o] || at.t1.phase(at.i) != total.phase(at.i))
                throw UnsupportedWordError("operator label mismatch in projection: " + w.str());
            ++o;
        } else {
            unsigned c = markers[mk++];
            if (is_op[c] || at.t1.phase(c) != total.phase(c) || total.phase(c).is_zero())
                throw UnsupportedWordError("marker mismatch in projection: " + w.str());
        }
    }
    for (unsigned c = 0; c < nvars; ++c) {
        if (is_op[c]) continue;
        bool present = std::find(markers.begin(), markers.end(), c) != markers.end();
        if (!total.phase(c).is_zero() && !present)
            throw UnsupportedWordError("missing marker in projection: " + w.str());
    }

    return {w.coeff * w.atoms[0].poly, ExteriorWord(std::move(ops)), total};
}

/**
 * Insertion of the potential into each operator slot:
 *   dW(word) = sum_k (-1)^{k-1} (word with its k-th operator replaced by
 *              the coefficient it produces on W, carrying its sector
 *              marker), in normal form.
 */
inline WordCochain word_dW(const Word& w, const Polynomial& W) {
    const unsigned nv = W.nvars();
    WordCochain out;
    unsigned k = 0;
    for (size_t pos = 0; pos < w.atoms.size(); ++pos) {
        const WordAtom& at = w.atoms[pos];
        if (!at.is_op()) continue;
        ++k;
        Polynomial val = (at.kind == WordAtom::Kind::Op1)
                             ? quantum_partial(at.t1, at.i, W)
                             : second_order_value(at.t1, at.t2, at.i, at.j, W);
        Word nw;
        nw.coeff = (k % 2 == 0) ? -w.coeff : w.coeff;
        nw.atoms = w.atoms;
        nw.atoms[pos] = WordAtom::scalar(std::move(val), at.content());
        Word nn = normalize_word(nw, nv);
        if (!word_is_zero(nn)) out.push_back(std::move(nn));
    }
    return out;
}

namespace detail {

struct Marker {
    unsigned pos;
    GroupElement s;
};

/// Comparison map applied to a pure first-order word: sorts the operator
/// slots (vanishing on repeats), accumulates all group content into a
/// single per-position letter, and rebuilds the unique ascending word with
/// that content.
inline Word ups_phi(const Word& beta, unsigned nvars) {
    std::vector<unsigned> slots;
    GroupElement gamma = GroupElement::identity(nvars);
    for (const auto& at : beta.atoms) {
        if (at.kind == WordAtom::Kind::Op2)
            throw UnsupportedWordError("second-order letter in comparison map: " + beta.str());
        if (at.kind == WordAtom::Kind::Op1) {
            slots.push_back(at.i);
            gamma = gamma * at.t1.component(at.i);
        } else {
            if (!at.poly.is_zero() &&
                !(at.poly == Polynomial::constant(nvars, Cyclotomic(1))))
                throw UnsupportedWordError("polynomial letter in comparison map: " + beta.str());
            gamma = gamma * at.t1;
        }
    }
    auto [sign, sorted] = ExteriorWord::normalized(slots);
    Word r;
    if (sign == 0) {
        r.coeff = Cyclotomic(0);
        return r;
    }
    r.coeff = beta.coeff * Cyclotomic(sign);
    std::vector<bool> is_slot(nvars, false);
    for (unsigned c : sorted.indices()) is_slot[c] = true;
    for (unsigned c = 0; c < nvars; ++c) {
        if (is_slot[c])
            r.atoms.push_back(WordAtom::op1(nvars, gamma.component(c), c));
        else if (!gamma.phase(c).is_zero())
            r.atoms.push_back(
                WordAtom::scalar(Polynomial::constant(nvars, Cyclotomic(1)), gamma.component(c)));
    }
    return r;
}

} // namespace detail

/**
 * The side map of the homotopy retraction, applied to one normalized word.
 * Vanishing cases:
 *  (a) the last operator is second-order;
 *  (b) a second-order operator is followed by an ascending first-order run
 *      that one of its two variable indices extends;
 *  (c) the word is purely first-order with strictly ascending indices.
 * Otherwise the word must be purely first-order; it is split at the last
 * letter of its maximal ascending prefix and rewritten by the
 * contraction-composition identity plus a recursive call through the
 * comparison map.
 */
inline WordCochain word_hstar(const Word& w, unsigned nvars, int depth = 0) {
    if (depth > 64)
        throw UnsupportedWordError("rewriting recursion depth exceeded on: " + w.str());

    std::vector<size_t> opsPos;
    for (size_t k = 0; k < w.atoms.size(); ++k)
        if (w.atoms[k].is_op()) opsPos.push_back(k);
    const size_t p = opsPos.size();
    if (p <= 1) return {};

    // Locate the last second-order letter, if any.
    size_t lastOp2 = p;
    for (size_t k = 0; k < p; ++k)
        if (w.atoms[opsPos[k]].kind == WordAtom::Kind::Op2) lastOp2 = k;
    if (lastOp2 != p) {
        if (lastOp2 == p - 1) return {}; // (a)
        bool ascending = true;
        for (size_t k = lastOp2 + 2; k < p; ++k)
            if (w.atoms[opsPos[k - 1]].i >= w.atoms[opsPos[k]].i) ascending = false;
        const WordAtom& o2 = w.atoms[opsPos[lastOp2]];
        const unsigned first = w.atoms[opsPos[lastOp2 + 1]].i;
        if (ascending && (o2.i < first || o2.j < first)) return {}; // (b)
        throw UnsupportedWordError("inadmissible second-order word: " + w.str());
    }

    std::vector<unsigned> u(p);
    for (size_t k = 0; k < p; ++k) u[k] = w.atoms[opsPos[k]].i;

    // (c): strictly ascending pure first-order words are annihilated.
    size_t d = 0;
    for (size_t k = 1; k < p; ++k)
        if (u[k] <= u[k - 1]) {
            d = k;
            break;
        }
    if (d == 0) return {};

    // Tail after the split must itself ascend for the closed identity.
    for (size_t k = d + 1; k < p; ++k)
        if (u[k - 1] >= u[k])
            throw UnsupportedWordError("tail not ascending after split: " + w.str());

    const size_t split = opsPos[d - 1]; // atom index of the out-of-order letter
    std::vector<WordAtom> alpha(w.atoms.begin(),
                                w.atoms.begin() + static_cast<std::ptrdiff_t>(split));
    // Sign from commuting the side map past the prefix: one per operator
    // in front of the split letter.
    const Cyclotomic prefix_sign((d - 1) % 2 == 0 ? 1 : -1);

    // Collect the tail operators and interleaved markers of beta.
    const GroupElement lead_label = w.atoms[split].t1;
    const unsigned lead_idx = u[d - 1];
    std::vector<WordAtom> tail_ops;
    std::vector<detail::Marker> markers;
    for (size_t k = split + 1; k < w.atoms.size(); ++k) {
        const WordAtom& at = w.atoms[k];
        if (at.is_op()) {
            tail_ops.push_back(at);
        } else {
            if (!(at.poly == Polynomial::constant(nvars, Cyclotomic(1))))
                throw UnsupportedWordError("polynomial letter between operators: " + w.str());
            const auto mov = at.t1.moving();
            if (mov.size() != 1)
                throw UnsupportedWordError("non-elementary marker between operators: " + w.str());
            markers.push_back({mov[0], at.t1});
        }
    }

    WordCochain out;

    // Closed contraction-composition identity: one term per tail operator
    // whose index the split letter dominates.
    for (size_t l = 0; l < tail_ops.size(); ++l) {
        if (tail_ops[l].i > lead_idx) break;
        std::vector<WordAtom> seq;
        std::vector<unsigned> slot;
        for (size_t q = 0; q < tail_ops.size(); ++q) {
            if (q == l) {
                seq.push_back(WordAtom::op2(nvars, lead_label, tail_ops[l].t1, lead_idx,
                                            tail_ops[l].i));
            } else {
                seq.push_back(tail_ops[q]);
            }
            slot.push_back(tail_ops[q].i);
        }
        // Re-insert the markers in ascending position order.
        for (const auto& mk : markers) {
            size_t at = seq.size();
            bool merged = false;
            for (size_t q = 0; q < seq.size(); ++q) {
                if (!seq[q].is_op()) continue;
                const unsigned sq = (seq[q].kind == WordAtom::Kind::Op2) ? seq[q].j : seq[q].i;
                if (sq == mk.pos) {
                    if (seq[q].kind == WordAtom::Kind::Op2)
                        throw UnsupportedWordError("marker collides with second-order slot: " +
                                                   w.str());
                    seq[q].t1 = seq[q].t1 * mk.s;
                    merged = true;
                    break;
                }
                if (sq > mk.pos) {
                    at = q;
                    break;
                }
            }
            if (!merged)
                seq.insert(seq.begin() + static_cast<std::ptrdiff_t>(at),
                           WordAtom::scalar(Polynomial::constant(nvars, Cyclotomic(1)), mk.s));
        }
        Word term;
        term.coeff = -w.coeff * prefix_sign;
        term.atoms = alpha;
        term.atoms.insert(term.atoms.end(), seq.begin(), seq.end());
        Word nn = normalize_word(term, nvars);
        if (!word_is_zero(nn)) out.push_back(std::move(nn));
    }

    // Recursive branch through the comparison map.
    Word beta;
    beta.coeff = w.coeff;
    beta.atoms.assign(w.atoms.begin() + static_cast<std::ptrdiff_t>(split), w.atoms.end());
    Word reb = detail::ups_phi(beta, nvars);
    if (!reb.coeff.is_zero()) {
        Word rw;
        rw.coeff = reb.coeff;
        rw.atoms = alpha;
        rw.atoms.insert(rw.atoms.end(), reb.atoms.begin(), reb.atoms.end());
        Word nn = normalize_word(rw, nvars);
        if (!word_is_zero(nn)) {
            WordCochain rec = word_hstar(nn, nvars, depth + 1);
            out.insert(out.end(), rec.begin(), rec.end());
        }
    }
    return out;
}

// --------------------------------------------------------------------------
// Cup-product oracles
// --------------------------------------------------------------------------

/**
 * Full homotopy-retraction evaluation of the product of two Koszul
 * cochains landing in the untwisted sector: build the concatenated
 * operator word for every pair of terms, run arity/2 rounds of the side
 * map followed by potential insertion, and read off the residual
 * coefficient.  Every term pair must satisfy g*h = e.
 */
inline Polynomial retract_cup_oracle(const KoszulElement& a, const KoszulElement& b,
                                     const InvertiblePolynomial& ip, const JacobianRing& ring) {
    const unsigned nv = ip.nvars();
    const Polynomial& W = ip.poly();
    Polynomial total(nv);
    for (const auto& [ka, pa] : a.terms()) {
        for (const auto& [kb, pb] : b.terms()) {
            const GroupElement& g = ka.second;
            const GroupElement& h = kb.second;
            if (!(g * h).is_identity())
                throw NonIdentityTargetError("sector pair [" + g.str() + "], [" + h.str() + "]");
            Word wa = upsilon_word(pa, ka.first, g);
            Word wb = upsilon_word(pb, kb.first, h);
            Word w0;
            w0.coeff = Cyclotomic(1);
            w0.atoms = wa.atoms;
            w0.atoms.insert(w0.atoms.end(), wb.atoms.begin(), wb.atoms.end());
            Word w = normalize_word(w0, nv);
            if (word_is_zero(w)) continue;
            const unsigned m = w.arity();
            if (m % 2) continue; // odd layers do not reach the bottom of the projection
            const unsigned rounds = m / 2;
            WordCochain cur{w};
            for (unsigned r = 0; r < rounds; ++r) {
                WordCochain mid;
                for (const auto& x : cur) {
                    WordCochain hx = word_hstar(x, nv);
                    mid.insert(mid.end(), hx.begin(), hx.end());
                }
                WordCochain nxt;
                for (const auto& x : mid) {
                    WordCochain dx = word_dW(x, W);
                    nxt.insert(nxt.end(), dx.begin(), dx.end());
                }
                cur.swap(nxt);
            }
            Polynomial contrib(nv);
            for (const auto& x : cur) {
                if (x.arity() != 0)
                    throw UnsupportedWordError("residual operator after retraction: " + x.str());
                GroupElement sec = GroupElement::identity(nv);
                for (const auto& at : x.atoms) sec = sec * at.content();
                if (!sec.is_identity())
                    throw UnsupportedWordError("non-neutral residual word: " + x.str());
                contrib = contrib + x.coeff * x.atoms[0].poly;
            }
            if (rounds % 2) contrib = -contrib;
            total = total + contrib;
        }
    }
    return ring.normal_form(total);
}

/**
 * Closed matching-diagram summation for the same product: for each pair of
 * terms with exterior degrees p = q, sum over the assignments sigma with
 * j_{sigma(k)} <= i_k of the signed product of prefix-twisted second-order
 * values of W, times (-1)^{p(p-1)/2} and the twisted coefficient product.
 */
inline Polynomial graph_sum_cup(const KoszulElement& a, const KoszulElement& b,
                                const InvertiblePolynomial& ip, const JacobianRing& ring) {
    detail::single_ascending_atom(ip, "graph summation");
    const unsigned nv = ip.nvars();
    const Polynomial& W = ip.poly();
    const Cyclotomic one(1);
    Polynomial total(nv);
    for (const auto& [ka, pa] : a.terms()) {
        for (const auto& [kb, pb] : b.terms()) {
            const GroupElement& g = ka.second;
            const GroupElement& h = kb.second;
            if (!(g * h).is_identity())
                throw NonIdentityTargetError("sector pair [" + g.str() + "], [" + h.str() + "]");
            const auto& I = ka.first.indices();
            const auto& J = kb.first.indices();
            const size_t p = I.size();
            if (J.size() != p) continue; // mismatched degrees contribute nothing
            Polynomial sum(nv);
            std::vector<size_t> perm(p);
            std::vector<bool> used(p, false);
            // enumerate assignments sigma with J[perm[k]] <= I[k]
            std::function<void(size_t, int)> rec = [&](size_t k, int sign) {
                if (k == p) {
                    Polynomial prod = Polynomial::constant(nv, one);
                    for (size_t t = 0; t < p && !prod.is_zero(); ++t) {
                        const unsigned i = I[t];
                        const unsigned j = J[perm[t]];
                        Polynomial val = second_order_value(g, h, i, j, W);
                        if (j < i) val = group_action(g.component_range(j, i - 1), val);
                        prod = prod * val;
                    }
                    sum = sum + Cyclotomic(sign) * prod;
                    return;
                }
                for (size_t c = 0; c < p; ++c) {
                    if (used[c] || J[c] > I[k]) continue;
                    used[c] = true;
                    perm[k] = c;
                    // parity update: count inversions against already-fixed slots
                    int s = sign;
                    for (size_t t = 0; t < k; ++t)
                        if (perm[t] > c) s = -s;
                    rec(k + 1, s);
                    used[c] = false;
                }
            };
            rec(0, 1);
            if ((p * (p - 1) / 2) % 2) sum = -sum;
            total = total + pa * group_action(g, pb) * sum;
        }
    }
    return ring.normal_form(total);
}

// --------------------------------------------------------------------------
// Quantum Hessian determinant
// --------------------------------------------------------------------------

/// Square matrix of polynomials with exact determinant.
struct QuantumHessianMatrix {
    std::vector<std::vector<Polynomial>> h;

    unsigned size() const { return static_cast<unsigned>(h.size()); }

    Polynomial det() const {
        if (h.empty()) throw ValidationError("determinant of an empty matrix");
        const unsigned nv = h[0][0].nvars();
        std::vector<size_t> rows(h.size());
        for (size_t k = 0; k < rows.size(); ++k) rows[k] = k;
        return det_rec(rows, 0, nv);
    }

private:
    Polynomial det_rec(std::vector<size_t> rows, size_t col, unsigned nv) const {
        if (rows.size() == 1) return h[rows[0]][col];
        Polynomial d(nv);
        for (size_t k = 0; k < rows.size(); ++k) {
            const Polynomial& e = h[rows[k]][col];
            if (e.is_zero()) continue;
            std::vector<size_t> rest;
            rest.reserve(rows.size() - 1);
            for (size_t t = 0; t < rows.size(); ++t)
                if (t != k) rest.push_back(rows[t]);
            Polynomial sub = e * det_rec(std::move(rest), col + 1, nv);
            d = (k % 2 == 0) ? d + sub : d - sub;
        }
        return d;
    }
};

/**
 * The quantum Hessian matrix of a single-atom W at g != e: diagonal
 * entries are the pure second-order values on W; off-diagonal entries are
 * the closed side coefficients, with the two wrap-around corners of a loop
 * accumulated onto the neighbouring entries when N = 2.
 */
inline QuantumHessianMatrix quantum_hessian_matrix(const InvertiblePolynomial& ip,
                                                   const GroupElement& g) {
    if (g.is_identity()) throw IdentityElementError("quantum Hessian of the untwisted sector");
    if (!ip.admits(g))
        throw ValidationError("quantum Hessian: group element does not preserve W");
    const Atom& atom = detail::single_ascending_atom(ip, "quantum Hessian");
    const unsigned nv = ip.nvars();
    const unsigned Na = static_cast<unsigned>(atom.vars.size());
    const Cyclotomic one(1);

    auto lam = [&](unsigned t) { return g.eigenvalue(atom.vars[t - 1]); }; // 1-based
    auto xpow = [&](unsigned t, unsigned e) {
        return Polynomial::variable(nv, atom.vars[t - 1], e);
    };

    // Diagonal: ((n_t)_q - n_t)/(lambda_t - 1) x_t^{n_t-2} (x_{t+1}),
    // with the trailing variable taken from the monomial of W at t.
    auto diag = [&](unsigned t, bool trailing) {
        const unsigned n = atom.exps[t - 1];
        Cyclotomic c = (quantum_bracket(n, lam(t)) - Cyclotomic(static_cast<long>(n))) *
                       (lam(t) - one).inverse();
        if (n < 2) return Polynomial::zero(nv); // cannot occur for invertible atoms
        Polynomial e = c * xpow(t, n - 2);
        if (trailing) {
            const unsigned nxt = (t == Na) ? 1 : t + 1;
            e = e * xpow(nxt, 1);
        }
        return e;
    };
    auto upper = [&](unsigned t) { // side value with both letters from the first factor
        const unsigned n = atom.exps[t - 1];
        return (lam(t).pow(n) * (one - lam(t)).inverse()) * xpow(t, n - 1);
    };
    auto lower = [&](unsigned t) { // side value with both letters from the second factor
        const unsigned n = atom.exps[t - 1];
        return (-(one - lam(t)).inverse()) * xpow(t, n - 1);
    };

    QuantumHessianMatrix M;

    if (atom.type == Atom::Type::Fermat) {
        M.h.assign(1, std::vector<Polynomial>(1, diag(1, false)));
        return M;
    }

    if (atom.type == Atom::Type::Loop) {
        const unsigned l = ip.moving_length(g, atom); // validates all-or-nothing
        (void)l;
        M.h.assign(Na, std::vector<Polynomial>(Na, Polynomial::zero(nv)));
        for (unsigned t = 1; t <= Na; ++t) M.h[t - 1][t - 1] = diag(t, true);
        for (unsigned t = 1; t + 1 <= Na; ++t) {
            M.h[t - 1][t] = M.h[t - 1][t] + upper(t);
            M.h[t][t - 1] = M.h[t][t - 1] + lower(t);
        }
        // wrap-around corners
        const unsigned nN = atom.exps[Na - 1];
        Polynomial cornerUpper =
            (Cyclotomic((Na % 2) ? 1 : -1) * (one - lam(Na)).inverse()) * xpow(Na, nN - 1);
        Polynomial cornerLower =
            (Cyclotomic((Na % 2) ? -1 : 1) * lam(Na).pow(nN) * (one - lam(Na)).inverse()) *
            xpow(Na, nN - 1);
        M.h[0][Na - 1] = M.h[0][Na - 1] + cornerUpper;
        M.h[Na - 1][0] = M.h[Na - 1][0] + cornerLower;
        return M;
    }

    // Chain: tridiagonal of size the moving length.
    const unsigned l = ip.moving_length(g, atom);
    if (l == 0) throw IdentityElementError("quantum Hessian: element fixes the atom");
    M.h.assign(l, std::vector<Polynomial>(l, Polynomial::zero(nv)));
    for (unsigned t = 1; t <= l; ++t) M.h[t - 1][t - 1] = diag(t, t < Na);
    for (unsigned t = 1; t + 1 <= l; ++t) {
        M.h[t - 1][t] = upper(t);
        M.h[t][t - 1] = lower(t);
    }
    return M;
}

/// Determinant route to the product of twisted sector generators:
/// (-1)^{l(l-1)/2} det of the quantum Hessian matrix, as a class in
/// Jac(W).
inline Polynomial det_quantum_hess(const InvertiblePolynomial& ip, const GroupElement& g,
                                   const JacobianRing& ring) {
    QuantumHessianMatrix M = quantum_hessian_matrix(ip, g);
    Polynomial d = M.det();
    const unsigned l = M.size();
    if ((l * (l - 1) / 2) % 2) d = -d;
    return ring.normal_form(d);
}

} // namespace orbifrob

#endif
