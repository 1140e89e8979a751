/**
 * @file milnor.hpp
 * @brief Graded Jacobian rings of quasihomogeneous polynomials, exactly.
 *
 * Jac(W) = k[x_1..x_N] / (dW/dx_1, ..., dW/dx_N) for a quasihomogeneous W
 * with an isolated critical point at the origin.  The quotient is computed
 * one weighted degree at a time by exact row reduction, giving a monomial
 * basis, normal forms, the Milnor number, the socle, and the residue
 * pairing normalised by Res(hess W) = mu.
 */
#ifndef ORBIFROB_MILNOR_HPP
#define ORBIFROB_MILNOR_HPP

#include <algorithm>
#include <functional>
#include <set>

#include "orbifrob/polynomial.hpp"

namespace orbifrob {

/// Determinant of the matrix of second partials, by cofactor expansion.
inline Polynomial hessian_det(const Polynomial& w) {
    const unsigned n = w.nvars();
    std::vector<std::vector<Polynomial>> H(n, std::vector<Polynomial>(n, Polynomial(n)));
    for (unsigned i = 0; i < n; ++i)
        for (unsigned j = 0; j < n; ++j) H[i][j] = w.partial(i).partial(j);

    std::vector<unsigned> cols(n);
    for (unsigned j = 0; j < n; ++j) cols[j] = j;
    std::function<Polynomial(unsigned, std::vector<unsigned>&)> det =
        [&](unsigned row, std::vector<unsigned>& cs) -> Polynomial {
        if (cs.empty()) return Polynomial::constant(n, Cyclotomic(Rational(1)));
        Polynomial acc(n);
        for (size_t k = 0; k < cs.size(); ++k) {
            unsigned c = cs[k];
            if (H[row][c].is_zero()) continue;
            std::vector<unsigned> rest;
            rest.reserve(cs.size() - 1);
            for (size_t l = 0; l < cs.size(); ++l)
                if (l != k) rest.push_back(cs[l]);
            Polynomial sub = det(row + 1, rest);
            Polynomial term = H[row][c] * sub;
            if (k % 2) acc -= term;
            else acc += term;
        }
        return acc;
    };
    return det(0, cols);
}

class JacobianRing {
public:
    /// W quasihomogeneous of total weighted degree 1 under `weights`
    /// (each term is checked).  A zero-variable W gives the ground field.
    JacobianRing(Polynomial w, std::vector<Rational> weights)
        : n_(w.nvars()), w_(std::move(w)), q_(std::move(weights)) {
        if (q_.size() != n_) throw ValidationError("weight count does not match variable count");
        for (const auto& q : q_)
            if (!(q > Rational(0)))
                throw ValidationError("weights must be positive, got " + q.str());
        for (const auto& [m, c] : w_.terms()) {
            if (weighted_degree(m, q_) != Rational(1))
                throw ValidationError("W is not quasihomogeneous of degree 1: term " +
                                      Polynomial::monomial(n_, m).str() + " has degree " +
                                      weighted_degree(m, q_).str());
        }
        socle_degree_ = Rational(0);
        for (const auto& q : q_) socle_degree_ += Rational(1) - Rational(2) * q;
        for (unsigned i = 0; i < n_; ++i) dw_.push_back(w_.partial(i));

        check_isolated();
        collect_basis();
        prepare_residue();
    }

    unsigned nvars() const { return n_; }
    const Polynomial& w() const { return w_; }
    const std::vector<Rational>& weights() const { return q_; }
    Rational socle_degree() const { return socle_degree_; }

    /// Milnor number = dim Jac(W).
    unsigned mu() const { return static_cast<unsigned>(basis_.size()); }

    /// Monomial basis of Jac(W), sorted by weighted degree then revlex.
    const std::vector<Monomial>& basis() const { return basis_; }

    /// The unique basis monomial of top (socle) weighted degree.
    const Monomial& socle_monomial() const { return socle_monomial_; }

    /// Normal form: the canonical representative supported on the basis.
    Polynomial normal_form(const Polynomial& f) const {
        if (f.nvars() != n_) throw ValidationError("normal_form: variable count mismatch");
        // split into weighted-homogeneous layers
        std::map<Rational, Polynomial> layers;
        for (const auto& [m, c] : f.terms()) {
            auto [it, fresh] = layers.try_emplace(weighted_degree(m, q_), Polynomial(n_));
            it->second.add_term(m, c);
        }
        Polynomial out(n_);
        for (auto& [deg, layer] : layers) {
            if (deg > socle_degree_) continue; // isolated: everything above the socle dies
            out += reduce_homogeneous(deg, layer);
        }
        return out;
    }

    /// Residue functional, normalised so that residue(hess W) = mu.
    Cyclotomic residue(const Polynomial& f) const {
        Polynomial nf = normal_form(f);
        Cyclotomic c = nf.coeff(socle_monomial_);
        return c * residue_scale_;
    }

    /// Residue pairing <f, g> = residue(f * g).
    Cyclotomic pairing(const Polynomial& f, const Polynomial& g) const {
        return residue(f * g);
    }

private:
    struct Slice {
        std::vector<Monomial> monomials;      // all monomials of this degree, sorted
        std::map<Monomial, size_t> index;
        std::vector<std::vector<Rational>> rows; // RREF of the Jacobian-ideal slice
        std::vector<size_t> pivot;               // pivot column of each row
        std::vector<size_t> pivot_row;            // column -> row index or npos
        std::vector<Monomial> quotient;           // non-pivot monomials
    };
    static constexpr size_t npos = static_cast<size_t>(-1);

    void monomials_of_degree(const Rational& deg, std::vector<Monomial>& out) const {
        Monomial cur(n_, 0u);
        std::function<void(unsigned, Rational)> rec = [&](unsigned i, Rational rem) {
            if (rem < Rational(0)) return;
            if (i == n_) {
                if (rem.is_zero()) out.push_back(cur);
                return;
            }
            Rational used(0);
            for (unsigned e = 0;; ++e) {
                if (used > rem) break;
                cur[i] = e;
                rec(i + 1, rem - used);
                used += q_[i];
            }
            cur[i] = 0;
        };
        rec(0, deg);
        std::sort(out.begin(), out.end(),
                  [&](const Monomial& a, const Monomial& b) { return weighted_revlex_less(a, b, q_); });
    }

    const Slice& slice(const Rational& deg) const {
        auto it = slices_.find(deg);
        if (it != slices_.end()) return it->second;
        Slice s;
        monomials_of_degree(deg, s.monomials);
        for (size_t k = 0; k < s.monomials.size(); ++k) s.index.emplace(s.monomials[k], k);
        s.pivot_row.assign(s.monomials.size(), npos);

        // Ideal slice: m * dW_i for wdeg(m) = deg - (1 - q_i).
        for (unsigned i = 0; i < n_; ++i) {
            if (dw_[i].is_zero()) continue;
            Rational mdeg = deg - (Rational(1) - q_[i]);
            if (mdeg < Rational(0)) continue;
            std::vector<Monomial> ms;
            monomials_of_degree(mdeg, ms);
            for (const auto& m : ms) {
                std::vector<Rational> row(s.monomials.size(), Rational(0));
                for (const auto& [mm, c] : dw_[i].terms()) {
                    Monomial prod(n_);
                    for (unsigned v = 0; v < n_; ++v) prod[v] = m[v] + mm[v];
                    auto r = c.as_rational();
                    if (!r) throw ValidationError("Jacobian generators must have rational coefficients");
                    row[s.index.at(prod)] += *r;
                }
                insert_row(s, std::move(row));
            }
        }
        for (size_t k = 0; k < s.monomials.size(); ++k)
            if (s.pivot_row[k] == npos) s.quotient.push_back(s.monomials[k]);
        return slices_.emplace(deg, std::move(s)).first->second;
    }

    static void insert_row(Slice& s, std::vector<Rational> row) {
        // Full RREF invariant: every pivot column is 1 in its own row and 0
        // everywhere else.  First clear the new row at every existing pivot.
        for (size_t r = 0; r < s.rows.size(); ++r) {
            size_t p = s.pivot[r];
            Rational f = row[p];
            if (f.is_zero()) continue;
            const auto& other = s.rows[r];
            for (size_t k = p; k < row.size(); ++k) row[k] -= f * other[k];
        }
        size_t lead = npos;
        for (size_t k = 0; k < row.size(); ++k)
            if (!row[k].is_zero()) { lead = k; break; }
        if (lead == npos) return;
        // normalise and back-substitute into existing rows
        Rational inv = Rational(1) / row[lead];
        for (size_t k = lead; k < row.size(); ++k) row[k] *= inv;
        for (size_t r = 0; r < s.rows.size(); ++r) {
            Rational f = s.rows[r][lead];
            if (f.is_zero()) continue;
            for (size_t k = lead; k < row.size(); ++k) s.rows[r][k] -= f * row[k];
        }
        s.pivot_row[lead] = s.rows.size();
        s.pivot.push_back(lead);
        s.rows.push_back(std::move(row));
    }

    Polynomial reduce_homogeneous(const Rational& deg, const Polynomial& f) const {
        const Slice& s = slice(deg);
        std::vector<Cyclotomic> vec(s.monomials.size());
        for (const auto& [m, c] : f.terms()) vec[s.index.at(m)] += c;
        for (size_t r = 0; r < s.rows.size(); ++r) {
            Cyclotomic c = vec[s.pivot[r]];
            if (c.is_zero()) continue;
            for (size_t k = s.pivot[r]; k < vec.size(); ++k) {
                if (s.rows[r][k].is_zero()) continue;
                vec[k] -= c * Cyclotomic(s.rows[r][k]);
            }
        }
        Polynomial out(n_);
        for (size_t k = 0; k < vec.size(); ++k)
            if (!vec[k].is_zero()) out.add_term(s.monomials[k], vec[k]);
        return out;
    }

    void check_isolated() {
        // Isolated critical point iff a power of every variable lies in the
        // ideal; by quasihomogeneity it is enough to test the first power
        // whose weighted degree exceeds the socle degree.
        for (unsigned i = 0; i < n_; ++i) {
            unsigned k = 1;
            while (Rational(static_cast<long>(k)) * q_[i] <= socle_degree_) ++k;
            Polynomial p = Polynomial::variable(n_, i, k);
            if (!reduce_homogeneous(Rational(static_cast<long>(k)) * q_[i], p).is_zero())
                throw NonIsolatedError("critical point is not isolated: x" + std::to_string(i + 1) +
                                       "^" + std::to_string(k) + " survives in the quotient");
        }
    }

    void collect_basis() {
        // All monomials of weighted degree <= socle degree, grouped by degree.
        std::vector<Monomial> all;
        Monomial cur(n_, 0u);
        std::function<void(unsigned, Rational)> rec = [&](unsigned i, Rational rem) {
            if (rem < Rational(0)) return;
            if (i == n_) { all.push_back(cur); return; }
            Rational used(0);
            for (unsigned e = 0;; ++e) {
                if (used > rem) break;
                cur[i] = e;
                rec(i + 1, rem - used);
                used += q_[i];
            }
            cur[i] = 0;
        };
        rec(0, socle_degree_);

        std::set<Rational> degrees;
        for (const auto& m : all) degrees.insert(weighted_degree(m, q_));
        for (const auto& d : degrees) {
            const Slice& s = slice(d);
            for (const auto& m : s.quotient) basis_.push_back(m);
        }
        std::sort(basis_.begin(), basis_.end(),
                  [&](const Monomial& a, const Monomial& b) { return weighted_revlex_less(a, b, q_); });

        const Slice& top = slice(socle_degree_);
        if (top.quotient.size() != 1)
            throw ValidationError("socle is not one-dimensional (found " +
                                  std::to_string(top.quotient.size()) + " monomials)");
        socle_monomial_ = top.quotient.front();
    }

    void prepare_residue() {
        // Normalise against the Hessian: residue(hess W) = mu.
        Polynomial h = hessian_det(w_);
        Polynomial nf = normal_form(h);
        Cyclotomic lead = nf.coeff(socle_monomial_);
        if (lead.is_zero())
            throw ValidationError("Hessian determinant vanishes in the socle");
        // nf should be exactly lead * socle monomial (top degree is 1-dim)
        residue_scale_ = Cyclotomic(Rational(static_cast<long>(basis_.size()))) * lead.inverse();
    }

    unsigned n_;
    Polynomial w_;
    std::vector<Rational> q_;
    std::vector<Polynomial> dw_;
    Rational socle_degree_;
    std::vector<Monomial> basis_;
    Monomial socle_monomial_;
    Cyclotomic residue_scale_;
    mutable std::map<Rational, Slice> slices_;
};

} // namespace orbifrob

#endif
