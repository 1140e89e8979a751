#pragma once

// Finite-dimensional algebra laboratory for group-twisted Hochschild cochains:
// brace operations, Hochschild/curving differentials, cup products, the
// comparison map into the crossed product, a randomized identity suite, and
// exact cohomology dimension computations.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cyclotomic.hpp"
#include "error.hpp"
#include "rational.hpp"

namespace orbifrob {

using AlgebraVec = std::vector<Cyclotomic>;
using AlgebraMat = std::vector<std::vector<Cyclotomic>>;

namespace blab_detail {

inline bool vec_is_zero(const AlgebraVec& v) {
    for (const auto& c : v)
        if (!c.is_zero()) return false;
    return true;
}

inline bool vec_eq(const AlgebraVec& a, const AlgebraVec& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!(a[i] == b[i])) return false;
    return true;
}

inline void vec_add_scaled(AlgebraVec& acc, const Cyclotomic& c, const AlgebraVec& v) {
    for (std::size_t i = 0; i < acc.size(); ++i)
        if (!v[i].is_zero()) acc[i] = acc[i] + c * v[i];
}

inline AlgebraVec mat_apply(const AlgebraMat& m, const AlgebraVec& v) {
    AlgebraVec out(m.size(), Cyclotomic());
    for (std::size_t r = 0; r < m.size(); ++r)
        for (std::size_t c = 0; c < v.size(); ++c)
            if (!m[r][c].is_zero() && !v[c].is_zero()) out[r] = out[r] + m[r][c] * v[c];
    return out;
}

inline AlgebraMat mat_mul(const AlgebraMat& a, const AlgebraMat& b) {
    std::size_t n = a.size();
    AlgebraMat out(n, AlgebraVec(n, Cyclotomic()));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            if (a[i][k].is_zero()) continue;
            for (std::size_t j = 0; j < n; ++j)
                if (!b[k][j].is_zero()) out[i][j] = out[i][j] + a[i][k] * b[k][j];
        }
    return out;
}

inline bool mat_eq(const AlgebraMat& a, const AlgebraMat& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!vec_eq(a[i], b[i])) return false;
    return true;
}

inline AlgebraMat mat_identity(std::size_t n) {
    AlgebraMat m(n, AlgebraVec(n, Cyclotomic()));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = Cyclotomic(1);
    return m;
}

}  // namespace blab_detail

// An associative unital algebra of finite dimension over the cyclotomic
// field, given by structure constants, together with a finite group of
// algebra automorphisms (as matrices on the chosen basis) and an optional
// central group-invariant curving element.
class FiniteAlgebra {
public:
    FiniteAlgebra(unsigned dim,
                  std::vector<std::vector<AlgebraVec>> products,
                  AlgebraVec unit,
                  std::optional<AlgebraVec> curving,
                  std::vector<AlgebraMat> group)
        : dim_(dim),
          products_(std::move(products)),
          unit_(std::move(unit)),
          curving_(std::move(curving)),
          group_(std::move(group)) {
        validate_shapes();
        build_group_tables();
        build_column_cache();
        validate_algebra();
        validate_group_action();
        validate_curving();
    }

    unsigned dim() const { return dim_; }
    std::size_t group_size() const { return group_.size(); }
    const AlgebraVec& unit() const { return unit_; }
    bool has_curving() const { return curving_.has_value(); }

    const AlgebraVec& curving() const {
        if (!curving_) throw MissingCurvingError("algebra has no curving element");
        return *curving_;
    }

    AlgebraVec basis_vector(unsigned i) const {
        AlgebraVec v(dim_, Cyclotomic());
        v[i] = Cyclotomic(1);
        return v;
    }

    AlgebraVec mul(const AlgebraVec& a, const AlgebraVec& b) const {
        AlgebraVec out(dim_, Cyclotomic());
        for (unsigned i = 0; i < dim_; ++i) {
            if (a[i].is_zero()) continue;
            for (unsigned j = 0; j < dim_; ++j) {
                if (b[j].is_zero()) continue;
                blab_detail::vec_add_scaled(out, a[i] * b[j], products_[i][j]);
            }
        }
        return out;
    }

    const AlgebraMat& group_matrix(unsigned g) const { return group_.at(g); }

    AlgebraVec act(unsigned g, const AlgebraVec& v) const {
        if (g == identity_index_) return v;
        return blab_detail::mat_apply(group_[g], v);
    }

    // Column of the acting matrix: the action applied to a basis vector.
    const AlgebraVec& act_basis(unsigned g, unsigned i) const { return columns_[g][i]; }

    unsigned group_mul(unsigned a, unsigned b) const { return table_[a][b]; }
    unsigned group_inverse(unsigned a) const { return inverse_[a]; }
    unsigned group_identity() const { return identity_index_; }

    // Truncated polynomial algebra k[x]/(x^n) with the cyclic group of the
    // given order acting by x -> zeta x, optionally curved by x^power (zero
    // when the power is at or above the truncation).
    static FiniteAlgebra truncated_polynomial(unsigned n, unsigned group_order,
                                              std::optional<unsigned> curving_power) {
        if (n == 0 || group_order == 0)
            throw ValidationError("truncated polynomial algebra needs positive dimension and group order");
        std::vector<std::vector<AlgebraVec>> prod(n, std::vector<AlgebraVec>(n, AlgebraVec(n, Cyclotomic())));
        for (unsigned i = 0; i < n; ++i)
            for (unsigned j = 0; j < n; ++j)
                if (i + j < n) prod[i][j][i + j] = Cyclotomic(1);
        AlgebraVec unit(n, Cyclotomic());
        unit[0] = Cyclotomic(1);
        std::optional<AlgebraVec> curv;
        if (curving_power) {
            AlgebraVec w(n, Cyclotomic());
            if (*curving_power < n) w[*curving_power] = Cyclotomic(1);
            curv = std::move(w);
        }
        std::vector<AlgebraMat> grp;
        for (unsigned k = 0; k < group_order; ++k) {
            AlgebraMat m(n, AlgebraVec(n, Cyclotomic()));
            for (unsigned t = 0; t < n; ++t) {
                long e = static_cast<long>(k) * static_cast<long>(t) % static_cast<long>(group_order);
                m[t][t] = Cyclotomic::root_of_unity(Rational(e, static_cast<long>(group_order)));
            }
            grp.push_back(std::move(m));
        }
        return FiniteAlgebra(n, std::move(prod), std::move(unit), std::move(curv), std::move(grp));
    }

private:
    void validate_shapes() const {
        if (dim_ == 0) throw ValidationError("algebra dimension must be positive");
        if (products_.size() != dim_) throw ValidationError("structure constant table has wrong shape");
        for (const auto& row : products_) {
            if (row.size() != dim_) throw ValidationError("structure constant table has wrong shape");
            for (const auto& v : row)
                if (v.size() != dim_) throw ValidationError("structure constant value has wrong dimension");
        }
        if (unit_.size() != dim_) throw ValidationError("unit vector has wrong dimension");
        if (curving_ && curving_->size() != dim_) throw ValidationError("curving vector has wrong dimension");
        if (group_.empty()) throw ValidationError("group list must not be empty");
        for (const auto& m : group_) {
            if (m.size() != dim_) throw ValidationError("group matrix has wrong shape");
            for (const auto& row : m)
                if (row.size() != dim_) throw ValidationError("group matrix has wrong shape");
        }
    }

    void build_group_tables() {
        const std::size_t n = group_.size();
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b)
                if (blab_detail::mat_eq(group_[a], group_[b]))
                    throw ValidationError("duplicate group matrices");
        AlgebraMat id = blab_detail::mat_identity(dim_);
        bool found_id = false;
        for (std::size_t a = 0; a < n; ++a)
            if (blab_detail::mat_eq(group_[a], id)) {
                identity_index_ = static_cast<unsigned>(a);
                found_id = true;
                break;
            }
        if (!found_id) throw ValidationError("group list does not contain the identity matrix");
        table_.assign(n, std::vector<unsigned>(n, 0));
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) {
                AlgebraMat p = blab_detail::mat_mul(group_[a], group_[b]);
                bool found = false;
                for (std::size_t c = 0; c < n; ++c)
                    if (blab_detail::mat_eq(p, group_[c])) {
                        table_[a][b] = static_cast<unsigned>(c);
                        found = true;
                        break;
                    }
                if (!found) throw ValidationError("group list is not closed under multiplication");
            }
        inverse_.assign(n, 0);
        for (std::size_t a = 0; a < n; ++a) {
            bool found = false;
            for (std::size_t b = 0; b < n; ++b)
                if (table_[a][b] == identity_index_ && table_[b][a] == identity_index_) {
                    inverse_[a] = static_cast<unsigned>(b);
                    found = true;
                    break;
                }
            if (!found) throw ValidationError("group element has no inverse in the list");
        }
    }

    void validate_algebra() const {
        for (unsigned i = 0; i < dim_; ++i) {
            if (!blab_detail::vec_eq(mul(unit_, basis_vector(i)), basis_vector(i)) ||
                !blab_detail::vec_eq(mul(basis_vector(i), unit_), basis_vector(i)))
                throw ValidationError("unit vector fails the unit laws");
        }
        for (unsigned i = 0; i < dim_; ++i)
            for (unsigned j = 0; j < dim_; ++j)
                for (unsigned k = 0; k < dim_; ++k) {
                    AlgebraVec lhs = mul(products_[i][j], basis_vector(k));
                    AlgebraVec rhs = mul(basis_vector(i), products_[j][k]);
                    if (!blab_detail::vec_eq(lhs, rhs))
                        throw ValidationError("structure constants are not associative");
                }
    }

    void validate_group_action() const {
        for (std::size_t g = 0; g < group_.size(); ++g) {
            if (!blab_detail::vec_eq(act(static_cast<unsigned>(g), unit_), unit_))
                throw ValidationError("group action does not fix the unit");
            for (unsigned i = 0; i < dim_; ++i)
                for (unsigned j = 0; j < dim_; ++j) {
                    AlgebraVec lhs = act(static_cast<unsigned>(g), products_[i][j]);
                    AlgebraVec rhs = mul(act_basis(static_cast<unsigned>(g), i),
                                         act_basis(static_cast<unsigned>(g), j));
                    if (!blab_detail::vec_eq(lhs, rhs))
                        throw ValidationError("group matrix is not an algebra automorphism");
                }
        }
    }

    void validate_curving() const {
        if (!curving_) return;
        for (unsigned i = 0; i < dim_; ++i)
            if (!blab_detail::vec_eq(mul(*curving_, basis_vector(i)), mul(basis_vector(i), *curving_)))
                throw ValidationError("curving element is not central");
        for (std::size_t g = 0; g < group_.size(); ++g)
            if (!blab_detail::vec_eq(act(static_cast<unsigned>(g), *curving_), *curving_))
                throw NotInvariantError("curving element is not fixed by the group action");
    }

    void build_column_cache() {
        columns_.assign(group_.size(), std::vector<AlgebraVec>(dim_));
        for (std::size_t g = 0; g < group_.size(); ++g)
            for (unsigned i = 0; i < dim_; ++i) {
                AlgebraVec col(dim_, Cyclotomic());
                for (unsigned r = 0; r < dim_; ++r) col[r] = group_[g][r][i];
                columns_[g][i] = std::move(col);
            }
    }

    unsigned dim_;
    std::vector<std::vector<AlgebraVec>> products_;
    AlgebraVec unit_;
    std::optional<AlgebraVec> curving_;
    std::vector<AlgebraMat> group_;
    std::vector<std::vector<unsigned>> table_;
    std::vector<unsigned> inverse_;
    std::vector<std::vector<AlgebraVec>> columns_;
    unsigned identity_index_ = 0;
};

// A multilinear map from tensor powers of the algebra into the algebra,
// carrying a group sector label: the cochain phi equals its underlying map
// followed by the sector marker. Stored as a dense tensor over the basis,
// first input slot varying fastest.
class TwistedCochain {
public:
    TwistedCochain(const FiniteAlgebra& algebra, unsigned arity, unsigned sector)
        : algebra_(&algebra), arity_(arity), sector_(sector) {
        if (sector >= algebra.group_size()) throw ValidationError("sector index out of range");
        std::size_t n = 1;
        for (unsigned i = 0; i < arity; ++i) n *= algebra.dim();
        values_.assign(n, AlgebraVec(algebra.dim(), Cyclotomic()));
    }

    const FiniteAlgebra& algebra() const { return *algebra_; }
    unsigned arity() const { return arity_; }
    unsigned sector() const { return sector_; }
    std::size_t tensor_size() const { return values_.size(); }

    AlgebraVec& at(std::size_t flat) { return values_.at(flat); }
    const AlgebraVec& at(std::size_t flat) const { return values_.at(flat); }

    bool is_zero() const {
        for (const auto& v : values_)
            if (!blab_detail::vec_is_zero(v)) return false;
        return true;
    }

    // Multilinear evaluation on arbitrary algebra elements.
    AlgebraVec evaluate(const std::vector<AlgebraVec>& inputs) const {
        if (inputs.size() != arity_) throw ValidationError("cochain evaluated at wrong number of arguments");
        std::vector<const AlgebraVec*> ptrs(inputs.size());
        for (std::size_t i = 0; i < inputs.size(); ++i) ptrs[i] = &inputs[i];
        return evaluate_ptr(ptrs);
    }

    AlgebraVec evaluate_ptr(const std::vector<const AlgebraVec*>& inputs) const {
        if (inputs.size() != arity_) throw ValidationError("cochain evaluated at wrong number of arguments");
        AlgebraVec out(algebra_->dim(), Cyclotomic());
        evaluate_rec(inputs, 0, 0, 1, Cyclotomic(1), out);
        return out;
    }

    TwistedCochain operator+(const TwistedCochain& o) const {
        require_same_shape(o);
        TwistedCochain r(*this);
        for (std::size_t f = 0; f < values_.size(); ++f)
            for (unsigned i = 0; i < algebra_->dim(); ++i)
                r.values_[f][i] = r.values_[f][i] + o.values_[f][i];
        return r;
    }

    TwistedCochain operator-(const TwistedCochain& o) const {
        require_same_shape(o);
        TwistedCochain r(*this);
        for (std::size_t f = 0; f < values_.size(); ++f)
            for (unsigned i = 0; i < algebra_->dim(); ++i)
                r.values_[f][i] = r.values_[f][i] - o.values_[f][i];
        return r;
    }

    TwistedCochain operator-() const { return scaled(Cyclotomic(-1)); }

    TwistedCochain scaled(const Cyclotomic& c) const {
        TwistedCochain r(*this);
        for (auto& v : r.values_)
            for (auto& e : v) e = c * e;
        return r;
    }

    bool operator==(const TwistedCochain& o) const {
        if (arity_ != o.arity_ || sector_ != o.sector_) return false;
        for (std::size_t f = 0; f < values_.size(); ++f)
            if (!blab_detail::vec_eq(values_[f], o.values_[f])) return false;
        return true;
    }

    // The multiplication cochain: arity two, identity sector.
    static TwistedCochain product_cochain(const FiniteAlgebra& a) {
        TwistedCochain m(a, 2, a.group_identity());
        for (unsigned i = 0; i < a.dim(); ++i)
            for (unsigned j = 0; j < a.dim(); ++j)
                m.at(i + static_cast<std::size_t>(j) * a.dim()) =
                    a.mul(a.basis_vector(i), a.basis_vector(j));
        return m;
    }

    // The curving cochain: arity zero, identity sector.
    static TwistedCochain curving_cochain(const FiniteAlgebra& a) {
        TwistedCochain m(a, 0, a.group_identity());
        m.at(0) = a.curving();
        return m;
    }

private:
    void require_same_shape(const TwistedCochain& o) const {
        if (algebra_ != o.algebra_ || arity_ != o.arity_ || sector_ != o.sector_)
            throw ValidationError("cochain shapes do not match");
    }

    void evaluate_rec(const std::vector<const AlgebraVec*>& inputs, unsigned slot,
                      std::size_t flat, std::size_t stride, const Cyclotomic& coeff,
                      AlgebraVec& out) const {
        if (slot == arity_) {
            blab_detail::vec_add_scaled(out, coeff, values_[flat]);
            return;
        }
        const AlgebraVec& in = *inputs[slot];
        for (unsigned i = 0; i < algebra_->dim(); ++i) {
            if (in[i].is_zero()) continue;
            evaluate_rec(inputs, slot + 1, flat + stride * i, stride * algebra_->dim(),
                         coeff * in[i], out);
        }
    }

    const FiniteAlgebra* algebra_;
    unsigned arity_;
    unsigned sector_;
    std::vector<AlgebraVec> values_;
};

// Equality that also identifies zero cochains of different shapes.
inline bool cochains_equal(const TwistedCochain& a, const TwistedCochain& b) {
    if (a.is_zero() && b.is_zero()) return true;
    return a == b;
}

// The brace operation. Inserts the values of the argument cochains into the
// slots of the outer cochain in all order-preserving ways; arguments past an
// inserted block are twisted by the accumulated sectors of the blocks already
// passed, and the result carries sector g * g_k * ... * g_1.
inline TwistedCochain brace(const TwistedCochain& phi, const std::vector<TwistedCochain>& args) {
    const FiniteAlgebra& A = phi.algebra();
    for (const auto& a : args)
        if (&a.algebra() != &A) throw ValidationError("brace arguments live on different algebras");
    const unsigned p = phi.arity();
    const unsigned k = static_cast<unsigned>(args.size());

    unsigned descending = A.group_identity();
    for (unsigned j = k; j >= 1; --j) descending = A.group_mul(descending, args[j - 1].sector());
    const unsigned out_sector = A.group_mul(phi.sector(), descending);

    long total_args = static_cast<long>(p) - static_cast<long>(k);
    for (const auto& a : args) total_args += static_cast<long>(a.arity());
    const unsigned n = total_args > 0 ? static_cast<unsigned>(total_args) : 0;

    TwistedCochain out(A, n, out_sector);
    if (k > p) return out;
    if (k == 0) return phi;

    const unsigned d = A.dim();
    std::size_t tensor = out.tensor_size();

    // Enumerate slot choices s_1 < ... < s_k inside {1..p}.
    std::vector<unsigned> s(k);
    for (unsigned j = 0; j < k; ++j) s[j] = j + 1;
    while (true) {
        // Sign from the output positions of the inserted blocks.
        long sign_exp = 0;
        {
            long before = 0;
            for (unsigned j = 0; j < k; ++j) {
                long ij = static_cast<long>(s[j]) - static_cast<long>(j + 1) + before + 1;
                sign_exp += (ij - 1) * (static_cast<long>(args[j].arity()) - 1);
                before += static_cast<long>(args[j].arity());
            }
        }
        const bool negative = (sign_exp % 2 + 2) % 2 == 1;

        // Twist carried at each slot, and the argument cochains evaluated on
        // twisted basis tuples once per slot choice.
        std::vector<unsigned> slot_twist(p, A.group_identity());
        std::vector<int> slot_block(p, -1);
        {
            unsigned twist = A.group_identity();
            unsigned next_block = 0;
            for (unsigned t = 1; t <= p; ++t) {
                slot_twist[t - 1] = twist;
                if (next_block < k && s[next_block] == t) {
                    slot_block[t - 1] = static_cast<int>(next_block);
                    twist = A.group_mul(args[next_block].sector(), twist);
                    ++next_block;
                }
            }
        }
        std::vector<std::vector<AlgebraVec>> block_values(k);
        for (unsigned t = 1; t <= p; ++t) {
            if (slot_block[t - 1] < 0) continue;
            const unsigned j = static_cast<unsigned>(slot_block[t - 1]);
            const TwistedCochain& block = args[j];
            std::size_t size = 1;
            for (unsigned a = 0; a < block.arity(); ++a) size *= d;
            block_values[j].resize(size);
            std::vector<const AlgebraVec*> block_in(block.arity());
            for (std::size_t bf = 0; bf < size; ++bf) {
                std::size_t rem = bf;
                for (unsigned a = 0; a < block.arity(); ++a) {
                    block_in[a] = &A.act_basis(slot_twist[t - 1], static_cast<unsigned>(rem % d));
                    rem /= d;
                }
                block_values[j][bf] = block.evaluate_ptr(block_in);
            }
        }

        std::vector<unsigned> tuple(n, 0);
        std::vector<const AlgebraVec*> inputs(p);
        for (std::size_t flat = 0; flat < tensor; ++flat) {
            {
                std::size_t rem = flat;
                for (unsigned t = 0; t < n; ++t) {
                    tuple[t] = static_cast<unsigned>(rem % d);
                    rem /= d;
                }
            }
            unsigned cursor = 0;
            for (unsigned t = 1; t <= p; ++t) {
                const int b = slot_block[t - 1];
                if (b >= 0) {
                    const unsigned a = args[static_cast<unsigned>(b)].arity();
                    std::size_t bf = 0;
                    std::size_t stride = 1;
                    for (unsigned x = 0; x < a; ++x) {
                        bf += stride * tuple[cursor + x];
                        stride *= d;
                    }
                    inputs[t - 1] = &block_values[static_cast<unsigned>(b)][bf];
                    cursor += a;
                } else {
                    inputs[t - 1] = &A.act_basis(slot_twist[t - 1], tuple[cursor]);
                    cursor += 1;
                }
            }
            AlgebraVec val = phi.evaluate_ptr(inputs);
            if (blab_detail::vec_is_zero(val)) continue;
            AlgebraVec& slot_out = out.at(flat);
            for (unsigned i = 0; i < d; ++i)
                if (!val[i].is_zero())
                    slot_out[i] = negative ? slot_out[i] - val[i] : slot_out[i] + val[i];
        }

        // Next combination.
        long move = static_cast<long>(k) - 1;
        while (move >= 0 && s[static_cast<std::size_t>(move)] == p - (k - 1 - static_cast<unsigned>(move)))
            --move;
        if (move < 0) break;
        ++s[static_cast<std::size_t>(move)];
        for (unsigned j = static_cast<unsigned>(move) + 1; j < k; ++j) s[j] = s[j - 1] + 1;
    }
    return out;
}

// Hochschild differential: (-1)^{p-1} m2{phi} - phi{m2}.
inline TwistedCochain hochschild_d(const TwistedCochain& phi) {
    const FiniteAlgebra& A = phi.algebra();
    TwistedCochain m2 = TwistedCochain::product_cochain(A);
    TwistedCochain first = brace(m2, {phi});
    TwistedCochain second = brace(phi, {m2});
    const bool flip = phi.arity() % 2 == 0;
    return (flip ? -first : first) - second;
}

// Curving differential: phi{m0}. Arity zero maps to zero.
inline TwistedCochain curving_d(const TwistedCochain& phi) {
    TwistedCochain m0 = TwistedCochain::curving_cochain(phi.algebra());
    return brace(phi, {m0});
}

// Cup product: (-1)^{|phi1|(|phi2|-1)} m2{phi1, g1^* phi2}.
inline TwistedCochain cochain_group_action(unsigned h, const TwistedCochain& phi);

inline TwistedCochain cup(const TwistedCochain& phi1, const TwistedCochain& phi2) {
    const FiniteAlgebra& A = phi1.algebra();
    TwistedCochain m2 = TwistedCochain::product_cochain(A);
    TwistedCochain twisted = cochain_group_action(phi1.sector(), phi2);
    TwistedCochain base = brace(m2, {phi1, twisted});
    long e = static_cast<long>(phi1.arity()) * (static_cast<long>(phi2.arity()) - 1);
    return (e % 2 + 2) % 2 == 1 ? -base : base;
}

// Group action on cochains: twist the inputs by the inverse, the output by
// the element, and conjugate the sector.
inline TwistedCochain cochain_group_action(unsigned h, const TwistedCochain& phi) {
    const FiniteAlgebra& A = phi.algebra();
    const unsigned hinv = A.group_inverse(h);
    const unsigned new_sector = A.group_mul(A.group_mul(h, phi.sector()), hinv);
    TwistedCochain out(A, phi.arity(), new_sector);
    const unsigned d = A.dim();
    const unsigned p = phi.arity();
    std::vector<unsigned> tuple(p, 0);
    for (std::size_t flat = 0; flat < out.tensor_size(); ++flat) {
        {
            std::size_t rem = flat;
            for (unsigned t = 0; t < p; ++t) {
                tuple[t] = static_cast<unsigned>(rem % d);
                rem /= d;
            }
        }
        std::vector<const AlgebraVec*> inputs(p);
        for (unsigned t = 0; t < p; ++t) inputs[t] = &A.act_basis(hinv, tuple[t]);
        out.at(flat) = A.act(h, phi.evaluate_ptr(inputs));
    }
    return out;
}

inline bool cochain_is_invariant(const TwistedCochain& phi) {
    for (std::size_t h = 0; h < phi.algebra().group_size(); ++h)
        if (!cochains_equal(cochain_group_action(static_cast<unsigned>(h), phi), phi)) return false;
    return true;
}

// Average over the group: the projector onto invariant cochains.
inline TwistedCochain invariant_projection(const TwistedCochain& phi) {
    const FiniteAlgebra& A = phi.algebra();
    TwistedCochain acc = cochain_group_action(0, phi);
    bool first = true;
    for (std::size_t h = 0; h < A.group_size(); ++h) {
        TwistedCochain term = cochain_group_action(static_cast<unsigned>(h), phi);
        if (term.sector() != phi.sector())
            throw ValidationError("invariant projection needs a normal sector orbit");
        if (first && h == 0) {
            acc = term;
            first = false;
        } else {
            acc = acc + term;
        }
    }
    Cyclotomic inv = Cyclotomic(Rational(1, static_cast<long>(A.group_size())));
    return acc.scaled(inv);
}

// The crossed product algebra: basis elements are (basis of A) x (group),
// with product (a g)(b h) = (a * g(b)) gh, realized as a finite algebra with
// trivial symmetry group. Basis index of (i, t) is t * dim(A) + i.
struct CrossedProduct {
    unsigned base_dim;
    unsigned base_group;
    FiniteAlgebra algebra;

    unsigned index(unsigned i, unsigned t) const { return t * base_dim + i; }
};

inline CrossedProduct crossed_product(const FiniteAlgebra& A) {
    const unsigned d = A.dim();
    const unsigned m = static_cast<unsigned>(A.group_size());
    const unsigned D = d * m;
    std::vector<std::vector<AlgebraVec>> prod(D, std::vector<AlgebraVec>(D, AlgebraVec(D, Cyclotomic())));
    for (unsigned t = 0; t < m; ++t)
        for (unsigned i = 0; i < d; ++i)
            for (unsigned u = 0; u < m; ++u)
                for (unsigned j = 0; j < d; ++j) {
                    AlgebraVec v = A.mul(A.basis_vector(i), A.act_basis(t, j));
                    unsigned tu = A.group_mul(t, u);
                    AlgebraVec& cell = prod[t * d + i][u * d + j];
                    for (unsigned l = 0; l < d; ++l) cell[tu * d + l] = v[l];
                }
    AlgebraVec unit(D, Cyclotomic());
    for (unsigned i = 0; i < d; ++i) unit[A.group_identity() * d + i] = A.unit()[i];
    std::optional<AlgebraVec> curv;
    if (A.has_curving()) {
        AlgebraVec w(D, Cyclotomic());
        for (unsigned i = 0; i < d; ++i) w[A.group_identity() * d + i] = A.curving()[i];
        curv = std::move(w);
    }
    std::vector<AlgebraMat> trivial{blab_detail::mat_identity(D)};
    return CrossedProduct{d, m,
                          FiniteAlgebra(D, std::move(prod), std::move(unit), std::move(curv),
                                        std::move(trivial))};
}

// Comparison map from invariant twisted cochains on A to plain Hochschild
// cochains on the crossed product: the k-th argument is twisted by the
// product of the group coordinates before it, and the value lands at the
// group coordinate obtained by appending all argument coordinates to the
// sector.
inline TwistedCochain psi_map(const CrossedProduct& cp, const TwistedCochain& phi,
                              bool check_invariant = true) {
    const FiniteAlgebra& A = phi.algebra();
    if (A.dim() != cp.base_dim || A.group_size() != cp.base_group)
        throw ValidationError("cochain does not match the crossed product's base algebra");
    if (check_invariant && !cochain_is_invariant(phi))
        throw NotInvariantError("comparison map applied to a non-invariant cochain");

    const unsigned d = cp.base_dim;
    const unsigned D = cp.algebra.dim();
    const unsigned p = phi.arity();
    TwistedCochain out(cp.algebra, p, cp.algebra.group_identity());
    std::vector<unsigned> tuple(p, 0);
    for (std::size_t flat = 0; flat < out.tensor_size(); ++flat) {
        {
            std::size_t rem = flat;
            for (unsigned t = 0; t < p; ++t) {
                tuple[t] = static_cast<unsigned>(rem % D);
                rem /= D;
            }
        }
        std::vector<const AlgebraVec*> inputs(p);
        unsigned twist = A.group_identity();
        unsigned gtotal = phi.sector();
        for (unsigned t = 0; t < p; ++t) {
            const unsigned gi = tuple[t] / d;
            const unsigned ai = tuple[t] % d;
            inputs[t] = &A.act_basis(twist, ai);
            twist = A.group_mul(twist, gi);
            gtotal = A.group_mul(gtotal, gi);
        }
        AlgebraVec val = phi.evaluate_ptr(inputs);
        AlgebraVec& cell = out.at(flat);
        for (unsigned i = 0; i < d; ++i) cell[cp.index(i, gtotal)] = val[i];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Formal sums of cochains of mixed arity (needed for the total differential).

using CochainSum = std::vector<TwistedCochain>;

inline CochainSum sum_of(const TwistedCochain& a) { return CochainSum{a}; }

inline CochainSum mixed_d(const TwistedCochain& phi) {
    return CochainSum{hochschild_d(phi), curving_d(phi)};
}

inline CochainSum sum_mixed_d(const CochainSum& s) {
    CochainSum out;
    for (const auto& t : s) {
        out.push_back(hochschild_d(t));
        out.push_back(curving_d(t));
    }
    return out;
}

inline CochainSum sum_cup(const CochainSum& a, const CochainSum& b) {
    CochainSum out;
    for (const auto& x : a)
        for (const auto& y : b) out.push_back(cup(x, y));
    return out;
}

inline CochainSum sum_scaled(const CochainSum& a, const Cyclotomic& c) {
    CochainSum out;
    for (const auto& x : a) out.push_back(x.scaled(c));
    return out;
}

inline CochainSum sum_concat(CochainSum a, const CochainSum& b) {
    for (const auto& x : b) a.push_back(x);
    return a;
}

// Collect by (arity, sector) and test for zero.
inline bool sum_is_zero(const CochainSum& s) {
    std::map<std::pair<unsigned, unsigned>, TwistedCochain> acc;
    for (const auto& t : s) {
        auto key = std::make_pair(t.arity(), t.sector());
        auto it = acc.find(key);
        if (it == acc.end())
            acc.emplace(key, t);
        else
            it->second = it->second + t;
    }
    for (const auto& [key, t] : acc) {
        (void)key;
        if (!t.is_zero()) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Randomized identity suite.

struct SuiteBounds {
    unsigned max_arity = 2;
    unsigned sample_count = 100;
    std::uint64_t seed = 12345;
};

struct IdentityFailure {
    std::string identity;
    unsigned instance = 0;
    std::string detail;
};

struct IdentityResult {
    std::string identity;
    unsigned instances = 0;
    unsigned failures = 0;
    std::vector<IdentityFailure> witnesses;
};

struct SuiteReport {
    SuiteBounds bounds;
    std::vector<IdentityResult> results;

    bool all_passed() const {
        for (const auto& r : results)
            if (r.failures != 0) return false;
        return true;
    }
};

namespace blab_detail {

inline TwistedCochain random_cochain(const FiniteAlgebra& A, std::mt19937_64& rng,
                                     unsigned max_arity) {
    unsigned arity = static_cast<unsigned>(rng() % (static_cast<std::uint64_t>(max_arity) + 1));
    unsigned sector = static_cast<unsigned>(rng() % A.group_size());
    TwistedCochain c(A, arity, sector);
    for (std::size_t f = 0; f < c.tensor_size(); ++f)
        for (unsigned i = 0; i < A.dim(); ++i) {
            long v = static_cast<long>(rng() % 3) - 1;
            if (v != 0) c.at(f)[i] = Cyclotomic(v);
        }
    return c;
}

inline std::string shape_string(const TwistedCochain& c) {
    std::ostringstream os;
    os << "arity=" << c.arity() << " sector=" << c.sector();
    return os.str();
}

inline std::string first_difference(const TwistedCochain& lhs, const TwistedCochain& rhs) {
    std::ostringstream os;
    if (lhs.arity() != rhs.arity() || lhs.sector() != rhs.sector()) {
        os << "shape mismatch: lhs " << shape_string(lhs) << ", rhs " << shape_string(rhs);
        return os.str();
    }
    const unsigned d = lhs.algebra().dim();
    for (std::size_t f = 0; f < lhs.tensor_size(); ++f)
        for (unsigned i = 0; i < d; ++i)
            if (!(lhs.at(f)[i] == rhs.at(f)[i])) {
                os << "tensor slot " << f << ", output " << i << ": lhs=" << lhs.at(f)[i].str()
                   << " rhs=" << rhs.at(f)[i].str();
                return os.str();
            }
    os << "no difference";
    return os.str();
}

inline std::string sum_residual_string(const CochainSum& s) {
    std::map<std::pair<unsigned, unsigned>, TwistedCochain> acc;
    for (const auto& t : s) {
        auto key = std::make_pair(t.arity(), t.sector());
        auto it = acc.find(key);
        if (it == acc.end())
            acc.emplace(key, t);
        else
            it->second = it->second + t;
    }
    std::ostringstream os;
    for (const auto& [key, t] : acc) {
        if (t.is_zero()) continue;
        const unsigned d = t.algebra().dim();
        for (std::size_t f = 0; f < t.tensor_size(); ++f)
            for (unsigned i = 0; i < d; ++i)
                if (!t.at(f)[i].is_zero()) {
                    os << "residual at arity=" << key.first << " sector=" << key.second
                       << " tensor slot " << f << " output " << i << ": " << t.at(f)[i].str();
                    return os.str();
                }
    }
    os << "no residual";
    return os.str();
}

// Enumerate the index families for the doubled-brace identity with n inner
// and m outer arguments, and build the right-hand side for one family.
struct PreJacobiTermTrace {
    std::vector<unsigned> starts;
    std::vector<unsigned> ends;
    int sign = 1;
};

}  // namespace blab_detail

// The right-hand side of the doubled-brace identity
// phi{phi_1..phi_n}{psi_1..psi_m}, as a formal sum, together with traces of
// the summands for failure reports.
inline CochainSum pre_jacobi_rhs(const TwistedCochain& phi,
                                 const std::vector<TwistedCochain>& inner,
                                 const std::vector<TwistedCochain>& outer,
                                 std::vector<blab_detail::PreJacobiTermTrace>* traces = nullptr) {
    const FiniteAlgebra& A = phi.algebra();
    const unsigned n = static_cast<unsigned>(inner.size());
    const unsigned m = static_cast<unsigned>(outer.size());
    CochainSum rhs;

    // Families 1 <= j_1 <= j'_1 <= j_2 <= j'_2 <= ... <= j_n <= j'_n <= m+1:
    // block i absorbs the outer arguments with indices in [j_i, j'_i), blocks
    // may be adjacent, and a block whose size exceeds the arity of its inner
    // cochain is skipped since its brace vanishes.
    std::vector<blab_detail::PreJacobiTermTrace> local;

    std::vector<std::pair<std::vector<unsigned>, std::vector<unsigned>>> families;
    {
        std::vector<unsigned> st(n), en(n);
        auto rec = [&](auto&& self, unsigned block, unsigned low) -> void {
            if (block == n) {
                families.emplace_back(st, en);
                return;
            }
            for (unsigned j = low; j <= m + 1; ++j) {
                unsigned cap = std::min(m + 1, j + inner[block].arity());
                for (unsigned je = j; je <= cap; ++je) {
                    st[block] = j;
                    en[block] = je;
                    self(self, block + 1, je);
                }
            }
        };
        if (n == 0) {
            families.emplace_back(st, en);
        } else {
            rec(rec, 0, 1);
        }
    }

    for (const auto& [st, en] : families) {
        // Sign exponent: sum over blocks of xi_i * (|phi_i| - 1) with
        // xi_i = |psi_1| + ... + |psi_{j_i - 1}| - j_i + 1.
        long exp = 0;
        for (unsigned i = 0; i < n; ++i) {
            long xi = 0;
            for (unsigned l = 0; l + 1 < st[i]; ++l) xi += static_cast<long>(outer[l].arity());
            xi -= static_cast<long>(st[i]);
            xi += 1;
            exp += xi * (static_cast<long>(inner[i].arity()) - 1);
        }
        const bool negative = (exp % 2 + 2) % 2 == 1;

        // Assemble the outer argument list with accumulated twists.
        std::vector<TwistedCochain> outer_args;
        unsigned twist = A.group_identity();
        unsigned pos = 1;
        for (unsigned i = 0; i < n; ++i) {
            for (; pos < st[i]; ++pos)
                outer_args.push_back(twist == A.group_identity()
                                         ? outer[pos - 1]
                                         : cochain_group_action(twist, outer[pos - 1]));
            std::vector<TwistedCochain> block_args;
            for (; pos < en[i]; ++pos)
                block_args.push_back(twist == A.group_identity()
                                         ? outer[pos - 1]
                                         : cochain_group_action(twist, outer[pos - 1]));
            outer_args.push_back(brace(inner[i], block_args));
            twist = A.group_mul(inner[i].sector(), twist);
        }
        for (; pos <= m; ++pos)
            outer_args.push_back(twist == A.group_identity()
                                     ? outer[pos - 1]
                                     : cochain_group_action(twist, outer[pos - 1]));

        TwistedCochain term = brace(phi, outer_args);
        rhs.push_back(negative ? -term : term);
        if (traces) {
            blab_detail::PreJacobiTermTrace tr;
            tr.starts = st;
            tr.ends = en;
            tr.sign = negative ? -1 : 1;
            local.push_back(tr);
        }
    }
    if (traces) *traces = std::move(local);
    return rhs;
}

inline SuiteReport identity_suite(const FiniteAlgebra& A, const SuiteBounds& bounds = SuiteBounds{}) {
    SuiteReport report;
    report.bounds = bounds;
    const bool curved = A.has_curving();
    constexpr unsigned kMaxWitnesses = 8;

    auto run_identity = [&](const std::string& name, unsigned cochains_per_instance,
                            auto&& check) {
        IdentityResult res;
        res.identity = name;
        std::mt19937_64 rng(bounds.seed);
        unsigned instances = bounds.sample_count / cochains_per_instance;
        if (instances == 0) instances = 1;
        for (unsigned inst = 0; inst < instances; ++inst) {
            std::vector<TwistedCochain> cs;
            for (unsigned c = 0; c < cochains_per_instance; ++c)
                cs.push_back(blab_detail::random_cochain(A, rng, bounds.max_arity));
            std::string detail = check(cs);
            ++res.instances;
            if (!detail.empty()) {
                ++res.failures;
                if (res.witnesses.size() < kMaxWitnesses)
                    res.witnesses.push_back(IdentityFailure{name, inst, detail});
            }
        }
        report.results.push_back(std::move(res));
    };

    // Doubled-brace identities for each (n, m) pair up to (2, 2).
    for (unsigned n = 1; n <= 2; ++n)
        for (unsigned m = 1; m <= 2; ++m) {
            std::ostringstream name;
            name << "pre-jacobi-" << n << "-" << m;
            run_identity(name.str(), 1 + n + m, [&, n, m](const std::vector<TwistedCochain>& cs) {
                const TwistedCochain& phi = cs[0];
                std::vector<TwistedCochain> inner(cs.begin() + 1, cs.begin() + 1 + n);
                std::vector<TwistedCochain> outer(cs.begin() + 1 + n, cs.begin() + 1 + n + m);
                TwistedCochain lhs = brace(brace(phi, inner), outer);
                std::vector<blab_detail::PreJacobiTermTrace> traces;
                CochainSum rhs = pre_jacobi_rhs(phi, inner, outer, &traces);
                CochainSum residual = rhs;
                residual.push_back(-lhs);
                if (sum_is_zero(residual)) return std::string();
                std::ostringstream os;
                os << blab_detail::sum_residual_string(residual) << "; summands:";
                for (const auto& t : traces) {
                    os << " [";
                    for (unsigned i = 0; i < t.starts.size(); ++i)
                        os << (i ? "," : "") << "(" << t.starts[i] << ".." << t.ends[i] << ")";
                    os << " sign=" << t.sign << "]";
                }
                return os.str();
            });
        }

    run_identity("brace-equivariance", 3, [&](const std::vector<TwistedCochain>& cs) {
        for (std::size_t h = 0; h < A.group_size(); ++h) {
            TwistedCochain lhs =
                cochain_group_action(static_cast<unsigned>(h), brace(cs[0], {cs[1], cs[2]}));
            TwistedCochain rhs = brace(cochain_group_action(static_cast<unsigned>(h), cs[0]),
                                       {cochain_group_action(static_cast<unsigned>(h), cs[1]),
                                        cochain_group_action(static_cast<unsigned>(h), cs[2])});
            if (!cochains_equal(lhs, rhs)) {
                std::ostringstream os;
                os << "group element " << h << ": " << blab_detail::first_difference(lhs, rhs);
                return os.str();
            }
        }
        return std::string();
    });

    run_identity("commutativity-homotopy", 2, [&](const std::vector<TwistedCochain>& cs) {
        const TwistedCochain& phi = cs[0];
        const TwistedCochain& phi1 = cs[1];
        const unsigned g1inv = A.group_inverse(phi1.sector());
        const bool s1 = phi1.arity() % 2 == 1;
        const bool s2 = (static_cast<long>(phi.arity()) * phi1.arity()) % 2 == 1;
        TwistedCochain t1 = hochschild_d(brace(phi, {phi1}));
        TwistedCochain t2 = brace(hochschild_d(phi), {phi1});
        TwistedCochain t3 = brace(phi, {hochschild_d(phi1)});
        TwistedCochain r1 = cup(phi1, cochain_group_action(g1inv, phi));
        TwistedCochain r2 = cup(phi, phi1);
        CochainSum residual;
        residual.push_back(s1 ? -t1 : t1);
        residual.push_back(t2);
        residual.push_back(s1 ? t3 : -t3);
        residual.push_back(-r1);
        residual.push_back(s2 ? -r2 : r2);
        if (sum_is_zero(residual)) return std::string();
        return blab_detail::sum_residual_string(residual);
    });

    run_identity("leibniz-hochschild", 2, [&](const std::vector<TwistedCochain>& cs) {
        TwistedCochain lhs = hochschild_d(cup(cs[0], cs[1]));
        TwistedCochain a = cup(hochschild_d(cs[0]), cs[1]);
        TwistedCochain b = cup(cs[0], hochschild_d(cs[1]));
        const bool s = cs[0].arity() % 2 == 1;
        CochainSum residual;
        residual.push_back(lhs);
        residual.push_back(-a);
        residual.push_back(s ? b : -b);
        if (sum_is_zero(residual)) return std::string();
        return blab_detail::sum_residual_string(residual);
    });

    run_identity("d-hochschild-squared", 1, [&](const std::vector<TwistedCochain>& cs) {
        TwistedCochain dd = hochschild_d(hochschild_d(cs[0]));
        if (dd.is_zero()) return std::string();
        return blab_detail::first_difference(dd, TwistedCochain(A, dd.arity(), dd.sector()));
    });

    if (curved) {
        run_identity("d-curving-squared", 1, [&](const std::vector<TwistedCochain>& cs) {
            TwistedCochain dd = curving_d(curving_d(cs[0]));
            if (dd.is_zero()) return std::string();
            return blab_detail::first_difference(dd, TwistedCochain(A, dd.arity(), dd.sector()));
        });

        run_identity("d-mixed-squared", 1, [&](const std::vector<TwistedCochain>& cs) {
            CochainSum dd = sum_mixed_d(mixed_d(cs[0]));
            if (sum_is_zero(dd)) return std::string();
            return blab_detail::sum_residual_string(dd);
        });

        run_identity("leibniz-mixed", 2, [&](const std::vector<TwistedCochain>& cs) {
            CochainSum lhs = sum_mixed_d(sum_cup(sum_of(cs[0]), sum_of(cs[1])));
            CochainSum a = sum_cup(mixed_d(cs[0]), sum_of(cs[1]));
            CochainSum b = sum_cup(sum_of(cs[0]), mixed_d(cs[1]));
            const bool s = cs[0].arity() % 2 == 1;
            CochainSum residual = lhs;
            residual = sum_concat(residual, sum_scaled(a, Cyclotomic(-1)));
            residual = sum_concat(residual, sum_scaled(b, Cyclotomic(s ? 1 : -1)));
            if (sum_is_zero(residual)) return std::string();
            return blab_detail::sum_residual_string(residual);
        });
    }

    {
        CrossedProduct cp = crossed_product(A);
        run_identity("psi-brace", 3, [&](const std::vector<TwistedCochain>& cs) {
            TwistedCochain phi = invariant_projection(cs[0]);
            TwistedCochain phi1 = invariant_projection(cs[1]);
            TwistedCochain phi2 = invariant_projection(cs[2]);
            {
                TwistedCochain lhs = psi_map(cp, brace(phi, {phi1}), false);
                TwistedCochain rhs = brace(psi_map(cp, phi), {psi_map(cp, phi1)});
                if (!cochains_equal(lhs, rhs)) {
                    std::ostringstream os;
                    os << "single insertion: " << blab_detail::first_difference(lhs, rhs);
                    return os.str();
                }
            }
            {
                TwistedCochain lhs = psi_map(cp, brace(phi, {phi1, phi2}), false);
                TwistedCochain rhs =
                    brace(psi_map(cp, phi), {psi_map(cp, phi1), psi_map(cp, phi2)});
                if (!cochains_equal(lhs, rhs)) {
                    std::ostringstream os;
                    os << "double insertion: " << blab_detail::first_difference(lhs, rhs);
                    return os.str();
                }
            }
            return std::string();
        });

        run_identity("psi-hochschild-compatibility", 1, [&](const std::vector<TwistedCochain>& cs) {
            TwistedCochain phi = invariant_projection(cs[0]);
            TwistedCochain lhs = psi_map(cp, hochschild_d(phi), false);
            TwistedCochain rhs = hochschild_d(psi_map(cp, phi));
            if (cochains_equal(lhs, rhs)) return std::string();
            return blab_detail::first_difference(lhs, rhs);
        });

        if (curved) {
            run_identity("psi-mixed-compatibility", 1, [&](const std::vector<TwistedCochain>& cs) {
                TwistedCochain phi = invariant_projection(cs[0]);
                CochainSum lhs;
                for (const auto& t : mixed_d(phi)) lhs.push_back(psi_map(cp, t, false));
                CochainSum rhs = mixed_d(psi_map(cp, phi));
                CochainSum residual = lhs;
                residual = sum_concat(residual, sum_scaled(rhs, Cyclotomic(-1)));
                if (sum_is_zero(residual)) return std::string();
                return blab_detail::sum_residual_string(residual);
            });
        }
    }

    std::sort(report.results.begin(), report.results.end(),
              [](const IdentityResult& a, const IdentityResult& b) { return a.identity < b.identity; });
    return report;
}

// ---------------------------------------------------------------------------
// Exact cohomology dimensions of the twisted invariant complex.

namespace blab_detail {

using SparseRow = std::map<std::size_t, Cyclotomic>;

class SparseEliminator {
public:
    // Reduce the row against the stored pivots; store it if independent.
    bool insert(SparseRow row) {
        while (!row.empty()) {
            auto it = row.begin();
            if (it->second.is_zero()) {
                row.erase(it);
                continue;
            }
            const std::size_t col = it->first;
            const Cyclotomic lead = it->second;
            auto p = pivots_.find(col);
            if (p == pivots_.end()) {
                Cyclotomic inv = lead.inverse();
                for (auto& kv : row) kv.second = kv.second * inv;
                pivots_.emplace(col, std::move(row));
                return true;
            }
            for (const auto& kv : p->second) {
                Cyclotomic delta = lead * kv.second;
                auto f = row.find(kv.first);
                if (f == row.end()) {
                    if (!delta.is_zero()) row.emplace(kv.first, -delta);
                } else {
                    f->second = f->second - delta;
                    if (f->second.is_zero()) row.erase(f);
                }
            }
        }
        return false;
    }

    std::size_t rank() const { return pivots_.size(); }

private:
    std::map<std::size_t, SparseRow> pivots_;
};

inline SparseRow cochain_to_row(const TwistedCochain& c) {
    SparseRow row;
    const unsigned d = c.algebra().dim();
    const std::size_t per_sector = c.tensor_size() * d;
    for (std::size_t f = 0; f < c.tensor_size(); ++f)
        for (unsigned i = 0; i < d; ++i)
            if (!c.at(f)[i].is_zero())
                row[static_cast<std::size_t>(c.sector()) * per_sector + f * d + i] = c.at(f)[i];
    return row;
}

}  // namespace blab_detail

// Dimensions of the cohomology of the invariant twisted cochain complex under
// the Hochschild differential, in degrees 0 through max_degree. For an
// algebra with trivial group this is the plain Hochschild cohomology.
inline std::vector<std::size_t> hochschild_cohomology_dims(const FiniteAlgebra& A,
                                                           unsigned max_degree) {
    const unsigned d = A.dim();
    const std::size_t groups = A.group_size();
    std::vector<std::size_t> dims;
    std::size_t previous_rank = 0;

    for (unsigned p = 0; p <= max_degree; ++p) {
        std::size_t tensor = 1;
        for (unsigned i = 0; i < p; ++i) tensor *= d;

        // Greedy basis of the invariant subspace in degree p.
        std::vector<TwistedCochain> basis;
        blab_detail::SparseEliminator span;
        for (unsigned g = 0; g < groups; ++g)
            for (std::size_t f = 0; f < tensor; ++f)
                for (unsigned o = 0; o < d; ++o) {
                    TwistedCochain e(A, p, g);
                    e.at(f)[o] = Cyclotomic(1);
                    TwistedCochain proj = groups == 1 ? e : invariant_projection(e);
                    if (proj.is_zero()) continue;
                    if (span.insert(blab_detail::cochain_to_row(proj))) basis.push_back(proj);
                }

        blab_detail::SparseEliminator image;
        for (const auto& b : basis) image.insert(blab_detail::cochain_to_row(hochschild_d(b)));

        const std::size_t rank = image.rank();
        dims.push_back(basis.size() - rank - previous_rank);
        previous_rank = rank;
    }
    return dims;
}

}  // namespace orbifrob
