#ifndef ORBIFROB_EXTERIOR_HPP
#define ORBIFROB_EXTERIOR_HPP

/**
 * Exterior words e_{i1} ^ ... ^ e_{ip} over the variable index set, and
 * Koszul elements: formal sums of (polynomial, exterior word, group element)
 * triples.  These carry the twisted Koszul complex for each sector.
 */

#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "group.hpp"
#include "polynomial.hpp"

namespace orbifrob {

/// A wedge monomial with strictly increasing variable indices.
class ExteriorWord {
public:
    ExteriorWord() = default;

    explicit ExteriorWord(std::vector<unsigned> idx) : idx_(std::move(idx)) {
        for (size_t k = 1; k < idx_.size(); ++k)
            if (idx_[k - 1] >= idx_[k])
                throw ValidationError("exterior word indices must be strictly increasing");
    }

    /// Sort an arbitrary index list into an exterior word.  Returns the
    /// permutation sign, or 0 when an index repeats (the word is then empty).
    static std::pair<int, ExteriorWord> normalized(std::vector<unsigned> raw) {
        int sign = 1;
        // insertion sort; counts transpositions exactly
        for (size_t k = 1; k < raw.size(); ++k) {
            size_t j = k;
            while (j > 0 && raw[j - 1] > raw[j]) {
                std::swap(raw[j - 1], raw[j]);
                sign = -sign;
                --j;
            }
        }
        for (size_t k = 1; k < raw.size(); ++k)
            if (raw[k - 1] == raw[k]) return {0, ExteriorWord()};
        return {sign, ExteriorWord(std::move(raw))};
    }

    size_t degree() const { return idx_.size(); }
    bool empty() const { return idx_.empty(); }
    const std::vector<unsigned>& indices() const { return idx_; }

    bool contains(unsigned i) const {
        for (unsigned v : idx_)
            if (v == i) return true;
        return false;
    }

    /// Word with the k-th factor (0-based) removed.
    ExteriorWord without_position(size_t k) const {
        std::vector<unsigned> r = idx_;
        r.erase(r.begin() + static_cast<std::ptrdiff_t>(k));
        return ExteriorWord(std::move(r));
    }

    friend bool operator==(const ExteriorWord& a, const ExteriorWord& b) {
        return a.idx_ == b.idx_;
    }
    friend bool operator!=(const ExteriorWord& a, const ExteriorWord& b) { return !(a == b); }
    friend bool operator<(const ExteriorWord& a, const ExteriorWord& b) {
        if (a.idx_.size() != b.idx_.size()) return a.idx_.size() < b.idx_.size();
        return a.idx_ < b.idx_;
    }

    std::string str() const {
        if (idx_.empty()) return "1";
        std::ostringstream os;
        for (size_t k = 0; k < idx_.size(); ++k) {
            if (k) os << "^";
            os << "e" << (idx_[k] + 1);
        }
        return os.str();
    }

private:
    std::vector<unsigned> idx_;
};

/// Wedge product: merge two increasing words, tracking the permutation sign.
/// A repeated index gives sign 0 (and an empty word).
inline std::pair<int, ExteriorWord> exterior_product(const ExteriorWord& a,
                                                     const ExteriorWord& b) {
    const auto& u = a.indices();
    const auto& v = b.indices();
    std::vector<unsigned> merged;
    merged.reserve(u.size() + v.size());
    int sign = 1;
    size_t i = 0, j = 0;
    while (i < u.size() && j < v.size()) {
        if (u[i] < v[j]) {
            merged.push_back(u[i++]);
        } else if (u[i] > v[j]) {
            // v[j] jumps over the remaining factors of a
            if ((u.size() - i) % 2 == 1) sign = -sign;
            merged.push_back(v[j++]);
        } else {
            return {0, ExteriorWord()};
        }
    }
    while (i < u.size()) merged.push_back(u[i++]);
    while (j < v.size()) merged.push_back(v[j++]);
    return {sign, ExteriorWord(std::move(merged))};
}

/**
 * An element of the total twisted Koszul module: a finite sum of terms
 * a * e_I * g with a a polynomial, e_I an exterior word, and g a group
 * element.  Like terms are merged and zero terms dropped.
 */
class KoszulElement {
public:
    using Key = std::pair<ExteriorWord, GroupElement>;

    explicit KoszulElement(unsigned nvars) : n_(nvars) {}

    static KoszulElement zero(unsigned nvars) { return KoszulElement(nvars); }

    unsigned nvars() const { return n_; }
    bool is_zero() const { return t_.empty(); }
    const std::map<Key, Polynomial>& terms() const { return t_; }

    void add_term(const Polynomial& a, const ExteriorWord& w, const GroupElement& g) {
        if (a.nvars() != n_ || g.nvars() != n_)
            throw ValidationError("koszul term arity mismatch");
        if (a.is_zero()) return;
        Key key{w, g};
        auto it = t_.find(key);
        if (it == t_.end()) {
            t_.emplace(std::move(key), a);
        } else {
            it->second = it->second + a;
            if (it->second.is_zero()) t_.erase(it);
        }
    }

    friend KoszulElement operator+(const KoszulElement& a, const KoszulElement& b) {
        if (a.n_ != b.n_) throw ValidationError("koszul element arity mismatch");
        KoszulElement r = a;
        for (const auto& [key, p] : b.t_) r.add_term(p, key.first, key.second);
        return r;
    }

    friend KoszulElement operator-(const KoszulElement& a, const KoszulElement& b) {
        if (a.n_ != b.n_) throw ValidationError("koszul element arity mismatch");
        KoszulElement r = a;
        for (const auto& [key, p] : b.t_) r.add_term(-p, key.first, key.second);
        return r;
    }

    KoszulElement scaled(const Cyclotomic& c) const {
        KoszulElement r(n_);
        if (c.is_zero()) return r;
        for (const auto& [key, p] : t_) r.add_term(c * p, key.first, key.second);
        return r;
    }

    friend bool operator==(const KoszulElement& a, const KoszulElement& b) {
        return a.n_ == b.n_ && a.t_ == b.t_;
    }
    friend bool operator!=(const KoszulElement& a, const KoszulElement& b) { return !(a == b); }

    std::string str() const {
        if (t_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [key, p] : t_) {
            if (!first) os << " + ";
            first = false;
            os << "(" << p.str() << ")*" << key.first.str() << "*[" << key.second.str() << "]";
        }
        return os.str();
    }

private:
    unsigned n_;
    std::map<Key, Polynomial> t_;
};

} // namespace orbifrob

#endif
