/**
 * @file polynomial.hpp
 * @brief Sparse multivariate polynomials over cyclotomic fields.
 *
 * A Monomial is an exponent vector of fixed length N; a Polynomial maps
 * monomials to nonzero Cyclotomic coefficients.  The number of variables is
 * fixed per polynomial and all arithmetic demands matching N.
 *
 * Text grammar (read and written):   x1^3*x2 + x2^4
 *   - variables are x1..xN; for N <= 4 the aliases x, y, z, w are accepted;
 *   - '*' between factors is mandatory, whitespace is insignificant;
 *   - coefficients are integers or a/b rationals, optionally signed.
 */
#ifndef ORBIFROB_POLYNOMIAL_HPP
#define ORBIFROB_POLYNOMIAL_HPP

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "orbifrob/cyclotomic.hpp"

namespace orbifrob {

using Monomial = std::vector<unsigned>;

inline unsigned total_degree(const Monomial& m) {
    unsigned d = 0;
    for (unsigned e : m) d += e;
    return d;
}

/// Weighted degree sum_i q_i * gamma_i.
inline Rational weighted_degree(const Monomial& m, const std::vector<Rational>& q) {
    Rational d(0);
    for (size_t i = 0; i < m.size(); ++i)
        if (m[i]) d += q[i] * Rational(static_cast<long>(m[i]));
    return d;
}

/// Canonical basis order: weighted degree first, ties by reverse
/// lexicographic comparison (the monomial whose last differing exponent is
/// larger counts as smaller).
inline bool weighted_revlex_less(const Monomial& a, const Monomial& b,
                                 const std::vector<Rational>& q) {
    Rational da = weighted_degree(a, q), db = weighted_degree(b, q);
    if (da != db) return da < db;
    for (size_t i = a.size(); i-- > 0;) {
        if (a[i] != b[i]) return a[i] > b[i];
    }
    return false;
}

class Polynomial {
public:
    explicit Polynomial(unsigned nvars = 0) : n_(nvars) {}

    static Polynomial zero(unsigned nvars) { return Polynomial(nvars); }

    static Polynomial constant(unsigned nvars, const Cyclotomic& c) {
        Polynomial p(nvars);
        p.add_term(Monomial(nvars, 0), c);
        return p;
    }

    static Polynomial monomial(unsigned nvars, const Monomial& m,
                               const Cyclotomic& c = Cyclotomic(Rational(1))) {
        Polynomial p(nvars);
        p.add_term(m, c);
        return p;
    }

    static Polynomial variable(unsigned nvars, unsigned i, unsigned power = 1) {
        Monomial m(nvars, 0);
        m.at(i) = power;
        return monomial(nvars, m);
    }

    unsigned nvars() const { return n_; }
    const std::map<Monomial, Cyclotomic>& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    size_t term_count() const { return t_.size(); }

    void add_term(const Monomial& m, const Cyclotomic& c) {
        if (m.size() != n_) throw ValidationError("monomial arity mismatch");
        if (c.is_zero()) return;
        auto it = t_.find(m);
        if (it == t_.end()) {
            t_.emplace(m, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) t_.erase(it);
        }
    }

    Cyclotomic coeff(const Monomial& m) const {
        auto it = t_.find(m);
        return it == t_.end() ? Cyclotomic() : it->second;
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
        check_arity(a, b);
        Polynomial r = a;
        for (const auto& [m, c] : b.t_) r.add_term(m, c);
        return r;
    }
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
        check_arity(a, b);
        Polynomial r = a;
        for (const auto& [m, c] : b.t_) r.add_term(m, -c);
        return r;
    }
    Polynomial operator-() const {
        Polynomial r(n_);
        for (const auto& [m, c] : t_) r.t_.emplace(m, -c);
        return r;
    }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        check_arity(a, b);
        Polynomial r(a.n_);
        for (const auto& [ma, ca] : a.t_) {
            for (const auto& [mb, cb] : b.t_) {
                Monomial m(a.n_);
                for (unsigned i = 0; i < a.n_; ++i) m[i] = ma[i] + mb[i];
                r.add_term(m, ca * cb);
            }
        }
        return r;
    }
    friend Polynomial operator*(const Cyclotomic& c, const Polynomial& p) {
        Polynomial r(p.n_);
        if (c.is_zero()) return r;
        for (const auto& [m, x] : p.t_) r.add_term(m, c * x);
        return r;
    }
    Polynomial& operator+=(const Polynomial& o) { return *this = *this + o; }
    Polynomial& operator-=(const Polynomial& o) { return *this = *this - o; }
    Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        if (a.n_ != b.n_) return false;
        if (a.t_.size() != b.t_.size()) return false;
        auto ia = a.t_.begin();
        auto ib = b.t_.begin();
        for (; ia != a.t_.end(); ++ia, ++ib) {
            if (ia->first != ib->first || ia->second != ib->second) return false;
        }
        return true;
    }
    friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

    /// Ordinary partial derivative with respect to variable i.
    Polynomial partial(unsigned i) const {
        Polynomial r(n_);
        for (const auto& [m, c] : t_) {
            if (m[i] == 0) continue;
            Monomial d = m;
            d[i] -= 1;
            r.add_term(d, Cyclotomic(Rational(static_cast<long>(m[i]))) * c);
        }
        return r;
    }

    /// Set the variables listed in `kill` to zero.
    Polynomial restricted_to_zero(const std::vector<unsigned>& kill) const {
        std::vector<bool> dead(n_, false);
        for (unsigned i : kill) dead.at(i) = true;
        Polynomial r(n_);
        for (const auto& [m, c] : t_) {
            bool survives = true;
            for (unsigned i = 0; i < n_; ++i)
                if (dead[i] && m[i]) { survives = false; break; }
            if (survives) r.add_term(m, c);
        }
        return r;
    }

    /// Re-express in the subset of variables `keep` (all terms must only use them).
    Polynomial compressed(const std::vector<unsigned>& keep) const {
        std::vector<int> pos(n_, -1);
        for (size_t k = 0; k < keep.size(); ++k) pos.at(keep[k]) = static_cast<int>(k);
        Polynomial r(static_cast<unsigned>(keep.size()));
        for (const auto& [m, c] : t_) {
            Monomial mm(keep.size(), 0);
            for (unsigned i = 0; i < n_; ++i) {
                if (!m[i]) continue;
                if (pos[i] < 0) throw ValidationError("compressed: term uses a dropped variable");
                mm[pos[i]] = m[i];
            }
            r.add_term(mm, c);
        }
        return r;
    }

    /// Push a polynomial in `keep`-indexed variables back into N ambient variables.
    static Polynomial embedded(const Polynomial& p, unsigned nvars,
                               const std::vector<unsigned>& keep) {
        Polynomial r(nvars);
        for (const auto& [m, c] : p.terms()) {
            Monomial mm(nvars, 0);
            for (size_t k = 0; k < keep.size(); ++k) mm.at(keep[k]) = m[k];
            r.add_term(mm, c);
        }
        return r;
    }

    /// Render with a fixed monomial order (weighted revlex when weights given,
    /// otherwise total degree + exponent order), highest term last.
    std::string str() const {
        if (t_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [m, c] : t_) {
            std::string cs = c.str();
            bool neg = false;
            auto r = c.as_rational();
            Cyclotomic cc = c;
            if (r && r->sign() < 0) {
                neg = true;
                cc = -c;
                cs = cc.str();
            }
            os << (first ? (neg ? "-" : "") : (neg ? " - " : " + "));
            bool needs_coeff = !(cc.is_one()) || total_degree(m) == 0;
            bool compound = cs.find(' ') != std::string::npos;
            if (needs_coeff) {
                if (compound)
                    os << "(" << cs << ")";
                else
                    os << cs;
            }
            bool any = false;
            for (unsigned i = 0; i < n_; ++i) {
                if (!m[i]) continue;
                if (any || needs_coeff) os << "*";
                os << "x" << (i + 1);
                if (m[i] > 1) os << "^" << m[i];
                any = true;
            }
            first = false;
        }
        return os.str();
    }

    friend std::ostream& operator<<(std::ostream& os, const Polynomial& p) {
        return os << p.str();
    }

    /**
     * Parse the grammar described in the file header.  If nvars == 0 the
     * variable count is inferred as the highest index used.
     */
    static Polynomial parse(const std::string& text, unsigned nvars = 0);

private:
    static void check_arity(const Polynomial& a, const Polynomial& b) {
        if (a.n_ != b.n_) throw ValidationError("polynomial arity mismatch");
    }

    unsigned n_;
    std::map<Monomial, Cyclotomic> t_;
};

namespace detail {

struct PolyToken {
    enum Kind { Num, Var, Caret, Star, Plus, Minus, End } kind;
    Rational num;
    unsigned var = 0; // 1-based variable index
};

inline std::vector<PolyToken> poly_lex(const std::string& s) {
    std::vector<PolyToken> out;
    size_t i = 0;
    auto fail = [&](const std::string& why) {
        throw ParseError(why + " at offset " + std::to_string(i) + " in '" + s + "'");
    };
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) { ++i; continue; }
        if (c == '^') { out.push_back({PolyToken::Caret, {}, 0}); ++i; continue; }
        if (c == '*') { out.push_back({PolyToken::Star, {}, 0}); ++i; continue; }
        if (c == '+') { out.push_back({PolyToken::Plus, {}, 0}); ++i; continue; }
        if (c == '-') { out.push_back({PolyToken::Minus, {}, 0}); ++i; continue; }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t j = i;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
            std::string digits = s.substr(i, j - i);
            // optional /denominator
            if (j < s.size() && s[j] == '/') {
                size_t k = j + 1;
                size_t d0 = k;
                while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) ++k;
                if (k == d0) fail("expected denominator digits");
                digits += s.substr(j, k - j);
                j = k;
            }
            out.push_back({PolyToken::Num, Rational::parse(digits), 0});
            i = j;
            continue;
        }
        if (c == 'x' || c == 'y' || c == 'z' || c == 'w') {
            size_t j = i + 1;
            unsigned idx = 0;
            if (c == 'x' && j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) {
                while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) {
                    idx = idx * 10 + static_cast<unsigned>(s[j] - '0');
                    ++j;
                }
                if (idx == 0) fail("variable index must be >= 1");
            } else {
                switch (c) {
                    case 'x': idx = 1; break;
                    case 'y': idx = 2; break;
                    case 'z': idx = 3; break;
                    case 'w': idx = 4; break;
                }
            }
            out.push_back({PolyToken::Var, {}, idx});
            i = j;
            continue;
        }
        fail(std::string("unexpected character '") + c + "'");
    }
    out.push_back({PolyToken::End, {}, 0});
    return out;
}

} // namespace detail

inline Polynomial Polynomial::parse(const std::string& text, unsigned nvars) {
    auto toks = detail::poly_lex(text);
    // First pass: find the highest variable index so the arity is known.
    unsigned maxvar = 0;
    for (const auto& t : toks)
        if (t.kind == detail::PolyToken::Var) maxvar = std::max(maxvar, t.var);
    unsigned n = nvars ? nvars : maxvar;
    if (maxvar > n) throw ParseError("variable x" + std::to_string(maxvar) +
                                     " exceeds declared arity " + std::to_string(n));
    if (n == 0) throw ParseError("no variables in polynomial '" + text + "'");

    Polynomial result(n);
    size_t pos = 0;
    auto peek = [&]() -> const detail::PolyToken& { return toks[pos]; };
    auto advance = [&]() { ++pos; };

    bool expect_term = true;
    Rational sign(1);
    while (peek().kind != detail::PolyToken::End) {
        if (!expect_term) {
            if (peek().kind == detail::PolyToken::Plus) {
                sign = Rational(1);
                advance();
            } else if (peek().kind == detail::PolyToken::Minus) {
                sign = Rational(-1);
                advance();
            } else {
                throw ParseError("expected '+' or '-' between terms in '" + text + "'");
            }
            expect_term = true;
            continue;
        }
        // leading sign of the very first term
        while (peek().kind == detail::PolyToken::Plus || peek().kind == detail::PolyToken::Minus) {
            if (peek().kind == detail::PolyToken::Minus) sign = sign * Rational(-1);
            advance();
        }
        // one term: factor ('*' factor)*
        Rational coeff = sign;
        Monomial mono(n, 0);
        bool saw_factor = false;
        while (true) {
            const auto& t = peek();
            if (t.kind == detail::PolyToken::Num) {
                coeff *= t.num;
                advance();
            } else if (t.kind == detail::PolyToken::Var) {
                unsigned vi = t.var - 1;
                advance();
                unsigned e = 1;
                if (peek().kind == detail::PolyToken::Caret) {
                    advance();
                    if (peek().kind != detail::PolyToken::Num || !peek().num.is_integer() ||
                        peek().num.sign() < 0)
                        throw ParseError("exponent must be a nonnegative integer in '" + text + "'");
                    e = static_cast<unsigned>(peek().num.num().get_ui());
                    advance();
                }
                mono[vi] += e;
            } else {
                throw ParseError("expected a coefficient or variable in '" + text + "'");
            }
            saw_factor = true;
            if (peek().kind == detail::PolyToken::Star) {
                advance();
                continue;
            }
            break;
        }
        if (!saw_factor) throw ParseError("empty term in '" + text + "'");
        result.add_term(mono, Cyclotomic(coeff));
        sign = Rational(1);
        expect_term = false;
    }
    if (expect_term) throw ParseError("trailing operator in '" + text + "'");
    return result;
}

} // namespace orbifrob

#endif
