/**
 * @file cyclotomic.hpp
 * @brief Exact arithmetic in cyclotomic fields Q(zeta_m).
 *
 * An element is stored as a residue in Q[t]/Phi_m(t) with t the primitive
 * m-th root of unity: a coefficient vector of length phi(m) over Rational.
 * Mixed-modulus arithmetic promotes both operands to lcm of the moduli
 * (zeta_m = zeta_M^{M/m}); moduli are never demoted, so the representation
 * of an element depends on the history of the computation while its value
 * does not.  Equality always compares values (after promotion).
 */
#ifndef ORBIFROB_CYCLOTOMIC_HPP
#define ORBIFROB_CYCLOTOMIC_HPP

#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <vector>

#include "orbifrob/rational.hpp"

namespace orbifrob {

namespace detail {

inline unsigned euler_phi(unsigned m) {
    unsigned result = m, n = m;
    for (unsigned p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            while (n % p == 0) n /= p;
            result -= result / p;
        }
    }
    if (n > 1) result -= result / n;
    return result;
}

/// Exact division of integer polynomials, used to build Phi_m recursively.
/// num := num / den, both dense low-to-high; division must be exact.
inline std::vector<mpz_class> mpz_poly_exact_div(std::vector<mpz_class> num,
                                                 const std::vector<mpz_class>& den) {
    const size_t dd = den.size() - 1;
    std::vector<mpz_class> quot(num.size() - dd, 0);
    for (size_t k = num.size(); k-- > dd + 1 || k == dd;) {
        // leading index of the current remainder is k
        if (num[k] == 0) { if (k == dd) break; continue; }
        mpz_class q = num[k] / den[dd];
        quot[k - dd] = q;
        for (size_t j = 0; j <= dd; ++j) num[k - dd + j] -= q * den[j];
        if (k == dd) break;
    }
    return quot;
}

/// Phi_m as an integer polynomial (dense, low-to-high), memoised.
inline const std::vector<mpz_class>& cyclotomic_polynomial(unsigned m) {
    static std::map<unsigned, std::vector<mpz_class>> cache;
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;
    // t^m - 1 divided by the product of Phi_d for proper divisors d of m.
    std::vector<mpz_class> num(m + 1, 0);
    num[0] = -1;
    num[m] = 1;
    for (unsigned d = 1; d < m; ++d) {
        if (m % d == 0) num = mpz_poly_exact_div(std::move(num), cyclotomic_polynomial(d));
    }
    return cache.emplace(m, std::move(num)).first->second;
}

// --- dense rational polynomial helpers (low-to-high), internal only ---

inline void rat_poly_trim(std::vector<Rational>& p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
}

inline std::vector<Rational> rat_poly_mul(const std::vector<Rational>& a,
                                          const std::vector<Rational>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<Rational> c(a.size() + b.size() - 1, Rational(0));
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_zero()) continue;
        for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    }
    rat_poly_trim(c);
    return c;
}

/// In-place remainder of p modulo the monic-up-to-unit divisor d.
inline void rat_poly_mod(std::vector<Rational>& p, const std::vector<Rational>& d) {
    const size_t dd = d.size() - 1;
    rat_poly_trim(p);
    while (p.size() > dd) {
        Rational q = p.back() / d[dd];
        const size_t shift = p.size() - 1 - dd;
        for (size_t j = 0; j <= dd; ++j) p[shift + j] -= q * d[j];
        rat_poly_trim(p);
    }
}

/// Extended gcd over Q[t]: returns (g, u) with u*a === g  (mod b), g = gcd(a,b).
inline std::pair<std::vector<Rational>, std::vector<Rational>>
rat_poly_half_xgcd(std::vector<Rational> a, std::vector<Rational> b) {
    std::vector<Rational> u0{Rational(1)}, u1{};
    rat_poly_trim(a);
    rat_poly_trim(b);
    while (!b.empty()) {
        // divide a by b: quotient q, remainder r
        std::vector<Rational> r = a, q;
        const size_t db = b.size() - 1;
        q.assign(r.size() > db ? r.size() - db : 1, Rational(0));
        while (r.size() > db) {
            Rational c = r.back() / b[db];
            const size_t shift = r.size() - 1 - db;
            q[shift] = c;
            for (size_t j = 0; j <= db; ++j) r[shift + j] -= c * b[j];
            rat_poly_trim(r);
        }
        rat_poly_trim(q);
        // (a, b) <- (b, r);  (u0, u1) <- (u1, u0 - q*u1)
        std::vector<Rational> qu = rat_poly_mul(q, u1);
        std::vector<Rational> u2 = u0;
        if (u2.size() < qu.size()) u2.resize(qu.size(), Rational(0));
        for (size_t i = 0; i < qu.size(); ++i) u2[i] -= qu[i];
        rat_poly_trim(u2);
        a = std::move(b);
        b = std::move(r);
        u0 = std::move(u1);
        u1 = std::move(u2);
    }
    return {a, u0};
}

} // namespace detail

/**
 * An element of Q(zeta_m), reduced modulo Phi_m.
 */
class Cyclotomic {
public:
    /// Zero in Q = Q(zeta_1).
    Cyclotomic() : m_(1), c_(1, Rational(0)) {}

    /// Embed a rational number.
    Cyclotomic(const Rational& r) : m_(1), c_(1, r) {}
    Cyclotomic(long n) : m_(1), c_(1, Rational(n)) {}
    Cyclotomic(int n) : m_(1), c_(1, Rational(n)) {}

    /// Element of Q(zeta_m) from an arbitrary-degree coefficient vector in t.
    Cyclotomic(unsigned m, std::vector<Rational> coeffs) : m_(m) {
        if (m == 0) throw ValidationError("cyclotomic modulus must be positive");
        c_ = reduce(m, std::move(coeffs));
    }

    /// zeta_q^p for the reduced fraction p/q of r (taken mod 1).
    static Cyclotomic root_of_unity(const Rational& r) {
        Rational x = r.mod1();
        unsigned q = static_cast<unsigned>(x.den().get_ui());
        unsigned long p = x.num().get_ui();
        std::vector<Rational> c(p + 1, Rational(0));
        c[p] = Rational(1);
        return Cyclotomic(q, std::move(c));
    }

    unsigned modulus() const { return m_; }
    const std::vector<Rational>& coeffs() const { return c_; }

    bool is_zero() const {
        for (const auto& x : c_)
            if (!x.is_zero()) return false;
        return true;
    }

    /// If the value lies in Q, return it.
    std::optional<Rational> as_rational() const {
        for (size_t i = 1; i < c_.size(); ++i)
            if (!c_[i].is_zero()) return std::nullopt;
        return c_[0];
    }

    bool is_one() const {
        auto r = as_rational();
        return r && *r == Rational(1);
    }

    /// Same value re-expressed in Q(zeta_M); m must divide M.
    Cyclotomic promoted(unsigned M) const {
        if (M == m_) return *this;
        if (M % m_ != 0) throw ValidationError("cyclotomic promotion to a non-multiple modulus");
        const unsigned k = M / m_;
        std::vector<Rational> big;
        big.resize((c_.size() - 1) * k + 1, Rational(0));
        for (size_t i = 0; i < c_.size(); ++i) big[i * k] = c_[i];
        return Cyclotomic(M, std::move(big));
    }

    friend Cyclotomic operator+(const Cyclotomic& a, const Cyclotomic& b) {
        auto [x, y] = to_common(a, b);
        for (size_t i = 0; i < y.c_.size(); ++i) x.c_[i] += y.c_[i];
        return x;
    }
    friend Cyclotomic operator-(const Cyclotomic& a, const Cyclotomic& b) {
        auto [x, y] = to_common(a, b);
        for (size_t i = 0; i < y.c_.size(); ++i) x.c_[i] -= y.c_[i];
        return x;
    }
    Cyclotomic operator-() const {
        Cyclotomic r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }
    friend Cyclotomic operator*(const Cyclotomic& a, const Cyclotomic& b) {
        auto [x, y] = to_common(a, b);
        return Cyclotomic(x.m_, detail::rat_poly_mul(x.c_, y.c_));
    }

    /// Multiplicative inverse; throws on zero.  Uses the extended Euclidean
    /// algorithm against Phi_m, which is invertible because Phi_m is
    /// irreducible over Q.
    Cyclotomic inverse() const {
        if (is_zero()) throw ValidationError("cyclotomic division by zero");
        std::vector<Rational> phi = phi_poly(m_);
        auto [g, u] = detail::rat_poly_half_xgcd(std::vector<Rational>(c_), phi);
        // g is a nonzero constant; scale u by 1/g.
        if (g.size() != 1 || g[0].is_zero())
            throw ValidationError("cyclotomic inverse: gcd with Phi_m not a unit");
        for (auto& x : u) x /= g[0];
        return Cyclotomic(m_, std::move(u));
    }

    friend Cyclotomic operator/(const Cyclotomic& a, const Cyclotomic& b) {
        return a * b.inverse();
    }

    Cyclotomic& operator+=(const Cyclotomic& o) { return *this = *this + o; }
    Cyclotomic& operator-=(const Cyclotomic& o) { return *this = *this - o; }
    Cyclotomic& operator*=(const Cyclotomic& o) { return *this = *this * o; }
    Cyclotomic& operator/=(const Cyclotomic& o) { return *this = *this / o; }

    Cyclotomic pow(long e) const {
        if (e < 0) return inverse().pow(-e);
        Cyclotomic acc(Rational(1)), base = *this;
        unsigned long k = static_cast<unsigned long>(e);
        while (k) {
            if (k & 1) acc *= base;
            base *= base;
            k >>= 1;
        }
        return acc;
    }

    friend bool operator==(const Cyclotomic& a, const Cyclotomic& b) {
        auto [x, y] = to_common(a, b);
        return x.c_ == y.c_;
    }
    friend bool operator!=(const Cyclotomic& a, const Cyclotomic& b) { return !(a == b); }

    /// Total order usable as a map key (representation-level after promotion).
    friend bool cyclo_less(const Cyclotomic& a, const Cyclotomic& b) {
        auto [x, y] = to_common(a, b);
        for (size_t i = 0; i < x.c_.size(); ++i) {
            if (x.c_[i] != y.c_[i]) return x.c_[i] < y.c_[i];
        }
        return false;
    }

    /// The same value re-expressed over the smallest cyclotomic field that
    /// contains it (the least divisor d of the current modulus such that the
    /// value lies in Q(zeta_d)).  Arithmetic never demotes moduli on its own;
    /// this is the entry point for anything that wants the minimal form.
    Cyclotomic canonicalized() const {
        for (unsigned d = 1; d < m_; ++d) {
            if (m_ % d != 0) continue;
            if (auto sol = demoted_coeffs(d)) return Cyclotomic(d, std::move(*sol));
        }
        return *this;
    }

    /// Human-readable form: rational combination of powers of z<d> where d is
    /// the smallest modulus containing the value (display-only demotion).
    std::string str() const { return canonicalized().str_raw(); }

    friend std::ostream& operator<<(std::ostream& os, const Cyclotomic& c) {
        return os << c.str();
    }

private:
    /// Raw rendering at the stored modulus, no demotion.
    std::string str_raw() const {
        if (is_zero()) return "0";
        std::ostringstream os;
        bool first = true;
        for (size_t i = 0; i < c_.size(); ++i) {
            const Rational& r = c_[i];
            if (r.is_zero()) continue;
            Rational a = r;
            if (!first) {
                os << (a.sign() < 0 ? " - " : " + ");
                if (a.sign() < 0) a = -a;
            } else if (a.sign() < 0 && i > 0) {
                // print leading minus attached to the monomial
                os << "-";
                a = -a;
            } else if (a.sign() < 0) {
                os << "-";
                a = -a;
            }
            if (i == 0) {
                os << a.str();
            } else {
                if (!(a == Rational(1))) os << a.str() << "*";
                os << "z" << m_;
                if (i > 1) os << "^" << i;
            }
            first = false;
        }
        return os.str();
    }

    /// Attempt to express the residue over the Phi_d basis for a divisor d of
    /// the modulus; returns the coefficient vector on success.  Solves the
    /// small exact linear system whose columns are the residues of the powers
    /// zeta_d^i = t^{i*(m/d)} inside Q(zeta_m).
    std::optional<std::vector<Rational>> demoted_coeffs(unsigned d) const {
        const unsigned k = m_ / d;
        const size_t rows = c_.size();
        const size_t cols = detail::euler_phi(d);
        std::vector<std::vector<Rational>> M(rows, std::vector<Rational>(cols + 1, Rational(0)));
        for (size_t i = 0; i < cols; ++i) {
            std::vector<Rational> e(i * k + 1, Rational(0));
            e[i * k] = Rational(1);
            std::vector<Rational> v = reduce(m_, std::move(e));
            for (size_t r = 0; r < rows; ++r) M[r][i] = v[r];
        }
        for (size_t r = 0; r < rows; ++r) M[r][cols] = c_[r];
        std::vector<size_t> pivot_col;
        size_t rr = 0;
        for (size_t cc = 0; cc < cols && rr < rows; ++cc) {
            size_t p = rr;
            while (p < rows && M[p][cc].is_zero()) ++p;
            if (p == rows) continue;
            std::swap(M[p], M[rr]);
            const Rational piv = M[rr][cc];
            for (size_t j = cc; j <= cols; ++j) M[rr][j] /= piv;
            for (size_t r2 = 0; r2 < rows; ++r2) {
                if (r2 == rr || M[r2][cc].is_zero()) continue;
                const Rational f = M[r2][cc];
                for (size_t j = cc; j <= cols; ++j) M[r2][j] -= f * M[rr][j];
            }
            pivot_col.push_back(cc);
            ++rr;
        }
        for (size_t r2 = rr; r2 < rows; ++r2)
            if (!M[r2][cols].is_zero()) return std::nullopt;
        std::vector<Rational> out(cols, Rational(0));
        for (size_t r2 = 0; r2 < rr; ++r2) out[pivot_col[r2]] = M[r2][cols];
        return out;
    }

    static std::vector<Rational> phi_poly(unsigned m) {
        const auto& z = detail::cyclotomic_polynomial(m);
        std::vector<Rational> p;
        p.reserve(z.size());
        for (const auto& c : z) p.emplace_back(mpq_class(c));
        return p;
    }

    /// Reduce an arbitrary polynomial in t to the canonical residue:
    /// fold exponents mod m (valid since t^m = 1 in Q[t]/Phi_m), then take
    /// the remainder modulo Phi_m and pad to length phi(m).
    static std::vector<Rational> reduce(unsigned m, std::vector<Rational> raw) {
        std::vector<Rational> folded(m, Rational(0));
        for (size_t i = 0; i < raw.size(); ++i) {
            if (!raw[i].is_zero()) folded[i % m] += raw[i];
        }
        std::vector<Rational> phi = phi_poly(m);
        detail::rat_poly_mod(folded, phi);
        folded.resize(detail::euler_phi(m), Rational(0));
        return folded;
    }

    static std::pair<Cyclotomic, Cyclotomic> to_common(const Cyclotomic& a, const Cyclotomic& b) {
        unsigned M = std::lcm(a.m_, b.m_);
        return {a.promoted(M), b.promoted(M)};
    }

    unsigned m_;
    std::vector<Rational> c_; // length phi(m_), residue mod Phi_m
};

/// Quantum integer [gamma]_lambda = 1 + lambda + ... + lambda^{gamma-1};
/// [0] = 0 by convention (the formulas that use it only need gamma >= 1).
inline Cyclotomic quantum_bracket(unsigned gamma, const Cyclotomic& lambda) {
    Cyclotomic sum(0);
    Cyclotomic pw(Rational(1));
    for (unsigned j = 0; j < gamma; ++j) {
        sum += pw;
        pw *= lambda;
    }
    return sum;
}

} // namespace orbifrob

#endif
