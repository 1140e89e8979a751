/**
 * @file rational.hpp
 * @brief Exact arbitrary-precision rational numbers.
 *
 * Thin value wrapper over GMP's mpq_class.  Invariants: always canonical
 * (lowest terms, positive denominator), never a zero denominator.  Every
 * operation is exact; nothing ever rounds.
 */
#ifndef ORBIFROB_RATIONAL_HPP
#define ORBIFROB_RATIONAL_HPP

#include <gmpxx.h>

#include <cstdint>
#include <ostream>
#include <string>

#include "orbifrob/error.hpp"

namespace orbifrob {

class Rational {
public:
    Rational() : v_(0) {}
    Rational(long n) : v_(static_cast<signed long>(n)) {}
    Rational(int n) : v_(n) {}
    Rational(long num, long den) {
        if (den == 0) throw ValidationError("rational with zero denominator");
        v_ = mpq_class(num, den);
        v_.canonicalize();
    }
    explicit Rational(const mpq_class& q) : v_(q) { v_.canonicalize(); }
    explicit Rational(const mpz_class& z) : v_(z) {}

    /// Parse "a", "-a", or "a/b".  Whitespace is not accepted.
    static Rational parse(const std::string& s) {
        if (s.empty()) throw ParseError("empty rational");
        try {
            mpq_class q(s, 10);
            if (q.get_den() == 0) throw ParseError("zero denominator in '" + s + "'");
            q.canonicalize();
            return Rational(q);
        } catch (const std::invalid_argument&) {
            throw ParseError("bad rational '" + s + "'");
        }
    }

    const mpq_class& raw() const { return v_; }
    mpz_class num() const { return v_.get_num(); }
    mpz_class den() const { return v_.get_den(); }

    bool is_zero() const { return v_ == 0; }
    bool is_integer() const { return v_.get_den() == 1; }
    int sign() const { return sgn(v_); }

    /// Largest integer <= *this.
    mpz_class floor() const {
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
        return q;
    }

    /// Representative in [0, 1) of *this modulo Z.
    Rational mod1() const {
        mpq_class r = v_ - mpq_class(floor());
        return Rational(r);
    }

    Rational operator-() const { return Rational(mpq_class(-v_)); }
    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw ValidationError("rational division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

    Rational pow(long e) const {
        if (e == 0) return Rational(1);
        if (is_zero()) {
            if (e < 0) throw ValidationError("0 to a negative power");
            return Rational(0);
        }
        mpz_class n = v_.get_num(), d = v_.get_den();
        bool inv = e < 0;
        unsigned long ue = static_cast<unsigned long>(inv ? -e : e);
        mpz_class pn, pd;
        mpz_pow_ui(pn.get_mpz_t(), n.get_mpz_t(), ue);
        mpz_pow_ui(pd.get_mpz_t(), d.get_mpz_t(), ue);
        mpq_class r = inv ? mpq_class(pd) / mpq_class(pn) : mpq_class(pn) / mpq_class(pd);
        r.canonicalize();
        return Rational(r);
    }

    std::string str() const { return v_.get_str(); }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
        return os << r.v_.get_str();
    }

private:
    mpq_class v_;
};

} // namespace orbifrob

#endif
