#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace rootseries {

using Integer = mpz_class;
using Rational = mpq_class;
using Complex = std::complex<double>;

inline Rational make_rational(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

// Accepts "num", "num/den", decimal integers with sign.
inline Rational rational_from_string(const std::string& s) {
    auto slash = s.find('/');
    Rational q;
    if (slash == std::string::npos) {
        if (mpq_set_str(q.get_mpq_t(), s.c_str(), 10) != 0)
            throw std::invalid_argument("bad rational literal: " + s);
    } else {
        if (mpq_set_str(q.get_mpq_t(), s.c_str(), 10) != 0)
            throw std::invalid_argument("bad rational literal: " + s);
    }
    if (q.get_den() == 0) throw std::invalid_argument("rational with zero denominator: " + s);
    q.canonicalize();
    return q;
}

// Canonical "num" or "num/den" text (den > 0, coprime).
inline std::string rational_to_string(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

inline double to_double(const Rational& q) { return q.get_d(); }

inline Complex to_complex(const Rational& q) { return Complex(q.get_d(), 0.0); }

inline Integer factorial(long n) {
    if (n < 0) throw std::invalid_argument("factorial of negative");
    Integer f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
    return f;
}

// q^e for integer e of either sign (q != 0 when e < 0).
inline Rational rational_pow(const Rational& q, long e) {
    if (e == 0) return Rational(1);
    bool inv = e < 0;
    unsigned long k = static_cast<unsigned long>(inv ? -e : e);
    Rational r;
    mpz_pow_ui(r.get_num().get_mpz_t(), q.get_num().get_mpz_t(), k);
    mpz_pow_ui(r.get_den().get_mpz_t(), q.get_den().get_mpz_t(), k);
    r.canonicalize();
    if (inv) {
        if (r == 0) throw std::domain_error("negative power of zero");
        r = 1 / r;
    }
    return r;
}

// Exact conversion: every finite double is a dyadic rational.
inline Rational rational_from_double(double x) {
    Rational q(x);
    q.canonicalize();
    return q;
}

}  // namespace rootseries
