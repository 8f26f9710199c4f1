#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "rootseries/rational.hpp"

namespace rootseries {

// Ordered symbol table for Laurent polynomials. Only symbols flagged
// invertible may carry negative exponents (alpha and c1 in the series
// tables; everything else is an ordinary polynomial variable).
class SymbolTable {
public:
    int add(const std::string& name, bool invertible);
    int index(const std::string& name) const;  // -1 if absent
    int size() const { return static_cast<int>(names_.size()); }
    const std::string& name(int i) const { return names_.at(i); }
    bool invertible(int i) const { return invertible_.at(i); }
    bool operator==(const SymbolTable& o) const {
        return names_ == o.names_ && invertible_ == o.invertible_;
    }

private:
    std::vector<std::string> names_;
    std::vector<bool> invertible_;
};

using SymbolTablePtr = std::shared_ptr<const SymbolTable>;
using Monomial = std::vector<int>;  // dense exponent vector over the table

// Exact multivariate Laurent polynomial over Q. Terms are kept in a map
// keyed by exponent vector (lexicographic), zero coefficients pruned, so
// representation and serialization are canonical.
class LaurentPoly {
public:
    LaurentPoly() = default;  // zero over the empty table
    explicit LaurentPoly(SymbolTablePtr table) : table_(std::move(table)) {}

    static LaurentPoly constant(SymbolTablePtr table, const Rational& c);
    static LaurentPoly monomial(SymbolTablePtr table, const Monomial& m, const Rational& c);
    static LaurentPoly variable(SymbolTablePtr table, int sym, int exponent = 1,
                                const Rational& c = Rational(1));

    const SymbolTablePtr& table() const { return table_; }
    bool is_zero() const { return terms_.empty(); }
    size_t term_count() const { return terms_.size(); }
    const std::map<Monomial, Rational>& terms() const { return terms_; }

    LaurentPoly& operator+=(const LaurentPoly& o);
    LaurentPoly& operator-=(const LaurentPoly& o);
    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
    friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
    LaurentPoly& operator*=(const LaurentPoly& o) { return *this = *this * o; }
    LaurentPoly operator-() const;

    LaurentPoly scaled(const Rational& c) const;
    // Multiply by c * prod sym^e; exponents may be negative on invertible symbols.
    LaurentPoly mul_monomial(const Monomial& m, const Rational& c) const;
    LaurentPoly pow(int e) const;  // e >= 0

    bool operator==(const LaurentPoly& o) const;
    bool operator!=(const LaurentPoly& o) const { return !(*this == o); }

    // True iff every coefficient is an integer (the zero poly qualifies).
    bool is_integral() const;

    // Formal d/d(sym).
    LaurentPoly derivative(int sym) const;

    Complex eval(const std::map<std::string, Complex>& bindings) const;
    Rational eval_rational(const std::map<std::string, Rational>& bindings) const;

    // Canonical text: terms in key order, exact rational coefficients.
    std::string str() const;

private:
    SymbolTablePtr table_;
    std::map<Monomial, Rational> terms_;

    void add_term(const Monomial& m, const Rational& c);
    void require_compatible(const LaurentPoly& o) const;
    void require_valid_monomial(const Monomial& m) const;
    friend class LaurentPolyTestPeer;
};

// poly_add / poly_mul / poly_eval spelled as free functions as well.
inline LaurentPoly poly_add(const LaurentPoly& p, const LaurentPoly& q) { return p + q; }
inline LaurentPoly poly_mul(const LaurentPoly& p, const LaurentPoly& q) { return p * q; }
inline Complex poly_eval(const LaurentPoly& p, const std::map<std::string, Complex>& b) {
    return p.eval(b);
}
inline bool is_integral(const LaurentPoly& p) { return p.is_integral(); }

// Standard symbol layout for series work: alpha, c1..c_cmax (alpha and c1
// invertible), then optional plain indeterminates x1..x_xcount, nu, t.
struct SymbolSet {
    SymbolTablePtr table;
    int alpha_idx = -1;
    int c_base = -1;  // c1 at c_base, ck at c_base + k - 1
    int c_max = 0;
    int x_base = -1;
    int x_count = 0;
    int nu_idx = -1;
    int t_idx = -1;

    static SymbolSet make(int c_max, int x_count = 0, bool with_nu = false, bool with_t = false);

    LaurentPoly zero() const { return LaurentPoly(table); }
    LaurentPoly constant(const Rational& q) const { return LaurentPoly::constant(table, q); }
    LaurentPoly alpha_pow(int e) const { return LaurentPoly::variable(table, alpha_idx, e); }
    LaurentPoly c(int k) const;            // the symbol c_k, 1 <= k <= c_max
    LaurentPoly c1_pow(int e) const;       // c1^e, e of either sign
    LaurentPoly x(int i) const;            // x_i, 1-based
    LaurentPoly nu() const;
    LaurentPoly t() const;
};

// Falling factorial (x)_k = prod_{i=1..k} (x - i + 1) for polynomial x.
LaurentPoly falling_factorial(const LaurentPoly& x, int k);
// Generalized binomial C(x, m) = (x)_m / m! for m >= 0, zero for m < 0.
LaurentPoly gen_binomial(const LaurentPoly& x, long m);

}  // namespace rootseries
