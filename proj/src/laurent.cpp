#include "rootseries/laurent.hpp"

#include <sstream>

namespace rootseries {

int SymbolTable::add(const std::string& name, bool invertible) {
    if (index(name) >= 0) throw std::invalid_argument("duplicate symbol: " + name);
    names_.push_back(name);
    invertible_.push_back(invertible);
    return static_cast<int>(names_.size()) - 1;
}

int SymbolTable::index(const std::string& name) const {
    for (size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == name) return static_cast<int>(i);
    return -1;
}

LaurentPoly LaurentPoly::constant(SymbolTablePtr table, const Rational& c) {
    LaurentPoly p(std::move(table));
    if (c != 0) {
        if (!p.table_) throw std::invalid_argument("constant needs a symbol table");
        p.terms_.emplace(Monomial(p.table_->size(), 0), c);
    }
    return p;
}

namespace {
Complex cpow_int(Complex z, int e) {
    if (e == 0) return Complex(1.0, 0.0);
    bool inv = e < 0;
    unsigned k = static_cast<unsigned>(inv ? -e : e);
    Complex out(1.0, 0.0);
    while (k) {
        if (k & 1) out *= z;
        k >>= 1;
        if (k) z *= z;
    }
    return inv ? Complex(1.0, 0.0) / out : out;
}
}  // namespace

LaurentPoly LaurentPoly::monomial(SymbolTablePtr table, const Monomial& m, const Rational& c) {
    LaurentPoly p(std::move(table));
    p.require_valid_monomial(m);
    if (c != 0) p.terms_.emplace(m, c);
    return p;
}

LaurentPoly LaurentPoly::variable(SymbolTablePtr table, int sym, int exponent, const Rational& c) {
    if (!table || sym < 0 || sym >= table->size())
        throw std::invalid_argument("variable index out of range");
    Monomial m(table->size(), 0);
    m[sym] = exponent;
    return monomial(std::move(table), m, c);
}

void LaurentPoly::require_valid_monomial(const Monomial& m) const {
    int n = table_ ? table_->size() : 0;
    if (static_cast<int>(m.size()) != n)
        throw std::invalid_argument("monomial width does not match symbol table");
    for (int i = 0; i < n; ++i)
        if (m[i] < 0 && !table_->invertible(i))
            throw std::invalid_argument("negative exponent on non-invertible symbol " +
                                        table_->name(i));
}

void LaurentPoly::require_compatible(const LaurentPoly& o) const {
    const SymbolTable* a = table_.get();
    const SymbolTable* b = o.table_.get();
    if (a == b) return;
    // Zero polynomials over the empty table combine with anything.
    if (!a && o.terms_.empty()) return;
    if (!b && terms_.empty()) return;
    if (a && b && *a == *b) return;
    throw std::invalid_argument("symbol-table mismatch");
}

void LaurentPoly::add_term(const Monomial& m, const Rational& c) {
    if (c == 0) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, c);
    } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
    require_compatible(o);
    if (!table_ && o.table_) table_ = o.table_;
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) {
    require_compatible(o);
    if (!table_ && o.table_) table_ = o.table_;
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    a.require_compatible(b);
    LaurentPoly out(a.table_ ? a.table_ : b.table_);
    Monomial m;
    for (const auto& [ma, ca] : a.terms_) {
        for (const auto& [mb, cb] : b.terms_) {
            m = ma;
            for (size_t i = 0; i < m.size(); ++i) m[i] += mb[i];
            out.add_term(m, ca * cb);
        }
    }
    return out;
}

LaurentPoly LaurentPoly::operator-() const {
    LaurentPoly out(table_);
    for (const auto& [m, c] : terms_) out.terms_.emplace(m, -c);
    return out;
}

LaurentPoly LaurentPoly::scaled(const Rational& c) const {
    LaurentPoly out(table_);
    if (c == 0) return out;
    for (const auto& [m, k] : terms_) out.terms_.emplace(m, k * c);
    return out;
}

LaurentPoly LaurentPoly::mul_monomial(const Monomial& m, const Rational& c) const {
    require_valid_monomial(m);
    LaurentPoly out(table_);
    if (c == 0) return out;
    for (const auto& [mt, ct] : terms_) {
        Monomial mm = mt;
        for (size_t i = 0; i < mm.size(); ++i) mm[i] += m[i];
        out.require_valid_monomial(mm);
        out.terms_.emplace(std::move(mm), ct * c);
    }
    return out;
}

LaurentPoly LaurentPoly::pow(int e) const {
    if (e < 0) throw std::invalid_argument("LaurentPoly::pow wants e >= 0");
    LaurentPoly out = LaurentPoly::constant(table_, Rational(1));
    LaurentPoly base = *this;
    while (e > 0) {
        if (e & 1) out = out * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return out;
}

bool LaurentPoly::operator==(const LaurentPoly& o) const {
    require_compatible(o);
    return terms_ == o.terms_;
}

bool LaurentPoly::is_integral() const {
    for (const auto& [m, c] : terms_)
        if (!is_integer(c)) return false;
    return true;
}

LaurentPoly LaurentPoly::derivative(int sym) const {
    if (!table_ || sym < 0 || sym >= table_->size())
        throw std::invalid_argument("derivative: bad symbol index");
    LaurentPoly out(table_);
    for (const auto& [m, c] : terms_) {
        if (m[sym] == 0) continue;
        Monomial mm = m;
        mm[sym] -= 1;
        out.add_term(mm, c * Rational(m[sym]));
    }
    return out;
}

Complex LaurentPoly::eval(const std::map<std::string, Complex>& bindings) const {
    int n = table_ ? table_->size() : 0;
    std::vector<Complex> vals(n);
    std::vector<bool> used(n, false);
    for (const auto& [m, c] : terms_)
        for (int i = 0; i < n; ++i)
            if (m[i] != 0) used[i] = true;
    for (int i = 0; i < n; ++i) {
        if (!used[i]) continue;
        auto it = bindings.find(table_->name(i));
        if (it == bindings.end())
            throw std::invalid_argument("unbound symbol: " + table_->name(i));
        vals[i] = it->second;
    }
    Complex acc(0.0, 0.0);
    for (const auto& [m, c] : terms_) {
        Complex term = to_complex(c);
        for (int i = 0; i < n; ++i) {
            if (m[i] == 0) continue;
            if (vals[i] == Complex(0.0, 0.0) && m[i] < 0)
                throw std::domain_error("zero bound to negatively-exponented symbol " +
                                        table_->name(i));
            term *= cpow_int(vals[i], m[i]);
        }
        acc += term;
    }
    return acc;
}

Rational LaurentPoly::eval_rational(const std::map<std::string, Rational>& bindings) const {
    int n = table_ ? table_->size() : 0;
    std::vector<Rational> vals(n);
    std::vector<bool> used(n, false);
    for (const auto& [m, c] : terms_)
        for (int i = 0; i < n; ++i)
            if (m[i] != 0) used[i] = true;
    for (int i = 0; i < n; ++i) {
        if (!used[i]) continue;
        auto it = bindings.find(table_->name(i));
        if (it == bindings.end())
            throw std::invalid_argument("unbound symbol: " + table_->name(i));
        vals[i] = it->second;
    }
    Rational acc(0);
    for (const auto& [m, c] : terms_) {
        Rational term = c;
        for (int i = 0; i < n; ++i) {
            if (m[i] == 0) continue;
            if (vals[i] == 0 && m[i] < 0)
                throw std::domain_error("zero bound to negatively-exponented symbol " +
                                        table_->name(i));
            term *= rational_pow(vals[i], m[i]);
        }
        acc += term;
    }
    return acc;
}

std::string LaurentPoly::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << rational_to_string(c);
        for (size_t i = 0; i < m.size(); ++i) {
            if (m[i] == 0) continue;
            os << "*" << table_->name(static_cast<int>(i));
            if (m[i] != 1) os << "^" << m[i];
        }
    }
    return os.str();
}

SymbolSet SymbolSet::make(int c_max, int x_count, bool with_nu, bool with_t) {
    auto table = std::make_shared<SymbolTable>();
    SymbolSet s;
    s.alpha_idx = table->add("alpha", true);
    s.c_max = c_max;
    for (int k = 1; k <= c_max; ++k) {
        int idx = table->add("c" + std::to_string(k), k == 1);
        if (k == 1) s.c_base = idx;
    }
    s.x_count = x_count;
    for (int i = 1; i <= x_count; ++i) {
        int idx = table->add("x" + std::to_string(i), false);
        if (i == 1) s.x_base = idx;
    }
    if (with_nu) s.nu_idx = table->add("nu", false);
    if (with_t) s.t_idx = table->add("t", false);
    s.table = table;
    return s;
}

LaurentPoly SymbolSet::c(int k) const {
    if (k < 1 || k > c_max) throw std::out_of_range("c index out of range");
    return LaurentPoly::variable(table, c_base + k - 1);
}

LaurentPoly SymbolSet::c1_pow(int e) const {
    return LaurentPoly::variable(table, c_base, e);
}

LaurentPoly SymbolSet::x(int i) const {
    if (i < 1 || i > x_count) throw std::out_of_range("x index out of range");
    return LaurentPoly::variable(table, x_base + i - 1);
}

LaurentPoly SymbolSet::nu() const {
    if (nu_idx < 0) throw std::logic_error("nu not in table");
    return LaurentPoly::variable(table, nu_idx);
}

LaurentPoly SymbolSet::t() const {
    if (t_idx < 0) throw std::logic_error("t not in table");
    return LaurentPoly::variable(table, t_idx);
}

LaurentPoly falling_factorial(const LaurentPoly& x, int k) {
    if (k < 0) throw std::invalid_argument("falling factorial wants k >= 0");
    LaurentPoly out = LaurentPoly::constant(x.table(), Rational(1));
    for (int i = 1; i <= k; ++i)
        out = out * (x - LaurentPoly::constant(x.table(), Rational(i - 1)));
    return out;
}

LaurentPoly gen_binomial(const LaurentPoly& x, long m) {
    if (m < 0) return LaurentPoly(x.table());
    LaurentPoly p = falling_factorial(x, static_cast<int>(m));
    return p.scaled(Rational(1) / Rational(factorial(m)));
}

}  // namespace rootseries
