#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <variant>
#include <vector>

#include "rootseries/combinatorics.hpp"
#include "rootseries/laurent.hpp"

namespace rootseries {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Recursion cost control: Parts(I,k) enumeration is factorial in |I|.
inline constexpr int kMaxPartitionOrder = 10;

// A point of the log Riemann surface, (r, theta, n) with r > 0 and
// theta in (-pi, pi]. Makes z^gamma single-valued.
struct BranchPoint {
    double r = 1.0;
    double theta = 0.0;
    long n = 0;

    BranchPoint() = default;
    BranchPoint(double r_, double theta_, long n_) : r(r_), theta(theta_), n(n_) {
        if (!(r > 0.0)) throw std::invalid_argument("BranchPoint wants r > 0");
        if (!(theta > -kPi - 1e-15 && theta <= kPi + 1e-15))
            throw std::invalid_argument("BranchPoint wants theta in (-pi, pi]");
    }
    Complex value() const { return std::polar(r, theta); }
    Complex log() const { return Complex(std::log(r), theta + 2.0 * kPi * double(n)); }
    static BranchPoint from_complex(Complex z, long n = 0) {
        return BranchPoint(std::abs(z), std::arg(z), n);
    }
};

// z^gamma = exp(gamma ln r + i gamma theta + 2 pi i n gamma).
inline Complex branch_pow(const BranchPoint& z, Complex gamma) {
    return std::exp(gamma * z.log());
}

// The perturbation sum_i a_i z^{gamma_i}; coefficients a are call arguments.
struct Perturbation {
    std::vector<Complex> gammas;
    std::optional<std::vector<Rational>> gammas_exact;

    explicit Perturbation(std::vector<Complex> g) : gammas(std::move(g)) {
        if (gammas.empty()) throw std::invalid_argument("perturbation wants d >= 1");
    }
    static Perturbation from_rational(const std::vector<Rational>& g) {
        std::vector<Complex> cg;
        cg.reserve(g.size());
        for (const auto& q : g) cg.push_back(to_complex(q));
        Perturbation p(std::move(cg));
        p.gammas_exact = g;
        return p;
    }
    int d() const { return static_cast<int>(gammas.size()); }
};

// Base function g(z) = sum_{k>=1} c_k (z - alpha)^k with simple zero alpha.
struct BaseFunction {
    enum class Mode { numeric, symbolic };

    Mode mode = Mode::numeric;
    BranchPoint alpha;
    std::vector<Complex> coeffs;  // c1..cK (numeric mode; c1 != 0)
    // symbolic mode: c_k formal for k <= truncation, zero beyond; -1 keeps
    // every c_k formal (fully generic base).
    int symbolic_truncation = -1;
    // set when the data are exactly representable (real rational alpha/coeffs)
    std::optional<Rational> alpha_exact;
    std::optional<std::vector<Rational>> coeffs_exact;

    static BaseFunction numeric(BranchPoint alpha, std::vector<Complex> coeffs);
    static BaseFunction symbolic(int truncation = -1);
    static BaseFunction exact_real(const Rational& alpha, const std::vector<Rational>& coeffs,
                                   long branch = 0);

    int K() const { return static_cast<int>(coeffs.size()); }
    Complex c(int k) const {  // c_k, zero beyond K
        return (k >= 1 && k <= K()) ? coeffs[static_cast<size_t>(k - 1)] : Complex(0.0, 0.0);
    }
};

// c_k = b * C(beta, k) * alpha^{beta-k}; requires alpha to be a zero of
// 1 + b z^beta (relative residual <= 1e-9).
BaseFunction base_from_twoterm(Complex b, Complex beta, const BranchPoint& alpha, int K);

using MultiIndex = std::vector<int>;

inline int multi_total(const MultiIndex& n) {
    int s = 0;
    for (int v : n) s += v;
    return s;
}

// -------------------------------------------------------------------------
// Generic coefficient machinery. The ring-flavoured Ops policy supplies the
// few inputs the formulas need; everything downstream of the alpha^{n.gamma}
// prefactor normalization uses only integer powers of alpha, so one template
// serves the complex, exact-rational and Laurent-polynomial engines alike.
//
// Ops requirements:
//   using value_type;
//   value_type zero() const; value_type one() const;
//   value_type from_rational(const Rational&) const;
//   value_type alpha_int_pow(long e) const;
//   value_type c1_int_pow(long e) const;
//   value_type c(int k) const;                        // k >= 2
//   value_type gamma_ff(int v, int k) const;          // (gamma_v)_k, v 1-based
//   value_type genbinom_gamma_sum(const std::vector<int>& mult, long m) const;
//   int d() const;
// -------------------------------------------------------------------------

// F(x,r,a) / alpha^x: the weighted-composition sum behind the closed-form
// coefficients. The weight bound baked into compositions() realizes the
// zero-binomial convention (terms with a negative lower binomial index
// never appear).
template <class Ops, class GenBinom>
typename Ops::value_type F_reduced(const Ops& ops, GenBinom&& genbinom_x, int r, int a) {
    using V = typename Ops::value_type;
    if (a < 1) throw std::invalid_argument("F wants a >= 1");
    if (r < -1) throw std::invalid_argument("F wants r >= -1");
    V acc = ops.zero();
    if (r < 0) return acc;  // F(x,-1,a) = 0
    const Rational inv_afact = Rational(1) / Rational(factorial(a - 1));
    for (const Composition& mu : compositions(r, r - (a - 1))) {
        const int W = mu.weight();
        const int m = mu.tail_sum();
        const long lower = r - W - (a - 1);  // >= 0 by the enumeration bound
        Rational scale = Rational(factorial(r + m)) * inv_afact;
        if (mu.part(1) % 2 == 1) scale = -scale;
        for (int i = 2; i <= r + 1; ++i)
            if (mu.part(i) > 1) scale /= Rational(factorial(mu.part(i)));
        V term = genbinom_x(lower);
        term *= ops.alpha_int_pow(-lower);
        term *= ops.c1_int_pow(-(r + 1 + m));
        for (int i = 2; i <= r + 1; ++i)
            for (int j = 0; j < mu.part(i); ++j) term *= ops.c(i);
        term *= ops.from_rational(scale);
        acc += term;
    }
    return -acc;
}

// Engine for the normalized mixed partials D(I) = d(phi,I) / alpha^{sum gamma}.
// closed_form evaluates the F sum directly; oracle solves the
// implicit-differentiation recursion with no reference to F.
template <class Ops>
class CoeffEngine {
public:
    using V = typename Ops::value_type;

    explicit CoeffEngine(Ops ops)
        : ops_(std::move(ops)), memo_mutex_(std::make_unique<std::mutex>()) {}

    const Ops& ops() const { return ops_; }

    V closed_form(const std::vector<int>& mult) const {
        const int N = sum(mult);
        if (N < 1) throw std::invalid_argument("phi coefficient wants |I| >= 1");
        return F_reduced(
            ops_, [&](long m) { return ops_.genbinom_gamma_sum(mult, m); }, N - 1, 1);
    }

    V oracle(const std::vector<int>& mult, bool memoize = true) {
        if (memoize) {
            std::lock_guard<std::mutex> lock(*memo_mutex_);
            auto it = memo_.find(mult);
            if (it != memo_.end()) return it->second;
        }
        V value = oracle_compute(mult, memoize);
        if (memoize) {
            std::lock_guard<std::mutex> lock(*memo_mutex_);
            auto [it, inserted] = memo_.emplace(mult, value);
            return it->second;  // idempotent: first writer wins
        }
        return value;
    }

private:
    Ops ops_;
    std::map<std::vector<int>, V> memo_;
    std::unique_ptr<std::mutex> memo_mutex_;

    static int sum(const std::vector<int>& mult) {
        int s = 0;
        for (int v : mult) s += v;
        return s;
    }

    V parts_product_sum(const OrderedMultiset& I, int k, bool memoize) {
        V inner = ops_.zero();
        for (const MultisetPartition& J : multiset_partitions(I, k)) {
            V prod = ops_.one();
            for (const OrderedMultiset& part : J.parts)
                prod *= oracle(part.multiplicity_vector(), memoize);
            inner += prod;
        }
        return inner;
    }

    V oracle_compute(const std::vector<int>& mult, bool memoize) {
        const int N = sum(mult);
        if (N < 1) throw std::invalid_argument("phi coefficient wants |I| >= 1");
        if (N > kMaxPartitionOrder)
            throw std::invalid_argument("oracle recursion capped at |I| <= 10");
        if (N == 1) return -ops_.c1_int_pow(-1);  // 0 = alpha^gamma + c1 d(phi,I)

        const OrderedMultiset I = OrderedMultiset::from_multiplicities(mult);
        V acc = ops_.zero();
        // sum over positions h, grouped by the value at h
        for (int v = 1; v <= ops_.d(); ++v) {
            if (mult[static_cast<size_t>(v - 1)] == 0) continue;
            std::vector<int> sub = mult;
            --sub[static_cast<size_t>(v - 1)];
            const OrderedMultiset Isub = OrderedMultiset::from_multiplicities(sub);
            for (int k = 1; k <= N - 1; ++k) {
                V inner = parts_product_sum(Isub, k, memoize);
                V term = ops_.gamma_ff(v, k);
                term *= ops_.alpha_int_pow(-k);
                term *= inner;
                term *= ops_.from_rational(Rational(mult[static_cast<size_t>(v - 1)]));
                acc += term;
            }
        }
        // g-part: k! c_k over Parts(I,k), k >= 2
        for (int k = 2; k <= N; ++k) {
            V inner = parts_product_sum(I, k, memoize);
            V term = ops_.c(k);
            term *= inner;
            term *= ops_.from_rational(Rational(factorial(k)));
            acc += term;
        }
        // 0 = acc + c1 D(I)
        V out = -acc;
        out *= ops_.c1_int_pow(-1);
        return out;
    }
};

// ---- complex-valued ops --------------------------------------------------

struct ComplexOps {
    using value_type = Complex;
    Complex alpha_value;
    std::vector<Complex> coeffs;  // c1..cK
    std::vector<Complex> gammas;

    Complex zero() const { return Complex(0.0, 0.0); }
    Complex one() const { return Complex(1.0, 0.0); }
    Complex from_rational(const Rational& q) const { return to_complex(q); }
    Complex alpha_int_pow(long e) const { return int_pow(alpha_value, e); }
    Complex c1_int_pow(long e) const { return int_pow(coeffs.at(0), e); }
    Complex c(int k) const {
        return (k >= 1 && k <= static_cast<int>(coeffs.size()))
                   ? coeffs[static_cast<size_t>(k - 1)]
                   : Complex(0.0, 0.0);
    }
    Complex gamma_ff(int v, int k) const {
        return falling_factorial(gammas.at(static_cast<size_t>(v - 1)), k);
    }
    Complex genbinom_gamma_sum(const std::vector<int>& mult, long m) const {
        Complex x(0.0, 0.0);
        for (size_t i = 0; i < mult.size(); ++i) x += double(mult[i]) * gammas.at(i);
        return gen_binomial(x, m);
    }
    int d() const { return static_cast<int>(gammas.size()); }

    static Complex int_pow(Complex z, long e) {
        if (e == 0) return Complex(1.0, 0.0);
        bool inv = e < 0;
        unsigned long k = static_cast<unsigned long>(inv ? -e : e);
        Complex out(1.0, 0.0);
        while (k) {
            if (k & 1) out *= z;
            k >>= 1;
            if (k) z *= z;
        }
        return inv ? Complex(1.0, 0.0) / out : out;
    }
};

// ---- exact rational ops (real data, integer exponents) --------------------

struct RationalOps {
    using value_type = Rational;
    Rational alpha_value;
    std::vector<Rational> coeffs;
    std::vector<Rational> gammas;

    Rational zero() const { return Rational(0); }
    Rational one() const { return Rational(1); }
    Rational from_rational(const Rational& q) const { return q; }
    Rational alpha_int_pow(long e) const { return rational_pow(alpha_value, e); }
    Rational c1_int_pow(long e) const { return rational_pow(coeffs.at(0), e); }
    Rational c(int k) const {
        return (k >= 1 && k <= static_cast<int>(coeffs.size())) ? coeffs[static_cast<size_t>(k - 1)]
                                                                : Rational(0);
    }
    Rational gamma_ff(int v, int k) const {
        return falling_factorial(gammas.at(static_cast<size_t>(v - 1)), k);
    }
    Rational genbinom_gamma_sum(const std::vector<int>& mult, long m) const {
        Rational x(0);
        for (size_t i = 0; i < mult.size(); ++i) x += Rational(mult[i]) * gammas.at(i);
        return gen_binomial(x, m);
    }
    int d() const { return static_cast<int>(gammas.size()); }
};

// ---- symbolic ops ----------------------------------------------------------

struct SymbolicOps {
    using value_type = LaurentPoly;
    SymbolSet syms;
    std::vector<Rational> gammas;
    // generic: c_k is the formal symbol (k <= truncation if truncation >= 0);
    // twoterm: c_k specialized to -C(beta,k) alpha^{-k} (b eliminated via
    // 1 + b alpha^beta = 0).
    bool twoterm = false;
    Rational beta;
    int truncation = -1;

    LaurentPoly zero() const { return syms.zero(); }
    LaurentPoly one() const { return syms.constant(Rational(1)); }
    LaurentPoly from_rational(const Rational& q) const { return syms.constant(q); }
    LaurentPoly alpha_int_pow(long e) const { return syms.alpha_pow(static_cast<int>(e)); }
    LaurentPoly c1_int_pow(long e) const {
        if (!twoterm) return syms.c1_pow(static_cast<int>(e));
        // c1 = -beta alpha^{-1}
        return syms.alpha_pow(static_cast<int>(-e)).scaled(rational_pow(-beta, e));
    }
    LaurentPoly c(int k) const {
        if (twoterm)
            return syms.alpha_pow(-k).scaled(-gen_binomial(beta, k));
        if (truncation >= 0 && k > truncation) return syms.zero();
        if (k > syms.c_max) throw std::out_of_range("symbol table too small for c_k");
        return syms.c(k);
    }
    LaurentPoly gamma_ff(int v, int k) const {
        return syms.constant(falling_factorial(gammas.at(static_cast<size_t>(v - 1)), k));
    }
    LaurentPoly genbinom_gamma_sum(const std::vector<int>& mult, long m) const {
        Rational x(0);
        for (size_t i = 0; i < mult.size(); ++i) x += Rational(mult[i]) * gammas.at(i);
        return syms.constant(gen_binomial(x, m));
    }
    int d() const { return static_cast<int>(gammas.size()); }
};

// A symbolic coefficient: alpha^{alpha_exponent} * poly, where the exponent
// collects the gamma-weighted prefactor (n . gamma, possibly non-integer)
// and poly lives in Z-exponents of alpha, c1^{-1}, c2, ...
struct SymbolicCoeff {
    Rational alpha_exponent;
    LaurentPoly poly;
};

using CoeffValue = std::variant<Complex, SymbolicCoeff>;

// ---- public engines --------------------------------------------------------

class NumericEngine {
public:
    NumericEngine(const Perturbation& pert, const BaseFunction& base);

    Complex phi_partial(const OrderedMultiset& I) const;      // d(phi, I), closed form
    Complex phi_partial_oracle(const OrderedMultiset& I);     // via recursion
    Complex taylor_coeff(const MultiIndex& n) const;          // d(phi,n) / prod n_i!
    Complex taylor_coeff_oracle(const MultiIndex& n);
    Complex series_eval(const std::vector<Complex>& a, int order) const;
    Complex F_eval(Complex x, int r, int a) const;            // full F(x,r,a)

    const BranchPoint& alpha() const { return alpha_; }

private:
    BranchPoint alpha_;
    std::vector<Complex> gammas_;
    mutable CoeffEngine<ComplexOps> eng_;

    Complex gamma_sum_pow(const std::vector<int>& mult) const;
};

// Exact engine over rationals; requires integer gammas (the alpha^{n.gamma}
// prefactor must stay rational) and real rational base data.
class ExactRealEngine {
public:
    ExactRealEngine(std::vector<long> gammas, Rational alpha, std::vector<Rational> coeffs);

    Rational taylor_coeff(const MultiIndex& n) const;
    Rational series_eval(const std::vector<Rational>& a, int order) const;

private:
    std::vector<long> gammas_;
    Rational alpha_;
    mutable CoeffEngine<RationalOps> eng_;
};

class SymbolicEngine {
public:
    // Fully generic base (c_k formal), or truncated (c_k = 0 for k > truncation).
    SymbolicEngine(const std::vector<Rational>& gammas, int max_order, int truncation = -1);
    // Two-term specialization c_k = -C(beta,k) alpha^{-k}.
    static SymbolicEngine twoterm(const std::vector<Rational>& gammas, const Rational& beta);

    SymbolicCoeff phi_partial(const OrderedMultiset& I) const;
    SymbolicCoeff phi_partial_oracle(const OrderedMultiset& I);
    SymbolicCoeff taylor_coeff(const MultiIndex& n) const;
    SymbolicCoeff taylor_coeff_oracle(const MultiIndex& n);
    SymbolicCoeff F_eval(const Rational& x, int r, int a) const;

    const SymbolSet& symbols() const;
    const std::vector<Rational>& gammas() const;

private:
    explicit SymbolicEngine(SymbolicOps ops);
    mutable CoeffEngine<SymbolicOps> eng_;

    Rational gamma_sum(const std::vector<int>& mult) const;
};

// F(x,r,a) / alpha^x with x a polynomial (indeterminate sums); the engine's
// base symbols supply alpha and the c's.
LaurentPoly F_reduced_poly(const LaurentPoly& x, int r, int a, const SymbolicOps& ops);

// Closed form for the two-term base 1 + b z^beta (numeric):
// -alpha^{1 + sum n_i (gamma_i - 1)} / g'(alpha)^{sum n} * prod_{i=1}^{sum n - 1}
// (-1 + i beta - sum n_i gamma_i), with g'(alpha) = b beta alpha^{beta-1}.
Complex phi_coeff_twoterm(const MultiIndex& n, const Perturbation& pert, Complex b, Complex beta,
                          const BranchPoint& alpha);

// Exact variant with b eliminated; poly is q * alpha over the caller's table.
SymbolicCoeff phi_coeff_twoterm_exact(const MultiIndex& n, const std::vector<Rational>& gammas,
                                      const Rational& beta, const SymbolSet& syms);

// ---- spec-shaped convenience wrappers (CoeffValue dispatch) ----------------

CoeffValue phi_coeff(const OrderedMultiset& I, const Perturbation& pert, const BaseFunction& base);
CoeffValue phi_coeff_oracle(const OrderedMultiset& I, const Perturbation& pert,
                            const BaseFunction& base);
CoeffValue taylor_coeff(const MultiIndex& n, const Perturbation& pert, const BaseFunction& base);
Complex series_eval(const std::vector<Complex>& a, int order, const Perturbation& pert,
                    const BaseFunction& base);

}  // namespace rootseries
