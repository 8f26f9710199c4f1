#include "rootseries/series.hpp"

#include <algorithm>

namespace rootseries {

BaseFunction BaseFunction::numeric(BranchPoint alpha, std::vector<Complex> coeffs) {
    if (coeffs.empty() || coeffs.front() == Complex(0.0, 0.0))
        throw std::invalid_argument("base function wants c1 != 0");
    BaseFunction b;
    b.mode = Mode::numeric;
    b.alpha = alpha;
    b.coeffs = std::move(coeffs);
    return b;
}

BaseFunction BaseFunction::symbolic(int truncation) {
    if (truncation == 0) throw std::invalid_argument("symbolic base wants K >= 1");
    BaseFunction b;
    b.mode = Mode::symbolic;
    b.symbolic_truncation = truncation;
    return b;
}

BaseFunction BaseFunction::exact_real(const Rational& alpha, const std::vector<Rational>& coeffs,
                                      long branch) {
    if (alpha == 0) throw std::invalid_argument("base function wants alpha != 0");
    if (coeffs.empty() || coeffs.front() == 0)
        throw std::invalid_argument("base function wants c1 != 0");
    std::vector<Complex> cc;
    cc.reserve(coeffs.size());
    for (const auto& q : coeffs) cc.push_back(to_complex(q));
    double a = to_double(alpha);
    BaseFunction b = BaseFunction::numeric(
        BranchPoint(std::abs(a), a > 0 ? 0.0 : kPi, branch), std::move(cc));
    b.alpha_exact = alpha;
    b.coeffs_exact = coeffs;
    return b;
}

BaseFunction base_from_twoterm(Complex b, Complex beta, const BranchPoint& alpha, int K) {
    if (beta == Complex(0.0, 0.0)) throw std::invalid_argument("two-term base wants beta != 0");
    if (b == Complex(0.0, 0.0)) throw std::invalid_argument("two-term base wants b != 0");
    if (K < 1) throw std::invalid_argument("two-term base wants K >= 1");
    Complex residual = Complex(1.0, 0.0) + b * branch_pow(alpha, beta);
    double scale = std::max(1.0, std::abs(b * branch_pow(alpha, beta)));
    if (std::abs(residual) > 1e-9 * scale)
        throw std::invalid_argument("alpha is not a zero of the two-term base");
    std::vector<Complex> coeffs;
    coeffs.reserve(static_cast<size_t>(K));
    for (int k = 1; k <= K; ++k)
        coeffs.push_back(b * gen_binomial(beta, k) * branch_pow(alpha, beta - Complex(k, 0.0)));
    return BaseFunction::numeric(alpha, std::move(coeffs));
}

// ---- NumericEngine ---------------------------------------------------------

NumericEngine::NumericEngine(const Perturbation& pert, const BaseFunction& base)
    : alpha_(base.alpha),
      gammas_(pert.gammas),
      eng_(ComplexOps{base.alpha.value(), base.coeffs, pert.gammas}) {
    if (base.mode != BaseFunction::Mode::numeric)
        throw std::invalid_argument("numeric engine wants a numeric base");
    if (base.coeffs.empty() || base.coeffs.front() == Complex(0.0, 0.0))
        throw std::invalid_argument("base function wants c1 != 0");
}

Complex NumericEngine::gamma_sum_pow(const std::vector<int>& mult) const {
    Complex e(0.0, 0.0);
    for (size_t i = 0; i < mult.size(); ++i) e += double(mult[i]) * gammas_.at(i);
    return branch_pow(alpha_, e);
}

Complex NumericEngine::phi_partial(const OrderedMultiset& I) const {
    if (I.d != static_cast<int>(gammas_.size()))
        throw std::invalid_argument("multiset ambient size does not match perturbation");
    auto mult = I.multiplicity_vector();
    return gamma_sum_pow(mult) * eng_.closed_form(mult);
}

Complex NumericEngine::phi_partial_oracle(const OrderedMultiset& I) {
    if (I.d != static_cast<int>(gammas_.size()))
        throw std::invalid_argument("multiset ambient size does not match perturbation");
    auto mult = I.multiplicity_vector();
    return gamma_sum_pow(mult) * eng_.oracle(mult);
}

Complex NumericEngine::taylor_coeff(const MultiIndex& n) const {
    if (multi_total(n) < 1) throw std::invalid_argument("taylor coefficient wants sum(n) >= 1");
    Complex v = gamma_sum_pow(n) * eng_.closed_form(n);
    for (int ni : n) v /= factorial(ni).get_d();
    return v;
}

Complex NumericEngine::taylor_coeff_oracle(const MultiIndex& n) {
    if (multi_total(n) < 1) throw std::invalid_argument("taylor coefficient wants sum(n) >= 1");
    Complex v = gamma_sum_pow(n) * eng_.oracle(n);
    for (int ni : n) v /= factorial(ni).get_d();
    return v;
}

Complex NumericEngine::series_eval(const std::vector<Complex>& a, int order) const {
    if (a.size() != gammas_.size())
        throw std::invalid_argument("a-tuple length does not match perturbation");
    if (order < 1) throw std::invalid_argument("series_eval wants order >= 1");
    Complex acc = branch_pow(alpha_, Complex(1.0, 0.0));
    for (const auto& n : multi_indices_up_to(static_cast<int>(gammas_.size()), order)) {
        Complex mono(1.0, 0.0);
        for (size_t i = 0; i < n.size(); ++i)
            mono *= ComplexOps::int_pow(a[i], n[i]);
        if (mono == Complex(0.0, 0.0)) continue;
        acc += taylor_coeff(n) * mono;
    }
    return acc;
}

Complex NumericEngine::F_eval(Complex x, int r, int a) const {
    Complex red = F_reduced(
        eng_.ops(), [&](long m) { return gen_binomial(x, m); }, r, a);
    return branch_pow(alpha_, x) * red;
}

// ---- ExactRealEngine --------------------------------------------------------

namespace {
RationalOps make_rational_ops(const std::vector<long>& gammas, const Rational& alpha,
                              std::vector<Rational> coeffs) {
    if (alpha == 0) throw std::invalid_argument("exact engine wants alpha != 0");
    if (coeffs.empty() || coeffs.front() == 0)
        throw std::invalid_argument("exact engine wants c1 != 0");
    std::vector<Rational> g;
    g.reserve(gammas.size());
    for (long gv : gammas) g.emplace_back(gv);
    return RationalOps{alpha, std::move(coeffs), std::move(g)};
}
}  // namespace

ExactRealEngine::ExactRealEngine(std::vector<long> gammas, Rational alpha,
                                 std::vector<Rational> coeffs)
    : gammas_(std::move(gammas)),
      alpha_(alpha),
      eng_(make_rational_ops(gammas_, alpha, std::move(coeffs))) {}

Rational ExactRealEngine::taylor_coeff(const MultiIndex& n) const {
    if (multi_total(n) < 1) throw std::invalid_argument("taylor coefficient wants sum(n) >= 1");
    long e = 0;
    for (size_t i = 0; i < n.size(); ++i) e += n[i] * gammas_.at(i);
    Rational v = rational_pow(alpha_, e) * eng_.closed_form(n);
    for (int ni : n) v /= Rational(factorial(ni));
    return v;
}

Rational ExactRealEngine::series_eval(const std::vector<Rational>& a, int order) const {
    if (a.size() != gammas_.size())
        throw std::invalid_argument("a-tuple length does not match perturbation");
    Rational acc = alpha_;
    for (const auto& n : multi_indices_up_to(static_cast<int>(gammas_.size()), order)) {
        Rational mono(1);
        bool zero = false;
        for (size_t i = 0; i < n.size(); ++i) {
            if (n[i] > 0 && a[i] == 0) {
                zero = true;
                break;
            }
            mono *= rational_pow(a[i], n[i]);
        }
        if (zero) continue;
        acc += taylor_coeff(n) * mono;
    }
    return acc;
}

// ---- SymbolicEngine ----------------------------------------------------------

namespace {
SymbolicOps make_generic_ops(const std::vector<Rational>& gammas, int max_order, int truncation) {
    if (max_order < 1) throw std::invalid_argument("symbolic engine wants max_order >= 1");
    SymbolicOps ops;
    ops.syms = SymbolSet::make(max_order);
    ops.gammas = gammas;
    ops.truncation = truncation;
    return ops;
}
}  // namespace

SymbolicEngine::SymbolicEngine(SymbolicOps ops) : eng_(std::move(ops)) {}

SymbolicEngine::SymbolicEngine(const std::vector<Rational>& gammas, int max_order, int truncation)
    : eng_(make_generic_ops(gammas, max_order, truncation)) {}

SymbolicEngine SymbolicEngine::twoterm(const std::vector<Rational>& gammas,
                                       const Rational& beta) {
    if (beta == 0) throw std::invalid_argument("two-term base wants beta != 0");
    SymbolicOps ops;
    ops.syms = SymbolSet::make(1);  // only alpha and c1 symbols are ever touched
    ops.gammas = gammas;
    ops.twoterm = true;
    ops.beta = beta;
    return SymbolicEngine(std::move(ops));
}

const SymbolSet& SymbolicEngine::symbols() const { return eng_.ops().syms; }
const std::vector<Rational>& SymbolicEngine::gammas() const { return eng_.ops().gammas; }

Rational SymbolicEngine::gamma_sum(const std::vector<int>& mult) const {
    Rational e(0);
    for (size_t i = 0; i < mult.size(); ++i)
        e += Rational(mult[i]) * eng_.ops().gammas.at(i);
    return e;
}

SymbolicCoeff SymbolicEngine::phi_partial(const OrderedMultiset& I) const {
    auto mult = I.multiplicity_vector();
    if (I.d != eng_.ops().d())
        throw std::invalid_argument("multiset ambient size does not match perturbation");
    LaurentPoly poly = eng_.closed_form(mult);
    return SymbolicCoeff{gamma_sum(mult), std::move(poly)};
}

SymbolicCoeff SymbolicEngine::phi_partial_oracle(const OrderedMultiset& I) {
    auto mult = I.multiplicity_vector();
    if (I.d != eng_.ops().d())
        throw std::invalid_argument("multiset ambient size does not match perturbation");
    LaurentPoly poly = eng_.oracle(mult);
    return SymbolicCoeff{gamma_sum(mult), std::move(poly)};
}

SymbolicCoeff SymbolicEngine::taylor_coeff(const MultiIndex& n) const {
    if (multi_total(n) < 1) throw std::invalid_argument("taylor coefficient wants sum(n) >= 1");
    Rational scale(1);
    for (int ni : n) scale /= Rational(factorial(ni));
    LaurentPoly poly = eng_.closed_form(n).scaled(scale);
    return SymbolicCoeff{gamma_sum(n), std::move(poly)};
}

SymbolicCoeff SymbolicEngine::taylor_coeff_oracle(const MultiIndex& n) {
    if (multi_total(n) < 1) throw std::invalid_argument("taylor coefficient wants sum(n) >= 1");
    Rational scale(1);
    for (int ni : n) scale /= Rational(factorial(ni));
    LaurentPoly poly = eng_.oracle(n).scaled(scale);
    return SymbolicCoeff{gamma_sum(n), std::move(poly)};
}

SymbolicCoeff SymbolicEngine::F_eval(const Rational& x, int r, int a) const {
    LaurentPoly red = F_reduced(
        eng_.ops(), [&](long m) { return eng_.ops().from_rational(gen_binomial(x, m)); }, r, a);
    return SymbolicCoeff{x, std::move(red)};
}

LaurentPoly F_reduced_poly(const LaurentPoly& x, int r, int a, const SymbolicOps& ops) {
    return F_reduced(
        ops, [&](long m) { return gen_binomial(x, m); }, r, a);
}

// ---- two-term closed form -----------------------------------------------------

Complex phi_coeff_twoterm(const MultiIndex& n, const Perturbation& pert, Complex b, Complex beta,
                          const BranchPoint& alpha) {
    const int total = multi_total(n);
    if (total < 1) throw std::invalid_argument("two-term coefficient wants sum(n) >= 1");
    if (beta == Complex(0.0, 0.0) || b == Complex(0.0, 0.0))
        throw std::invalid_argument("two-term coefficient wants b, beta != 0");
    if (n.size() != pert.gammas.size())
        throw std::invalid_argument("multi-index length does not match perturbation");
    Complex ngamma(0.0, 0.0);
    for (size_t i = 0; i < n.size(); ++i) ngamma += double(n[i]) * pert.gammas[i];
    Complex expo = Complex(1.0, 0.0) + ngamma - Complex(double(total), 0.0);
    Complex gprime = b * beta * branch_pow(alpha, beta - Complex(1.0, 0.0));
    Complex prod(1.0, 0.0);
    for (int i = 1; i <= total - 1; ++i)
        prod *= Complex(-1.0, 0.0) + double(i) * beta - ngamma;
    return -branch_pow(alpha, expo) / ComplexOps::int_pow(gprime, total) * prod;
}

SymbolicCoeff phi_coeff_twoterm_exact(const MultiIndex& n, const std::vector<Rational>& gammas,
                                      const Rational& beta, const SymbolSet& syms) {
    const int total = multi_total(n);
    if (total < 1) throw std::invalid_argument("two-term coefficient wants sum(n) >= 1");
    if (beta == 0) throw std::invalid_argument("two-term coefficient wants beta != 0");
    if (n.size() != gammas.size())
        throw std::invalid_argument("multi-index length does not match gammas");
    Rational ngamma(0);
    for (size_t i = 0; i < n.size(); ++i) ngamma += Rational(n[i]) * gammas[i];
    // With b = -alpha^{-beta}: g'(alpha) = -beta alpha^{-1}, so
    // d(phi,n) = -alpha^{1 + n.gamma} (-beta)^{-sum n} prod_i (-1 + i beta - n.gamma).
    Rational q = -rational_pow(-beta, -total);
    for (int i = 1; i <= total - 1; ++i) q *= Rational(-1) + Rational(i) * beta - ngamma;
    return SymbolicCoeff{ngamma, syms.alpha_pow(1).scaled(q)};
}

// ---- CoeffValue wrappers ---------------------------------------------------------

namespace {
SymbolicEngine symbolic_engine_for(const Perturbation& pert, const BaseFunction& base,
                                   int needed_order) {
    if (!pert.gammas_exact)
        throw std::invalid_argument("symbolic mode wants rational gammas");
    return SymbolicEngine(*pert.gammas_exact, needed_order, base.symbolic_truncation);
}
}  // namespace

CoeffValue phi_coeff(const OrderedMultiset& I, const Perturbation& pert,
                     const BaseFunction& base) {
    if (base.mode == BaseFunction::Mode::numeric)
        return NumericEngine(pert, base).phi_partial(I);
    return symbolic_engine_for(pert, base, std::max(1, I.order())).phi_partial(I);
}

CoeffValue phi_coeff_oracle(const OrderedMultiset& I, const Perturbation& pert,
                            const BaseFunction& base) {
    if (base.mode == BaseFunction::Mode::numeric)
        return NumericEngine(pert, base).phi_partial_oracle(I);
    SymbolicEngine eng = symbolic_engine_for(pert, base, std::max(1, I.order()));
    return eng.phi_partial_oracle(I);
}

CoeffValue taylor_coeff(const MultiIndex& n, const Perturbation& pert, const BaseFunction& base) {
    if (base.mode == BaseFunction::Mode::numeric)
        return NumericEngine(pert, base).taylor_coeff(n);
    return symbolic_engine_for(pert, base, std::max(1, multi_total(n))).taylor_coeff(n);
}

Complex series_eval(const std::vector<Complex>& a, int order, const Perturbation& pert,
                    const BaseFunction& base) {
    if (base.mode != BaseFunction::Mode::numeric)
        throw std::invalid_argument("series_eval wants a numeric base");
    return NumericEngine(pert, base).series_eval(a, order);
}

}  // namespace rootseries
