#include "rootseries/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace rootseries {

using nlohmann::json;

// ---- reports ----------------------------------------------------------------

json IdentityReport::to_json() const {
    json j;
    j["identity"] = identity;
    j["range"] = range;
    j["passed"] = passed;
    if (counterexample) j["counterexample"] = *counterexample;
    return j;
}

json TrackReport::to_json() const {
    json j;
    j["base"] = base_label;
    j["order"] = order;
    j["samples"] = sample_magnitudes;
    json roots_j = json::array(), series_j = json::array();
    for (const Complex& z : roots) roots_j.push_back({z.real(), z.imag()});
    for (const Complex& z : series_values) series_j.push_back({z.real(), z.imag()});
    j["roots"] = std::move(roots_j);
    j["series"] = std::move(series_j);
    j["errors"] = errors;
    j["iterations"] = iterations;
    if (exact_floor) {
        j["slope"] = nullptr;
        j["note"] = "errors at measurement floor";
    } else {
        j["slope"] = slope;
        j["fit_residual"] = fit_residual;
    }
    j["passed"] = passed;
    return j;
}

// ---- numeric root tracking ------------------------------------------------------

Complex pow_near(Complex z, Complex gamma, const BranchPoint& ref) {
    double r = std::abs(z);
    if (!(r > 0.0)) throw std::domain_error("pow_near at zero");
    double th = std::arg(z);
    while (th - ref.theta > kPi) th -= 2.0 * kPi;
    while (th - ref.theta < -kPi) th += 2.0 * kPi;
    return std::exp(gamma * Complex(std::log(r), th + 2.0 * kPi * double(ref.n)));
}

EvaluableBase EvaluableBase::from_coeffs(const BranchPoint& alpha, std::vector<Complex> coeffs) {
    if (coeffs.empty() || coeffs.front() == Complex(0.0, 0.0))
        throw std::invalid_argument("base function wants c1 != 0");
    Complex alpha_c = alpha.value();
    auto g = [alpha_c, coeffs](Complex z) {
        Complex w = z - alpha_c, acc(0.0, 0.0), p = w;
        for (size_t k = 0; k < coeffs.size(); ++k) {
            acc += coeffs[k] * p;
            p *= w;
        }
        return acc;
    };
    auto dg = [alpha_c, coeffs](Complex z) {
        Complex w = z - alpha_c, acc(0.0, 0.0), p(1.0, 0.0);
        for (size_t k = 0; k < coeffs.size(); ++k) {
            acc += double(k + 1) * coeffs[k] * p;
            p *= w;
        }
        return acc;
    };
    return EvaluableBase{g, dg};
}

EvaluableBase EvaluableBase::twoterm(Complex b, Complex beta, const BranchPoint& alpha) {
    BranchPoint ref = alpha;
    auto g = [b, beta, ref](Complex z) {
        return Complex(1.0, 0.0) + b * pow_near(z, beta, ref);
    };
    auto dg = [b, beta, ref](Complex z) {
        return b * beta * pow_near(z, beta - Complex(1.0, 0.0), ref);
    };
    return EvaluableBase{g, dg};
}

namespace {

struct FullFunction {
    const EvaluableBase& base;
    const Perturbation& pert;
    const BranchPoint& ref;
    const std::vector<Complex>& a;
    double scale;  // homotopy multiplier on a

    Complex f(Complex z) const {
        Complex acc = base.g(z);
        for (size_t i = 0; i < a.size(); ++i)
            acc += scale * a[i] * pow_near(z, pert.gammas[i], ref);
        return acc;
    }
    Complex df(Complex z) const {
        Complex acc = base.dg(z);
        for (size_t i = 0; i < a.size(); ++i)
            acc += scale * a[i] * pert.gammas[i] *
                   pow_near(z, pert.gammas[i] - Complex(1.0, 0.0), ref);
        return acc;
    }
};

bool newton_solve(const FullFunction& fn, Complex seed, const NewtonOptions& opts, Complex* out,
                  int* iters) {
    Complex z = seed;
    for (int it = 0; it < opts.max_iter; ++it) {
        Complex fz = fn.f(z);
        if (std::abs(fz) <= opts.tol) {
            *out = z;
            *iters += it;
            return true;
        }
        Complex dz = fn.df(z);
        if (std::abs(dz) < opts.deriv_floor)
            throw NewtonError("derivative below threshold (near-singular step)");
        z -= fz / dz;
    }
    *iters += opts.max_iter;
    return false;
}

}  // namespace

NewtonResult newton_track(const Perturbation& pert, const EvaluableBase& base,
                          const BranchPoint& alpha, const std::vector<Complex>& a,
                          const NewtonOptions& opts) {
    if (a.size() != pert.gammas.size())
        throw std::invalid_argument("a-tuple length does not match perturbation");
    NewtonResult res;
    res.root = alpha.value();
    FullFunction fn{base, pert, alpha, a, 1.0};

    // single shot from alpha; any failure here falls through to the homotopy
    Complex root;
    int iters = 0;
    try {
        if (newton_solve(fn, alpha.value(), opts, &root, &iters)) {
            res.root = root;
            res.iterations = iters;
            res.residual = std::abs(fn.f(root));
            return res;
        }
    } catch (const NewtonError&) {
    }
    // homotopy 0 -> a with warm starts
    Complex z = alpha.value();
    for (int s = 1; s <= opts.homotopy_steps; ++s) {
        FullFunction step{base, pert, alpha, a, double(s) / double(opts.homotopy_steps)};
        if (!newton_solve(step, z, opts, &z, &iters))
            throw NewtonError("no convergence within max iterations");
    }
    res.root = z;
    res.iterations = iters;
    res.residual = std::abs(fn.f(z));
    return res;
}

// ---- exact Newton ------------------------------------------------------------------

namespace {

mpf_class mpf_from_rational(const Rational& q, int bits) {
    mpf_class f(0, static_cast<unsigned>(bits));
    mpf_set_q(f.get_mpf_t(), q.get_mpq_t());
    return f;
}

mpf_class mpf_int_pow(const mpf_class& z, long e, int bits) {
    if (e == 0) return mpf_class(1, static_cast<unsigned>(bits));
    mpf_class base = z;
    bool inv = e < 0;
    unsigned long k = static_cast<unsigned long>(inv ? -e : e);
    mpf_class out(1, static_cast<unsigned>(bits));
    while (k) {
        if (k & 1) out *= base;
        k >>= 1;
        if (k) base *= base;
    }
    if (inv) out = mpf_class(1, static_cast<unsigned>(bits)) / out;
    return out;
}

// log2 of a positive mpf; exact enough for slope fitting.
double mpf_log2(const mpf_class& x) {
    long e = 0;
    double m = mpf_get_d_2exp(&e, x.get_mpf_t());
    return std::log2(std::fabs(m)) + double(e);
}

double fit_slope(const std::vector<double>& lx, const std::vector<double>& ly, double* residual) {
    const size_t n = lx.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    double denom = double(n) * sxx - sx * sx;
    double slope = (double(n) * sxy - sx * sy) / denom;
    double intercept = (sy - slope * sx) / double(n);
    double rss = 0;
    for (size_t i = 0; i < n; ++i) {
        double r = ly[i] - (slope * lx[i] + intercept);
        rss += r * r;
    }
    if (residual) *residual = std::sqrt(rss / double(n));
    return slope;
}

}  // namespace

mpf_class newton_root_exact(const ExactRealProblem& prob, const std::vector<Rational>& a, int bits,
                            int* iterations) {
    if (a.size() != prob.gammas.size())
        throw std::invalid_argument("a-tuple length does not match problem");
    const unsigned prec = static_cast<unsigned>(bits);
    std::vector<mpf_class> c, av;
    c.reserve(prob.coeffs.size());
    for (const auto& q : prob.coeffs) c.push_back(mpf_from_rational(q, bits));
    for (const auto& q : a) av.push_back(mpf_from_rational(q, bits));
    mpf_class alpha = mpf_from_rational(prob.alpha, bits);

    auto f = [&](const mpf_class& z) {
        mpf_class w = z - alpha;
        mpf_class acc(0, prec), p = w;
        for (size_t k = 0; k < c.size(); ++k) {
            acc += c[k] * p;
            p *= w;
        }
        for (size_t i = 0; i < av.size(); ++i)
            acc += av[i] * mpf_int_pow(z, prob.gammas[i], bits);
        return acc;
    };
    auto df = [&](const mpf_class& z) {
        mpf_class w = z - alpha;
        mpf_class acc(0, prec), p(1, prec);
        for (size_t k = 0; k < c.size(); ++k) {
            acc += double(k + 1) * c[k] * p;
            p *= w;
        }
        for (size_t i = 0; i < av.size(); ++i) {
            long g = prob.gammas[i];
            if (g != 0) acc += av[i] * double(g) * mpf_int_pow(z, g - 1, bits);
        }
        return acc;
    };

    mpf_class z = alpha;
    mpf_class eps(1, prec);
    eps >>= static_cast<unsigned>(bits - 8);
    int it = 0;
    for (; it < 300; ++it) {
        mpf_class fz = f(z);
        mpf_class dz = df(z);
        if (dz == 0) throw NewtonError("zero derivative in exact Newton");
        mpf_class step = fz / dz;
        z -= step;
        mpf_class mag = abs(step);
        mpf_class zmag = abs(z);
        if (zmag < 1) zmag = 1;
        if (mag <= eps * zmag) break;
    }
    if (it >= 300) throw NewtonError("exact Newton did not converge");
    if (iterations) *iterations = it + 1;
    return z;
}

namespace {

TrackReport finish_fit(TrackReport rep, const std::vector<double>& lx, const std::vector<double>& ly,
                       int order) {
    rep.order = order;
    if (lx.size() < 3) {
        rep.exact_floor = true;
        rep.slope = std::numeric_limits<double>::infinity();
        rep.passed = true;
        return rep;
    }
    rep.slope = fit_slope(lx, ly, &rep.fit_residual);
    rep.passed = rep.slope >= double(order) + 0.5;
    return rep;
}

}  // namespace

TrackReport convergence_order_fit_exact(const ExactRealProblem& prob, int order,
                                        const std::vector<Rational>& samples, int bits) {
    TrackReport rep;
    rep.base_label = prob.label;
    ExactRealEngine eng = prob.engine();
    const double floor_log2 = -double(bits - 16);
    std::vector<double> lx, ly;
    for (const Rational& s : samples) {
        std::vector<Rational> a(prob.gammas.size(), s);
        int iters = 0;
        mpf_class root = newton_root_exact(prob, a, bits, &iters);
        Rational series = eng.series_eval(a, order);
        mpf_class err = abs(mpf_from_rational(series, bits) - root);
        rep.sample_magnitudes.push_back(std::fabs(to_double(s)));
        rep.roots.emplace_back(mpf_get_d(root.get_mpf_t()), 0.0);
        rep.series_values.emplace_back(to_double(series), 0.0);
        rep.iterations.push_back(iters);
        if (err == 0 || mpf_log2(err) <= floor_log2) {
            rep.errors.push_back(0.0);
            continue;  // at the measurement floor; excluded from the fit
        }
        double le = mpf_log2(err) * std::log(2.0);
        rep.errors.push_back(std::exp(le));
        lx.push_back(std::log(std::fabs(to_double(s))));
        ly.push_back(le);
    }
    return finish_fit(std::move(rep), lx, ly, order);
}

TrackReport convergence_order_fit(const Perturbation& pert, const EvaluableBase& base,
                                  const BaseFunction& series_base, int order,
                                  const std::vector<double>& samples, const NewtonOptions& opts) {
    TrackReport rep;
    rep.base_label = "numeric";
    NumericEngine eng(pert, series_base);
    std::vector<double> lx, ly;
    for (double s : samples) {
        std::vector<Complex> a(pert.gammas.size(), Complex(s, 0.0));
        NewtonResult nr = newton_track(pert, base, series_base.alpha, a, opts);
        Complex sv = eng.series_eval(a, order);
        double err = std::abs(sv - nr.root);
        rep.sample_magnitudes.push_back(std::fabs(s));
        rep.roots.push_back(nr.root);
        rep.series_values.push_back(sv);
        rep.errors.push_back(err);
        rep.iterations.push_back(nr.iterations);
        if (err > 1e-15) {
            lx.push_back(std::log(std::fabs(s)));
            ly.push_back(std::log(err));
        }
    }
    return finish_fit(std::move(rep), lx, ly, order);
}

// ---- integrality -----------------------------------------------------------------

bool coeff_is_integral(const SymbolicCoeff& coeff, int max_c_index, nlohmann::json* offender) {
    if (!is_integer(coeff.alpha_exponent)) {
        if (offender) *offender = {{"reason", "non-integer alpha prefactor"},
                                   {"alpha_exponent", rational_to_string(coeff.alpha_exponent)}};
        return false;
    }
    const auto& table = coeff.poly.table();
    for (const auto& [mono, c] : coeff.poly.terms()) {
        if (!is_integer(c)) {
            if (offender)
                *offender = {{"reason", "non-integer coefficient"},
                             {"coefficient", rational_to_string(c)},
                             {"poly", coeff.poly.str()}};
            return false;
        }
        for (size_t i = 0; i < mono.size(); ++i) {
            const std::string& name = table->name(static_cast<int>(i));
            bool bad = false;
            if (name == "alpha" && mono[i] > 0) bad = true;
            if (name == "c1" && mono[i] > 0) bad = true;
            if (name.size() > 1 && name[0] == 'c' && name != "c1" && mono[i] != 0) {
                int idx = std::stoi(name.substr(1));
                if (mono[i] < 0 || idx > max_c_index) bad = true;
            }
            if (bad) {
                if (offender)
                    *offender = {{"reason", "monomial outside Z[alpha^-1, c1^-1, c2..]"},
                                 {"symbol", name},
                                 {"exponent", mono[i]}};
                return false;
            }
        }
    }
    return true;
}

IdentityReport integrality_check(const MultiIndex& n, const std::vector<long>& gammas) {
    IdentityReport rep;
    rep.identity = "integrality";
    {
        std::ostringstream os;
        os << "n=(";
        for (size_t i = 0; i < n.size(); ++i) os << (i ? "," : "") << n[i];
        os << "), gamma=(";
        for (size_t i = 0; i < gammas.size(); ++i) os << (i ? "," : "") << gammas[i];
        os << ")";
        rep.range = os.str();
    }
    if (n.size() != gammas.size())
        throw std::invalid_argument("multi-index length does not match gammas");
    const int total = multi_total(n);
    std::vector<Rational> g;
    g.reserve(gammas.size());
    for (long gv : gammas) g.emplace_back(gv);
    SymbolicEngine eng(g, std::max(1, total));
    SymbolicCoeff t = eng.taylor_coeff(n);
    json offender;
    if (!coeff_is_integral(t, total, &offender)) rep.fail(offender);
    return rep;
}

// ---- transform rule -----------------------------------------------------------------

namespace {

// q * alpha^e with exact rational q and exponent e. Sums only ever combine
// like alpha-powers here; a mismatch means the caller's bookkeeping is wrong.
struct AlphaMono {
    Rational q = Rational(0);
    Rational e = Rational(0);

    bool zero() const { return q == 0; }
    AlphaMono operator*(const AlphaMono& o) const {
        if (zero() || o.zero()) return AlphaMono{};
        return AlphaMono{q * o.q, e + o.e};
    }
    AlphaMono& operator+=(const AlphaMono& o) {
        if (o.zero()) return *this;
        if (zero()) {
            *this = o;
            return *this;
        }
        if (e != o.e) throw std::logic_error("alpha-power mismatch in like-term addition");
        q += o.q;
        if (q == 0) *this = AlphaMono{};
        return *this;
    }
    AlphaMono scaled(const Rational& s) const {
        if (s == 0 || zero()) return AlphaMono{};
        return AlphaMono{q * s, e};
    }
    bool operator==(const AlphaMono& o) const {
        if (zero() && o.zero()) return true;
        return q == o.q && e == o.e;
    }
};

// Truncated multivariate power series in a_1..a_d up to total degree cap.
template <class C>
struct TruncSeries {
    int d = 1;
    int cap = 0;
    std::map<std::vector<int>, C> terms;

    static TruncSeries constant(int d, int cap, C value) {
        TruncSeries s;
        s.d = d;
        s.cap = cap;
        std::vector<int> zero(static_cast<size_t>(d), 0);
        s.terms.emplace(std::move(zero), std::move(value));
        return s;
    }
    TruncSeries mul(const TruncSeries& o) const {
        TruncSeries out;
        out.d = d;
        out.cap = cap;
        for (const auto& [ma, ca] : terms) {
            for (const auto& [mb, cb] : o.terms) {
                int total = 0;
                std::vector<int> m(static_cast<size_t>(d));
                for (int i = 0; i < d; ++i) {
                    m[static_cast<size_t>(i)] =
                        ma[static_cast<size_t>(i)] + mb[static_cast<size_t>(i)];
                    total += m[static_cast<size_t>(i)];
                }
                if (total > cap) continue;
                C prod = ca * cb;
                auto it = out.terms.find(m);
                if (it == out.terms.end())
                    out.terms.emplace(std::move(m), std::move(prod));
                else
                    it->second += prod;
            }
        }
        return out;
    }
    void add_term(const std::vector<int>& m, const C& c) {
        auto it = terms.find(m);
        if (it == terms.end())
            terms.emplace(m, c);
        else
            it->second += c;
    }
    const C* find(const std::vector<int>& m) const {
        auto it = terms.find(m);
        return it == terms.end() ? nullptr : &it->second;
    }
};

// Exact Taylor coefficient of the two-term phi (b eliminated): value is
// d(phi,n)/prod n_i! = q * alpha^{1 + n.gamma}.
AlphaMono twoterm_taylor_exact(const std::vector<int>& n, const std::vector<Rational>& gammas,
                               const Rational& beta) {
    const int total = multi_total(n);
    Rational ngamma(0);
    for (size_t i = 0; i < n.size(); ++i) ngamma += Rational(n[i]) * gammas[i];
    Rational q = -rational_pow(-beta, -total);
    for (int i = 1; i <= total - 1; ++i) q *= Rational(-1) + Rational(i) * beta - ngamma;
    for (int ni : n) q /= Rational(factorial(ni));
    return AlphaMono{q, Rational(1) + ngamma};
}

std::string range_label_transform(const std::string& kind, int order) {
    std::ostringstream os;
    os << kind << ", all multi-indices with total <= " << order;
    return os.str();
}

}  // namespace

IdentityReport transform_check_exact(const std::vector<Rational>& gammas, const Rational& beta1,
                                     const Rational& beta2, int order) {
    IdentityReport rep;
    rep.identity = "transform";
    rep.range = range_label_transform("exact", order);
    if (beta1 == 0 || beta2 == 0) throw std::invalid_argument("transform wants beta1, beta2 != 0");
    const int d = static_cast<int>(gammas.size());

    // u = phi(a; gamma, b, beta1)/alpha1 - 1 as a truncated series
    TruncSeries<AlphaMono> u;
    u.d = d;
    u.cap = order;
    for (const auto& n : multi_indices_up_to(d, order)) {
        AlphaMono t = twoterm_taylor_exact(n, gammas, beta1);
        u.add_term(n, AlphaMono{t.q, t.e - 1});  // divide by alpha1
    }
    // (1 + u)^{1/beta2} = sum_k C(1/beta2, k) u^k
    Rational inv_beta2 = 1 / beta2;
    TruncSeries<AlphaMono> sum = TruncSeries<AlphaMono>::constant(d, order, AlphaMono{});
    TruncSeries<AlphaMono> upow = TruncSeries<AlphaMono>::constant(d, order, AlphaMono{Rational(1), Rational(0)});
    for (int k = 0; k <= order; ++k) {
        Rational bk = gen_binomial(inv_beta2, k);
        for (const auto& [m, c] : upow.terms) sum.add_term(m, c.scaled(bk));
        if (k < order) upow = upow.mul(u);
    }
    // multiply by alpha2 = alpha1^{1/beta2}
    AlphaMono alpha2{Rational(1), inv_beta2};

    // right side: phi(a; beta2 gamma, b, beta2 beta1) about alpha2, expressed
    // in alpha1 powers via alpha2^x = alpha1^{x/beta2}
    std::vector<Rational> g2;
    g2.reserve(gammas.size());
    for (const auto& g : gammas) g2.push_back(beta2 * g);
    Rational beta12 = beta2 * beta1;

    for (const auto& n : multi_indices_up_to(d, order)) {
        const AlphaMono* lc = sum.find(n);
        AlphaMono lhs = lc ? (*lc * alpha2) : AlphaMono{};
        AlphaMono rhs_a2 = twoterm_taylor_exact(n, g2, beta12);  // q * alpha2^e
        AlphaMono rhs{rhs_a2.q, rhs_a2.e * inv_beta2};
        if (!(lhs == rhs)) {
            json ce;
            ce["n"] = n;
            ce["lhs"] = {{"q", rational_to_string(lhs.q)}, {"alpha1_exp", rational_to_string(lhs.e)}};
            ce["rhs"] = {{"q", rational_to_string(rhs.q)}, {"alpha1_exp", rational_to_string(rhs.e)}};
            rep.fail(ce);
            return rep;
        }
    }
    return rep;
}

IdentityReport transform_check_numeric(const Perturbation& pert, Complex b, Complex beta1,
                                       Complex beta2, int order, double rel_tol) {
    IdentityReport rep;
    rep.identity = "transform";
    rep.range = range_label_transform("numeric", order);
    if (beta1 == Complex(0.0, 0.0) || beta2 == Complex(0.0, 0.0))
        throw std::invalid_argument("transform wants beta1, beta2 != 0");
    if (b == Complex(0.0, 0.0)) throw std::invalid_argument("transform wants b != 0");
    const int d = pert.d();

    // alpha1: a zero of 1 + b z^{beta1}; alpha2 = alpha1^{1/beta2}
    BranchPoint w = BranchPoint::from_complex(-Complex(1.0, 0.0) / b);
    Complex alpha1_val = branch_pow(w, Complex(1.0, 0.0) / beta1);
    BranchPoint alpha1 = BranchPoint::from_complex(alpha1_val);
    Complex alpha2_val = branch_pow(alpha1, Complex(1.0, 0.0) / beta2);
    BranchPoint alpha2 = BranchPoint::from_complex(alpha2_val);

    TruncSeries<Complex> u;
    u.d = d;
    u.cap = order;
    for (const auto& n : multi_indices_up_to(d, order)) {
        Complex t = phi_coeff_twoterm(n, pert, b, beta1, alpha1);
        for (int ni : n) t /= factorial(ni).get_d();
        u.add_term(n, t / alpha1_val);
    }
    TruncSeries<Complex> sum = TruncSeries<Complex>::constant(d, order, Complex(0.0, 0.0));
    TruncSeries<Complex> upow = TruncSeries<Complex>::constant(d, order, Complex(1.0, 0.0));
    Complex inv_beta2 = Complex(1.0, 0.0) / beta2;
    for (int k = 0; k <= order; ++k) {
        Complex bk = gen_binomial(inv_beta2, static_cast<long>(k));
        for (const auto& [m, c] : upow.terms) sum.add_term(m, c * bk);
        if (k < order) upow = upow.mul(u);
    }

    std::vector<Complex> g2;
    for (const auto& g : pert.gammas) g2.push_back(beta2 * g);
    Perturbation pert2(g2);
    Complex beta12 = beta2 * beta1;

    for (const auto& n : multi_indices_up_to(d, order)) {
        const Complex* lc = sum.find(n);
        Complex lhs = (lc ? *lc : Complex(0.0, 0.0)) * alpha2_val;
        Complex rhs = phi_coeff_twoterm(n, pert2, b, beta12, alpha2);
        for (int ni : n) rhs /= factorial(ni).get_d();
        double err = std::abs(lhs - rhs);
        if (err > rel_tol * std::max(1.0, std::abs(rhs))) {
            json ce;
            ce["n"] = n;
            ce["lhs"] = {lhs.real(), lhs.imag()};
            ce["rhs"] = {rhs.real(), rhs.imag()};
            ce["abs_error"] = err;
            rep.fail(ce);
            return rep;
        }
    }
    return rep;
}

// ---- section-2 identity suite ----------------------------------------------------

IdentityReport check_F_prod(int M, int a) {
    IdentityReport rep;
    rep.identity = "fprod";
    {
        std::ostringstream os;
        os << "M=" << M << ", a=" << a;
        rep.range = os.str();
    }
    if (a < 1 || a > M) throw std::invalid_argument("fprod wants 1 <= a <= M");
    SymbolicOps ops;
    ops.syms = SymbolSet::make(M, M);

    LaurentPoly x_total = ops.syms.zero();
    for (int i = 1; i <= M; ++i) x_total += ops.syms.x(i);
    LaurentPoly rhs = F_reduced_poly(x_total, M - 1, a, ops);

    LaurentPoly lhs = ops.syms.zero();
    for (const SetPartition& s : set_partitions(M, a)) {
        LaurentPoly prod = ops.syms.constant(Rational(1));
        for (const auto& part : s.parts) {
            LaurentPoly xsum = ops.syms.zero();
            for (int m : part) xsum += ops.syms.x(m);
            prod *= F_reduced_poly(xsum, static_cast<int>(part.size()) - 1, 1, ops);
        }
        lhs += prod;
    }
    if (!(lhs == rhs)) {
        rep.fail({{"M", M}, {"a", a}, {"lhs", lhs.str()}, {"rhs", rhs.str()}});
    }
    return rep;
}

IdentityReport check_nu(int N, int k) {
    IdentityReport rep;
    rep.identity = "nu";
    {
        std::ostringstream os;
        os << "N=" << N << ", k=" << k;
        rep.range = os.str();
    }
    if (k < 1 || k > N) throw std::invalid_argument("nu identity wants 1 <= k <= N");
    SymbolSet syms = SymbolSet::make(0, N, /*with_nu=*/true);
    LaurentPoly nu = syms.nu();
    LaurentPoly x_total = syms.zero();
    for (int i = 1; i <= N; ++i) x_total += syms.x(i);

    // alternating sum side
    LaurentPoly lhs = syms.zero();
    for (int r = 0; r <= k - 1; ++r) {
        LaurentPoly arg = nu.scaled(Rational(r + 1)) + x_total -
                          syms.constant(Rational(1));
        Rational coef = Rational(factorial(k - 1)) /
                        (Rational(factorial(r)) * Rational(factorial(k - 1 - r)));
        coef /= Rational(factorial(k - 1));
        if ((k - 1 - r) % 2 == 1) coef = -coef;
        lhs += falling_factorial(arg, N - 1).scaled(coef);
    }
    // partition side
    LaurentPoly rhs = syms.zero();
    for (const SetPartition& s : set_partitions(N, k)) {
        LaurentPoly prod = syms.constant(Rational(1));
        for (const auto& part : s.parts) {
            LaurentPoly arg = nu - syms.constant(Rational(1));
            for (int m : part) arg += syms.x(m);
            prod *= falling_factorial(arg, static_cast<int>(part.size()) - 1);
        }
        rhs += prod;
    }
    rhs = rhs * nu.pow(k - 1);
    if (!(lhs == rhs)) {
        rep.fail({{"N", N}, {"k", k}, {"lhs", lhs.str()}, {"rhs", rhs.str()}});
    }
    return rep;
}

Rational random_small_rational(std::mt19937_64& rng, bool nonzero) {
    std::uniform_int_distribution<int> num(-9, 9);
    std::uniform_int_distribution<int> den(1, 9);
    Rational q;
    do {
        q = make_rational(num(rng), den(rng));
    } while (nonzero && q == 0);
    return q;
}

namespace {

LaurentPoly random_poly_in(const SymbolSet& syms, const LaurentPoly& var, int max_degree,
                           std::mt19937_64& rng) {
    std::uniform_int_distribution<int> deg(0, max_degree);
    int degree = deg(rng);
    LaurentPoly p = syms.zero();
    for (int i = 0; i <= degree; ++i)
        p += var.pow(i).scaled(random_small_rational(rng, i == degree));
    return p;
}

LaurentPoly iterated_derivative(LaurentPoly p, int sym, int times) {
    for (int i = 0; i < times; ++i) p = p.derivative(sym);
    return p;
}

}  // namespace

IdentityReport check_deriv_set(int M, int trials, std::mt19937_64& rng) {
    IdentityReport rep;
    rep.identity = "derivset";
    {
        std::ostringstream os;
        os << "M=" << M << ", trials=" << trials;
        rep.range = os.str();
    }
    if (M < 0) throw std::invalid_argument("derivset wants M >= 0");
    SymbolSet syms = SymbolSet::make(0, 0, false, /*with_t=*/true);
    LaurentPoly tvar = syms.t();
    const int tsym = syms.t_idx;

    for (int trial = 0; trial < trials; ++trial) {
        LaurentPoly fA = random_poly_in(syms, tvar, 3, rng);
        LaurentPoly fB = random_poly_in(syms, tvar, 3, rng);
        std::vector<LaurentPoly> fi;
        for (int i = 0; i < M; ++i) fi.push_back(random_poly_in(syms, tvar, 3, rng));

        LaurentPoly all = fA * fB;
        for (const auto& f : fi) all *= f;
        LaurentPoly rhs = iterated_derivative(all, tsym, M);

        LaurentPoly lhs = syms.zero();
        for (unsigned mask = 0; mask < (1u << M); ++mask) {
            LaurentPoly left;
            int wc_size = 0;
            LaurentPoly prod_wc = syms.constant(Rational(1));
            for (int i = 0; i < M; ++i)
                if (!(mask & (1u << i))) {
                    ++wc_size;
                    prod_wc *= fi[static_cast<size_t>(i)];
                }
            if (wc_size == 0) {
                left = fA;  // delta^{-1} f_A' means f_A
            } else {
                left = iterated_derivative(fA.derivative(tsym) * prod_wc, tsym, wc_size - 1);
            }
            LaurentPoly prod_w = fB;
            int w_size = 0;
            for (int i = 0; i < M; ++i)
                if (mask & (1u << i)) {
                    ++w_size;
                    prod_w *= fi[static_cast<size_t>(i)];
                }
            lhs += left * iterated_derivative(prod_w, tsym, w_size);
        }
        if (!(lhs == rhs)) {
            rep.fail({{"M", M},
                      {"trial", trial},
                      {"f_A", fA.str()},
                      {"f_B", fB.str()},
                      {"lhs", lhs.str()},
                      {"rhs", rhs.str()}});
            return rep;
        }
    }
    return rep;
}

IdentityReport check_newton_series(int degree, std::mt19937_64& rng) {
    IdentityReport rep;
    rep.identity = "newton-series";
    rep.range = "degree=" + std::to_string(degree);
    if (degree < 0) throw std::invalid_argument("newton series wants degree >= 0");
    SymbolSet syms = SymbolSet::make(0, 1);
    LaurentPoly x = syms.x(1);
    LaurentPoly F = random_poly_in(syms, x, degree, rng);

    // values F(1..m+1)
    std::vector<Rational> values;
    for (int r = 0; r <= degree; ++r)
        values.push_back(F.eval_rational({{"x1", Rational(r + 1)}}));

    LaurentPoly recon = syms.zero();
    for (int k = 1; k <= degree + 1; ++k) {
        Rational inner(0);
        for (int r = 0; r <= k - 1; ++r) {
            Rational c = Rational(factorial(k - 1)) /
                         (Rational(factorial(r)) * Rational(factorial(k - 1 - r)));
            if ((k - 1 - r) % 2 == 1) c = -c;
            inner += c * values[static_cast<size_t>(r)];
        }
        LaurentPoly basis = falling_factorial(x - syms.constant(Rational(1)), k - 1);
        recon += basis.scaled(inner / Rational(factorial(k - 1)));
    }
    if (!(recon == F)) {
        rep.fail({{"degree", degree}, {"F", F.str()}, {"reconstruction", recon.str()}});
    }
    return rep;
}

IdentityReport check_vandermonde(int n_max, int trials, std::mt19937_64& rng) {
    IdentityReport rep;
    rep.identity = "vandermonde";
    {
        std::ostringstream os;
        os << "n<=" << n_max << ", trials=" << trials;
        rep.range = os.str();
    }
    for (int trial = 0; trial < trials; ++trial) {
        Rational a = random_small_rational(rng);
        Rational b = random_small_rational(rng);
        for (int n = 0; n <= n_max; ++n) {
            Rational lhs = falling_factorial(Rational(a + b), n);
            Rational rhs(0);
            for (int i = 0; i <= n; ++i) {
                Rational binom = Rational(factorial(n)) /
                                 (Rational(factorial(i)) * Rational(factorial(n - i)));
                rhs += binom * falling_factorial(a, i) * falling_factorial(b, n - i);
            }
            if (lhs != rhs) {
                rep.fail({{"a", rational_to_string(a)},
                          {"b", rational_to_string(b)},
                          {"n", n},
                          {"lhs", rational_to_string(lhs)},
                          {"rhs", rational_to_string(rhs)}});
                return rep;
            }
        }
    }
    return rep;
}

// ---- suite driver ---------------------------------------------------------------------

std::vector<ExactRealProblem> default_convergence_problems() {
    std::vector<ExactRealProblem> probs;
    // two-term 1 - z^2 about alpha = 1: c1 = -2, c2 = -1
    probs.push_back(ExactRealProblem{
        "twoterm-beta2", Rational(1), {make_rational(-2), make_rational(-1)}, {1}});
    // truncated cubic -(z-3/2) + (z-3/2)^3/6
    probs.push_back(ExactRealProblem{
        "truncated-cubic", make_rational(3, 2),
        {make_rational(-1), Rational(0), make_rational(1, 6)}, {1}});
    // degree-5 polynomial base about alpha = 2
    probs.push_back(ExactRealProblem{
        "degree-5", Rational(2),
        {Rational(1), make_rational(1, 4), make_rational(1, 8), make_rational(1, 16),
         make_rational(1, 32)},
        {2}});
    return probs;
}

namespace {

std::vector<Rational> default_convergence_samples() {
    // exact rationals spanning |a| in [1e-5, 1e-3]
    return {make_rational(1, 100000), make_rational(1, 50000), make_rational(1, 20000),
            make_rational(1, 10000),  make_rational(1, 5000),  make_rational(1, 2000),
            make_rational(1, 1000)};
}

IdentityReport consistency_report(const VerifyOptions& opts, std::mt19937_64& rng) {
    IdentityReport rep;
    rep.identity = "closed-form-vs-oracle";
    {
        std::ostringstream os;
        os << "d<=" << opts.consistency_max_d << ", total<=" << opts.consistency_max_total
           << ", symbolic + numeric";
        rep.range = os.str();
    }
    // exact, random rational gammas per d
    for (int d = 1; d <= opts.consistency_max_d; ++d) {
        std::vector<Rational> g;
        for (int i = 0; i < d; ++i) g.push_back(random_small_rational(rng));
        SymbolicEngine closed(g, opts.consistency_max_total);
        SymbolicEngine oracle(g, opts.consistency_max_total);
        for (const auto& n : multi_indices_up_to(d, opts.consistency_max_total)) {
            OrderedMultiset I = OrderedMultiset::from_multiplicities(n);
            SymbolicCoeff a = closed.phi_partial(I);
            SymbolicCoeff b = oracle.phi_partial_oracle(I);
            if (!(a.poly == b.poly) || a.alpha_exponent != b.alpha_exponent) {
                rep.fail({{"mode", "symbolic"},
                          {"d", d},
                          {"n", n},
                          {"closed", a.poly.str()},
                          {"oracle", b.poly.str()}});
                return rep;
            }
        }
    }
    // numeric with complex gammas
    std::uniform_real_distribution<double> unif(-2.0, 2.0);
    for (int d = 1; d <= std::min(2, opts.consistency_max_d); ++d) {
        std::vector<Complex> g;
        for (int i = 0; i < d; ++i) g.emplace_back(unif(rng), unif(rng));
        Perturbation pert(g);
        std::vector<Complex> coeffs = {Complex(1.3, -0.4), Complex(0.2, 0.1), Complex(-0.3, 0.05),
                                       Complex(0.07, 0.0), Complex(0.01, -0.02)};
        BaseFunction base = BaseFunction::numeric(BranchPoint(1.2, 0.7, 0), coeffs);
        NumericEngine eng(pert, base);
        for (const auto& n : multi_indices_up_to(d, std::min(5, opts.consistency_max_total))) {
            OrderedMultiset I = OrderedMultiset::from_multiplicities(n);
            Complex a = eng.phi_partial(I);
            Complex b = eng.phi_partial_oracle(I);
            double err = std::abs(a - b);
            if (err > 1e-9 * std::max(1.0, std::abs(a))) {
                rep.fail({{"mode", "numeric"},
                          {"d", d},
                          {"n", n},
                          {"closed", {a.real(), a.imag()}},
                          {"oracle", {b.real(), b.imag()}},
                          {"abs_error", err}});
                return rep;
            }
        }
    }
    return rep;
}

IdentityReport twoterm_consistency_report(const VerifyOptions& opts) {
    IdentityReport rep;
    rep.identity = "twoterm-consistency";
    rep.range = "beta in {2, 3, 5/2}, d<=2, total<=5";
    (void)opts;
    std::vector<Rational> betas = {Rational(2), Rational(3), make_rational(5, 2)};
    for (const Rational& beta : betas) {
        std::vector<Rational> g = {make_rational(1, 2), Rational(3)};
        SymbolicEngine eng = SymbolicEngine::twoterm(g, beta);
        for (const auto& n : multi_indices_up_to(2, 5)) {
            SymbolicCoeff via_F = eng.taylor_coeff(n);
            SymbolicCoeff direct = phi_coeff_twoterm_exact(n, g, beta, eng.symbols());
            Rational scale(1);
            for (int ni : n) scale /= Rational(factorial(ni));
            LaurentPoly want = direct.poly.scaled(scale);
            if (!(via_F.poly == want) || via_F.alpha_exponent != direct.alpha_exponent) {
                rep.fail({{"beta", rational_to_string(beta)},
                          {"n", n},
                          {"via_F", via_F.poly.str()},
                          {"twoterm", want.str()}});
                return rep;
            }
        }
    }
    return rep;
}

IdentityReport integrality_sweep(const VerifyOptions& opts) {
    IdentityReport rep;
    rep.identity = "integrality";
    {
        std::ostringstream os;
        os << "d<=" << opts.integrality_max_d << ", |gamma|<=" << opts.integrality_gamma_bound
           << ", total<=" << opts.integrality_max_total;
        rep.range = os.str();
    }
    const int b = opts.integrality_gamma_bound;
    for (int d = 1; d <= opts.integrality_max_d; ++d) {
        std::vector<long> gamma(static_cast<size_t>(d), -b);
        while (true) {
            std::vector<Rational> g;
            for (long gv : gamma) g.emplace_back(gv);
            SymbolicEngine eng(g, opts.integrality_max_total);
            for (const auto& n : multi_indices_up_to(d, opts.integrality_max_total)) {
                SymbolicCoeff t = eng.taylor_coeff(n);
                json offender;
                if (!coeff_is_integral(t, multi_total(n), &offender)) {
                    json ce = offender;
                    ce["n"] = n;
                    ce["gamma"] = gamma;
                    rep.fail(ce);
                    return rep;
                }
            }
            // next gamma tuple
            int pos = 0;
            while (pos < d && gamma[static_cast<size_t>(pos)] == b) {
                gamma[static_cast<size_t>(pos)] = -b;
                ++pos;
            }
            if (pos == d) break;
            ++gamma[static_cast<size_t>(pos)];
        }
    }
    return rep;
}

IdentityReport integrality_negative_control() {
    IdentityReport rep;
    rep.identity = "integrality-negative-control";
    rep.range = "d=1, gamma=(0), n=(2), coefficient halved";
    SymbolicEngine eng({Rational(0)}, 2);
    SymbolicCoeff t = eng.taylor_coeff({2});
    t.poly = t.poly.scaled(make_rational(1, 2));  // corrupt
    json offender;
    if (coeff_is_integral(t, 2, &offender))
        rep.fail({{"reason", "corrupted coefficient was not detected"}});
    return rep;
}

IdentityReport transform_suite_report(const VerifyOptions& opts) {
    IdentityReport rep;
    rep.identity = "transform";
    rep.range = "6 exact + 3 numeric parameter sets, order " + std::to_string(opts.transform_order);
    const int N = opts.transform_order;

    struct ExactCase {
        std::vector<Rational> gammas;
        Rational beta1, beta2;
    };
    std::vector<ExactCase> exact_cases = {
        {{Rational(1)}, Rational(2), Rational(1)},
        {{Rational(1)}, Rational(2), Rational(2)},
        {{Rational(0)}, Rational(2), Rational(3)},
        {{make_rational(1, 2)}, make_rational(5, 2), Rational(2)},
        {{Rational(1), Rational(2)}, Rational(3), Rational(2)},
        {{Rational(1), make_rational(-1, 2)}, Rational(2), make_rational(3, 2)},
    };
    for (const auto& c : exact_cases) {
        IdentityReport sub = transform_check_exact(c.gammas, c.beta1, c.beta2, N);
        if (!sub.passed) {
            json ce = *sub.counterexample;
            ce["beta1"] = rational_to_string(c.beta1);
            ce["beta2"] = rational_to_string(c.beta2);
            rep.fail(ce);
            return rep;
        }
    }

    struct NumericCase {
        std::vector<Complex> gammas;
        Complex b, beta1, beta2;
    };
    std::vector<NumericCase> numeric_cases = {
        {{Complex(1.0, 0.0)}, Complex(-1.0, 0.0), Complex(2.0, 0.0), Complex(2.0, 0.0)},
        {{Complex(0.5, 0.0)}, Complex(-2.0, 0.3), Complex(2.0, 0.0), Complex(3.0, 0.0)},
        {{Complex(1.0, 0.0), Complex(0.0, 0.0)}, Complex(-1.5, 0.0), Complex(3.0, 0.0),
         Complex(0.5, 0.0)},
    };
    for (const auto& c : numeric_cases) {
        Perturbation pert(c.gammas);
        IdentityReport sub = transform_check_numeric(pert, c.b, c.beta1, c.beta2, N);
        if (!sub.passed) {
            json ce = *sub.counterexample;
            ce["b"] = {c.b.real(), c.b.imag()};
            rep.fail(ce);
            return rep;
        }
    }
    return rep;
}

IdentityReport convergence_report(const VerifyOptions& opts) {
    IdentityReport rep;
    rep.identity = "convergence-order";
    {
        std::ostringstream os;
        os << "3 bases, order 1.." << opts.convergence_max_order << ", |a| in [1e-5, 1e-3]";
        rep.range = os.str();
    }
    auto samples = default_convergence_samples();
    for (const ExactRealProblem& prob : default_convergence_problems()) {
        for (int order = 1; order <= opts.convergence_max_order; ++order) {
            TrackReport tr =
                convergence_order_fit_exact(prob, order, samples, opts.convergence_bits);
            if (!tr.passed) {
                json ce = tr.to_json();
                ce["required_slope"] = double(order) + 0.5;
                rep.fail(ce);
                return rep;
            }
        }
    }
    return rep;
}

void append_fprod(std::vector<IdentityReport>& out, const VerifyOptions& opts) {
    IdentityReport rep;
    rep.identity = "fprod";
    rep.range = "1<=a<=M<=" + std::to_string(opts.fprod_max_M);
    for (int M = 1; M <= opts.fprod_max_M && rep.passed; ++M)
        for (int a = 1; a <= M && rep.passed; ++a) {
            IdentityReport sub = check_F_prod(M, a);
            if (!sub.passed) rep.fail(*sub.counterexample);
        }
    out.push_back(std::move(rep));
}

void append_nu(std::vector<IdentityReport>& out, const VerifyOptions& opts) {
    IdentityReport rep;
    rep.identity = "nu";
    rep.range = "1<=k<=N<=" + std::to_string(opts.nu_max_N);
    for (int N = 1; N <= opts.nu_max_N && rep.passed; ++N)
        for (int k = 1; k <= N && rep.passed; ++k) {
            IdentityReport sub = check_nu(N, k);
            if (!sub.passed) rep.fail(*sub.counterexample);
        }
    out.push_back(std::move(rep));
}

void append_derivset(std::vector<IdentityReport>& out, const VerifyOptions& opts,
                     std::mt19937_64& rng) {
    IdentityReport rep;
    rep.identity = "derivset";
    rep.range = "M<=" + std::to_string(opts.derivset_max_M) + ", trials=" +
                std::to_string(opts.derivset_trials);
    for (int M = 0; M <= opts.derivset_max_M && rep.passed; ++M) {
        IdentityReport sub = check_deriv_set(M, opts.derivset_trials, rng);
        if (!sub.passed) rep.fail(*sub.counterexample);
    }
    out.push_back(std::move(rep));
}

void append_newton_series(std::vector<IdentityReport>& out, const VerifyOptions& opts,
                          std::mt19937_64& rng) {
    IdentityReport rep;
    rep.identity = "newton-series";
    rep.range = "degree<=" + std::to_string(opts.newton_max_degree);
    for (int m = 0; m <= opts.newton_max_degree && rep.passed; ++m) {
        IdentityReport sub = check_newton_series(m, rng);
        if (!sub.passed) rep.fail(*sub.counterexample);
    }
    out.push_back(std::move(rep));
}

}  // namespace

std::vector<IdentityReport> run_verify_suite(const std::string& selector,
                                             const VerifyOptions& opts) {
    std::mt19937_64 rng(opts.seed);
    std::vector<IdentityReport> out;
    bool all = selector == "all";
    bool known = all;

    if (all || selector == "fprod") {
        append_fprod(out, opts);
        known = true;
    }
    if (all || selector == "nu") {
        append_nu(out, opts);
        known = true;
    }
    if (all || selector == "derivset") {
        append_derivset(out, opts, rng);
        known = true;
    }
    if (all || selector == "newton") {
        append_newton_series(out, opts, rng);
        known = true;
    }
    if (all || selector == "vandermonde") {
        out.push_back(check_vandermonde(opts.vandermonde_max_n, opts.vandermonde_trials, rng));
        known = true;
    }
    if (all || selector == "integrality") {
        out.push_back(integrality_sweep(opts));
        out.push_back(integrality_negative_control());
        known = true;
    }
    if (all || selector == "transform") {
        out.push_back(transform_suite_report(opts));
        known = true;
    }
    if (all || selector == "theorem-main-consistency") {
        out.push_back(consistency_report(opts, rng));
        out.push_back(twoterm_consistency_report(opts));
        known = true;
    }
    if (all || selector == "convergence") {
        out.push_back(convergence_report(opts));
        known = true;
    }
    if (!known) throw std::invalid_argument("unknown verify selector: " + selector);
    return out;
}

}  // namespace rootseries
