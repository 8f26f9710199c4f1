// Acceptance suite: one pass/fail line per criterion, nonzero exit on failure.

#include <chrono>
#include <cstdio>
#include <random>

#include "rootseries/verify.hpp"

using namespace rootseries;

namespace {

int g_failures = 0;

void report(int criterion, bool ok, const std::string& what) {
    std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", criterion, what.c_str());
    if (!ok) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1. closed form == implicit-differentiation oracle, exact, d <= 3, total <= 6
void criterion_equivalence() {
    auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(20240811);
    int multisets = 0;
    bool ok = true;
    std::string detail;
    for (int d = 1; d <= 3 && ok; ++d) {
        std::vector<Rational> gammas;
        for (int i = 0; i < d; ++i) gammas.push_back(random_small_rational(rng));
        SymbolicEngine closed(gammas, 6);
        SymbolicEngine oracle(gammas, 6);
        for (const auto& n : multi_indices_up_to(d, 6)) {
            OrderedMultiset I = OrderedMultiset::from_multiplicities(n);
            SymbolicCoeff a = closed.phi_partial(I);
            SymbolicCoeff b = oracle.phi_partial_oracle(I);
            ++multisets;
            if (!(a.poly == b.poly) || a.alpha_exponent != b.alpha_exponent) {
                ok = false;
                detail = "first mismatch at d=" + std::to_string(d);
                break;
            }
        }
    }
    double dt = seconds_since(t0);
    if (multisets < 80) {
        ok = false;
        detail = "only " + std::to_string(multisets) + " multisets";
    }
    if (dt >= 120.0) {
        ok = false;
        detail = "runtime " + std::to_string(dt) + "s over budget";
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "closed form equals oracle exactly on %d multisets (d<=3, total<=6) in %.1fs%s%s",
                  multisets, dt, detail.empty() ? "" : " -- ", detail.c_str());
    report(1, ok, buf);
}

// 2. two-term closed form == general formula under c_k = b C(beta,k) alpha^{beta-k}
void criterion_twoterm() {
    bool ok = true;
    std::string detail;
    for (const Rational& beta : {Rational(2), Rational(3), make_rational(5, 2)}) {
        for (int d = 1; d <= 2 && ok; ++d) {
            std::vector<Rational> gammas;
            if (d == 1)
                gammas = {make_rational(1, 2)};
            else
                gammas = {make_rational(1, 2), Rational(3)};
            SymbolicEngine eng = SymbolicEngine::twoterm(gammas, beta);
            for (const auto& n : multi_indices_up_to(d, 5)) {
                SymbolicCoeff via_F = eng.taylor_coeff(n);
                SymbolicCoeff direct = phi_coeff_twoterm_exact(n, gammas, beta, eng.symbols());
                Rational scale(1);
                for (int ni : n) scale /= Rational(factorial(ni));
                if (!(via_F.poly == direct.poly.scaled(scale)) ||
                    via_F.alpha_exponent != direct.alpha_exponent) {
                    ok = false;
                    detail = " -- mismatch at beta=" + rational_to_string(beta);
                    break;
                }
            }
        }
    }
    report(2, ok, "two-term closed form matches the general engine exactly "
                  "(beta in {2, 3, 5/2}, total<=5)" + detail);
}

// 3. integrality of normalized coefficients for integer gammas; negative control
void criterion_integrality() {
    VerifyOptions opts;
    bool ok = true;
    std::string detail;
    for (const auto& r : run_verify_suite("integrality", opts))
        if (!r.passed) {
            ok = false;
            detail = " -- " + r.identity + " failed";
        }
    report(3, ok, "normalized coefficients integral for integer gammas "
                  "(d<=2, |gamma|<=3, total<=6); halved-coefficient control detected" + detail);
}

// 4. transform rule, 6 exact + 3 numeric parameter sets at order 4
void criterion_transform() {
    VerifyOptions opts;
    auto reports = run_verify_suite("transform", opts);
    bool ok = true;
    for (const auto& r : reports) ok = ok && r.passed;
    report(4, ok, "series transformation rule holds term-by-term at order 4 "
                  "(exact symbolic and numeric 1e-9)");
}

// 5. section-2/3 identity suite, exact, under a minute
void criterion_identities() {
    auto t0 = std::chrono::steady_clock::now();
    VerifyOptions opts;
    bool ok = true;
    std::string bad;
    for (const char* sel : {"fprod", "nu", "derivset", "newton", "vandermonde"}) {
        for (const auto& r : run_verify_suite(sel, opts))
            if (!r.passed) {
                ok = false;
                bad = std::string(" -- ") + sel + " failed";
            }
    }
    double dt = seconds_since(t0);
    if (dt >= 60.0) {
        ok = false;
        bad = " -- runtime over budget";
    }
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "identity suite exact passes (fprod M<=5, nu N<=5, derivset M<=4 x10, "
                  "newton deg<=6, vandermonde n<=8) in %.1fs%s",
                  dt, bad.c_str());
    report(5, ok, buf);
}

// 6. truncation-order slopes for three bases, orders 1..4
void criterion_convergence() {
    std::vector<Rational> samples = {make_rational(1, 100000), make_rational(1, 50000),
                                     make_rational(1, 20000),  make_rational(1, 10000),
                                     make_rational(1, 5000),   make_rational(1, 2000),
                                     make_rational(1, 1000)};
    bool ok = true;
    std::string detail;
    for (const ExactRealProblem& prob : default_convergence_problems()) {
        for (int order = 1; order <= 4 && ok; ++order) {
            TrackReport rep = convergence_order_fit_exact(prob, order, samples, 256);
            if (!rep.passed) {
                ok = false;
                char buf[120];
                std::snprintf(buf, sizeof(buf), " -- %s order %d slope %.3f < %.1f",
                              prob.label.c_str(), order, rep.slope, double(order) + 0.5);
                detail = buf;
            }
        }
    }
    report(6, ok, "truncation error slope >= N + 0.5 for 3 bases, N in 1..4, "
                  "|a| in [1e-5, 1e-3]" + detail);
}

// 7. branch correctness: gamma = 1/2 series on sheet 0 vs sheet 1
void criterion_branch() {
    std::vector<Complex> coeffs = {Complex(1.0, 0.0), Complex(0.25, 0.0)};
    Perturbation pert({Complex(0.5, 0.0)});
    BaseFunction sheet0 = BaseFunction::numeric(BranchPoint(2.0, 0.3, 0), coeffs);
    BaseFunction sheet1 = BaseFunction::numeric(BranchPoint(2.0, 0.3, 1), coeffs);
    Complex t0 = NumericEngine(pert, sheet0).taylor_coeff({1});
    Complex t1 = NumericEngine(pert, sheet1).taylor_coeff({1});
    // sheets differ by exp(2 pi i n gamma) = exp(i pi) at first order
    Complex predicted = std::exp(Complex(0.0, kPi));
    Complex ratio = t1 / t0;
    double err = std::abs(ratio - predicted) / std::abs(predicted);
    bool ok = err <= 1e-12;
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "sheet-0 vs sheet-1 first-order coefficients differ by exp(i pi) "
                  "(rel err %.2e)",
                  err);
    report(7, ok, buf);
}

}  // namespace

int main() {
    criterion_equivalence();
    criterion_twoterm();
    criterion_integrality();
    criterion_transform();
    criterion_identities();
    criterion_convergence();
    criterion_branch();
    if (g_failures) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all acceptance criteria passed\n");
    return 0;
}
