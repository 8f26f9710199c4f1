#include <doctest.h>

#include "rootseries/verify.hpp"

using namespace rootseries;

namespace {

bool close(Complex a, Complex b, double tol = 1e-12) {
    return std::abs(a - b) <= tol * std::max(1.0, std::abs(b));
}

}  // namespace

TEST_CASE("branch_pow fixed points") {
    CHECK(close(branch_pow(BranchPoint(1.0, 0.0, 0), Complex(0.37, 1.2)), Complex(1.0, 0.0)));
    CHECK(close(branch_pow(BranchPoint(1.0, 0.0, 1), Complex(0.5, 0.0)), Complex(-1.0, 0.0)));
    CHECK(close(branch_pow(BranchPoint(std::exp(1.0), 0.0, 0), Complex(2.0, 0.0)),
                Complex(std::exp(2.0), 0.0)));
}

TEST_CASE("branch_pow is exponentially additive") {
    BranchPoint z(2.0, 1.0, 1);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unif(-1.5, 1.5);
    for (int t = 0; t < 25; ++t) {
        Complex g1(unif(rng), unif(rng)), g2(unif(rng), unif(rng));
        Complex lhs = branch_pow(z, g1 + g2);
        Complex rhs = branch_pow(z, g1) * branch_pow(z, g2);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
    }
}

TEST_CASE("newton_track basics") {
    EvaluableBase eb = EvaluableBase::from_coeffs(BranchPoint(2.0, 0.0, 0), {Complex(1.0, 0.0)});
    Perturbation pert({Complex(0.0, 0.0)});
    NewtonResult at0 = newton_track(pert, eb, BranchPoint(2.0, 0.0, 0), {Complex(0.0, 0.0)});
    CHECK(close(at0.root, Complex(2.0, 0.0)));
    NewtonResult at01 = newton_track(pert, eb, BranchPoint(2.0, 0.0, 0), {Complex(0.1, 0.0)});
    CHECK(close(at01.root, Complex(1.9, 0.0)));
}

TEST_CASE("newton oracle vs truncated two-term series at small a") {
    BranchPoint alpha(1.0, 0.0, 0);
    Complex b(-1.0, 0.0), beta(2.0, 0.0);
    Perturbation pert({Complex(1.0, 0.0)});
    EvaluableBase eb = EvaluableBase::twoterm(b, beta, alpha);
    BaseFunction series_base = base_from_twoterm(b, beta, alpha, 6);
    NumericEngine eng(pert, series_base);
    double a = 1e-3;
    NewtonResult nr = newton_track(pert, eb, alpha, {Complex(a, 0.0)});
    Complex sv = eng.series_eval({Complex(a, 0.0)}, 4);
    CHECK(std::abs(sv - nr.root) < 10.0 * std::pow(a, 5));
}

TEST_CASE("pow_near wraps angles onto the reference sheet") {
    // integer powers agree with plain multiplication on either side of the cut
    BranchPoint ref(1.0, kPi - 0.1, 0);
    Complex z = std::polar(1.3, -kPi + 0.05);  // just past the principal cut
    CHECK(close(pow_near(z, Complex(2.0, 0.0), ref), z * z));
    CHECK(close(pow_near(z, Complex(1.0, 0.0), ref), z));
    // half powers are continuous across the cut on the tracked sheet
    Complex before = std::polar(1.3, kPi - 0.001);
    Complex after = std::polar(1.3, -kPi + 0.001);  // same neighborhood on the sheet
    Complex pb = pow_near(before, Complex(0.5, 0.0), ref);
    Complex pa = pow_near(after, Complex(0.5, 0.0), ref);
    CHECK(std::abs(pb - pa) < 1e-2);  // no sign flip
    // consistency with branch_pow at the reference point itself
    BranchPoint z2(2.0, 0.4, 1);
    CHECK(close(pow_near(z2.value(), Complex(0.7, 0.2), z2), branch_pow(z2, Complex(0.7, 0.2))));
}

TEST_CASE("homotopy fallback recovers when the direct budget is too small") {
    BranchPoint alpha(1.0, 0.0, 0);
    EvaluableBase eb = EvaluableBase::twoterm(Complex(-1.0, 0.0), Complex(2.0, 0.0), alpha);
    Perturbation pert({Complex(1.0, 0.0)});
    NewtonOptions opts;
    opts.max_iter = 4;  // too few for a direct solve at this a, enough per warm-started step
    double a = 0.5;
    NewtonResult nr = newton_track(pert, eb, alpha, {Complex(a, 0.0)}, opts);
    // root of 1 - z^2 + a z continued from 1: (a + sqrt(a^2 + 4)) / 2
    Complex want((a + std::sqrt(a * a + 4.0)) / 2.0, 0.0);
    CHECK(close(nr.root, want, 1e-10));
    CHECK(nr.iterations > opts.max_iter);  // went through the homotopy
}

TEST_CASE("newton failure paths surface as errors") {
    EvaluableBase eb = EvaluableBase::from_coeffs(BranchPoint(1.0, 0.0, 0),
                                                  {Complex(1.0, 0.0), Complex(1.0, 0.0)});
    Perturbation pert({Complex(0.0, 0.0)});
    NewtonOptions opts;
    opts.max_iter = 2;
    opts.homotopy_steps = 2;
    // far outside any tracking radius, with almost no iteration budget
    CHECK_THROWS_AS(newton_track(pert, eb, BranchPoint(1.0, 0.0, 0), {Complex(500.0, 0.0)}, opts),
                    NewtonError);
}

TEST_CASE("exact Newton solves rational polynomial problems") {
    ExactRealProblem prob{"linear", Rational(2), {Rational(1)}, {0}};
    int iters = 0;
    mpf_class root = newton_root_exact(prob, {make_rational(1, 10)}, 128, &iters);
    mpf_class want(0, 128);
    mpf_set_q(want.get_mpf_t(), make_rational(19, 10).get_mpq_t());  // exact root 19/10
    mpf_class err = abs(root - want);
    CHECK(err < 1e-30);
}

TEST_CASE("convergence fit: exact linear root sits at the floor") {
    ExactRealProblem prob{"linear", Rational(2), {Rational(1)}, {0}};
    std::vector<Rational> samples = {make_rational(1, 1000), make_rational(1, 2000),
                                     make_rational(1, 5000), make_rational(1, 10000),
                                     make_rational(1, 20000), make_rational(1, 100000)};
    TrackReport rep = convergence_order_fit_exact(prob, 3, samples, 192);
    CHECK(rep.exact_floor);
    CHECK(rep.passed);
}

TEST_CASE("convergence fit: truncated cubic slopes") {
    auto probs = default_convergence_problems();
    const ExactRealProblem& cubic = probs[1];
    std::vector<Rational> samples = {make_rational(1, 100000), make_rational(1, 50000),
                                     make_rational(1, 20000),  make_rational(1, 10000),
                                     make_rational(1, 5000),   make_rational(1, 2000),
                                     make_rational(1, 1000)};
    TrackReport n3 = convergence_order_fit_exact(cubic, 3, samples, 256);
    CHECK(n3.passed);
    CHECK(n3.slope == doctest::Approx(4.0).epsilon(0.1));
    TrackReport n1 = convergence_order_fit_exact(cubic, 1, samples, 256);
    CHECK(n1.passed);
    CHECK(n1.slope == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("double-precision convergence fit on a complex-direction problem") {
    // base 1 + b z^beta with complex b; gamma = 1/2 exercises the branch machinery
    Complex b(-1.0, 0.25), beta(2.0, 0.0);
    BranchPoint w = BranchPoint::from_complex(-Complex(1.0, 0.0) / b);
    BranchPoint alpha = BranchPoint::from_complex(branch_pow(w, Complex(0.5, 0.0)));
    Perturbation pert({Complex(0.5, 0.0)});
    EvaluableBase eb = EvaluableBase::twoterm(b, beta, alpha);
    BaseFunction series_base = base_from_twoterm(b, beta, alpha, 5);
    std::vector<double> samples = {1e-4, 2e-4, 5e-4, 1e-3, 2e-3, 5e-3};
    TrackReport rep = convergence_order_fit(pert, eb, series_base, 2, samples);
    CHECK(rep.passed);
    CHECK(rep.slope >= 2.5);
}

TEST_CASE("exact and numeric series evaluation agree for rational problems") {
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int> cnum(-4, 4);
    for (int trial = 0; trial < 6; ++trial) {
        std::vector<Rational> coeffs = {Rational(1), make_rational(cnum(rng), 8),
                                        make_rational(cnum(rng), 16)};
        ExactRealProblem prob{"cross", make_rational(3, 2), coeffs, {1}};
        ExactRealEngine exact = prob.engine();
        BaseFunction base = BaseFunction::exact_real(prob.alpha, coeffs);
        NumericEngine numeric(Perturbation::from_rational({Rational(1)}), base);
        std::vector<Rational> a = {make_rational(1, 64)};
        Rational ev = exact.series_eval(a, 4);
        Complex nv = numeric.series_eval({to_complex(a[0])}, 4);
        CHECK(std::abs(to_complex(ev) - nv) <= 1e-12 * std::max(1.0, std::abs(nv)));
    }
}

TEST_CASE("integrality checks") {
    CHECK(integrality_check({2}, {0}).passed);
    CHECK(integrality_check({1}, {1}).passed);
    CHECK(integrality_check({3, 1}, {2, -2}).passed);

    // negative control: a halved coefficient must be flagged with a counterexample
    SymbolicEngine eng({Rational(0)}, 2);
    SymbolicCoeff t = eng.taylor_coeff({2});
    t.poly = t.poly.scaled(make_rational(1, 2));
    nlohmann::json offender;
    CHECK_FALSE(coeff_is_integral(t, 2, &offender));
    CHECK(offender.contains("reason"));
}

TEST_CASE("transform rule: identity transform and exact cases") {
    IdentityReport id1 = transform_check_exact({Rational(1)}, Rational(2), Rational(1), 4);
    CHECK(id1.passed);
    IdentityReport e1 = transform_check_exact({Rational(1)}, Rational(2), Rational(2), 4);
    CHECK(e1.passed);
    IdentityReport e2 = transform_check_exact({make_rational(1, 2), Rational(2)}, Rational(3),
                                              make_rational(3, 2), 4);
    CHECK(e2.passed);
}

TEST_CASE("transform rule: numeric case at 1e-9") {
    Perturbation pert({Complex(1.0, 0.0)});
    IdentityReport rep =
        transform_check_numeric(pert, Complex(-1.0, 0.0), Complex(2.0, 0.0), Complex(2.0, 0.0), 4);
    CHECK(rep.passed);
}

TEST_CASE("F product identity") {
    CHECK(check_F_prod(1, 1).passed);
    CHECK(check_F_prod(3, 3).passed);  // left side is a pure product
    CHECK(check_F_prod(4, 2).passed);
    CHECK_THROWS_AS(check_F_prod(2, 3), std::invalid_argument);
}

TEST_CASE("nu identity") {
    CHECK(check_nu(3, 1).passed);
    CHECK(check_nu(4, 4).passed);
    CHECK(check_nu(4, 2).passed);
}

TEST_CASE("derivation identity incl. the empty-complement edge") {
    std::mt19937_64 rng(17);
    CHECK(check_deriv_set(0, 4, rng).passed);
    CHECK(check_deriv_set(1, 4, rng).passed);
    CHECK(check_deriv_set(3, 4, rng).passed);
}

TEST_CASE("polynomial reconstruction from m+1 values") {
    std::mt19937_64 rng(19);
    CHECK(check_newton_series(0, rng).passed);
    CHECK(check_newton_series(1, rng).passed);
    CHECK(check_newton_series(5, rng).passed);
}

TEST_CASE("vandermonde convolution") {
    std::mt19937_64 rng(23);
    CHECK(check_vandermonde(8, 4, rng).passed);
}

TEST_CASE("report JSON shape") {
    IdentityReport rep;
    rep.identity = "demo";
    rep.range = "none";
    nlohmann::json pass = rep.to_json();
    CHECK(pass["passed"] == true);
    CHECK_FALSE(pass.contains("counterexample"));
    rep.fail({{"x", 1}});
    nlohmann::json fail = rep.to_json();
    CHECK(fail["passed"] == false);
    CHECK(fail.contains("counterexample"));
}

TEST_CASE("suite driver selectors") {
    VerifyOptions small;
    small.fprod_max_M = 3;
    small.nu_max_N = 3;
    small.derivset_max_M = 2;
    small.derivset_trials = 2;
    small.newton_max_degree = 3;
    small.vandermonde_max_n = 4;
    small.vandermonde_trials = 2;
    auto reports = run_verify_suite("fprod", small);
    REQUIRE(reports.size() == 1);
    CHECK(reports[0].passed);
    CHECK(reports[0].identity == "fprod");
    CHECK_THROWS_AS(run_verify_suite("bogus", small), std::invalid_argument);
}

TEST_CASE("suite results are deterministic for a fixed seed") {
    VerifyOptions opts;
    opts.derivset_max_M = 2;
    opts.derivset_trials = 3;
    auto a = run_verify_suite("derivset", opts);
    auto b = run_verify_suite("derivset", opts);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i)
        CHECK(a[i].to_json().dump() == b[i].to_json().dump());
}
