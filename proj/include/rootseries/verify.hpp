#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "rootseries/series.hpp"

namespace rootseries {

// ---- reports ----------------------------------------------------------------

struct IdentityReport {
    std::string identity;
    std::string range;
    bool passed = true;
    std::optional<nlohmann::json> counterexample;

    void fail(nlohmann::json ce) {
        if (passed) {
            passed = false;
            counterexample = std::move(ce);
        }
    }
    nlohmann::json to_json() const;
};

struct TrackReport {
    std::string base_label;
    int order = 0;
    std::vector<double> sample_magnitudes;
    std::vector<Complex> roots;          // per-sample Newton root
    std::vector<Complex> series_values;  // per-sample truncated-series value
    std::vector<double> errors;
    std::vector<int> iterations;
    double slope = 0.0;
    double fit_residual = 0.0;
    bool exact_floor = false;  // every sample at or below the measurement floor
    bool passed = false;       // slope >= order + 0.5 (exact_floor passes)

    nlohmann::json to_json() const;
};

// ---- numeric root tracking ----------------------------------------------------

// z^gamma for z near the branch point ref: the angle is wrapped into
// (ref.theta - pi, ref.theta + pi] and ref's sheet index carries over.
Complex pow_near(Complex z, Complex gamma, const BranchPoint& ref);

// g supplied as closed-form callbacks (value and derivative).
struct EvaluableBase {
    std::function<Complex(Complex)> g;
    std::function<Complex(Complex)> dg;

    // truncated expansion sum_{k<=K} c_k (z-alpha)^k
    static EvaluableBase from_coeffs(const BranchPoint& alpha, std::vector<Complex> coeffs);
    // g(z) = 1 + b z^beta on the branch of alpha
    static EvaluableBase twoterm(Complex b, Complex beta, const BranchPoint& alpha);
};

struct NewtonOptions {
    double tol = 1e-12;
    int max_iter = 80;
    int homotopy_steps = 32;
    double deriv_floor = 1e-13;
};

struct NewtonResult {
    Complex root;
    int iterations = 0;
    double residual = 0.0;
};

class NewtonError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Root of f(z;a) = g(z) + sum a_i z^{gamma_i} continued from alpha at a = 0.
// Direct Newton first, then linear homotopy with warm starts.
NewtonResult newton_track(const Perturbation& pert, const EvaluableBase& base,
                          const BranchPoint& alpha, const std::vector<Complex>& a,
                          const NewtonOptions& opts = {});

// ---- exact real problems (rational data, integer exponents) --------------------

struct ExactRealProblem {
    std::string label;
    Rational alpha;
    std::vector<Rational> coeffs;  // c1..cK
    std::vector<long> gammas;

    ExactRealEngine engine() const { return ExactRealEngine(gammas, alpha, coeffs); }
};

// Newton at `bits` of precision; real root near alpha. No transcendentals are
// needed because every exponent is an integer.
mpf_class newton_root_exact(const ExactRealProblem& prob, const std::vector<Rational>& a, int bits,
                            int* iterations = nullptr);

// Truncation-order fit: errors |series_N(a) - root(a)| against |a| on a log-log
// least-squares line. The exact path measures errors far below double noise.
TrackReport convergence_order_fit_exact(const ExactRealProblem& prob, int order,
                                        const std::vector<Rational>& samples, int bits = 256);

// Double-precision variant for problems without exact representation.
TrackReport convergence_order_fit(const Perturbation& pert, const EvaluableBase& base,
                                  const BaseFunction& series_base, int order,
                                  const std::vector<double>& samples,
                                  const NewtonOptions& opts = {});

// ---- identity checks ------------------------------------------------------------

// Integrality of taylor_coeff(n) / alpha^{n.gamma} for integer gammas.
IdentityReport integrality_check(const MultiIndex& n, const std::vector<long>& gammas);
// The membership test itself, exposed so negative controls can feed a
// corrupted coefficient through the same path.
bool coeff_is_integral(const SymbolicCoeff& coeff, int max_c_index,
                       nlohmann::json* offender = nullptr);

// Series transformation rule phi^{1/beta2} = phi(.; beta2 gamma, b, beta2 beta1).
IdentityReport transform_check_exact(const std::vector<Rational>& gammas, const Rational& beta1,
                                     const Rational& beta2, int order);
IdentityReport transform_check_numeric(const Perturbation& pert, Complex b, Complex beta1,
                                       Complex beta2, int order, double rel_tol = 1e-9);

// Partition-product identity for F over indeterminates x_1..x_M.
IdentityReport check_F_prod(int M, int a);
// Alternating-sum vs partition-sum falling-factorial identity in nu, x_1..x_N.
IdentityReport check_nu(int N, int k);
// Derivation identity over truncated formal power series in t.
IdentityReport check_deriv_set(int M, int trials, std::mt19937_64& rng);
// Finite-difference reconstruction of a degree-m polynomial from m+1 values.
IdentityReport check_newton_series(int degree, std::mt19937_64& rng);
// Falling-factorial Vandermonde convolution at random rational points.
IdentityReport check_vandermonde(int n_max, int trials, std::mt19937_64& rng);

// ---- suite driver -----------------------------------------------------------------

struct VerifyOptions {
    unsigned long seed = 12345;
    int fprod_max_M = 5;
    int nu_max_N = 5;
    int derivset_max_M = 4;
    int derivset_trials = 10;
    int newton_max_degree = 6;
    int vandermonde_max_n = 8;
    int vandermonde_trials = 4;
    int integrality_max_total = 6;
    int integrality_max_d = 2;
    int integrality_gamma_bound = 3;
    int transform_order = 4;
    int consistency_max_total = 6;
    int consistency_max_d = 3;
    int convergence_max_order = 4;
    int convergence_bits = 256;
};

// selector: fprod | nu | derivset | newton | vandermonde | integrality |
//           transform | theorem-main-consistency | convergence | all
std::vector<IdentityReport> run_verify_suite(const std::string& selector,
                                             const VerifyOptions& opts = {});

// Default bases for the convergence suite (two-term beta=2, truncated cubic,
// degree-5 polynomial).
std::vector<ExactRealProblem> default_convergence_problems();

Rational random_small_rational(std::mt19937_64& rng, bool nonzero = false);

}  // namespace rootseries
