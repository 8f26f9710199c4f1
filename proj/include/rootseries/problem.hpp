#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rootseries/verify.hpp"

namespace rootseries {

class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Batch problem description. JSON schema (see README):
//   base:   {"alpha": {"r":..,"theta":..,"n":..}, "coeffs": [c1, c2, ...]}
//        or {"twoterm": {"b":.., "beta":.., "alpha": {...}}}
//   gammas: [g1, ...]
//   mode:   "exact" | "numeric"
//   max_order: N
//   a_values: [[a1, ..., ad], ...]            (optional)
// Complex scalars are [re, im] pairs or bare numbers; exact mode accepts
// integers and "num/den" strings.
struct ProblemSpec {
    enum class Mode { exact, numeric };

    Mode mode = Mode::numeric;
    int max_order = 1;

    bool is_twoterm = false;
    // direct form
    BranchPoint alpha;
    std::vector<Complex> coeffs;
    std::optional<Rational> alpha_exact;
    std::optional<std::vector<Rational>> coeffs_exact;
    // twoterm form
    Complex tt_b;
    Complex tt_beta;
    std::optional<Rational> tt_beta_exact;

    std::vector<Complex> gammas;
    std::optional<std::vector<Rational>> gammas_exact;

    std::vector<std::vector<Complex>> a_values;
    // set when every a entry is exactly representable (integers, "num/den"
    // strings, or real doubles, which are dyadic rationals)
    std::optional<std::vector<std::vector<Rational>>> a_values_exact;

    static ProblemSpec from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;

    Perturbation perturbation() const;
    BaseFunction base_numeric() const;  // twoterm bases expand to max_order coefficients
    void validate() const;
};

struct CmdResult {
    nlohmann::json output;
    int exit_code = 0;
};

// Exit codes: 0 success, 1 validation, 2 verification failure, 3 numeric failure.
CmdResult cmd_coeff(const ProblemSpec& spec);
CmdResult cmd_eval(const ProblemSpec& spec, int precision_bits = 53);
// With a problem spec, the integrality selector checks that problem's gamma
// tuple (which must be all-integer) instead of the built-in sweep.
CmdResult cmd_verify(const std::string& selector, const VerifyOptions& opts,
                     const std::optional<ProblemSpec>& spec = std::nullopt);

nlohmann::json complex_to_json(const Complex& z);

}  // namespace rootseries
