#include "rootseries/problem.hpp"

#include <algorithm>

namespace rootseries {

using nlohmann::json;

namespace {

Complex complex_from_json(const json& j, const char* what) {
    if (j.is_number()) return Complex(j.get<double>(), 0.0);
    if (j.is_string()) return to_complex(rational_from_string(j.get<std::string>()));
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return Complex(j[0].get<double>(), j[1].get<double>());
    throw ValidationError(std::string(what) + ": expected number, \"num/den\", or [re, im]");
}

// Exact reading: integers and "num/den" strings only. Returns nullopt for
// anything else (including [re, im] with im != 0).
std::optional<Rational> rational_from_json(const json& j) {
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (j.is_string()) return rational_from_string(j.get<std::string>());
    if (j.is_array() && j.size() == 2 && j[1].is_number() && j[1].get<double>() == 0.0)
        return rational_from_json(j[0]);
    return std::nullopt;
}

BranchPoint branch_from_json(const json& j) {
    if (!j.is_object() || !j.contains("r") || !j.contains("theta"))
        throw ValidationError("alpha: expected {\"r\":..., \"theta\":..., \"n\":...}");
    double r = j.at("r").get<double>();
    double theta = j.at("theta").get<double>();
    long n = j.contains("n") ? j.at("n").get<long>() : 0;
    try {
        return BranchPoint(r, theta, n);
    } catch (const std::invalid_argument& e) {
        throw ValidationError(std::string("alpha: ") + e.what());
    }
}

json branch_to_json(const BranchPoint& b) {
    return json{{"r", b.r}, {"theta", b.theta}, {"n", b.n}};
}

}  // namespace

json complex_to_json(const Complex& z) {
    double re = z.real() == 0.0 ? 0.0 : z.real();  // strip negative zero
    double im = z.imag() == 0.0 ? 0.0 : z.imag();
    return json::array({re, im});
}

ProblemSpec ProblemSpec::from_json(const json& j) {
    if (!j.is_object()) throw ValidationError("problem spec must be a JSON object");
    ProblemSpec spec;

    std::string mode = j.value("mode", "numeric");
    if (mode == "exact")
        spec.mode = Mode::exact;
    else if (mode == "numeric")
        spec.mode = Mode::numeric;
    else
        throw ValidationError("mode must be \"exact\" or \"numeric\"");

    if (!j.contains("max_order") || !j.at("max_order").is_number_integer())
        throw ValidationError("max_order: integer >= 1 required");
    spec.max_order = j.at("max_order").get<int>();

    if (!j.contains("gammas") || !j.at("gammas").is_array() || j.at("gammas").empty())
        throw ValidationError("gammas: non-empty array required");
    bool gammas_exact_ok = true;
    std::vector<Rational> gex;
    for (const auto& g : j.at("gammas")) {
        spec.gammas.push_back(complex_from_json(g, "gammas"));
        if (auto q = rational_from_json(g))
            gex.push_back(*q);
        else
            gammas_exact_ok = false;
    }
    if (gammas_exact_ok) spec.gammas_exact = std::move(gex);

    if (!j.contains("base") || !j.at("base").is_object())
        throw ValidationError("base: object required");
    const json& base = j.at("base");
    if (base.contains("twoterm")) {
        const json& tt = base.at("twoterm");
        if (!tt.is_object() || !tt.contains("b") || !tt.contains("beta") || !tt.contains("alpha"))
            throw ValidationError("twoterm: needs b, beta, alpha");
        spec.is_twoterm = true;
        spec.tt_b = complex_from_json(tt.at("b"), "twoterm.b");
        spec.tt_beta = complex_from_json(tt.at("beta"), "twoterm.beta");
        spec.tt_beta_exact = rational_from_json(tt.at("beta"));
        spec.alpha = branch_from_json(tt.at("alpha"));
    } else {
        if (!base.contains("alpha") || !base.contains("coeffs"))
            throw ValidationError("base: needs alpha and coeffs (or twoterm)");
        spec.alpha = branch_from_json(base.at("alpha"));
        if (!base.at("coeffs").is_array() || base.at("coeffs").empty())
            throw ValidationError("coeffs: non-empty array required");
        bool coeffs_exact_ok = true;
        std::vector<Rational> cex;
        for (const auto& c : base.at("coeffs")) {
            spec.coeffs.push_back(complex_from_json(c, "coeffs"));
            if (auto q = rational_from_json(c))
                cex.push_back(*q);
            else
                coeffs_exact_ok = false;
        }
        if (coeffs_exact_ok) spec.coeffs_exact = std::move(cex);
        // rational alpha on the real axis: theta 0 (positive) or pi (negative)
        if (base.at("alpha").contains("exact")) {
            spec.alpha_exact = rational_from_json(base.at("alpha").at("exact"));
            if (!spec.alpha_exact) throw ValidationError("alpha.exact: integer or \"num/den\"");
        }
    }

    if (j.contains("a_values")) {
        if (!j.at("a_values").is_array()) throw ValidationError("a_values: array of tuples");
        bool a_exact_ok = true;
        std::vector<std::vector<Rational>> aex;
        auto read_entry = [&](const json& v, std::vector<Complex>& a,
                              std::vector<Rational>& ax) {
            a.push_back(complex_from_json(v, "a_values"));
            if (auto q = rational_from_json(v))
                ax.push_back(*q);
            else if (v.is_number())
                ax.push_back(rational_from_double(v.get<double>()));
            else if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number() &&
                     v[1].get<double>() == 0.0)
                ax.push_back(rational_from_double(v[0].get<double>()));
            else
                a_exact_ok = false;
        };
        for (const auto& row : j.at("a_values")) {
            std::vector<Complex> a;
            std::vector<Rational> ax;
            if (row.is_array() && row.size() == spec.gammas.size()) {
                // one entry per gamma
                for (const auto& v : row) read_entry(v, a, ax);
            } else {
                // single-entry row shorthand, d = 1 only
                if (spec.gammas.size() != 1)
                    throw ValidationError("each a tuple must have one entry per gamma");
                read_entry(row, a, ax);
            }
            spec.a_values.push_back(std::move(a));
            aex.push_back(std::move(ax));
        }
        if (a_exact_ok) spec.a_values_exact = std::move(aex);
    }
    spec.validate();
    return spec;
}

json ProblemSpec::to_json() const {
    json j;
    j["mode"] = mode == Mode::exact ? "exact" : "numeric";
    j["max_order"] = max_order;
    json gs = json::array();
    for (size_t i = 0; i < gammas.size(); ++i) {
        if (gammas_exact)
            gs.push_back(rational_to_string((*gammas_exact)[i]));
        else
            gs.push_back(complex_to_json(gammas[i]));
    }
    j["gammas"] = gs;
    json base;
    if (is_twoterm) {
        json tt;
        tt["b"] = complex_to_json(tt_b);
        if (tt_beta_exact)
            tt["beta"] = rational_to_string(*tt_beta_exact);
        else
            tt["beta"] = complex_to_json(tt_beta);
        tt["alpha"] = branch_to_json(alpha);
        base["twoterm"] = tt;
    } else {
        json al = branch_to_json(alpha);
        if (alpha_exact) al["exact"] = rational_to_string(*alpha_exact);
        base["alpha"] = al;
        json cs = json::array();
        for (size_t i = 0; i < coeffs.size(); ++i) {
            if (coeffs_exact)
                cs.push_back(rational_to_string((*coeffs_exact)[i]));
            else
                cs.push_back(complex_to_json(coeffs[i]));
        }
        base["coeffs"] = cs;
    }
    j["base"] = base;
    if (!a_values.empty()) {
        json rows = json::array();
        for (const auto& row : a_values) {
            json r = json::array();
            for (const auto& v : row) r.push_back(complex_to_json(v));
            rows.push_back(r);
        }
        j["a_values"] = rows;
    }
    return j;
}

void ProblemSpec::validate() const {
    if (max_order < 1) throw ValidationError("max_order must be >= 1");
    if (gammas.empty()) throw ValidationError("gammas must be non-empty");
    if (is_twoterm) {
        if (tt_b == Complex(0.0, 0.0)) throw ValidationError("twoterm.b must be non-zero");
        if (tt_beta == Complex(0.0, 0.0)) throw ValidationError("twoterm.beta must be non-zero");
    } else {
        if (coeffs.empty()) throw ValidationError("coeffs must be non-empty");
        if (coeffs.front() == Complex(0.0, 0.0)) throw ValidationError("c1 must be non-zero");
        if (alpha_exact) {
            if (*alpha_exact == 0) throw ValidationError("alpha must be non-zero");
            // the "exact" field must describe the same point as (r, theta)
            Complex claimed = to_complex(*alpha_exact);
            if (std::abs(claimed - alpha.value()) > 1e-9 * std::abs(claimed))
                throw ValidationError("alpha.exact disagrees with alpha's (r, theta)");
        }
    }
    for (const auto& row : a_values)
        if (row.size() != gammas.size())
            throw ValidationError("each a tuple must have one entry per gamma");
}

Perturbation ProblemSpec::perturbation() const {
    Perturbation p(gammas);
    p.gammas_exact = gammas_exact;
    return p;
}

BaseFunction ProblemSpec::base_numeric() const {
    if (is_twoterm) return base_from_twoterm(tt_b, tt_beta, alpha, std::max(1, max_order));
    BaseFunction b = BaseFunction::numeric(alpha, coeffs);
    b.alpha_exact = alpha_exact;
    b.coeffs_exact = coeffs_exact;
    return b;
}

// ---- coeff -----------------------------------------------------------------------

CmdResult cmd_coeff(const ProblemSpec& spec) {
    spec.validate();
    json out;
    out["command"] = "coeff";
    out["order"] = spec.max_order;
    out["d"] = spec.gammas.size();
    json rows = json::array();

    if (spec.mode == ProblemSpec::Mode::numeric) {
        out["mode"] = "numeric";
        NumericEngine eng(spec.perturbation(), spec.base_numeric());
        for (const auto& n : multi_indices_up_to(static_cast<int>(spec.gammas.size()),
                                                 spec.max_order)) {
            json row;
            row["n"] = n;
            row["value"] = complex_to_json(eng.taylor_coeff(n));
            rows.push_back(std::move(row));
        }
    } else {
        out["mode"] = "exact";
        if (!spec.gammas_exact)
            throw ValidationError("exact mode needs rational gammas (integers or \"num/den\")");
        const int d = static_cast<int>(spec.gammas.size());
        std::optional<SymbolicEngine> eng;
        if (spec.is_twoterm) {
            if (!spec.tt_beta_exact)
                throw ValidationError("exact mode needs rational twoterm beta");
            eng.emplace(SymbolicEngine::twoterm(*spec.gammas_exact, *spec.tt_beta_exact));
        } else {
            eng.emplace(*spec.gammas_exact, spec.max_order,
                        static_cast<int>(spec.coeffs.size()));
        }
        // bind to exact rationals when the base data allow it
        bool bind = !spec.is_twoterm && spec.alpha_exact && spec.coeffs_exact;
        std::map<std::string, Rational> bindings;
        if (bind) {
            bindings["alpha"] = *spec.alpha_exact;
            for (int k = 1; k <= spec.max_order; ++k) {
                Rational ck = k <= static_cast<int>(spec.coeffs_exact->size())
                                  ? (*spec.coeffs_exact)[static_cast<size_t>(k - 1)]
                                  : Rational(0);
                bindings["c" + std::to_string(k)] = ck;
            }
        }
        for (const auto& n : multi_indices_up_to(d, spec.max_order)) {
            SymbolicCoeff t = eng->taylor_coeff(n);
            json row;
            row["n"] = n;
            row["alpha_exponent"] = rational_to_string(t.alpha_exponent);
            row["poly"] = t.poly.str();
            if (bind && is_integer(t.alpha_exponent)) {
                Rational v = rational_pow(*spec.alpha_exact,
                                          t.alpha_exponent.get_num().get_si()) *
                             t.poly.eval_rational(bindings);
                row["value"] = rational_to_string(v);
            }
            rows.push_back(std::move(row));
        }
    }
    out["coefficients"] = std::move(rows);
    return CmdResult{std::move(out), 0};
}

// ---- eval ----------------------------------------------------------------------------

namespace {

CmdResult cmd_eval_exact(const ProblemSpec& spec, int bits) {
    if (spec.is_twoterm || !spec.alpha_exact || !spec.coeffs_exact || !spec.gammas_exact)
        throw ValidationError(
            "precision > 53 needs a direct base with exact alpha/coeffs and integer gammas");
    std::vector<long> gam;
    for (const Rational& g : *spec.gammas_exact) {
        if (!is_integer(g))
            throw ValidationError("precision > 53 needs integer gammas");
        gam.push_back(g.get_num().get_si());
    }
    ExactRealProblem prob{"eval", *spec.alpha_exact, *spec.coeffs_exact, gam};
    ExactRealEngine eng = prob.engine();

    json out;
    out["command"] = "eval";
    out["mode"] = "numeric";
    out["order"] = spec.max_order;
    out["precision_bits"] = bits;
    if (!spec.a_values_exact)
        throw ValidationError("precision > 53 wants real a values (numbers or \"num/den\")");
    json rows = json::array();
    int failures = 0;
    for (size_t ri = 0; ri < spec.a_values.size(); ++ri) {
        const auto& a = spec.a_values[ri];
        json row;
        json aj = json::array();
        for (const auto& v : a) aj.push_back(complex_to_json(v));
        row["a"] = aj;
        const std::vector<Rational>& ar = (*spec.a_values_exact)[ri];
        try {
            int iters = 0;
            mpf_class root = newton_root_exact(prob, ar, bits, &iters);
            Rational sval = eng.series_eval(ar, spec.max_order);
            mpf_class s(0, static_cast<unsigned>(bits));
            mpf_set_q(s.get_mpf_t(), sval.get_mpq_t());
            mpf_class diff = abs(s - root);
            row["series"] = complex_to_json(Complex(mpf_get_d(s.get_mpf_t()), 0.0));
            row["newton"] = complex_to_json(Complex(mpf_get_d(root.get_mpf_t()), 0.0));
            row["abs_diff"] = mpf_get_d(diff.get_mpf_t());
            row["iterations"] = iters;
            row["status"] = "ok";
        } catch (const NewtonError& e) {
            row["status"] = "no-converge";
            row["message"] = e.what();
            ++failures;
        }
        rows.push_back(std::move(row));
    }
    out["rows"] = std::move(rows);
    return CmdResult{std::move(out), failures ? 3 : 0};
}

}  // namespace

CmdResult cmd_eval(const ProblemSpec& spec, int precision_bits) {
    spec.validate();
    if (spec.mode != ProblemSpec::Mode::numeric)
        throw ValidationError("eval wants numeric mode");
    if (spec.a_values.empty()) throw ValidationError("eval wants a_values");
    if (precision_bits > 53) return cmd_eval_exact(spec, precision_bits);

    Perturbation pert = spec.perturbation();
    BaseFunction base = spec.base_numeric();
    NumericEngine eng(pert, base);
    EvaluableBase eb = spec.is_twoterm
                           ? EvaluableBase::twoterm(spec.tt_b, spec.tt_beta, spec.alpha)
                           : EvaluableBase::from_coeffs(spec.alpha, spec.coeffs);

    json out;
    out["command"] = "eval";
    out["mode"] = "numeric";
    out["order"] = spec.max_order;
    json rows = json::array();
    int failures = 0;
    for (const auto& a : spec.a_values) {
        json row;
        json aj = json::array();
        for (const auto& v : a) aj.push_back(complex_to_json(v));
        row["a"] = aj;
        Complex sv = eng.series_eval(a, spec.max_order);
        row["series"] = complex_to_json(sv);
        try {
            NewtonResult nr = newton_track(pert, eb, spec.alpha, a);
            row["newton"] = complex_to_json(nr.root);
            row["abs_diff"] = std::abs(sv - nr.root);
            row["iterations"] = nr.iterations;
            row["status"] = "ok";
        } catch (const NewtonError& e) {
            row["status"] = "no-converge";
            row["message"] = e.what();
            ++failures;
        }
        rows.push_back(std::move(row));
    }
    out["rows"] = std::move(rows);
    return CmdResult{std::move(out), failures ? 3 : 0};
}

// ---- verify -----------------------------------------------------------------------------

CmdResult cmd_verify(const std::string& selector, const VerifyOptions& opts,
                     const std::optional<ProblemSpec>& spec) {
    std::vector<IdentityReport> reports;
    if (spec) {
        if (selector != "integrality")
            throw ValidationError("--spec only applies to the integrality selector");
        if (!spec->gammas_exact)
            throw ValidationError("integrality wants integer gammas");
        std::vector<long> gam;
        for (const Rational& g : *spec->gammas_exact) {
            if (!is_integer(g)) throw ValidationError("integrality wants integer gammas");
            gam.push_back(g.get_num().get_si());
        }
        for (const auto& n :
             multi_indices_up_to(static_cast<int>(gam.size()), spec->max_order))
            reports.push_back(integrality_check(n, gam));
    } else {
        reports = run_verify_suite(selector, opts);
    }
    json out;
    out["command"] = "verify";
    out["selector"] = selector;
    out["seed"] = opts.seed;
    bool passed = true;
    json rs = json::array();
    for (const auto& r : reports) {
        passed = passed && r.passed;
        rs.push_back(r.to_json());
    }
    out["reports"] = std::move(rs);
    out["passed"] = passed;
    return CmdResult{std::move(out), passed ? 0 : 2};
}

}  // namespace rootseries
