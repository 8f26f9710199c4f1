#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rootseries/problem.hpp"

namespace py = pybind11;
using namespace rootseries;

namespace {

BranchPoint branch_from_tuple(std::tuple<double, double, long> t) {
    return BranchPoint(std::get<0>(t), std::get<1>(t), std::get<2>(t));
}

std::vector<Rational> rationals_from_strings(const std::vector<std::string>& xs) {
    std::vector<Rational> out;
    out.reserve(xs.size());
    for (const auto& s : xs) out.push_back(rational_from_string(s));
    return out;
}

std::pair<std::string, int> run_json(const std::function<CmdResult()>& fn) {
    try {
        CmdResult res = fn();
        return {res.output.dump(2), res.exit_code};
    } catch (const ValidationError& e) {
        nlohmann::json err{{"error", e.what()}};
        return {err.dump(2), 1};
    } catch (const std::invalid_argument& e) {
        nlohmann::json err{{"error", e.what()}};
        return {err.dump(2), 1};
    } catch (const NewtonError& e) {
        nlohmann::json err{{"error", e.what()}};
        return {err.dump(2), 3};
    }
}

}  // namespace

PYBIND11_MODULE(_rootseries, m) {
    m.doc() = "Taylor series of zeros of a base function plus a complex-exponent polynomial";

    // exact combinatorics primitives
    m.def(
        "falling_factorial",
        [](const std::string& x, int k) {
            return rational_to_string(falling_factorial(rational_from_string(x), k));
        },
        py::arg("x"), py::arg("k"), "(x)_k over exact rationals, x as \"num/den\"");
    m.def(
        "gen_binomial",
        [](const std::string& x, long mv) {
            return rational_to_string(gen_binomial(rational_from_string(x), mv));
        },
        py::arg("x"), py::arg("m"), "C(x, m), zero for m < 0");
    m.def(
        "compositions",
        [](int r, int weight_bound) {
            std::vector<std::vector<int>> out;
            for (const auto& c : compositions(r, weight_bound)) out.push_back(c.mu);
            return out;
        },
        py::arg("r"), py::arg("weight_bound"));
    m.def(
        "set_partitions",
        [](int N, int k) {
            std::vector<std::vector<std::vector<int>>> out;
            for (const auto& s : set_partitions(N, k)) out.push_back(s.parts);
            return out;
        },
        py::arg("N"), py::arg("k"));

    m.def(
        "branch_pow",
        [](double r, double theta, long n, Complex gamma) {
            return branch_pow(BranchPoint(r, theta, n), gamma);
        },
        py::arg("r"), py::arg("theta"), py::arg("n"), py::arg("gamma"),
        "z^gamma on the log Riemann surface, z = (r, theta, n)");

    // numeric engine
    m.def(
        "taylor_coeff",
        [](std::tuple<double, double, long> alpha, const std::vector<Complex>& coeffs,
           const std::vector<Complex>& gammas, const std::vector<int>& n) {
            NumericEngine eng(Perturbation(gammas),
                              BaseFunction::numeric(branch_from_tuple(alpha), coeffs));
            return eng.taylor_coeff(n);
        },
        py::arg("alpha"), py::arg("coeffs"), py::arg("gammas"), py::arg("n"));
    m.def(
        "taylor_coeff_oracle",
        [](std::tuple<double, double, long> alpha, const std::vector<Complex>& coeffs,
           const std::vector<Complex>& gammas, const std::vector<int>& n) {
            NumericEngine eng(Perturbation(gammas),
                              BaseFunction::numeric(branch_from_tuple(alpha), coeffs));
            return eng.taylor_coeff_oracle(n);
        },
        py::arg("alpha"), py::arg("coeffs"), py::arg("gammas"), py::arg("n"));
    m.def(
        "series_eval",
        [](std::tuple<double, double, long> alpha, const std::vector<Complex>& coeffs,
           const std::vector<Complex>& gammas, const std::vector<Complex>& a, int order) {
            NumericEngine eng(Perturbation(gammas),
                              BaseFunction::numeric(branch_from_tuple(alpha), coeffs));
            return eng.series_eval(a, order);
        },
        py::arg("alpha"), py::arg("coeffs"), py::arg("gammas"), py::arg("a"), py::arg("order"));
    m.def(
        "newton_root",
        [](std::tuple<double, double, long> alpha, const std::vector<Complex>& coeffs,
           const std::vector<Complex>& gammas, const std::vector<Complex>& a, double tol) {
            BranchPoint bp = branch_from_tuple(alpha);
            NewtonOptions opts;
            opts.tol = tol;
            NewtonResult res =
                newton_track(Perturbation(gammas), EvaluableBase::from_coeffs(bp, coeffs), bp, a,
                             opts);
            return res.root;
        },
        py::arg("alpha"), py::arg("coeffs"), py::arg("gammas"), py::arg("a"),
        py::arg("tol") = 1e-12);

    // exact symbolic coefficients (generic base; c_k formal)
    m.def(
        "taylor_coeff_exact",
        [](const std::vector<std::string>& gammas, const std::vector<int>& n, int truncation) {
            SymbolicEngine eng(rationals_from_strings(gammas),
                               std::max(1, multi_total(n)), truncation);
            SymbolicCoeff t = eng.taylor_coeff(n);
            py::dict out;
            out["alpha_exponent"] = rational_to_string(t.alpha_exponent);
            out["poly"] = t.poly.str();
            return out;
        },
        py::arg("gammas"), py::arg("n"), py::arg("truncation") = -1,
        "taylor coefficient as alpha^e * poly(alpha, c1^-1, c2, ...)");

    // batch drivers (JSON in/out, mirrors the CLI)
    m.def(
        "run_coeff",
        [](const std::string& spec_json) {
            return run_json([&] {
                return cmd_coeff(ProblemSpec::from_json(nlohmann::json::parse(spec_json)));
            });
        },
        py::arg("spec_json"));
    m.def(
        "run_eval",
        [](const std::string& spec_json, int precision) {
            return run_json([&] {
                return cmd_eval(ProblemSpec::from_json(nlohmann::json::parse(spec_json)),
                                precision);
            });
        },
        py::arg("spec_json"), py::arg("precision") = 53);
    m.def(
        "run_verify",
        [](const std::string& selector, unsigned long seed) {
            return run_json([&] {
                VerifyOptions opts;
                opts.seed = seed;
                return cmd_verify(selector, opts);
            });
        },
        py::arg("selector") = "all", py::arg("seed") = 12345UL);
}
