// rootseries: Taylor coefficients of perturbed roots, batch front door.
// Subcommands: coeff, eval, verify. JSON in, JSON out.

#include <algorithm>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "rootseries/problem.hpp"

namespace {

using rootseries::CmdResult;
using rootseries::ProblemSpec;
using rootseries::ValidationError;

nlohmann::json load_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open spec file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("spec is not valid JSON: ") + e.what());
    }
    return j;
}

int emit(const CmdResult& res, const std::string& out_path) {
    std::string text = res.output.dump(2);
    text.push_back('\n');
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path);
        if (!out) {
            std::cerr << "cannot write output file: " << out_path << "\n";
            return 1;
        }
        out << text;
    }
    return res.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Taylor series of zeros of a base function plus a complex-exponent polynomial"};
    app.require_subcommand(1);

    std::string spec_path, out_path;
    int order_override = -1;
    std::string mode_override;
    int precision = 53;
    unsigned long seed = 12345;

    auto add_common = [&](CLI::App* cmd, bool needs_spec) {
        if (needs_spec)
            cmd->add_option("--spec", spec_path, "problem spec JSON file")->required();
        cmd->add_option("--order", order_override, "override max_order");
        cmd->add_option("--mode", mode_override, "override mode (exact|numeric)");
        cmd->add_option("--precision", precision, "working precision in bits (default 53)");
        cmd->add_option("--seed", seed, "seed for randomized checks");
        cmd->add_option("--out", out_path, "write output JSON here instead of stdout");
    };

    CLI::App* coeff = app.add_subcommand("coeff", "emit Taylor coefficients up to max_order");
    add_common(coeff, true);

    CLI::App* eval = app.add_subcommand("eval", "series vs Newton-tracked root at given a values");
    add_common(eval, true);

    CLI::App* verify = app.add_subcommand("verify", "run identity/verification suites");
    std::string selector = "all";
    verify->add_option("suite", selector,
                       "fprod | nu | derivset | newton | vandermonde | integrality | "
                       "transform | theorem-main-consistency | convergence | all");
    int fprod_M = 5, nu_N = 5, derivset_M = 4, transform_order = 4;
    verify->add_option("--M", fprod_M, "bound for fprod/derivset sweeps");
    verify->add_option("--N", nu_N, "bound for the nu identity sweep");
    verify->add_option("--transform-order", transform_order, "order for the transform check");
    std::string verify_spec_path;
    verify->add_option("--spec", verify_spec_path,
                       "problem spec (integrality: check this problem's gamma tuple)");
    add_common(verify, false);

    CLI11_PARSE(app, argc, argv);

    try {
        auto apply_overrides = [&](ProblemSpec& spec) {
            if (order_override != -1) {
                if (order_override < 1) throw ValidationError("--order must be >= 1");
                spec.max_order = order_override;
            }
            if (!mode_override.empty()) {
                if (mode_override == "exact")
                    spec.mode = ProblemSpec::Mode::exact;
                else if (mode_override == "numeric")
                    spec.mode = ProblemSpec::Mode::numeric;
                else
                    throw ValidationError("mode must be \"exact\" or \"numeric\"");
            }
        };

        if (coeff->parsed()) {
            ProblemSpec spec = ProblemSpec::from_json(load_spec(spec_path));
            apply_overrides(spec);
            return emit(rootseries::cmd_coeff(spec), out_path);
        }
        if (eval->parsed()) {
            ProblemSpec spec = ProblemSpec::from_json(load_spec(spec_path));
            apply_overrides(spec);
            return emit(rootseries::cmd_eval(spec, precision), out_path);
        }
        if (verify->parsed()) {
            rootseries::VerifyOptions opts;
            opts.seed = seed;
            opts.fprod_max_M = fprod_M;
            opts.nu_max_N = nu_N;
            opts.derivset_max_M = derivset_M;
            opts.transform_order = transform_order;
            if (verify->count("--precision"))
                opts.convergence_bits = std::max(64, precision);
            std::optional<ProblemSpec> spec;
            if (!verify_spec_path.empty())
                spec = ProblemSpec::from_json(load_spec(verify_spec_path));
            return emit(rootseries::cmd_verify(selector, opts, spec), out_path);
        }
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 1;
    } catch (const rootseries::NewtonError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
