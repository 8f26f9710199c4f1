"""Smoke tests for the _rootseries extension module."""

import json
import sys

import _rootseries as rs


def check(cond, msg):
    if not cond:
        print("FAIL:", msg)
        sys.exit(1)


def main():
    # exact combinatorics
    check(rs.falling_factorial("5", 3) == "60", "falling factorial 5_3")
    check(rs.falling_factorial("1/2", 2) == "-1/4", "falling factorial (1/2)_2")
    check(rs.gen_binomial("1/2", 2) == "-1/8", "gen binomial (1/2, 2)")
    check(rs.gen_binomial("7", -2) == "0", "gen binomial negative index")
    check(len(rs.compositions(2, 2)) == 4, "compositions(2,2)")
    check(len(rs.set_partitions(4, 2)) == 7, "set partitions S(4,2)")

    # branch-aware exponentiation: (1, 0, 1)^(1/2) = -1
    z = rs.branch_pow(1.0, 0.0, 1, 0.5)
    check(abs(z - (-1.0)) < 1e-12, "branch_pow sheet 1")

    # linear base z - 2, gamma = 0: first coefficient -1, root 2 - a
    alpha = (2.0, 0.0, 0)
    t1 = rs.taylor_coeff(alpha, [1.0], [0.0], [1])
    check(abs(t1 - (-1.0)) < 1e-12, "taylor coefficient of the linear base")
    t1o = rs.taylor_coeff_oracle(alpha, [1.0], [0.0], [1])
    check(abs(t1 - t1o) < 1e-12, "oracle agreement")
    val = rs.series_eval(alpha, [1.0], [0.0], [0.1], 4)
    check(abs(val - 1.9) < 1e-12, "series_eval of the linear base")
    root = rs.newton_root(alpha, [1.0], [0.0], [0.1])
    check(abs(root - 1.9) < 1e-12, "newton root of the linear base")

    # exact symbolic coefficient: gamma = 0, n = (2) -> -c2/c1^3
    t = rs.taylor_coeff_exact(["0"], [2])
    check(t["poly"] == "-1*c1^-3*c2", "exact coefficient poly")
    check(t["alpha_exponent"] == "0", "exact coefficient prefix")

    # batch drivers mirror the CLI
    spec = {
        "mode": "numeric",
        "max_order": 3,
        "gammas": [0],
        "base": {"alpha": {"r": 2.0, "theta": 0.0, "n": 0}, "coeffs": [1]},
        "a_values": [[0.0], [0.1]],
    }
    out, code = rs.run_coeff(json.dumps(spec))
    check(code == 0, "run_coeff exit code")
    rows = json.loads(out)["coefficients"]
    check(rows[0]["value"][0] == -1.0, "run_coeff first coefficient")

    out, code = rs.run_eval(json.dumps(spec))
    check(code == 0, "run_eval exit code")
    check(json.loads(out)["rows"][1]["status"] == "ok", "run_eval row status")

    out, code = rs.run_verify("vandermonde", 7)
    check(code == 0, "run_verify exit code")
    check(json.loads(out)["passed"] is True, "run_verify passed")

    bad = dict(spec)
    bad["max_order"] = 0
    out, code = rs.run_coeff(json.dumps(bad))
    check(code == 1, "validation error surfaces as exit code 1")

    out, code = rs.run_verify("bogus")
    check(code == 1, "unknown selector surfaces as exit code 1")

    # high-precision eval path over exact rational data
    exact_spec = {
        "mode": "numeric",
        "max_order": 4,
        "gammas": [1],
        "base": {
            "alpha": {"r": 1.0, "theta": 0.0, "n": 0, "exact": "1"},
            "coeffs": ["-2", "-1"],
        },
        "a_values": [["1/64"]],
    }
    out, code = rs.run_eval(json.dumps(exact_spec), precision=192)
    check(code == 0, "high-precision eval exit code")
    row = json.loads(out)["rows"][0]
    check(row["status"] == "ok", "high-precision eval row status")
    check(row["abs_diff"] < 1e-9, "high-precision eval agreement")

    print("python smoke tests passed")


if __name__ == "__main__":
    main()
