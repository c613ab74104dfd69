#!/usr/bin/env python3
"""External solver bridge: highs_solve.py <model.lp> <solution.txt>.

Reads an LP-format model with HiGHS and writes the solution file format
expected by swc-lp (status, objective, one `name value` line per column).
"""
import sys

import highspy


def main() -> int:
    if len(sys.argv) != 3:
        print("usage: highs_solve.py <model.lp> <solution.txt>", file=sys.stderr)
        return 2
    lp_path, sol_path = sys.argv[1], sys.argv[2]
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    if h.readModel(lp_path) != highspy.HighsStatus.kOk:
        print(f"cannot read {lp_path}", file=sys.stderr)
        return 1
    h.run()
    ms = h.getModelStatus()
    status = {
        highspy.HighsModelStatus.kOptimal: "optimal",
        highspy.HighsModelStatus.kInfeasible: "infeasible",
        highspy.HighsModelStatus.kUnbounded: "unbounded",
        highspy.HighsModelStatus.kIterationLimit: "iteration_limit",
    }.get(ms)
    if status is None and ms == highspy.HighsModelStatus.kUnboundedOrInfeasible:
        # resolve the ambiguity by checking feasibility with a zero objective
        lp = h.getLp()
        h.changeColsCost(lp.num_col_, list(range(lp.num_col_)), [0.0] * lp.num_col_)
        h.run()
        status = "unbounded" if h.getModelStatus() == highspy.HighsModelStatus.kOptimal else "infeasible"
    if status is None:
        print(f"unexpected HiGHS status {h.modelStatusToString(ms)}", file=sys.stderr)
        return 1
    with open(sol_path, "w") as out:
        out.write(f"status {status}\n")
        if status == "optimal":
            out.write(f"objective {h.getInfo().objective_function_value!r}\n")
            names = h.getLp().col_names_
            for name, value in zip(names, h.getSolution().col_value):
                out.write(f"{name} {value!r}\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
