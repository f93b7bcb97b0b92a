"""Command-line entry points: solve, check, probe, oracle.

Exit codes: 0 success/accepted, 1 rejected certificate, 2 parse or
validation error, 3 non-convergence, 4 enumeration guard exceeded.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from . import fileio, regularity
from ._kernels import backend
from .errors import (
    DimensionMismatchError,
    EnumerationGuardError,
    Phase1AmbiguousError,
    ProblemFormatError,
    ValidationError,
)
from .kkt import CONDITION_NAMES, verify_certificate
from .oracle import oracle_solve
from .problem import objective_value
from .solver import SolverOptions, solve_saddle

EXIT_OK = 0
EXIT_REJECTED = 1
EXIT_PARSE = 2
EXIT_NO_CONVERGENCE = 3
EXIT_GUARD = 4


def _default_seed() -> int:
    try:
        return int(os.environ.get("CONE_KKT_SEED", "0"))
    except ValueError:
        return 0


def _load(path: str):
    return fileio.load_problem(path)


def _print_residual_table(residuals: dict, tol: float, stream=None):
    stream = stream if stream is not None else sys.stdout
    width = max(len(n) for n in CONDITION_NAMES)
    for name in CONDITION_NAMES:
        val = residuals[name]
        mark = "ok" if val <= tol else "VIOLATED"
        print(f"  {name:<{width}}  {val: .12e}  {mark}", file=stream)


def _cmd_solve(args) -> int:
    try:
        prob = _load(args.problem)
    except (ProblemFormatError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE

    opts = SolverOptions(
        step_scale=args.step_scale,
        max_iters=args.max_iters,
        residual_tol=args.tol,
        seed=args.seed,
    )
    cert, trace = solve_saddle(prob, opts)
    if not trace.converged:
        print(
            f"error: no convergence after {trace.iters} iterations "
            f"(max residual {trace.final_residuals.max_residual():.3e}); "
            f"converged=false", file=sys.stderr)
        return EXIT_NO_CONVERGENCE

    verify_tol = 10.0 * opts.residual_tol
    verdict = verify_certificate(prob, cert, tol=verify_tol)
    out = args.out or _default_cert_path(args.problem)
    fileio.save_certificate(fileio.certificate_doc(prob, cert, verdict), out)

    value = objective_value(prob.objective, cert.x0)
    print(f"problem    {prob.name or args.problem}")
    print(f"backend    {backend()}")
    print(f"iterations {trace.iters}")
    print(f"objective  {value:.12g}")
    print(f"verdict    {'accepted' if verdict.accepted else 'rejected'} (tolerance {verify_tol:.1e})")
    _print_residual_table(verdict.residuals.as_dict(), verify_tol)
    print(f"certificate written to {out}")
    return EXIT_OK if verdict.accepted else EXIT_REJECTED


def _default_cert_path(problem_path: str) -> str:
    root, ext = os.path.splitext(problem_path)
    return root + ".cert.json"


def _cmd_check(args) -> int:
    try:
        prob = _load(args.problem)
        doc = fileio.load_certificate(args.certificate)
        verdict = verify_certificate(prob, doc.to_certificate(), tol=args.tol)
    except (ProblemFormatError, ValidationError, DimensionMismatchError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    print(f"problem    {prob.name or args.problem}")
    print(f"verdict    {'accepted' if verdict.accepted else 'rejected'} (tolerance {args.tol:.1e})")
    _print_residual_table(verdict.residuals.as_dict(), args.tol)
    if verdict.failures:
        names = ", ".join(name for name, _ in verdict.failures)
        print(f"violated   {names}")
    return EXIT_OK if verdict.accepted else EXIT_REJECTED


def _cmd_probe(args) -> int:
    try:
        prob = _load(args.problem)
    except (ProblemFormatError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE

    opts = SolverOptions(
        step_scale=args.step_scale,
        max_iters=args.max_iters,
        residual_tol=args.tol,
        seed=args.seed,
    )
    try:
        report = regularity.check_equivalence(prob, seed=args.seed,
                                              n_random_dirs=args.dirs, opts=opts)
    except Phase1AmbiguousError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE

    eps, slater = report.epsilon, report.slater
    print(f"problem          {prob.name or args.problem}")
    print(f"strong simultaneity: {eps.describe()}")
    for w in eps.warnings:
        print(f"  warning: {w}")
    if slater.holds:
        print(f"slater           holds, margin {slater.margin:.6g}, witness {list(slater.witness)}")
    else:
        print(f"slater           fails: {slater.reason}")
    if report.applicable:
        print(f"equivalence      applicable; slater={report.slater_holds}, "
              f"eps_positive={report.eps_positive}, consistent={report.consistent}")
    else:
        print("equivalence      not applicable (ordering cone has empty interior)")

    if args.out:
        fileio._atomic_write_json(_probe_doc(prob, report), args.out)
        print(f"report written to {args.out}")
    if any(not pr.ok for pr in eps.per_direction):
        print("error: at least one direction could not be classified", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    return EXIT_OK


def _json_number(x):
    if x is None or math.isfinite(x):
        return x
    return repr(float(x))  # 'inf' / 'nan': strict JSON has no literal for these


def _probe_doc(prob, report) -> dict:
    eps, slater = report.epsilon, report.slater
    return {
        "schema_version": fileio.SCHEMA_VERSION,
        "problem_name": prob.name,
        "eps": {
            "eps_hat": eps.eps_hat,
            "directions_probed": eps.directions_probed,
            "norm_p": _json_number(eps.norm_p),
            "bisect_tol": eps.bisect_tol,
            "lambda_max": eps.lambda_max,
            "warnings": list(eps.warnings),
            "per_direction": [
                {"direction": list(pr.direction), "lambda": _json_number(pr.lam), "ok": pr.ok}
                for pr in eps.per_direction
            ],
        },
        "slater": {
            "holds": slater.holds,
            "margin": _json_number(slater.margin),
            "witness": None if slater.witness is None else list(slater.witness),
            "reason": slater.reason,
        },
        "equivalence": {
            "applicable": report.applicable,
            "slater_holds": report.slater_holds,
            "eps_positive": report.eps_positive,
            "consistent": report.consistent,
        },
    }


def _cmd_oracle(args) -> int:
    try:
        prob = _load(args.problem)
    except (ProblemFormatError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        sol = oracle_solve(prob)
    except EnumerationGuardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD

    cert, trace = solve_saddle(prob)
    value_solver = objective_value(prob.objective, cert.x0)
    print(f"problem             {prob.name or args.problem}")
    print(f"oracle value        {sol.value:.12g}")
    print(f"solver value        {value_solver:.12g}  (converged={trace.converged})")
    print(f"value gap           {abs(sol.value - value_solver):.3e}")
    print(f"oracle multiplier   |z| = {np.linalg.norm(sol.z_recovered):.6g}  "
          f"unique={sol.unique_multiplier}")
    print(f"solver multiplier   |z| = {np.linalg.norm(cert.z0):.6g}")
    print(f"active set          {list(sol.active_set)}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cone-kkt",
        description="Solve, certify, and probe cone-constrained convex programs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    seed = _default_seed()

    p_solve = sub.add_parser("solve", help="solve a problem and write a certificate")
    p_solve.add_argument("problem")
    p_solve.add_argument("--out", help="certificate path (default: next to the input)")
    p_solve.add_argument("--tol", type=float, default=1e-8,
                         help="solver residual tolerance (default 1e-8)")
    p_solve.add_argument("--max-iters", type=int, default=200_000)
    p_solve.add_argument("--step-scale", type=float, default=0.9)
    p_solve.add_argument("--seed", type=int, default=seed)
    p_solve.set_defaults(func=_cmd_solve)

    p_check = sub.add_parser("check", help="verify a certificate against a problem")
    p_check.add_argument("problem")
    p_check.add_argument("certificate")
    p_check.add_argument("--tol", type=float, default=1e-6)
    p_check.set_defaults(func=_cmd_check)

    p_probe = sub.add_parser("probe", help="regularity probes: eps0 estimate and Slater test")
    p_probe.add_argument("problem")
    p_probe.add_argument("--dirs", type=int, default=regularity.DEFAULT_RANDOM_DIRECTIONS,
                         help="number of random directions beyond the signed basis")
    p_probe.add_argument("--seed", type=int, default=seed)
    p_probe.add_argument("--out", help="optional JSON report path")
    p_probe.add_argument("--tol", type=float,
                         default=regularity.PROBE_OPTIONS.residual_tol)
    p_probe.add_argument("--max-iters", type=int,
                         default=regularity.PROBE_OPTIONS.max_iters,
                         help="phase-1 iteration budget per feasibility solve")
    p_probe.add_argument("--step-scale", type=float,
                         default=regularity.PROBE_OPTIONS.step_scale)
    p_probe.set_defaults(func=_cmd_probe)

    p_oracle = sub.add_parser("oracle", help="exact enumeration solution and solver comparison")
    p_oracle.add_argument("problem")
    p_oracle.set_defaults(func=_cmd_oracle)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
