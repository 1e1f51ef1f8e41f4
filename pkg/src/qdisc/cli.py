"""Command-line front end.

Commands: solve, oracle, verify, simulate, family, export-bloch.
Exit codes: 0 success/optimal, 1 parse or validation error, 2 unsupported
regime, 3 non-optimal verdict, 4 numeric failure.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .certify import check_global, load_povm_file
from .dual import recover_povm_from_dual, solve_dual
from .ensembles import Ensemble, load_ensemble_file
from .errors import (
    NumericFailureError,
    SolverExhaustedError,
    UnsupportedRegimeError,
    ValidationError,
)
from .montecarlo import simulate
from .operators import TOL_CERT, TOL_ORACLE
from .reports import dumps
from .solve import OptimalSolution, enumerate_optimal_family, \
    helstrom_two_state, solve_equiprobable_pure

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_UNSUPPORTED = 2
EXIT_NON_OPTIMAL = 3
EXIT_NUMERIC = 4


def _emit(report: dict, out: str | None):
    text = dumps(report)
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _solve_routed(e: Ensemble) -> OptimalSolution:
    if e.size == 2:
        return helstrom_two_state(e)
    return solve_equiprobable_pure(e)


def _oracle_block(e: Ensemble, solution_pe: float, seed: int) -> dict:
    dual = solve_dual(e, seed=seed)
    gap = solution_pe - dual.p_error
    return {
        "dual": dual.to_dict(),
        "gap": gap,
        "agrees": bool(abs(gap) <= TOL_ORACLE),
    }


def cmd_solve(args) -> int:
    e = load_ensemble_file(args.ensemble)
    sol = _solve_routed(e)
    cert = check_global(sol.canonical_povm, e, tol=args.tolerance)
    report = {
        "command": "solve",
        "seed": args.seed,
        "ensemble": e.to_dict(),
        "solution": sol.to_dict(),
        "certificate": cert.to_dict(),
    }
    if args.oracle_check:
        report["oracle"] = _oracle_block(e, sol.p_error, args.seed)
    _emit(report, args.out)
    return EXIT_OK if cert.optimal else EXIT_NON_OPTIMAL


def cmd_oracle(args) -> int:
    e = load_ensemble_file(args.ensemble)
    dual = solve_dual(e, seed=args.seed)
    povm = recover_povm_from_dual(dual, e)
    cert = check_global(povm, e, tol=args.tolerance)
    report = {
        "command": "oracle",
        "seed": args.seed,
        "ensemble": e.to_dict(),
        "dual": dual.to_dict(),
        "recovered_povm": povm.to_dict(),
        "certificate": cert.to_dict(),
    }
    _emit(report, args.out)
    return EXIT_OK if cert.optimal else EXIT_NON_OPTIMAL


def cmd_verify(args) -> int:
    e = load_ensemble_file(args.ensemble)
    povm = load_povm_file(args.povm)
    if povm.size != e.size:
        raise ValidationError(
            f"POVM has {povm.size} elements but the ensemble has {e.size} states"
        )
    cert = check_global(povm, e, tol=args.tolerance)
    report = {
        "command": "verify",
        "ensemble": e.to_dict(),
        "povm": povm.to_dict(),
        "certificate": cert.to_dict(),
    }
    _emit(report, args.out)
    return EXIT_OK if cert.optimal else EXIT_NON_OPTIMAL


def cmd_simulate(args) -> int:
    e = load_ensemble_file(args.ensemble)
    if (args.povm is None) == (not args.use_solver):
        raise ValidationError("provide a POVM file or --use-solver, not both")
    if args.use_solver:
        povm = _solve_routed(e).canonical_povm
    else:
        povm = load_povm_file(args.povm)
    rep = simulate(e, povm, trials=args.trials, seed=args.seed)
    report = {
        "command": "simulate",
        "seed": args.seed,
        "ensemble": e.to_dict(),
        "povm": povm.to_dict(),
        "simulation": rep.to_dict(),
    }
    if args.confusion_csv:
        with open(args.confusion_csv, "w", encoding="utf-8") as fh:
            fh.write(rep.confusion_csv())
    _emit(report, args.out)
    return EXIT_OK


def cmd_family(args) -> int:
    e = load_ensemble_file(args.ensemble)
    sol = _solve_routed(e)
    family = enumerate_optimal_family(sol, e)
    report = {
        "command": "family",
        "ensemble": e.to_dict(),
        "solution": sol.to_dict(),
        "family": family.to_dict(),
    }
    _emit(report, args.out)
    return EXIT_OK


def _element_rows(povm, directions=None) -> list[tuple[int, tuple, float]]:
    """(index, unit direction, weight) for each nonzero element."""
    rows = []
    for k, el in enumerate(povm.elements):
        if el.op_norm() <= 1e-15:
            continue
        d = None if directions is None else directions.get(k)
        if d is not None:
            vec = tuple(float(c) for c in d.vector)
        elif el.bloch_norm > 1e-15:
            vec = tuple(float(c) for c in el.bloch / el.bloch_norm)
        else:
            vec = (0.0, 0.0, 0.0)
        rows.append((k, vec, float(el.trace)))
    return rows


def cmd_export_bloch(args) -> int:
    e = load_ensemble_file(args.ensemble)
    elements = []
    if not args.states_only:
        if args.oracle:
            povm = recover_povm_from_dual(solve_dual(e, seed=args.seed), e)
            elements = _element_rows(povm)
        else:
            sol = _solve_routed(e)
            elements = _element_rows(sol.canonical_povm, sol.directions)
    lines = ["kind,index,x,y,z,weight"]
    for j in range(e.size):
        b = e.bloch(j)
        lines.append(f"state,{j},{b[0]:.17g},{b[1]:.17g},{b[2]:.17g},"
                     f"{e.priors[j]:.17g}")
    for k, (x, y, z), weight in elements:
        lines.append(f"element,{k},{x:.17g},{y:.17g},{z:.17g},{weight:.17g}")
    csv_text = "\n".join(lines) + "\n"
    if args.out is None:
        sys.stdout.write(csv_text)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(csv_text)
    figure_path = args.figure
    if figure_path is None and args.out is not None and not args.no_figure:
        figure_path = args.out.rsplit(".", 1)[0] + ".png"
    if figure_path is not None and not args.no_figure:
        from .plots import render_bloch_figure
        render_bloch_figure(e, elements, figure_path)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qdisc",
        description="Minimum-error discrimination of qubit states.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seed=True, tolerance=True):
        p.add_argument("ensemble", help="ensemble JSON file")
        p.add_argument("--out", default=None, help="write the report here "
                       "instead of stdout")
        if seed:
            p.add_argument("--seed", type=int, default=0)
        if tolerance:
            p.add_argument("--tolerance", type=float, default=TOL_CERT,
                           help="certification slack tier (default 1e-9)")

    p = sub.add_parser("solve", help="constructive minimum-error solution")
    common(p)
    p.add_argument("--oracle-check", action="store_true",
                   help="attach a dual-oracle comparison")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("oracle", help="dual solve + strategy recovery "
                       "(any valid ensemble)")
    common(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("verify", help="certify a strategy file")
    common(p, seed=False)
    p.add_argument("povm", help="POVM JSON file")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", help="Monte Carlo the experiment")
    common(p, tolerance=False)
    p.add_argument("povm", nargs="?", default=None, help="POVM JSON file")
    p.add_argument("--use-solver", action="store_true",
                   help="simulate the solver's strategy")
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--confusion-csv", default=None,
                   help="also write the confusion matrix as CSV")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("family", help="enumerate all optimal strategies")
    common(p, seed=False)
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("export-bloch", help="delimited Bloch coordinates "
                       "(+ rendered figure)")
    common(p, tolerance=False)
    p.add_argument("--oracle", action="store_true",
                   help="use the dual oracle instead of the solver")
    p.add_argument("--states-only", action="store_true",
                   help="export the ensemble without solving")
    p.add_argument("--figure", default=None, help="figure output path")
    p.add_argument("--no-figure", action="store_true")
    p.set_defaults(func=cmd_export_bloch)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code = args.func(args)
    except ValidationError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        code = EXIT_VALIDATION
    except UnsupportedRegimeError as exc:
        print(f"unsupported regime: {exc}\nhint: `qdisc oracle` handles any "
              "valid ensemble", file=sys.stderr)
        code = EXIT_UNSUPPORTED
    except SolverExhaustedError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        code = EXIT_NUMERIC
    except NumericFailureError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        code = EXIT_NUMERIC
    except OSError as exc:
        print(f"error [io]: {exc}", file=sys.stderr)
        code = EXIT_VALIDATION
    return code


if __name__ == "__main__":
    sys.exit(main())
