"""Command-line front end.

Subcommands: solve, pencil, verify, counterexample, selftest. Problems are
JSON documents; reports are emitted as JSON (default) or flat text with
identical numeric content. Exit codes: 0 success, 1 input error,
2 infeasible/unsupported, 3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import __version__
from .errors import NotPsdPencil, ParseError, TraceminError
from .indefinite import ConstraintSpec, solve
from .oracle import (
    CounterexampleParams,
    constraint_residual,
    counterexample_gap,
    counterexample_stationary,
    local_search,
    objective,
)
from .pencil import finite_eigenvalues
from .spectral import as_herm, inertia

GAP_LOWER = -1e-8   # oracle may undershoot the analytic value by at most this
GAP_UPPER = 1e-4    # ... and may exceed it by at most this on attained instances


# ---------------------------------------------------------------------------
# problem-file parsing
# ---------------------------------------------------------------------------


def _parse_entry(e):
    if isinstance(e, (int, float)):
        return complex(e)
    if isinstance(e, list) and len(e) == 2 and all(
        isinstance(x, (int, float)) for x in e
    ):
        return complex(e[0], e[1])
    raise ParseError(f"matrix entry must be a number or [re, im] pair, got {e!r}")


def _parse_matrix(obj, name):
    if not (isinstance(obj, list) and obj and all(isinstance(r, list) for r in obj)):
        raise ParseError(f"field {name!r} must be a non-empty list of rows")
    ncols = len(obj[0])
    if ncols == 0 or any(len(r) != ncols for r in obj):
        raise ParseError(f"field {name!r} has ragged or empty rows")
    return np.array([[_parse_entry(e) for e in r] for r in obj], dtype=complex)


def parse_problem(doc: dict):
    """Validate a problem document into (A, B, D, constraint, sense)."""
    if not isinstance(doc, dict):
        raise ParseError("problem file must be a JSON object")
    for req in ("a", "b", "constraint"):
        if req not in doc:
            raise ParseError(f"missing required field {req!r}")
    A = _parse_matrix(doc["a"], "a")
    B = _parse_matrix(doc["b"], "b")
    kind = doc["constraint"]
    if kind not in ("plus_identity", "minus_identity", "signature"):
        raise ParseError(f"unknown constraint {kind!r}")
    sense = doc.get("sense", "min")
    if sense not in ("min", "max"):
        raise ParseError(f"sense must be 'min' or 'max', got {sense!r}")

    try:
        if kind == "signature":
            if "d" in doc:
                D = _parse_matrix(doc["d"], "d")
                k_plus = doc.get("k_plus")
                k_minus = doc.get("k_minus")
                if k_plus is None or k_minus is None:
                    raise ParseError("signature with full d needs k_plus and k_minus")
            else:
                if "d_plus" not in doc or "d_minus" not in doc:
                    raise ParseError("signature needs d, or d_plus and d_minus")
                Dp = _parse_matrix(doc["d_plus"], "d_plus")
                Dm = _parse_matrix(doc["d_minus"], "d_minus")
                k_plus = doc.get("k_plus", Dp.shape[0])
                k_minus = doc.get("k_minus", Dm.shape[0])
                D = np.zeros((k_plus + k_minus, k_plus + k_minus), dtype=complex)
                D[:k_plus, :k_plus] = Dp
                D[k_plus:, k_plus:] = Dm
            constraint = ConstraintSpec.signature(int(k_plus), int(k_minus))
        else:
            if "d" not in doc:
                raise ParseError(f"constraint {kind!r} needs field 'd'")
            D = _parse_matrix(doc["d"], "d")
            k = int(doc.get("k", D.shape[0]))
            constraint = (
                ConstraintSpec.plus_identity(k)
                if kind == "plus_identity"
                else ConstraintSpec.minus_identity(k)
            )
    except (ValueError, TypeError) as exc:
        raise ParseError(str(exc)) from exc
    if D.shape[0] != D.shape[1] or D.shape[0] != constraint.k:
        raise ParseError("d must be square of size k")
    return A, B, D, constraint, sense


def load_problem(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in {path}: {exc}") from exc
    return parse_problem(doc)


# ---------------------------------------------------------------------------
# report serialization
# ---------------------------------------------------------------------------


def _enc_matrix(M):
    M = np.asarray(M)
    return [[[float(np.real(e)), float(np.imag(e))] for e in row] for row in M]


def _emit(report: dict, mode: str, out=None):
    out = out or sys.stdout
    if mode == "text":
        for line in _text_lines(report, ""):
            print(line, file=out)
    else:
        print(json.dumps(report, sort_keys=True), file=out)


def _text_lines(obj, prefix):
    if isinstance(obj, dict):
        for key in sorted(obj):
            yield from _text_lines(obj[key], f"{prefix}{key}." if prefix else f"{key}.")
    elif isinstance(obj, list) and obj and isinstance(obj[0], (dict, list)):
        for i, item in enumerate(obj):
            yield from _text_lines(item, f"{prefix}{i}.")
    else:
        name = prefix[:-1] if prefix.endswith(".") else prefix
        if isinstance(obj, float):
            yield f"{name} = {obj!r}"
        elif isinstance(obj, list):
            yield f"{name} = {json.dumps(obj)}"
        else:
            yield f"{name} = {obj}"


def _error_report(exc: TraceminError) -> dict:
    return {
        "error": {"code": exc.code, "message": str(exc)},
        "tool_version": __version__,
    }


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_solve(args) -> int:
    try:
        A, B, D, constraint, sense = load_problem(args.path)
    except ParseError as exc:
        _emit(_error_report(exc), args.mode, sys.stderr)
        return 1
    try:
        rep = solve(A, B, D, constraint, sense=sense, want_optimizer=args.optimizer)
        A_ = as_herm(A)
        B_ = as_herm(B)
        inb = inertia(B_)
        diagnostics = {
            "inertia_b": [inb.n_plus, inb.n_zero, inb.n_minus],
        }
        if rep.route.startswith("indefinite"):
            analysis = finite_eigenvalues(A_, B_)
            diagnostics["lambda0"] = analysis.lambda0
            diagnostics["lambda_plus"] = [float(v) for v in analysis.lambda_plus]
            diagnostics["lambda_minus"] = [float(v) for v in analysis.lambda_minus]
            diagnostics["m0"] = analysis.m0
        report = {
            "route": rep.route,
            "finite": rep.finite,
            "value": rep.value,
            "attained": rep.attained,
            "pairing": [[w, lam, role] for (w, lam, role) in rep.pairing],
            "warnings": list(rep.warnings),
            "diagnostics": diagnostics,
            "tool_version": __version__,
        }
        if rep.x_opt is not None:
            report["x_opt"] = _enc_matrix(rep.x_opt)
            diagnostics["constraint_residual"] = constraint_residual(
                B_, rep.x_opt, constraint.matrix()
            )
            diagnostics["objective_at_x_opt"] = objective(A_, D, rep.x_opt)
        _emit(report, args.mode)
        return 0
    except (ValueError, ParseError) as exc:
        _emit({"error": {"code": "PARSE_ERROR", "message": str(exc)},
               "tool_version": __version__}, args.mode, sys.stderr)
        return 1
    except TraceminError as exc:
        _emit(_error_report(exc), args.mode, sys.stderr)
        return 2


def cmd_pencil(args) -> int:
    try:
        A, B, _D, _constraint, _sense = load_problem(args.path)
    except ParseError as exc:
        _emit(_error_report(exc), args.mode, sys.stderr)
        return 1
    try:
        analysis = finite_eigenvalues(A, B)
    except ValueError as exc:
        _emit({"error": {"code": "PARSE_ERROR", "message": str(exc)},
               "tool_version": __version__}, args.mode, sys.stderr)
        return 1
    except NotPsdPencil as exc:
        _emit(_error_report(exc), args.mode, sys.stderr)
        return 2
    inb = analysis.inertia_b
    report = {
        "inertia_b": [inb.n_plus, inb.n_zero, inb.n_minus],
        "lambda0": analysis.lambda0,
        "lambda_plus": [float(v) for v in analysis.lambda_plus],
        "lambda_minus": [float(v) for v in analysis.lambda_minus],
        "diagonalizable": analysis.diagonalizable,
        "m0": analysis.m0,
        "tool_version": __version__,
    }
    _emit(report, args.mode)
    return 0


def cmd_verify(args) -> int:
    try:
        A, B, D, constraint, sense = load_problem(args.path)
    except ParseError as exc:
        _emit(_error_report(exc), args.mode, sys.stderr)
        return 1
    try:
        rep = solve(A, B, D, constraint, sense=sense, want_optimizer=False)
    except TraceminError as exc:
        _emit(_error_report(exc), args.mode, sys.stderr)
        return 2
    if sense == "max":
        # run the oracle on the negated objective so its min matches the sup
        oracle = local_search(
            -as_herm(A), B, D, constraint,
            restarts=args.restarts, iters=args.iters, seed=args.seed,
        )
        oracle_best = -oracle.best_value
        gap = rep.value - oracle_best if rep.finite else None
    else:
        oracle = local_search(
            A, B, D, constraint,
            restarts=args.restarts, iters=args.iters, seed=args.seed,
        )
        oracle_best = oracle.best_value
        gap = oracle_best - rep.value if rep.finite else None
    if rep.finite:
        if rep.attained:
            verdict = GAP_LOWER <= gap <= GAP_UPPER
        else:
            # infimum not attained: oracle must stay above it, close is a bonus
            verdict = gap >= GAP_LOWER
    else:
        verdict = bool(oracle.unbounded_flag)
    report = {
        "analytic": {"route": rep.route, "finite": rep.finite,
                     "value": rep.value, "attained": rep.attained},
        "oracle": {"best_value": oracle_best if not oracle.unbounded_flag else None,
                   "unbounded_flag": oracle.unbounded_flag,
                   "iterations": oracle.iterations,
                   "feasibility_residual": oracle.feasibility_residual},
        "gap": gap,
        "verdict": "PASS" if verdict else "FAIL",
        "tool_version": __version__,
    }
    _emit(report, args.mode)
    return 0 if verdict else 3


def cmd_counterexample(args) -> int:
    try:
        p = CounterexampleParams(mu=args.mu, delta=args.delta)
    except ValueError as exc:
        _emit({"error": {"code": "PARSE_ERROR", "message": str(exc)},
               "tool_version": __version__}, args.mode, sys.stderr)
        return 1
    tau_star, sig_minus, sig_plus = counterexample_stationary(p)
    f_min, bound, margin = counterexample_gap(p)
    report = {
        "mu": p.mu,
        "delta": p.delta,
        "gamma": p.gamma,
        "nu": p.nu,
        "tau_star": tau_star,
        "sigma_star_minus": sig_minus,
        "sigma_star_plus": sig_plus,
        "f_min": f_min,
        "bound": bound,
        "margin": margin,
        "tool_version": __version__,
    }
    _emit(report, args.mode)
    return 0


def cmd_selftest(args) -> int:
    """Built-in smoke checks covering each solver route and the oracle."""
    checks = []

    def check(name, fn):
        try:
            fn()
            checks.append({"name": name, "status": "PASS"})
        except Exception as exc:  # noqa: BLE001 - report, don't crash
            checks.append({"name": name, "status": "FAIL", "detail": str(exc)})

    def ky_fan():
        rep = solve(np.diag([1.0, 2.0, 3.0]), np.eye(3), np.eye(2),
                    ConstraintSpec.plus_identity(2))
        assert abs(rep.value - 3.0) < 1e-12, rep.value

    def indefinite_plus():
        rep = solve(np.diag([1.0, 2.0, 5.0]), np.diag([1.0, 1.0, -1.0]),
                    np.eye(1), ConstraintSpec.plus_identity(1))
        assert rep.finite and abs(rep.value - 1.0) < 1e-9, rep.value

    def dichotomy():
        rep = solve(np.diag([1.0, 2.0]), np.diag([1.0, -1.0]),
                    np.array([[-1.0]]), ConstraintSpec.plus_identity(1))
        assert not rep.finite

    def oracle_match():
        res = local_search(np.diag([1.0, 2.0, 3.0]), np.eye(3), np.eye(2),
                           ConstraintSpec.plus_identity(2),
                           restarts=8, iters=200, seed=args.seed)
        assert abs(res.best_value - 3.0) < 1e-5, res.best_value

    def counterexample():
        f_min, bound, margin = counterexample_gap(
            CounterexampleParams(mu=2.0, delta=0.25)
        )
        assert margin > 0 and f_min < bound

    check("ky_fan_definite", ky_fan)
    check("indefinite_plus", indefinite_plus)
    check("finiteness_dichotomy", dichotomy)
    check("oracle_matches_analytic", oracle_match)
    check("counterexample_margin", counterexample)

    ok = all(c["status"] == "PASS" for c in checks)
    _emit({"checks": checks, "verdict": "PASS" if ok else "FAIL",
           "tool_version": __version__}, args.mode)
    return 0 if ok else 3


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _default_seed() -> int:
    raw = os.environ.get("TRACEMIN_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        return 0


def _add_mode_flags(sp):
    grp = sp.add_mutually_exclusive_group()
    grp.add_argument("--json", dest="mode", action="store_const", const="json")
    grp.add_argument("--text", dest="mode", action="store_const", const="text")
    sp.set_defaults(mode="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tracemin",
        description="Exact trace optimization under congruence constraints.",
    )
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("solve", help="solve a problem file")
    sp.add_argument("path")
    sp.add_argument("--optimizer", action="store_true",
                    help="include an attaining X in the report when one exists")
    sp.add_argument("--seed", type=int, default=_default_seed())
    _add_mode_flags(sp)
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("pencil", help="analyze the pencil A - lambda*B")
    sp.add_argument("path")
    _add_mode_flags(sp)
    sp.set_defaults(func=cmd_pencil)

    sp = sub.add_parser("verify", help="cross-check analytic value vs oracle")
    sp.add_argument("path")
    sp.add_argument("--restarts", type=int, default=20)
    sp.add_argument("--iters", type=int, default=500)
    sp.add_argument("--seed", type=int, default=_default_seed())
    _add_mode_flags(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("counterexample",
                        help="closed forms of the coupled-weight counterexample")
    sp.add_argument("--mu", type=float, required=True)
    sp.add_argument("--delta", type=float, required=True)
    _add_mode_flags(sp)
    sp.set_defaults(func=cmd_counterexample)

    sp = sub.add_parser("selftest", help="run built-in smoke checks")
    sp.add_argument("--seed", type=int, default=_default_seed())
    _add_mode_flags(sp)
    sp.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
