"""Command-line front end: solves, bounds, sweeps, roots, property checks.

Output is machine readable only: JSON by default, CSV for the tabular
commands.  Every run echoes its resolved configuration, all randomness is
driven by an explicit seed, and identical configurations produce
byte-identical output.  Exit codes: 0 success, 1 solver nonconvergence or
numerical failure, 2 invalid input.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__
from .bounds import certify, pythagorean_check
from .circle import BoundaryGrid, BoundarySamples, uniform_grid
from .errors import (InvalidArgumentError, OpaError, ParseError,
                     UnsupportedInputError)
from .experiments import (format_complex_csv, roots_of_coeffs,
                          rotation_symmetry_check, rows_to_csv, sweep_degree,
                          sweep_function_sequence, sweep_p)
from .functions import Polynomial, evaluate_on_grid, parse_function
from .solvers import SolverOptions, solve

EXIT_OK = 0
EXIT_NONCONVERGED = 1
EXIT_INVALID = 2

GRID_LOG2_ENV = "OPA_GRID_LOG2"
DEFAULT_SEED = 0
DEFAULT_TOL = 1e-10

CHECK_SUITES = ("pythagorean", "orthogonality", "sandwich", "rotation")


@dataclass
class RunConfig:
    """Resolved invocation; echoed verbatim into every report."""

    command: str
    f_expr: str = ""
    n: int = 0
    p: float | None = None
    grid_log2: int = 12
    output: str = "json"
    method: str = "auto"
    tol: float = DEFAULT_TOL
    seed: int = DEFAULT_SEED
    p_list: tuple = ()
    f_list: tuple = ()
    suite: str = "all"
    trials: int = 20
    outdir: str = ""


def _default_grid_log2() -> int:
    raw = os.environ.get(GRID_LOG2_ENV)
    if raw is None:
        return 12
    try:
        return int(raw)
    except ValueError:
        raise InvalidArgumentError(
            f"{GRID_LOG2_ENV} must be an integer, got {raw!r}")


def _make_grid(grid_log2: int) -> BoundaryGrid:
    g = int(grid_log2)
    if not 4 <= g <= 20:
        raise InvalidArgumentError(f"grid_log2 must lie in [4, 20], got {g}")
    return uniform_grid(1 << g)


def _finite(x: float):
    x = float(x)
    return x if np.isfinite(x) else None


def _jsonify(obj):
    """Recursive JSON coercion: complex -> [re, im], non-finite -> null."""
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _finite(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        z = complex(obj)
        return [_finite(z.real), _finite(z.imag)]
    if isinstance(obj, np.ndarray):
        return [_jsonify(v) for v in obj.tolist()]
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    if isinstance(obj, dict):
        return {str(k): _jsonify(v) for k, v in obj.items()}
    return str(obj)


def _dump_json(payload: dict) -> str:
    return json.dumps(_jsonify(payload), indent=2, sort_keys=True) + "\n"


def _config_dict(cfg: RunConfig) -> dict:
    d = dataclasses.asdict(cfg)
    d["p_list"] = list(d["p_list"])
    d["f_list"] = list(d["f_list"])
    return d


def _warn(msg: str) -> None:
    sys.stderr.write(f"warning: {msg}\n")


def _options(cfg: RunConfig) -> SolverOptions:
    return SolverOptions(tol_residual=cfg.tol)


def _result_dict(result) -> dict:
    return {
        "coeffs": result.coeffs,
        "degree": result.degree,
        "p": result.p,
        "error": result.error,
        "residuals": result.residuals,
        "residual_max": result.residual_max,
        "converged": result.converged,
        "iterations": result.iterations,
        "method": result.method,
        "grid_log2": result.grid_log2,
        "flags": list(result.flags),
    }


def _row_dict(row) -> dict:
    return {
        "key": row.key,
        "coeffs": row.coeffs,
        "error": row.error,
        "residual_max": row.residual_max,
        "roots": row.roots,
        "converged": row.converged,
        "note": row.note,
        "dist_to_final": row.dist_to_final,
    }


def _require_p(cfg: RunConfig) -> float:
    if cfg.p is None:
        raise InvalidArgumentError("--p is required for this command")
    return float(cfg.p)


def _require_csv_ok(cfg: RunConfig) -> None:
    if cfg.output == "csv" and cfg.command not in ("sweep-p", "sweep-n",
                                                   "sweep-f", "roots"):
        raise InvalidArgumentError(
            f"csv output is not defined for command {cfg.command!r}")


# -- command handlers ------------------------------------------------------


def _cmd_solve(cfg: RunConfig) -> int:
    f = parse_function(cfg.f_expr)
    grid = _make_grid(cfg.grid_log2)
    result = solve(f, cfg.n, _require_p(cfg), method=cfg.method, grid=grid,
                   options=_options(cfg))
    for flag in result.flags:
        _warn(flag)
    payload = {"command": "solve", "config": _config_dict(cfg),
               "result": _result_dict(result)}
    sys.stdout.write(_dump_json(payload))
    return EXIT_OK if result.converged else EXIT_NONCONVERGED


def _cmd_bounds(cfg: RunConfig) -> int:
    f = parse_function(cfg.f_expr)
    grid = _make_grid(cfg.grid_log2)
    report = certify(f, cfg.n, _require_p(cfg), grid=grid,
                     options=_options(cfg))
    for note in report.warnings:
        _warn(note)
    payload = {"command": "bounds", "config": _config_dict(cfg),
               "report": report.to_json_dict()}
    sys.stdout.write(_dump_json(payload))
    nonconv = any("did not converge" in w for w in report.warnings)
    return EXIT_NONCONVERGED if nonconv else EXIT_OK


def _rows_exit(rows) -> int:
    return EXIT_OK if all(r.converged for r in rows) else EXIT_NONCONVERGED


def _emit_rows(cfg: RunConfig, rows, extra: dict | None = None) -> None:
    if cfg.output == "csv":
        sys.stdout.write(rows_to_csv(rows))
        return
    payload = {"command": cfg.command, "config": _config_dict(cfg),
               "rows": [_row_dict(r) for r in rows]}
    if extra:
        payload.update(extra)
    sys.stdout.write(_dump_json(payload))


def _cmd_sweep_p(cfg: RunConfig) -> int:
    if not cfg.p_list:
        raise InvalidArgumentError("--p-list is required for sweep-p")
    f = parse_function(cfg.f_expr)
    grid = _make_grid(cfg.grid_log2)
    rows = sweep_p(f, cfg.n, cfg.p_list, grid=grid, options=_options(cfg))
    _emit_rows(cfg, rows)
    return _rows_exit(rows)


def _cmd_sweep_n(cfg: RunConfig) -> int:
    f = parse_function(cfg.f_expr)
    grid = _make_grid(cfg.grid_log2)
    rows = sweep_degree(f, _require_p(cfg), cfg.n, grid=grid,
                        options=_options(cfg))
    _emit_rows(cfg, rows)
    return _rows_exit(rows)


def _cmd_sweep_f(cfg: RunConfig) -> int:
    if not cfg.f_list:
        raise InvalidArgumentError("--f-list is required for sweep-f")
    fs = [parse_function(expr) for expr in cfg.f_list]
    grid = _make_grid(cfg.grid_log2)
    rows = sweep_function_sequence(fs, cfg.n, _require_p(cfg), grid=grid,
                                   options=_options(cfg))
    _emit_rows(cfg, rows)
    return _rows_exit(rows)


def _cmd_roots(cfg: RunConfig) -> int:
    f = parse_function(cfg.f_expr)
    grid = _make_grid(cfg.grid_log2)
    result = solve(f, cfg.n, _require_p(cfg), method=cfg.method, grid=grid,
                   options=_options(cfg))
    for flag in result.flags:
        _warn(flag)
    roots = roots_of_coeffs(result.coeffs)
    if cfg.output == "csv":
        lines = ["root"] + [format_complex_csv(r) for r in roots]
        sys.stdout.write("\n".join(lines) + "\n")
    else:
        payload = {"command": "roots", "config": _config_dict(cfg),
                   "roots": roots, "converged": result.converged}
        sys.stdout.write(_dump_json(payload))
    return EXIT_OK if result.converged else EXIT_NONCONVERGED


def _cmd_report(cfg: RunConfig) -> int:
    if not cfg.p_list:
        raise InvalidArgumentError("--p-list is required for report")
    if not cfg.outdir:
        raise InvalidArgumentError("--outdir is required for report")
    from .report import render_sweep_report
    f = parse_function(cfg.f_expr)
    grid = _make_grid(cfg.grid_log2)
    rows = sweep_p(f, cfg.n, cfg.p_list, grid=grid, options=_options(cfg))
    files = render_sweep_report(rows, cfg.outdir, f_label=cfg.f_expr)
    payload = {"command": "report", "config": _config_dict(cfg),
               "outdir": cfg.outdir, "files": files, "row_count": len(rows)}
    sys.stdout.write(_dump_json(payload))
    return _rows_exit(rows)


# -- randomized property suites --------------------------------------------


def _random_poly(rng: np.random.Generator, max_deg: int = 4,
                 min_f0: float = 0.2) -> Polynomial:
    deg = int(rng.integers(1, max_deg + 1))
    c = 0.5 * (rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1))
    if abs(c[0]) < min_f0:
        phase = c[0] / abs(c[0]) if abs(c[0]) > 0 else 1.0
        c[0] = min_f0 * phase
    return Polynomial(c)


def _emit_line(record: dict) -> bool:
    sys.stdout.write(json.dumps(_jsonify(record), sort_keys=True,
                                separators=(",", ":")) + "\n")
    return bool(record.get("pass", False))


def _suite_pythagorean(cfg: RunConfig, rng, grid) -> list:
    p_values = [cfg.p] if cfg.p is not None else [1.5, 2.0, 3.0, 4.0]
    results = []
    for i in range(cfg.trials):
        p = float(p_values[i % len(p_values)])
        f = _random_poly(rng)
        n = int(rng.integers(0, 3))
        rec = {"suite": "pythagorean", "kind": "opa-pair", "index": i, "p": p,
               "n": n}
        try:
            result = solve(f, n, p, grid=grid, options=_options(cfg))
            fs = evaluate_on_grid(f, grid).values
            basis = grid.nodes[None, :] ** np.arange(n + 1)[:, None] * fs
            x = BoundarySamples(grid, result.coeffs @ basis - 1.0)
            c = rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1)
            y = BoundarySamples(grid, c @ basis)
            slacks = pythagorean_check(x, y, p)
            rec.update(lower_slack=slacks.lower_slack,
                       upper_slack=slacks.upper_slack,
                       hypothesis_residual=slacks.hypothesis_residual)
            rec["pass"] = (slacks.lower_slack >= -1e-9
                           and slacks.upper_slack >= -1e-9)
        except OpaError as exc:
            rec.update(error=str(exc))
            rec["pass"] = False
        results.append(_emit_line(rec))
    for i in range(cfg.trials):
        p = float(p_values[i % len(p_values)])
        j = int(rng.integers(0, 4))
        k = j + 1 + int(rng.integers(0, 4))
        scale = complex(rng.normal() + 1j * rng.normal())
        x = BoundarySamples(grid, grid.nodes ** j)
        y = BoundarySamples(grid, scale * grid.nodes ** k)
        rec = {"suite": "pythagorean", "kind": "character-pair", "index": i,
               "p": p, "j": j, "k": k}
        try:
            slacks = pythagorean_check(x, y, p)
            rec.update(lower_slack=slacks.lower_slack,
                       upper_slack=slacks.upper_slack)
            rec["pass"] = (slacks.lower_slack >= -1e-9
                           and slacks.upper_slack >= -1e-9)
        except OpaError as exc:
            rec.update(error=str(exc))
            rec["pass"] = False
        results.append(_emit_line(rec))
    return results


def _suite_orthogonality(cfg: RunConfig, rng, grid) -> list:
    p_values = [cfg.p] if cfg.p is not None else [1.5, 2.0, 2.5, 3.0, 4.0, 6.0]
    results = []
    for i in range(cfg.trials):
        p = float(p_values[i % len(p_values)])
        f = _random_poly(rng)
        n = int(rng.integers(0, 3))
        rec = {"suite": "orthogonality", "index": i, "p": p, "n": n}
        try:
            result = solve(f, n, p, grid=grid, options=_options(cfg))
            rec.update(residual_max=result.residual_max,
                       converged=result.converged)
            rec["pass"] = result.residual_max <= 1e-8
        except OpaError as exc:
            rec.update(error=str(exc))
            rec["pass"] = False
        results.append(_emit_line(rec))
    return results


def _suite_sandwich(cfg: RunConfig, rng, grid) -> list:
    p_values = [cfg.p] if cfg.p is not None else [1.5, 2.5, 3.0, 4.0]
    trials = max(3, cfg.trials // 5)
    results = []
    for i in range(trials):
        p = float(p_values[i % len(p_values)])
        f = _random_poly(rng, max_deg=3)
        n = int(rng.integers(0, 2))
        rec = {"suite": "sandwich", "index": i, "p": p, "n": n}
        try:
            report = certify(f, n, p, grid=grid)
            err = report.computed_error
            rec.update(best_lower=report.best_lower, computed_error=err,
                       best_upper=report.best_upper)
            rec["pass"] = (report.best_lower <= err + 1e-7
                           and err <= report.best_upper + 1e-7)
        except OpaError as exc:
            rec.update(error=str(exc))
            rec["pass"] = False
        results.append(_emit_line(rec))
    return results


def _suite_rotation(cfg: RunConfig, rng, grid) -> list:
    p_values = [cfg.p] if cfg.p is not None else [2.0, 3.0, 4.0]
    results = []
    for i in range(cfg.trials):
        p = float(p_values[i % len(p_values)])
        f = _random_poly(rng)
        gamma = complex(np.exp(2j * np.pi * rng.uniform()))
        rec = {"suite": "rotation", "index": i, "p": p, "gamma": gamma}
        try:
            disc = rotation_symmetry_check(f, p, gamma, grid=grid,
                                           options=_options(cfg))
            rec.update(discrepancy=disc)
            rec["pass"] = disc <= 1e-6
        except OpaError as exc:
            rec.update(error=str(exc))
            rec["pass"] = False
        results.append(_emit_line(rec))
    return results


_SUITE_RUNNERS = {
    "pythagorean": _suite_pythagorean,
    "orthogonality": _suite_orthogonality,
    "sandwich": _suite_sandwich,
    "rotation": _suite_rotation,
}


def check(cfg: RunConfig) -> int:
    """Run the randomized invariant suites; exit 0 iff every check passes."""
    grid = _make_grid(cfg.grid_log2)
    suites = CHECK_SUITES if cfg.suite == "all" else (cfg.suite,)
    rng = np.random.default_rng(cfg.seed)
    outcomes = {}
    for name in suites:
        if name not in _SUITE_RUNNERS:
            raise InvalidArgumentError(f"unknown suite {name!r}")
        outcomes[name] = _SUITE_RUNNERS[name](cfg, rng, grid)
    passed = sum(sum(v) for v in outcomes.values())
    total = sum(len(v) for v in outcomes.values())
    summary = {"summary": True, "seed": cfg.seed, "passed": passed,
               "failed": total - passed,
               "suites": {k: {"passed": sum(v), "total": len(v)}
                          for k, v in outcomes.items()}}
    sys.stdout.write(json.dumps(_jsonify(summary), sort_keys=True,
                                separators=(",", ":")) + "\n")
    return EXIT_OK if passed == total else EXIT_NONCONVERGED


_COMMANDS = {
    "solve": _cmd_solve,
    "bounds": _cmd_bounds,
    "sweep-p": _cmd_sweep_p,
    "sweep-n": _cmd_sweep_n,
    "sweep-f": _cmd_sweep_f,
    "roots": _cmd_roots,
    "check": check,
    "report": _cmd_report,
}


def run(config: RunConfig) -> int:
    """Execute one resolved configuration; report on stdout, warnings on stderr."""
    try:
        _require_csv_ok(config)
        handler = _COMMANDS.get(config.command)
        if handler is None:
            raise InvalidArgumentError(f"unknown command {config.command!r}")
        return handler(config)
    except ParseError as exc:
        sys.stderr.write(f"error: cannot parse function expression: {exc}\n")
        return EXIT_INVALID
    except (InvalidArgumentError, UnsupportedInputError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INVALID
    except OpaError as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_NONCONVERGED


# -- argument parsing ------------------------------------------------------


def _add_common(sp: argparse.ArgumentParser, *, need_f: bool = True) -> None:
    if need_f:
        sp.add_argument("--f", dest="f_expr", required=True,
                        help="function expression, e.g. '1+0.5*z' or '1/(z-2)'")
    sp.add_argument("--grid-log2", type=int, default=None,
                    help=f"log2 of the grid size (default 12; env {GRID_LOG2_ENV})")
    sp.add_argument("--output", choices=("json", "csv"), default="json")
    sp.add_argument("--tol", type=float, default=DEFAULT_TOL,
                    help="solver certificate tolerance")
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED)


def _parse_p_list(raw: str) -> tuple:
    try:
        vals = tuple(float(tok) for tok in raw.split(",") if tok.strip())
    except ValueError:
        raise InvalidArgumentError(f"cannot parse p list {raw!r}")
    if not vals:
        raise InvalidArgumentError("empty p list")
    return vals


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="opa",
        description="Optimal polynomial approximants in H^p on the unit circle.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("solve", help="compute one approximant")
    _add_common(sp)
    sp.add_argument("--n", type=int, required=True, help="approximant degree")
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--method", choices=("auto", "gram2", "convex", "fixed-point"),
                    default="auto")

    sp = sub.add_parser("bounds", help="certified error bounds")
    _add_common(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p", type=float, required=True)

    sp = sub.add_parser("sweep-p", help="sweep the exponent")
    _add_common(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p-list", required=True,
                    help="comma-separated exponents, e.g. '1.5,2,3,4'")

    sp = sub.add_parser("sweep-n", help="sweep the degree")
    _add_common(sp)
    sp.add_argument("--n", type=int, required=True, help="maximum degree")
    sp.add_argument("--p", type=float, required=True)

    sp = sub.add_parser("sweep-f", help="sweep a function sequence")
    _add_common(sp, need_f=False)
    sp.add_argument("--f-list", required=True,
                    help="pipe-separated expressions, e.g. '1+z|1+0.6*z|1+0.5*z'")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p", type=float, required=True)

    sp = sub.add_parser("roots", help="roots of the computed approximant")
    _add_common(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--method", choices=("auto", "gram2", "convex", "fixed-point"),
                    default="auto")

    sp = sub.add_parser("check", help="randomized invariant suites")
    _add_common(sp, need_f=False)
    sp.add_argument("--suite", choices=("all",) + CHECK_SUITES, default="all")
    sp.add_argument("--p", type=float, default=None,
                    help="restrict suites to one exponent")
    sp.add_argument("--trials", type=int, default=20,
                    help="trials per suite (sandwich runs trials/5)")

    sp = sub.add_parser("report", help="sweep the exponent and render figures")
    _add_common(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p-list", required=True)
    sp.add_argument("--outdir", required=True,
                    help="directory for the rendered figures and CSV")

    return ap


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    grid_log2 = ns.grid_log2 if getattr(ns, "grid_log2", None) is not None \
        else _default_grid_log2()
    cfg = RunConfig(command=ns.command, grid_log2=grid_log2)
    cfg.f_expr = getattr(ns, "f_expr", "") or ""
    cfg.n = int(getattr(ns, "n", 0) or 0)
    p = getattr(ns, "p", None)
    cfg.p = None if p is None else float(p)
    cfg.output = getattr(ns, "output", "json")
    cfg.method = getattr(ns, "method", "auto")
    cfg.tol = float(getattr(ns, "tol", DEFAULT_TOL))
    cfg.seed = int(getattr(ns, "seed", DEFAULT_SEED))
    raw_p_list = getattr(ns, "p_list", None)
    cfg.p_list = _parse_p_list(raw_p_list) if raw_p_list else ()
    raw_f_list = getattr(ns, "f_list", None)
    if raw_f_list:
        cfg.f_list = tuple(tok.strip() for tok in raw_f_list.split("|")
                           if tok.strip())
        if not cfg.f_list:
            raise InvalidArgumentError("empty f list")
    cfg.suite = getattr(ns, "suite", "all")
    cfg.trials = int(getattr(ns, "trials", 20))
    if cfg.trials < 1:
        raise InvalidArgumentError("--trials must be positive")
    cfg.outdir = getattr(ns, "outdir", "") or ""
    return cfg


def main(argv=None) -> int:
    ap = build_parser()
    try:
        ns = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = config_from_args(ns)
    except (InvalidArgumentError, UnsupportedInputError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INVALID
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
