"""Parameter sweeps, approximant root loci, and structural spot checks.

Each sweep solves a family of approximation problems and tabulates one row
per instance; rows carry the coefficients, the attained error, the max
orthogonality residual, and the approximant roots.  Warm starting chains
the previous row's coefficients into the next solve, which the continuity
of p -> q_{n,p}[f] justifies.  Failures are recorded in the row and the
sweep continues.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly

from .circle import BoundaryGrid, default_grid
from .errors import InvalidArgumentError, OpaError
from .functions import HardyFunction, Polynomial, polynomial_roots
from .solvers import OpaResult, SolverOptions, solve

# trailing coefficients at or below this relative size are solver noise and
# are trimmed before root finding (they would otherwise inject spurious
# far-field roots)
ROOT_TRIM_RTOL = 1e-8

# roots closer than this are treated as one cluster: synthetic division by
# a near-multiple root is too ill-conditioned for the collapse check
ROOT_CLUSTER_TOL = 1e-4


@dataclass
class SweepRow:
    """One solved instance of a sweep; key is the swept quantity."""

    key: object
    coeffs: np.ndarray
    error: float
    residual_max: float
    roots: np.ndarray
    converged: bool = True
    note: str = ""
    dist_to_final: float | None = None


def _trim_for_roots(coeffs: np.ndarray) -> np.ndarray:
    c = np.asarray(coeffs, dtype=complex).ravel()
    if c.size == 0:
        return c
    scale = float(np.max(np.abs(c)))
    if scale == 0.0:
        return c[:1]
    keep = c.size
    while keep > 1 and abs(c[keep - 1]) <= ROOT_TRIM_RTOL * scale:
        keep -= 1
    return c[:keep]


def _roots_of(coeffs: np.ndarray) -> np.ndarray:
    c = _trim_for_roots(coeffs)
    if c.size <= 1 or float(np.max(np.abs(c))) == 0.0:
        return np.zeros(0, dtype=complex)
    return polynomial_roots(c)


def _row_from_result(key, result: OpaResult) -> SweepRow:
    note = ",".join(f for f in result.flags if f)
    return SweepRow(key=key, coeffs=np.asarray(result.coeffs, dtype=complex),
                    error=float(result.error),
                    residual_max=float(result.residual_max),
                    roots=_roots_of(result.coeffs),
                    converged=bool(result.converged), note=note)


def _failure_row(key, exc: Exception) -> SweepRow:
    return SweepRow(key=key, coeffs=np.zeros(0, dtype=complex),
                    error=float("nan"), residual_max=float("nan"),
                    roots=np.zeros(0, dtype=complex), converged=False,
                    note=f"{type(exc).__name__}: {exc}")


def _with_init(options: SolverOptions | None, a_init) -> SolverOptions:
    base = options if options is not None else SolverOptions()
    return dataclasses.replace(base, a_init=a_init)


def sweep_p(f, n: int, p_list, grid: BoundaryGrid | None = None,
            options: SolverOptions | None = None,
            warm_start: bool = True) -> list:
    """One solve per exponent, rows sorted by p; previous coefficients seed the next."""
    grid = grid if grid is not None else default_grid()
    rows: list = []
    prev = None
    for p in sorted(float(v) for v in p_list):
        opts = _with_init(options, prev if warm_start else None)
        try:
            result = solve(f, n, p, method="auto", grid=grid, options=opts)
        except OpaError as exc:
            rows.append(_failure_row(p, exc))
            prev = None
            continue
        rows.append(_row_from_result(p, result))
        prev = result.coeffs if result.converged else None
    return rows


def sweep_degree(f, p: float, n_max: int, grid: BoundaryGrid | None = None,
                 options: SolverOptions | None = None,
                 warm_start: bool = True) -> list:
    """Rows for degrees 0..n_max; errors are weakly decreasing in the degree."""
    if int(n_max) < 0:
        raise InvalidArgumentError("n_max must be nonnegative")
    grid = grid if grid is not None else default_grid()
    rows: list = []
    prev = None
    for n in range(int(n_max) + 1):
        init = None
        if warm_start and prev is not None:
            init = np.concatenate([prev, [0.0 + 0.0j]])
        try:
            result = solve(f, n, p, method="auto", grid=grid,
                           options=_with_init(options, init))
        except OpaError as exc:
            rows.append(_failure_row(n, exc))
            prev = None
            continue
        rows.append(_row_from_result(n, result))
        prev = result.coeffs if result.converged else None
    return rows


def sweep_function_sequence(f_list, n: int, p: float,
                            grid: BoundaryGrid | None = None,
                            options: SolverOptions | None = None,
                            warm_start: bool = True) -> list:
    """Rows in sequence order, with coefficient distance to the final row.

    Tracks how the approximant moves as the function does; under H^p
    convergence of the f_k the distances shrink to 0.
    """
    f_list = list(f_list)
    if not f_list:
        raise InvalidArgumentError("f_list must be nonempty")
    grid = grid if grid is not None else default_grid()
    rows: list = []
    prev = None
    for idx, fk in enumerate(f_list):
        opts = _with_init(options, prev if warm_start else None)
        try:
            result = solve(fk, n, p, method="auto", grid=grid, options=opts)
        except OpaError as exc:
            rows.append(_failure_row(idx, exc))
            prev = None
            continue
        rows.append(_row_from_result(idx, result))
        prev = result.coeffs if result.converged else None
    final = rows[-1]
    if final.coeffs.size:
        for row in rows:
            if row.coeffs.size == final.coeffs.size:
                row.dist_to_final = float(np.max(np.abs(row.coeffs - final.coeffs)))
    return rows


def roots_of_coeffs(coeffs) -> np.ndarray:
    """Roots of a coefficient vector after trimming solver-noise trailing terms."""
    return _roots_of(np.asarray(coeffs, dtype=complex).ravel())


def opa_roots(f, n: int, p: float, grid: BoundaryGrid | None = None,
              options: SolverOptions | None = None) -> np.ndarray:
    """Roots of the computed degree-n approximant (empty for constants).

    Samples candidate members of the attainable root set; degree 0 always
    yields the empty set.
    """
    result = solve(f, n, p, method="auto", grid=grid, options=options)
    return _roots_of(result.coeffs)


def rotation_symmetry_check(f, p: float, gamma: complex,
                            grid: BoundaryGrid | None = None,
                            options: SolverOptions | None = None) -> float:
    """Max coefficient discrepancy of the rotation covariance of degree-1 solves.

    If q_{1,p}[f] = a(z - w) then the approximant of f(gamma z) must be
    (a gamma)(z - conj(gamma) w), i.e. coefficients (c_0, gamma c_1).
    """
    gamma = complex(gamma)
    if abs(abs(gamma) - 1.0) > 1e-9:
        raise InvalidArgumentError(f"gamma must be unimodular, got |gamma| = {abs(gamma)!r}")
    if not isinstance(f, HardyFunction):
        raise InvalidArgumentError("f must be a HardyFunction")
    grid = grid if grid is not None else default_grid()
    base = solve(f, 1, p, method="auto", grid=grid, options=options)
    rotated = solve(f.rotate(gamma), 1, p, method="auto", grid=grid,
                    options=options)
    expected = np.array([base.coeffs[0], gamma * base.coeffs[1]], dtype=complex)
    return float(np.max(np.abs(rotated.coeffs - expected)))


@dataclass(frozen=True)
class CollapseReport:
    """Outcome of the divide-out-one-root consistency check."""

    applicable: bool
    root: complex | None = None
    discrepancy: float | None = None
    note: str = ""


def degree_collapse_check(f, n: int, p: float,
                          grid: BoundaryGrid | None = None,
                          options: SolverOptions | None = None) -> CollapseReport:
    """Divide a simple root w out of q_{n,p}[f] and re-solve at degree 1.

    The degree-1 approximant of (q/(z-w)) f must be exactly z - w; the
    report carries the coefficient discrepancy.  Clustered roots are
    skipped, and a rootless approximant makes the check inapplicable.
    """
    if not isinstance(f, HardyFunction):
        raise InvalidArgumentError("f must be a HardyFunction")
    grid = grid if grid is not None else default_grid()
    result = solve(f, n, p, method="auto", grid=grid, options=options)
    q = _trim_for_roots(result.coeffs)
    roots = _roots_of(q)
    if roots.size == 0:
        return CollapseReport(applicable=False, note="approximant has no roots")

    w = None
    best_sep = -1.0
    for i, cand in enumerate(roots):
        others = np.delete(roots, i)
        sep = float(np.min(np.abs(others - cand))) if others.size else np.inf
        if sep > best_sep:
            best_sep = sep
            w = complex(cand)
    if best_sep < ROOT_CLUSTER_TOL:
        return CollapseReport(applicable=False,
                              note="all roots clustered; division ill-conditioned")

    quotient, remainder = npoly.polydiv(q, np.array([-w, 1.0], dtype=complex))
    del remainder  # analytically zero; roundoff-sized in practice
    g = Polynomial(quotient) * f
    sub = solve(g, 1, p, method="auto", grid=grid, options=options)
    expected = np.array([-w, 1.0], dtype=complex)
    disc = float(np.max(np.abs(sub.coeffs - expected)))
    note = "" if sub.converged else "degree-1 solve did not converge"
    return CollapseReport(applicable=True, root=w, discrepancy=disc, note=note)


# -- CSV serialization -----------------------------------------------------


def _fmt_float(x: float) -> str:
    if not np.isfinite(x):
        return "nan"
    return repr(float(x) + 0.0)


def format_complex_csv(z: complex) -> str:
    """Round-tripping "re+imi" text form, e.g. "1.5-0.25i"."""
    z = complex(z)
    re, im = z.real + 0.0, z.imag + 0.0
    sign = "+" if im >= 0 or not np.isfinite(im) else "-"
    return f"{_fmt_float(re)}{sign}{_fmt_float(abs(im))}i"


def _fmt_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return _fmt_float(float(value))
    if isinstance(value, (complex, np.complexfloating)):
        return format_complex_csv(complex(value))
    if isinstance(value, np.ndarray) or isinstance(value, (list, tuple)):
        return ";".join(_fmt_cell(v) for v in value)
    return str(value)


CSV_COLUMNS = ("key", "coeffs", "error", "residual_max", "roots",
               "converged", "note", "dist_to_final")


def rows_to_csv(rows) -> str:
    """One SweepRow per line under a header; complex entries as "re+imi"."""
    lines = [",".join(CSV_COLUMNS)]
    for row in rows:
        cells = []
        for col in CSV_COLUMNS:
            cell = _fmt_cell(getattr(row, col))
            if "," in cell or '"' in cell:
                cell = '"' + cell.replace('"', '""') + '"'
            cells.append(cell)
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


__all__ = [
    "SweepRow", "CollapseReport", "sweep_p", "sweep_degree",
    "sweep_function_sequence", "opa_roots", "roots_of_coeffs",
    "rotation_symmetry_check", "degree_collapse_check", "rows_to_csv",
    "format_complex_csv",
]
