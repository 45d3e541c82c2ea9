"""Certified lower and upper bounds on the optimal-approximant error.

Lower bounds come from duality: any L^q function psi with zeroth Fourier
coefficient 1 that annihilates z^k f for k = 0..n certifies
error >= 1/||psi||_q.  Witnesses are built three ways: from the reciprocal
power series of f, from a bordered Toeplitz solve, and by improving the
series witness with an anti-analytic completion (conjugate-analytic terms
never disturb the pairing constraints).  Inner-part obstructions give two
more closed forms.  Upper bounds come from the p = 2 projection and the
trivial ceiling 1.  The Pythagorean inequalities for p-orthogonal pairs
live here too, since they share the (r, K) parameter table.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as npoly

from .circle import (BoundaryGrid, BoundarySamples, bj_residual, default_grid,
                     holder_conjugate, lp_norm)
from .errors import (ConvergenceWarning, InconsistencyError,
                     InvalidArgumentError, OpaError, QuadratureAccuracyWarning,
                     SingularSystemError, UnsupportedInputError)
from .functions import (FiniteBlaschke, HardyFunction, Polynomial, Rational,
                        TaylorSeries, evaluate_on_grid, format_function,
                        inner_part_of_polynomial, reciprocal_series,
                        taylor_coefficients)
from .solvers import SolverOptions, gram_solve_p2, minimize_in_span, solve

# hypothesis tolerance for claiming x is p-orthogonal to y
ORTHOGONALITY_TOL = 1e-8

# a reciprocal coefficient below this relative size counts as zero
NEGLIGIBLE_COEFF_RTOL = 1e-14

# adaptive truncation ceiling for witness completions; any feasible
# completion already certifies, so the ceiling trades tightness for time
COMPLETION_M_CAP = 64


def _completion_options() -> SolverOptions:
    # the completion value only sharpens a bound, so a 1e-8 certificate and
    # a short smoothing ladder are plenty
    return SolverOptions(tol_residual=1e-8, max_iters=160,
                         smoothing_eps_start=1e-3, continuation_factor=0.01,
                         smoothing_eps_final=1e-10)


# -- Pythagorean inequalities ---------------------------------------------


@dataclass(frozen=True)
class PythagoreanParams:
    """Exponent r and weight K of one Pythagorean inequality at exponent p."""

    r: float
    K: float
    direction: str
    p: float


def pythagorean_params(p: float, direction: str) -> PythagoreanParams:
    """The applicable (r, K) pair; both directions coincide at p = 2.

    For p <= 2 the lower inequality is quadratic with weight p - 1 and the
    upper has exponent p with weight 1/(2^{p-1} - 1); for p >= 2 the roles
    swap.
    """
    p = float(p)
    if not np.isfinite(p) or p <= 1.0:
        raise InvalidArgumentError(f"p must satisfy 1 < p < inf, got {p}")
    if direction not in ("lower", "upper"):
        raise InvalidArgumentError(f"direction must be 'lower' or 'upper', got {direction!r}")
    sharp = 1.0 / (2.0 ** (p - 1.0) - 1.0)
    if p <= 2.0:
        r, K = ((2.0, p - 1.0) if direction == "lower" else (p, sharp))
    else:
        r, K = ((p, sharp) if direction == "lower" else (2.0, p - 1.0))
    return PythagoreanParams(r=r, K=K, direction=direction, p=p)


@dataclass(frozen=True)
class PythagoreanSlacks:
    """Inequality slacks for one orthogonal pair; both must be >= -1e-9."""

    lower_slack: float
    upper_slack: float
    hypothesis_residual: float


def pythagorean_check(x: BoundarySamples, y: BoundarySamples,
                      p: float) -> PythagoreanSlacks:
    """Slacks of both Pythagorean inequalities for a pair with x orthogonal to y.

    lower slack: ||x+y||_p^r - ||x||_p^r - K ||y||_p^r with the lower (r, K);
    upper slack: ||x||_p^r + K ||y||_p^r - ||x+y||_p^r with the upper pair.
    The orthogonality hypothesis is checked first and violations are
    rejected, naming the residual.
    """
    res = abs(complex(bj_residual(x, y, p)))
    if res > ORTHOGONALITY_TOL:
        raise InvalidArgumentError(
            f"x is not p-orthogonal to y: residual magnitude {res:.3e} "
            f"exceeds {ORTHOGONALITY_TOL:.0e}")
    lo = pythagorean_params(p, "lower")
    hi = pythagorean_params(p, "upper")
    nx = lp_norm(x, p)
    ny = lp_norm(y, p)
    ns = lp_norm(x + y, p)
    lower = ns ** lo.r - nx ** lo.r - lo.K * ny ** lo.r
    upper = nx ** hi.r + hi.K * ny ** hi.r - ns ** hi.r
    return PythagoreanSlacks(lower_slack=float(lower), upper_slack=float(upper),
                             hypothesis_residual=res)


def coefficient_inequality_slack(coeffs, p: float,
                                 grid: BoundaryGrid | None = None) -> float:
    """Slack of ||phi||_p^r >= sum_m K^m |phi_m|^r for an analytic polynomial.

    (r, K) are the lower Pythagorean parameters; the inequality follows
    from z^k being p-orthogonal to z^m H^p for m > k.  Nonnegative up to
    quadrature error.
    """
    grid = grid if grid is not None else default_grid()
    c = np.asarray(coeffs, dtype=complex).ravel()
    params = pythagorean_params(p, "lower")
    s = BoundarySamples(grid, npoly.polyval(grid.nodes, c))
    norm = lp_norm(s, p)
    rhs = float(np.sum(params.K ** np.arange(len(c)) * np.abs(c) ** params.r))
    return float(norm ** params.r - rhs)


# -- dual witnesses --------------------------------------------------------


@dataclass(frozen=True)
class DualWitness:
    """An L^q certificate: psi with psi_0 = 1 annihilating z^k f, k = 0..degree."""

    psi: BoundarySamples
    constraint_residuals: np.ndarray
    zeroth_coeff: complex
    degree: int

    def validate(self) -> None:
        if abs(self.zeroth_coeff - 1.0) > 1e-9:
            raise InvalidArgumentError(
                f"witness zeroth coefficient {self.zeroth_coeff} is not 1")
        res = np.asarray(self.constraint_residuals)
        if res.size and float(np.max(np.abs(res))) > ORTHOGONALITY_TOL:
            raise InvalidArgumentError(
                f"witness constraint residual {float(np.max(np.abs(res))):.3e} "
                f"exceeds {ORTHOGONALITY_TOL:.0e}")


def dual_feasible_value(witness: DualWitness, q_exponent: float) -> float:
    """1/||psi||_q, a certified lower bound on the error the witness targets."""
    q = float(q_exponent)
    if not np.isfinite(q) or q <= 1.0:
        raise InvalidArgumentError(f"q must satisfy 1 < q < inf, got {q}")
    witness.validate()
    return 1.0 / lp_norm(witness.psi, q)


def _taylor_head(f: TaylorSeries, count: int) -> np.ndarray:
    c = np.zeros(count, dtype=complex)
    take = min(count, len(f.coeffs))
    c[:take] = f.coeffs[:take]
    return c


def _require_normalized(fc: np.ndarray) -> None:
    if abs(fc[0] - 1.0) > 1e-9:
        raise InvalidArgumentError(
            f"requires f normalized so f(0) = 1, got constant term {fc[0]}")


def psi_toeplitz_system(f: TaylorSeries, n: int,
                        grid: BoundaryGrid | None = None) -> DualWitness:
    """Polynomial witness 1 + psi_1 z + ... + psi_n z^n from a Toeplitz solve.

    The conjugated coefficients x_m = conj(psi_m) satisfy the bordered
    system sum_m f_{m-k} x_m = -delta_{k0} for k = 0..n-1, which makes psi
    annihilate z^k f for k = 0..n-1: a witness for the degree-(n-1) error.
    """
    if n < 1:
        raise InvalidArgumentError("n must be at least 1")
    grid = grid if grid is not None else default_grid()
    fc = _taylor_head(f, n + 1)
    _require_normalized(fc)

    T = np.zeros((n, n), dtype=complex)
    for k in range(n):
        for m in range(1, n + 1):
            j = m - k
            T[k, m - 1] = fc[j] if j >= 0 else 0.0
    rhs = np.zeros(n, dtype=complex)
    rhs[0] = -1.0
    try:
        cond = float(np.linalg.cond(T))
        if not np.isfinite(cond) or cond > 1e14:
            raise SingularSystemError(
                f"witness system condition number {cond:.3e} is effectively singular")
        x = np.linalg.solve(T, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(f"witness system is singular: {exc}") from exc

    psi = np.concatenate([[1.0 + 0.0j], np.conj(x)])
    # exact constraint values from the Taylor algebra (psi has degree n, so
    # only f_0..f_n ever enter the pairing with z^k f)
    res = np.zeros(n, dtype=complex)
    for k in range(n):
        acc = 0.0 + 0.0j
        for m in range(n + 1):
            j = m - k
            if j >= 0:
                acc += fc[j] * np.conj(psi[m])
        res[k] = acc
    samples = BoundarySamples(grid, npoly.polyval(grid.nodes, psi))
    return DualWitness(psi=samples, constraint_residuals=res,
                       zeroth_coeff=complex(psi[0]), degree=n - 1)


def lower_bound_reciprocal(f: TaylorSeries, n: int, q_exponent: float,
                           grid: BoundaryGrid | None = None) -> float:
    """|g_n| / ||1 + g_1 z + ... + g_n z^n||_q with g the series of 1/f.

    A closed-form evaluation of the reciprocal-series witness; bounds the
    degree-(n-1) error from below.  Returns 0 when g_n = 0 (vacuous).
    """
    if n < 1:
        raise InvalidArgumentError("n must be at least 1")
    q = float(q_exponent)
    if not np.isfinite(q) or q <= 1.0:
        raise InvalidArgumentError(f"q must satisfy 1 < q < inf, got {q}")
    grid = grid if grid is not None else default_grid()
    fc = _taylor_head(f, n + 1)
    _require_normalized(fc)
    g = reciprocal_series(TaylorSeries(fc), n + 1).coeffs
    gmax = float(np.max(np.abs(g)))
    if abs(g[n]) <= NEGLIGIBLE_COEFF_RTOL * max(1.0, gmax):
        return 0.0
    norm = lp_norm(BoundarySamples(grid, npoly.polyval(grid.nodes, g)), q)
    return float(abs(g[n]) / norm)


def lower_bound_blaschke_zeros(zeros) -> float:
    """1 - prod |w_i| for disk zeros of f: a floor on the degree-0 error."""
    w = np.asarray(zeros, dtype=complex).ravel()
    if w.size == 0:
        raise InvalidArgumentError("at least one zero is required")
    mods = np.abs(w)
    if float(np.max(mods)) >= 1.0:
        raise InvalidArgumentError(
            f"zeros must lie strictly inside the disk, got modulus {float(np.max(mods)):.6g}")
    if float(np.min(mods)) == 0.0:
        raise InvalidArgumentError("zeros must be nonzero")
    return float(1.0 - np.prod(mods))


def anti_analytic_completion(F: BoundarySamples, q_exponent: float,
                             trunc_M: int,
                             options: SolverOptions | None = None):
    """Minimize ||F + conj(G)||_q over G = g_1 z + ... + g_M z^M.

    Returns (g, min_norm) with g the optimal coefficients of G.  The
    conjugate-analytic search directions are parametrized by u_m with
    conj(G) = sum u_m conj(z)^m, so the convex span minimizer applies
    verbatim; u recovers g by conjugation.  Never returns a value worse
    than the zero completion.
    """
    q = float(q_exponent)
    if not np.isfinite(q) or q <= 1.0:
        raise InvalidArgumentError(f"q must satisfy 1 < q < inf, got {q}")
    if not isinstance(F, BoundarySamples):
        raise InvalidArgumentError("F must be BoundarySamples")
    M = int(trunc_M)
    grid = F.grid
    if M < 1 or M >= grid.n_points // 2:
        raise InvalidArgumentError(
            f"trunc_M must lie in [1, {grid.n_points // 2 - 1}], got {M}")

    conj_nodes = np.conj(grid.nodes)
    B = conj_nodes[None, :] ** np.arange(1, M + 1)[:, None]
    t = -F.values
    opts = options if options is not None else _completion_options()
    u, info = minimize_in_span(B, t, q, options=opts)
    if not info.converged:
        warnings.warn(
            f"anti-analytic completion stopped with certificate "
            f"{info.certificate_max:.3e}", ConvergenceWarning, stacklevel=2)
    r = u @ B - t
    min_norm = lp_norm(BoundarySamples(grid, r), q)
    zero_norm = lp_norm(F, q)
    if min_norm > zero_norm:
        return np.zeros(M, dtype=complex), float(zero_norm)
    return np.conj(u), float(min_norm)


def improved_lower_bound(f: TaylorSeries, n: int, p: float,
                         trunc_M: int | None = None,
                         grid: BoundaryGrid | None = None,
                         options: SolverOptions | None = None) -> float:
    """Reciprocal-series witness sharpened by an anti-analytic completion.

    The base witness has coefficients psi_m = conj(g_{n-m}/g_n); adding
    conjugate-analytic terms preserves all pairing constraints exactly
    (an analytic integrand with zero mean), so 1/min_norm is still a
    certified bound for the degree-(n-1) error.  With trunc_M omitted the
    truncation starts at 4(n+1) and doubles until the norm settles within
    1e-6.
    """
    if n < 1:
        raise InvalidArgumentError("n must be at least 1")
    p = float(p)
    q = holder_conjugate(p)
    grid = grid if grid is not None else default_grid()
    fc = _taylor_head(f, n + 1)
    _require_normalized(fc)
    g = reciprocal_series(TaylorSeries(fc), n + 1).coeffs
    gmax = float(np.max(np.abs(g)))
    if abs(g[n]) <= NEGLIGIBLE_COEFF_RTOL * max(1.0, gmax):
        raise InvalidArgumentError("g_n = 0: the series witness is vacuous")
    psi = np.conj(g[::-1] / g[n])
    F = BoundarySamples(grid, npoly.polyval(grid.nodes, psi))

    if trunc_M is not None:
        _, min_norm = anti_analytic_completion(F, q, trunc_M, options)
        return 1.0 / min_norm

    cap = min(grid.n_points // 2 - 1, COMPLETION_M_CAP)
    M = min(4 * (n + 1), cap)
    prev = None
    while True:
        _, min_norm = anti_analytic_completion(F, q, M, options)
        if prev is not None and abs(min_norm - prev) < 1e-6:
            break
        prev = min_norm
        if M >= cap:
            break
        M = min(2 * M, cap)
    return 1.0 / min_norm


def lower_bound_inner(J: FiniteBlaschke, q_exponent: float,
                      grid: BoundaryGrid | None = None) -> float:
    """(1 - |J(0)|^2) / ||1 - conj(J(0)) J||_q for the inner part J of f.

    Degree-independent obstruction; at most 1, and 0 (vacuous) when the
    inner part is trivial.
    """
    q = float(q_exponent)
    if not np.isfinite(q) or q <= 1.0:
        raise InvalidArgumentError(f"q must satisfy 1 < q < inf, got {q}")
    if not isinstance(J, FiniteBlaschke):
        raise InvalidArgumentError("J must be a FiniteBlaschke")
    grid = grid if grid is not None else default_grid()
    j0 = J.at_zero()
    numerator = 1.0 - abs(j0) ** 2
    if numerator <= 1e-15:
        return 0.0
    s = evaluate_on_grid(J, grid)
    denom = lp_norm(BoundarySamples(grid, 1.0 - np.conj(j0) * s.values), q)
    return float(numerator / denom)


def lower_bound_h2_inner(J: FiniteBlaschke, p: float | None = None) -> float:
    """sqrt(1 - |J(0)|^2): the Hilbert-space inner obstruction, valid for p > 2."""
    if not isinstance(J, FiniteBlaschke):
        raise InvalidArgumentError("J must be a FiniteBlaschke")
    if p is not None and float(p) <= 2.0:
        warnings.warn("the Hilbert inner bound certifies the error only for p > 2",
                      UserWarning, stacklevel=2)
    j0 = abs(J.at_zero())
    return float(np.sqrt(max(0.0, 1.0 - j0 * j0)))


def upper_bound_p_lt_2(f, n: int, grid: BoundaryGrid | None = None,
                       p: float | None = None) -> float:
    """sqrt(1 - Re((q_2 f)(0))) with q_2 the Hilbert-space approximant.

    For 1 < p < 2 the p-error is dominated by the 2-error, and the
    Pythagorean identity turns the latter into the displayed root.  At
    p = 2 the value is the error itself; for p > 2 it certifies nothing
    (flagged).  Requires f(0) != 0.
    """
    if p is not None and float(p) > 2.0:
        warnings.warn("the projection upper bound certifies the error only for p <= 2",
                      UserWarning, stacklevel=2)
    grid = grid if grid is not None else default_grid()
    result = gram_solve_p2(f, n, grid=grid)
    fs = f if isinstance(f, BoundarySamples) else evaluate_on_grid(f, grid)
    f0 = complex(np.mean(fs.values))
    scale = float(np.max(np.abs(fs.values))) if fs.values.size else 0.0
    if abs(f0) <= 1e-13 * max(1.0, scale):
        raise InvalidArgumentError("f(0) must be nonzero")
    radicand = 1.0 - (result.coeffs[0] * f0).real
    if radicand < -1e-10:
        raise InconsistencyError(
            f"projection radicand {radicand:.3e} is negative beyond tolerance")
    if radicand < 0.0:
        warnings.warn(f"projection radicand {radicand:.3e} clamped to 0",
                      QuadratureAccuracyWarning, stacklevel=2)
        radicand = 0.0
    return float(np.sqrt(radicand))


# -- assembled certificates ------------------------------------------------


@dataclass(frozen=True)
class BoundEntry:
    """One certified bound value with the construction that produced it."""

    value: float
    provenance: str


@dataclass(frozen=True)
class BoundReport:
    """Certified sandwich for one (f, n, p) instance.

    Every lower value must sit below every upper value, and the computed
    error (when present) must land inside the sandwich; violations raise
    at construction since they mean a bound or the solver is wrong.
    """

    f_label: str
    degree: int
    p: float
    lower: tuple
    upper: tuple
    computed_error: float | None = None
    warnings: tuple = field(default=())

    def __post_init__(self):
        for lo in self.lower:
            for hi in self.upper:
                if lo.value > hi.value + 1e-8:
                    raise InconsistencyError(
                        f"lower bound {lo.value:.9g} ({lo.provenance}) exceeds "
                        f"upper bound {hi.value:.9g} ({hi.provenance})")
        if self.computed_error is not None:
            err = float(self.computed_error)
            for lo in self.lower:
                if lo.value - 1e-8 > err:
                    raise InconsistencyError(
                        f"lower bound {lo.value:.9g} ({lo.provenance}) exceeds "
                        f"computed error {err:.9g}")
            for hi in self.upper:
                if err > hi.value + 1e-8:
                    raise InconsistencyError(
                        f"computed error {err:.9g} exceeds upper bound "
                        f"{hi.value:.9g} ({hi.provenance})")

    @property
    def best_lower(self) -> float:
        return max((e.value for e in self.lower), default=0.0)

    @property
    def best_upper(self) -> float:
        return min((e.value for e in self.upper), default=float("inf"))

    def to_json_dict(self) -> dict:
        err = self.computed_error
        return {
            "f": self.f_label,
            "degree": self.degree,
            "p": self.p,
            "lower": [{"value": e.value, "provenance": e.provenance} for e in self.lower],
            "upper": [{"value": e.value, "provenance": e.provenance} for e in self.upper],
            "computed_error": None if err is None else float(err),
            "warnings": list(self.warnings),
        }


def _inner_part_of(f: HardyFunction) -> FiniteBlaschke:
    """Inner factor of f, read off the zero set of its analytic numerator."""
    if isinstance(f, FiniteBlaschke):
        return f
    if isinstance(f, Polynomial):
        return inner_part_of_polynomial(f.coeffs)[0]
    if isinstance(f, Rational):
        return inner_part_of_polynomial(f.num)[0]
    raise UnsupportedInputError(
        f"no inner-part rule for {type(f).__name__}")


def certify(f: HardyFunction, n: int, p: float,
            grid: BoundaryGrid | None = None,
            options: SolverOptions | None = None,
            inner_part: FiniteBlaschke | None = None,
            compute_error: bool = True) -> BoundReport:
    """Assemble every applicable bound for the degree-n error of f at exponent p.

    The error is invariant under f -> f/f(0), so witness constructions run
    on the normalized Taylor series.  Sub-constructions that fail on this
    instance are recorded as warnings rather than aborting the report.
    """
    if not isinstance(f, HardyFunction):
        raise InvalidArgumentError("f must be a HardyFunction")
    n = int(n)
    if n < 0:
        raise InvalidArgumentError(f"degree must be nonnegative, got {n}")
    p = float(p)
    q = holder_conjugate(p)
    grid = grid if grid is not None else default_grid()

    ts = taylor_coefficients(f, n + 2)
    scale = float(np.max(np.abs(ts.coeffs)))
    f0 = ts.coefficient(0)
    if abs(f0) <= 1e-13 * max(1.0, scale):
        raise InvalidArgumentError("f(0) must be nonzero to certify bounds")
    fn = TaylorSeries(ts.coeffs / f0)

    lower: list[BoundEntry] = []
    upper: list[BoundEntry] = []
    notes: list[str] = []
    m = n + 1  # witnesses for the degree-n error annihilate z^k f, k = 0..n

    try:
        v = lower_bound_reciprocal(fn, m, q, grid=grid)
        lower.append(BoundEntry(v, "reciprocal-series"))
        if v == 0.0:
            notes.append("reciprocal-series: vacuous (g_n = 0)")
    except OpaError as exc:
        notes.append(f"reciprocal-series: {exc}")

    try:
        v = improved_lower_bound(fn, m, p, grid=grid, options=options)
        lower.append(BoundEntry(v, "truncated-witness"))
    except OpaError as exc:
        notes.append(f"truncated-witness: {exc}")

    try:
        witness = psi_toeplitz_system(fn, m, grid=grid)
        lower.append(BoundEntry(dual_feasible_value(witness, q), "toeplitz-witness"))
    except OpaError as exc:
        notes.append(f"toeplitz-witness: {exc}")

    J = inner_part
    if J is None:
        try:
            J = _inner_part_of(f)
        except (UnsupportedInputError, InvalidArgumentError) as exc:
            notes.append(f"inner-part: {exc}")
    if J is not None:
        try:
            v = lower_bound_inner(J, q, grid=grid)
            lower.append(BoundEntry(v, "inner-quotient"))
            if v == 0.0:
                notes.append("inner-quotient: vacuous (trivial inner part)")
        except OpaError as exc:
            notes.append(f"inner-quotient: {exc}")
        if p > 2.0:
            try:
                lower.append(BoundEntry(lower_bound_h2_inner(J), "inner-h2"))
            except OpaError as exc:
                notes.append(f"inner-h2: {exc}")
        if n == 0 and len(J.zeros) > 0:
            try:
                lower.append(BoundEntry(lower_bound_blaschke_zeros(J.zeros),
                                        "blaschke-zeros"))
            except OpaError as exc:
                notes.append(f"blaschke-zeros: {exc}")

    if p <= 2.0:
        try:
            upper.append(BoundEntry(upper_bound_p_lt_2(f, n, grid=grid),
                                    "p2-projection-upper"))
        except OpaError as exc:
            notes.append(f"p2-projection-upper: {exc}")
    upper.append(BoundEntry(1.0, "trivial-ceiling"))

    err = None
    if compute_error:
        result = solve(f, n, p, method="auto", grid=grid, options=options)
        err = float(result.error)
        if not result.converged:
            notes.append("computed-error: solver did not converge")

    return BoundReport(f_label=format_function(f), degree=n, p=p,
                       lower=tuple(lower), upper=tuple(upper),
                       computed_error=err, warnings=tuple(notes))


__all__ = [
    "PythagoreanParams", "PythagoreanSlacks", "DualWitness", "BoundEntry",
    "BoundReport", "pythagorean_params", "pythagorean_check",
    "coefficient_inequality_slack", "dual_feasible_value",
    "psi_toeplitz_system", "lower_bound_reciprocal",
    "lower_bound_blaschke_zeros", "anti_analytic_completion",
    "improved_lower_bound", "lower_bound_inner", "lower_bound_h2_inner",
    "upper_bound_p_lt_2", "certify",
]
