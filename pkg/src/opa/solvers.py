"""p-norm minimization in polynomial spans on the boundary circle.

The central routine minimizes ||a . B - t||_p over complex coefficient
vectors, where the rows of B sample span functions on a uniform boundary
grid.  An iteratively reweighted least-squares projection supplies the
search direction (for every 1 < p < inf that step is a descent direction
for the true objective, by Cauchy-Schwarz in the weighted inner product)
and a backtracking line search enforces monotone decrease.  For p < 2 the
objective is smoothed by a shrinking epsilon ladder; convergence is always
declared on the unsmoothed orthogonality certificate.

On top sit the optimal-approximant drivers: the direct Toeplitz solve at
p = 2, the general convex solve, and the degree-0/1 fixed-point iterations
with full diagnostic traces.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circle import (BoundaryGrid, BoundarySamples, bj_residual, default_grid,
                     grid_mean, lp_norm)
from .errors import (DegenerateSystemError, IllConditionedError,
                     InvalidArgumentError)
from .functions import HardyFunction, Polynomial, evaluate_on_grid

# relative threshold under which the constant Taylor coefficient counts as
# zero and the default-target approximant degenerates to q = 0, unit error
DEGENERATE_F0_RTOL = 1e-13

GRAM_CONDITION_LIMIT = 1e13

_MACHINE_EPS = float(np.finfo(float).eps)


@dataclass
class SolverOptions:
    """Iteration knobs; the defaults target 1e-10 certificates at N = 4096."""

    tol_residual: float = 1e-10
    max_iters: int = 500
    smoothing_eps_start: float = 1e-3
    continuation_factor: float = 0.1
    warm_start: bool = True
    smoothing_eps_final: float = 1e-12
    armijo_c1: float = 1e-4
    max_halvings: int = 60
    a_init: object = None

    def __post_init__(self):
        if not self.tol_residual > 0:
            raise InvalidArgumentError("tol_residual must be positive")
        if not 0.0 < self.continuation_factor < 1.0:
            raise InvalidArgumentError("continuation_factor must lie in (0, 1)")
        if self.max_iters < 1:
            raise InvalidArgumentError("max_iters must be positive")


@dataclass
class OpaProblem:
    """One approximation problem: minimize ||q f - target||_p, deg q <= degree."""

    f: object
    degree: int
    p: float
    target: object = None
    grid: BoundaryGrid | None = None
    options: SolverOptions | None = None


@dataclass(frozen=True)
class SpanSolveInfo:
    iterations: int
    converged: bool
    certificate_max: float
    flags: tuple = ()


@dataclass(frozen=True)
class OpaResult:
    """Solution of min ||q f - g||_p over polynomials of fixed degree."""

    coeffs: np.ndarray
    degree: int
    p: float
    error: float
    residuals: np.ndarray
    converged: bool
    iterations: int
    method: str
    grid_log2: int
    flags: tuple = ()

    @property
    def residual_max(self) -> float:
        if self.residuals.size == 0:
            return 0.0
        return float(np.max(np.abs(self.residuals)))


@dataclass
class FixedPointTrace:
    """Iterate history of a fixed-point run, initial point included.

    aux_a..aux_d hold the per-step system integrals of the degree-1 scheme
    and stay empty for degree 0.
    """

    iterates: list
    converged: bool
    flags: tuple = ()
    aux_a: tuple = ()
    aux_b: tuple = ()
    aux_c: tuple = ()
    aux_d: tuple = ()

    @property
    def iterations(self) -> int:
        return len(self.iterates) - 1


def _check_p(p: float) -> float:
    p = float(p)
    if not np.isfinite(p) or p <= 1.0:
        raise InvalidArgumentError(f"p must satisfy 1 < p < inf, got {p}")
    return p


def _signed_residual_weight(r: np.ndarray, p: float) -> np.ndarray:
    # |r|^{p-2} conj(r), set to 0 wherever r = 0 (the p < 2 power blows up)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.abs(r) ** (p - 2.0) * np.conj(r)
    return np.where(np.isfinite(out), out, 0.0 + 0.0j)


def _certificate(r: np.ndarray, basis: np.ndarray, p: float) -> np.ndarray:
    wc = _signed_residual_weight(r, p)
    return basis @ wc / basis.shape[1]


def objective_and_gradient(coeffs, basis_samples, g_samples, p: float,
                           eps: float = 0.0):
    """Value and complex gradient of mean((|a.B - g|^2 + eps^2)^(p/2)).

    Gradient component k is p * mean(u^{(p-2)/2} conj(R) B_k) with
    u = |R|^2 + eps^2, so stationarity of all components is exactly the
    grid orthogonality condition; in the real parametrization
    a_k = x_k + i y_k one has dF/dx_k = Re g_k and dF/dy_k = -Im g_k.
    """
    p = _check_p(p)
    B = np.atleast_2d(np.asarray(basis_samples, dtype=complex))
    g = np.asarray(g_samples, dtype=complex).ravel()
    a = np.asarray(coeffs, dtype=complex).ravel()
    r = a @ B - g
    u = np.abs(r) ** 2 + eps * eps
    value = float(np.mean(u ** (p / 2.0)))
    w = u ** ((p - 2.0) / 2.0)
    w = np.where(np.isfinite(w), w, 0.0)
    grad = p * (B @ (w * np.conj(r))) / B.shape[1]
    return value, grad


def _weighted_solve(B: np.ndarray, t: np.ndarray, w: np.ndarray):
    """Coefficients of the w-weighted least-squares projection of t on span(B).

    Solved through a QR factorization of the weighted sample matrix rather
    than the normal equations: the attainable coefficient accuracy then
    scales with cond(B) instead of cond(B)^2, which is what limits how far
    the orthogonality certificate can be driven down.  Returns None when
    the span is numerically rank-deficient; the caller then falls back to a
    gradient step.
    """
    s = np.sqrt(w)
    A = B.T * s[:, None]
    try:
        Q, R = np.linalg.qr(A, mode="reduced")
    except np.linalg.LinAlgError:
        return None
    diag = np.abs(np.diagonal(R))
    if diag.size == 0 or diag.min() <= 1e-14 * max(diag.max(), 1e-300):
        return None
    return np.linalg.solve(R, np.conj(Q.T) @ (t * s))


def _eps_ladder(opts: SolverOptions) -> list:
    out = []
    e = opts.smoothing_eps_start
    while e > opts.smoothing_eps_final * (1.0 + 1e-9):
        out.append(e)
        e *= opts.continuation_factor
    out.append(opts.smoothing_eps_final)
    return out


def _objective_at(a, B, t, p, eps) -> float:
    r = a @ B - t
    return float(np.mean((np.abs(r) ** 2 + eps * eps) ** (p / 2.0)))


def minimize_in_span(basis, target, p: float,
                     options: SolverOptions | None = None, a_init=None):
    """argmin_a ||a . basis - target||_p on the grid; returns (a, SpanSolveInfo).

    basis is an (m, N) array of span-function samples, target an (N,)
    array.  Convergence means the unsmoothed certificate
    mean(|R|^{p-2} conj(R) B_k) is below tol_residual in max norm, the
    first-order optimality condition of the unsmoothed problem.
    """
    p = _check_p(p)
    opts = options if options is not None else SolverOptions()
    B = np.atleast_2d(np.asarray(basis, dtype=complex))
    t = np.asarray(target, dtype=complex).ravel()
    if B.shape[1] != t.shape[0]:
        raise InvalidArgumentError("basis and target grid lengths differ")
    if not (np.all(np.isfinite(B)) and np.all(np.isfinite(t))):
        raise InvalidArgumentError("basis or target contains non-finite values")
    m, n = B.shape
    if a_init is None:
        a_init = opts.a_init

    if a_init is not None:
        a = np.asarray(a_init, dtype=complex).ravel().copy()
        if a.shape[0] != m:
            raise InvalidArgumentError("a_init length does not match basis rows")
    elif opts.warm_start:
        a = _weighted_solve(B, t, np.ones(n))
        if a is None:
            a = np.zeros(m, dtype=complex)
    else:
        a = np.zeros(m, dtype=complex)

    stages = [0.0] if p >= 2.0 else _eps_ladder(opts)
    flags: list = []
    total = 0
    converged = False
    cert_max = np.inf

    for si, eps in enumerate(stages):
        final = si == len(stages) - 1
        cap = opts.max_iters if final else max(8, opts.max_iters // 16)
        stage_iters = 0
        stage_done = False
        # Once the per-step decrease of F falls below its double-precision
        # rounding noise, Armijo decisions degenerate into coin flips; the
        # loop then switches to a damped fixed-point tail a <- a + (2/p) d
        # governed by the certificate alone.  The damped map contracts the
        # coefficient error near the optimum for every p (worst
        # linearization factor |p-2|/p), though not monotonically, so the
        # tail keeps the best iterate and stops on exhausted patience.
        cert_phase = False
        entry_cert = np.inf
        best_a = a
        best_cert = np.inf
        since_best = 0
        value_prev = np.inf
        while True:
            r = a @ B - t
            cert_max = float(np.max(np.abs(_certificate(r, B, p))))
            if cert_phase:
                if cert_max < 0.999 * best_cert:
                    best_a, best_cert, since_best = a, cert_max, 0
                else:
                    since_best += 1
            if cert_max <= opts.tol_residual:
                converged = True
                break
            if stage_done or stage_iters >= cap or total >= opts.max_iters:
                break
            if cert_phase and (since_best >= 30 or cert_max > 100.0 * entry_cert):
                if "certificate-floor" not in flags:
                    flags.append("certificate-floor")
                break

            u = np.abs(r) ** 2 + eps * eps
            w = u ** ((p - 2.0) / 2.0)
            a_star = _weighted_solve(B, t, w)

            if cert_phase:
                if a_star is None:
                    if "weighted-system-ill-conditioned" not in flags:
                        flags.append("weighted-system-ill-conditioned")
                    break
                a = a + (2.0 / max(p, 2.0)) * (a_star - a)
                total += 1
                stage_iters += 1
                continue

            value = float(np.mean(u ** (p / 2.0)))
            grad = p * (B @ (w * np.conj(r))) / n
            if a_star is None:
                if "weighted-system-ill-conditioned" not in flags:
                    flags.append("weighted-system-ill-conditioned")
                d = -np.conj(grad)
            else:
                d = a_star - a
            dirderiv = float(np.real(grad @ d))
            if dirderiv >= -1e-18 * (1.0 + abs(value)):
                a_star = None
                d = -np.conj(grad)
                dirderiv = float(np.real(grad @ d))
                if dirderiv >= -1e-30:
                    break  # stationary at this smoothing level

            if p < 2.0 and a_star is not None:
                # For p < 2 the reweighted quadratic majorizes the smoothed
                # p-energy (u -> (u + eps^2)^{p/2} is concave in u), so the
                # full step cannot increase it.  Taking it without a line
                # search matters near the optimum, where the per-step
                # decrease falls below what Armijo can resolve in double
                # precision; the slack only rejects rounding-scale blowups.
                mm_ok = (_objective_at(a_star, B, t, p, eps)
                         <= value + 1e-12 * (1.0 + abs(value)))
                mm_flat = value_prev - value <= 100.0 * _MACHINE_EPS * (1.0 + abs(value))
                value_prev = value
                if mm_ok and not (final and mm_flat):
                    move = float(np.max(np.abs(d)))
                    a = a_star
                    total += 1
                    stage_iters += 1
                    if not final and move <= max(opts.tol_residual, 1e-2 * eps):
                        stage_done = True
                    continue
                if final:
                    # objective progress (or the accept test itself) is down
                    # to rounding noise: hand over to the certificate tail
                    cert_phase = True
                    entry_cert = cert_max
                    best_a, best_cert, since_best = a, cert_max, 0
                    a = a_star
                    total += 1
                    stage_iters += 1
                    continue
                stage_done = True
                continue

            if (a_star is not None
                    and abs(dirderiv) <= 100.0 * _MACHINE_EPS * (1.0 + abs(value))):
                cert_phase = True
                entry_cert = cert_max
                best_a, best_cert, since_best = a, cert_max, 0
                a = a + (2.0 / max(p, 2.0)) * (a_star - a)
                total += 1
                stage_iters += 1
                continue

            step = 1.0
            accepted = False
            for _ in range(opts.max_halvings):
                cand = a + step * d
                if float(np.max(np.abs(step * d))) <= 1e-17 * (1.0 + float(np.max(np.abs(a)))):
                    break  # the update would be a floating-point no-op
                if _objective_at(cand, B, t, p, eps) <= value + opts.armijo_c1 * step * dirderiv:
                    accepted = True
                    break
                step *= 0.5
            if not accepted:
                if "line-search-stall" not in flags:
                    flags.append("line-search-stall")
                break

            move = float(np.max(np.abs(step * d)))
            a = a + step * d
            total += 1
            stage_iters += 1
            if not final and move <= max(opts.tol_residual, 1e-2 * eps):
                stage_done = True
        if cert_phase and best_cert < cert_max:
            a = best_a
            cert_max = best_cert
        if converged:
            break

    if not converged:
        flags.append("nonconverged")
    return a, SpanSolveInfo(iterations=total, converged=converged,
                            certificate_max=cert_max, flags=tuple(flags))


def _samples_of(f, grid: BoundaryGrid) -> BoundarySamples:
    if isinstance(f, BoundarySamples):
        if f.grid.n_points != grid.n_points:
            raise InvalidArgumentError("sample grid does not match solver grid")
        return f
    if isinstance(f, HardyFunction):
        return evaluate_on_grid(f, grid)
    raise InvalidArgumentError(
        f"expected a HardyFunction or BoundarySamples, got {type(f).__name__}")


def _basis_matrix(fs: np.ndarray, nodes: np.ndarray, n: int) -> np.ndarray:
    # rows z^k f(z), k = 0..n
    powers = nodes[None, :] ** np.arange(n + 1)[:, None]
    return powers * fs[None, :]


def _grid_log2(grid: BoundaryGrid) -> int:
    return int(round(np.log2(grid.n_points)))


def _check_degree(n, grid: BoundaryGrid) -> int:
    if not isinstance(n, (int, np.integer)) or n < 0:
        raise InvalidArgumentError(f"degree must be a nonnegative integer, got {n!r}")
    if n + 1 > grid.n_points // 4:
        raise InvalidArgumentError(
            f"degree {n} too large for a grid of {grid.n_points} points")
    return int(n)


def solve_general(problem: OpaProblem) -> OpaResult:
    """Optimal approximant coefficients by convex descent, any 1 < p < inf.

    Minimizes ||q f - g||_p with g = 1 by default.  When the mean of f
    vanishes and g = 1 (no polynomial multiple of f has a constant term)
    the problem degenerates to q = 0 with unit error; that case is
    returned exactly and flagged rather than iterated.
    """
    p = _check_p(problem.p)
    grid = problem.grid if problem.grid is not None else default_grid()
    n = _check_degree(problem.degree, grid)
    opts = problem.options if problem.options is not None else SolverOptions()
    s = _samples_of(problem.f, grid)
    fs = s.values
    scale = float(np.max(np.abs(fs)))
    if scale == 0.0:
        raise InvalidArgumentError("f vanishes identically on the grid")

    if problem.target is None:
        t = np.ones(grid.n_points, dtype=complex)
        default_target = True
    else:
        t = _samples_of(problem.target, grid).values \
            if isinstance(problem.target, (BoundarySamples, HardyFunction)) \
            else np.asarray(problem.target, dtype=complex).ravel()
        if t.shape[0] != grid.n_points:
            raise InvalidArgumentError("target length does not match grid")
        default_target = False

    f0 = complex(grid_mean(s))
    if default_target and abs(f0) <= DEGENERATE_F0_RTOL * scale:
        coeffs = np.zeros(n + 1, dtype=complex)
        err = lp_norm(BoundarySamples(grid, -t), p)
        return OpaResult(coeffs=coeffs, degree=n, p=p, error=err,
                         residuals=np.zeros(n + 1, dtype=complex), converged=True,
                         iterations=0, method="convex", grid_log2=_grid_log2(grid),
                         flags=("degenerate-f0",))

    B = _basis_matrix(fs, grid.nodes, n)
    a, info = minimize_in_span(B, t, p, options=opts)
    r = a @ B - t
    err = lp_norm(BoundarySamples(grid, r), p)
    residuals = _certificate(r, B, p)
    return OpaResult(coeffs=a, degree=n, p=p, error=err, residuals=residuals,
                     converged=info.converged, iterations=info.iterations,
                     method="convex", grid_log2=_grid_log2(grid), flags=info.flags)


def gram_solve_p2(f, n: int, grid: BoundaryGrid | None = None) -> OpaResult:
    """Degree-n approximant at p = 2 from the Toeplitz normal equations.

    The Gram matrix of the span functions z^k f is Toeplitz in the Fourier
    coefficients of |f|^2, and the right-hand side is conj(mean f) in the
    first slot and zero elsewhere.
    """
    grid = grid if grid is not None else default_grid()
    n = _check_degree(n, grid)
    s = _samples_of(f, grid)
    fs = s.values
    if float(np.max(np.abs(fs))) == 0.0:
        raise InvalidArgumentError("f vanishes identically on the grid")

    npts = grid.n_points
    h = np.abs(fs) ** 2
    hh = np.fft.fft(h) / npts
    idx = np.subtract.outer(np.arange(n + 1), np.arange(n + 1)) % npts
    A = hh[idx]
    A = 0.5 * (A + A.conj().T)  # h is real; enforce exact Hermitian symmetry
    rhs = np.zeros(n + 1, dtype=complex)
    rhs[0] = np.conj(grid_mean(s))

    cond = float(np.linalg.cond(A))
    if not np.isfinite(cond) or cond > GRAM_CONDITION_LIMIT:
        raise IllConditionedError(
            f"normal equations condition number {cond:.3e} exceeds "
            f"{GRAM_CONDITION_LIMIT:.1e}")
    a = np.linalg.solve(A, rhs)

    B = _basis_matrix(fs, grid.nodes, n)
    r = a @ B - 1.0
    err = lp_norm(BoundarySamples(grid, r), 2.0)
    residuals = _certificate(r, B, 2.0)
    return OpaResult(coeffs=a, degree=n, p=2.0, error=err, residuals=residuals,
                     converged=True, iterations=0, method="gram2",
                     grid_log2=_grid_log2(grid), flags=())


def orthogonality_residuals(q_coeffs, f, p: float,
                            grid: BoundaryGrid | None = None) -> np.ndarray:
    """Certificate integrals mean(|R|^{p-2} conj(R) z^k f) for R = q f - 1.

    Component k is the p-orthogonality defect of R against the span
    function z^k f, k = 0..deg(q); all components vanish at the optimum.
    """
    p = _check_p(p)
    grid = grid if grid is not None else default_grid()
    q = np.asarray(q_coeffs, dtype=complex).ravel()
    if q.size == 0:
        raise InvalidArgumentError("q_coeffs must be nonempty")
    s = _samples_of(f, grid)
    B = _basis_matrix(s.values, grid.nodes, q.size - 1)
    r = q @ B - 1.0
    rs = BoundarySamples(grid, r)
    out = np.empty(q.size, dtype=complex)
    for k in range(q.size):
        out[k] = bj_residual(rs, BoundarySamples(grid, B[k]), p)
    return out


# -- fixed-point iterations for degrees 0 and 1 ---------------------------


def _fp_weight(r: np.ndarray, p: float) -> np.ndarray:
    mod = np.abs(r)
    if p < 2.0:
        mod = np.maximum(mod, 1e-200)
    return mod ** (p - 2.0)


def _fp_flags(f, fs: np.ndarray, f0: complex, p: float) -> list:
    flags = []
    if p <= 2.0:
        flags.append("experimental-p<=2")
    if isinstance(f, HardyFunction) and not isinstance(f, Polynomial):
        flags.append("nonpolynomial-f")
    if isinstance(f, Polynomial) and f.degree == 0:
        flags.append("constant-f")
    if abs(f0) <= DEGENERATE_F0_RTOL * float(np.max(np.abs(fs))):
        flags.append("degenerate-f0")
    return flags


def _auto_damping(p: float) -> float:
    # The map's linearization at the fixed point has analytic part exactly
    # -(p-2)/2 and conjugate-linear part of modulus <= (p-2)/2, so the pure
    # iteration can expand (worst eigenvalue -(p-2)).  Averaging with weight
    # t = (p-2)/p caps the spectral radius at (p-2)/p < 1 for every p > 2
    # and leaves the fixed-point set untouched.
    return max(0.0, (p - 2.0) / p)


def fixed_point_degree0(f, p: float, lam_init: complex = 0.0, tol: float = 1e-10,
                        max_iters: int = 500, grid: BoundaryGrid | None = None,
                        damping: float | None = None):
    """Iterate lam -> mean(w conj f) / mean(w |f|^2) with w = |1 - lam f|^{p-2}.

    The map's fixed point is the degree-0 approximant coefficient; for
    p <= 2 the run is flagged experimental (convergence is only guaranteed
    for p > 2).  Each step averages the map value with the current iterate
    (weight (p-2)/p on the iterate) because the raw map oscillates
    divergently once p > 3; pass damping=0.0 to force the raw scheme.
    Damping does not move the fixed points.  Returns (lam, trace).
    """
    p = _check_p(p)
    if damping is None:
        damping = _auto_damping(p)
    grid = grid if grid is not None else default_grid()
    s = _samples_of(f, grid)
    fs = s.values
    if float(np.max(np.abs(fs))) == 0.0:
        raise InvalidArgumentError("f vanishes identically on the grid")
    flags = _fp_flags(f, fs, complex(grid_mean(s)), p)

    lam = complex(lam_init)
    iterates = [np.array([lam], dtype=complex)]
    converged = False
    af2 = np.abs(fs) ** 2
    for _ in range(max_iters):
        r = lam * fs - 1.0
        w = _fp_weight(r, p)
        den = float(np.mean(w * af2))
        if den <= 1e-300:
            raise DegenerateSystemError("weighted mass of |f|^2 vanished")
        lam_new = complex(np.mean(w * np.conj(fs))) / den
        if damping:
            lam_new = (1.0 - damping) * lam_new + damping * lam
        move = abs(lam_new - lam)
        lam = lam_new
        iterates.append(np.array([lam], dtype=complex))
        r = lam * fs - 1.0
        cert = abs(complex(np.mean(_signed_residual_weight(r, p) * fs)))
        if move <= tol and cert <= 10.0 * tol:
            converged = True
            break
    if not converged:
        flags = flags + ["nonconverged"]
    trace = FixedPointTrace(iterates=iterates, converged=converged,
                            flags=tuple(flags))
    return lam, trace


def fixed_point_degree1(f, p: float, q_init=(0.0, 0.0), tol: float = 1e-10,
                        max_iters: int = 500, grid: BoundaryGrid | None = None,
                        damping: float | None = None):
    """Degree-1 fixed-point iteration on the coefficients of q = a + b z.

    Each step assembles the weighted system
        [[C, conj(D)], [D, C]] [a, b] = [A, B]
    with A = mean(w conj f), B = mean(w conj(z f)), C = mean(w |f|^2),
    D = mean(w conj(z) |f|^2), w = |q f - 1|^{p-2}, and inverts it exactly
    with determinant C^2 - |D|^2 (the Gram determinant of {f, zf} in the
    weighted inner product, positive whenever the system is nondegenerate).
    Steps are averaged with weight (p-2)/p on the current iterate, exactly
    as in the degree-0 scheme and for the same stability reason; pass
    damping=0.0 for the raw update.  Returns ((a, b), trace); the trace
    records the per-step integrals.
    """
    p = _check_p(p)
    if damping is None:
        damping = _auto_damping(p)
    grid = grid if grid is not None else default_grid()
    s = _samples_of(f, grid)
    fs = s.values
    if float(np.max(np.abs(fs))) == 0.0:
        raise InvalidArgumentError("f vanishes identically on the grid")
    flags = _fp_flags(f, fs, complex(grid_mean(s)), p)

    nodes = grid.nodes
    zf = nodes * fs
    af2 = np.abs(fs) ** 2
    a, b = complex(q_init[0]), complex(q_init[1])
    iterates = [np.array([a, b], dtype=complex)]
    aux_a, aux_b, aux_c, aux_d = [], [], [], []
    converged = False
    for _ in range(max_iters):
        r = (a + b * nodes) * fs - 1.0
        w = _fp_weight(r, p)
        A = complex(np.mean(w * np.conj(fs)))
        Bv = complex(np.mean(w * np.conj(zf)))
        C = float(np.mean(w * af2).real)
        D = complex(np.mean(w * np.conj(nodes) * af2))
        aux_a.append(A)
        aux_b.append(Bv)
        aux_c.append(C)
        aux_d.append(D)
        size = C * C + abs(D) ** 2
        if size < 1e-14:
            raise DegenerateSystemError("weighted normal system vanished")
        det = C * C - abs(D) ** 2
        if det <= 1e-14 * size:
            raise DegenerateSystemError(
                f"weighted normal system is singular (det {det:.3e})")
        a_new = (C * A - np.conj(D) * Bv) / det
        b_new = (C * Bv - D * A) / det
        if damping:
            a_new = (1.0 - damping) * a_new + damping * a
            b_new = (1.0 - damping) * b_new + damping * b
        move = max(abs(a_new - a), abs(b_new - b))
        a, b = complex(a_new), complex(b_new)
        iterates.append(np.array([a, b], dtype=complex))
        r = (a + b * nodes) * fs - 1.0
        wc = _signed_residual_weight(r, p)
        cert = max(abs(complex(np.mean(wc * fs))), abs(complex(np.mean(wc * zf))))
        if move <= tol and cert <= 10.0 * tol:
            converged = True
            break
    if not converged:
        flags = flags + ["nonconverged"]
    trace = FixedPointTrace(iterates=iterates, converged=converged,
                            flags=tuple(flags), aux_a=tuple(aux_a),
                            aux_b=tuple(aux_b), aux_c=tuple(aux_c),
                            aux_d=tuple(aux_d))
    return (a, b), trace


def solve(f, n: int, p: float, method: str = "auto",
          grid: BoundaryGrid | None = None,
          options: SolverOptions | None = None) -> OpaResult:
    """Front door: dispatch by method name {auto, gram2, convex, fixed-point}.

    "auto" picks the direct p = 2 solve when p == 2 and the convex solver
    otherwise.  "gram2" demands p == 2; "fixed-point" demands degree <= 1.
    """
    p = _check_p(p)
    grid = grid if grid is not None else default_grid()
    if method == "auto":
        method = "gram2" if p == 2.0 else "convex"
    if method == "gram2":
        if p != 2.0:
            raise InvalidArgumentError("method gram2 requires p = 2")
        return gram_solve_p2(f, n, grid=grid)
    if method == "convex":
        return solve_general(OpaProblem(f=f, degree=n, p=p, grid=grid,
                                        options=options))
    if method == "fixed-point":
        n = _check_degree(n, grid)
        if n > 1:
            raise InvalidArgumentError(
                "method fixed-point supports degrees 0 and 1 only")
        opts = options if options is not None else SolverOptions()
        if n == 0:
            lam, trace = fixed_point_degree0(f, p, tol=opts.tol_residual,
                                             max_iters=opts.max_iters, grid=grid)
            coeffs = np.array([lam], dtype=complex)
            tag = "fixed_point0"
        else:
            (a, b), trace = fixed_point_degree1(f, p, tol=opts.tol_residual,
                                                max_iters=opts.max_iters, grid=grid)
            coeffs = np.array([a, b], dtype=complex)
            tag = "fixed_point1"
        s = _samples_of(f, grid)
        B = _basis_matrix(s.values, grid.nodes, n)
        r = coeffs @ B - 1.0
        err = lp_norm(BoundarySamples(grid, r), p)
        residuals = _certificate(r, B, p)
        return OpaResult(coeffs=coeffs, degree=n, p=p, error=err,
                         residuals=residuals, converged=trace.converged,
                         iterations=trace.iterations, method=tag,
                         grid_log2=_grid_log2(grid), flags=trace.flags)
    raise InvalidArgumentError(f"unknown method {method!r}")


__all__ = [
    "SolverOptions", "OpaProblem", "SpanSolveInfo", "OpaResult",
    "FixedPointTrace", "minimize_in_span", "solve_general", "gram_solve_p2",
    "solve", "fixed_point_degree0", "fixed_point_degree1",
    "orthogonality_residuals", "objective_and_gradient",
]
