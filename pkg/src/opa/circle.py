"""Quadrature, norms, Fourier analysis and dual pairings on the unit circle.

Everything lives on a uniform N-point grid of roots of unity (N a power of
two).  Integrals against normalized arc length become plain means over the
grid, which is spectrally accurate for smooth periodic integrands.  Norm and
pairing routines recompute themselves on a doubled grid (by trigonometric
interpolation) and emit ``QuadratureAccuracyWarning`` when the two values
disagree beyond the aliasing tolerance, so under-resolved integrands are
flagged instead of silently trusted.

All reductions go through numpy's pairwise summation or fixed-order einsum
contractions, so repeated runs produce bit-identical results.
"""

from __future__ import annotations

import functools
import numbers
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError, QuadratureAccuracyWarning

DEFAULT_GRID_LOG2 = 12
MIN_POINTS = 16

# Relative disagreement between the N-point and 2N-point quadratures that
# triggers a warning.
ALIASING_RTOL = 1e-8

# Values whose scale sits at rounding noise are exempt from the doubled-grid
# comparison: both quadratures are then noise and their ratio means nothing.
_NEGLIGIBLE = 1e-12


def holder_conjugate(p: float) -> float:
    """Dual exponent q with 1/p + 1/q = 1."""
    if not p > 1.0:
        raise InvalidArgumentError(f"exponent must satisfy p > 1, got {p}")
    return p / (p - 1.0)


@functools.lru_cache(maxsize=None)
def _grid_nodes(n: int) -> np.ndarray:
    theta = (2.0 * np.pi / n) * np.arange(n)
    z = np.exp(1j * theta)
    z.flags.writeable = False
    return z


@dataclass(frozen=True)
class BoundaryGrid:
    """Uniform grid of the n_points-th roots of unity, theta_j = 2 pi j / N."""

    n_points: int

    def __post_init__(self):
        n = self.n_points
        if not isinstance(n, (int, np.integer)) or n < MIN_POINTS or (n & (n - 1)) != 0:
            raise InvalidArgumentError(
                f"grid size must be a power of two >= {MIN_POINTS}, got {n!r}")

    @property
    def nodes(self) -> np.ndarray:
        return _grid_nodes(self.n_points)


def uniform_grid(n_points: int) -> BoundaryGrid:
    """Grid of the n_points-th roots of unity."""
    return BoundaryGrid(int(n_points))


def default_grid() -> BoundaryGrid:
    return uniform_grid(1 << DEFAULT_GRID_LOG2)


class BoundarySamples:
    """Complex samples of a boundary function on a BoundaryGrid.

    Immutable: values are copied on construction and marked read-only.
    Supports pointwise arithmetic with scalars and with samples on the same
    grid, which is all the algebra the solvers and tests need.
    """

    __slots__ = ("grid", "values")

    def __init__(self, grid: BoundaryGrid, values):
        v = np.asarray(values, dtype=complex)
        if v.ndim != 1 or v.shape[0] != grid.n_points:
            raise InvalidArgumentError(
                f"expected {grid.n_points} samples, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise InvalidArgumentError("samples contain non-finite values")
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", v)

    def __setattr__(self, name, value):
        raise AttributeError("BoundarySamples is immutable")

    def __len__(self) -> int:
        return self.grid.n_points

    def __repr__(self) -> str:
        return f"BoundarySamples(n={self.grid.n_points})"

    def _binary(self, other, op):
        if isinstance(other, BoundarySamples):
            _require_same_grid(self, other)
            return BoundarySamples(self.grid, op(self.values, other.values))
        if isinstance(other, numbers.Complex):
            return BoundarySamples(self.grid, op(self.values, complex(other)))
        return NotImplemented

    def __add__(self, other):
        return self._binary(other, np.add)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, np.subtract)

    def __rsub__(self, other):
        neg = BoundarySamples(self.grid, -self.values)
        return neg.__add__(other)

    def __mul__(self, other):
        return self._binary(other, np.multiply)

    __rmul__ = __mul__

    def __neg__(self):
        return BoundarySamples(self.grid, -self.values)

    def conjugate(self) -> "BoundarySamples":
        return BoundarySamples(self.grid, np.conj(self.values))


@dataclass(frozen=True)
class FourierCoeffs:
    """Coefficients c(k) for k = offset, offset+1, ..., offset+len(values)-1."""

    offset: int
    values: np.ndarray

    def coefficient(self, k: int) -> complex:
        i = k - self.offset
        if i < 0 or i >= len(self.values):
            raise InvalidArgumentError(f"frequency {k} outside stored range")
        return complex(self.values[i])


def _require_same_grid(a: BoundarySamples, b: BoundarySamples):
    if a.grid.n_points != b.grid.n_points:
        raise InvalidArgumentError(
            f"grid mismatch: {a.grid.n_points} vs {b.grid.n_points}")


def grid_mean(values) -> complex:
    if isinstance(values, BoundarySamples):
        values = values.values
    # np.mean reduces pairwise over contiguous arrays: deterministic.
    return complex(np.mean(values))


def trig_upsample(values: np.ndarray, factor: int = 2) -> np.ndarray:
    """Resample onto a factor-times-finer grid by trigonometric interpolation.

    Exact for band-limited samples (bandwidth below the Nyquist frequency);
    the aliased Nyquist bin is split evenly between +N/2 and -N/2.
    """
    if factor < 2:
        raise InvalidArgumentError("upsampling factor must be >= 2")
    v = np.asarray(values, dtype=complex)
    n = v.shape[0]
    c = np.fft.fft(v)
    m = n * factor
    out = np.zeros(m, dtype=complex)
    half = n // 2
    out[:half] = c[:half]
    out[m - half + 1:] = c[half + 1:]
    out[half] = 0.5 * c[half]
    out[m - half] += 0.5 * c[half]
    return np.fft.ifft(out) * factor


def _power_mean(values: np.ndarray, p: float) -> float:
    return float(np.mean(np.abs(values) ** p))


def lp_norm(s: BoundarySamples, p: float, *, check_aliasing: bool = True,
            aliasing_rtol: float = ALIASING_RTOL) -> float:
    """Grid L^p norm ((1/N) sum |v_j|^p)^(1/p) against normalized measure.

    Recomputes the power mean on a doubled grid and warns when the two
    disagree by more than ``aliasing_rtol`` relative (skipped for norms at
    rounding-noise scale, where the comparison is meaningless).
    """
    if not p > 1.0:
        raise InvalidArgumentError(f"exponent must satisfy p > 1, got {p}")
    mean_n = _power_mean(s.values, p)
    val = mean_n ** (1.0 / p)
    if check_aliasing:
        mean_2n = _power_mean(trig_upsample(s.values, 2), p)
        val2 = mean_2n ** (1.0 / p)
        scale = max(val, val2)
        floor = _NEGLIGIBLE * (1.0 + float(np.max(np.abs(s.values))))
        if scale > floor and abs(val - val2) > aliasing_rtol * scale:
            warnings.warn(
                f"L^{p} norm differs between N={s.grid.n_points} and 2N grids "
                f"({val:.6e} vs {val2:.6e}); integrand under-resolved",
                QuadratureAccuracyWarning, stacklevel=2)
    return val


def signed_power(s: BoundarySamples, t: float) -> BoundarySamples:
    """Pointwise signed power |v|^(t-1) * conj(v), with 0 mapped to 0.

    For t = 1 this is plain conjugation.  The convention 0 * (|0|^negative)
    = 0 makes the map well defined for every t > 0.
    """
    if not t > 0.0:
        raise InvalidArgumentError(f"power must satisfy t > 0, got {t}")
    v = s.values
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.abs(v) ** (t - 1.0) * np.conj(v)
    out[~np.isfinite(out)] = 0.0
    return BoundarySamples(s.grid, out)


def pairing(f: BoundarySamples, g: BoundarySamples) -> complex:
    """Dual pairing <f, g> = (1/N) sum f_j conj(g_j).

    Exact whenever the combined bandwidth of f * conj(g) stays below the
    grid size, which holds for all polynomial data used internally.
    """
    _require_same_grid(f, g)
    return grid_mean(f.values * np.conj(g.values))


def fourier_coefficients(s: BoundarySamples, k_min: int, k_max: int) -> FourierCoeffs:
    """Fourier coefficients c(k) = (1/N) sum v_j e^{-ik theta_j}, k_min..k_max."""
    if k_max < k_min:
        raise InvalidArgumentError("k_max must be >= k_min")
    n = s.grid.n_points
    if k_max - k_min >= n:
        raise InvalidArgumentError(
            f"frequency range width {k_max - k_min + 1} exceeds grid size {n}")
    c = np.fft.fft(s.values) / n
    ks = np.arange(k_min, k_max + 1)
    vals = c[np.mod(ks, n)]
    return FourierCoeffs(offset=int(k_min), values=vals)


def riesz_project(s: BoundarySamples) -> BoundarySamples:
    """Analytic (Riesz) projection: drop strictly negative frequencies.

    Grid frequencies m >= N/2 alias to negatives and are dropped as well, so
    the projection is idempotent and fixes analytic polynomial samples with
    bandwidth below N/2 exactly.
    """
    n = s.grid.n_points
    c = np.fft.fft(s.values)
    c[n // 2:] = 0.0
    return BoundarySamples(s.grid, np.fft.ifft(c))


def _bj_integrand(xv: np.ndarray, yv: np.ndarray, p: float) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.abs(xv) ** (p - 2.0) * np.conj(xv) * yv
    out[~np.isfinite(out)] = 0.0
    return out


def bj_residual(x: BoundarySamples, y: BoundarySamples, p: float, *,
                check_aliasing: bool = True,
                aliasing_rtol: float = ALIASING_RTOL) -> complex:
    """Orthogonality pairing (1/N) sum |x_j|^{p-2} conj(x_j) y_j.

    Vanishing of this quantity is the p-norm orthogonality condition
    certifying that x cannot be shortened by adding multiples of y.
    """
    if not p > 1.0:
        raise InvalidArgumentError(f"exponent must satisfy p > 1, got {p}")
    _require_same_grid(x, y)
    integrand = _bj_integrand(x.values, y.values, p)
    val = grid_mean(integrand)
    if check_aliasing:
        x2 = trig_upsample(x.values, 2)
        y2 = trig_upsample(y.values, 2)
        integrand2 = _bj_integrand(x2, y2, p)
        val2 = grid_mean(integrand2)
        mass = max(float(np.mean(np.abs(integrand))),
                   float(np.mean(np.abs(integrand2))))
        floor = _NEGLIGIBLE * (1.0 + float(np.max(np.abs(x.values)))) ** (p - 1.0) \
            * (1.0 + float(np.max(np.abs(y.values))))
        if mass > floor and abs(val - val2) > aliasing_rtol * mass:
            warnings.warn(
                f"orthogonality pairing differs between N={x.grid.n_points} "
                f"and 2N grids; integrand under-resolved",
                QuadratureAccuracyWarning, stacklevel=2)
    return val
