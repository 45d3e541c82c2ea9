"""Boundary-function representations and symbolic helpers.

Three concrete representations cover everything the solvers accept:
polynomials, rational functions analytic across the closed unit disk, and
finite Blaschke products.  Arithmetic between them closes over these types
(sums and general products canonicalize to Rational; products of Blaschke
factors stay Blaschke), so composite expressions remain exactly evaluable.

Also here: Taylor extraction through boundary FFT, reciprocal power series,
companion-matrix root finding, the inner/outer split of a polynomial, and a
small expression grammar with a canonical printer.
"""

from __future__ import annotations

import numbers
import re
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly

from .circle import (BoundaryGrid, BoundarySamples, default_grid,
                     fourier_coefficients)
from .errors import InvalidArgumentError, ParseError, UnsupportedInputError

# A rational denominator (and any divisor) must keep its roots at least this
# far outside the closed unit disk.
DEN_ROOT_MARGIN = 1e-6

# Roots this close to the unit circle cannot be classified as inner or outer.
BOUNDARY_TOL = 1e-6


def _as_coeffs(c) -> np.ndarray:
    a = np.atleast_1d(np.asarray(c, dtype=complex))
    if a.ndim != 1 or a.size == 0:
        raise InvalidArgumentError("coefficients must be a nonempty 1-d sequence")
    if not np.all(np.isfinite(a)):
        raise InvalidArgumentError("coefficients contain non-finite values")
    return a


def _trim(c: np.ndarray) -> np.ndarray:
    # strip exactly-zero trailing coefficients, keep at least the constant
    nz = np.nonzero(c)[0]
    if nz.size == 0:
        return c[:1].copy()
    return c[:nz[-1] + 1].copy()


class HardyFunction:
    """A function analytic on the closed unit disk (boundary-evaluable).

    Subclasses implement pointwise evaluation, conversion to a ratio of
    polynomials, and rotation z -> gamma*z.  Arithmetic operators build new
    HardyFunctions; division requires the divisor to be zero-free on the
    closed disk (enforced by the Rational constructor).
    """

    def _evaluate(self, z: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _as_num_den(self) -> tuple[np.ndarray, np.ndarray]:
        raise NotImplementedError

    def rotate(self, gamma: complex) -> "HardyFunction":
        """The function z -> f(gamma z) for unimodular gamma."""
        raise NotImplementedError

    def evaluate(self, z):
        arr = np.asarray(z, dtype=complex)
        scalar = arr.ndim == 0
        out = self._evaluate(np.atleast_1d(arr))
        return complex(out[0]) if scalar else out

    __call__ = evaluate

    def at_zero(self) -> complex:
        return complex(self.evaluate(0.0))

    # -- arithmetic -------------------------------------------------------

    @staticmethod
    def _coerce(other):
        if isinstance(other, HardyFunction):
            return other
        if isinstance(other, numbers.Complex):
            return Polynomial([complex(other)])
        return None

    def __add__(self, other):
        g = self._coerce(other)
        if g is None:
            return NotImplemented
        n1, d1 = self._as_num_den()
        n2, d2 = g._as_num_den()
        num = npoly.polyadd(npoly.polymul(n1, d2), npoly.polymul(n2, d1))
        return _make_rational(num, npoly.polymul(d1, d2))

    __radd__ = __add__

    def __neg__(self):
        num, den = self._as_num_den()
        return _make_rational(-num, den)

    def __sub__(self, other):
        g = self._coerce(other)
        if g is None:
            return NotImplemented
        return self.__add__(-g)

    def __rsub__(self, other):
        g = self._coerce(other)
        if g is None:
            return NotImplemented
        return g.__add__(-self)

    def __mul__(self, other):
        g = self._coerce(other)
        if g is None:
            return NotImplemented
        if isinstance(self, FiniteBlaschke) and isinstance(g, FiniteBlaschke):
            return FiniteBlaschke(np.concatenate([self.zeros, g.zeros]),
                                  self.unimodular_constant * g.unimodular_constant)
        n1, d1 = self._as_num_den()
        n2, d2 = g._as_num_den()
        return _make_rational(npoly.polymul(n1, n2), npoly.polymul(d1, d2))

    __rmul__ = __mul__

    def __truediv__(self, other):
        g = self._coerce(other)
        if g is None:
            return NotImplemented
        n1, d1 = self._as_num_den()
        n2, d2 = g._as_num_den()
        # divisor numerator becomes a denominator factor; the Rational
        # constructor rejects it if it vanishes on the closed disk
        return _make_rational(npoly.polymul(n1, d2), npoly.polymul(d1, n2))

    def __rtruediv__(self, other):
        g = self._coerce(other)
        if g is None:
            return NotImplemented
        return g.__truediv__(self)

    def __pow__(self, k):
        if not isinstance(k, (int, np.integer)) or k < 0:
            raise InvalidArgumentError("exponent must be a nonnegative integer")
        out: HardyFunction = Polynomial([1.0])
        for _ in range(int(k)):
            out = out * self
        return out


class Polynomial(HardyFunction):
    """Analytic polynomial c_0 + c_1 z + ... (ascending coefficients)."""

    def __init__(self, coeffs):
        c = _trim(_as_coeffs(coeffs))
        c.flags.writeable = False
        self.coeffs = c

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def _evaluate(self, z):
        return npoly.polyval(z, self.coeffs)

    def _as_num_den(self):
        return self.coeffs.copy(), np.ones(1, dtype=complex)

    def rotate(self, gamma):
        g = _check_unimodular(gamma)
        return Polynomial(self.coeffs * g ** np.arange(len(self.coeffs)))

    def __repr__(self):
        return f"Polynomial({list(self.coeffs)})"


class Rational(HardyFunction):
    """Ratio of polynomials whose denominator is root-free on the closed disk.

    The denominator condition is checked at construction by computing its
    roots and requiring every modulus to exceed 1 + DEN_ROOT_MARGIN, so the
    function is analytic on a neighborhood of the closed disk.
    """

    def __init__(self, num, den):
        n = _trim(_as_coeffs(num))
        d = _trim(_as_coeffs(den))
        if np.max(np.abs(d)) == 0.0:
            raise InvalidArgumentError("denominator is the zero polynomial")
        if len(d) > 1:
            roots = polynomial_roots(d)
            closest = float(np.min(np.abs(roots))) if roots.size else np.inf
            if closest <= 1.0 + DEN_ROOT_MARGIN:
                raise InvalidArgumentError(
                    f"denominator root at modulus {closest:.8g} lies in or too "
                    f"near the closed unit disk")
        n.flags.writeable = False
        d.flags.writeable = False
        self.num = n
        self.den = d

    def _evaluate(self, z):
        return npoly.polyval(z, self.num) / npoly.polyval(z, self.den)

    def _as_num_den(self):
        return self.num.copy(), self.den.copy()

    def rotate(self, gamma):
        g = _check_unimodular(gamma)
        return Rational(self.num * g ** np.arange(len(self.num)),
                        self.den * g ** np.arange(len(self.den)))

    def __repr__(self):
        return f"Rational({list(self.num)}, {list(self.den)})"


class FiniteBlaschke(HardyFunction):
    """c * prod (w_k - z)/(1 - conj(w_k) z) with |w_k| < 1 and |c| = 1.

    Evaluation multiplies the factors directly, so boundary values stay
    unimodular to rounding accuracy regardless of the number of zeros.
    """

    def __init__(self, zeros=(), unimodular_constant=1.0):
        w = np.asarray(zeros, dtype=complex).ravel()
        if w.size and float(np.max(np.abs(w))) >= 1.0:
            raise InvalidArgumentError("Blaschke zeros must lie in the open unit disk")
        c = complex(unimodular_constant)
        if abs(abs(c) - 1.0) > 1e-6:
            raise InvalidArgumentError(f"constant must be unimodular, |c| = {abs(c):.8g}")
        w.flags.writeable = False
        self.zeros = w
        self.unimodular_constant = c / abs(c)

    def _evaluate(self, z):
        out = np.full(z.shape, self.unimodular_constant, dtype=complex)
        for w in self.zeros:
            out *= (w - z) / (1.0 - np.conj(w) * z)
        return out

    def _as_num_den(self):
        num = np.array([self.unimodular_constant], dtype=complex)
        den = np.ones(1, dtype=complex)
        for w in self.zeros:
            num = npoly.polymul(num, np.array([w, -1.0], dtype=complex))
            den = npoly.polymul(den, np.array([1.0, -np.conj(w)], dtype=complex))
        return num, den

    def rotate(self, gamma):
        g = _check_unimodular(gamma)
        return FiniteBlaschke(self.zeros * np.conj(g),
                              self.unimodular_constant * g ** len(self.zeros))

    def at_zero(self) -> complex:
        prod = complex(np.prod(self.zeros)) if self.zeros.size else 1.0
        return self.unimodular_constant * prod

    def __repr__(self):
        return f"FiniteBlaschke({list(self.zeros)}, {self.unimodular_constant})"


def _check_unimodular(gamma) -> complex:
    g = complex(gamma)
    if abs(abs(g) - 1.0) > 1e-9:
        raise InvalidArgumentError(f"rotation must be unimodular, |gamma| = {abs(g):.8g}")
    return g


def _make_rational(num, den) -> HardyFunction:
    num = _trim(np.asarray(num, dtype=complex))
    den = _trim(np.asarray(den, dtype=complex))
    if len(den) == 1:
        if den[0] == 0:
            raise InvalidArgumentError("denominator is the zero polynomial")
        return Polynomial(num / den[0])
    return Rational(num, den)


@dataclass(frozen=True)
class TaylorSeries:
    """Initial Taylor coefficients c_0, c_1, ... of an analytic function."""

    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _as_coeffs(self.coeffs))

    def __len__(self) -> int:
        return len(self.coeffs)

    def coefficient(self, k: int) -> complex:
        if k < 0 or k >= len(self.coeffs):
            raise InvalidArgumentError(f"coefficient index {k} outside stored range")
        return complex(self.coeffs[k])


def evaluate_on_grid(f: HardyFunction, grid: BoundaryGrid) -> BoundarySamples:
    """Samples of f at the grid nodes."""
    return BoundarySamples(grid, f.evaluate(grid.nodes))


def taylor_coefficients(f: HardyFunction, count: int,
                        grid: BoundaryGrid | None = None) -> TaylorSeries:
    """First ``count`` Taylor coefficients, read off the boundary by FFT.

    Valid because every supported representation is analytic across the
    closed disk; aliasing decays geometrically with the distance of the
    nearest singularity from the circle.  Requires count < N/2.
    """
    if count < 1:
        raise InvalidArgumentError("count must be positive")
    if grid is None:
        n = 1 << DEFAULT_TAYLOR_LOG2
        while count >= n // 2:
            n *= 2
        grid = BoundaryGrid(n)
    elif count >= grid.n_points // 2:
        raise InvalidArgumentError(
            f"count {count} too large for grid size {grid.n_points}")
    s = evaluate_on_grid(f, grid)
    fc = fourier_coefficients(s, 0, count - 1)
    return TaylorSeries(fc.values)


DEFAULT_TAYLOR_LOG2 = 12


def reciprocal_series(f: TaylorSeries | np.ndarray, count: int) -> TaylorSeries:
    """Taylor coefficients of 1/f from the convolution recursion.

    g_0 = 1/f_0 and g_m = -(1/f_0) sum_{j=1..m} f_j g_{m-j}; coefficients of
    f beyond the stored range are treated as zero.
    """
    fc = f.coeffs if isinstance(f, TaylorSeries) else _as_coeffs(f)
    if count < 1:
        raise InvalidArgumentError("count must be positive")
    if fc[0] == 0:
        raise InvalidArgumentError("reciprocal requires a nonzero constant term")
    g = np.zeros(count, dtype=complex)
    g[0] = 1.0 / fc[0]
    for m in range(1, count):
        top = min(m, len(fc) - 1)
        acc = 0.0 + 0.0j
        for j in range(1, top + 1):
            acc += fc[j] * g[m - j]
        g[m] = -acc / fc[0]
    return TaylorSeries(g)


def polynomial_roots(coeffs) -> np.ndarray:
    """All roots of a polynomial via companion-matrix eigenvalues.

    Roots are polished with a few guarded Newton steps and returned sorted
    by real part, then imaginary part, so output order is reproducible.
    """
    c = _trim(_as_coeffs(coeffs))
    if np.max(np.abs(c)) == 0.0:
        raise InvalidArgumentError("zero polynomial has no well-defined roots")
    if len(c) == 1:
        return np.zeros(0, dtype=complex)
    r = np.roots(c[::-1])
    dc = npoly.polyder(c)
    scale = float(np.max(np.abs(c)))
    for _ in range(3):
        pv = npoly.polyval(r, c)
        dv = npoly.polyval(r, dc)
        safe = np.abs(dv) > 1e-300
        step = np.where(safe, pv / np.where(safe, dv, 1.0), 0.0)
        cand = r - step
        better = np.abs(npoly.polyval(cand, c)) < np.abs(pv)
        r = np.where(better, cand, r)
    order = np.lexsort((r.imag, r.real))
    return r[order]


def inner_part_of_polynomial(coeffs, tol_boundary: float = BOUNDARY_TOL
                             ) -> tuple[FiniteBlaschke, int]:
    """Inner factor of a polynomial: (Blaschke product J, vanishing order m).

    J collects one Blaschke factor per root strictly inside the circle plus
    m zeros at the origin for the monomial factor z^m.  Roots within
    tol_boundary of the circle cannot be classified and raise
    UnsupportedInputError.
    """
    c = _trim(_as_coeffs(coeffs))
    if np.max(np.abs(c)) == 0.0:
        raise InvalidArgumentError("zero polynomial has no inner part")
    scale = float(np.max(np.abs(c)))
    lead = np.nonzero(np.abs(c) > 1e-13 * scale)[0]
    m = int(lead[0]) if lead.size else 0
    reduced = c[m:]
    zeros = [0.0 + 0.0j] * m
    if len(reduced) > 1:
        roots = polynomial_roots(reduced)
        mods = np.abs(roots)
        if np.any(np.abs(mods - 1.0) <= tol_boundary):
            raise UnsupportedInputError(
                "polynomial has a root too close to the unit circle; "
                "its inner factor is not a finite Blaschke product")
        zeros.extend(roots[mods < 1.0 - tol_boundary])
    return FiniteBlaschke(np.array(zeros, dtype=complex)), m


# -- expression grammar ---------------------------------------------------
#
#   expr   := ('+'|'-')? term (('+'|'-') term)*
#   term   := factor (('*'|'/') factor)*
#   factor := base ('^' uint)?
#   base   := number | 'z' | '(' expr ')' | 'blaschke(' args ';' const ')'
#
# Numbers are decimals with an optional 'i' suffix; a bare 'i' is accepted
# as shorthand for 1i.  Blaschke arguments are constant sub-expressions, so
# complex literals like 0.1+0.2i work there too.

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<number>(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?i?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^();,]))")


@dataclass
class _Token:
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            raise ParseError(f"unexpected character {stripped[0]!r}",
                             len(text) - len(stripped))
        if m.lastgroup is None:
            break
        kind = m.lastgroup
        tokens.append(_Token(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(_Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def take(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str) -> _Token:
        tok = self.peek()
        if tok.kind != "op" or tok.text != op:
            raise ParseError(f"expected {op!r}", tok.pos)
        return self.take()

    def parse(self) -> HardyFunction:
        f = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            raise ParseError(f"unexpected {tok.text!r}", tok.pos)
        return f

    def expr(self) -> HardyFunction:
        sign = 1.0
        tok = self.peek()
        if tok.kind == "op" and tok.text in "+-":
            self.take()
            sign = -1.0 if tok.text == "-" else 1.0
        f = self.term()
        if sign < 0:
            f = -f
        while True:
            tok = self.peek()
            if tok.kind == "op" and tok.text in "+-":
                self.take()
                rhs = self.term()
                f = f + rhs if tok.text == "+" else f - rhs
            else:
                return f

    def term(self) -> HardyFunction:
        f = self.factor()
        while True:
            tok = self.peek()
            if tok.kind == "op" and tok.text in "*/":
                self.take()
                rhs = self.factor()
                f = f * rhs if tok.text == "*" else f / rhs
            else:
                return f

    def factor(self) -> HardyFunction:
        f = self.base()
        tok = self.peek()
        if tok.kind == "op" and tok.text == "^":
            self.take()
            num = self.peek()
            if num.kind != "number" or not num.text.isdigit():
                raise ParseError("exponent must be a nonnegative integer", num.pos)
            self.take()
            f = f ** int(num.text)
        return f

    def base(self) -> HardyFunction:
        tok = self.peek()
        if tok.kind == "number":
            self.take()
            return Polynomial([_number_value(tok.text)])
        if tok.kind == "name":
            if tok.text == "z":
                self.take()
                return Polynomial([0.0, 1.0])
            if tok.text == "i":
                self.take()
                return Polynomial([1j])
            if tok.text == "blaschke":
                self.take()
                return self.blaschke()
            raise ParseError(f"unknown name {tok.text!r}", tok.pos)
        if tok.kind == "op" and tok.text == "(":
            self.take()
            f = self.expr()
            self.expect_op(")")
            return f
        raise ParseError(f"expected a value, got {tok.text or 'end of input'!r}",
                         tok.pos)

    def blaschke(self) -> HardyFunction:
        self.expect_op("(")
        zeros = [self.const_expr()]
        while self.peek().kind == "op" and self.peek().text == ",":
            self.take()
            zeros.append(self.const_expr())
        self.expect_op(";")
        const = self.const_expr()
        self.expect_op(")")
        return FiniteBlaschke(np.array(zeros, dtype=complex), const)

    def const_expr(self) -> complex:
        tok = self.peek()
        f = self.expr_no_commas()
        if isinstance(f, Polynomial) and f.degree == 0:
            return complex(f.coeffs[0])
        raise ParseError("expected a constant", tok.pos)

    def expr_no_commas(self) -> HardyFunction:
        return self.expr()


def _number_value(text: str) -> complex:
    if text.endswith("i"):
        return complex(0.0, float(text[:-1]))
    return complex(float(text), 0.0)


def parse_function(expr: str) -> HardyFunction:
    """Parse an expression in the grammar above into a HardyFunction."""
    if not isinstance(expr, str) or not expr.strip():
        raise ParseError("empty expression", 0)
    return _Parser(expr).parse()


def _format_float(x: float) -> str:
    return repr(float(x + 0.0))


def _format_scalar(c: complex, wrap: bool = True) -> str:
    re_, im = c.real + 0.0, c.imag + 0.0
    if im == 0.0:
        return _format_float(re_)
    if re_ == 0.0:
        return f"{_format_float(im)}i"
    sign = "+" if im > 0 else "-"
    body = f"{_format_float(re_)}{sign}{_format_float(abs(im))}i"
    return f"({body})" if wrap else body


def _format_poly(coeffs: np.ndarray) -> str:
    terms = []
    for k, c in enumerate(coeffs):
        if c == 0 and len(coeffs) > 1:
            continue
        mono = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
        re_, im = c.real + 0.0, c.imag + 0.0
        negative = im == 0.0 and re_ < 0.0
        mag = -c if negative else c
        body = _format_scalar(complex(mag))
        text = body if not mono else (mono if mag == 1 else f"{body}*{mono}")
        if not terms:
            terms.append(f"-{text}" if negative else text)
        else:
            terms.append(f" - {text}" if negative else f" + {text}")
    return "".join(terms) if terms else "0.0"


def format_function(f: HardyFunction) -> str:
    """Canonical expression for f; parse_function(format_function(f)) round-trips."""
    if isinstance(f, Polynomial):
        return _format_poly(f.coeffs)
    if isinstance(f, Rational):
        return f"({_format_poly(f.num)})/({_format_poly(f.den)})"
    if isinstance(f, FiniteBlaschke):
        zs = ", ".join(_format_scalar(complex(w), wrap=False) for w in f.zeros)
        zs = zs if zs else "0.0"
        cs = _format_scalar(f.unimodular_constant, wrap=False)
        if not f.zeros.size:
            # a zero list cannot be empty in the grammar; emit the constant
            return _format_scalar(f.unimodular_constant)
        return f"blaschke({zs}; {cs})"
    raise InvalidArgumentError(f"cannot format {type(f).__name__}")


__all__ = [
    "HardyFunction", "Polynomial", "Rational", "FiniteBlaschke", "TaylorSeries",
    "evaluate_on_grid", "taylor_coefficients", "reciprocal_series",
    "polynomial_roots", "inner_part_of_polynomial", "parse_function",
    "format_function",
]
