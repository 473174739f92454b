"""
Composable piecewise functions on compact intervals.

This module holds the function gallery of the construction: the Cantor
function f1, the power map f2(x) = x**alpha with alpha = log 2 / log 3,
its reflection f3(x) = 1 - f2(1 - x), the identity I, and the functions
f, g (on [0, 7]) and h (on [0, 2]) assembled from them.

Every primitive lives on [0, 1]. A Piece maps its subdomain onto [0, 1]
with an affine change of variable (optionally reflected), applies the
primitive and maps the result back (again optionally reflected). All
objects are frozen; evaluation is vectorised with numpy and accepts
scalars or arrays.

The Cantor function reads the exact ternary digits of its argument. A
float near a ternary rational is not that rational, and f1 is steep
there: the float 1/3 evaluates to about 1/2 - 3e-11. Ternary rationals
themselves go through ``cantor_exact`` and ``PiecewiseFn.exact_values``.
"""

import bisect
import enum
import functools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import DomainError, PreconditionError

logger = logging.getLogger(__name__)

ArrayLike = Union[float, Sequence[float], np.ndarray]

#: Hoelder exponent of the Cantor function, computed once.
ALPHA = math.log(2.0) / math.log(3.0)

#: Ternary digits scanned by the Cantor evaluator.
DEFAULT_DIGITS = 64

#: Slack accepted outside a domain before raising DomainError.
DOMAIN_SLACK = 1e-15

#: Largest jump tolerated between the one-sided values at a breakpoint.
CONTINUITY_TOL = 1e-12

Rational = Union[Fraction, int]


def _as_array(x: ArrayLike) -> np.ndarray:
    return np.asarray(x, dtype=float)


def _check_unit(arr: np.ndarray, what: str) -> None:
    if np.isnan(arr).any() or (arr < -DOMAIN_SLACK).any() or (arr > 1.0 + DOMAIN_SLACK).any():
        raise DomainError(f"{what} is defined on [0, 1], got values outside it")


def _ternary_cantor(u: np.ndarray, digits: int) -> np.ndarray:
    """
    Cantor function on [0, 1] from the base-3 expansion of `u`.

    Every float is expanded through its integer ratio p / q, so the digits
    are those of the float itself. Points leave the scan at their first
    digit 1 or once the remainder is zero.
    """
    flat = np.asarray(u, dtype=float).ravel()
    value = np.zeros(flat.size)
    ratios = [v.as_integer_ratio() for v in flat.tolist()]
    p = np.array([r[0] for r in ratios], dtype=object)
    q = np.array([r[1] for r in ratios], dtype=object)
    full = (p >= q).astype(bool)
    value[full] = 1.0
    index = np.flatnonzero(~full)
    p, q = p[index], q[index]
    weight = 1.0
    for _ in range(digits):
        if index.size == 0:
            break
        weight *= 0.5
        p = p * 3
        digit = p // q
        p = p - digit * q
        digit = digit.astype(np.int64)
        # a 2 contributes its binary weight; a 1 contributes it and stops
        value[index[digit > 0]] += weight
        keep = (digit != 1) & (p != 0).astype(bool)
        index, p, q = index[keep], p[keep], q[keep]
    return value.reshape(np.shape(u))


def cantor_exact(x: Rational, digits: int = DEFAULT_DIGITS) -> Fraction:
    """
    Cantor function at a rational point, as a dyadic fraction.

    Exact when the ternary expansion of x stops (or meets a 1) within
    `digits` digits; otherwise the scan is cut and the error is at most
    2**-digits.

    Raises:
        DomainError: if x lies outside [0, 1].
    """
    if digits < 1:
        raise PreconditionError(f"digits must be a positive integer, got {digits}")
    x = Fraction(x)
    if not 0 <= x <= 1:
        raise DomainError(f"the Cantor function is defined on [0, 1], got {x}")
    p, q = x.numerator, x.denominator
    if p == q:
        return Fraction(1)
    bits = 0
    for level in range(1, digits + 1):
        digit, p = divmod(3 * p, q)
        bits = 2 * bits + (digit > 0)
        if digit == 1 or p == 0:
            return Fraction(bits, 2 ** level)
    return Fraction(bits, 2 ** digits)


def cantor_eval(x: ArrayLike, digits: int = DEFAULT_DIGITS) -> Union[float, np.ndarray]:
    """
    Evaluate the Cantor function f1.

    Scans the ternary digits of the float x; the first digit 1 ends the
    scan, every digit 2 contributes its binary weight. The result is
    within 2**-digits of f1(x) up to the rounding of the sum.

    Args:
        x: point(s) in [0, 1]
        digits: number of ternary digits to scan (>= 1)

    Returns:
        f1(x), a float for scalar input and an array otherwise.

    Raises:
        DomainError: if x lies outside [0, 1] beyond DOMAIN_SLACK.
    """
    if digits < 1:
        raise PreconditionError(f"digits must be a positive integer, got {digits}")
    arr = _as_array(x)
    _check_unit(arr, "the Cantor function")
    out = _ternary_cantor(np.clip(arr, 0.0, 1.0), digits)
    return float(out) if out.ndim == 0 else out


def _power(u: np.ndarray, alpha: float = ALPHA) -> np.ndarray:
    # clamp: inputs such as delta - 5 may round to -1e-17
    return np.power(np.clip(u, 0.0, 1.0), alpha)


def f2_eval(x: ArrayLike) -> Union[float, np.ndarray]:
    """f2(x) = x**ALPHA on [0, 1]."""
    arr = _as_array(x)
    _check_unit(arr, "f2")
    out = _power(arr)
    return float(out) if out.ndim == 0 else out


def f3_eval(x: ArrayLike) -> Union[float, np.ndarray]:
    """f3(x) = 1 - f2(1 - x) on [0, 1]."""
    arr = _as_array(x)
    _check_unit(arr, "f3")
    out = 1.0 - _power(1.0 - arr)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class Interval:
    """Closed interval [lo, hi]."""

    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise PreconditionError(f"interval needs lo <= hi, got [{self.lo}, {self.hi}]")

    @property
    def length(self) -> float:
        return self.hi - self.lo

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def contains(self, x: float, slack: float = 0.0) -> bool:
        return self.lo - slack <= x <= self.hi + slack


class PieceKind(enum.Enum):
    CANTOR = "cantor"
    POWER = "power"
    IDENTITY = "identity"
    COMPOSITE = "composite"


@dataclass(frozen=True)
class Transform:
    """
    Change of variable around a primitive living on [0, 1].

    A point x of the subdomain is sent to u = (x - shift) / width, then to
    1 - u if reflect_in. The primitive value v becomes 1 - v if
    reflect_out, and the piece returns offset + height * v.
    """

    shift: float = 0.0
    width: float = 1.0
    reflect_in: bool = False
    offset: float = 0.0
    height: float = 1.0
    reflect_out: bool = False

    def __post_init__(self):
        if not self.width > 0.0:
            raise PreconditionError(f"transform width must be positive, got {self.width}")

    def local(self, x: np.ndarray) -> np.ndarray:
        u = (x - self.shift) / self.width
        if self.reflect_in:
            u = 1.0 - u
        return np.clip(u, 0.0, 1.0)

    def outer(self, v: np.ndarray) -> np.ndarray:
        if self.reflect_out:
            v = 1.0 - v
        return self.offset + self.height * v

    def local_exact(self, x: Fraction) -> Fraction:
        u = (x - Fraction(self.shift)) / Fraction(self.width)
        if self.reflect_in:
            u = 1 - u
        return min(max(u, Fraction(0)), Fraction(1))

    def outer_exact(self, v: Fraction) -> Fraction:
        if self.reflect_out:
            v = 1 - v
        return Fraction(self.offset) + Fraction(self.height) * v

    def chain_factor(self) -> float:
        """d(output)/d(primitive) * d(u)/dx."""
        sign = (-1.0 if self.reflect_in else 1.0) * (-1.0 if self.reflect_out else 1.0)
        return sign * self.height / self.width


@dataclass(frozen=True)
class Piece:
    """One primitive placed on a subdomain of a PiecewiseFn."""

    sub: Interval
    kind: PieceKind
    transform: Transform = field(default_factory=Transform)
    alpha: float = ALPHA
    inner: Optional["PiecewiseFn"] = None

    def __post_init__(self):
        if self.kind is PieceKind.POWER and not 0.0 < self.alpha <= 1.0:
            raise PreconditionError(f"Power exponent must lie in (0, 1], got {self.alpha}")
        if self.kind is PieceKind.COMPOSITE:
            if self.inner is None:
                raise PreconditionError("a composite piece needs an inner function")
            if (self.inner.domain.lo, self.inner.domain.hi) != (0.0, 1.0):
                raise PreconditionError("the inner function of a composite piece must live on [0, 1]")

    def primitive(self, u: np.ndarray, digits: int = DEFAULT_DIGITS) -> np.ndarray:
        if self.kind is PieceKind.CANTOR:
            return _ternary_cantor(u, digits)
        if self.kind is PieceKind.POWER:
            return _power(u, self.alpha)
        if self.kind is PieceKind.IDENTITY:
            return u
        return np.asarray(self.inner(u), dtype=float)

    def primitive_derivative(self, u: np.ndarray) -> np.ndarray:
        if self.kind is PieceKind.CANTOR:
            raise DomainError("the Cantor function has no usable derivative")
        if self.kind is PieceKind.POWER:
            with np.errstate(divide="ignore"):
                return self.alpha * np.power(u, self.alpha - 1.0)
        if self.kind is PieceKind.IDENTITY:
            return np.ones_like(u)
        return np.asarray(self.inner.derivative(u), dtype=float)

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return self.transform.outer(self.primitive(self.transform.local(x)))

    def exact_values(self, xs: List[Fraction], digits: int = DEFAULT_DIGITS) -> np.ndarray:
        """Values at rational points; power and identity pieces read float(x)."""
        if self.kind is PieceKind.CANTOR:
            return np.array([float(self.transform.outer_exact(
                cantor_exact(self.transform.local_exact(x), digits))) for x in xs])
        if self.kind is PieceKind.COMPOSITE:
            inner = self.inner.exact_values([self.transform.local_exact(x) for x in xs], digits)
            return self.transform.outer(inner)
        return self(np.array([float(x) for x in xs]))

    def derivative(self, x: np.ndarray) -> np.ndarray:
        return self.transform.chain_factor() * self.primitive_derivative(self.transform.local(x))

    @property
    def is_lipschitz(self) -> bool:
        if self.kind is PieceKind.IDENTITY:
            return True
        if self.kind is PieceKind.POWER:
            return self.alpha == 1.0
        if self.kind is PieceKind.COMPOSITE:
            return self.inner.is_lipschitz
        return False


@dataclass(frozen=True)
class PiecewiseFn:
    """
    A continuous function on `domain` assembled from pieces.

    The pieces tile the domain in order; at a shared endpoint the left
    piece is used (the subdomains are read as (k, k + 1], the first one
    closed). Construction checks the tiling and the continuity at every
    interior breakpoint.
    """

    domain: Interval
    pieces: Tuple[Piece, ...]
    monotone_nondecreasing: bool = False
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple(self.pieces))
        if not self.pieces:
            raise PreconditionError("a piecewise function needs at least one piece")
        if self.pieces[0].sub.lo != self.domain.lo or self.pieces[-1].sub.hi != self.domain.hi:
            raise PreconditionError(f"pieces of {self.name or 'function'} do not cover its domain")
        for left, right in zip(self.pieces, self.pieces[1:]):
            if left.sub.hi != right.sub.lo:
                raise PreconditionError(
                    f"pieces [{left.sub.lo}, {left.sub.hi}] and [{right.sub.lo}, {right.sub.hi}] "
                    "do not share an endpoint")
            at = np.array([left.sub.hi])
            jump = abs(float(left(at)[0] - right(at)[0]))
            if jump > CONTINUITY_TOL:
                raise PreconditionError(
                    f"{self.name or 'function'} jumps by {jump:.3e} at x = {left.sub.hi}")

    @functools.cached_property
    def breakpoints(self) -> np.ndarray:
        """Interior piece boundaries, sorted."""
        return np.array([p.sub.hi for p in self.pieces[:-1]], dtype=float)

    @property
    def is_lipschitz(self) -> bool:
        return all(p.is_lipschitz for p in self.pieces)

    def _dispatch(self, x: ArrayLike) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        arr = _as_array(x)
        flat = np.atleast_1d(arr).ravel()
        lo, hi = self.domain.lo, self.domain.hi
        if np.isnan(flat).any() or (flat < lo - DOMAIN_SLACK).any() or (flat > hi + DOMAIN_SLACK).any():
            raise DomainError(f"{self.name or 'function'} is defined on [{lo}, {hi}]")
        flat = np.clip(flat, lo, hi)
        return arr, flat, np.searchsorted(self.breakpoints, flat, side="left")

    @staticmethod
    def _reshape(arr: np.ndarray, out: np.ndarray) -> Union[float, np.ndarray]:
        return float(out[0]) if arr.ndim == 0 else out.reshape(arr.shape)

    def __call__(self, x: ArrayLike) -> Union[float, np.ndarray]:
        arr, flat, index = self._dispatch(x)
        out = np.empty_like(flat)
        for k, piece in enumerate(self.pieces):
            mask = index == k
            if mask.any():
                out[mask] = piece(flat[mask])
        return self._reshape(arr, out)

    def exact_values(self, points: Sequence[Rational], digits: int = DEFAULT_DIGITS) -> np.ndarray:
        """
        Values at rational points such as the ternary endpoints of a cover.

        Cantor pieces are evaluated on the exact digits of the rational
        local coordinate, the other pieces at float(x). Breakpoints follow
        the left-piece rule of __call__.

        Raises:
            DomainError: if a point lies outside the domain.
        """
        xs = [Fraction(x) for x in points]
        lo, hi = Fraction(self.domain.lo), Fraction(self.domain.hi)
        if any(not lo <= x <= hi for x in xs):
            raise DomainError(
                f"{self.name or 'function'} is defined on [{self.domain.lo}, {self.domain.hi}]")
        breaks = [Fraction(b) for b in self.breakpoints.tolist()]
        index = np.array([bisect.bisect_left(breaks, x) for x in xs], dtype=int)
        out = np.empty(len(xs))
        for k, piece in enumerate(self.pieces):
            chosen = np.flatnonzero(index == k)
            if chosen.size:
                out[chosen] = piece.exact_values([xs[i] for i in chosen], digits)
        return out

    def derivative(self, x: ArrayLike) -> Union[float, np.ndarray]:
        """Piecewise derivative; at a breakpoint the left piece is used."""
        arr, flat, index = self._dispatch(x)
        out = np.empty_like(flat)
        for k, piece in enumerate(self.pieces):
            mask = index == k
            if mask.any():
                out[mask] = piece.derivative(flat[mask])
        return self._reshape(arr, out)


def evaluate(fn: PiecewiseFn, x: ArrayLike) -> Union[float, np.ndarray]:
    """Evaluate `fn` at x (scalar or array)."""
    return fn(x)


def _unit_piece(kind: PieceKind, k: int, reflect: bool = False) -> Piece:
    return Piece(Interval(float(k), float(k + 1)), kind,
                 Transform(shift=float(k), reflect_in=reflect, offset=float(k), reflect_out=reflect))


def _concave(k: int) -> Piece:
    return _unit_piece(PieceKind.POWER, k)


def _convex(k: int) -> Piece:
    return _unit_piece(PieceKind.POWER, k, reflect=True)


@functools.lru_cache(maxsize=None)
def cantor_fn() -> PiecewiseFn:
    return PiecewiseFn(Interval(0.0, 1.0), (_unit_piece(PieceKind.CANTOR, 0),), True, "f1")


@functools.lru_cache(maxsize=None)
def power_fn() -> PiecewiseFn:
    return PiecewiseFn(Interval(0.0, 1.0), (_concave(0),), True, "f2")


@functools.lru_cache(maxsize=None)
def convex_fn() -> PiecewiseFn:
    return PiecewiseFn(Interval(0.0, 1.0), (_convex(0),), True, "f3")


@functools.lru_cache(maxsize=None)
def identity_fn() -> PiecewiseFn:
    return PiecewiseFn(Interval(0.0, 1.0), (_unit_piece(PieceKind.IDENTITY, 0),), True, "I")


def _seven_pieces(middle: Piece, name: str) -> PiecewiseFn:
    pieces = (_convex(0), _concave(1), middle, _convex(3), _concave(4), _concave(5), _concave(6))
    return PiecewiseFn(Interval(0.0, 7.0), pieces, True, name)


@functools.lru_cache(maxsize=None)
def build_f() -> PiecewiseFn:
    """The nondecreasing function on [0, 7] with a Cantor staircase on [2, 3]."""
    return _seven_pieces(_unit_piece(PieceKind.CANTOR, 2), "f")


@functools.lru_cache(maxsize=None)
def build_g() -> PiecewiseFn:
    """f with its Cantor piece on [2, 3] replaced by the identity."""
    return _seven_pieces(_unit_piece(PieceKind.IDENTITY, 2), "g")


@functools.lru_cache(maxsize=None)
def build_h() -> PiecewiseFn:
    """f2 on [0, 1] followed by x -> f1(2 - x) on (1, 2]; not monotone."""
    pieces = (
        _concave(0),
        Piece(Interval(1.0, 2.0), PieceKind.CANTOR, Transform(shift=1.0, reflect_in=True)),
    )
    return PiecewiseFn(Interval(0.0, 2.0), pieces, False, "h")


def from_breakpoints(xs: Sequence[float], ys: Sequence[float], name: str = "") -> PiecewiseFn:
    """
    Piecewise-linear function through the points (xs[i], ys[i]).

    Raises:
        PreconditionError: if xs is not strictly increasing or the
            lengths differ.
    """
    xs = [float(v) for v in xs]
    ys = [float(v) for v in ys]
    if len(xs) != len(ys) or len(xs) < 2:
        raise PreconditionError("need at least two breakpoints with one value each")
    if any(b <= a for a, b in zip(xs, xs[1:])):
        raise PreconditionError("breakpoints must be strictly increasing")
    pieces = tuple(
        Piece(Interval(x0, x1), PieceKind.IDENTITY,
              Transform(shift=x0, width=x1 - x0, offset=y0, height=y1 - y0))
        for x0, x1, y0, y1 in zip(xs, xs[1:], ys, ys[1:])
    )
    monotone = all(b >= a for a, b in zip(ys, ys[1:]))
    return PiecewiseFn(Interval(xs[0], xs[-1]), pieces, monotone, name)


def random_piecewise_linear(rng: np.random.Generator, n_breaks: int = 10,
                            domain: Interval = Interval(0.0, 1.0)) -> PiecewiseFn:
    """Random continuous piecewise-linear function with `n_breaks` breakpoints."""
    if n_breaks < 2:
        raise PreconditionError("a piecewise-linear function needs two breakpoints")
    inner = np.sort(rng.uniform(domain.lo, domain.hi, size=n_breaks - 2))
    xs = np.concatenate(([domain.lo], inner, [domain.hi]))
    ys = rng.uniform(-1.0, 1.0, size=n_breaks)
    return from_breakpoints(xs, ys, name=f"pl{n_breaks}")


GALLERY: Dict[str, Callable[[], PiecewiseFn]] = {
    "f": build_f,
    "g": build_g,
    "h": build_h,
    "f1": cantor_fn,
    "f2": power_fn,
    "f3": convex_fn,
}


def gallery(name: str) -> PiecewiseFn:
    """Named function of the gallery ({f, g, h, f1, f2, f3})."""
    try:
        return GALLERY[name]()
    except KeyError:
        raise PreconditionError(
            f"unknown function '{name}', expected one of {', '.join(GALLERY)}") from None
