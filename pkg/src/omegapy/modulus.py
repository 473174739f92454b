"""
Minimal moduli of continuity.

Two families of tools live here:

* a brute-force grid oracle, ``modulus_grid``, valid for any continuous
  PiecewiseFn, backed by a numpy sparse table for range max/min queries;
* the exact analysis of g on [0, 7]: the objective ``phi``, its boundary
  and critical candidate sets, the switching function ``psi`` with its
  root 1 + delta*, and the closed form ``omega_g_closed``.

Tables are immutable ModulusTable instances. Full grid tables and delta*
are cached per process.
"""

import enum
import functools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import bisect

from .errors import ConsistencyError, DomainError, PreconditionError
from .real_fn import ALPHA, DOMAIN_SLACK, Interval, PiecewiseFn, build_g, f2_eval

logger = logging.getLogger(__name__)

#: Agreement required between a closed expression and direct maximisation.
CROSS_CHECK_TOL = 1e-9

#: A delta closer than this to an integer takes the integer case.
INTEGER_SNAP = 1e-9

#: Number of interior samples used to confirm a flat component.
FLAT_SAMPLES = 5

#: Largest dip below the running maximum of a grid table read as rounding.
ROUNDING_DIP = 1e-12

G_LENGTH = 7.0


class TableSource(enum.Enum):
    GRID_ORACLE = "grid"
    CLOSED_FORM = "closed"


@dataclass(frozen=True, eq=False)
class ModulusTable:
    """
    Sampled minimal modulus of continuity.

    Attributes:
        deltas: sorted delta grid, starting at 0 for full tables
        values: modulus values, same length as deltas
        grid_n: number of x-samples (GridOracle) or delta samples (ClosedForm)
        source: how the values were obtained
        monotone: True when the sampled function was nondecreasing and the
            one-sided shortcut was used
        name: label of the sampled function
    """

    deltas: np.ndarray
    values: np.ndarray
    grid_n: int
    source: TableSource
    monotone: bool = False
    name: str = ""

    def __post_init__(self):
        deltas = np.array(self.deltas, dtype=float)
        values = np.array(self.values, dtype=float)
        if deltas.ndim != 1 or deltas.shape != values.shape or deltas.size == 0:
            raise PreconditionError("a modulus table needs matching, nonempty 1-d deltas and values")
        if (np.diff(deltas) < 0.0).any():
            raise PreconditionError("table deltas must be sorted")
        if self.grid_n < 1:
            raise PreconditionError(f"grid_n must be positive, got {self.grid_n}")
        deltas.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "deltas", deltas)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return int(self.deltas.size)

    @property
    def spacing(self) -> float:
        return float(self.deltas[1] - self.deltas[0]) if len(self) > 1 else 0.0

    def value(self, delta: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
        """Piecewise-linear interpolant of the table at delta."""
        out = np.interp(delta, self.deltas, self.values)
        return float(out) if np.ndim(out) == 0 else out

    def rows(self) -> List[Tuple[float, float]]:
        return list(zip(self.deltas.tolist(), self.values.tolist()))


class SparseTable:
    """
    Range maximum and minimum queries on a fixed array.

    Level j stores max/min over every run of 2**j consecutive entries, so
    building costs O(n log n) and each window query is two lookups.
    """

    def __init__(self, data: Sequence[float]):
        data = np.asarray(data, dtype=float)
        if data.ndim != 1 or data.size == 0:
            raise PreconditionError("a sparse table needs a nonempty 1-d array")
        self.size = int(data.size)
        self._max = [data]
        self._min = [data]
        span = 1
        while 2 * span <= self.size:
            self._max.append(np.maximum(self._max[-1][:-span], self._max[-1][span:]))
            self._min.append(np.minimum(self._min[-1][:-span], self._min[-1][span:]))
            span *= 2

    @property
    def levels(self) -> int:
        return len(self._max)

    def _windows(self, tables: List[np.ndarray], combine, length: int) -> np.ndarray:
        if not 1 <= length <= self.size:
            raise PreconditionError(f"window length must lie in [1, {self.size}], got {length}")
        level = length.bit_length() - 1
        span = 1 << level
        table = tables[level]
        count = self.size - length + 1
        return combine(table[:count], table[length - span:length - span + count])

    def window_max(self, length: int) -> np.ndarray:
        """Maximum of every window of `length` consecutive entries."""
        return self._windows(self._max, np.maximum, length)

    def window_min(self, length: int) -> np.ndarray:
        """Minimum of every window of `length` consecutive entries."""
        return self._windows(self._min, np.minimum, length)

    def query_max(self, start: int, stop: int) -> float:
        """Maximum over data[start:stop]."""
        if not 0 <= start < stop <= self.size:
            raise PreconditionError(f"invalid range [{start}, {stop})")
        level = (stop - start).bit_length() - 1
        table = self._max[level]
        return float(max(table[start], table[stop - (1 << level)]))

    def query_min(self, start: int, stop: int) -> float:
        """Minimum over data[start:stop]."""
        if not 0 <= start < stop <= self.size:
            raise PreconditionError(f"invalid range [{start}, {stop})")
        level = (stop - start).bit_length() - 1
        table = self._min[level]
        return float(min(table[start], table[stop - (1 << level)]))


def _one_sided(ys: np.ndarray, lags: np.ndarray) -> np.ndarray:
    out = np.zeros(lags.size)
    for i, k in enumerate(lags):
        if k > 0:
            out[i] = np.max(ys[k:] - ys[:-k])
    return out


def _two_sided(table: SparseTable, lags: np.ndarray) -> np.ndarray:
    out = np.zeros(lags.size)
    for i, k in enumerate(lags):
        if k > 0:
            out[i] = np.max(table.window_max(int(k) + 1) - table.window_min(int(k) + 1))
    return out


def _normalise_lags(lags: Optional[Sequence[int]], grid_n: int) -> np.ndarray:
    if lags is None:
        return np.arange(grid_n)
    arr = np.unique(np.asarray(lags, dtype=int))
    if arr.size == 0 or arr[0] < 0 or arr[-1] > grid_n - 1:
        raise PreconditionError(f"lags must be integers in [0, {grid_n - 1}]")
    return arr


def modulus_grid(fn: PiecewiseFn, grid_n: int, lags: Optional[Sequence[int]] = None,
                 workers: int = 1, two_sided: bool = False) -> ModulusTable:
    """
    Grid oracle for the minimal modulus of continuity of `fn`.

    Samples fn on grid_n uniform points of its domain. For every lag k
    (delta = k * spacing) the value is the largest |fn(x) - fn(y)| over grid
    pairs at most k steps apart. Nondecreasing functions take the one-sided
    shortcut max fn(x + delta) - fn(x); other functions use sliding-window
    max - min from a SparseTable.

    Args:
        fn: the function to sample
        grid_n: number of x-grid points (>= 2)
        lags: optional subset of lags to tabulate (default: all)
        workers: threads sharing the lag loop
        two_sided: use the sliding-window path even for nondecreasing fn

    Returns:
        ModulusTable with source GRID_ORACLE.
    """
    if grid_n < 2:
        raise PreconditionError(f"grid_n must be at least 2, got {grid_n}")
    if workers < 1:
        raise PreconditionError(f"workers must be positive, got {workers}")
    if lags is None and workers == 1 and not two_sided:
        return _full_grid_table(fn, grid_n)
    return _grid_table(fn, grid_n, _normalise_lags(lags, grid_n), workers, two_sided)


@functools.lru_cache(maxsize=16)
def _full_grid_table(fn: PiecewiseFn, grid_n: int) -> ModulusTable:
    return _grid_table(fn, grid_n, np.arange(grid_n), 1, False)


def _grid_table(fn: PiecewiseFn, grid_n: int, lags: np.ndarray, workers: int,
                two_sided: bool) -> ModulusTable:
    lo, hi = fn.domain.lo, fn.domain.hi
    xs = np.linspace(lo, hi, grid_n)
    ys = np.asarray(fn(xs), dtype=float)

    one_sided = fn.monotone_nondecreasing and not two_sided
    if one_sided:
        def compute(chunk):
            return _one_sided(ys, chunk)
    else:
        table = SparseTable(ys)

        def compute(chunk):
            return _two_sided(table, chunk)

    if workers > 1 and lags.size > workers:
        chunks = np.array_split(lags, workers)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = np.concatenate(list(pool.map(compute, chunks)))
    else:
        values = compute(lags)

    values = _lift_rounding(values)
    deltas = np.linspace(0.0, hi - lo, grid_n)[lags]
    logger.debug("grid table for %s: grid_n=%d lags=%d one_sided=%s max=%.6g",
                 fn.name or "fn", grid_n, lags.size, one_sided, values[-1])
    return ModulusTable(deltas, values, grid_n, TableSource.GRID_ORACLE, one_sided, fn.name)


def _lift_rounding(values: np.ndarray) -> np.ndarray:
    """
    Raise dips of at most ROUNDING_DIP back to the running maximum.

    Rounding in fn can break the monotonicity of a table by an ulp; larger
    decreases are real and stay for check_table_invariants to report.
    """
    running = np.maximum.accumulate(values)
    return np.where(running - values <= ROUNDING_DIP, running, values)


def grid_error_bound(spacing: float, scale: float = 1.0) -> float:
    """
    Grid-error model: |omega_grid(delta) - omega(delta)| <= omega(2 * spacing).

    omega is estimated by scale * f2, which dominates the modulus of every
    function of the gallery (scale is the vertical size of the pieces).
    """
    return scale * float(f2_eval(min(2.0 * spacing, 1.0)))


def _check_delta_open(delta: float) -> None:
    if not 0.0 < delta < G_LENGTH:
        raise DomainError(f"delta must lie in (0, 7), got {delta}")


def phi(x: Union[float, np.ndarray], delta: float) -> Union[float, np.ndarray]:
    """phi(x) = g(x + delta) - g(x) for x in [0, 7 - delta]."""
    if not 0.0 <= delta <= G_LENGTH:
        raise DomainError(f"delta must lie in [0, 7], got {delta}")
    arr = np.asarray(x, dtype=float)
    if (arr < -DOMAIN_SLACK).any() or (arr > G_LENGTH - delta + DOMAIN_SLACK).any():
        raise DomainError(f"x must lie in [0, {G_LENGTH - delta}] for delta = {delta}")
    g = build_g()
    out = np.asarray(g(np.minimum(arr + delta, G_LENGTH))) - np.asarray(g(arr))
    return float(out) if out.ndim == 0 else out


def boundary_set(delta: float) -> np.ndarray:
    """
    Endpoints and kinks of phi: {0..6} U {(k - delta)+ : k = 1..6} U {7 - delta},
    clipped to [0, 7 - delta], sorted and without duplicates.
    """
    _check_delta_open(delta)
    top = G_LENGTH - delta
    candidates = [float(k) for k in range(7)]
    candidates += [max(k - delta, 0.0) for k in range(1, 7)]
    candidates.append(top)
    arr = np.unique(np.asarray(candidates))
    return arr[arr <= top]


def max_phi_boundary(delta: float) -> float:
    """
    floor(delta) + f2(delta - floor(delta)), the maximum of phi over the
    boundary set, confirmed against direct maximisation.

    Raises:
        ConsistencyError: if the two values differ by more than CROSS_CHECK_TOL.
    """
    _check_delta_open(delta)
    k = math.floor(delta)
    closed = k + float(f2_eval(delta - k))
    direct = float(np.max(phi(boundary_set(delta), delta)))
    if abs(closed - direct) > CROSS_CHECK_TOL:
        raise ConsistencyError(
            f"boundary maximum at delta={delta}: closed {closed!r} vs direct {direct!r}")
    return closed


@dataclass(frozen=True)
class CriticalSet:
    """Stationary points of phi for one delta, plus intervals where phi is flat."""

    delta: float
    points: Tuple[float, ...]
    flat_components: Tuple[Interval, ...] = ()

    @property
    def representatives(self) -> Tuple[float, ...]:
        return tuple(c.midpoint for c in self.flat_components)

    def candidates(self) -> np.ndarray:
        return np.asarray(self.points + self.representatives, dtype=float)


def _integer_case(delta: float) -> Optional[int]:
    nearest = round(delta)
    return int(nearest) if abs(delta - nearest) <= INTEGER_SNAP else None


def _critical_layout(d: float) -> Tuple[List[float], List[Tuple[float, float]]]:
    n = _integer_case(d)
    if n == 1:
        return [1 - d / 2, 4 - d / 2], [(4.0, 5.0), (5.0, 6.0)]
    if n == 2:
        return [2 - (d - 1) / 2, 4 - (d - 1) / 2], [(4.0, 5.0)]
    if n == 3:
        return [4 - (d - 2) / 2], [(0.0, 1.0), (1.0, 2.0)]
    if n == 4:
        return [1 - (d - 3) / 2], [(1.0, 2.0)]
    if n == 5:
        return [1 - (d - 4) / 2], [(1.0, 2.0)]
    if n == 6 or d > 6:
        return [1 - (d - 5) / 2], []
    if d < 1:
        return [1 - d / 2, 4 - d / 2], []
    if d < 2:
        return [1 - d / 2, 2 - (d - 1) / 2, 4 - d / 2, 4 - (d - 1) / 2], []
    if d < 3:
        return [2 - (d - 1) / 2, 4 - (d - 1) / 2, 4 - (d - 2) / 2], []
    if d < 4:
        return [1 - (d - 3) / 2, 4 - (d - 2) / 2], []
    if d < 5:
        return [1 - (d - 3) / 2, 1 - (d - 4) / 2], []
    return [1 - (d - 4) / 2, 1 - (d - 5) / 2], []


def _check_stationary(points: np.ndarray, delta: float) -> None:
    if points.size == 0:
        return
    g = build_g()
    left = np.atleast_1d(g.derivative(points))
    right = np.atleast_1d(g.derivative(points + delta))
    gap = np.abs(right - left)
    bad = gap > CROSS_CHECK_TOL * np.maximum(1.0, np.abs(left))
    if bad.any():
        x = float(points[bad][0])
        raise ConsistencyError(f"x={x} is not stationary for phi at delta={delta}")


def _check_flat(component: Interval, delta: float) -> None:
    samples = np.linspace(component.lo, component.hi, FLAT_SAMPLES + 2)[1:-1]
    values = np.asarray(phi(samples, delta))
    if np.ptp(values) > CROSS_CHECK_TOL:
        raise ConsistencyError(
            f"phi is not constant on ({component.lo}, {component.hi}) at delta={delta}")


def critical_set(delta: float) -> CriticalSet:
    """
    Reduced critical set of phi: points x with g'(x + delta) = g'(x) where
    neither x nor x + delta falls in (2, 3), plus the open intervals on
    which phi is constant (integer delta only).

    Every point is checked for stationarity with the analytic derivative
    of g, and every flat component for constancy of phi.

    Raises:
        ConsistencyError: if a returned candidate fails its check.
    """
    _check_delta_open(delta)
    raw_points, raw_flats = _critical_layout(delta)
    points = np.asarray(raw_points, dtype=float)
    flats = tuple(Interval(lo, hi) for lo, hi in raw_flats)
    _check_stationary(points, delta)
    for component in flats:
        _check_flat(component, delta)
    logger.debug("critical set at delta=%g: %d points, %d flat components",
                 delta, points.size, len(flats))
    return CriticalSet(float(delta), tuple(points.tolist()), flats)


def _branch(delta: float, k: int) -> float:
    """k + 2 f2((delta - k) / 2)."""
    return k + 2.0 * float(f2_eval(min(max((delta - k) / 2.0, 0.0), 1.0)))


# indices k of the branches competing on (0,1], (1,2], ..., (6,7)
_CRITICAL_BRANCHES = ((0,), (0, 1), (1, 2), (3, 2), (3, 4), (4, 5), (5,))


def max_phi_critical(delta: float) -> float:
    """
    Maximum of phi over the critical set, from its case expression,
    confirmed against phi evaluated at every candidate.

    Raises:
        ConsistencyError: on disagreement beyond CROSS_CHECK_TOL.
    """
    _check_delta_open(delta)
    n = _integer_case(delta)
    case = (n if n is not None else math.ceil(delta)) - 1
    case = min(max(case, 0), len(_CRITICAL_BRANCHES) - 1)
    closed = max(_branch(delta, k) for k in _CRITICAL_BRANCHES[case])
    direct = float(np.max(phi(critical_set(delta).candidates(), delta)))
    if abs(closed - direct) > CROSS_CHECK_TOL:
        raise ConsistencyError(
            f"critical maximum at delta={delta}: closed {closed!r} vs direct {direct!r}")
    return closed


def psi(delta: float) -> float:
    """psi(delta) = 2 f2(delta/2) - 1 - 2 f2((delta - 1)/2) on [1, 2]."""
    if not 1.0 <= delta <= 2.0:
        raise DomainError(f"psi is defined on [1, 2], got {delta}")
    return 2.0 * float(f2_eval(delta / 2.0)) - 1.0 - 2.0 * float(f2_eval((delta - 1.0) / 2.0))


@functools.lru_cache(maxsize=None)
def find_delta_star(tol: float = 1e-12) -> float:
    """
    delta* in (0, 1): psi changes sign at 1 + delta*.

    Found by bisection on [1, 2]; cached per tolerance.

    Raises:
        ConsistencyError: if psi does not change sign on [1, 2].
    """
    if not 0.0 < tol <= 1e-6:
        raise PreconditionError(f"tolerance must lie in (0, 1e-6], got {tol}")
    lo, hi = psi(1.0), psi(2.0)
    if not (lo > 0.0 and hi < 0.0):
        raise ConsistencyError(f"psi does not bracket a root: psi(1)={lo}, psi(2)={hi}")
    root = bisect(psi, 1.0, 2.0, xtol=tol)
    delta_star = root - 1.0
    logger.debug("delta* = %.15g (tol=%g)", delta_star, tol)
    return delta_star


def omega_g_closed(delta: Union[float, np.ndarray],
                   delta_star: Optional[float] = None) -> Union[float, np.ndarray]:
    """
    Closed form of the modulus of g.

    k + 2 f2((delta - k)/2) on (k + delta*, k + 1 + delta*] for k = 0..5,
    the first case starting at 0 and the last one running to 7.
    """
    arr = np.asarray(delta, dtype=float)
    if np.isnan(arr).any() or (arr < -DOMAIN_SLACK).any() or (arr > G_LENGTH + DOMAIN_SLACK).any():
        raise DomainError("omega_g is defined on [0, 7]")
    arr = np.clip(arr, 0.0, G_LENGTH)
    star = find_delta_star() if delta_star is None else delta_star
    k = np.clip(np.ceil(arr - star) - 1.0, 0.0, 5.0)
    out = k + 2.0 * np.power(np.clip((arr - k) / 2.0, 0.0, 1.0), ALPHA)
    return float(out) if out.ndim == 0 else out


def omega_g_table(grid_n: int) -> ModulusTable:
    """omega_g_closed sampled on grid_n uniform deltas of [0, 7]."""
    if grid_n < 2:
        raise PreconditionError(f"grid_n must be at least 2, got {grid_n}")
    deltas = np.linspace(0.0, G_LENGTH, grid_n)
    return ModulusTable(deltas, omega_g_closed(deltas), grid_n, TableSource.CLOSED_FORM, True, "g")


def concave_majorant(table: ModulusTable) -> ModulusTable:
    """
    Least concave majorant of the piecewise-linear interpolant of `table`.

    Upper hull by a monotone-chain sweep, then read back on the table's
    own deltas.
    """
    if len(table) == 0:
        raise PreconditionError("cannot take the majorant of an empty table")
    xs, ys = table.deltas, table.values
    hull: List[int] = []
    for i in range(xs.size):
        while len(hull) >= 2:
            a, b = hull[-2], hull[-1]
            cross = (xs[b] - xs[a]) * (ys[i] - ys[a]) - (ys[b] - ys[a]) * (xs[i] - xs[a])
            if cross < 0.0:
                break
            hull.pop()
        hull.append(i)
    values = np.interp(xs, xs[hull], ys[hull])
    return ModulusTable(xs, np.maximum(values, ys), table.grid_n, table.source, table.monotone,
                        table.name)
