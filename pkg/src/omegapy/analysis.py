"""
Numerical verification of the construction.

Every check returns a VerificationReport instead of raising: a failed
inequality is a result, not an error. Exceptions are reserved for bad
arguments (PreconditionError, DomainError) and for internal cross-checks
that disagree (ConsistencyError).

Absolute continuity cannot be decided from samples. Two witnesses stand in
for it here:

* Cantor covers (``singular_cover`` / ``increment_sum``): families of
  vanishing total length on which f keeps increasing by 1, so f is not
  absolutely continuous;
* random families (``ac_profile``): the largest increment sum of the
  modulus over seeded families of a given total length, which shrinks with
  the length.

Neither is a proof.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import DomainError, PreconditionError
from .modulus import (
    ModulusTable, concave_majorant, find_delta_star, grid_error_bound, max_phi_boundary,
    max_phi_critical, modulus_grid, omega_g_closed, omega_g_table, psi,
)
from .real_fn import (
    DOMAIN_SLACK, Interval, PiecewiseFn, build_f, build_g, build_h, cantor_eval, cantor_fn,
    f2_eval, f3_eval, random_piecewise_linear,
)

logger = logging.getLogger(__name__)

#: Tolerance of pointwise inequalities between gallery functions.
INEQUALITY_TOL = 1e-12

#: Tolerance of grid-oracle comparisons at grid_n ~ 10**4.
GRID_TOL = 5e-3

#: Tolerance of the Cantor self-modulus comparison.
SELF_MODULUS_TOL = 1e-2

#: Largest Cantor construction stage handed out by singular_cover.
MAX_COVER_LEVEL = 20

#: Intervals per random family in ac_profile.
FAMILY_SIZE = 20

DEFAULT_LENGTHS = (0.1, 0.01, 0.001, 0.0001)

#: Bound on the last ac_profile entry of the closed-form modulus of g.
AC_PROFILE_CAP = 0.05

DELTA_STAR_BRACKET = (0.17, 0.19)


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of one check; passed iff max_violation <= tolerance."""

    check_name: str
    samples: int
    max_violation: float
    tolerance: float
    passed: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "max_violation", float(self.max_violation))
        object.__setattr__(self, "passed", bool(self.max_violation <= self.tolerance))

    def summary_line(self) -> str:
        return (f"{self.check_name},{self.samples},{self.max_violation:.15g},"
                f"{self.tolerance:.15g},{str(self.passed).lower()}")


def _violation(excess: np.ndarray) -> float:
    """Largest positive part of `excess` (0 when every entry is <= 0)."""
    excess = np.asarray(excess, dtype=float)
    if np.isnan(excess).any():
        return math.inf
    return max(0.0, float(np.max(excess))) if excess.size else 0.0


def _report(name: str, samples: int, violation: float, tolerance: float) -> VerificationReport:
    report = VerificationReport(name, int(samples), violation, tolerance)
    logger.debug("%s: samples=%d max_violation=%.3e tol=%.1e passed=%s",
                 name, report.samples, report.max_violation, tolerance, report.passed)
    return report


def _unit_samples(samples: int, rng: np.random.Generator) -> np.ndarray:
    grid = np.linspace(0.0, 1.0, max(2, samples // 2))
    return np.concatenate((grid, rng.uniform(0.0, 1.0, samples - samples // 2)))


def check_lemma_bounds(samples: int = 100_000, seed: int = 42) -> List[VerificationReport]:
    """
    Pointwise bounds between f1, f2, f3 and the identity.

    One report per condition: f1 <= f2, |f1(x) - f1(y)| <= f2(|x - y|),
    I <= f2, |x - y| <= f2(|x - y|), f3 <= f1, f3 <= I, and the endpoint
    values of f2 and f3. Points are a uniform grid plus seeded random
    draws; pairs are seeded random plus the diagonal x = y.
    """
    if samples < 1:
        raise PreconditionError(f"samples must be positive, got {samples}")
    rng = np.random.default_rng(seed)
    xs = _unit_samples(samples, rng)
    px = np.concatenate((rng.uniform(0.0, 1.0, samples), xs[:8]))
    py = np.concatenate((rng.uniform(0.0, 1.0, samples), xs[:8]))
    gap = np.abs(px - py)

    f1, f2, f3 = cantor_eval(xs), f2_eval(xs), f3_eval(xs)
    f2_gap = f2_eval(gap)
    endpoints = np.array([f2_eval(0.0), f2_eval(1.0) - 1.0, f3_eval(0.0), f3_eval(1.0) - 1.0])

    reports = [
        _report("endpoints", 4, float(np.max(np.abs(endpoints))), INEQUALITY_TOL),
        _report("cantor_below_power", xs.size, _violation(f1 - f2), INEQUALITY_TOL),
        _report("cantor_holder", px.size,
                _violation(np.abs(cantor_eval(px) - cantor_eval(py)) - f2_gap), INEQUALITY_TOL),
        _report("identity_below_power", xs.size, _violation(xs - f2), INEQUALITY_TOL),
        _report("identity_holder", px.size, _violation(gap - f2_gap), INEQUALITY_TOL),
        _report("convex_below_cantor", xs.size, _violation(f3 - f1), INEQUALITY_TOL),
        _report("convex_below_identity", xs.size, _violation(f3 - xs), INEQUALITY_TOL),
    ]
    return reports


def check_cantor_symmetry(samples: int = 10_000, seed: int = 42) -> VerificationReport:
    """f1(x) + f1(1 - x) = 1, sampled on [1/2, 1] where 1 - x is exact."""
    rng = np.random.default_rng(seed)
    xs = rng.uniform(0.5, 1.0, samples)
    gap = np.abs(cantor_eval(xs) + cantor_eval(1.0 - xs) - 1.0)
    return _report("cantor_symmetry", samples, float(np.max(gap)), INEQUALITY_TOL)


def check_monotone(fn: PiecewiseFn, samples: int = 100_000, seed: int = 42) -> VerificationReport:
    """Largest decrease of fn over a sorted seeded sample of its domain."""
    rng = np.random.default_rng(seed)
    xs = np.sort(rng.uniform(fn.domain.lo, fn.domain.hi, samples))
    drops = -np.diff(np.asarray(fn(xs)))
    return _report(f"monotone_{fn.name or 'fn'}", samples, _violation(drops), INEQUALITY_TOL)


def check_table_invariants(table: ModulusTable, name: Optional[str] = None,
                           probes: int = 64) -> VerificationReport:
    """
    Zero at zero, nondecreasing values and subadditivity on the grid.

    Subadditivity is checked for every lag j against `probes` lags i
    spread over the table.
    """
    values = table.values
    n = values.size
    parts = [np.abs(values[:1]) if table.deltas[0] == 0.0 else np.zeros(1),
             -np.diff(values)]
    count = n
    for i in np.unique(np.linspace(1, n - 1, min(probes, max(n - 1, 1))).astype(int)):
        if i <= 0 or i >= n:
            continue
        parts.append(values[i:] - values[i] - values[:n - i])
        count += n - i
    violation = _violation(np.concatenate(parts))
    return _report(f"table_{name or table.name or 'fn'}", count, violation, 1e-9)


def substitute_pair(x: Union[float, np.ndarray], y: Union[float, np.ndarray]) -> Tuple:
    """
    Move a pair with x in [2, 3] out of the Cantor block without shrinking
    |f(x) - f(y)| or |g(x) - g(y)| and keeping |x - y|.

    The rule depends on the unit interval holding y; at an integer y the
    lower interval wins.

    Raises:
        PreconditionError: if x is not in [2, 3] or y not in [0, 7].
    """
    xa = np.asarray(x, dtype=float)
    ya = np.asarray(y, dtype=float)
    if (xa < 2.0 - DOMAIN_SLACK).any() or (xa > 3.0 + DOMAIN_SLACK).any():
        raise PreconditionError("substitute_pair needs x in [2, 3]")
    if (ya < -DOMAIN_SLACK).any() or (ya > 7.0 + DOMAIN_SLACK).any():
        raise PreconditionError("substitute_pair needs y in [0, 7]")
    case = np.clip(np.ceil(ya) - 1.0, 0, 6).astype(int)
    shift = np.array([3.0, -1.0, 0.0, -2.0, 1.0, 1.0, -2.0])[case]
    x1 = xa + shift
    y1 = ya + shift
    same_block = case == 2
    x1 = np.where(same_block, 1.0, x1)
    y1 = np.where(same_block, 1.0 + np.abs(xa - ya), y1)
    if x1.ndim == 0:
        return float(x1), float(y1)
    return x1, y1


def verify_substitution(samples: int = 100_000, seed: int = 42) -> VerificationReport:
    """
    substitute_pair on seeded pairs (plus every integer y): distance kept,
    both new points outside (2, 3), and neither |f| nor |g| increment lost.
    """
    rng = np.random.default_rng(seed)
    x = np.concatenate((rng.uniform(2.0, 3.0, samples), np.full(8, 2.5)))
    y = np.concatenate((rng.uniform(0.0, 7.0, samples), np.arange(8.0)))
    x1, y1 = substitute_pair(x, y)
    f, g = build_f(), build_g()

    def inside_block(t):
        return np.minimum(t - 2.0, 3.0 - t)

    excess = np.concatenate((
        np.abs(np.abs(x1 - y1) - np.abs(x - y)),
        inside_block(x1), inside_block(y1),
        -x1, -y1, x1 - 7.0, y1 - 7.0,
        np.abs(f(x) - f(y)) - np.abs(f(x1) - f(y1)),
        np.abs(g(x) - g(y)) - np.abs(g(x1) - g(y1)),
    ))
    return _report("substitution", x.size, _violation(excess), INEQUALITY_TOL)


def verify_same_modulus(grid_n: int = 20001, delta_samples: Optional[int] = None,
                        workers: int = 1) -> VerificationReport:
    """Largest |omega_f - omega_g| over shared grid deltas."""
    if grid_n < 1000:
        raise PreconditionError(f"grid_n must be at least 1000, got {grid_n}")
    lags = None
    if delta_samples is not None:
        lags = np.unique(np.linspace(0, grid_n - 1, delta_samples).round().astype(int))
    table_f = modulus_grid(build_f(), grid_n, lags=lags, workers=workers)
    table_g = modulus_grid(build_g(), grid_n, lags=lags, workers=workers)
    gap = np.abs(table_f.values - table_g.values)
    return _report("same_modulus", gap.size, float(np.max(gap)), GRID_TOL)


def verify_omega_closed_form(grid_n: int = 20001, workers: int = 1) -> VerificationReport:
    """Largest |omega_grid(g) - omega_g_closed| over the grid deltas."""
    if grid_n < 1000:
        raise PreconditionError(f"grid_n must be at least 1000, got {grid_n}")
    table = modulus_grid(build_g(), grid_n, workers=workers)
    gap = np.abs(table.values - omega_g_closed(table.deltas))
    return _report("closed_form", gap.size, float(np.max(gap)), GRID_TOL)


def verify_h_modulus(grid_n: int = 10001, workers: int = 1) -> VerificationReport:
    """Grid modulus of h (two-sided path) against f2 on [0, 1] and 1 on (1, 2]."""
    if grid_n < 1000:
        raise PreconditionError(f"grid_n must be at least 1000, got {grid_n}")
    table = modulus_grid(build_h(), grid_n, workers=workers)
    closed = np.where(table.deltas <= 1.0, f2_eval(np.minimum(table.deltas, 1.0)), 1.0)
    gap = np.abs(table.values - closed)
    return _report("h_modulus", gap.size, float(np.max(gap)), GRID_TOL)


def verify_self_modulus(level: int = 5, grid_n: int = 3 ** 7 + 1) -> VerificationReport:
    """The grid modulus of f1 agrees with f1 at every delta = k / 3**level."""
    table = modulus_grid(cantor_fn(), grid_n)
    deltas = np.arange(3 ** level + 1) / 3.0 ** level
    gap = np.abs(table.value(deltas) - cantor_eval(deltas))
    return _report("self_modulus", deltas.size, float(np.max(gap)), SELF_MODULUS_TOL)


def verify_delta_star(tol: float = 1e-12) -> VerificationReport:
    """
    delta* sits in its bracket, psi vanishes at 1 + delta*, and the two
    closed-form branches meeting there agree.
    """
    star = find_delta_star(tol)
    lo, hi = DELTA_STAR_BRACKET
    outside = max(lo - star, star - hi, 0.0)
    residual = abs(psi(1.0 + star))
    branches = abs(2.0 * f2_eval((1.0 + star) / 2.0) - 1.0 - 2.0 * f2_eval(star / 2.0))
    return _report("delta_star", 1, max(outside, residual, branches), 1e-10)


def _open_deltas(count: int) -> np.ndarray:
    return np.linspace(0.0, 7.0, count + 2)[1:-1]


def verify_boundary_below_critical(count: int = 1000) -> VerificationReport:
    """max over the boundary set <= max over the critical set, at `count` deltas."""
    deltas = _open_deltas(count)
    excess = [max_phi_boundary(d) - max_phi_critical(d) for d in deltas]
    return _report("boundary_below_critical", count, _violation(excess), 1e-9)


def verify_closed_form_candidates(count: int = 1000) -> VerificationReport:
    """omega_g_closed equals the best boundary or critical candidate."""
    deltas = _open_deltas(count)
    best = np.array([max(max_phi_boundary(d), max_phi_critical(d)) for d in deltas])
    gap = np.abs(omega_g_closed(deltas) - best)
    return _report("closed_form_candidates", count, float(np.max(gap)), 1e-9)


def verify_closed_form_continuity(delta_star: Optional[float] = None) -> VerificationReport:
    """Jumps of omega_g_closed across its case boundaries k + delta*."""
    star = find_delta_star() if delta_star is None else delta_star
    jumps = []
    for k in range(1, 6):
        at = k + star
        left = (k - 1) + 2.0 * f2_eval((at - (k - 1)) / 2.0)
        right = k + 2.0 * f2_eval((at - k) / 2.0)
        jumps.append(abs(left - right))
    return _report("closed_form_continuity", len(jumps), max(jumps), 1e-10)


@dataclass(frozen=True, eq=False)
class CoverFamily:
    """
    Pairwise disjoint closed intervals [lo[i], hi[i]], sorted.

    Stored as two arrays; ``intervals`` materialises Interval objects.
    A ternary cover also keeps its exact endpoints: interval i is
    [origin + n_i / 3**level, origin + (n_i + 1) / 3**level] with
    n_i = numerators[i], and lo / hi hold the nearest floats.
    """

    lo: np.ndarray
    hi: np.ndarray
    total_length: float = field(init=False)
    level: Optional[int] = None
    numerators: Optional[np.ndarray] = None
    origin: float = 0.0

    def __post_init__(self):
        lo = np.array(self.lo, dtype=float)
        hi = np.array(self.hi, dtype=float)
        if lo.ndim != 1 or lo.shape != hi.shape:
            raise PreconditionError("cover bounds must be matching 1-d arrays")
        if (hi < lo).any():
            raise PreconditionError("cover intervals need lo <= hi")
        if (hi[:-1] > lo[1:]).any():
            raise PreconditionError("cover intervals must be sorted and pairwise disjoint")
        if (self.level is None) != (self.numerators is None):
            raise PreconditionError("a ternary cover needs both its level and its numerators")
        if self.level is not None:
            numerators = np.array(self.numerators, dtype=np.int64)
            if self.level < 0 or numerators.shape != lo.shape:
                raise PreconditionError("ternary numerators must match the cover bounds")
            numerators.setflags(write=False)
            object.__setattr__(self, "numerators", numerators)
        lo.setflags(write=False)
        hi.setflags(write=False)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        object.__setattr__(self, "total_length", math.fsum((hi - lo).tolist()))

    def __len__(self) -> int:
        return int(self.lo.size)

    @property
    def intervals(self) -> Tuple[Interval, ...]:
        return tuple(Interval(a, b) for a, b in zip(self.lo.tolist(), self.hi.tolist()))

    @property
    def exact_bounds(self) -> Optional[Tuple[List[Fraction], List[Fraction]]]:
        """Exact (lo, hi) endpoints of a ternary cover, None otherwise."""
        if self.level is None:
            return None
        scale = 3 ** self.level
        origin = Fraction(self.origin)
        starts = self.numerators.tolist()
        return ([origin + Fraction(n, scale) for n in starts],
                [origin + Fraction(n + 1, scale) for n in starts])


def singular_cover(level: int) -> CoverFamily:
    """
    The 2**level closed intervals of stage `level` of the Cantor
    construction, translated into [2, 3]. Total length (2/3)**level.

    The cover carries its ternary numerators, so increment_sum can
    evaluate f at the exact endpoints.
    """
    if not 0 <= level <= MAX_COVER_LEVEL:
        raise PreconditionError(f"cover level must lie in [0, {MAX_COVER_LEVEL}], got {level}")
    numerators = np.zeros(1, dtype=np.int64)
    for _ in range(level):
        numerators = (numerators[:, None] * 3 + np.array([0, 2])).ravel()
    scale = 3 ** level
    base = 2 * scale
    # int / int rounds once, to the float nearest the rational
    starts = numerators.tolist()
    lo = np.array([(base + n) / scale for n in starts])
    hi = np.array([(base + n + 1) / scale for n in starts])
    return CoverFamily(lo, hi, level=level, numerators=numerators, origin=2.0)


def increment_sum(fn: PiecewiseFn, cover: CoverFamily) -> float:
    """
    Signed sum of fn(hi) - fn(lo) over the cover.

    A ternary cover is evaluated at its exact endpoints
    (PiecewiseFn.exact_values); any other cover at its float bounds.
    """
    if len(cover) == 0:
        return 0.0
    if (not fn.domain.contains(float(cover.lo[0]), DOMAIN_SLACK)
            or not fn.domain.contains(float(cover.hi[-1]), DOMAIN_SLACK)):
        raise DomainError(f"cover leaves the domain of {fn.name or 'function'}")
    exact = cover.exact_bounds
    if exact is None:
        rises = np.asarray(fn(cover.hi)) - np.asarray(fn(cover.lo))
    else:
        lo, hi = exact
        rises = fn.exact_values(hi) - fn.exact_values(lo)
    return math.fsum(rises.tolist())


def singular_profile(fn: PiecewiseFn, levels: Sequence[int] = range(13)) -> List[Tuple[float, float]]:
    """(total_length, increment_sum) of fn over each Cantor cover."""
    out = []
    for level in levels:
        cover = singular_cover(level)
        out.append((cover.total_length, increment_sum(fn, cover)))
    return out


def verify_singular_covers(max_level: int = 12) -> List[VerificationReport]:
    """
    On every Cantor cover up to max_level, f increases by 1 while g
    increases by the total length.
    """
    f, g = build_f(), build_g()
    f_gap, g_gap = [], []
    for level in range(max_level + 1):
        cover = singular_cover(level)
        f_gap.append(abs(increment_sum(f, cover) - 1.0))
        g_gap.append(abs(increment_sum(g, cover) - cover.total_length))
    return [
        _report("singular_cover_f", max_level + 1, max(f_gap), 1e-10),
        _report("singular_cover_g", max_level + 1, max(g_gap), INEQUALITY_TOL),
    ]


Target = Union[PiecewiseFn, ModulusTable]


def _target_view(target: Target) -> Tuple[float, float, Callable[[np.ndarray], np.ndarray]]:
    if isinstance(target, ModulusTable):
        return float(target.deltas[0]), float(target.deltas[-1]), target.value
    return target.domain.lo, target.domain.hi, target


def _random_family(rng: np.random.Generator, lo: float, hi: float, total: float,
                   size: int) -> Tuple[np.ndarray, np.ndarray]:
    points = np.sort(rng.uniform(lo, hi, 2 * size))
    left, right = points[0::2], points[1::2]
    widths = right - left
    covered = float(widths.sum())
    if covered >= total and covered > 0.0:
        return left, left + widths * (total / covered)
    # too little room in the draw: lay out Dirichlet widths and gaps instead
    widths = total * rng.dirichlet(np.ones(size))
    gaps = (hi - lo - total) * rng.dirichlet(np.ones(size + 1))
    left = lo + np.cumsum(gaps[:-1]) + np.concatenate(([0.0], np.cumsum(widths[:-1])))
    return left, np.minimum(left + widths, hi)


def ac_profile(target: Target, lengths: Sequence[float] = DEFAULT_LENGTHS, trials: int = 200,
               seed: int = 42, workers: int = 1,
               family_size: int = FAMILY_SIZE) -> List[Tuple[float, float]]:
    """
    Empirical absolute-continuity probe.

    For each total length, the largest increment sum sum |F(b) - F(a)| over
    `trials` seeded random disjoint families of `family_size` intervals.
    F is the function itself or, for a ModulusTable, its piecewise-linear
    interpolant. Trial t of length index i draws from
    SeedSequence(seed, spawn_key=(i, t)), so results do not depend on
    `workers`.
    """
    lengths = [float(v) for v in lengths]
    lo, hi, evaluate = _target_view(target)
    if trials < 1:
        raise PreconditionError(f"trials must be positive, got {trials}")
    if not lengths or any(b >= a for a, b in zip(lengths, lengths[1:])):
        raise PreconditionError("lengths must be nonempty and strictly decreasing")
    if lengths[0] > hi - lo or lengths[-1] <= 0.0:
        raise PreconditionError(f"lengths must lie in (0, {hi - lo}]")

    def trial_sum(index: int, total: float, trial: int) -> float:
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index, trial)))
        left, right = _random_family(rng, lo, hi, total, family_size)
        left, right = np.clip(left, lo, hi), np.clip(right, lo, hi)
        return float(np.sum(np.abs(np.asarray(evaluate(right)) - np.asarray(evaluate(left)))))

    profile = []
    for index, total in enumerate(lengths):
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                sums = list(pool.map(lambda t: trial_sum(index, total, t), range(trials)))
        else:
            sums = [trial_sum(index, total, t) for t in range(trials)]
        profile.append((total, max(sums)))
    logger.debug("ac profile: %s", ", ".join(f"{a:g}:{b:.4g}" for a, b in profile))
    return profile


def verify_ac_profile(grid_n: int = 20001, trials: int = 200, seed: int = 42,
                      lengths: Sequence[float] = DEFAULT_LENGTHS,
                      workers: int = 1) -> VerificationReport:
    """
    ac_profile of the closed-form modulus of g decreases strictly and ends
    strictly below AC_PROFILE_CAP.
    """
    profile = ac_profile(omega_g_table(grid_n), lengths, trials, seed, workers)
    sups = np.array([s for _, s in profile])
    # ties count as violations
    excess = np.concatenate((np.diff(sups), [sups[-1] - AC_PROFILE_CAP])) + np.finfo(float).tiny
    return _report("ac_profile", trials * len(profile), _violation(excess), 0.0)


def lipschitz_check(fn: PiecewiseFn, grid_n: int = 4001) -> VerificationReport:
    """
    Grid Lipschitz constants of fn and of its grid modulus agree.

    Raises:
        PreconditionError: if fn has a non-Lipschitz piece.
    """
    if not fn.is_lipschitz:
        raise PreconditionError(f"{fn.name or 'function'} has non-Lipschitz pieces")
    if grid_n < 2:
        raise PreconditionError(f"grid_n must be at least 2, got {grid_n}")
    xs = np.linspace(fn.domain.lo, fn.domain.hi, grid_n)
    spacing = xs[1] - xs[0]
    fn_const = float(np.max(np.abs(np.diff(np.asarray(fn(xs)))))) / spacing
    table = modulus_grid(fn, grid_n)
    omega_const = float(np.max(np.diff(table.values))) / spacing
    tolerance = 2.0 * spacing * max(fn_const, 1.0)
    logger.debug("lipschitz %s: fn=%.6g omega=%.6g", fn.name or "fn", fn_const, omega_const)
    return _report(f"lipschitz_{fn.name or 'fn'}", grid_n, abs(fn_const - omega_const), tolerance)


def verify_lipschitz(count: int = 10, grid_n: int = 4001, seed: int = 42) -> VerificationReport:
    """lipschitz_check on `count` seeded random piecewise-linear functions."""
    rng = np.random.default_rng(seed)
    worst, tolerance = 0.0, math.inf
    for _ in range(count):
        report = lipschitz_check(random_piecewise_linear(rng), grid_n)
        worst = max(worst, report.max_violation)
        tolerance = min(tolerance, report.tolerance)
    return _report("lipschitz", count, worst, tolerance)


def verify_concave_majorant(grid_n: int = 3 ** 7 + 1) -> VerificationReport:
    """
    The least concave majorant of the grid modulus of f1 dominates the
    table, is concave, and stays below f2 plus the grid error.
    """
    table = modulus_grid(cantor_fn(), grid_n)
    hull = concave_majorant(table)
    bound = f2_eval(table.deltas) + grid_error_bound(table.spacing)
    excess = np.concatenate((
        table.values - hull.values,
        np.diff(hull.values, 2) - 1e-12,
        hull.values - bound,
    ))
    return _report("concave_majorant", len(table), _violation(excess), 1e-12)


def verify_monotone_shortcut(fn: PiecewiseFn, grid_n: int = 4001,
                             probes: int = 257) -> VerificationReport:
    """For nondecreasing fn the one-sided and two-sided grid oracles agree."""
    if not fn.monotone_nondecreasing:
        raise PreconditionError(f"{fn.name or 'function'} is not flagged nondecreasing")
    lags = np.unique(np.linspace(0, grid_n - 1, probes).round().astype(int))
    one = modulus_grid(fn, grid_n, lags=lags)
    two = modulus_grid(fn, grid_n, lags=lags, two_sided=True)
    gap = np.abs(one.values - two.values)
    return _report(f"monotone_shortcut_{fn.name or 'fn'}", lags.size, float(np.max(gap)), 1e-12)


def run_suite(grid_n: int = 20001, samples: int = 100_000, seed: int = 42,
              delta_star_tol: float = 1e-12, h_grid_n: int = 10001,
              lipschitz_grid_n: int = 4001, ac_trials: int = 200,
              workers: int = 1) -> List[VerificationReport]:
    """Every check of the package, in a fixed order."""
    f, g, h = build_f(), build_g(), build_h()
    steps: List[Tuple[str, Callable[[], Union[VerificationReport, List[VerificationReport]]]]] = [
        ("lemma bounds", lambda: check_lemma_bounds(samples, seed)),
        ("cantor symmetry", lambda: check_cantor_symmetry(min(samples, 10_000), seed)),
        ("monotonicity", lambda: [check_monotone(f, samples, seed), check_monotone(g, samples, seed)]),
        ("self modulus", verify_self_modulus),
        ("concave majorant", verify_concave_majorant),
        ("delta*", lambda: verify_delta_star(delta_star_tol)),
        ("same modulus", lambda: verify_same_modulus(grid_n, workers=workers)),
        ("closed form", lambda: verify_omega_closed_form(grid_n, workers=workers)),
        ("closed form continuity", lambda: verify_closed_form_continuity(find_delta_star(delta_star_tol))),
        ("boundary vs critical", verify_boundary_below_critical),
        ("closed form candidates", verify_closed_form_candidates),
        ("substitution pairs", lambda: verify_substitution(samples, seed)),
        ("singular covers", verify_singular_covers),
        ("ac profile", lambda: verify_ac_profile(grid_n, ac_trials, seed, workers=workers)),
        ("h modulus", lambda: verify_h_modulus(h_grid_n, workers=workers)),
        ("lipschitz", lambda: verify_lipschitz(10, lipschitz_grid_n, seed)),
        ("table invariants", lambda: [
            check_table_invariants(modulus_grid(f, grid_n)),
            check_table_invariants(modulus_grid(g, grid_n)),
            check_table_invariants(modulus_grid(h, h_grid_n)),
        ]),
        ("monotone shortcut", lambda: [verify_monotone_shortcut(f), verify_monotone_shortcut(g)]),
    ]
    reports: List[VerificationReport] = []
    for label, step in steps:
        logger.info("running %s", label)
        result = step()
        reports.extend(result if isinstance(result, list) else [result])
    failed = [r.check_name for r in reports if not r.passed]
    logger.info("%d checks, %d failed%s", len(reports), len(failed),
                f": {', '.join(failed)}" if failed else "")
    return reports
